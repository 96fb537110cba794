#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "kanset/constructors.hpp"
#include "kanset/io.hpp"
#include "kanset/simplicial_set.hpp"

using namespace kanset;

namespace {

SimplexId id_of(const SimplicialSet& K, int k, const std::string& label) {
  auto x = K.find(k, label);
  EXPECT_TRUE(x.has_value()) << label;
  return x.value_or(0);
}

std::vector<std::string> labels_of(const SimplicialSet& K, int k, const Level& xs) {
  std::vector<std::string> out;
  for (SimplexId x : xs) out.push_back(K.label(k, x));
  return out;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("kanset_test_" + name)).string();
}

}  // namespace

TEST(Validate, StandardSimplexAndPoint) {
  EXPECT_TRUE(validate(*standard_simplex(2, 3)).ok());
  EXPECT_TRUE(validate(*point(5)).ok());
}

TEST(Validate, CorruptedFaceIsReported) {
  auto Kp = standard_simplex(2, 3);
  const auto& K = *Kp;
  auto d = K.data();
  // d_0 of (0,1,2) should be (1,2)
  SimplexId top = id_of(K, 2, "(0,1,2)");
  d.faces[2][0][top] = id_of(K, 1, "(0,2)");
  SimplicialSet bad(d);
  auto rep = validate(bad);
  ASSERT_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.identity == 1 && v.simplex == "(0,1,2)") found = true;
  EXPECT_TRUE(found);
  for (const auto& v : rep.violations) EXPECT_FALSE(v.describe().empty());
}

TEST(Validate, EveryIdentityCanFire) {
  // Corrupt one degeneracy and check that identity (4) is named.
  auto base = standard_simplex(1, 3);
  auto d = base->data();
  d.degens[1][0][id_of(*base, 1, "(0,1)")] = id_of(*base, 2, "(0,0,0)");
  auto rep = validate(SimplicialSet(d));
  bool four = false;
  for (const auto& v : rep.violations) four = four || v.identity == 4;
  EXPECT_TRUE(four);
}

TEST(BoundaryTuple, Examples) {
  auto D = standard_simplex(2, 3);
  auto b = D->boundary(2, id_of(*D, 2, "(0,1,2)"));
  EXPECT_EQ(labels_of(*D, 1, b), (std::vector<std::string>{"(1,2)", "(0,2)", "(0,1)"}));
  SimplexId v = id_of(*D, 0, "(1)");
  EXPECT_EQ(D->boundary(1, D->degen(0, 0, v)), (Level{v, v}));
  auto P = point(3);
  EXPECT_EQ(labels_of(*P, 0, P->boundary(1, 0)), (std::vector<std::string>{"⋆0", "⋆0"}));
  EXPECT_THROW(D->boundary(0, 0), PreconditionError);
}

TEST(IsDegenerate, Examples) {
  auto D = standard_simplex(1, 3);
  auto w = D->degeneracy_witness(2, id_of(*D, 2, "(0,0,1)"));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->first, 0);
  EXPECT_EQ(D->label(1, w->second), "(0,1)");
  EXPECT_FALSE(D->is_degenerate(1, id_of(*D, 1, "(0,1)")));
  for (SimplexId x = 0; x < D->size(0); ++x) EXPECT_FALSE(D->is_degenerate(0, x));
}

TEST(Closure, Examples) {
  auto D = standard_simplex(2, 3);
  auto star = basepoint_closure(*D);
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(star.count(k), 1u);

  std::vector<SimplexRef> all;
  for (int k = 0; k <= 3; ++k)
    for (SimplexId x = 0; x < D->size(k); ++x) all.push_back({k, x});
  EXPECT_EQ(subcomplex_closure(*D, all), full_subcomplex(*D));

  // an edge: closure = nondecreasing tuples over {0,1}
  auto edge = subcomplex_closure(*D, {{1, id_of(*D, 1, "(0,1)")}});
  auto oracle = detail::nondecreasing_tuples(1, 0).size();
  EXPECT_EQ(edge.count(0), oracle);
  for (int k = 0; k <= 3; ++k) {
    EXPECT_EQ(edge.count(k), static_cast<std::size_t>(k + 2));
    for (SimplexId x = 0; x < D->size(k); ++x)
      EXPECT_EQ(edge.contains(k, x), D->label(k, x).find('2') == std::string::npos);
  }
}

TEST(Closure, IdempotentAndMonotone) {
  auto D = standard_simplex(3, 3);
  std::vector<SimplexRef> seeds{{1, 3}};
  auto a = subcomplex_closure(*D, seeds);
  std::vector<SimplexRef> again;
  for (int k = 0; k <= 3; ++k)
    for (SimplexId x = 0; x < D->size(k); ++x)
      if (a.contains(k, x)) again.push_back({k, x});
  EXPECT_EQ(subcomplex_closure(*D, again), a);
  seeds.push_back({2, 7});
  auto b = subcomplex_closure(*D, seeds);
  for (int k = 0; k <= 3; ++k)
    for (SimplexId x = 0; x < D->size(k); ++x)
      if (a.contains(k, x)) EXPECT_TRUE(b.contains(k, x));
  auto m = materialize(D, b, "sub");
  EXPECT_TRUE(validate(*m.complex).ok());
  EXPECT_TRUE(validate_map(m.inclusion).ok());
}

TEST(Maps, IdentityConstantAndFault) {
  auto D = standard_simplex(2, 3);
  EXPECT_TRUE(validate_map(identity_map(D)).ok());
  auto P = point(3);
  SimplicialMap c{D, P, {}};
  for (int k = 0; k <= 3; ++k) c.table.emplace_back(D->size(k), 0);
  EXPECT_TRUE(validate_map(c).ok());

  auto f = identity_map(D);
  f.table[2][id_of(*D, 2, "(0,1,2)")] = id_of(*D, 2, "(0,0,2)");
  EXPECT_FALSE(validate_map(f).ok());

  SimplicialMap wrong_cap{D, point(2), {}};
  EXPECT_THROW(validate_map(wrong_cap), ParseError);
}

TEST(Maps, ComposeAssociativeWithUnit) {
  auto D1 = standard_simplex(1, 2);
  std::vector<SimplicialMap> maps;
  enumerate_maps(D1, D1, [&](const SimplicialMap& f) { maps.push_back(f); });
  // maps Δ¹ → Δ¹ are the monotone maps [1] → [1]
  ASSERT_EQ(maps.size(), 3u);
  for (const auto& f : maps) {
    EXPECT_TRUE(validate_map(f).ok());
    EXPECT_EQ(compose(f, identity_map(D1)).table, f.table);
    EXPECT_EQ(compose(identity_map(D1), f).table, f.table);
    for (const auto& g : maps)
      for (const auto& h : maps) EXPECT_EQ(compose(compose(f, g), h).table, compose(f, compose(g, h)).table);
  }
  // maps Δ² → Δ¹: monotone maps [2] → [1], there are 4
  std::size_t count = enumerate_maps(standard_simplex(2, 2), D1, [](const SimplicialMap&) {});
  EXPECT_EQ(count, 4u);
}

TEST(Io, RoundTripIsByteIdentical) {
  auto D = standard_simplex(3, 3);
  std::string path = temp_path("delta3.json");
  save(*D, path);
  auto L = load(path);
  std::string again = temp_path("delta3b.json");
  save(*L, again);
  std::ifstream a(path), b(again);
  std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(sa, sb);
  EXPECT_EQ(to_canonical_string(*D), sa);
  std::remove(path.c_str());
  std::remove(again.c_str());
}

TEST(Io, MissingFaceEntryNamesField) {
  auto doc = to_json(*standard_simplex(1, 2));
  doc["faces"][0][1].erase(doc["faces"][0][1].size() - 1);
  try {
    from_json(doc);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("faces[0][1]"), std::string::npos) << e.what();
  }
}

TEST(Io, BrokenIdentityFourIsCited) {
  auto K = standard_simplex(1, 2);
  auto doc = to_json(*K);
  // s_0 of vertex (0) redirected to (0,1): d_0 s_0 (0) = (1) != (0)
  doc["degeneracies"][0][0][0] = "(0,1)";
  try {
    from_json(doc);
    FAIL() << "expected ValidationFailure";
  } catch (const ValidationFailure& e) {
    bool four = false;
    for (const auto& v : e.report().violations) four = four || v.identity == 4;
    EXPECT_TRUE(four);
    EXPECT_NE(std::string(e.what()).find("d_i s_i = id"), std::string::npos) << e.what();
  }
}

TEST(Io, RejectsUnknownFieldsAndReservedLabels) {
  auto doc = to_json(*point(1));
  doc["extra"] = 1;
  EXPECT_THROW(from_json(doc), ParseError);
  auto doc2 = to_json(*standard_simplex(0, 1));
  doc2["levels"][0][0] = "⋆1";
  doc2["degeneracies"][0][0][0] = "(0,0)";
  doc2["faces"][0][0][0] = "⋆1";
  doc2["faces"][0][1][0] = "⋆1";
  doc2["basepoint"] = "⋆1";
  EXPECT_THROW(from_json(doc2), ParseError);
  EXPECT_THROW(parse_complex("{not json"), ParseError);
  EXPECT_THROW(load("/nonexistent/file.json"), ParseError);
}
