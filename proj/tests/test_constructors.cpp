#include <gtest/gtest.h>

#include <set>

#include "kanset/constructors.hpp"
#include "kanset/eilenberg_maclane.hpp"

using namespace kanset;

namespace {

std::size_t nondegenerate(const SimplicialSet& K, int k) {
  std::size_t n = 0;
  for (SimplexId x = 0; x < K.size(k); ++x) n += !K.is_degenerate(k, x);
  return n;
}

std::set<std::string> nondegenerate_labels(const SimplicialSet& K, int k) {
  std::set<std::string> out;
  for (SimplexId x = 0; x < K.size(k); ++x)
    if (!K.is_degenerate(k, x)) out.insert(K.label(k, x));
  return out;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST(StandardSimplex, Examples) {
  auto D1 = standard_simplex(1, 3);
  EXPECT_EQ(D1->labels(1), (std::vector<std::string>{"(0,0)", "(0,1)", "(1,1)"}));
  auto D0 = standard_simplex(0, 4);
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(D0->size(k), 1u);
  auto D2 = standard_simplex(2, 3);
  EXPECT_EQ(D2->label(1, D2->face(2, 1, *D2->find(2, "(0,1,2)"))), "(0,2)");
  // level k of Δ^n has C(n+k+1, k+1) simplices
  for (int n = 0; n <= 3; ++n)
    for (int k = 0; k <= 3; ++k) EXPECT_EQ(standard_simplex(n, 3)->size(k), binomial(n + k + 1, k + 1));
}

TEST(BoundaryAndHorn, Examples) {
  auto B2 = boundary_complex(2, 3);
  EXPECT_EQ(nondegenerate(*B2, 1), 3u);
  EXPECT_EQ(nondegenerate(*B2, 2), 0u);
  auto H = horn_complex(2, 1, 3);
  EXPECT_EQ(nondegenerate_labels(*H, 1), (std::set<std::string>{"(0,1)", "(1,2)"}));
  auto B1 = boundary_complex(1, 3);
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(B1->size(k), 2u);
}

TEST(Corpus, EveryBuiltinValidates) {
  for (int cap = 1; cap <= 4; ++cap) {
    std::vector<ComplexPtr> corpus{point(cap)};
    for (int n = 0; n <= 3; ++n) {
      corpus.push_back(standard_simplex(n, cap));
      if (n >= 1) corpus.push_back(boundary_complex(n, cap));
      for (int k = 0; k <= n && n >= 1; ++k) corpus.push_back(horn_complex(n, k, cap));
    }
    auto D1 = standard_simplex(1, cap);
    auto B2 = boundary_complex(2, cap);
    corpus.push_back(product(D1, D1));
    corpus.push_back(coproduct(B2, point(cap)));
    corpus.push_back(quotient(standard_simplex(2, cap), standard_simplex(2, cap)->subcomplex("boundary")).complex);
    corpus.push_back(cone(B2).complex);
    corpus.push_back(path_space(B2).complex);
    corpus.push_back(loop_space(B2));
    for (const auto& K : corpus) {
      auto rep = validate(*K);
      EXPECT_TRUE(rep.ok()) << K->name() << " cap " << cap << ": "
                            << (rep.ok() ? "" : rep.violations.front().describe());
    }
  }
}

TEST(Product, CountsAndUnit) {
  auto D1 = standard_simplex(1, 3);
  auto P = product(D1, D1);
  EXPECT_EQ(P->size(1), 9u);
  auto B2 = boundary_complex(2, 3);
  auto PB = product(B2, D1);
  auto C = coproduct(B2, D1);
  for (int k = 0; k <= 3; ++k) {
    EXPECT_EQ(PB->size(k), B2->size(k) * D1->size(k));
    EXPECT_EQ(C->size(k), B2->size(k) + D1->size(k));
  }
  auto unit = product(point(3), B2);
  auto [p, q] = product_projections(unit, point(3), B2);
  EXPECT_TRUE(validate_map(q).ok());
  for (int k = 0; k <= 3; ++k) {
    ASSERT_EQ(unit->size(k), B2->size(k));
    for (SimplexId x = 0; x < unit->size(k); ++x) EXPECT_EQ(q(k, x), x);
  }
  EXPECT_EQ(coproduct(point(2), point(2))->size(0), 2u);
  EXPECT_THROW(product(point(2), point(3)), ParseError);
}

TEST(Quotient, Examples) {
  auto D2 = standard_simplex(2, 3);
  auto all = quotient(D2, full_subcomplex(*D2));
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(all.complex->size(k), 1u);

  auto D1 = standard_simplex(1, 3);
  auto circle = quotient(D1, D1->subcomplex("boundary"));
  EXPECT_EQ(circle.complex->size(0), 1u);
  EXPECT_EQ(nondegenerate(*circle.complex, 1), 1u);
  EXPECT_TRUE(validate_map(circle.projection).ok());
  EXPECT_THROW(quotient(D1, empty_subcomplex(*D1)), PreconditionError);
}

TEST(Cone, Examples) {
  auto c = cone(point(3));
  EXPECT_EQ(c.complex->size(0), 2u);
  EXPECT_TRUE(validate(*c.complex).ok());
  EXPECT_TRUE(validate_map(c.inclusion).ok());
  auto B2 = boundary_complex(2, 3);
  auto cb = cone(B2);
  auto D1 = standard_simplex(1, 3);
  for (int k = 0; k <= 3; ++k)
    for (SimplexId x = 0; x < cb.cylinder->size(k); ++x) {
      SimplexId b = x % D1->size(k);
      bool top = D1->label(k, b).find('0') == std::string::npos;
      if (top) EXPECT_EQ(cb.projection(k, x), 0u);
    }
  EXPECT_THROW(cone(point(0)), PreconditionError);
}

TEST(PathSpace, Examples) {
  auto P = path_space(point(3));
  EXPECT_EQ(P.complex->cap(), 2);
  for (int k = 0; k <= 2; ++k) EXPECT_EQ(P.complex->size(k), 1u);
  EXPECT_TRUE(validate_map(P.end).ok());

  auto B2 = boundary_complex(2, 3);
  auto O = loop_space(B2);
  auto star = *B2->basepoint();
  std::size_t loops = 0;
  for (SimplexId x = 0; x < B2->size(1); ++x) loops += B2->face(1, 0, x) == star && B2->face(1, 1, x) == star;
  EXPECT_EQ(O->size(0), loops);
  SimplicialSetData d = point(2)->data();
  d.basepoint.reset();
  EXPECT_THROW(path_space(make_complex(d)), PreconditionError);
}

TEST(Truncate, Examples) {
  auto T = truncate(standard_simplex(3, 3), 2);
  EXPECT_EQ(T->size(0), 4u);
  EXPECT_EQ(T->size(1), 10u);
  EXPECT_EQ(T->size(2), 20u);
  auto K = boundary_complex(2, 3);
  EXPECT_EQ(truncate(K, 3), K);
  EXPECT_EQ(truncate(point(3), 0)->size(0), 1u);
  EXPECT_THROW(truncate(K, 4), CapTooSmall);
}

TEST(Complete, PointStaysPoint) {
  auto C = complete(truncate(point(4), 0), 4);
  for (int k = 0; k <= 4; ++k) EXPECT_EQ(C->size(k), 1u);
  EXPECT_TRUE(validate(*C).ok());
}

TEST(Complete, CycleEnumerationMatchesBruteForce) {
  for (auto K : {standard_simplex(2, 2), boundary_complex(2, 2), horn_complex(2, 1, 2), point(2)}) {
    for (int m = 0; m <= 2; ++m) {
      auto fast = enumerate_cycles(*K, m);
      auto slow = enumerate_cycles_brute_force(*K, m);
      EXPECT_EQ(fast, slow) << K->name() << " m=" << m;
    }
  }
}

TEST(Complete, EveryCycleFilledExactlyOnce) {
  auto S = truncate(boundary_complex(2, 2), 1);
  auto C = complete(S, 3);
  EXPECT_TRUE(validate(*C).ok());
  for (int k = 2; k <= 3; ++k) {
    std::set<Level> seen;
    for (SimplexId x = 0; x < C->size(k); ++x) EXPECT_TRUE(seen.insert(C->boundary(k, x)).second);
    EXPECT_EQ(seen.size(), enumerate_cycles(*C, k - 1).size());
  }
  // restriction to the skeleton is unchanged
  EXPECT_EQ(truncate(C, 1)->data().labels, S->data().labels);
  EXPECT_THROW(complete(S, 3, 5), BudgetExceeded);
}

// Maps out of Δ^n are the n-simplices of the target (Yoneda).
TEST(Adjunction, MapsOutOfSimplices) {
  auto S2 = em_skeleton(FinAbGroup::cyclic(2), 1);
  auto S3 = em_skeleton(FinAbGroup::cyclic(3), 1);
  auto a = completion_adjunction_check(standard_simplex(1, 3), S2);
  EXPECT_TRUE(a.bijection);
  EXPECT_EQ(a.maps_into_completion, S2->size(1));
  auto b = completion_adjunction_check(point(3), S3);
  EXPECT_TRUE(b.bijection);
  EXPECT_EQ(b.maps_into_completion, 1u);
  auto c = completion_adjunction_check(standard_simplex(2, 3), S3);
  EXPECT_TRUE(c.bijection);
  EXPECT_EQ(c.maps_into_completion, S3->size(2));
  EXPECT_EQ(c.skeleton_maps, c.maps_into_completion);
  EXPECT_THROW(completion_adjunction_check(point(1), S3), CapTooSmall);
}
