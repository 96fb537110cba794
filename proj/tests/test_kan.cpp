#include <gtest/gtest.h>

#include <random>

#include "kanset/eilenberg_maclane.hpp"
#include "kanset/kan.hpp"

using namespace kanset;

namespace {

SimplexId id(const SimplicialSet& K, int k, const std::string& label) {
  auto x = K.find(k, label);
  EXPECT_TRUE(x.has_value()) << label;
  return x.value_or(0);
}

// Every (m, gap)-horn by the full product of level m.
std::vector<Level> horns_brute_force(const SimplicialSet& K, int m, int gap) {
  std::vector<Level> out;
  const std::size_t s = K.size(m);
  Level t(m + 2, 0);
  for (;;) {
    if (t[gap] == 0 && is_horn(K, m, t, gap).ok) out.push_back(t);
    int p = m + 1;
    while (p >= 0 && t[p] + 1 == s) t[p--] = 0;
    if (p < 0) return out;
    ++t[p];
  }
}

// Fillings by scanning the whole level.
Level fillings_brute_force(const SimplicialSet& K, int m, const Level& cycle) {
  Level out;
  for (SimplexId z = 0; z < K.size(m + 1); ++z)
    if (K.boundary(m + 1, z) == cycle) out.push_back(z);
  return out;
}

FinAbGroup Z(long long m) { return FinAbGroup::cyclic(m); }

}  // namespace

TEST(Cycles, BoundariesAreCycles) {
  auto K = standard_simplex(2, 3);
  for (int k = 1; k <= 3; ++k)
    for (SimplexId x = 0; x < K->size(k); ++x) EXPECT_TRUE(is_cycle(*K, k - 1, K->boundary(k, x)).ok);
}

TEST(Cycles, HandCheckedTriangle) {
  auto K = standard_simplex(2, 2);
  Level c{id(*K, 1, "(1,2)"), id(*K, 1, "(0,2)"), id(*K, 1, "(0,1)")};
  EXPECT_TRUE(is_cycle(*K, 1, c).ok);
  std::swap(c[0], c[2]);
  auto r = is_cycle(*K, 1, c);
  EXPECT_FALSE(r.ok);
  ASSERT_TRUE(r.violated.has_value());
  EXPECT_LT(r.violated->first, r.violated->second);
}

TEST(Fillings, Examples) {
  auto D = standard_simplex(2, 2);
  FillingIndex FD(D);
  Level c{id(*D, 1, "(1,2)"), id(*D, 1, "(0,2)"), id(*D, 1, "(0,1)")};
  auto f = FD.find_filling(1, c);
  ASSERT_TRUE(f);
  EXPECT_EQ(D->label(2, *f), "(0,1,2)");

  auto B = boundary_complex(2, 2);
  FillingIndex FB(B);
  Level cb{id(*B, 1, "(1,2)"), id(*B, 1, "(0,2)"), id(*B, 1, "(0,1)")};
  EXPECT_FALSE(FB.find_filling(1, cb));
  EXPECT_TRUE(fillings_brute_force(*B, 1, cb).empty());

  auto P = point(1);
  FillingIndex FP(P);
  auto fp = FP.find_filling(0, {0, 0});
  ASSERT_TRUE(fp);
  EXPECT_EQ(P->label(1, *fp), "⋆1");
  EXPECT_THROW(FP.find_filling(1, {0, 0, 0}), CapTooSmall);
}

TEST(Fillings, CompletionsMatchBruteForce) {
  auto E = em_space(Z(3), 1, 3).complex;
  FillingIndex F(E);
  for (int gap = 0; gap <= 2; ++gap)
    for (const auto& h : horns_brute_force(*E, 1, gap)) {
      auto got = find_completions(F, 1, h, gap);
      std::vector<std::pair<SimplexId, SimplexId>> want;
      for (SimplexId z = 0; z < E->size(2); ++z) {
        bool ok = true;
        for (int i = 0; i <= 2 && ok; ++i)
          if (i != gap) ok = E->face(2, i, z) == h[i];
        if (ok) want.push_back({E->face(2, gap, z), z});
      }
      ASSERT_EQ(got.size(), want.size());
      for (std::size_t p = 0; p < got.size(); ++p) {
        EXPECT_EQ(got[p].completion, want[p].first);
        EXPECT_EQ(got[p].filling, want[p].second);
      }
    }
}

TEST(Kan, NonKanExamplesFail) {
  for (auto K : {standard_simplex(2, 2), boundary_complex(2, 2), horn_complex(2, 1, 2)}) {
    FillingIndex F(K);
    auto rep = kan_check(F, 1);
    EXPECT_FALSE(rep.passed) << K->name();
    ASSERT_TRUE(rep.counterexample);
    const auto& ce = *rep.counterexample;
    EXPECT_TRUE(is_horn(*K, ce.dim, ce.entries, ce.gap).ok);
    EXPECT_TRUE(find_completions(F, ce.dim, ce.entries, ce.gap).empty());
  }
}

TEST(Kan, PointAndEmSpacePass) {
  EXPECT_TRUE(kan_check(point(3), 2).passed);
  auto E = em_space(Z(2), 1, 3).complex;
  auto rep = kan_check(E, 2);
  EXPECT_TRUE(rep.passed);
  std::size_t expected = 0;
  for (int m = 0; m <= 2; ++m)
    for (int gap = 0; gap <= m + 1; ++gap) expected += horns_brute_force(*E, m, gap).size();
  EXPECT_EQ(rep.horns_checked, expected);
  EXPECT_THROW(kan_check(E, 3), CapTooSmall);
}

TEST(Kan, CounterexampleIsFirstInOrder) {
  auto K = horn_complex(2, 1, 2);
  FillingIndex F(*&K);
  auto rep = kan_check(F, 1);
  ASSERT_TRUE(rep.counterexample);
  std::optional<HornCounterexample> first;
  for (int m = 0; m <= 1 && !first; ++m)
    for (int gap = 0; gap <= m + 1 && !first; ++gap)
      for (const auto& h : horns_brute_force(*K, m, gap))
        if (fillings_brute_force(*K, m, h).empty() && find_completions(F, m, h, gap).empty()) {
          first = HornCounterexample{m, gap, h};
          break;
        }
  ASSERT_TRUE(first);
  EXPECT_EQ(rep.counterexample->dim, first->dim);
  EXPECT_EQ(rep.counterexample->gap, first->gap);
  EXPECT_EQ(rep.counterexample->entries, first->entries);
}

TEST(Kan, DeterministicAcrossThreads) {
  auto K = product(boundary_complex(2, 3), standard_simplex(1, 3));
  set_threads(1);
  auto a = kan_check(K, 2);
  set_threads(4);
  auto b = kan_check(K, 2);
  set_threads(1);
  EXPECT_EQ(a.passed, b.passed);
  EXPECT_EQ(a.horns_checked, b.horns_checked);
  ASSERT_EQ(a.counterexample.has_value(), b.counterexample.has_value());
  if (a.counterexample) EXPECT_EQ(a.counterexample->entries, b.counterexample->entries);
}

TEST(Skeleton, EmSkeletonPassesBothChecks) {
  for (auto A : {Z(2), Z(3)}) {
    auto S = em_skeleton(A, 1);
    EXPECT_TRUE(kan_skeleton_check(S).passed);
    EXPECT_TRUE(minimal_check(FillingIndex(S), true).passed);
  }
}

TEST(Skeleton, DeltaOneOneSkeletonFails) {
  auto rep = kan_skeleton_check(standard_simplex(1, 1));
  EXPECT_FALSE(rep.passed);
  EXPECT_TRUE(rep.uncompletable.has_value());
}

TEST(Skeleton, PointPasses) {
  EXPECT_TRUE(kan_skeleton_check(point(0)).passed);
  EXPECT_TRUE(kan_skeleton_check(point(2)).passed);
  EXPECT_TRUE(minimal_check(FillingIndex(point(2)), true).passed);
}

TEST(Minimal, DeltaOneIsNotMinimal) {
  // the edge (0,1) makes its two vertices homotopic
  auto rep = minimal_check(FillingIndex(standard_simplex(1, 2)));
  EXPECT_FALSE(rep.passed);
  ASSERT_TRUE(rep.witness);
  EXPECT_EQ(rep.witness->first.dim, 0);
  auto E = em_space(Z(2), 1, 3).complex;
  EXPECT_TRUE(minimal_check(FillingIndex(E)).passed);
}

TEST(Homotopic, ReflexiveWitnessIsDegeneracy) {
  auto E = em_space(Z(3), 1, 3).complex;
  FillingIndex F(E);
  for (int n = 0; n <= 2; ++n)
    for (SimplexId x = 0; x < E->size(n); ++x) {
      auto h = homotopic(F, n, x, x);
      ASSERT_TRUE(h);
      EXPECT_EQ(*h, E->degen(n, n, x));
    }
}

TEST(Homotopic, DistinctGroupElementsAreNotHomotopic) {
  auto E = em_space(Z(3), 1, 3).complex;
  FillingIndex F(E);
  for (SimplexId a = 0; a < 3; ++a)
    for (SimplexId b = 0; b < 3; ++b) EXPECT_EQ(homotopic(F, 1, a, b).has_value(), a == b);
}

TEST(Homotopic, RelativeToBasepointMatchesAbsolute) {
  auto E = em_space(Z(2), 1, 3).complex;
  FillingIndex F(E);
  auto L = basepoint_closure(*E);
  for (int n = 1; n <= 2; ++n)
    for (SimplexId x = 0; x < E->size(n); ++x)
      for (SimplexId y = 0; y < E->size(n); ++y) {
        bool eligible = true;
        for (int i = 0; i <= n; ++i)
          eligible = eligible && E->face(n, i, x) == E->basepoint_at(n - 1) && E->face(n, i, y) == E->basepoint_at(n - 1);
        if (!eligible) continue;
        EXPECT_EQ(homotopic_rel(F, L, n, x, y).has_value(), homotopic(F, n, x, y).has_value());
      }
}

TEST(Homotopic, RelativeByFiat) {
  auto D = standard_simplex(1, 2);
  FillingIndex F(D);
  auto L = subcomplex_closure(*D, {{0, 0}});
  SimplexId x = id(*D, 1, "(1,1)");
  auto w = homotopic_rel(F, L, 1, x, x);
  ASSERT_TRUE(w);
  EXPECT_TRUE(w->by_fiat);
}

TEST(Homotopic, KeyLemmaOnEmSpaces) {
  for (auto A : {Z(2), Z(3)}) {
    auto E = em_space(A, 1, 3).complex;
    FillingIndex F(E);
    for (SimplexId z = 0; z < E->size(2); ++z) {
      const Level c = E->boundary(2, z);
      for (int p = 0; p <= 2; ++p)
        for (SimplexId y = 0; y < E->size(1); ++y) {
          if (E->boundary(1, y) != E->boundary(1, c[p])) continue;
          Level c2 = c;
          c2[p] = y;
          const bool filled = !fillings_brute_force(*E, 1, c2).empty();
          EXPECT_EQ(filled, homotopic(F, 1, c[p], y).has_value());
        }
    }
  }
}

TEST(MatrixLemma, DegenerateInstance) {
  auto E = em_space(Z(2), 1, 3).complex;
  FillingIndex F(E);
  const SimplexId s = E->basepoint_at(2);
  std::vector<Level> cycles(4, E->boundary(2, s));
  for (int k = 0; k < 4; ++k) {
    SimplexId y = matrix_lemma_solve(F, 1, cycles, k);
    EXPECT_EQ(E->boundary(2, y), cycles[k]);
    EXPECT_TRUE(E->is_degenerate(2, y));
  }
}

TEST(MatrixLemma, RandomCompatibleTuples) {
  auto E = em_space(Z(2), 1, 3).complex;
  FillingIndex F(E);
  std::mt19937_64 rng(20261016);
  int solved = 0;
  while (solved < 100) {
    const int k = static_cast<int>(rng() % 4);
    auto cycles = random_compatible_cycles(*E, 1, k, rng);
    ASSERT_TRUE(cycles);
    SimplexId y = matrix_lemma_solve(F, 1, *cycles, k);
    auto want = fillings_brute_force(*E, 1, (*cycles)[k]);
    ASSERT_FALSE(want.empty());
    EXPECT_NE(std::find(want.begin(), want.end(), y), want.end());
    ++solved;
  }
}

TEST(MatrixLemma, CompatibilityViolationIsNamed) {
  auto E = em_space(Z(2), 1, 3).complex;
  FillingIndex F(E);
  std::mt19937_64 rng(7);
  auto cycles = *random_compatible_cycles(*E, 1, 0, rng);
  // replace cycle 3 by a cycle with a different first entry
  for (SimplexId z = 0; z < E->size(2); ++z) {
    auto b = E->boundary(2, z);
    if (b[0] != cycles[3][0]) {
      cycles[3] = b;
      break;
    }
  }
  try {
    matrix_lemma_solve(F, 1, cycles, 0);
    FAIL() << "expected a compatibility error";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("compatibility"), std::string::npos);
  }
}

TEST(EmSkeleton, LevelSizes) {
  struct Case {
    FinAbGroup A;
    int n;
  };
  for (const auto& c : {Case{Z(2), 1}, Case{Z(3), 1}, Case{Z(4), 1}, Case{parse_group("Z/2+Z/2"), 1}, Case{Z(2), 2}}) {
    auto S = em_skeleton(c.A, c.n);
    EXPECT_TRUE(validate(*S).ok());
    long long g = c.A.order().convert_to<long long>();
    long long want = 1;
    for (int i = 0; i <= c.n; ++i) want *= g;
    EXPECT_EQ(S->size(c.n + 1), static_cast<std::size_t>(want));
    EXPECT_EQ(S->size(c.n), static_cast<std::size_t>(g));
    for (int k = 0; k < c.n; ++k) EXPECT_EQ(S->size(k), 1u);
  }
  EXPECT_THROW(em_skeleton(FinAbGroup::integers(), 1), PreconditionError);
}

TEST(EmSkeleton, ZTwoLevelTwoSolvesEquation) {
  auto S = em_skeleton(Z(2), 1);
  ASSERT_EQ(S->size(2), 4u);
  for (SimplexId z = 0; z < 4; ++z) {
    auto b = S->boundary(2, z);
    EXPECT_EQ((b[0] + b[2]) % 2, b[1] % 2);
  }
}

TEST(EmSkeleton, TopHornsCompleteUniquely) {
  for (auto A : {Z(2), Z(3), Z(4)}) {
    auto S = em_skeleton(A, 1);
    FillingIndex F(S);
    for (int gap = 0; gap <= 2; ++gap)
      for (const auto& h : horns_brute_force(*S, 1, gap)) EXPECT_EQ(find_completions(F, 1, h, gap).size(), 1u);
  }
}

TEST(EmSpace, CompletedLevelMatchesBruteForce) {
  auto E = em_space(Z(2), 2, 4).complex;
  EXPECT_TRUE(validate(*E).ok());
  auto S = truncate(E, 3);
  EXPECT_EQ(E->size(4), enumerate_cycles_brute_force(*S, 3).size());
  EXPECT_TRUE(kan_check(E, 3).passed);
  EXPECT_TRUE(minimal_check(FillingIndex(E)).passed);
}

TEST(EmSpace, GrowthBoundWarns) {
  auto E = em_space(Z(2), 1, 3, 10);
  EXPECT_FALSE(E.warnings.empty());
  EXPECT_THROW(em_space(Z(2), 1, 4, 5), BudgetExceeded);
}

TEST(Mu, ValidIdentityAssociativeCommutative) {
  auto E = em_space(Z(2), 1, 3);
  auto m = mu(E);
  EXPECT_TRUE(validate_map(m).ok());
  const auto& H = *E.complex;
  for (int k = 0; k <= H.cap(); ++k) {
    const SimplexId e = H.basepoint_at(k);
    for (SimplexId a = 0; a < H.size(k); ++a) {
      EXPECT_EQ(mu_at(m, k, a, e), a);
      for (SimplexId b = 0; b < H.size(k); ++b) {
        EXPECT_EQ(mu_at(m, k, a, b), mu_at(m, k, b, a));
        for (SimplexId c = 0; c < H.size(k); ++c)
          EXPECT_EQ(mu_at(m, k, mu_at(m, k, a, b), c), mu_at(m, k, a, mu_at(m, k, b, c)));
      }
    }
  }
}

TEST(Mu, LevelTwoPreservesAlternatingSum) {
  auto E = em_space(Z(2), 1, 3);
  auto m = mu(E);
  const auto& H = *E.complex;
  for (SimplexId a = 0; a < H.size(2); ++a)
    for (SimplexId b = 0; b < H.size(2); ++b) {
      auto c = H.boundary(2, mu_at(m, 2, a, b));
      EXPECT_EQ((c[0] + c[1] + c[2]) % 2, 0u);
      for (int i = 0; i <= 2; ++i) EXPECT_EQ(c[i], (H.face(2, i, a) + H.face(2, i, b)) % 2);
    }
}
