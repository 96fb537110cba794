#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "kanset/abelian.hpp"

using namespace kanset;

namespace {

// Fraction-free elimination, independent of the SNF code path.
BigInt bareiss_det(IntegerMatrix m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

BigInt gcd_big(BigInt a, BigInt b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != 0) {
    BigInt t = a % b;
    a = b;
    b = t;
  }
  return a;
}

IntegerMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  IntegerMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

void expect_snf_invariants(const IntegerMatrix& M) {
  auto d = smith_normal_form(M);
  EXPECT_EQ(d.U * M * d.V, d.S);
  EXPECT_EQ(abs_value(bareiss_det(d.U)), 1);
  EXPECT_EQ(abs_value(bareiss_det(d.V)), 1);
  EXPECT_EQ(d.U * d.U_inverse, IntegerMatrix::identity(M.rows()));
  EXPECT_EQ(d.V * d.V_inverse, IntegerMatrix::identity(M.cols()));
  for (std::size_t i = 0; i < d.S.rows(); ++i)
    for (std::size_t j = 0; j < d.S.cols(); ++j)
      if (i != j) EXPECT_EQ(d.S(i, j), 0);
  auto diag = d.diagonal();
  for (std::size_t i = 0; i < diag.size(); ++i) {
    EXPECT_GE(diag[i], 0);
    if (i + 1 < diag.size() && diag[i] != 0) EXPECT_EQ(diag[i + 1] % diag[i], 0);
    if (i + 1 < diag.size() && diag[i] == 0) EXPECT_EQ(diag[i + 1], 0);
  }
  std::size_t nonzero = 0;
  for (const auto& v : diag) nonzero += v != 0;
  EXPECT_EQ(nonzero, d.rank);
}

}  // namespace

TEST(ParseGroup, SingleFreeGenerator) {
  auto g = parse_group("Z");
  EXPECT_EQ(g.free_rank(), 1u);
  EXPECT_TRUE(g.torsion().empty());
}

TEST(ParseGroup, AlreadyCanonical) {
  auto g = parse_group("Z/2+Z/2");
  EXPECT_EQ(g.free_rank(), 0u);
  EXPECT_EQ(g.torsion(), (std::vector<BigInt>{2, 2}));
}

TEST(ParseGroup, ChineseRemainder) {
  // Z/2 + Z/3 has an element of order 6, so it is cyclic of order 6.
  auto g = parse_group("Z/2+Z/3");
  EXPECT_EQ(g.free_rank(), 0u);
  EXPECT_EQ(g.torsion(), (std::vector<BigInt>{6}));
  auto h = parse_group(" Z/4 + Z + Z/6 ");
  EXPECT_EQ(h.free_rank(), 1u);
  EXPECT_EQ(h.torsion(), (std::vector<BigInt>{2, 12}));
}

TEST(ParseGroup, Rejects) {
  EXPECT_THROW(parse_group(""), ParseError);
  EXPECT_THROW(parse_group("Z/1"), ParseError);
  EXPECT_THROW(parse_group("Z/0"), ParseError);
  EXPECT_THROW(parse_group("Q"), ParseError);
  EXPECT_THROW(parse_group("Z+"), ParseError);
  EXPECT_THROW(parse_group("Z/x"), ParseError);
}

TEST(ParseGroup, FormatRoundTrip) {
  for (const char* s : {"Z", "Z/2", "Z+Z/2+Z/6", "Z/2+Z/2+Z/4", "0", "Z+Z+Z"}) {
    auto g = parse_group(s);
    EXPECT_EQ(format_group(g), s);
    EXPECT_EQ(parse_group(format_group(g)), g);
  }
}

TEST(ElementOps, Examples) {
  auto z2 = parse_group("Z/2");
  EXPECT_EQ(z2.add(z2.element({1}), z2.element({1})), z2.zero());
  auto k4 = parse_group("Z/2+Z/2");
  EXPECT_EQ(k4.enumerate().size(), 4u);
  auto z6 = parse_group("Z/6");
  EXPECT_EQ(z6.neg(z6.element({2})), z6.element({4}));
  EXPECT_THROW(parse_group("Z+Z/2").enumerate(), PreconditionError);
}

TEST(ElementOps, ExhaustiveGroupAxioms) {
  for (const char* s : {"0", "Z/2", "Z/3", "Z/4", "Z/2+Z/2", "Z/2+Z/4", "Z/8+Z/8", "Z/3+Z/9"}) {
    auto g = parse_group(s);
    auto els = g.enumerate();
    std::set<GroupElement> distinct(els.begin(), els.end());
    BigInt order = 1;
    for (const auto& m : g.torsion()) order *= m;
    ASSERT_EQ(els.size(), order) << s;
    ASSERT_EQ(distinct.size(), els.size()) << s;
    ASSERT_LE(els.size(), 64u);
    for (const auto& a : els) {
      EXPECT_EQ(g.add(a, g.neg(a)), g.zero());
      EXPECT_EQ(g.add(a, g.zero()), a);
      for (const auto& b : els) {
        EXPECT_EQ(g.add(a, b), g.add(b, a));
        for (const auto& c : els) EXPECT_EQ(g.add(g.add(a, b), c), g.add(a, g.add(b, c)));
      }
    }
  }
}

TEST(IndexedGroupTest, TablesMatchArithmetic) {
  IndexedGroup g(parse_group("Z/2+Z/4"));
  ASSERT_EQ(g.size(), 8u);
  EXPECT_EQ(g.element(0), g.group().zero());
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b)
      EXPECT_EQ(g.element(g.add(a, b)), g.group().add(g.element(a), g.element(b)));
  EXPECT_EQ(g.label(0), "(0,0)");
}

TEST(SmithNormalForm, Examples) {
  auto id = smith_normal_form(IntegerMatrix::identity(3));
  EXPECT_EQ(id.S, IntegerMatrix::identity(3));

  IntegerMatrix m{{2, 4}, {6, 8}};
  auto d = smith_normal_form(m);
  // d1 = gcd of entries, d1 * d2 = |det|
  BigInt g = 0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) g = gcd_big(g, m(i, j));
  EXPECT_EQ(d.S(0, 0), g);
  EXPECT_EQ(d.S(0, 0) * d.S(1, 1), abs_value(bareiss_det(m)));
  EXPECT_EQ(d.S, (IntegerMatrix{{2, 0}, {0, 4}}));

  IntegerMatrix zero(2, 3);
  EXPECT_TRUE(smith_normal_form(zero).S.is_zero());
}

TEST(SmithNormalForm, RandomizedInvariants) {
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<int> dim(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    auto M = random_matrix(rng, dim(rng), dim(rng), -9, 9);
    expect_snf_invariants(M);
  }
  // low-rank products exercise zero diagonal tails
  for (int trial = 0; trial < 50; ++trial) {
    auto A = random_matrix(rng, 5, 2, -5, 5);
    auto B = random_matrix(rng, 2, 6, -5, 5);
    expect_snf_invariants(A * B);
  }
}

TEST(SmithNormalForm, LargeEntriesStayExact) {
  IntegerMatrix m(2, 2);
  m(0, 0) = BigInt("123456789012345678901234567890");
  m(0, 1) = BigInt("987654321098765432109876543210");
  m(1, 0) = BigInt("-55555555555555555555555");
  m(1, 1) = BigInt("77777777777777777777777777777");
  expect_snf_invariants(m);
}

TEST(Subquotient, Examples) {
  IntegerMatrix full = IntegerMatrix::identity(2);
  IntegerMatrix none(2, 0);
  EXPECT_EQ(format_group(subquotient(full, none)), "Z+Z");

  IntegerMatrix z{{1}, {0}};
  IntegerMatrix b{{2}, {0}};
  EXPECT_EQ(format_group(subquotient(z, b)), "Z/2");

  EXPECT_TRUE(subquotient(z, z).is_trivial());
}

TEST(Subquotient, ContainmentViolation) {
  IntegerMatrix z{{2}, {0}};
  IntegerMatrix b{{1}, {0}};
  EXPECT_THROW(subquotient(z, b), ValidationError);
  IntegerMatrix b2{{0}, {1}};
  EXPECT_THROW(subquotient(z, b2), ValidationError);
}

TEST(Subquotient, InvariantUnderColumnOperations) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> small(-3, 3);
  for (int trial = 0; trial < 60; ++trial) {
    auto Z = random_matrix(rng, 4, 3, -4, 4);
    auto C = random_matrix(rng, 3, 3, -3, 3);
    IntegerMatrix B = Z * C;
    auto expected = subquotient(Z, B);

    IntegerMatrix Z2 = Z, B2 = B;
    for (int op = 0; op < 8; ++op) {
      std::size_t i = rng() % Z2.cols(), j = rng() % Z2.cols();
      if (i != j) Z2.add_col_multiple(i, j, small(rng));
      std::size_t k = rng() % B2.cols(), l = rng() % B2.cols();
      if (k != l) B2.add_col_multiple(k, l, small(rng));
      if (rng() % 3 == 0) B2.swap_cols(k, l);
    }
    // redundant generators change nothing either
    IntegerMatrix B3 = B2.hconcat(B2);
    EXPECT_EQ(subquotient(Z2, B2), expected);
    EXPECT_EQ(subquotient(Z2.hconcat(Z), B3), expected);
  }
}

TEST(Subquotient, ClassifyAndGenerators) {
  // Z^2 / <(2,0),(0,3)> = Z/6
  LatticeQuotient q(IntegerMatrix::identity(2), IntegerMatrix{{2, 0}, {0, 3}});
  EXPECT_EQ(format_group(q.group()), "Z/6");
  auto gens = q.generators();
  ASSERT_EQ(gens.size(), 1u);
  auto g = q.classify(gens[0]);
  EXPECT_EQ(g.coords[0] != 0, true);
  EXPECT_TRUE(q.group().eq(q.classify({2, 0}), q.group().zero()));
  EXPECT_TRUE(q.group().eq(q.classify({0, 3}), q.group().zero()));
  // classify is additive
  auto a = q.classify({1, 0}), b = q.classify({0, 1});
  EXPECT_EQ(q.group().add(a, b), q.classify({1, 1}));
  EXPECT_EQ(q.group().scale(a, 2), q.group().zero());
}

TEST(SolveMod, Examples) {
  IntegerMatrix two{{2}};
  EXPECT_FALSE(solve_mod(two, {1}, parse_group("Z/4")).has_value());
  auto zero = solve_mod(two, {0}, parse_group("Z/4"));
  ASSERT_TRUE(zero.has_value());
  EXPECT_EQ(mod_floor(2 * (*zero)[0], 4), 0);
  for (const char* s : {"Z", "Z/2", "Z/7"}) {
    auto x = solve_mod(IntegerMatrix{{1}}, {5}, parse_group(s));
    ASSERT_TRUE(x.has_value());
    auto g = parse_group(s);
    auto got = g.element({(*x)[0].convert_to<long long>()});
    EXPECT_EQ(got, g.element({5}));
  }
}

TEST(SolveMod, AgreesWithBruteForce) {
  std::mt19937 rng(99);
  for (int q : {2, 3, 4, 6}) {
    for (int trial = 0; trial < 40; ++trial) {
      auto M = random_matrix(rng, 3, 2, -3, 3);
      std::vector<BigInt> b(3);
      for (auto& v : b) v = static_cast<int>(rng() % q);
      bool brute = false;
      for (int x0 = 0; x0 < q && !brute; ++x0)
        for (int x1 = 0; x1 < q && !brute; ++x1) {
          bool ok = true;
          for (std::size_t r = 0; r < 3; ++r) ok = ok && mod_floor(M(r, 0) * x0 + M(r, 1) * x1 - b[r], q) == 0;
          brute = ok;
        }
      auto x = solve_mod(M, b, BigInt(q));
      ASSERT_EQ(x.has_value(), brute);
      if (x) {
        auto y = M.apply(*x);
        for (std::size_t r = 0; r < 3; ++r) EXPECT_EQ(mod_floor(y[r] - b[r], q), 0);
      }
    }
  }
}

TEST(SolveMod, MixedGroupElements) {
  auto g = parse_group("Z+Z/2");
  IntegerMatrix M{{1, 1}, {0, 2}};
  std::vector<GroupElement> b{g.element({3, 1}), g.element({4, 0})};
  auto x = solve_mod_elements(M, b, g);
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(g.add((*x)[0], (*x)[1]), b[0]);
  EXPECT_EQ(g.scale((*x)[1], 2), b[1]);
  std::vector<GroupElement> bad{g.element({0, 0}), g.element({0, 1})};
  EXPECT_FALSE(solve_mod_elements(M, bad, g).has_value());
}
