#pragma once

// Chain complexes of pairs, homology and cohomology with f.g. coefficients,
// the connecting map, additivity and cone checks, abelianization and the
// Hurewicz map.

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "kanset/abelian.hpp"
#include "kanset/constructors.hpp"
#include "kanset/errors.hpp"
#include "kanset/homotopy_groups.hpp"
#include "kanset/simplicial_set.hpp"

namespace kanset {

/// Bases (simplices of K outside L, nondegenerate when normalized) and the
/// integer differentials D[n] : C_n → C_{n-1}; D[0] has no rows.
struct ChainComplexData {
  bool normalized = true;
  std::vector<Level> basis;
  std::vector<std::unordered_map<SimplexId, std::size_t>> position;
  std::vector<IntegerMatrix> D;

  int top() const noexcept { return static_cast<int>(basis.size()) - 1; }
  std::size_t rank(int n) const { return basis.at(n).size(); }
  std::optional<std::size_t> index_of(int n, SimplexId x) const {
    auto it = position[n].find(x);
    if (it == position[n].end()) return std::nullopt;
    return it->second;
  }
};

namespace detail {

template <class Member>
ChainComplexData build_chain_complex(const SimplicialSet& K, bool normalized, Member&& member) {
  ChainComplexData C;
  C.normalized = normalized;
  const int N = K.cap();
  for (int n = 0; n <= N; ++n) {
    Level b;
    std::unordered_map<SimplexId, std::size_t> pos;
    for (SimplexId x = 0; x < K.size(n); ++x)
      if (member(n, x) && !(normalized && K.is_degenerate(n, x))) {
        pos[x] = b.size();
        b.push_back(x);
      }
    C.basis.push_back(std::move(b));
    C.position.push_back(std::move(pos));
  }
  C.D.emplace_back(0, C.rank(0));
  for (int n = 1; n <= N; ++n) {
    IntegerMatrix M(C.rank(n - 1), C.rank(n));
    for (std::size_t c = 0; c < C.rank(n); ++c)
      for (int i = 0; i <= n; ++i)
        if (auto r = C.index_of(n - 1, K.face(n, i, C.basis[n][c]))) M(*r, c) += i % 2 == 0 ? 1 : -1;
    C.D.push_back(std::move(M));
  }
  for (int n = 1; n < N; ++n)
    if (!(C.D[n] * C.D[n + 1]).is_zero())
      throw ValidationError("chain complex of '" + K.name() + "': d_" + std::to_string(n) + " d_" +
                            std::to_string(n + 1) + " is not zero");
  return C;
}

}  // namespace detail

/// Chains of K modulo L (L may be null for the absolute complex).
inline ChainComplexData chain_complex(const SimplicialSet& K, const Subcomplex* L = nullptr, bool normalized = true) {
  return detail::build_chain_complex(K, normalized, [&](int n, SimplexId x) { return !L || !L->contains(n, x); });
}

/// Chains of the subcomplex L itself, in K's numbering.
inline ChainComplexData subcomplex_chains(const SimplicialSet& K, const Subcomplex& L, bool normalized = true) {
  return detail::build_chain_complex(K, normalized, [&](int n, SimplexId x) { return L.contains(n, x); });
}

/// A chain or cochain with coefficients in Z/modulus (Z when modulus is 0),
/// over the basis of its chain complex.
struct Chain {
  int degree = 0;
  BigInt modulus = 0;
  std::vector<BigInt> coeffs;
};

struct HomologyGroup {
  int degree = 0;
  bool cohomology = false;
  bool truncated = false;  // no boundaries from above the cap
  FinAbGroup group;
  struct Factor {
    BigInt modulus;  // 0 for a free summand of the coefficients
    std::shared_ptr<const LatticeQuotient> quotient;
  };
  std::vector<Factor> factors;
  std::vector<Chain> generators;
};

namespace detail {

/// Z/B for one cyclic coefficient: Z = {x : Dx ≡ 0}, B = im(Dup) + mZ^k.
inline std::shared_ptr<const LatticeQuotient> cyclic_subquotient(const IntegerMatrix& D, const IntegerMatrix* Dup,
                                                                  std::size_t k, const BigInt& m) {
  std::vector<std::vector<BigInt>> zs;
  if (D.rows() == 0 || k == 0) {
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<BigInt> e(k);
      e[i] = 1;
      zs.push_back(std::move(e));
    }
  } else {
    IntegerMatrix A = D;
    if (m != 0) {
      IntegerMatrix mI(D.rows(), D.rows());
      for (std::size_t i = 0; i < D.rows(); ++i) mI(i, i) = m;
      A = D.hconcat(mI);
    }
    for (auto& v : integer_kernel(A)) zs.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k));
  }
  std::vector<std::vector<BigInt>> bs;
  if (Dup)
    for (std::size_t c = 0; c < Dup->cols(); ++c) bs.push_back(Dup->column(c));
  if (m != 0)
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<BigInt> e(k);
      e[i] = m;
      bs.push_back(e);
      zs.push_back(e);
    }
  return std::make_shared<const LatticeQuotient>(IntegerMatrix::from_columns(k, zs), IntegerMatrix::from_columns(k, bs));
}

inline std::vector<BigInt> coefficient_moduli(const FinAbGroup& A) {
  std::vector<BigInt> out(A.free_rank(), 0);
  for (const auto& m : A.torsion()) out.push_back(m);
  return out;
}

inline HomologyGroup assemble(int n, bool co, bool truncated, const FinAbGroup& A,
                              const std::function<std::shared_ptr<const LatticeQuotient>(const BigInt&)>& factor) {
  HomologyGroup H;
  H.degree = n;
  H.cohomology = co;
  H.truncated = truncated;
  for (const auto& m : coefficient_moduli(A)) {
    auto q = factor(m);
    H.group = H.group.direct_sum(q->group());
    for (auto& g : q->generators()) H.generators.push_back(Chain{n, m, std::move(g)});
    H.factors.push_back({m, std::move(q)});
  }
  return H;
}

}  // namespace detail

/// H_n(C; A), summed over the cyclic factors of A.
inline HomologyGroup homology(const ChainComplexData& C, const FinAbGroup& A, int n) {
  if (n < 0 || n > C.top()) throw CapTooSmall("homology: degree " + std::to_string(n) + " outside [0, cap]");
  const bool truncated = n + 1 > C.top();
  const IntegerMatrix* up = truncated ? nullptr : &C.D[n + 1];
  return detail::assemble(n, false, truncated, A,
                          [&](const BigInt& m) { return detail::cyclic_subquotient(C.D[n], up, C.rank(n), m); });
}

/// H^n(C; A) with δ^n = D_{n+1}^T.
inline HomologyGroup cohomology(const ChainComplexData& C, const FinAbGroup& A, int n) {
  if (n < 0 || n > C.top()) throw CapTooSmall("cohomology: degree " + std::to_string(n) + " outside [0, cap]");
  const bool truncated = n + 1 > C.top();
  IntegerMatrix delta = truncated ? IntegerMatrix(0, C.rank(n)) : C.D[n + 1].transpose();
  IntegerMatrix below = C.D[n].transpose();
  return detail::assemble(n, true, truncated, A, [&](const BigInt& m) {
    return detail::cyclic_subquotient(delta, n == 0 ? nullptr : &below, C.rank(n), m);
  });
}

inline HomologyGroup homology(const SimplicialSet& K, const Subcomplex* L, const FinAbGroup& A, int n,
                              bool normalized = true) {
  return homology(chain_complex(K, L, normalized), A, n);
}

inline HomologyGroup cohomology(const SimplicialSet& K, const Subcomplex* L, const FinAbGroup& A, int n,
                                bool normalized = true) {
  return cohomology(chain_complex(K, L, normalized), A, n);
}

/// The elementary chain of a simplex (zero when it is not a basis element).
inline std::vector<BigInt> simplex_chain(const ChainComplexData& C, int n, SimplexId x) {
  std::vector<BigInt> v(C.rank(n));
  if (auto i = C.index_of(n, x)) v[*i] = 1;
  return v;
}

// ---------------------------------------------------------------------------
// Connecting map and exactness for finite coefficients
// ---------------------------------------------------------------------------

struct ConnectingMap {
  int degree = 0;
  BigInt modulus;
  FinAbGroup source;  // H_n(K, L)
  FinAbGroup target;  // H_{n-1}(L)
  std::vector<GroupElement> generator_images;
  bool well_defined = true;
};

namespace detail {

/// The pieces of the homology sequence of (K, L) with cyclic coefficients.
struct PairChains {
  ChainComplexData K, L, rel;
};

inline PairChains pair_chains(const SimplicialSet& K, const Subcomplex& L, bool normalized) {
  return {chain_complex(K, nullptr, normalized), subcomplex_chains(K, L, normalized), chain_complex(K, &L, normalized)};
}

// Transfer a chain between two bases of K's simplices (dropping missing ones).
inline std::vector<BigInt> transfer(const ChainComplexData& from, const ChainComplexData& to, int n,
                                    const std::vector<BigInt>& v) {
  std::vector<BigInt> out(to.rank(n));
  for (std::size_t i = 0; i < v.size(); ++i)
    if (auto j = to.index_of(n, from.basis[n][i])) out[*j] += v[i];
  return out;
}

inline std::vector<BigInt> reduce_mod(std::vector<BigInt> v, const BigInt& m) {
  if (m != 0)
    for (auto& x : v) x = mod_floor(x, m);
  return v;
}

// The full differential of K applied to a relative chain, read in L.
inline std::vector<BigInt> connecting_chain(const PairChains& P, int n, const std::vector<BigInt>& rel_chain,
                                            const BigInt& m) {
  auto in_K = transfer(P.rel, P.K, n, rel_chain);
  auto d = P.K.D[n].apply(in_K);
  return reduce_mod(transfer(P.K, P.L, n - 1, d), m);
}

}  // namespace detail

/// ∂ : H_n(K, L; Z/m) → H_{n-1}(L; Z/m) on generators; m = 0 means Z.
inline ConnectingMap connecting_map(const SimplicialSet& K, const Subcomplex& L, const BigInt& m, int n,
                                    bool normalized = true) {
  if (n < 1) throw PreconditionError("connecting map needs n >= 1");
  auto P = detail::pair_chains(K, L, normalized);
  const auto A = m == 0 ? FinAbGroup::integers() : FinAbGroup::cyclic(m);
  auto Hrel = homology(P.rel, A, n);
  auto HL = homology(P.L, A, n - 1);
  const auto& qrel = *Hrel.factors.at(0).quotient;
  const auto& qL = *HL.factors.at(0).quotient;
  ConnectingMap c{n, m, qrel.group(), qL.group(), {}, true};
  for (const auto& g : qrel.generators()) c.generator_images.push_back(qL.classify(detail::connecting_chain(P, n, g, m)));
  // relative boundaries go to zero
  if (n + 1 <= P.rel.top())
    for (std::size_t col = 0; col < P.rel.D[n + 1].cols(); ++col) {
      auto b = P.rel.D[n + 1].column(col);
      if (qL.classify(detail::connecting_chain(P, n, b, m)) != qL.group().zero()) c.well_defined = false;
    }
  return c;
}

struct HomologyExactnessReport {
  bool passed = true;
  std::vector<ExactnessNode> nodes;
};

/// Exactness of ... → H_n(L) → H_n(K) → H_n(K,L) → H_{n-1}(L) → ... → H_0(K,L) → 0
/// with Z/m coefficients (m >= 2), by enumerating the finite groups, degrees <= max_degree.
inline HomologyExactnessReport homology_exactness_check(const SimplicialSet& K, const Subcomplex& L, const BigInt& m,
                                                        int max_degree, bool normalized = true) {
  if (m < 2) throw PreconditionError("homology exactness check needs finite coefficients");
  if (max_degree + 1 > K.cap()) throw CapTooSmall("homology exactness check: degree too high for the cap");
  auto P = detail::pair_chains(K, L, normalized);
  const auto A = FinAbGroup::cyclic(m);
  struct Node {
    std::shared_ptr<const LatticeQuotient> q;
    const ChainComplexData* C;
    std::vector<GroupElement> elems;
    std::vector<std::vector<BigInt>> reps;
  };
  auto node_of = [&](const ChainComplexData& C, int n) {
    Node nd{homology(C, A, n).factors.at(0).quotient, &C, {}, {}};
    auto gens = nd.q->generators();
    for (const auto& e : nd.q->group().enumerate()) {
      std::vector<BigInt> v(C.rank(n));
      for (std::size_t g = 0; g < gens.size(); ++g)
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += e.coords[g] * gens[g][i];
      nd.elems.push_back(e);
      nd.reps.push_back(detail::reduce_mod(std::move(v), m));
    }
    return nd;
  };
  HomologyExactnessReport rep;
  auto check = [&](std::string name, const Node& mid, const Node& src, const std::function<std::vector<BigInt>(const std::vector<BigInt>&)>& in,
                   const Node& dst, const std::function<std::vector<BigInt>(const std::vector<BigInt>&)>& out) {
    std::set<GroupElement> image, kernel;
    for (const auto& r : src.reps) image.insert(mid.q->classify(in(r)));
    for (std::size_t i = 0; i < mid.reps.size(); ++i)
      if (dst.q->classify(out(mid.reps[i])) == dst.q->group().zero()) kernel.insert(mid.elems[i]);
    ExactnessNode e{std::move(name), image == kernel, image.size(), kernel.size()};
    if (!e.exact) rep.passed = false;
    rep.nodes.push_back(std::move(e));
  };
  std::vector<Node> hL, hK, hR;
  for (int n = 0; n <= max_degree; ++n) {
    hL.push_back(node_of(P.L, n));
    hK.push_back(node_of(P.K, n));
    hR.push_back(node_of(P.rel, n));
  }
  for (int n = max_degree; n >= 0; --n) {
    auto i_ = [&, n](const std::vector<BigInt>& v) { return detail::transfer(P.L, P.K, n, v); };
    auto j_ = [&, n](const std::vector<BigInt>& v) { return detail::transfer(P.K, P.rel, n, v); };
    auto d_ = [&, n](const std::vector<BigInt>& v) { return detail::connecting_chain(P, n, v, m); };
    const std::string s = std::to_string(n);
    check("H_" + s + "(K)", hK[n], hL[n], i_, hR[n], j_);
    if (n >= 1) {
      check("H_" + s + "(K,L)", hR[n], hK[n], j_, hL[n - 1], d_);
      auto i_low = [&, n](const std::vector<BigInt>& v) { return detail::transfer(P.L, P.K, n - 1, v); };
      check("H_" + std::to_string(n - 1) + "(L)", hL[n - 1], hR[n], d_, hK[n - 1], i_low);
    }
  }
  // H_0(K) → H_0(K,L) is onto
  std::set<GroupElement> image;
  for (const auto& r : hK[0].reps) image.insert(hR[0].q->classify(detail::transfer(P.K, P.rel, 0, r)));
  ExactnessNode e{"H_0(K,L)", image.size() == hR[0].elems.size(), image.size(), hR[0].elems.size()};
  if (!e.exact) rep.passed = false;
  rep.nodes.push_back(std::move(e));
  return rep;
}

// ---------------------------------------------------------------------------
// Eilenberg-Steenrod spot checks
// ---------------------------------------------------------------------------

struct AdditivityReport {
  bool passed = true;
  std::vector<FinAbGroup> coproduct_groups;  // per degree
  std::vector<FinAbGroup> summed_groups;
};

/// H_n of the coproduct against the sum of the H_n, degrees 0..cap-1.
inline AdditivityReport additivity_check(const std::vector<ComplexPtr>& Ks, const FinAbGroup& A) {
  if (Ks.empty()) throw PreconditionError("additivity_check: empty list");
  ComplexPtr U = Ks.front();
  for (std::size_t i = 1; i < Ks.size(); ++i) U = coproduct(U, Ks[i]);
  AdditivityReport rep;
  for (int n = 0; n + 1 <= U->cap(); ++n) {
    FinAbGroup sum;
    for (const auto& K : Ks) sum = sum.direct_sum(homology(*K, nullptr, A, n).group);
    auto whole = homology(*U, nullptr, A, n).group;
    rep.coproduct_groups.push_back(whole);
    rep.summed_groups.push_back(sum);
    if (!(whole == sum)) rep.passed = false;
  }
  return rep;
}

struct AcyclicityReport {
  bool passed = true;
  std::vector<FinAbGroup> groups;  // H_n(cone K; Z), n < cap-1
};

inline AcyclicityReport cone_acyclicity_check(const ComplexPtr& K) {
  auto C = cone(K).complex;
  AcyclicityReport rep;
  auto chains = chain_complex(*C);
  for (int n = 0; n < std::max(1, C->cap() - 1); ++n) {
    auto H = homology(chains, FinAbGroup::integers(), n).group;
    rep.groups.push_back(H);
    const bool ok = n == 0 ? H == FinAbGroup::integers() : H.is_trivial();
    if (!ok) rep.passed = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Abelianization and Hurewicz
// ---------------------------------------------------------------------------

struct Abelianization {
  FinAbGroup group;
  std::vector<GroupElement> projection;  // class -> element
};

/// Z^{classes} modulo e_a + e_b - e_{ab}.
inline Abelianization abelianization(const std::vector<std::vector<std::size_t>>& mult) {
  const std::size_t c = mult.size();
  std::vector<std::vector<BigInt>> rels;
  for (std::size_t a = 0; a < c; ++a)
    for (std::size_t b = 0; b < c; ++b) {
      std::vector<BigInt> r(c);
      r[a] += 1;
      r[b] += 1;
      r[mult[a][b]] -= 1;
      rels.push_back(std::move(r));
    }
  LatticeQuotient q(IntegerMatrix::identity(c), IntegerMatrix::from_columns(c, rels));
  Abelianization ab{q.group(), {}};
  for (std::size_t a = 0; a < c; ++a) {
    std::vector<BigInt> e(c);
    e[a] = 1;
    ab.projection.push_back(q.classify(e));
  }
  return ab;
}

inline Abelianization abelianization(const HomotopyGroupTable& T) {
  if (!T.has_product) throw PreconditionError("abelianization: table has no product");
  return abelianization(T.mult);
}

struct HurewiczImage {
  std::size_t source_class = 0;
  GroupElement image;  // in H_n(K; Z), normalized pipeline
};

struct HurewiczReport {
  int n = 0;
  bool precondition = false;  // K_k = {⋆} for k < n
  bool representative_independent = true;
  bool pipelines_agree = true;  // normalized and unnormalized images correspond
  bool homomorphism = true;
  bool bijective = false;
  bool passed = false;
  FinAbGroup homotopy;  // abelianized when n = 1
  FinAbGroup homology;
  std::vector<HurewiczImage> images;
  std::vector<std::string> warnings;
};

/// φ([x]) = [x] ∈ H_n(K; Z) on every homotopy class. With unnormalized
/// chains and n even, x - ⋆_n is the cycle (∂x = ⋆_{n-1} = ∂⋆_n).
inline std::vector<HurewiczImage> hurewicz_map(const HomotopyGroupTable& T, const ChainComplexData& C,
                                               const LatticeQuotient& H, bool* independent = nullptr,
                                               std::optional<SimplexId> star = std::nullopt) {
  const bool shift = star && !C.normalized && T.n % 2 == 0;
  std::vector<HurewiczImage> out;
  for (std::size_t c = 0; c < T.size(); ++c) {
    std::optional<GroupElement> img;
    for (SimplexId x : T.classes[c]) {
      auto v = simplex_chain(C, T.n, x);
      if (shift) {
        auto s = simplex_chain(C, T.n, *star);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= s[i];
      }
      auto e = H.classify(v);
      if (img && *img != e && independent) *independent = false;
      if (!img) img = e;
    }
    out.push_back({c, *img});
  }
  return out;
}

inline HurewiczReport hurewicz_check(const FillingIndex& F, int n, const HomotopyOptions& opt = {}) {
  const auto& K = F.complex();
  if (n < 1) throw PreconditionError("hurewicz_check: n must be at least 1");
  HurewiczReport rep;
  rep.n = n;
  rep.precondition = true;
  for (int k = 0; k < n; ++k)
    if (K.size(k) != 1) rep.precondition = false;
  if (!rep.precondition)
    rep.warnings.push_back("levels below " + std::to_string(n) +
                           " are not the basepoint alone; only the homomorphism law is checked");
  auto T = homotopy_group(F, n, opt);
  for (const auto& w : T.warnings) rep.warnings.push_back(w);
  auto Cn = chain_complex(K, nullptr, true);
  auto Cu = chain_complex(K, nullptr, false);
  auto Hn = homology(Cn, FinAbGroup::integers(), n);
  auto Hu = homology(Cu, FinAbGroup::integers(), n);
  if (Hn.truncated) rep.warnings.push_back("H_" + std::to_string(n) + " computed without boundaries from above the cap");
  const auto& qn = *Hn.factors.at(0).quotient;
  const auto& qu = *Hu.factors.at(0).quotient;
  rep.homology = qn.group();
  rep.images = hurewicz_map(T, Cn, qn, &rep.representative_independent);
  std::optional<SimplexId> star;
  if (K.basepoint()) star = K.basepoint_at(n);
  auto unnormalized = hurewicz_map(T, Cu, qu, &rep.representative_independent, star);
  // the two pipelines must induce the same partition of the classes
  for (std::size_t a = 0; a < T.size(); ++a)
    for (std::size_t b = 0; b < T.size(); ++b)
      if ((rep.images[a].image == rep.images[b].image) != (unnormalized[a].image == unnormalized[b].image))
        rep.pipelines_agree = false;
  // the basepoint class goes to zero in both
  if (rep.images[T.identity].image != qn.group().zero() || unnormalized[T.identity].image != qu.group().zero())
    rep.pipelines_agree = false;
  const auto& G = qn.group();
  for (std::size_t a = 0; a < T.size(); ++a)
    for (std::size_t b = 0; b < T.size(); ++b)
      if (G.add(rep.images[a].image, rep.images[b].image) != rep.images[T.mult[a][b]].image) rep.homomorphism = false;
  // φ factors through the abelianization; compare the induced map on it
  auto ab = abelianization(T);
  rep.homotopy = ab.group;
  std::map<GroupElement, GroupElement> induced;
  bool factors = true;
  for (std::size_t c = 0; c < T.size(); ++c) {
    auto [it, fresh] = induced.emplace(ab.projection[c], rep.images[c].image);
    if (!fresh && it->second != rep.images[c].image) factors = false;
  }
  std::set<GroupElement> hit;
  for (const auto& [_, v] : induced) hit.insert(v);
  rep.bijective = factors && G.is_finite() && hit.size() == induced.size() &&
                  BigInt(static_cast<long long>(hit.size())) == G.order();
  rep.passed = rep.representative_independent && rep.pipelines_agree && rep.homomorphism &&
               (rep.precondition ? rep.bijective : true);
  return rep;
}

}  // namespace kanset
