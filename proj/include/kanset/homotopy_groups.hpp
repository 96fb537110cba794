#pragma once

// Homotopy groups (absolute and relative) as explicit finite tables, induced
// maps, the boundary map of a pair and exactness of its sequence.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kanset/constructors.hpp"
#include "kanset/errors.hpp"
#include "kanset/kan.hpp"
#include "kanset/simplicial_set.hpp"

namespace kanset {

struct HomotopyGroupTable {
  int n = 0;
  bool relative = false;
  std::vector<Level> classes;  // sorted members, classes ordered by least member
  std::unordered_map<SimplexId, std::size_t> class_of;
  std::size_t identity = 0;
  bool has_product = false;  // false for π_0 and relative π_1
  std::vector<std::vector<std::size_t>> mult;
  std::vector<std::size_t> inverse;
  bool axioms_ok = false;
  bool abelian = false;
  bool product_well_defined = true;
  bool raw_equivalence = true;  // the homotopy relation was already an equivalence
  std::optional<bool> kan_passed;  // kan_check through n, when requested
  std::vector<std::string> warnings;

  std::size_t size() const noexcept { return classes.size(); }
  SimplexId representative(std::size_t c) const { return classes.at(c).front(); }
  std::optional<std::size_t> find_class(SimplexId x) const {
    auto it = class_of.find(x);
    if (it == class_of.end()) return std::nullopt;
    return it->second;
  }
};

struct HomotopyOptions {
  bool check_kan = true;
  bool check_representatives = true;  // products over every pair of representatives
};

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

/// Partition `eligible` by the closure of `related`, recording whether the raw
/// relation was already an equivalence.
template <class Related>
void build_classes(HomotopyGroupTable& T, const Level& eligible, Related&& related) {
  const std::size_t m = eligible.size();
  std::vector<std::vector<char>> R(m, std::vector<char>(m, 0));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) R[a][b] = related(eligible[a], eligible[b]) ? 1 : 0;
  bool eq = true;
  for (std::size_t a = 0; a < m && eq; ++a) {
    if (!R[a][a]) eq = false;
    for (std::size_t b = 0; b < m && eq; ++b) {
      if (R[a][b] != R[b][a]) eq = false;
      if (R[a][b])
        for (std::size_t c = 0; c < m && eq; ++c)
          if (R[b][c] && !R[a][c]) eq = false;
    }
  }
  T.raw_equivalence = eq;
  if (!eq) T.warnings.push_back("homotopy relation in dimension " + std::to_string(T.n) +
                                " is not an equivalence before closure (truncation artifact)");
  UnionFind uf(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      if (R[a][b]) uf.unite(a, b);
  std::map<std::size_t, std::size_t> root_to_class;
  for (std::size_t a = 0; a < m; ++a) {
    auto [it, fresh] = root_to_class.emplace(uf.find(a), T.classes.size());
    if (fresh) T.classes.emplace_back();
    T.classes[it->second].push_back(eligible[a]);
    T.class_of[eligible[a]] = it->second;
  }
}

inline void check_axioms(HomotopyGroupTable& T) {
  const std::size_t c = T.size();
  const auto& M = T.mult;
  bool ok = true;
  for (std::size_t a = 0; a < c && ok; ++a)
    ok = M[T.identity][a] == a && M[a][T.identity] == a;
  for (std::size_t a = 0; a < c && ok; ++a)
    for (std::size_t b = 0; b < c && ok; ++b)
      for (std::size_t d = 0; d < c && ok; ++d) ok = M[M[a][b]][d] == M[a][M[b][d]];
  T.inverse.assign(c, 0);
  for (std::size_t a = 0; a < c && ok; ++a) {
    bool found = false;
    for (std::size_t b = 0; b < c && !found; ++b)
      if (M[a][b] == T.identity && M[b][a] == T.identity) {
        T.inverse[a] = b;
        found = true;
      }
    ok = found;
  }
  T.axioms_ok = ok;
  T.abelian = true;
  for (std::size_t a = 0; a < c; ++a)
    for (std::size_t b = 0; b < c; ++b)
      if (M[a][b] != M[b][a]) T.abelian = false;
  if (!ok) T.warnings.push_back("multiplication table violates the group axioms");
}

/// Fill in mult from product(x, y) -> optional simplex.
template <class Product>
void build_mult(HomotopyGroupTable& T, const HomotopyOptions& opt, Product&& product) {
  const std::size_t c = T.size();
  T.has_product = true;
  T.mult.assign(c, std::vector<std::size_t>(c, 0));
  for (std::size_t a = 0; a < c; ++a)
    for (std::size_t b = 0; b < c; ++b) {
      std::optional<std::size_t> cls;
      const Level& xs = opt.check_representatives ? T.classes[a] : Level{T.representative(a)};
      const Level& ys = opt.check_representatives ? T.classes[b] : Level{T.representative(b)};
      for (SimplexId x : xs)
        for (SimplexId y : ys) {
          auto z = product(x, y);
          if (!z) {
            throw PreconditionError("no product found in dimension " + std::to_string(T.n) +
                                    " (horn not completable within cap; complex not Kan)");
          }
          auto zc = T.find_class(*z);
          if (!zc) throw PreconditionError("product left the eligible set in dimension " + std::to_string(T.n));
          if (cls && *cls != *zc) T.product_well_defined = false;
          if (!cls) cls = zc;
        }
      T.mult[a][b] = *cls;
    }
  if (!T.product_well_defined) T.warnings.push_back("product depends on the choice of representatives");
  check_axioms(T);
}

inline void attach_kan(HomotopyGroupTable& T, const FillingIndex& F, int n, const HomotopyOptions& opt) {
  if (!opt.check_kan) return;
  auto rep = kan_check(F, n);
  T.kan_passed = rep.passed;
  if (!rep.passed)
    T.warnings.push_back("complex '" + F.complex().name() + "' fails kan_check through dimension " +
                         std::to_string(n) + " (within cap)");
}

}  // namespace detail

/// x ∈ K_n with every face at the basepoint (all vertices for n = 0).
inline Level spherical_simplices(const SimplicialSet& K, int n) {
  Level out;
  for (SimplexId x = 0; x < K.size(n); ++x) {
    bool ok = true;
    for (int i = 0; i <= n && n >= 1 && ok; ++i) ok = K.face(n, i, x) == K.basepoint_at(n - 1);
    if (ok) out.push_back(x);
  }
  return out;
}

/// π_n(K, ⋆); π_0 is a pointed set without product.
inline HomotopyGroupTable homotopy_group(const FillingIndex& F, int n, const HomotopyOptions& opt = {}) {
  const auto& K = F.complex();
  if (!K.pointed()) throw PreconditionError("homotopy_group: complex '" + K.name() + "' is not pointed");
  if (n < 0) throw PreconditionError("homotopy_group: negative dimension");
  if (n + 1 > K.cap()) throw CapTooSmall("homotopy_group: π_" + std::to_string(n) + " needs cap >= " + std::to_string(n + 1));
  HomotopyGroupTable T;
  T.n = n;
  detail::attach_kan(T, F, n, opt);
  auto eligible = spherical_simplices(K, n);
  detail::build_classes(T, eligible, [&](SimplexId x, SimplexId y) { return homotopic(F, n, x, y).has_value(); });
  T.identity = *T.find_class(K.basepoint_at(n));
  if (n == 0) return T;
  const SimplexId star = K.basepoint_at(n);
  detail::build_mult(T, opt, [&](SimplexId x, SimplexId y) -> std::optional<SimplexId> {
    // (⋆, ..., ⋆, y, _, x) with the gap at position n
    Level h(n + 2, star);
    h[n - 1] = y;
    h[n + 1] = x;
    h[n] = 0;
    auto c = find_completions(F, n, h, n);
    if (c.empty()) return std::nullopt;
    SimplexId best = c.front().completion;
    for (const auto& e : c) best = std::min(best, e.completion);
    return best;
  });
  return T;
}

/// x ∈ K_n with d_0 x ∈ L and the other faces at the basepoint.
inline Level relative_spherical_simplices(const SimplicialSet& K, const Subcomplex& L, int n) {
  Level out;
  for (SimplexId x = 0; x < K.size(n); ++x) {
    bool ok = L.contains(n - 1, K.face(n, 0, x));
    for (int i = 1; i <= n && ok; ++i) ok = K.face(n, i, x) == K.basepoint_at(n - 1);
    if (ok) out.push_back(x);
  }
  return out;
}

/// π_n(K, L, ⋆) for n >= 1; relative π_1 is a pointed set.
inline HomotopyGroupTable relative_homotopy_group(const FillingIndex& F, const Subcomplex& L, int n,
                                                  const HomotopyOptions& opt = {}) {
  const auto& K = F.complex();
  if (!K.pointed()) throw PreconditionError("relative_homotopy_group: complex is not pointed");
  if (!L.contains(0, *K.basepoint())) throw PreconditionError("relative_homotopy_group: basepoint not in the subcomplex");
  if (n < 1) throw PreconditionError("relative homotopy groups start at n = 1");
  if (n + 1 > K.cap()) throw CapTooSmall("relative π_" + std::to_string(n) + " needs cap >= " + std::to_string(n + 1));
  HomotopyGroupTable T;
  T.n = n;
  T.relative = true;
  detail::attach_kan(T, F, n, opt);
  auto eligible = relative_spherical_simplices(K, L, n);
  detail::build_classes(T, eligible,
                        [&](SimplexId x, SimplexId y) { return homotopic_rel(F, L, n, x, y).has_value(); });
  T.identity = *T.find_class(K.basepoint_at(n));
  if (n == 1) return T;
  const SimplexId star = K.basepoint_at(n);
  Level Ln;
  for (SimplexId h = 0; h < K.size(n); ++h)
    if (L.contains(n, h)) Ln.push_back(h);
  detail::build_mult(T, opt, [&](SimplexId x, SimplexId y) -> std::optional<SimplexId> {
    // (h, ⋆, ..., ⋆, y, _, x), h ∈ L_n, gap at n
    Level t(n + 2, star);
    t[n - 1] = y;
    t[n + 1] = x;
    t[n] = 0;
    std::optional<SimplexId> best;
    for (SimplexId h : Ln) {
      t[0] = h;
      if (!is_horn(K, n, t, n).ok) continue;
      for (const auto& e : find_completions(F, n, t, n))
        if (!best || e.completion < *best) best = e.completion;
    }
    return best;
  });
  return T;
}

// ---------------------------------------------------------------------------
// Class maps
// ---------------------------------------------------------------------------

struct ClassMap {
  std::vector<std::size_t> image;  // source class -> target class
  bool well_defined = true;
  std::optional<bool> homomorphism;  // when both tables carry products

  bool injective() const {
    auto s = image;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
  }
  bool surjective(std::size_t target_size) const {
    std::vector<char> hit(target_size, 0);
    for (auto c : image) hit[c] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char v) { return v != 0; });
  }
};

/// [x] ↦ [f(x)] for a level map; throws if a representative leaves the target's eligible set.
inline ClassMap class_map(const HomotopyGroupTable& S, const HomotopyGroupTable& T,
                          const std::function<SimplexId(SimplexId)>& f) {
  ClassMap m;
  m.image.assign(S.size(), 0);
  for (std::size_t c = 0; c < S.size(); ++c) {
    std::optional<std::size_t> cls;
    for (SimplexId x : S.classes[c]) {
      auto t = T.find_class(f(x));
      if (!t) throw PreconditionError("class map: image of a representative is not eligible in the target");
      if (cls && *cls != *t) m.well_defined = false;
      if (!cls) cls = t;
    }
    m.image[c] = *cls;
  }
  if (S.has_product && T.has_product) {
    bool hom = true;
    for (std::size_t a = 0; a < S.size(); ++a)
      for (std::size_t b = 0; b < S.size(); ++b)
        if (m.image[S.mult[a][b]] != T.mult[m.image[a]][m.image[b]]) hom = false;
    m.homomorphism = hom;
  }
  return m;
}

/// Functoriality of a pointed simplicial map on π_n.
inline ClassMap induced_map(const SimplicialMap& f, const HomotopyGroupTable& S, const HomotopyGroupTable& T) {
  const int n = S.n;
  return class_map(S, T, [&](SimplexId x) { return f(n, x); });
}

// ---------------------------------------------------------------------------
// The sequence of a pair
// ---------------------------------------------------------------------------

struct PairGroups {
  ComplexPtr K;
  Subcomplex L_mask;
  Materialized L;  // L as a complex, with its inclusion
  std::vector<HomotopyGroupTable> abs_L, abs_K;  // index n
  std::vector<HomotopyGroupTable> rel;           // index n, rel[0] unused
};

struct ExactnessNode {
  std::string name;
  bool exact = false;
  std::size_t image_size = 0;
  std::size_t kernel_size = 0;
};

struct ExactnessReport {
  bool passed = true;
  int top = 0;  // highest n with every group computable
  std::vector<ExactnessNode> nodes;
  std::vector<std::string> warnings;
  bool boundary_well_defined = true;
  std::vector<bool> boundary_homomorphism;  // index n (n >= 2)
  std::vector<bool> p_bijective;            // index n; p_* : π_n(K) → π_n(K, L)
};

/// ∂_*[x] = [d_0 x] : π_n(K, L) → π_{n-1}(L), computed on the materialized L.
inline ClassMap boundary_homomorphism(const PairGroups& P, int n) {
  const auto& K = *P.K;
  Level back(P.L.inclusion.table[n - 1].size());
  std::unordered_map<SimplexId, SimplexId> into_L;
  for (SimplexId y = 0; y < P.L.inclusion.table[n - 1].size(); ++y) into_L[P.L.inclusion(n - 1, y)] = y;
  return class_map(P.rel[n], P.abs_L[n - 1], [&](SimplexId x) { return into_L.at(K.face(n, 0, x)); });
}

/// Homotopy tables of the pair (K, L) through dimension cap-1.
inline PairGroups pair_groups(const ComplexPtr& K, const Subcomplex& L, const HomotopyOptions& opt = {}) {
  if (!K->pointed()) throw PreconditionError("exactness: complex is not pointed");
  if (!L.contains(0, *K->basepoint())) throw PreconditionError("exactness: basepoint not in the subcomplex");
  const int top = K->cap() - 1;
  if (top < 1) throw CapTooSmall("exactness: cap must be at least 2");
  PairGroups P{K, L, materialize(K, L, K->name() + "|L"), {}, {}, {}};
  FillingIndex FK(K), FL(P.L.complex);
  for (int n = 0; n <= top; ++n) {
    P.abs_L.push_back(homotopy_group(FL, n, opt));
    P.abs_K.push_back(homotopy_group(FK, n, opt));
    P.rel.push_back(n == 0 ? HomotopyGroupTable{} : relative_homotopy_group(FK, L, n, opt));
  }
  return P;
}

/// im = ker at every computable node of π_n(L) → π_n(K) → π_n(K,L) → π_{n-1}(L) → ... → π_0(K) → π_0(K)/π_0(L).
inline ExactnessReport exactness_check(const PairGroups& P) {
  const int top = static_cast<int>(P.abs_K.size()) - 1;
  ExactnessReport rep;
  rep.top = top;
  rep.boundary_homomorphism.assign(top + 1, true);
  rep.p_bijective.assign(top + 1, false);
  auto node = [&](std::string name, const ClassMap& in, const ClassMap& out, std::size_t base) {
    std::vector<char> im(out.image.size(), 0);
    for (auto c : in.image) im[c] = 1;
    ExactnessNode e{std::move(name), true, 0, 0};
    for (std::size_t c = 0; c < out.image.size(); ++c) {
      const bool ker = out.image[c] == base;
      e.image_size += im[c];
      e.kernel_size += ker;
      if (ker != static_cast<bool>(im[c])) e.exact = false;
    }
    if (!e.exact) rep.passed = false;
    rep.nodes.push_back(std::move(e));
  };
  const auto& incl = P.L.inclusion;
  auto i_map = [&](int n) { return class_map(P.abs_L[n], P.abs_K[n], [&](SimplexId x) { return incl(n, x); }); };
  auto p_map = [&](int n) { return class_map(P.abs_K[n], P.rel[n], [](SimplexId x) { return x; }); };
  for (int n = top; n >= 1; --n) {
    auto i = i_map(n), p = p_map(n), d = boundary_homomorphism(P, n), i_low = i_map(n - 1);
    if (!i.well_defined || !p.well_defined || !d.well_defined) {
      rep.passed = false;
      rep.warnings.push_back("a class map in dimension " + std::to_string(n) + " is not well defined");
    }
    if (!d.well_defined) rep.boundary_well_defined = false;
    if (d.homomorphism && !*d.homomorphism) rep.boundary_homomorphism[n] = false;
    rep.p_bijective[n] = p.injective() && p.surjective(P.rel[n].size());
    const std::string s = std::to_string(n), t = std::to_string(n - 1);
    node("pi_" + s + "(K)", i, p, P.rel[n].identity);
    node("pi_" + s + "(K,L)", p, d, P.abs_L[n - 1].identity);
    node("pi_" + t + "(L)", d, i_low, P.abs_K[n - 1].identity);
  }
  // π_0(K) → π_0(K)/π_0(L): the image of π_0(L) collapses to the basepoint class
  auto i0 = i_map(0);
  ClassMap collapse;
  std::vector<char> in_image(P.abs_K[0].size(), 0);
  for (auto c : i0.image) in_image[c] = 1;
  for (std::size_t c = 0; c < P.abs_K[0].size(); ++c)
    collapse.image.push_back(in_image[c] ? P.abs_K[0].identity : c);
  node("pi_0(K)", i0, collapse, P.abs_K[0].identity);
  return rep;
}

inline ExactnessReport exactness_check(const ComplexPtr& K, const Subcomplex& L, const HomotopyOptions& opt = {}) {
  return exactness_check(pair_groups(K, L, opt));
}

}  // namespace kanset
