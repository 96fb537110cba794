#pragma once

// Spectral cocycles (pair maps into H(A,n)), nullhomotopy witnesses, cone
// coboundaries and the comparison with normalized simplicial cohomology.

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kanset/abelian.hpp"
#include "kanset/constructors.hpp"
#include "kanset/eilenberg_maclane.hpp"
#include "kanset/errors.hpp"
#include "kanset/homology.hpp"
#include "kanset/parallel.hpp"
#include "kanset/simplicial_set.hpp"

namespace kanset {

/// Level-n values of a cocycle as IndexedGroup indices, one per simplex of K_n.
using Assignment = std::vector<std::size_t>;

namespace detail {

/// Assignments α : K_n → A vanishing on L_n and on degenerate simplices with
/// Σ (-1)^i α(d_i y) = 0 for every (n+1)-simplex y, in lexicographic order.
inline std::vector<Assignment> enumerate_assignments(const SimplicialSet& K, const Subcomplex* L, const IndexedGroup& G,
                                                     int n, std::size_t budget) {
  const std::size_t size_n = K.size(n);
  std::vector<int> var_of(size_n, -1);
  Level vars;
  auto is_free = [&](SimplexId x) { return !(L && L->contains(n, x)) && !K.is_degenerate(n, x); };
  // constraints: (coefficient, variable) lists
  std::vector<std::vector<std::pair<long long, int>>> constraints;
  auto var = [&](SimplexId x) {
    if (var_of[x] < 0) {
      var_of[x] = static_cast<int>(vars.size());
      vars.push_back(x);
    }
    return var_of[x];
  };
  if (n + 1 <= K.cap())
    for (SimplexId y = 0; y < K.size(n + 1); ++y) {
      std::map<int, long long> coef;
      for (int i = 0; i <= n + 1; ++i) {
        SimplexId x = K.face(n + 1, i, y);
        if (is_free(x)) coef[var(x)] += i % 2 == 0 ? 1 : -1;
      }
      std::vector<std::pair<long long, int>> c;
      for (auto [v, k] : coef)
        if (k != 0) c.push_back({k, v});
      if (!c.empty()) constraints.push_back(std::move(c));
    }
  for (SimplexId x = 0; x < size_n; ++x)
    if (is_free(x)) var(x);
  const std::size_t m = vars.size();
  std::vector<std::vector<std::size_t>> closing(m);
  for (std::size_t c = 0; c < constraints.size(); ++c) {
    int last = 0;
    for (auto [k, v] : constraints[c]) last = std::max(last, v);
    closing[last].push_back(c);
  }
  // k · a in G by repeated addition
  auto times = [&](long long k, std::size_t a) {
    std::size_t r = 0;
    std::size_t base = k < 0 ? G.neg(a) : a;
    for (long long t = 0; t < (k < 0 ? -k : k); ++t) r = G.add(r, base);
    return r;
  };
  std::vector<std::vector<Assignment>> parts(m == 0 ? 1 : G.size());
  std::atomic<std::size_t> total{0};
  auto run = [&](std::size_t first) {
    std::vector<std::size_t> val(m, 0);
    auto& out = parts[first];
    std::function<void(std::size_t)> rec = [&](std::size_t p) {
      if (p == m) {
        if (total.fetch_add(1) + 1 > budget) throw BudgetExceeded(n, budget, "cocycle enumeration");
        Assignment a(size_n, 0);
        for (std::size_t v = 0; v < m; ++v) a[vars[v]] = val[v];
        out.push_back(std::move(a));
        return;
      }
      const std::size_t lo = p == 0 ? first : 0, hi = p == 0 ? first + 1 : G.size();
      for (std::size_t g = lo; g < hi; ++g) {
        val[p] = g;
        bool ok = true;
        for (std::size_t c : closing[p]) {
          std::size_t s = 0;
          for (auto [k, v] : constraints[c]) s = G.add(s, times(k, val[v]));
          if (s != 0) {
            ok = false;
            break;
          }
        }
        if (ok) rec(p + 1);
      }
    };
    rec(0);
  };
  parallel_for(parts.size(), run);
  std::vector<Assignment> out;
  for (auto& p : parts)
    for (auto& a : p) out.push_back(std::move(a));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Extend a level-n assignment to K → E by the face-tuple formula.
inline std::optional<SimplicialMap> extend_cocycle(const ComplexPtr& K, const ComplexPtr& E, const BoundaryIndex& EI,
                                                   const Assignment& alpha, int n) {
  SimplicialMap f{K, E, {}};
  for (int k = 0; k <= K->cap(); ++k) {
    Level l(K->size(k), 0);
    if (k == n)
      for (SimplexId x = 0; x < l.size(); ++x) l[x] = static_cast<SimplexId>(alpha[x]);
    else if (k > n)
      for (SimplexId x = 0; x < l.size(); ++x) {
        Level want(k + 1);
        for (int i = 0; i <= k; ++i) want[i] = f.table[k - 1][K->face(k, i, x)];
        const auto& hit = EI.lookup(k, want);
        if (hit.empty()) return std::nullopt;
        l[x] = hit.front();
      }
    f.table.push_back(std::move(l));
  }
  return f;
}

struct SpectralCocycles {
  ComplexPtr K;
  Subcomplex L;
  std::shared_ptr<const EMSpace> E;
  std::shared_ptr<const IndexedGroup> G;
  int n = 0;
  std::vector<Assignment> alphas;  // canonical order; index 0 is the constant map
  std::vector<SimplicialMap> maps;
  std::map<Assignment, std::size_t> index;
  bool maps_valid = true;             // every extension is a simplicial map of pairs
  std::vector<std::vector<std::size_t>> add;  // via μ ∘ (f × g)
  bool mu_matches_pointwise = true;
  bool group_axioms = true;

  std::size_t size() const noexcept { return alphas.size(); }
};

inline Assignment pointwise_sum(const IndexedGroup& G, const Assignment& a, const Assignment& b) {
  Assignment s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = G.add(a[i], b[i]);
  return s;
}

/// Z_spec^n(K, L; A): every pair map (K, L) → (H(A,n), ⋆), with the group law through μ.
inline SpectralCocycles z_spec(const ComplexPtr& K, const Subcomplex& L, const FinAbGroup& A, int n,
                               std::size_t budget = kDefaultLevelBudget,
                               std::shared_ptr<const EMSpace> E = nullptr) {
  if (K->cap() < n + 1) throw CapTooSmall("z_spec: cap must be at least n+1");
  if (!E) E = std::make_shared<const EMSpace>(em_space(A, n, K->cap()));
  if (E->complex->cap() != K->cap() || E->n != n || !(E->group == A))
    throw PreconditionError("z_spec: Eilenberg-Mac Lane space does not match (A, n, cap)");
  SpectralCocycles Z;
  Z.K = K;
  Z.L = L;
  Z.E = E;
  Z.G = std::make_shared<const IndexedGroup>(A);
  Z.n = n;
  const auto& G = *Z.G;
  const auto& H = E->complex;
  Z.alphas = detail::enumerate_assignments(*K, &L, G, n, budget);
  BoundaryIndex EI(*H);
  auto star = basepoint_closure(*H);
  for (std::size_t i = 0; i < Z.alphas.size(); ++i) {
    Z.index[Z.alphas[i]] = i;
    auto f = extend_cocycle(K, H, EI, Z.alphas[i], n);
    if (!f || !validate_map(*f).ok() || !carries(*f, L, star)) {
      Z.maps_valid = false;
      throw ValidationError("z_spec: cocycle " + std::to_string(i) + " does not extend to a pair map");
    }
    Z.maps.push_back(std::move(*f));
  }
  // α + β := μ ∘ (α × β)
  auto m = mu(*E);
  const std::size_t c = Z.size();
  Z.add.assign(c, std::vector<std::size_t>(c, 0));
  for (std::size_t a = 0; a < c; ++a)
    for (std::size_t b = 0; b < c; ++b) {
      SimplicialMap h{K, H, {}};
      for (int k = 0; k <= K->cap(); ++k) {
        Level l(K->size(k));
        for (SimplexId x = 0; x < l.size(); ++x) l[x] = mu_at(m, k, Z.maps[a](k, x), Z.maps[b](k, x));
        h.table.push_back(std::move(l));
      }
      auto sum = pointwise_sum(G, Z.alphas[a], Z.alphas[b]);
      auto it = Z.index.find(sum);
      Assignment level_n(h.table[n].begin(), h.table[n].end());
      if (it == Z.index.end() || level_n != sum || h.table != Z.maps[it->second].table) {
        Z.mu_matches_pointwise = false;
        continue;
      }
      Z.add[a][b] = it->second;
    }
  const std::size_t zero = 0;
  for (std::size_t a = 0; a < c && Z.group_axioms; ++a) {
    if (Z.add[a][zero] != a || Z.add[zero][a] != a) Z.group_axioms = false;
    bool has_inverse = false;
    for (std::size_t b = 0; b < c && Z.group_axioms; ++b) {
      if (Z.add[a][b] != Z.add[b][a]) Z.group_axioms = false;
      if (Z.add[a][b] == zero) has_inverse = true;
      for (std::size_t d = 0; d < c && Z.group_axioms; ++d)
        if (Z.add[Z.add[a][b]][d] != Z.add[a][Z.add[b][d]]) Z.group_axioms = false;
    }
    if (!has_inverse) Z.group_axioms = false;
  }
  return Z;
}

// ---------------------------------------------------------------------------
// Nullhomotopies
// ---------------------------------------------------------------------------

struct NullhomotopyWitness {
  Assignment beta;       // on K_{n-1}
  std::vector<Level> g;  // g[k][x] ∈ H_{k+1}, k ∈ [0, cap-1]
  bool identities_hold = false;
  bool carries_subcomplex = false;
};

/// β with α(y) = (-1)^n β(𝐝 y) on normalized cochains, decided by solve_mod,
/// and the map g(y) = (β(d_0 y), ..., β(d_n y), α(y)) extended by face tuples.
/// nullopt when no β exists; otherwise the witness with its checks recorded.
inline std::optional<NullhomotopyWitness> is_nullhomotopic(const SpectralCocycles& Z, std::size_t which,
                                                           const ChainComplexData* chains = nullptr) {
  const auto& K = *Z.K;
  const auto& H = *Z.E->complex;
  const auto& G = *Z.G;
  const int n = Z.n;
  std::optional<ChainComplexData> own;
  if (!chains) chains = &own.emplace(chain_complex(K, &Z.L, true));
  const auto& C = *chains;
  const Assignment& alpha = Z.alphas.at(which);
  IntegerMatrix M = C.D[n].transpose();
  std::vector<GroupElement> rhs;
  for (SimplexId y : C.basis[n]) {
    const auto& a = G.element(alpha[y]);
    rhs.push_back(n % 2 == 0 ? a : G.group().neg(a));
  }
  auto sol = solve_mod_elements(M, rhs, G.group());
  if (!sol) return std::nullopt;
  NullhomotopyWitness w;
  w.beta.assign(K.size(n - 1), 0);
  for (std::size_t j = 0; j < C.basis[n - 1].size(); ++j) w.beta[C.basis[n - 1][j]] = G.index_of((*sol)[j]);

  BoundaryIndex EI(H);
  const auto& f = Z.maps.at(which);
  bool ok = true;
  for (int k = 0; k + 1 <= K.cap() && ok; ++k) {
    Level l(K.size(k), 0);
    for (SimplexId x = 0; x < l.size() && ok; ++x) {
      if (k < n - 1) {
        l[x] = 0;
      } else if (k == n - 1) {
        l[x] = static_cast<SimplexId>(w.beta[x]);
      } else {
        Level want(k + 2);
        for (int i = 0; i <= k; ++i) want[i] = w.g[k - 1][K.face(k, i, x)];
        want[k + 1] = f(k, x);
        const auto& hit = EI.lookup(k + 1, want);
        if (hit.empty()) ok = false;
        else l[x] = hit.front();
      }
    }
    w.g.push_back(std::move(l));
  }
  if (!ok) return w;
  // d_i g(x) = g(d_i x) for i <= k, d_{k+1} g(x) = f(x)
  bool holds = true;
  for (int k = 0; k + 1 <= K.cap() && holds; ++k)
    for (SimplexId x = 0; x < K.size(k) && holds; ++x) {
      const SimplexId gx = w.g[k][x];
      for (int i = 0; i <= k && holds && k >= 1; ++i) holds = H.face(k + 1, i, gx) == w.g[k - 1][K.face(k, i, x)];
      if (holds) holds = H.face(k + 1, k + 1, gx) == f(k, x);
    }
  w.identities_hold = holds;
  auto star = basepoint_closure(H);
  w.carries_subcomplex = true;
  for (int k = 0; k + 1 <= K.cap(); ++k)
    for (SimplexId x = 0; x < K.size(k); ++x)
      if (Z.L.contains(k, x) && !star.contains(k + 1, w.g[k][x])) w.carries_subcomplex = false;
  return w;
}

// ---------------------------------------------------------------------------
// Coboundaries and the comparison
// ---------------------------------------------------------------------------

struct ConeCoboundaries {
  bool computed = false;
  std::size_t cone_cocycles = 0;
  std::set<Assignment> restrictions;
  std::string note;
};

/// Restrictions along K → CK of the pair maps (CK, CL) → (H, ⋆).
inline ConeCoboundaries cone_coboundaries(const SpectralCocycles& Z, std::size_t budget = kDefaultLevelBudget) {
  ConeCoboundaries out;
  const int n = Z.n;
  auto c = cone(Z.K);
  auto CL = c.cone_of(*Z.K, Z.L);
  const auto& H = Z.E->complex;
  std::vector<Assignment> alphas;
  try {
    alphas = detail::enumerate_assignments(*c.complex, &CL, *Z.G, n, budget);
  } catch (const BudgetExceeded& e) {
    out.note = std::string("cone enumeration skipped: ") + e.what();
    return out;
  }
  BoundaryIndex EI(*H);
  auto star = basepoint_closure(*H);
  out.computed = true;
  out.cone_cocycles = alphas.size();
  for (const auto& a : alphas) {
    auto F = extend_cocycle(c.complex, H, EI, a, n);
    if (!F || !validate_map(*F).ok() || !carries(*F, CL, star))
      throw ValidationError("cone cocycle does not extend to a pair map");
    Assignment r(Z.K->size(n));
    for (SimplexId x = 0; x < r.size(); ++x) r[x] = a[c.inclusion(n, x)];
    out.restrictions.insert(std::move(r));
  }
  return out;
}

/// H_spec = Z_spec / B as a canonical group, from the coset table.
inline FinAbGroup quotient_group(const SpectralCocycles& Z, const std::set<std::size_t>& B) {
  std::vector<std::size_t> coset(Z.size(), static_cast<std::size_t>(-1));
  std::vector<std::size_t> reps;
  for (std::size_t z = 0; z < Z.size(); ++z) {
    if (coset[z] != static_cast<std::size_t>(-1)) continue;
    for (std::size_t b : B) coset[Z.add[z][b]] = reps.size();
    reps.push_back(z);
  }
  std::vector<std::vector<std::size_t>> mult(reps.size(), std::vector<std::size_t>(reps.size()));
  for (std::size_t a = 0; a < reps.size(); ++a)
    for (std::size_t b = 0; b < reps.size(); ++b) mult[a][b] = coset[Z.add[reps[a]][reps[b]]];
  return abelianization(mult).group;
}

struct SimSpecReport {
  std::size_t z_spec = 0;
  std::size_t z_sim = 0;
  std::size_t b_spec_nullhomotopy = 0;
  std::optional<std::size_t> b_spec_cone;
  std::size_t b_sim = 0;
  bool spec_group_ok = false;      // μ-addition matches pointwise, group axioms hold
  bool bijection = false;          // φ : Z_spec → Z_sim
  bool homomorphism = false;
  bool b_methods_agree = false;    // nullhomotopy set = cone set
  bool b_corresponds = false;      // φ(B_spec) = B_sim
  bool witnesses_valid = false;
  FinAbGroup h_spec;
  FinAbGroup h_sim;
  bool isomorphic = false;
  bool passed = false;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<Assignment> all_vectors(std::size_t length, std::size_t base, std::size_t budget) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < length; ++i) {
    count *= base;
    if (count > budget) throw BudgetExceeded(0, count, "cochain enumeration");
  }
  std::vector<Assignment> out;
  Assignment v(length, 0);
  for (;;) {
    out.push_back(v);
    std::size_t p = length;
    while (p > 0 && v[p - 1] + 1 == base) v[--p] = 0;
    if (p == 0) return out;
    ++v[p - 1];
  }
}

// y ↦ Σ_r M(r, y) v_r in G.
inline Assignment apply_transpose(const IndexedGroup& G, const IntegerMatrix& M, const Assignment& v) {
  Assignment out(M.cols(), 0);
  for (std::size_t c = 0; c < M.cols(); ++c) {
    GroupElement s = G.group().zero();
    for (std::size_t r = 0; r < M.rows(); ++r)
      if (M(r, c) != 0) s = G.group().add(s, G.group().scale(G.element(v[r]), M(r, c)));
    out[c] = G.index_of(s);
  }
  return out;
}

}  // namespace detail

/// Both pipelines for H^n(K, L; A) and the correspondence between them.
inline SimSpecReport compare_sim_spec(const ComplexPtr& K, const Subcomplex& L, const FinAbGroup& A, int n,
                                      std::size_t budget = kDefaultLevelBudget) {
  SimSpecReport rep;
  auto Z = z_spec(K, L, A, n, budget);
  const auto& G = *Z.G;
  rep.z_spec = Z.size();
  rep.spec_group_ok = Z.mu_matches_pointwise && Z.group_axioms;

  // normalized simplicial side, from the boundary matrices
  auto C = chain_complex(*K, &L, true);
  std::set<Assignment> z_sim, b_sim;
  for (auto& c : detail::all_vectors(C.rank(n), G.size(), budget)) {
    auto d = n + 1 <= C.top() ? detail::apply_transpose(G, C.D[n + 1], c) : Assignment{};
    if (std::all_of(d.begin(), d.end(), [](std::size_t v) { return v == 0; })) z_sim.insert(std::move(c));
  }
  for (const auto& b : detail::all_vectors(C.rank(n - 1), G.size(), budget))
    b_sim.insert(detail::apply_transpose(G, C.D[n], b));
  rep.z_sim = z_sim.size();
  rep.b_sim = b_sim.size();

  // φ(α) = α on the normalized basis
  auto phi = [&](const Assignment& a) {
    Assignment c;
    for (SimplexId x : C.basis[n]) c.push_back(a[x]);
    return c;
  };
  std::set<Assignment> image;
  for (const auto& a : Z.alphas) image.insert(phi(a));
  rep.bijection = image.size() == Z.size() && image == z_sim;
  rep.homomorphism = Z.mu_matches_pointwise;
  for (std::size_t a = 0; a < Z.size() && rep.homomorphism; ++a)
    for (std::size_t b = 0; b < Z.size() && rep.homomorphism; ++b)
      rep.homomorphism = phi(Z.alphas[Z.add[a][b]]) == pointwise_sum(G, phi(Z.alphas[a]), phi(Z.alphas[b]));

  std::set<std::size_t> b_null;
  rep.witnesses_valid = true;
  for (std::size_t i = 0; i < Z.size(); ++i)
    if (auto w = is_nullhomotopic(Z, i, &C)) {
      b_null.insert(i);
      if (!w->identities_hold || !w->carries_subcomplex) rep.witnesses_valid = false;
    }
  rep.b_spec_nullhomotopy = b_null.size();
  std::set<Assignment> b_null_alphas, b_null_image;
  for (auto i : b_null) {
    b_null_alphas.insert(Z.alphas[i]);
    b_null_image.insert(phi(Z.alphas[i]));
  }
  rep.b_corresponds = b_null_image == b_sim;

  auto cone_b = cone_coboundaries(Z, budget);
  if (cone_b.computed) {
    rep.b_spec_cone = cone_b.restrictions.size();
    rep.b_methods_agree = cone_b.restrictions == b_null_alphas;
  } else {
    rep.warnings.push_back(cone_b.note + "; coboundaries from nullhomotopies only");
    rep.b_methods_agree = true;
  }

  rep.h_spec = quotient_group(Z, b_null);
  rep.h_sim = cohomology(C, A, n).group;
  rep.isomorphic = rep.h_spec == rep.h_sim;
  rep.passed = rep.spec_group_ok && rep.bijection && rep.homomorphism && rep.b_methods_agree && rep.b_corresponds &&
               rep.witnesses_valid && rep.isomorphic && rep.z_spec == rep.z_sim;
  return rep;
}

inline FinAbGroup h_spec(const ComplexPtr& K, const Subcomplex& L, const FinAbGroup& A, int n,
                         std::size_t budget = kDefaultLevelBudget) {
  auto Z = z_spec(K, L, A, n, budget);
  std::set<std::size_t> B;
  for (std::size_t i = 0; i < Z.size(); ++i)
    if (is_nullhomotopic(Z, i)) B.insert(i);
  return quotient_group(Z, B);
}

struct NaturalityReport {
  bool passed = true;
  std::size_t maps_checked = 0;
};

/// For maps f : K → K' of pairs, pulling back spectral cocycles (α ↦ α∘f)
/// lands in Z_spec(K) and commutes with φ and with the group law.
inline NaturalityReport naturality_check(const SpectralCocycles& ZK, const SpectralCocycles& ZK2,
                                         const std::vector<SimplicialMap>& maps) {
  NaturalityReport rep;
  const int n = ZK.n;
  auto CK = chain_complex(*ZK.K, &ZK.L, true);
  auto CK2 = chain_complex(*ZK2.K, &ZK2.L, true);
  for (const auto& f : maps) {
    ++rep.maps_checked;
    std::vector<std::size_t> pulled(ZK2.size());
    for (std::size_t a = 0; a < ZK2.size(); ++a) {
      Assignment p(ZK.K->size(n));
      for (SimplexId x = 0; x < p.size(); ++x) p[x] = ZK2.alphas[a][f(n, x)];
      auto it = ZK.index.find(p);
      if (it == ZK.index.end()) {
        rep.passed = false;
        return rep;
      }
      pulled[a] = it->second;
      // the pulled-back map is the composite
      auto comp = compose(ZK2.maps[a], f);
      if (comp.table != ZK.maps[it->second].table) rep.passed = false;
      // f^* on normalized cochains: c ↦ c ∘ f, zero on degenerate images
      for (std::size_t j = 0; j < CK.basis[n].size(); ++j) {
        SimplexId fx = f(n, CK.basis[n][j]);
        auto i2 = CK2.index_of(n, fx);
        const std::size_t want = i2 ? ZK2.alphas[a][CK2.basis[n][*i2]] : 0;
        if (p[CK.basis[n][j]] != want) rep.passed = false;
      }
    }
    for (std::size_t a = 0; a < ZK2.size(); ++a)
      for (std::size_t b = 0; b < ZK2.size(); ++b)
        if (pulled[ZK2.add[a][b]] != ZK.add[pulled[a]][pulled[b]]) rep.passed = false;
  }
  return rep;
}

}  // namespace kanset
