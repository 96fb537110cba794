#pragma once

// Builders: simplices, products, quotients, cones, path spaces, truncation
// and the skeleton completion.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kanset/errors.hpp"
#include "kanset/io.hpp"
#include "kanset/parallel.hpp"
#include "kanset/simplicial_set.hpp"

namespace kanset {

inline constexpr std::size_t kDefaultLevelBudget = 200'000;

namespace detail {

inline std::string tuple_label(const std::vector<int>& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

/// Nondecreasing (k+1)-tuples over [0, n], lexicographic.
inline std::vector<std::vector<int>> nondecreasing_tuples(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> t(k + 1, 0);
  for (;;) {
    out.push_back(t);
    int p = k;
    while (p >= 0 && t[p] == n) --p;
    if (p < 0) return out;
    ++t[p];
    for (int q = p + 1; q <= k; ++q) t[q] = t[p];
  }
}

}  // namespace detail

/// Δ^n truncated at cap: level k = nondecreasing (k+1)-tuples in [0, n].
/// Carries basepoint (0) and the named subcomplex "boundary".
inline ComplexPtr standard_simplex(int n, int cap) {
  if (n < 0 || cap < 0) throw ParseError("standard_simplex: n and cap must be non-negative");
  SimplicialSetData d;
  d.name = "delta-" + std::to_string(n);
  d.cap = cap;
  std::vector<std::vector<std::vector<int>>> tuples(cap + 1);
  std::vector<std::map<std::vector<int>, SimplexId>> index(cap + 1);
  for (int k = 0; k <= cap; ++k) {
    tuples[k] = detail::nondecreasing_tuples(n, k);
    std::vector<std::string> labels;
    for (SimplexId j = 0; j < tuples[k].size(); ++j) {
      index[k][tuples[k][j]] = j;
      labels.push_back(detail::tuple_label(tuples[k][j]));
    }
    d.labels.push_back(std::move(labels));
  }
  d.faces.resize(cap + 1);
  for (int k = 1; k <= cap; ++k)
    for (int i = 0; i <= k; ++i) {
      Level l;
      for (const auto& t : tuples[k]) {
        auto f = t;
        f.erase(f.begin() + i);
        l.push_back(index[k - 1].at(f));
      }
      d.faces[k].push_back(std::move(l));
    }
  d.degens.resize(cap);
  for (int k = 0; k < cap; ++k)
    for (int i = 0; i <= k; ++i) {
      Level l;
      for (const auto& t : tuples[k]) {
        auto s = t;
        s.insert(s.begin() + i, t[i]);
        l.push_back(index[k + 1].at(s));
      }
      d.degens[k].push_back(std::move(l));
    }
  d.basepoint = 0;
  Subcomplex boundary;
  for (int k = 0; k <= cap; ++k) {
    boundary.member.emplace_back(tuples[k].size(), 0);
    for (SimplexId j = 0; j < tuples[k].size(); ++j) {
      std::vector<bool> hit(n + 1, false);
      for (int v : tuples[k][j]) hit[v] = true;
      bool onto = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
      boundary.member[k][j] = onto ? 0 : 1;
    }
  }
  d.subcomplexes["boundary"] = std::move(boundary);
  return make_complex(std::move(d));
}

/// The subcomplex as a standalone complex, with its inclusion into K.
/// Simplices keep their labels and relative order.
struct Materialized {
  ComplexPtr complex;
  SimplicialMap inclusion;
};

inline Materialized materialize(const ComplexPtr& K, const Subcomplex& mask, std::string name) {
  if (!is_closed(*K, mask)) throw ValidationError("materialize: mask is not closed under the operators");
  const int N = K->cap();
  std::vector<Level> keep(N + 1);
  std::vector<std::vector<SimplexId>> renum(N + 1);
  SimplicialSetData d;
  d.name = std::move(name);
  d.cap = N;
  for (int k = 0; k <= N; ++k) {
    renum[k].assign(K->size(k), static_cast<SimplexId>(-1));
    std::vector<std::string> labels;
    for (SimplexId x = 0; x < K->size(k); ++x)
      if (mask.contains(k, x)) {
        renum[k][x] = static_cast<SimplexId>(keep[k].size());
        keep[k].push_back(x);
        labels.push_back(K->label(k, x));
      }
    d.labels.push_back(std::move(labels));
  }
  d.faces.resize(N + 1);
  for (int k = 1; k <= N; ++k)
    for (int i = 0; i <= k; ++i) {
      Level l;
      for (SimplexId x : keep[k]) l.push_back(renum[k - 1][K->face(k, i, x)]);
      d.faces[k].push_back(std::move(l));
    }
  d.degens.resize(N);
  for (int k = 0; k < N; ++k)
    for (int i = 0; i <= k; ++i) {
      Level l;
      for (SimplexId x : keep[k]) l.push_back(renum[k + 1][K->degen(k, i, x)]);
      d.degens[k].push_back(std::move(l));
    }
  if (K->basepoint() && mask.contains(0, *K->basepoint())) d.basepoint = renum[0][*K->basepoint()];
  auto sub = make_complex(std::move(d));
  return {sub, SimplicialMap{sub, K, keep}};
}

inline ComplexPtr boundary_complex(int n, int cap) {
  auto D = standard_simplex(n, cap);
  return materialize(D, D->subcomplex("boundary"), "boundary-" + std::to_string(n)).complex;
}

/// Λ^n_k: tuples whose image together with k is not all of [0, n].
inline ComplexPtr horn_complex(int n, int k, int cap) {
  if (k < 0 || k > n) throw ParseError("horn_complex: need 0 <= k <= n");
  auto D = standard_simplex(n, cap);
  Subcomplex m = empty_subcomplex(*D);
  for (int l = 0; l <= cap; ++l) {
    auto tuples = detail::nondecreasing_tuples(n, l);
    for (SimplexId x = 0; x < tuples.size(); ++x) {
      std::vector<bool> hit(n + 1, false);
      hit[k] = true;
      for (int v : tuples[x]) hit[v] = true;
      m.member[l][x] = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }) ? 0 : 1;
    }
  }
  return materialize(D, m, "horn-" + std::to_string(n) + "-" + std::to_string(k)).complex;
}

/// One simplex ⋆k per level.
inline ComplexPtr point(int cap) {
  SimplicialSetData d;
  d.name = "point";
  d.cap = cap;
  for (int k = 0; k <= cap; ++k) d.labels.push_back({collapsed_label(k)});
  d.faces.resize(cap + 1);
  for (int k = 1; k <= cap; ++k) d.faces[k].assign(k + 1, Level{0});
  for (int k = 0; k < cap; ++k) d.degens.push_back(std::vector<Level>(k + 1, Level{0}));
  d.basepoint = 0;
  return make_complex(std::move(d));
}

/// Levelwise product; the pair (i, j) sits at index i * |K'_k| + j.
inline ComplexPtr product(const ComplexPtr& K, const ComplexPtr& L) {
  if (K->cap() != L->cap()) throw ParseError("product: caps differ");
  const int N = K->cap();
  SimplicialSetData d;
  d.name = K->name() + "*" + L->name();
  d.cap = N;
  for (int k = 0; k <= N; ++k) {
    std::vector<std::string> labels;
    for (SimplexId a = 0; a < K->size(k); ++a)
      for (SimplexId b = 0; b < L->size(k); ++b) labels.push_back("<" + K->label(k, a) + "|" + L->label(k, b) + ">");
    d.labels.push_back(std::move(labels));
  }
  auto idx = [&](int k, SimplexId a, SimplexId b) { return static_cast<SimplexId>(a * L->size(k) + b); };
  d.faces.resize(N + 1);
  for (int k = 1; k <= N; ++k)
    for (int i = 0; i <= k; ++i) {
      Level l;
      for (SimplexId a = 0; a < K->size(k); ++a)
        for (SimplexId b = 0; b < L->size(k); ++b) l.push_back(idx(k - 1, K->face(k, i, a), L->face(k, i, b)));
      d.faces[k].push_back(std::move(l));
    }
  d.degens.resize(N);
  for (int k = 0; k < N; ++k)
    for (int i = 0; i <= k; ++i) {
      Level l;
      for (SimplexId a = 0; a < K->size(k); ++a)
        for (SimplexId b = 0; b < L->size(k); ++b) l.push_back(idx(k + 1, K->degen(k, i, a), L->degen(k, i, b)));
      d.degens[k].push_back(std::move(l));
    }
  if (K->basepoint() && L->basepoint()) d.basepoint = idx(0, *K->basepoint(), *L->basepoint());
  return make_complex(std::move(d));
}

/// A × B inside product(K, L).
inline Subcomplex product_mask(const SimplicialSet& K, const SimplicialSet& L, const Subcomplex& A,
                               const Subcomplex& B) {
  Subcomplex m;
  for (int k = 0; k <= K.cap(); ++k) {
    m.member.emplace_back(K.size(k) * L.size(k), 0);
    for (SimplexId a = 0; a < K.size(k); ++a)
      for (SimplexId b = 0; b < L.size(k); ++b)
        m.member[k][a * L.size(k) + b] = A.contains(k, a) && B.contains(k, b) ? 1 : 0;
  }
  return m;
}

/// Projections of product(K, L) onto its factors.
inline std::pair<SimplicialMap, SimplicialMap> product_projections(const ComplexPtr& P, const ComplexPtr& K,
                                                                   const ComplexPtr& L) {
  SimplicialMap p{P, K, {}}, q{P, L, {}};
  for (int k = 0; k <= P->cap(); ++k) {
    Level a, b;
    for (SimplexId x = 0; x < K->size(k); ++x)
      for (SimplexId y = 0; y < L->size(k); ++y) {
        a.push_back(x);
        b.push_back(y);
      }
    p.table.push_back(std::move(a));
    q.table.push_back(std::move(b));
  }
  return {p, q};
}

/// Levelwise disjoint union with named subcomplexes "left" and "right".
inline ComplexPtr coproduct(const ComplexPtr& K, const ComplexPtr& L) {
  if (K->cap() != L->cap()) throw ParseError("coproduct: caps differ");
  const int N = K->cap();
  SimplicialSetData d;
  d.name = K->name() + "+" + L->name();
  d.cap = N;
  Subcomplex left, right;
  for (int k = 0; k <= N; ++k) {
    std::vector<std::string> labels;
    for (SimplexId a = 0; a < K->size(k); ++a) labels.push_back("0:" + K->label(k, a));
    for (SimplexId b = 0; b < L->size(k); ++b) labels.push_back("1:" + L->label(k, b));
    d.labels.push_back(std::move(labels));
    left.member.emplace_back(K->size(k) + L->size(k), 0);
    right.member.emplace_back(K->size(k) + L->size(k), 0);
    for (SimplexId a = 0; a < K->size(k); ++a) left.member[k][a] = 1;
    for (SimplexId b = 0; b < L->size(k); ++b) right.member[k][K->size(k) + b] = 1;
  }
  d.faces.resize(N + 1);
  for (int k = 1; k <= N; ++k)
    for (int i = 0; i <= k; ++i) {
      Level l;
      for (SimplexId a = 0; a < K->size(k); ++a) l.push_back(K->face(k, i, a));
      for (SimplexId b = 0; b < L->size(k); ++b) l.push_back(static_cast<SimplexId>(K->size(k - 1) + L->face(k, i, b)));
      d.faces[k].push_back(std::move(l));
    }
  d.degens.resize(N);
  for (int k = 0; k < N; ++k)
    for (int i = 0; i <= k; ++i) {
      Level l;
      for (SimplexId a = 0; a < K->size(k); ++a) l.push_back(K->degen(k, i, a));
      for (SimplexId b = 0; b < L->size(k); ++b) l.push_back(static_cast<SimplexId>(K->size(k + 1) + L->degen(k, i, b)));
      d.degens[k].push_back(std::move(l));
    }
  if (K->basepoint()) d.basepoint = *K->basepoint();
  d.subcomplexes["left"] = std::move(left);
  d.subcomplexes["right"] = std::move(right);
  return make_complex(std::move(d));
}

struct Quotient {
  ComplexPtr complex;
  SimplicialMap projection;
};

/// K / L: level k is ⋆k followed by the simplices of K_k outside L, in order.
inline Quotient quotient(const ComplexPtr& K, const Subcomplex& L, std::string name = {}) {
  const int N = K->cap();
  if (!is_closed(*K, L)) throw ValidationError("quotient: mask is not a subcomplex");
  for (int k = 0; k <= N; ++k)
    if (L.empty_at(k)) throw PreconditionError("quotient: subcomplex is empty at level " + std::to_string(k));
  SimplicialSetData d;
  d.name = name.empty() ? K->name() + "/L" : std::move(name);
  d.cap = N;
  std::vector<Level> proj(N + 1);
  for (int k = 0; k <= N; ++k) {
    std::vector<std::string> labels{collapsed_label(k)};
    proj[k].assign(K->size(k), 0);
    for (SimplexId x = 0; x < K->size(k); ++x) {
      if (L.contains(k, x)) continue;
      if (K->label(k, x) == collapsed_label(k))
        throw ParseError("quotient: label '" + K->label(k, x) + "' collides with the collapsed simplex");
      proj[k][x] = static_cast<SimplexId>(labels.size());
      labels.push_back(K->label(k, x));
    }
    d.labels.push_back(std::move(labels));
  }
  // representative in K of every quotient simplex
  std::vector<Level> rep(N + 1);
  for (int k = 0; k <= N; ++k) {
    rep[k].assign(d.labels[k].size(), 0);
    for (SimplexId x = K->size(k); x-- > 0;) rep[k][proj[k][x]] = x;
  }
  d.faces.resize(N + 1);
  for (int k = 1; k <= N; ++k)
    for (int i = 0; i <= k; ++i) {
      Level l(d.labels[k].size(), 0);
      for (SimplexId q = 1; q < l.size(); ++q) l[q] = proj[k - 1][K->face(k, i, rep[k][q])];
      d.faces[k].push_back(std::move(l));
    }
  d.degens.resize(N);
  for (int k = 0; k < N; ++k)
    for (int i = 0; i <= k; ++i) {
      Level l(d.labels[k].size(), 0);
      for (SimplexId q = 1; q < l.size(); ++q) l[q] = proj[k + 1][K->degen(k, i, rep[k][q])];
      d.degens[k].push_back(std::move(l));
    }
  d.basepoint = 0;
  auto Q = make_complex(std::move(d));
  return {Q, SimplicialMap{K, Q, proj}};
}

struct Cone {
  ComplexPtr complex;       // pointed at the collapsed vertex
  SimplicialMap inclusion;  // x -> (x, 0...0)
  SimplicialMap projection; // K × Δ¹ -> CK
  ComplexPtr cylinder;      // K × Δ¹

  /// Image of L × Δ¹ in the cone, together with the collapsed closure.
  Subcomplex cone_of(const SimplicialSet& K, const Subcomplex& L) const {
    auto D1 = standard_simplex(1, K.cap());
    auto mask = product_mask(K, *D1, L, full_subcomplex(*D1));
    Subcomplex out = basepoint_closure(*complex);
    for (int k = 0; k <= K.cap(); ++k)
      for (SimplexId x = 0; x < mask.member[k].size(); ++x)
        if (mask.contains(k, x)) out.member[k][projection(k, x)] = 1;
    return out;
  }
};

/// K × Δ¹ with K × {1} collapsed.
inline Cone cone(const ComplexPtr& K) {
  if (K->cap() < 1) throw PreconditionError("cone: cap must be at least 1");
  auto D1 = standard_simplex(1, K->cap());
  auto P = product(K, D1);
  // vertex (1) of Δ¹ has index 1
  auto top = product_mask(*K, *D1, full_subcomplex(*K), subcomplex_closure(*D1, {{0, 1}}));
  auto q = quotient(P, top, "cone(" + K->name() + ")");
  SimplicialMap inc{K, q.complex, {}};
  for (int k = 0; k <= K->cap(); ++k) {
    Level l;
    // (0,...,0) is index 0 of Δ¹ at every level
    for (SimplexId x = 0; x < K->size(k); ++x) l.push_back(q.projection(k, static_cast<SimplexId>(x * D1->size(k))));
    inc.table.push_back(std::move(l));
  }
  return {q.complex, inc, q.projection, P};
}

/// Levels and operators up to n.
inline ComplexPtr truncate(const ComplexPtr& K, int n) {
  if (n < 0 || n > K->cap()) throw CapTooSmall("truncate: n exceeds the cap");
  if (n == K->cap()) return K;
  SimplicialSetData d = K->data();
  d.cap = n;
  d.labels.resize(n + 1);
  d.faces.resize(n + 1);
  d.degens.resize(n);
  for (auto& [nm, m] : d.subcomplexes) m.member.resize(n + 1);
  return make_complex(std::move(d));
}

/// Restrict a map to levels up to n, with the given truncated endpoints.
inline SimplicialMap truncate_map(const SimplicialMap& f, const ComplexPtr& source, const ComplexPtr& target) {
  SimplicialMap g{source, target, f.table};
  g.table.resize(source->cap() + 1);
  return g;
}

struct PathSpace {
  ComplexPtr complex;  // cap N-1, pointed at s_0 ⋆
  SimplicialMap end;   // x -> d_{n+1} x, into truncate(K, N-1)
};

/// P(K,⋆)_n = { x ∈ K_{n+1} : last vertex is ⋆ }, operators d_0..d_n, s_0..s_n.
inline PathSpace path_space(const ComplexPtr& K) {
  if (!K->basepoint()) throw PreconditionError("path_space: complex is not pointed");
  if (K->cap() < 1) throw PreconditionError("path_space: cap must be at least 1");
  const int N = K->cap() - 1;
  const SimplexId star = *K->basepoint();
  std::vector<Level> members(N + 1);
  std::vector<std::vector<SimplexId>> renum(N + 1);
  SimplicialSetData d;
  d.name = "path(" + K->name() + ")";
  d.cap = N;
  for (int n = 0; n <= N; ++n) {
    renum[n].assign(K->size(n + 1), static_cast<SimplexId>(-1));
    std::vector<std::string> labels;
    for (SimplexId x = 0; x < K->size(n + 1); ++x) {
      SimplexId v = x;
      for (int l = n + 1; l >= 1; --l) v = K->face(l, 0, v);
      if (v != star) continue;
      renum[n][x] = static_cast<SimplexId>(members[n].size());
      members[n].push_back(x);
      labels.push_back(K->label(n + 1, x));
    }
    d.labels.push_back(std::move(labels));
  }
  d.faces.resize(N + 1);
  for (int n = 1; n <= N; ++n)
    for (int i = 0; i <= n; ++i) {
      Level l;
      for (SimplexId x : members[n]) l.push_back(renum[n - 1][K->face(n + 1, i, x)]);
      d.faces[n].push_back(std::move(l));
    }
  d.degens.resize(N);
  for (int n = 0; n < N; ++n)
    for (int i = 0; i <= n; ++i) {
      Level l;
      for (SimplexId x : members[n]) l.push_back(renum[n + 1][K->degen(n + 1, i, x)]);
      d.degens[n].push_back(std::move(l));
    }
  d.basepoint = renum[0][K->degen(0, 0, star)];
  auto P = make_complex(std::move(d));
  auto T = truncate(K, N);
  SimplicialMap end{P, T, {}};
  for (int n = 0; n <= N; ++n) {
    Level l;
    for (SimplexId x : members[n]) l.push_back(K->face(n + 1, n + 1, x));
    end.table.push_back(std::move(l));
  }
  return {P, end};
}

/// Ω(K,⋆): preimage of the basepoint closure under the end map.
inline ComplexPtr loop_space(const ComplexPtr& K) {
  auto P = path_space(K);
  auto star = basepoint_closure(*P.end.target);
  Subcomplex m = empty_subcomplex(*P.complex);
  for (int n = 0; n <= P.complex->cap(); ++n)
    for (SimplexId x = 0; x < P.complex->size(n); ++x) m.member[n][x] = star.contains(n, P.end(n, x)) ? 1 : 0;
  return materialize(P.complex, m, "loop(" + K->name() + ")").complex;
}

// ---------------------------------------------------------------------------
// Cycles and completion
// ---------------------------------------------------------------------------

/// Lookup of level-k simplices by their first faces d_0..d_{p-1}.
class FacePrefixIndex {
 public:
  FacePrefixIndex() = default;
  FacePrefixIndex(const SimplicialSet& K, int k) : by_prefix_(k + 2) {
    Level all(K.size(k));
    for (SimplexId x = 0; x < all.size(); ++x) all[x] = x;
    by_prefix_[0][Level{}] = all;
    if (k == 0) return;
    for (SimplexId x = 0; x < K.size(k); ++x) {
      Level prefix;
      for (int p = 1; p <= k + 1; ++p) {
        prefix.push_back(K.face(k, p - 1, x));
        by_prefix_[p][prefix].push_back(x);
      }
    }
  }
  const Level& lookup(const Level& prefix) const {
    static const Level none;
    auto& m = by_prefix_[prefix.size()];
    auto it = m.find(prefix);
    return it == m.end() ? none : it->second;
  }

 private:
  std::vector<std::unordered_map<Level, Level, LevelHash>> by_prefix_;
};

/// All m-cycles of K (tuples (x_0..x_{m+1}) of m-simplices with
/// d_i x_j = d_{j-1} x_i for i < j), lexicographic. Fans out over x_0.
inline std::vector<Level> enumerate_cycles(const SimplicialSet& K, int m,
                                           std::size_t budget = kDefaultLevelBudget) {
  const std::size_t count = K.size(m);
  std::vector<std::vector<Level>> parts(count);
  std::atomic<std::size_t> total{0};
  if (m == 0) {
    // no compatibility conditions on pairs of vertices
    std::vector<Level> out;
    for (SimplexId a = 0; a < count; ++a)
      for (SimplexId b = 0; b < count; ++b) {
        if (out.size() >= budget) throw BudgetExceeded(1, out.size(), "cycle enumeration");
        out.push_back({a, b});
      }
    return out;
  }
  FacePrefixIndex index(K, m);
  parallel_for(count, [&](std::size_t first) {
    Level t(m + 2);
    t[0] = static_cast<SimplexId>(first);
    auto& out = parts[first];
    std::function<void(int)> rec = [&](int j) {
      if (j == m + 2) {
        if (total.fetch_add(1) + 1 > budget) throw BudgetExceeded(m + 1, budget, "cycle enumeration");
        out.push_back(t);
        return;
      }
      // d_i x_j = d_{j-1} x_i for all i < j fixes the first j faces of x_j
      Level prefix(j);
      for (int i = 0; i < j; ++i) prefix[i] = K.face(m, j - 1, t[i]);
      for (SimplexId c : index.lookup(prefix)) {
        t[j] = c;
        rec(j + 1);
      }
    };
    rec(1);
  });
  std::vector<Level> out;
  for (auto& p : parts)
    for (auto& t : p) out.push_back(std::move(t));
  return out;
}

/// Reference enumeration over the full product, for tests.
inline std::vector<Level> enumerate_cycles_brute_force(const SimplicialSet& K, int m) {
  std::vector<Level> out;
  const std::size_t s = K.size(m);
  Level t(m + 2, 0);
  if (s == 0) return out;
  for (;;) {
    bool ok = true;
    for (int j = 1; j <= m + 1 && ok; ++j)
      for (int i = 0; i < j && ok; ++i)
        if (m >= 1) ok = K.face(m, i, t[j]) == K.face(m, j - 1, t[i]);
    if (ok) out.push_back(t);
    int p = m + 1;
    while (p >= 0 && t[p] + 1 == s) t[p--] = 0;
    if (p < 0) return out;
    ++t[p];
  }
}

inline std::string tuple_of_labels(const SimplicialSet& K, int k, const Level& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + K.label(k, t[i]);
  return s + "]";
}

/// Extend the n-skeleton S (its cap is n) to the given cap: level k > n is the
/// set of (k-1)-cycles, d_i picks the i-th entry and
/// s_i y = (s_{i-1}d_0y, ..., s_{i-1}d_{i-1}y, y, y, s_i d_{i+1}y, ..., s_i d_{k-1}y).
inline ComplexPtr complete(const ComplexPtr& S, int cap, std::size_t level_budget = kDefaultLevelBudget,
                           std::string name = {}) {
  const int n = S->cap();
  if (cap < n) throw CapTooSmall("complete: cap below the skeleton dimension");
  SimplicialSetData d = S->data();
  if (!name.empty()) d.name = std::move(name);
  for (int k = n + 1; k <= cap; ++k) {
    auto current = make_complex(d);
    auto cycles = enumerate_cycles(*current, k - 1, level_budget);
    LevelIndex index;
    std::vector<std::string> labels;
    labels.reserve(cycles.size());
    for (SimplexId c = 0; c < cycles.size(); ++c) {
      index.emplace(cycles[c], c);
      labels.push_back(tuple_of_labels(*current, k - 1, cycles[c]));
    }
    std::vector<Level> faces(k + 1, Level(cycles.size()));
    for (SimplexId c = 0; c < cycles.size(); ++c)
      for (int i = 0; i <= k; ++i) faces[i][c] = cycles[c][i];
    std::vector<Level> degens(k, Level(current->size(k - 1)));
    for (SimplexId y = 0; y < current->size(k - 1); ++y)
      for (int i = 0; i < k; ++i) {
        Level t(k + 1);
        for (int p = 0; p < i; ++p) t[p] = current->degen(k - 2, i - 1, current->face(k - 1, p, y));
        t[i] = y;
        t[i + 1] = y;
        for (int p = i + 2; p <= k; ++p) t[p] = current->degen(k - 2, i, current->face(k - 1, p - 1, y));
        auto it = index.find(t);
        if (it == index.end())
          throw ValidationError("complete: degeneracy of '" + current->label(k - 1, y) + "' is not a cycle");
        degens[i][y] = it->second;
      }
    d.labels.push_back(std::move(labels));
    d.faces.push_back(std::move(faces));
    d.degens.push_back(std::move(degens));
    d.cap = k;
    for (auto& [nm, m] : d.subcomplexes) m.member.emplace_back(d.labels[k].size(), 0);
  }
  d.cap = cap;
  // subcomplexes of the skeleton do not extend canonically
  if (cap > n) d.subcomplexes.clear();
  return make_complex(std::move(d));
}

struct AdjunctionReport {
  std::size_t maps_into_completion = 0;
  std::size_t skeleton_maps = 0;
  bool restriction_injective = false;
  bool extensions_valid = false;
  bool bijection = false;
};

/// Hom(K, complete(S)) against Hom(R_n K, S): restriction must be a bijection
/// whose inverse is f(x) = (f(d_0 x), ..., f(d_{k} x)).
inline AdjunctionReport completion_adjunction_check(const ComplexPtr& K, const ComplexPtr& S,
                                                    std::size_t budget = 1'000'000) {
  const int n = S->cap();
  if (K->cap() < n) throw CapTooSmall("adjunction check: cap of K below the skeleton dimension");
  auto Shat = complete(S, K->cap());
  auto RK = truncate(K, n);
  AdjunctionReport rep;
  std::map<std::vector<Level>, std::vector<Level>> restricted;
  bool injective = true;
  enumerate_maps(K, Shat, [&](const SimplicialMap& f) {
    std::vector<Level> r(f.table.begin(), f.table.begin() + n + 1);
    if (!restricted.emplace(r, f.table).second) injective = false;
    ++rep.maps_into_completion;
  }, {}, budget);
  bool extensions_ok = true;
  std::size_t matched = 0;
  std::vector<LevelIndex> by_boundary(K->cap() + 1);
  for (int k = n + 1; k <= K->cap(); ++k)
    for (SimplexId c = 0; c < Shat->size(k); ++c) by_boundary[k].emplace(Shat->boundary(k, c), c);
  enumerate_maps(RK, S, [&](const SimplicialMap& g) {
    ++rep.skeleton_maps;
    SimplicialMap f{K, Shat, g.table};
    for (int k = n + 1; k <= K->cap(); ++k) {
      const auto& lookup = by_boundary[k];
      Level l(K->size(k));
      for (SimplexId x = 0; x < K->size(k); ++x) {
        Level b(k + 1);
        for (int i = 0; i <= k; ++i) b[i] = f(k - 1, K->face(k, i, x));
        auto it = lookup.find(b);
        if (it == lookup.end()) {
          extensions_ok = false;
          return;
        }
        l[x] = it->second;
      }
      f.table.push_back(std::move(l));
    }
    if (!validate_map(f).ok()) {
      extensions_ok = false;
      return;
    }
    auto it = restricted.find(g.table);
    if (it != restricted.end() && it->second == f.table) ++matched;
  }, {}, budget);
  rep.restriction_injective = injective;
  rep.extensions_valid = extensions_ok;
  rep.bijection = injective && extensions_ok && rep.maps_into_completion == rep.skeleton_maps &&
                  matched == rep.skeleton_maps;
  return rep;
}

}  // namespace kanset
