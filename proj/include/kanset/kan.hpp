#pragma once

// Cycles, horns, fillings, the Kan and minimality checks, the matrix lemma
// and homotopy of simplices.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kanset/constructors.hpp"
#include "kanset/errors.hpp"
#include "kanset/parallel.hpp"
#include "kanset/simplicial_set.hpp"

namespace kanset {

struct CycleCheck {
  bool ok = true;
  std::optional<std::pair<int, int>> violated;  // first (i, j), i < j
};

/// (x_0, ..., x_{m+1}) of m-simplices with d_i x_j = d_{j-1} x_i for i < j.
/// Positions equal to `gap` are skipped (horn check).
inline CycleCheck check_compatible(const SimplicialSet& K, int m, const Level& entries, int gap = -1) {
  if (static_cast<int>(entries.size()) != m + 2)
    throw PreconditionError("cycle of " + std::to_string(m) + "-simplices needs " + std::to_string(m + 2) + " entries");
  for (std::size_t p = 0; p < entries.size(); ++p)
    if (static_cast<int>(p) != gap && entries[p] >= K.size(m)) throw PreconditionError("cycle entry out of range");
  CycleCheck c;
  if (m == 0) return c;
  for (int j = 1; j <= m + 1; ++j)
    for (int i = 0; i < j; ++i) {
      if (i == gap || j == gap) continue;
      if (K.face(m, i, entries[j]) != K.face(m, j - 1, entries[i])) {
        c.ok = false;
        c.violated = {i, j};
        return c;
      }
    }
  return c;
}

inline CycleCheck is_cycle(const SimplicialSet& K, int m, const Level& entries) {
  return check_compatible(K, m, entries);
}

inline CycleCheck is_horn(const SimplicialSet& K, int m, const Level& entries, int gap) {
  if (gap < 0 || gap > m + 1) throw PreconditionError("horn gap out of range");
  return check_compatible(K, m, entries, gap);
}

/// Fillings of boundary tuples, plus lazily built per-gap horn tables.
class FillingIndex {
 public:
  explicit FillingIndex(ComplexPtr K) : K_(std::move(K)), boundaries_(K_->cap() + 1) {
    for (int k = 1; k <= K_->cap(); ++k)
      for (SimplexId x = 0; x < K_->size(k); ++x) boundaries_[k][K_->boundary(k, x)].push_back(x);
    for (int k = 0; k <= K_->cap(); ++k) {
      horns_.emplace_back(k + 1);
      flags_.emplace_back(std::make_unique<std::once_flag[]>(k + 1));
    }
  }

  const SimplicialSet& complex() const noexcept { return *K_; }
  const ComplexPtr& ptr() const noexcept { return K_; }

  /// Every (m+1)-simplex whose boundary is the given m-cycle, ascending.
  const Level& fillings(int m, const Level& cycle) const {
    require_level(m + 1);
    static const Level none;
    auto it = boundaries_[m + 1].find(cycle);
    return it == boundaries_[m + 1].end() ? none : it->second;
  }

  std::optional<SimplexId> find_filling(int m, const Level& cycle) const {
    const auto& f = fillings(m, cycle);
    if (f.empty()) return std::nullopt;
    return f.front();
  }

  /// Every (m+1)-simplex z with d_i z = entries[i] for i != gap, ascending.
  const Level& horn_fillings(int m, const Level& entries, int gap) const {
    require_level(m + 1);
    const int k = m + 1;
    std::call_once(flags_[k][gap], [&] {
      auto& table = horns_[k][gap];
      for (SimplexId z = 0; z < K_->size(k); ++z) {
        Level key;
        for (int i = 0; i <= k; ++i)
          if (i != gap) key.push_back(K_->face(k, i, z));
        table[key].push_back(z);
      }
    });
    Level key;
    for (int i = 0; i <= k; ++i)
      if (i != gap) key.push_back(entries[i]);
    static const Level none;
    auto it = horns_[k][gap].find(key);
    return it == horns_[k][gap].end() ? none : it->second;
  }

 private:
  void require_level(int k) const {
    if (k > K_->cap())
      throw CapTooSmall("fillings of dimension " + std::to_string(k) + " lie above the cap " + std::to_string(K_->cap()));
  }

  ComplexPtr K_;
  std::vector<std::unordered_map<Level, Level, LevelHash>> boundaries_;
  mutable std::vector<std::vector<std::unordered_map<Level, Level, LevelHash>>> horns_;
  std::vector<std::unique_ptr<std::once_flag[]>> flags_;
};

inline std::optional<SimplexId> find_filling(const FillingIndex& F, int m, const Level& cycle) {
  return F.find_filling(m, cycle);
}

struct Completion {
  SimplexId completion;  // the missing m-simplex
  SimplexId filling;     // the (m+1)-simplex
};

/// Every (completion, filling) pair for an (m, gap)-horn.
inline std::vector<Completion> find_completions(const FillingIndex& F, int m, const Level& entries, int gap) {
  std::vector<Completion> out;
  for (SimplexId z : F.horn_fillings(m, entries, gap)) out.push_back({F.complex().face(m + 1, gap, z), z});
  return out;
}

// ---------------------------------------------------------------------------
// Kan check
// ---------------------------------------------------------------------------

struct HornCounterexample {
  int dim = 0;  // dimension of the horn's simplices
  int gap = 0;
  Level entries;  // entries[gap] is meaningless
};

struct KanReport {
  bool passed = true;
  int up_to = 0;
  std::size_t horns_checked = 0;
  std::optional<HornCounterexample> counterexample;
};

/// Visit every (m, gap)-horn of K in lexicographic order of entries.
/// Fans out over the first specified entry; visit(slot, entries).
template <class Visit>
void for_each_horn(const SimplicialSet& K, int m, int gap, Visit&& visit) {
  const std::size_t s = K.size(m);
  const int first = gap == 0 ? 1 : 0;
  // candidates for x_j by a single fixed face
  std::vector<std::vector<Level>> by_face;
  if (m >= 1) {
    by_face.assign(m + 1, std::vector<Level>(K.size(m - 1)));
    for (SimplexId x = 0; x < s; ++x)
      for (int i = 0; i <= m; ++i) by_face[i][K.face(m, i, x)].push_back(x);
  }
  Level all(s);
  for (SimplexId x = 0; x < s; ++x) all[x] = x;
  parallel_for(s, [&](std::size_t start) {
    Level t(m + 2, 0);
    t[first] = static_cast<SimplexId>(start);
    std::function<void(int)> rec = [&](int j) {
      if (j == m + 2) {
        visit(start, t);
        return;
      }
      if (j == gap) {
        rec(j + 1);
        return;
      }
      const Level* cands = &all;
      int used = -1;
      if (m >= 1)
        for (int i = 0; i < j; ++i)
          if (i != gap) {
            cands = &by_face[i][K.face(m, j - 1, t[i])];
            used = i;
            break;
          }
      for (SimplexId c : *cands) {
        bool ok = true;
        for (int i = 0; i < j && ok && m >= 1; ++i)
          if (i != gap && i != used) ok = K.face(m, i, c) == K.face(m, j - 1, t[i]);
        if (!ok) continue;
        t[j] = c;
        rec(j + 1);
      }
    };
    rec(first + 1);
  });
}

/// Every (m, gap)-horn with m <= up_to must have a filling (within cap).
inline KanReport kan_check(const FillingIndex& F, int up_to) {
  const auto& K = F.complex();
  if (up_to + 1 > K.cap())
    throw CapTooSmall("kan_check up to " + std::to_string(up_to) + " needs cap >= " + std::to_string(up_to + 1));
  KanReport rep;
  rep.up_to = up_to;
  for (int m = 0; m <= up_to; ++m)
    for (int gap = 0; gap <= m + 1; ++gap) {
      std::vector<std::optional<Level>> first_bad(K.size(m));
      std::vector<std::size_t> counts(K.size(m), 0);
      for_each_horn(K, m, gap, [&](std::size_t slot, const Level& t) {
        ++counts[slot];
        if (!first_bad[slot] && F.horn_fillings(m, t, gap).empty()) first_bad[slot] = t;
      });
      for (std::size_t c : counts) rep.horns_checked += c;
      for (const auto& b : first_bad)
        if (b) {
          rep.passed = false;
          Level e = *b;
          e[gap] = 0;
          rep.counterexample = HornCounterexample{m, gap, e};
          return rep;
        }
    }
  return rep;
}

inline KanReport kan_check(const ComplexPtr& K, int up_to) { return kan_check(FillingIndex(K), up_to); }

struct SkeletonReport {
  bool passed = true;
  std::optional<HornCounterexample> unfilled;       // a lower horn without filling
  std::optional<HornCounterexample> uncompletable;  // a top horn not completable to a cycle
};

/// For an n-skeleton S: horns below n fill, and top horns complete to n-cycles.
inline SkeletonReport kan_skeleton_check(const ComplexPtr& S) {
  const int n = S->cap();
  SkeletonReport rep;
  if (n >= 1) {
    auto lower = kan_check(S, n - 1);
    if (!lower.passed) {
      rep.passed = false;
      rep.unfilled = lower.counterexample;
      return rep;
    }
  }
  for (int gap = 0; gap <= n + 1; ++gap) {
    std::vector<std::optional<Level>> bad(S->size(n));
    for_each_horn(*S, n, gap, [&](std::size_t slot, const Level& t) {
      if (bad[slot]) return;
      Level c = t;
      for (SimplexId x = 0; x < S->size(n); ++x) {
        c[gap] = x;
        if (is_cycle(*S, n, c).ok) return;
      }
      bad[slot] = t;
    });
    for (const auto& b : bad)
      if (b) {
        rep.passed = false;
        Level e = *b;
        e[gap] = 0;
        rep.uncompletable = HornCounterexample{n, gap, e};
        return rep;
      }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Homotopy of simplices
// ---------------------------------------------------------------------------

/// (s_{n-1}d_0x, ..., s_{n-1}d_{n-1}x, x, y); for n = 0 just (x, y).
inline Level homotopy_tuple(const SimplicialSet& K, int n, SimplexId x, SimplexId y) {
  Level t;
  for (int i = 0; i < n; ++i) t.push_back(K.degen(n - 1, n - 1, K.face(n, i, x)));
  t.push_back(x);
  t.push_back(y);
  return t;
}

/// A filling h of the homotopy tuple, if x ~ y.
inline std::optional<SimplexId> homotopic(const FillingIndex& F, int n, SimplexId x, SimplexId y) {
  const auto& K = F.complex();
  if (n + 1 > K.cap()) throw CapTooSmall("homotopy of " + std::to_string(n) + "-simplices lies above the cap");
  if (n >= 1 && K.boundary(n, x) != K.boundary(n, y)) throw PreconditionError("homotopic: boundaries differ");
  return F.find_filling(n, homotopy_tuple(K, n, x, y));
}

struct RelativeWitness {
  SimplexId h = 0;
  SimplexId h_L = 0;
  bool by_fiat = false;  // x ~ x declared when d_0 x is outside L
};

/// Relative homotopy: (h_L, s_{n-1}d_1x, ..., s_{n-1}d_{n-1}x, x, y) filled with h_L ∈ L_n.
inline std::optional<RelativeWitness> homotopic_rel(const FillingIndex& F, const Subcomplex& L, int n, SimplexId x,
                                                    SimplexId y) {
  const auto& K = F.complex();
  if (n < 1) throw PreconditionError("relative homotopy needs n >= 1");
  if (n + 1 > K.cap()) throw CapTooSmall("relative homotopy of " + std::to_string(n) + "-simplices lies above the cap");
  const bool x_in = L.contains(n - 1, K.face(n, 0, x));
  if (x == y && !x_in) return RelativeWitness{K.degen(n, n, x), K.face(n + 1, 0, K.degen(n, n, x)), true};
  for (int i = 1; i <= n; ++i)
    if (K.face(n, i, x) != K.face(n, i, y)) throw PreconditionError("homotopic_rel: faces 1..n differ");
  if (!x_in || !L.contains(n - 1, K.face(n, 0, y))) throw PreconditionError("homotopic_rel: d_0 not in the subcomplex");
  Level t(n + 2, 0);
  for (int i = 1; i < n; ++i) t[i] = K.degen(n - 1, n - 1, K.face(n, i, x));
  t[n] = x;
  t[n + 1] = y;
  for (SimplexId h : F.horn_fillings(n, t, 0)) {
    SimplexId hl = K.face(n + 1, 0, h);
    if (L.contains(n, hl)) return RelativeWitness{h, hl, false};
  }
  return std::nullopt;
}

struct MinimalReport {
  bool passed = true;
  int checked_up_to = -1;  // highest level decided
  std::optional<std::pair<SimplexRef, SimplexRef>> witness;
};

/// Minimality within cap: homotopic simplices with equal boundary are equal.
/// As a skeleton, the top level instead requires distinct boundaries.
inline MinimalReport minimal_check(const FillingIndex& F, bool as_skeleton = false) {
  const auto& K = F.complex();
  MinimalReport rep;
  for (int n = 0; n <= K.cap(); ++n) {
    const bool top = n + 1 > K.cap();
    if (top && !as_skeleton) break;
    std::unordered_map<Level, Level, LevelHash> groups;
    for (SimplexId x = 0; x < K.size(n); ++x) groups[n == 0 ? Level{} : K.boundary(n, x)].push_back(x);
    std::vector<Level> ordered;
    for (auto& [_, g] : groups) ordered.push_back(g);
    std::sort(ordered.begin(), ordered.end());
    for (const auto& g : ordered)
      for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = a + 1; b < g.size(); ++b) {
          bool same = top || homotopic(F, n, g[a], g[b]).has_value() || homotopic(F, n, g[b], g[a]).has_value();
          if (same) {
            rep.passed = false;
            rep.witness = {{n, g[a]}, {n, g[b]}};
            rep.checked_up_to = n;
            return rep;
          }
        }
    rep.checked_up_to = n;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Matrix lemma
// ---------------------------------------------------------------------------

/// Given m+3 compatible m-cycles c^0..c^{m+2} (c^j[i] = c^i[j-1] for i < j),
/// all but c^k filled, fill c^k: complete the horn of fillings and take d_k.
/// `known` may supply the fillings; missing ones are searched for.
inline SimplexId matrix_lemma_solve(const FillingIndex& F, int m, const std::vector<Level>& cycles, int k,
                                    const std::vector<std::optional<SimplexId>>& known = {}) {
  const auto& K = F.complex();
  const int count = m + 3;
  if (static_cast<int>(cycles.size()) != count)
    throw PreconditionError("matrix lemma: need " + std::to_string(count) + " cycles");
  if (k < 0 || k >= count) throw PreconditionError("matrix lemma: position out of range");
  if (m + 2 > K.cap()) throw CapTooSmall("matrix lemma: horn filling lies above the cap");
  for (int j = 0; j < count; ++j) {
    if (static_cast<int>(cycles[j].size()) != m + 2) throw PreconditionError("matrix lemma: cycle of wrong length");
    if (!is_cycle(K, m, cycles[j]).ok) throw PreconditionError("matrix lemma: entry " + std::to_string(j) + " is not a cycle");
  }
  for (int j = 1; j < count; ++j)
    for (int i = 0; i < j; ++i)
      if (cycles[j][i] != cycles[i][j - 1])
        throw PreconditionError("matrix lemma: compatibility fails at i=" + std::to_string(i) + ", j=" + std::to_string(j));
  Level horn(count, 0);
  for (int i = 0; i < count; ++i) {
    if (i == k) continue;
    std::optional<SimplexId> y;
    if (i < static_cast<int>(known.size())) y = known[i];
    if (!y) y = F.find_filling(m, cycles[i]);
    if (!y) throw PreconditionError("matrix lemma: cycle " + std::to_string(i) + " has no filling");
    if (K.boundary(m + 1, *y) != cycles[i]) throw PreconditionError("matrix lemma: supplied filling is wrong");
    horn[i] = *y;
  }
  auto completions = find_completions(F, m + 1, horn, k);
  if (completions.empty()) throw PreconditionError("matrix lemma: horn of fillings has no filling (complex not Kan)");
  SimplexId yk = completions.front().completion;
  if (K.boundary(m + 1, yk) != cycles[k]) throw PreconditionError("matrix lemma: completion does not fill the cycle");
  return yk;
}

/// A random compatible tuple for the matrix lemma: fillings y_i (i != k) of a
/// random horn, their boundaries, and the column c^k forced by compatibility.
inline std::optional<std::vector<Level>> random_compatible_cycles(const SimplicialSet& K, int m, int k,
                                                                  std::mt19937_64& rng) {
  const int count = m + 3;
  const std::size_t s = K.size(m + 1);
  if (s == 0) return std::nullopt;
  Level y(count, 0);
  std::function<bool(int)> rec = [&](int j) -> bool {
    if (j == count) return true;
    if (j == k) return rec(j + 1);
    Level order(s);
    for (SimplexId x = 0; x < s; ++x) order[x] = x;
    std::shuffle(order.begin(), order.end(), rng);
    for (SimplexId c : order) {
      bool ok = true;
      for (int i = 0; i < j && ok; ++i)
        if (i != k) ok = K.face(m + 1, i, c) == K.face(m + 1, j - 1, y[i]);
      if (!ok) continue;
      y[j] = c;
      if (rec(j + 1)) return true;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  std::vector<Level> cycles(count);
  for (int i = 0; i < count; ++i)
    if (i != k) cycles[i] = K.boundary(m + 1, y[i]);
  cycles[k].resize(m + 2);
  for (int i = 0; i < m + 2; ++i) cycles[k][i] = i < k ? cycles[i][k - 1] : cycles[i + 1][k];
  return cycles;
}

struct MatrixLemmaReport {
  bool passed = true;
  int m = 0;
  std::size_t instances = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<int, SimplexId>> solutions;  // (k, filling) per instance
};

/// `count` seeded random compatible tuples; each solution must fill c^k.
inline MatrixLemmaReport matrix_lemma_property(const FillingIndex& F, int m, std::size_t count, std::uint64_t seed) {
  const auto& K = F.complex();
  MatrixLemmaReport rep;
  rep.m = m;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  while (rep.instances < count) {
    const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(m + 3));
    auto cycles = random_compatible_cycles(K, m, k, rng);
    if (!cycles) throw PreconditionError("matrix lemma: no compatible tuple exists");
    ++rep.instances;
    try {
      SimplexId y = matrix_lemma_solve(F, m, *cycles, k);
      if (K.boundary(m + 1, y) != (*cycles)[k]) rep.passed = false;
      rep.solutions.push_back({k, y});
    } catch (const PreconditionError&) {
      rep.passed = false;
      rep.solutions.push_back({k, static_cast<SimplexId>(-1)});
    }
  }
  return rep;
}

struct KeyLemmaReport {
  bool passed = true;
  int n = 0;
  std::size_t cases = 0;
  std::size_t filled = 0;
};

/// For every filled n-cycle and every y' with the boundary of the replaced
/// entry: the replaced tuple is filled iff the entries are homotopic.
inline KeyLemmaReport key_lemma_property(const FillingIndex& F, int n) {
  const auto& K = F.complex();
  if (n + 1 > K.cap()) throw CapTooSmall("key lemma: fillings lie above the cap");
  KeyLemmaReport rep;
  rep.n = n;
  std::vector<std::vector<SimplexId>> same_boundary;
  std::unordered_map<Level, std::size_t, LevelHash> group_of;
  for (SimplexId y = 0; y < K.size(n); ++y) {
    Level b = n == 0 ? Level{} : K.boundary(n, y);
    auto [it, fresh] = group_of.emplace(b, same_boundary.size());
    if (fresh) same_boundary.emplace_back();
    same_boundary[it->second].push_back(y);
  }
  for (SimplexId z = 0; z < K.size(n + 1); ++z) {
    const Level c = K.boundary(n + 1, z);
    for (int p = 0; p <= n + 1; ++p) {
      Level b = n == 0 ? Level{} : K.boundary(n, c[p]);
      for (SimplexId y : same_boundary[group_of.at(b)]) {
        Level c2 = c;
        c2[p] = y;
        const bool filled = F.find_filling(n, c2).has_value();
        const bool hom = homotopic(F, n, c[p], y).has_value();
        ++rep.cases;
        if (filled) ++rep.filled;
        if (filled != hom) rep.passed = false;
      }
    }
  }
  return rep;
}

}  // namespace kanset
