#pragma once

// Finite truncated simplicial sets, subcomplex masks and simplicial maps.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kanset/errors.hpp"

namespace kanset {

using SimplexId = std::uint32_t;
using Level = std::vector<SimplexId>;

struct LevelHash {
  std::size_t operator()(const Level& v) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (SimplexId x : v) {
      h ^= x;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

using LevelIndex = std::unordered_map<Level, SimplexId, LevelHash>;

struct SimplexRef {
  int dim = 0;
  SimplexId index = 0;

  friend bool operator==(const SimplexRef&, const SimplexRef&) = default;
  friend auto operator<=>(const SimplexRef&, const SimplexRef&) = default;
};

/// Metadata carried by Eilenberg-Mac Lane complexes.
struct EmTag {
  std::string group;
  int n = 0;

  friend bool operator==(const EmTag&, const EmTag&) = default;
};

/// Per-level membership flags; a subcomplex when closed under all operators.
struct Subcomplex {
  std::vector<std::vector<std::uint8_t>> member;

  bool contains(int k, SimplexId j) const { return member[k][j] != 0; }
  bool contains(SimplexRef r) const { return contains(r.dim, r.index); }
  std::size_t count(int k) const {
    return static_cast<std::size_t>(std::count(member[k].begin(), member[k].end(), 1));
  }
  bool empty_at(int k) const { return count(k) == 0; }
  bool is_empty() const {
    for (std::size_t k = 0; k < member.size(); ++k)
      if (!empty_at(static_cast<int>(k))) return false;
    return true;
  }
  friend bool operator==(const Subcomplex&, const Subcomplex&) = default;
};

/// Raw tables from which a SimplicialSet is built.
/// faces[k][i][j] = d_i of simplex j at level k (k >= 1, faces[0] empty);
/// degens[k][i][j] = s_i of simplex j at level k (k < cap).
struct SimplicialSetData {
  std::string name;
  int cap = 0;
  std::vector<std::vector<std::string>> labels;
  std::vector<std::vector<Level>> faces;
  std::vector<std::vector<Level>> degens;
  std::optional<SimplexId> basepoint;
  std::map<std::string, Subcomplex> subcomplexes;
  std::optional<EmTag> em;
};

/// A simplicial set truncated at dimension cap, every operator an explicit table.
/// Construction checks shapes, ranges and label uniqueness; the simplicial
/// identities are checked separately by validate().
class SimplicialSet {
 public:
  explicit SimplicialSet(SimplicialSetData data) : d_(std::move(data)) {
    const int cap = d_.cap;
    if (cap < 0) throw ParseError("cap must be non-negative");
    if (static_cast<int>(d_.labels.size()) != cap + 1)
      throw ParseError("levels: expected " + std::to_string(cap + 1) + " levels");
    if (d_.faces.empty()) d_.faces.resize(cap + 1);
    if (static_cast<int>(d_.faces.size()) != cap + 1) throw ParseError("faces: wrong number of levels");
    if (static_cast<int>(d_.degens.size()) != cap) throw ParseError("degeneracies: wrong number of levels");
    index_.resize(cap + 1);
    for (int k = 0; k <= cap; ++k) {
      for (SimplexId j = 0; j < d_.labels[k].size(); ++j)
        if (!index_[k].emplace(d_.labels[k][j], j).second)
          throw ParseError("levels[" + std::to_string(k) + "]: duplicate label '" + d_.labels[k][j] + "'");
    }
    auto check_table = [&](const std::vector<Level>& ops, int k, int target, const char* what) {
      if (static_cast<int>(ops.size()) != k + 1)
        throw ParseError(std::string(what) + "[" + std::to_string(k) + "]: expected " + std::to_string(k + 1) +
                         " operators");
      for (std::size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].size() != size(k))
          throw ParseError(std::string(what) + "[" + std::to_string(k) + "][" + std::to_string(i) +
                           "]: expected " + std::to_string(size(k)) + " entries");
        for (SimplexId v : ops[i])
          if (v >= size(target))
            throw ParseError(std::string(what) + "[" + std::to_string(k) + "][" + std::to_string(i) +
                             "]: index out of range");
      }
    };
    if (!d_.faces[0].empty()) throw ParseError("faces: level 0 has no face operators");
    for (int k = 1; k <= cap; ++k) check_table(d_.faces[k], k, k - 1, "faces");
    for (int k = 0; k < cap; ++k) check_table(d_.degens[k], k, k + 1, "degeneracies");
    if (d_.basepoint && *d_.basepoint >= size(0)) throw ParseError("basepoint out of range");
    for (const auto& [nm, mask] : d_.subcomplexes) {
      if (static_cast<int>(mask.member.size()) != cap + 1)
        throw ParseError("subcomplex '" + nm + "': wrong number of levels");
      for (int k = 0; k <= cap; ++k)
        if (mask.member[k].size() != size(k))
          throw ParseError("subcomplex '" + nm + "': wrong level size at " + std::to_string(k));
    }
  }

  const std::string& name() const noexcept { return d_.name; }
  int cap() const noexcept { return d_.cap; }
  std::size_t size(int k) const { return d_.labels.at(k).size(); }
  const std::string& label(int k, SimplexId j) const { return d_.labels[k][j]; }
  const std::string& label(SimplexRef r) const { return label(r.dim, r.index); }
  const std::vector<std::string>& labels(int k) const { return d_.labels[k]; }

  std::optional<SimplexId> find(int k, const std::string& label) const {
    if (k < 0 || k > d_.cap) return std::nullopt;
    auto it = index_[k].find(label);
    if (it == index_[k].end()) return std::nullopt;
    return it->second;
  }

  /// d_i of simplex x at level k.
  SimplexId face(int k, int i, SimplexId x) const { return d_.faces[k][i][x]; }
  /// s_i of simplex x at level k (requires k < cap).
  SimplexId degen(int k, int i, SimplexId x) const { return d_.degens[k][i][x]; }

  /// (d_0 x, ..., d_k x) for x at level k >= 1.
  Level boundary(int k, SimplexId x) const {
    if (k < 1) throw PreconditionError("boundary of a vertex");
    Level b(k + 1);
    for (int i = 0; i <= k; ++i) b[i] = d_.faces[k][i][x];
    return b;
  }

  /// Witness (i, y) with x = s_i y, if x is degenerate.
  std::optional<std::pair<int, SimplexId>> degeneracy_witness(int k, SimplexId x) const {
    for (int i = 0; i < k; ++i) {
      SimplexId y = d_.faces[k][i][x];
      if (d_.degens[k - 1][i][y] == x) return std::pair{i, y};
    }
    return std::nullopt;
  }
  bool is_degenerate(int k, SimplexId x) const { return degeneracy_witness(k, x).has_value(); }

  const std::optional<SimplexId>& basepoint() const noexcept { return d_.basepoint; }
  bool pointed() const noexcept { return d_.basepoint.has_value(); }

  /// The iterated degeneracy of the basepoint at level k.
  SimplexId basepoint_at(int k) const {
    if (!d_.basepoint) throw PreconditionError("complex '" + d_.name + "' has no basepoint");
    SimplexId x = *d_.basepoint;
    for (int l = 0; l < k; ++l) x = d_.degens[l][0][x];
    return x;
  }

  const std::map<std::string, Subcomplex>& subcomplexes() const noexcept { return d_.subcomplexes; }
  const Subcomplex& subcomplex(const std::string& nm) const {
    auto it = d_.subcomplexes.find(nm);
    if (it == d_.subcomplexes.end())
      throw ParseError("complex '" + d_.name + "' has no subcomplex named '" + nm + "'");
    return it->second;
  }

  const std::optional<EmTag>& em() const noexcept { return d_.em; }
  const SimplicialSetData& data() const noexcept { return d_; }

 private:
  SimplicialSetData d_;
  std::vector<std::unordered_map<std::string, SimplexId>> index_;
};

using ComplexPtr = std::shared_ptr<const SimplicialSet>;

inline ComplexPtr make_complex(SimplicialSetData d) {
  return std::make_shared<const SimplicialSet>(std::move(d));
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

inline const char* identity_law(int identity) {
  switch (identity) {
    case 1: return "d_i d_j = d_{j-1} d_i";
    case 2: return "s_i s_j = s_{j+1} s_i";
    case 3: return "d_i s_j = s_{j-1} d_i";
    case 4: return "d_i s_i = id = d_{i+1} s_i";
    case 5: return "d_i s_j = s_j d_{i-1}";
    default: return "subcomplex closure";
  }
}

struct IdentityViolation {
  int identity = 0;  // 1..5, or 0 for a subcomplex that is not closed
  int k = 0;
  int i = 0;
  int j = 0;
  std::string simplex;
  std::string detail;

  std::string describe() const {
    std::string s = identity ? "(" + std::to_string(identity) + ") " : std::string();
    return s + identity_law(identity) + " fails at level " + std::to_string(k) + ", i=" + std::to_string(i) +
           ", j=" + std::to_string(j) + ", simplex " + simplex + (detail.empty() ? "" : ": " + detail);
  }
};

struct ValidationReport {
  std::vector<IdentityViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Every violated instance of the five simplicial identities within the cap,
/// plus any named subcomplex that is not closed under the operators.
inline ValidationReport validate(const SimplicialSet& K) {
  ValidationReport rep;
  const int N = K.cap();
  auto fail = [&](int id, int k, int i, int j, SimplexId x, std::string detail = {}) {
    rep.violations.push_back({id, k, i, j, K.label(k, x), std::move(detail)});
  };
  for (int k = 0; k <= N; ++k) {
    for (SimplexId x = 0; x < K.size(k); ++x) {
      // (1)
      if (k >= 2)
        for (int j = 1; j <= k; ++j)
          for (int i = 0; i < j; ++i)
            if (K.face(k - 1, i, K.face(k, j, x)) != K.face(k - 1, j - 1, K.face(k, i, x))) fail(1, k, i, j, x);
      if (k + 1 > N) continue;
      // (2)
      if (k + 2 <= N)
        for (int j = 0; j <= k; ++j)
          for (int i = 0; i <= j; ++i)
            if (K.degen(k + 1, i, K.degen(k, j, x)) != K.degen(k + 1, j + 1, K.degen(k, i, x))) fail(2, k, i, j, x);
      for (int j = 0; j <= k; ++j) {
        SimplexId sx = K.degen(k, j, x);
        for (int i = 0; i <= k + 1; ++i) {
          SimplexId lhs = K.face(k + 1, i, sx);
          if (i < j) {
            // (3)
            if (lhs != K.degen(k - 1, j - 1, K.face(k, i, x))) fail(3, k, i, j, x);
          } else if (i == j || i == j + 1) {
            // (4)
            if (lhs != x) fail(4, k, i, j, x, i == j ? "d_i s_i x != x" : "d_{i+1} s_i x != x");
          } else {
            // (5)
            if (lhs != K.degen(k - 1, j, K.face(k, i - 1, x))) fail(5, k, i, j, x);
          }
        }
      }
    }
  }
  for (const auto& [nm, mask] : K.subcomplexes()) {
    for (int k = 0; k <= N; ++k)
      for (SimplexId x = 0; x < K.size(k); ++x) {
        if (!mask.contains(k, x)) continue;
        for (int i = 0; i <= k && k >= 1; ++i)
          if (!mask.contains(k - 1, K.face(k, i, x))) fail(0, k, i, 0, x, "subcomplex '" + nm + "' not closed under d_i");
        if (k < N)
          for (int i = 0; i <= k; ++i)
            if (!mask.contains(k + 1, K.degen(k, i, x)))
              fail(0, k, i, 0, x, "subcomplex '" + nm + "' not closed under s_i");
      }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Subcomplexes
// ---------------------------------------------------------------------------

inline Subcomplex empty_subcomplex(const SimplicialSet& K) {
  Subcomplex m;
  for (int k = 0; k <= K.cap(); ++k) m.member.emplace_back(K.size(k), 0);
  return m;
}

inline Subcomplex full_subcomplex(const SimplicialSet& K) {
  Subcomplex m;
  for (int k = 0; k <= K.cap(); ++k) m.member.emplace_back(K.size(k), 1);
  return m;
}

/// Smallest subcomplex containing the seeds.
inline Subcomplex subcomplex_closure(const SimplicialSet& K, const std::vector<SimplexRef>& seeds) {
  Subcomplex m = empty_subcomplex(K);
  std::deque<SimplexRef> work;
  auto add = [&](int k, SimplexId x) {
    if (!m.member[k][x]) {
      m.member[k][x] = 1;
      work.push_back({k, x});
    }
  };
  for (const auto& s : seeds) {
    if (s.dim < 0 || s.dim > K.cap() || s.index >= K.size(s.dim)) throw ParseError("closure seed out of range");
    add(s.dim, s.index);
  }
  while (!work.empty()) {
    auto [k, x] = work.front();
    work.pop_front();
    if (k >= 1)
      for (int i = 0; i <= k; ++i) add(k - 1, K.face(k, i, x));
    if (k < K.cap())
      for (int i = 0; i <= k; ++i) add(k + 1, K.degen(k, i, x));
  }
  return m;
}

inline Subcomplex basepoint_closure(const SimplicialSet& K) {
  if (!K.basepoint()) throw PreconditionError("complex '" + K.name() + "' has no basepoint");
  return subcomplex_closure(K, {{0, *K.basepoint()}});
}

inline bool is_closed(const SimplicialSet& K, const Subcomplex& m) {
  for (int k = 0; k <= K.cap(); ++k)
    for (SimplexId x = 0; x < K.size(k); ++x) {
      if (!m.contains(k, x)) continue;
      for (int i = 0; i <= k && k >= 1; ++i)
        if (!m.contains(k - 1, K.face(k, i, x))) return false;
      if (k < K.cap())
        for (int i = 0; i <= k; ++i)
          if (!m.contains(k + 1, K.degen(k, i, x))) return false;
    }
  return true;
}

inline Subcomplex subcomplex_union(const Subcomplex& a, const Subcomplex& b) {
  Subcomplex m = a;
  for (std::size_t k = 0; k < m.member.size(); ++k)
    for (std::size_t j = 0; j < m.member[k].size(); ++j) m.member[k][j] |= b.member[k][j];
  return m;
}

// ---------------------------------------------------------------------------
// Maps
// ---------------------------------------------------------------------------

/// Levelwise index functions source -> target.
struct SimplicialMap {
  ComplexPtr source;
  ComplexPtr target;
  std::vector<Level> table;

  SimplexId operator()(int k, SimplexId x) const { return table[k][x]; }
};

struct MapViolation {
  std::string op;  // "d_i" or "s_i" or "shape"
  int k = 0;
  int i = 0;
  std::string simplex;

  std::string describe() const {
    return op + " not preserved at level " + std::to_string(k) + ", i=" + std::to_string(i) + ", simplex " + simplex;
  }
};

struct MapReport {
  std::vector<MapViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

inline void check_map_shape(const SimplicialMap& f) {
  if (!f.source || !f.target) throw ParseError("map without source or target");
  if (f.source->cap() != f.target->cap())
    throw ParseError("map caps differ (" + std::to_string(f.source->cap()) + " vs " +
                     std::to_string(f.target->cap()) + "); truncate first");
  if (static_cast<int>(f.table.size()) != f.source->cap() + 1) throw ParseError("map table has wrong level count");
  for (int k = 0; k <= f.source->cap(); ++k) {
    if (f.table[k].size() != f.source->size(k))
      throw ParseError("map table level " + std::to_string(k) + " has wrong size");
    for (SimplexId v : f.table[k])
      if (v >= f.target->size(k)) throw ParseError("map table level " + std::to_string(k) + " out of range");
  }
}

/// Every operator-commutation failure of f.
inline MapReport validate_map(const SimplicialMap& f) {
  check_map_shape(f);
  MapReport rep;
  const auto& K = *f.source;
  const auto& T = *f.target;
  for (int k = 0; k <= K.cap(); ++k)
    for (SimplexId x = 0; x < K.size(k); ++x) {
      for (int i = 0; i <= k && k >= 1; ++i)
        if (T.face(k, i, f(k, x)) != f(k - 1, K.face(k, i, x))) rep.violations.push_back({"d_i", k, i, K.label(k, x)});
      if (k < K.cap())
        for (int i = 0; i <= k; ++i)
          if (T.degen(k, i, f(k, x)) != f(k + 1, K.degen(k, i, x)))
            rep.violations.push_back({"s_i", k, i, K.label(k, x)});
    }
  return rep;
}

/// True when f carries the subcomplex a into b.
inline bool carries(const SimplicialMap& f, const Subcomplex& a, const Subcomplex& b) {
  for (int k = 0; k <= f.source->cap(); ++k)
    for (SimplexId x = 0; x < f.source->size(k); ++x)
      if (a.contains(k, x) && !b.contains(k, f(k, x))) return false;
  return true;
}

inline SimplicialMap identity_map(const ComplexPtr& K) {
  SimplicialMap f{K, K, {}};
  for (int k = 0; k <= K->cap(); ++k) {
    Level l(K->size(k));
    for (SimplexId x = 0; x < l.size(); ++x) l[x] = x;
    f.table.push_back(std::move(l));
  }
  return f;
}

/// f ∘ g.
inline SimplicialMap compose(const SimplicialMap& f, const SimplicialMap& g) {
  check_map_shape(f);
  check_map_shape(g);
  if (g.target.get() != f.source.get() && g.target->data().labels != f.source->data().labels)
    throw ParseError("compose: target of the inner map is not the source of the outer map");
  SimplicialMap h{g.source, f.target, {}};
  for (int k = 0; k <= g.source->cap(); ++k) {
    Level l(g.source->size(k));
    for (SimplexId x = 0; x < l.size(); ++x) l[x] = f(k, g(k, x));
    h.table.push_back(std::move(l));
  }
  return h;
}

/// Index from boundary tuples to the simplices of a level having them.
class BoundaryIndex {
 public:
  explicit BoundaryIndex(const SimplicialSet& K) : by_level_(K.cap() + 1) {
    for (int k = 1; k <= K.cap(); ++k)
      for (SimplexId x = 0; x < K.size(k); ++x) by_level_[k][K.boundary(k, x)].push_back(x);
  }
  const Level& lookup(int k, const Level& boundary) const {
    static const Level none;
    auto it = by_level_[k].find(boundary);
    return it == by_level_[k].end() ? none : it->second;
  }

 private:
  std::vector<std::unordered_map<Level, Level, LevelHash>> by_level_;
};

/// Enumerate every simplicial map K -> T (equal caps), in lexicographic order
/// of tables, calling visit on each; `allow(k, x, fx)` prunes candidates.
/// Stops with BudgetExceeded after `budget` maps.
inline std::size_t enumerate_maps(const ComplexPtr& K, const ComplexPtr& T,
                                  const std::function<void(const SimplicialMap&)>& visit,
                                  const std::function<bool(int, SimplexId, SimplexId)>& allow = {},
                                  std::size_t budget = 1'000'000) {
  if (K->cap() != T->cap()) throw ParseError("enumerate_maps: caps differ; truncate first");
  const int N = K->cap();
  BoundaryIndex tindex(*T);
  std::vector<SimplexRef> order;
  // (i, y) with s_i y = x, for every x
  std::vector<std::vector<std::vector<std::pair<int, SimplexId>>>> preimages(N + 1);
  for (int k = 0; k <= N; ++k) {
    preimages[k].resize(K->size(k));
    for (SimplexId x = 0; x < K->size(k); ++x) order.push_back({k, x});
  }
  for (int k = 0; k < N; ++k)
    for (SimplexId y = 0; y < K->size(k); ++y)
      for (int i = 0; i <= k; ++i) preimages[k + 1][K->degen(k, i, y)].push_back({i, y});

  SimplicialMap f{K, T, {}};
  for (int k = 0; k <= N; ++k) f.table.emplace_back(K->size(k), 0);
  std::size_t found = 0;
  Level all0(T->size(0));
  for (SimplexId v = 0; v < all0.size(); ++v) all0[v] = v;

  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == order.size()) {
      if (++found > budget) throw BudgetExceeded(N, found - 1, "map enumeration");
      visit(f);
      return;
    }
    auto [k, x] = order[pos];
    Level forced;
    const Level* cands = &all0;
    if (!preimages[k][x].empty()) {
      auto [i, y] = preimages[k][x].front();
      forced = {T->degen(k - 1, i, f(k - 1, y))};
      cands = &forced;
    } else if (k >= 1) {
      Level want(k + 1);
      for (int i = 0; i <= k; ++i) want[i] = f(k - 1, K->face(k, i, x));
      cands = &tindex.lookup(k, want);
    }
    for (SimplexId c : *cands) {
      if (allow && !allow(k, x, c)) continue;
      bool ok = true;
      for (int i = 0; i <= k && k >= 1 && ok; ++i) ok = T->face(k, i, c) == f(k - 1, K->face(k, i, x));
      for (const auto& [i, y] : preimages[k][x])
        if (ok) ok = T->degen(k - 1, i, f(k - 1, y)) == c;
      if (!ok) continue;
      f.table[k][x] = c;
      rec(pos + 1);
    }
  };
  rec(0);
  return found;
}

}  // namespace kanset
