#pragma once

// Eilenberg-Mac Lane complexes H(A,n) and their multiplication.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "kanset/abelian.hpp"
#include "kanset/constructors.hpp"
#include "kanset/errors.hpp"
#include "kanset/io.hpp"
#include "kanset/simplicial_set.hpp"

namespace kanset {

/// The (n+1)-skeleton: ⋆ below n, A at n, alternating-sum-zero tuples at n+1.
/// Level-n simplices are numbered as in IndexedGroup (zero first).
inline ComplexPtr em_skeleton(const FinAbGroup& A, int n) {
  if (!A.is_finite()) throw PreconditionError("em_skeleton: group " + format_group(A) + " is infinite");
  if (n < 1) throw PreconditionError("em_skeleton: n must be at least 1");
  const IndexedGroup G(A);
  const SimplexId g = static_cast<SimplexId>(G.size());
  SimplicialSetData d;
  d.name = "H(" + format_group(A) + "," + std::to_string(n) + ")";
  d.cap = n + 1;
  d.em = EmTag{format_group(A), n};
  d.basepoint = 0;
  for (int k = 0; k < n; ++k) d.labels.push_back({collapsed_label(k)});
  std::vector<std::string> elems;
  for (SimplexId a = 0; a < g; ++a) elems.push_back(G.label(a));
  d.labels.push_back(elems);

  // level n+1: free a_0..a_n, a_{n+1} = ±(a_0 - a_1 + ... ± a_n)
  std::vector<Level> tuples;
  Level t(n + 2, 0);
  for (;;) {
    std::size_t s = 0;
    for (int i = 0; i <= n; ++i) s = i % 2 == 0 ? G.add(s, t[i]) : G.sub(s, t[i]);
    // sum + (-1)^{n+1} a_{n+1} = 0
    t[n + 1] = static_cast<SimplexId>((n + 1) % 2 == 0 ? G.neg(s) : s);
    tuples.push_back(t);
    int p = n;
    while (p >= 0 && t[p] + 1 == g) t[p--] = 0;
    if (p < 0) break;
    ++t[p];
  }
  LevelIndex index;
  std::vector<std::string> top;
  for (SimplexId c = 0; c < tuples.size(); ++c) {
    index.emplace(tuples[c], c);
    std::string s = "[";
    for (int i = 0; i <= n + 1; ++i) s += (i ? "," : "") + elems[tuples[c][i]];
    top.push_back(s + "]");
  }
  d.labels.push_back(std::move(top));

  d.faces.resize(n + 2);
  for (int k = 1; k <= n; ++k) d.faces[k].assign(k + 1, Level(d.labels[k].size(), 0));
  for (int i = 0; i <= n + 1; ++i) {
    Level l;
    for (const auto& c : tuples) l.push_back(c[i]);
    d.faces[n + 1].push_back(std::move(l));
  }
  for (int k = 0; k < n; ++k) d.degens.push_back(std::vector<Level>(k + 1, Level{0}));
  std::vector<Level> top_degens;
  for (int i = 0; i <= n; ++i) {
    Level l;
    for (SimplexId a = 0; a < g; ++a) {
      Level c(n + 2, 0);
      c[i] = c[i + 1] = a;
      l.push_back(index.at(c));
    }
    top_degens.push_back(std::move(l));
  }
  d.degens.push_back(std::move(top_degens));
  return make_complex(std::move(d));
}

struct EMSpace {
  ComplexPtr complex;
  FinAbGroup group;
  int n = 0;
  std::vector<std::string> warnings;
};

/// log2 of the growth bound |A|^{k!/n!} for level k.
inline double em_level_bound_log2(const FinAbGroup& A, int n, int k) {
  double e = 1;
  for (int j = n + 1; j <= k; ++j) e *= j;
  return e * std::log2(static_cast<double>(A.order().convert_to<long long>()));
}

/// Completion of em_skeleton(A, n) to the given cap.
inline EMSpace em_space(const FinAbGroup& A, int n, int cap, std::size_t level_budget = kDefaultLevelBudget) {
  if (cap < n + 1) throw CapTooSmall("em_space: cap must be at least n+1");
  auto S = em_skeleton(A, n);
  EMSpace E{nullptr, A, n, {}};
  for (int k = n + 2; k <= cap; ++k)
    if (em_level_bound_log2(A, n, k) > std::log2(static_cast<double>(level_budget)))
      E.warnings.push_back("level " + std::to_string(k) + ": growth bound |A|^(k!/n!) exceeds the level budget " +
                           std::to_string(level_budget));
  E.complex = complete(S, cap, level_budget);
  return E;
}

/// μ : H × H → H, the group law at level n extended to tuples of faces.
/// The source is product(E, E).
inline SimplicialMap mu(const EMSpace& E) {
  const auto& H = E.complex;
  const int n = E.n;
  const IndexedGroup G(E.group);
  auto P = product(H, H);
  SimplicialMap f{P, H, {}};
  BoundaryIndex index(*H);
  for (int k = 0; k <= H->cap(); ++k) {
    const std::size_t s = H->size(k);
    Level l(s * s, 0);
    if (k == n) {
      for (SimplexId a = 0; a < s; ++a)
        for (SimplexId b = 0; b < s; ++b) l[a * s + b] = static_cast<SimplexId>(G.add(a, b));
    } else if (k > n) {
      for (SimplexId a = 0; a < s; ++a)
        for (SimplexId b = 0; b < s; ++b) {
          Level want(k + 1);
          for (int i = 0; i <= k; ++i)
            want[i] = f(k - 1, H->face(k, i, a) * static_cast<SimplexId>(H->size(k - 1)) + H->face(k, i, b));
          const auto& hit = index.lookup(k, want);
          if (hit.size() != 1) throw ValidationError("mu: face tuple has no unique simplex at level " + std::to_string(k));
          l[a * s + b] = hit.front();
        }
    }
    f.table.push_back(std::move(l));
  }
  return f;
}

/// The group law μ induces on level k.
inline SimplexId mu_at(const SimplicialMap& m, int k, SimplexId a, SimplexId b) {
  return m(k, a * static_cast<SimplexId>(m.target->size(k)) + b);
}

}  // namespace kanset
