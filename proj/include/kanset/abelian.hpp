#pragma once

// Exact arithmetic for finitely generated abelian groups and integer matrices.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "kanset/errors.hpp"

namespace kanset {

using BigInt = boost::multiprecision::cpp_int;

/// Non-negative remainder of a modulo m (m > 0).
inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

inline BigInt abs_value(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

// ---------------------------------------------------------------------------
// IntegerMatrix
// ---------------------------------------------------------------------------

/// Dense row-major matrix of arbitrary-precision integers.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}
  IntegerMatrix(std::initializer_list<std::initializer_list<long long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw ParseError("IntegerMatrix: ragged initializer");
      for (long long v : row) entries_.emplace_back(v);
    }
  }

  static IntegerMatrix identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntegerMatrix from_columns(std::size_t rows,
                                    const std::vector<std::vector<BigInt>>& columns) {
    IntegerMatrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != rows) throw ParseError("IntegerMatrix: column length mismatch");
      for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  BigInt& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::vector<BigInt> column(std::size_t c) const {
    std::vector<BigInt> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }

  IntegerMatrix transpose() const {
    IntegerMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const BigInt& v) { return v == 0; });
  }

  std::vector<BigInt> apply(const std::vector<BigInt>& x) const {
    if (x.size() != cols_) throw ParseError("IntegerMatrix::apply: dimension mismatch");
    std::vector<BigInt> y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      BigInt acc = 0;
      for (std::size_t c = 0; c < cols_; ++c) {
        const BigInt& a = (*this)(r, c);
        if (a != 0 && x[c] != 0) acc += a * x[c];
      }
      y[r] = std::move(acc);
    }
    return y;
  }

  /// [this | other]
  IntegerMatrix hconcat(const IntegerMatrix& other) const {
    if (other.rows_ != rows_) throw ParseError("IntegerMatrix::hconcat: row mismatch");
    IntegerMatrix m(rows_, cols_ + other.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c);
      for (std::size_t c = 0; c < other.cols_; ++c) m(r, cols_ + c) = other(r, c);
    }
    return m;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
  }
  /// row[dst] += q * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const BigInt& q) {
    for (std::size_t c = 0; c < cols_; ++c) {
      const BigInt& s = (*this)(src, c);
      if (s != 0) (*this)(dst, c) += q * s;
    }
  }
  /// col[dst] += q * col[src]
  void add_col_multiple(std::size_t dst, std::size_t src, const BigInt& q) {
    for (std::size_t r = 0; r < rows_; ++r) {
      const BigInt& s = (*this)(r, src);
      if (s != 0) (*this)(r, dst) += q * s;
    }
  }
  void negate_row(std::size_t r) {
    for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
  }
  void negate_col(std::size_t c) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = -(*this)(r, c);
  }

  friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (a.cols_ != b.rows_) throw ParseError("IntegerMatrix: product dimension mismatch");
    IntegerMatrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const BigInt& x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          const BigInt& y = b(k, j);
          if (y != 0) m(i, j) += x * y;
        }
      }
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> entries_;
};

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// S = U * M * V with U, V unimodular and S diagonal, d1 | d2 | ... , all >= 0.
/// The inverses of U and V are tracked alongside.
struct SmithDecomposition {
  IntegerMatrix U, S, V;
  IntegerMatrix U_inverse, V_inverse;
  std::size_t rank = 0;

  std::vector<BigInt> diagonal() const {
    std::vector<BigInt> d;
    for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
    return d;
  }
};

inline SmithDecomposition smith_normal_form(const IntegerMatrix& M) {
  const std::size_t r = M.rows();
  const std::size_t c = M.cols();
  SmithDecomposition d{IntegerMatrix::identity(r), M, IntegerMatrix::identity(c),
                       IntegerMatrix::identity(r), IntegerMatrix::identity(c), 0};
  IntegerMatrix& S = d.S;

  auto row_add = [&](std::size_t dst, std::size_t src, const BigInt& q) {
    S.add_row_multiple(dst, src, q);
    d.U.add_row_multiple(dst, src, q);
    d.U_inverse.add_col_multiple(src, dst, -q);
  };
  auto col_add = [&](std::size_t dst, std::size_t src, const BigInt& q) {
    S.add_col_multiple(dst, src, q);
    d.V.add_col_multiple(dst, src, q);
    d.V_inverse.add_row_multiple(src, dst, -q);
  };
  auto row_swap = [&](std::size_t a, std::size_t b) {
    S.swap_rows(a, b);
    d.U.swap_rows(a, b);
    d.U_inverse.swap_cols(a, b);
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    S.swap_cols(a, b);
    d.V.swap_cols(a, b);
    d.V_inverse.swap_rows(a, b);
  };

  std::size_t t = 0;
  const std::size_t limit = std::min(r, c);
  while (t < limit) {
    // smallest nonzero |entry| of the trailing block becomes the pivot
    std::optional<std::pair<std::size_t, std::size_t>> best;
    BigInt best_abs;
    for (std::size_t i = t; i < r; ++i)
      for (std::size_t j = t; j < c; ++j) {
        if (S(i, j) == 0) continue;
        BigInt a = abs_value(S(i, j));
        if (!best || a < best_abs) {
          best = {i, j};
          best_abs = a;
        }
      }
    if (!best) break;
    row_swap(t, best->first);
    col_swap(t, best->second);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        if (S(i, t) == 0) continue;
        BigInt q = S(i, t) / S(t, t);
        if (q != 0) row_add(i, t, -q);
        if (S(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        if (S(t, j) == 0) continue;
        BigInt q = S(t, j) / S(t, t);
        if (q != 0) col_add(j, t, -q);
        if (S(t, j) != 0) clean = false;
      }
      if (!clean) {
        // a remainder smaller than the pivot survived; promote it
        std::size_t bi = t, bj = t;
        BigInt ba = abs_value(S(t, t));
        for (std::size_t i = t + 1; i < r; ++i)
          if (S(i, t) != 0 && abs_value(S(i, t)) < ba) {
            ba = abs_value(S(i, t));
            bi = i;
            bj = t;
          }
        for (std::size_t j = t + 1; j < c; ++j)
          if (S(t, j) != 0 && abs_value(S(t, j)) < ba) {
            ba = abs_value(S(t, j));
            bi = t;
            bj = j;
          }
        row_swap(t, bi);
        col_swap(t, bj);
        continue;
      }
      bool divides = true;
      for (std::size_t i = t + 1; i < r && divides; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (S(i, j) % S(t, t) != 0) {
            row_add(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (S(t, t) < 0) {
      S.negate_row(t);
      d.U.negate_row(t);
      d.U_inverse.negate_col(t);
    }
    ++t;
  }
  d.rank = t;
  return d;
}

/// Exact integer solution of M x = b, if one exists.
inline std::optional<std::vector<BigInt>> solve_integer(const SmithDecomposition& snf,
                                                        const std::vector<BigInt>& b) {
  const auto c = snf.U.apply(b);
  std::vector<BigInt> y(snf.S.cols());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < snf.rank) {
      if (c[i] % snf.S(i, i) != 0) return std::nullopt;
      y[i] = c[i] / snf.S(i, i);
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return snf.V.apply(y);
}

inline std::optional<std::vector<BigInt>> solve_integer(const IntegerMatrix& M,
                                                        const std::vector<BigInt>& b) {
  if (b.size() != M.rows()) throw ParseError("solve_integer: dimension mismatch");
  return solve_integer(smith_normal_form(M), b);
}

/// Generators of the integer kernel of M (a basis, as columns).
inline std::vector<std::vector<BigInt>> integer_kernel(const IntegerMatrix& M) {
  auto snf = smith_normal_form(M);
  std::vector<std::vector<BigInt>> out;
  for (std::size_t j = snf.rank; j < M.cols(); ++j) out.push_back(snf.V.column(j));
  return out;
}

/// A basis (as matrix columns) of the lattice spanned by the columns of G.
inline IntegerMatrix column_lattice_basis(const IntegerMatrix& G) {
  auto snf = smith_normal_form(G);
  IntegerMatrix basis(G.rows(), snf.rank);
  for (std::size_t i = 0; i < snf.rank; ++i)
    for (std::size_t r = 0; r < G.rows(); ++r) basis(r, i) = snf.U_inverse(r, i) * snf.S(i, i);
  return basis;
}

// ---------------------------------------------------------------------------
// Groups and elements
// ---------------------------------------------------------------------------

/// Element of a FinAbGroup: free coordinates first, then torsion coordinates
/// reduced into [0, m_i).
struct GroupElement {
  std::vector<BigInt> coords;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(),
                                        b.coords.end());
  }
};

/// Z^r + Z/m1 + ... + Z/mt with m1 | m2 | ... | mt, every mi >= 2.
class FinAbGroup {
 public:
  FinAbGroup() = default;

  /// Canonical form of Z^free + Z/o1 + ... (orders 0 count as free, 1 as trivial).
  static FinAbGroup from_cyclic_orders(std::size_t free_rank, const std::vector<BigInt>& orders) {
    std::vector<BigInt> nonzero;
    for (const auto& o : orders) {
      if (o < 0) throw ParseError("cyclic order must be non-negative");
      if (o == 0)
        ++free_rank;
      else if (o > 1)
        nonzero.push_back(o);
    }
    IntegerMatrix diag(nonzero.size(), nonzero.size());
    for (std::size_t i = 0; i < nonzero.size(); ++i) diag(i, i) = nonzero[i];
    auto snf = smith_normal_form(diag);
    FinAbGroup g;
    g.free_rank_ = free_rank;
    for (const auto& v : snf.diagonal())
      if (v > 1) g.torsion_.push_back(v);
    return g;
  }

  static FinAbGroup cyclic(const BigInt& order) { return from_cyclic_orders(0, {order}); }
  static FinAbGroup integers() { return from_cyclic_orders(1, {}); }

  std::size_t free_rank() const noexcept { return free_rank_; }
  const std::vector<BigInt>& torsion() const noexcept { return torsion_; }
  std::size_t num_coordinates() const noexcept { return free_rank_ + torsion_.size(); }

  /// Order of coordinate i (0 for a free coordinate).
  BigInt coordinate_order(std::size_t i) const {
    return i < free_rank_ ? BigInt(0) : torsion_.at(i - free_rank_);
  }

  bool is_finite() const noexcept { return free_rank_ == 0; }
  bool is_trivial() const noexcept { return free_rank_ == 0 && torsion_.empty(); }

  BigInt order() const {
    if (!is_finite()) throw PreconditionError("order of an infinite group");
    BigInt n = 1;
    for (const auto& m : torsion_) n *= m;
    return n;
  }

  GroupElement zero() const { return GroupElement{std::vector<BigInt>(num_coordinates())}; }

  GroupElement reduce(GroupElement a) const {
    check(a);
    for (std::size_t i = free_rank_; i < a.coords.size(); ++i)
      a.coords[i] = mod_floor(a.coords[i], torsion_[i - free_rank_]);
    return a;
  }

  GroupElement element(const std::vector<long long>& coords) const {
    GroupElement e;
    for (long long v : coords) e.coords.emplace_back(v);
    return reduce(std::move(e));
  }

  GroupElement add(const GroupElement& a, const GroupElement& b) const {
    check(a);
    check(b);
    GroupElement s = a;
    for (std::size_t i = 0; i < s.coords.size(); ++i) s.coords[i] += b.coords[i];
    return reduce(std::move(s));
  }

  GroupElement neg(const GroupElement& a) const {
    check(a);
    GroupElement s = a;
    for (auto& v : s.coords) v = -v;
    return reduce(std::move(s));
  }

  GroupElement scale(const GroupElement& a, const BigInt& k) const {
    check(a);
    GroupElement s = a;
    for (auto& v : s.coords) v *= k;
    return reduce(std::move(s));
  }

  bool eq(const GroupElement& a, const GroupElement& b) const { return reduce(a) == reduce(b); }

  /// Every element exactly once, coordinates in lexicographic order (zero first).
  std::vector<GroupElement> enumerate() const {
    if (!is_finite()) throw PreconditionError("cannot enumerate an infinite group");
    std::vector<GroupElement> out;
    GroupElement cur = zero();
    for (;;) {
      out.push_back(cur);
      std::size_t i = cur.coords.size();
      while (i > 0) {
        --i;
        cur.coords[i] += 1;
        if (cur.coords[i] < torsion_[i]) break;
        cur.coords[i] = 0;
        if (i == 0) return out;
      }
      if (cur.coords.empty()) return out;
    }
  }

  FinAbGroup direct_sum(const FinAbGroup& other) const {
    std::vector<BigInt> orders = torsion_;
    orders.insert(orders.end(), other.torsion_.begin(), other.torsion_.end());
    return from_cyclic_orders(free_rank_ + other.free_rank_, orders);
  }

  friend bool operator==(const FinAbGroup&, const FinAbGroup&) = default;

 private:
  void check(const GroupElement& a) const {
    if (a.coords.size() != num_coordinates())
      throw ParseError("group element has wrong number of coordinates");
  }

  std::size_t free_rank_ = 0;
  std::vector<BigInt> torsion_;
};

inline std::string format_group(const FinAbGroup& g) {
  if (g.is_trivial()) return "0";
  std::string s;
  for (std::size_t i = 0; i < g.free_rank(); ++i) s += s.empty() ? "Z" : "+Z";
  for (const auto& m : g.torsion()) s += (s.empty() ? "Z/" : "+Z/") + m.str();
  return s;
}

/// group := term ("+" term)*; term := "Z" | "Z/" integer>=2. Whitespace ignored.
/// "0" names the trivial group so that format_group round-trips.
inline FinAbGroup parse_group(std::string_view spec) {
  std::string s;
  for (char ch : spec)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s == "0") return FinAbGroup{};
  if (s.empty()) throw ParseError("empty group spec");
  std::size_t free_rank = 0;
  std::vector<BigInt> orders;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find('+', pos);
    if (next == std::string::npos) next = s.size();
    std::string token = s.substr(pos, next - pos);
    if (token == "Z") {
      ++free_rank;
    } else if (token.size() > 2 && token.compare(0, 2, "Z/") == 0) {
      std::string digits = token.substr(2);
      if (!std::all_of(digits.begin(), digits.end(),
                       [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
        throw ParseError("malformed group term '" + token + "'");
      BigInt m(digits);
      if (m < 2) throw ParseError("cyclic order must be >= 2 in '" + token + "'");
      orders.push_back(m);
    } else {
      throw ParseError("malformed group term '" + token + "'");
    }
    pos = next + 1;
    if (next == s.size()) break;
  }
  return FinAbGroup::from_cyclic_orders(free_rank, orders);
}

inline std::string format_element(const FinAbGroup& g, const GroupElement& a) {
  auto r = g.reduce(a);
  if (r.coords.empty()) return "0";
  if (r.coords.size() == 1) return r.coords[0].str();
  std::string s = "(";
  for (std::size_t i = 0; i < r.coords.size(); ++i) s += (i ? "," : "") + r.coords[i].str();
  return s + ")";
}

/// A finite group with its elements numbered (index 0 is zero) and
/// precomputed addition and negation tables.
class IndexedGroup {
 public:
  explicit IndexedGroup(FinAbGroup g) : group_(std::move(g)) {
    elements_ = group_.enumerate();
    for (std::size_t i = 0; i < elements_.size(); ++i) index_[elements_[i]] = i;
    const std::size_t n = elements_.size();
    add_.assign(n * n, 0);
    neg_.assign(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
      neg_[a] = index_of(group_.neg(elements_[a]));
      for (std::size_t b = 0; b < n; ++b) add_[a * n + b] = index_of(group_.add(elements_[a], elements_[b]));
    }
  }

  const FinAbGroup& group() const noexcept { return group_; }
  std::size_t size() const noexcept { return elements_.size(); }
  const GroupElement& element(std::size_t i) const { return elements_.at(i); }
  std::size_t index_of(const GroupElement& e) const { return index_.at(group_.reduce(e)); }
  std::size_t add(std::size_t a, std::size_t b) const { return add_[a * elements_.size() + b]; }
  std::size_t neg(std::size_t a) const { return neg_[a]; }
  std::size_t sub(std::size_t a, std::size_t b) const { return add(a, neg(b)); }
  std::string label(std::size_t i) const { return format_element(group_, elements_.at(i)); }

 private:
  FinAbGroup group_;
  std::vector<GroupElement> elements_;
  std::map<GroupElement, std::size_t> index_;
  std::vector<std::size_t> add_;
  std::vector<std::size_t> neg_;
};

// ---------------------------------------------------------------------------
// Subquotients
// ---------------------------------------------------------------------------

/// Z / B for lattices B ⊂ Z ⊂ Z^d, in canonical form, with the coordinate map
/// from vectors of Z to group elements.
class LatticeQuotient {
 public:
  LatticeQuotient(const IntegerMatrix& z_generators, const IntegerMatrix& b_generators) {
    if (z_generators.rows() != b_generators.rows())
      throw ParseError("subquotient: ambient dimensions differ");
    ambient_ = z_generators.rows();
    basis_ = column_lattice_basis(z_generators);
    basis_snf_ = smith_normal_form(basis_);
    const std::size_t r = basis_.cols();

    IntegerMatrix coords(r, b_generators.cols());
    for (std::size_t j = 0; j < b_generators.cols(); ++j) {
      auto c = basis_coordinates(b_generators.column(j));
      if (!c)
        throw ValidationError("subquotient: boundary generator " + std::to_string(j) +
                              " is not contained in the cycle lattice");
      for (std::size_t i = 0; i < r; ++i) coords(i, j) = (*c)[i];
    }
    auto rel = smith_normal_form(coords);
    to_invariant_ = rel.U;
    from_invariant_ = rel.U_inverse;
    diag_.assign(r, 0);
    for (std::size_t i = 0; i < rel.rank; ++i) diag_[i] = rel.S(i, i);

    std::vector<BigInt> torsion;
    std::size_t free_rank = r - rel.rank;
    coord_of_.assign(r, npos);
    std::size_t next_free = 0;
    for (std::size_t i = rel.rank; i < r; ++i) coord_of_[i] = next_free++;
    std::size_t next_torsion = free_rank;
    for (std::size_t i = 0; i < rel.rank; ++i)
      if (diag_[i] > 1) {
        coord_of_[i] = next_torsion++;
        torsion.push_back(diag_[i]);
      }
    group_ = FinAbGroup::from_cyclic_orders(free_rank, torsion);
  }

  const FinAbGroup& group() const noexcept { return group_; }
  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t cycle_rank() const noexcept { return basis_.cols(); }

  bool contains(const std::vector<BigInt>& z) const { return basis_coordinates(z).has_value(); }

  /// Class of z in Z/B; throws if z is not in Z.
  GroupElement classify(const std::vector<BigInt>& z) const {
    auto c = basis_coordinates(z);
    if (!c) throw ValidationError("classify: vector is not a cycle");
    auto y = to_invariant_.apply(*c);
    GroupElement e = group_.zero();
    for (std::size_t i = 0; i < y.size(); ++i)
      if (coord_of_[i] != npos) e.coords[coord_of_[i]] = y[i];
    return group_.reduce(std::move(e));
  }

  /// One ambient representative per group coordinate.
  std::vector<std::vector<BigInt>> generators() const {
    std::vector<std::vector<BigInt>> out(group_.num_coordinates());
    for (std::size_t i = 0; i < coord_of_.size(); ++i) {
      if (coord_of_[i] == npos) continue;
      out[coord_of_[i]] = basis_.apply(from_invariant_.column(i));
    }
    return out;
  }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::optional<std::vector<BigInt>> basis_coordinates(const std::vector<BigInt>& z) const {
    if (z.size() != ambient_) throw ParseError("subquotient: vector has wrong dimension");
    return solve_integer(basis_snf_, z);
  }

  std::size_t ambient_ = 0;
  IntegerMatrix basis_;
  SmithDecomposition basis_snf_;
  IntegerMatrix to_invariant_;
  IntegerMatrix from_invariant_;
  std::vector<BigInt> diag_;
  std::vector<std::size_t> coord_of_;
  FinAbGroup group_;
};

/// Z/B where Z, B are the column lattices of the two generator matrices.
/// Throws ValidationError when B is not contained in Z.
inline FinAbGroup subquotient(const IntegerMatrix& z_generators, const IntegerMatrix& b_generators) {
  return LatticeQuotient(z_generators, b_generators).group();
}

// ---------------------------------------------------------------------------
// Modular solving
// ---------------------------------------------------------------------------

/// Solve M x ≡ b (mod modulus); modulus 0 means exact integer solving.
inline std::optional<std::vector<BigInt>> solve_mod(const IntegerMatrix& M,
                                                    const std::vector<BigInt>& b,
                                                    const BigInt& modulus) {
  if (b.size() != M.rows()) throw ParseError("solve_mod: dimension mismatch");
  if (modulus == 0) return solve_integer(M, b);
  if (modulus == 1) return std::vector<BigInt>(M.cols());
  IntegerMatrix relations(M.rows(), M.rows());
  for (std::size_t i = 0; i < M.rows(); ++i) relations(i, i) = modulus;
  auto y = solve_integer(M.hconcat(relations), b);
  if (!y) return std::nullopt;
  std::vector<BigInt> x(y->begin(), y->begin() + static_cast<std::ptrdiff_t>(M.cols()));
  for (auto& v : x) v = mod_floor(v, modulus);
  return x;
}

/// Scalar right-hand side in a cyclic (or trivial) group.
inline std::optional<std::vector<BigInt>> solve_mod(const IntegerMatrix& M,
                                                    const std::vector<BigInt>& b,
                                                    const FinAbGroup& group) {
  if (group.num_coordinates() > 1)
    throw ParseError("solve_mod: scalar right-hand side needs a cyclic group");
  if (group.is_trivial()) return std::vector<BigInt>(M.cols());
  return solve_mod(M, b, group.coordinate_order(0));
}

/// Group-valued right-hand side: one equation per row, unknowns in the group.
/// Mixed free/torsion targets are handled coordinatewise, each coordinate
/// augmented with its order relations.
inline std::optional<std::vector<GroupElement>> solve_mod_elements(
    const IntegerMatrix& M, const std::vector<GroupElement>& b, const FinAbGroup& group) {
  if (b.size() != M.rows()) throw ParseError("solve_mod: dimension mismatch");
  std::vector<GroupElement> x(M.cols(), group.zero());
  for (std::size_t coord = 0; coord < group.num_coordinates(); ++coord) {
    std::vector<BigInt> rhs(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) rhs[i] = group.reduce(b[i]).coords.at(coord);
    auto sol = solve_mod(M, rhs, group.coordinate_order(coord));
    if (!sol) return std::nullopt;
    for (std::size_t j = 0; j < x.size(); ++j) x[j].coords[coord] = (*sol)[j];
  }
  for (auto& e : x) e = group.reduce(std::move(e));
  return x;
}

}  // namespace kanset
