#pragma once

// Exact affine linear algebra over the rationals.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "acf/error.hpp"
#include "acf/random.hpp"
#include "acf/rational.hpp"

namespace acf {

using Vector = std::vector<Rational>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector row(std::size_t r) const { return Vector(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_); }

  void append_row(const Vector& v) {
    if (rows_ == 0 && cols_ == 0) cols_ = v.size();
    if (v.size() != cols_) throw MismatchError("row length " + std::to_string(v.size()) + " != " + std::to_string(cols_));
    data_.insert(data_.end(), v.begin(), v.end());
    ++rows_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct AffineSystem {
  Matrix matrix;
  Vector rhs;
  std::vector<std::string> column_labels;
  // Optional; when non-empty it has one entry per row.
  std::vector<std::string> row_labels;

  std::size_t rows() const { return matrix.rows(); }
  std::size_t cols() const { return matrix.cols(); }

  void validate() const {
    if (rhs.size() != matrix.rows()) {
      throw MismatchError("rhs has " + std::to_string(rhs.size()) + " entries for " + std::to_string(matrix.rows()) +
                          " rows");
    }
    if (column_labels.size() != matrix.cols()) {
      throw MismatchError(std::to_string(column_labels.size()) + " column labels for " +
                          std::to_string(matrix.cols()) + " columns");
    }
    if (!row_labels.empty() && row_labels.size() != matrix.rows()) {
      throw MismatchError("row label count does not match row count");
    }
  }

  std::optional<std::size_t> column_index(const std::string& label) const {
    for (std::size_t i = 0; i < column_labels.size(); ++i) {
      if (column_labels[i] == label) return i;
    }
    return std::nullopt;
  }

  void append_equation(const Vector& row, const Rational& value, std::string label = {}) {
    matrix.append_row(row);
    rhs.push_back(value);
    if (!label.empty() || !row_labels.empty()) {
      row_labels.resize(matrix.rows() - 1);
      row_labels.push_back(std::move(label));
    }
  }

  // The subsystem made of the first `count` rows.
  AffineSystem prefix(std::size_t count) const {
    AffineSystem s;
    s.matrix = Matrix(0, cols());
    for (std::size_t r = 0; r < count; ++r) s.matrix.append_row(matrix.row(r));
    s.rhs.assign(rhs.begin(), rhs.begin() + static_cast<std::ptrdiff_t>(count));
    s.column_labels = column_labels;
    if (!row_labels.empty()) s.row_labels.assign(row_labels.begin(), row_labels.begin() + static_cast<std::ptrdiff_t>(count));
    return s;
  }
};

struct SolutionSet {
  Vector particular;
  std::vector<Vector> nullspace_basis;
  std::vector<std::string> column_labels;

  std::size_t affine_dimension() const { return nullspace_basis.size(); }
};

struct FarkasCertificate {
  // y with y^T A = 0 and y^T b != 0. Emitted normalized to y^T b = 1.
  Vector row_combination;
};

using SolveOutcome = std::variant<SolutionSet, FarkasCertificate>;

namespace detail {
inline void axpy(Vector& v, const Rational& a, const Vector& w, std::size_t from = 0) {
  for (std::size_t i = from; i < v.size(); ++i) {
    if (!is_zero(w[i])) v[i] -= a * w[i];
  }
}
}  // namespace detail

// Gauss-Jordan elimination on [A | b | I]. Pivots are the first nonzero entry
// at or below the current row in each column.
inline SolveOutcome solve_affine(const AffineSystem& sys) {
  sys.validate();
  const std::size_t m = sys.rows();
  const std::size_t n = sys.cols();
  const std::size_t width = n + 1 + m;
  std::vector<Vector> rows(m, Vector(width));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) rows[r][c] = sys.matrix(r, c);
    rows[r][n] = sys.rhs[r];
    rows[r][n + 1 + r] = 1;
  }
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < n && rank < m; ++c) {
    std::size_t p = rank;
    while (p < m && is_zero(rows[p][c])) ++p;
    if (p == m) continue;
    std::swap(rows[p], rows[rank]);
    const Rational inv = 1 / rows[rank][c];
    for (std::size_t j = c; j < width; ++j) {
      if (!is_zero(rows[rank][j])) rows[rank][j] *= inv;
    }
    for (std::size_t r = 0; r < m; ++r) {
      if (r == rank || is_zero(rows[r][c])) continue;
      const Rational f = rows[r][c];
      detail::axpy(rows[r], f, rows[rank], c);
    }
    pivot_cols.push_back(c);
    ++rank;
  }
  for (std::size_t r = rank; r < m; ++r) {
    if (!is_zero(rows[r][n])) {
      const Rational scale = 1 / rows[r][n];
      FarkasCertificate cert;
      cert.row_combination.resize(m);
      for (std::size_t i = 0; i < m; ++i) cert.row_combination[i] = rows[r][n + 1 + i] * scale;
      return cert;
    }
  }
  SolutionSet set;
  set.column_labels = sys.column_labels;
  set.particular.assign(n, Rational(0));
  std::vector<bool> is_pivot(n, false);
  for (std::size_t i = 0; i < rank; ++i) {
    set.particular[pivot_cols[i]] = rows[i][n];
    is_pivot[pivot_cols[i]] = true;
  }
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    Vector v(n);
    v[f] = 1;
    for (std::size_t i = 0; i < rank; ++i) v[pivot_cols[i]] = -rows[i][f];
    set.nullspace_basis.push_back(std::move(v));
  }
  return set;
}

// Checks y^T A = 0 and y^T b != 0 by direct arithmetic.
inline bool verify_farkas(const AffineSystem& sys, const FarkasCertificate& cert) {
  sys.validate();
  if (cert.row_combination.size() != sys.rows()) {
    throw MismatchError("certificate has " + std::to_string(cert.row_combination.size()) + " entries for a system with " +
                        std::to_string(sys.rows()) + " rows");
  }
  for (std::size_t c = 0; c < sys.cols(); ++c) {
    Rational acc = 0;
    for (std::size_t r = 0; r < sys.rows(); ++r) acc += cert.row_combination[r] * sys.matrix(r, c);
    if (!is_zero(acc)) return false;
  }
  Rational value = 0;
  for (std::size_t r = 0; r < sys.rows(); ++r) value += cert.row_combination[r] * sys.rhs[r];
  return !is_zero(value);
}

// particular + sum c_i v_i with integer c_i uniform in [-bound, bound], drawn
// in basis order from SeededStream(seed).
inline Vector sample_generic(const SolutionSet& set, std::uint64_t seed, std::uint64_t bound) {
  Vector point = set.particular;
  SeededStream stream(seed);
  for (const auto& v : set.nullspace_basis) {
    const Rational c(stream.uniform_symmetric(bound));
    if (is_zero(c)) continue;
    for (std::size_t i = 0; i < point.size(); ++i) {
      if (!is_zero(v[i])) point[i] += c * v[i];
    }
  }
  return point;
}

// Incrementally built row-echelon basis of a subspace of Q^dim. Rows are kept
// with pivot entry 1 and zeros before the pivot.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }

  Vector reduce(Vector v) const {
    if (v.size() != dim_) throw MismatchError("vector length does not match basis dimension");
    for (std::size_t i = 0; i < dim_; ++i) {
      if (is_zero(v[i])) continue;
      auto it = rows_.find(i);
      if (it == rows_.end()) continue;
      const Rational f = v[i];
      detail::axpy(v, f, it->second, i);
    }
    return v;
  }

  bool contains(const Vector& v) const {
    auto r = reduce(v);
    for (const auto& x : r) {
      if (!is_zero(x)) return false;
    }
    return true;
  }

  // Returns true when v enlarged the span.
  bool insert(const Vector& v) {
    auto r = reduce(v);
    std::size_t p = 0;
    while (p < dim_ && is_zero(r[p])) ++p;
    if (p == dim_) return false;
    const Rational inv = 1 / r[p];
    for (std::size_t j = p; j < dim_; ++j) {
      if (!is_zero(r[j])) r[j] *= inv;
    }
    rows_.emplace(p, std::move(r));
    return true;
  }

  const std::map<std::size_t, Vector>& rows() const { return rows_; }

 private:
  std::size_t dim_;
  std::map<std::size_t, Vector> rows_;
};

inline std::size_t rank_of_vectors(const std::vector<Vector>& vs, std::size_t dim) {
  EchelonBasis b(dim);
  for (const auto& v : vs) b.insert(v);
  return b.rank();
}

inline std::size_t rank(const Matrix& m) {
  EchelonBasis b(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) b.insert(m.row(r));
  return b.rank();
}

struct Projection {
  std::vector<std::string> labels;
  std::size_t affine_dimension = 0;
  Vector base_point;
  std::vector<Vector> directions;
};

// Image of the solution set under the coordinate projection onto `labels`.
inline Projection project_solution_set(const SolutionSet& set, const std::vector<std::string>& labels) {
  std::vector<std::size_t> idx;
  for (const auto& l : labels) {
    std::optional<std::size_t> found;
    for (std::size_t i = 0; i < set.column_labels.size(); ++i) {
      if (set.column_labels[i] == l) {
        found = i;
        break;
      }
    }
    if (!found) throw ContractError("unknown column label '" + l + "'");
    idx.push_back(*found);
  }
  Projection p;
  p.labels = labels;
  for (auto i : idx) p.base_point.push_back(set.particular[i]);
  EchelonBasis basis(idx.size());
  for (const auto& v : set.nullspace_basis) {
    Vector w;
    w.reserve(idx.size());
    for (auto i : idx) w.push_back(v[i]);
    if (basis.insert(w)) p.directions.push_back(std::move(w));
  }
  p.affine_dimension = p.directions.size();
  return p;
}

}  // namespace acf
