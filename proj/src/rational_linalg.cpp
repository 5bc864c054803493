#include "seqlab/rational_linalg.hpp"

#include <stdexcept>

namespace seqlab {

QMatrix zero_matrix(std::size_t rows, std::size_t cols) {
  return QMatrix(rows, QVector(cols, Rational(0)));
}

std::vector<std::size_t> rref(QMatrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pick = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (m[i][c] != 0) {
        pick = i;
        break;
      }
    if (pick == rows) continue;
    std::swap(m[r], m[pick]);
    Rational inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (m[r][j] != 0) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::size_t rank(QMatrix m) { return rref(m).size(); }

std::vector<QVector> nullspace(const QMatrix& m, std::size_t cols) {
  QMatrix a = m;
  auto pivots = rref(a);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<QVector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    QVector v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QVector> solve(const QMatrix& m, const QVector& rhs, std::size_t cols) {
  if (m.size() != rhs.size()) throw std::invalid_argument("solve: dimension mismatch");
  QMatrix aug = m;
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(rhs[i]);
  auto pivots = rref(aug);
  QVector x(cols, Rational(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == cols) return std::nullopt;
    x[pivots[i]] = aug[i][cols];
  }
  return x;
}

QVector reduce_mod_columns(const QMatrix& m, const QVector& rhs) {
  // Column echelon form of m, then clear rhs along each pivot row.
  const std::size_t rows = rhs.size();
  std::size_t cols = m.empty() ? 0 : m.front().size();
  QMatrix t = zero_matrix(cols, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = m[i][j];
  auto pivots = rref(t);
  QVector out = rhs;
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    Rational f = out[pivots[k]];
    if (f == 0) continue;
    for (std::size_t i = 0; i < rows; ++i)
      if (t[k][i] != 0) out[i] -= f * t[k][i];
  }
  return out;
}

QMatrix multiply(const QMatrix& a, const QMatrix& b, std::size_t inner, std::size_t cols) {
  QMatrix out = zero_matrix(a.size(), cols);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j)
        if (b[k][j] != 0) out[i][j] += a[i][k] * b[k][j];
    }
  return out;
}

bool is_zero(const QMatrix& m) {
  for (const auto& row : m)
    for (const auto& x : row)
      if (x != 0) return false;
  return true;
}

}  // namespace seqlab
