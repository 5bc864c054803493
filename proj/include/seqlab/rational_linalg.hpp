#pragma once

#include <optional>
#include <vector>

#include "seqlab/rational.hpp"

namespace seqlab {

/// Dense row-major matrix over the rationals.
using QMatrix = std::vector<std::vector<Rational>>;
using QVector = std::vector<Rational>;

QMatrix zero_matrix(std::size_t rows, std::size_t cols);

std::size_t rank(QMatrix m);

/// Reduced row echelon form in place; returns pivot columns in order.
std::vector<std::size_t> rref(QMatrix& m);

/// Basis of {x : m x = 0}; `cols` is needed when m has no rows.
std::vector<QVector> nullspace(const QMatrix& m, std::size_t cols);

/// Some x with m x = rhs, or nothing when rhs is outside the column space.
std::optional<QVector> solve(const QMatrix& m, const QVector& rhs, std::size_t cols);

/// Canonical representative of rhs modulo the column space of m:
/// the components of rhs on non-pivot rows after eliminating along columns.
QVector reduce_mod_columns(const QMatrix& m, const QVector& rhs);

QMatrix multiply(const QMatrix& a, const QMatrix& b, std::size_t inner, std::size_t cols);

bool is_zero(const QMatrix& m);

}  // namespace seqlab
