#pragma once

// Small dense linear algebra over Q for the rounding search.

#include "turan/field.hpp"

#include <optional>
#include <vector>

namespace turan::detail {

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Reduces m to reduced row echelon form in place; returns the pivot columns.
std::vector<std::size_t> rref(RationalMatrix& m, std::size_t cols);

/// Basis of {x : m x = 0}, one vector per free column, scaled to integers.
std::vector<std::vector<Rational>> nullspace(RationalMatrix m, std::size_t cols);

/// Rank of the rows.
std::size_t rank(RationalMatrix m, std::size_t cols);

/// Some solution of m x = b, or nothing when the system is inconsistent.
std::optional<std::vector<Rational>> solve(RationalMatrix m, std::vector<Rational> b, std::size_t cols);

}  // namespace turan::detail
