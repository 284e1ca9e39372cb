#pragma once

#include "cssp/types.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>

namespace cssp {

enum class MatrixFormat { matrixmarket, csv };

// "matrixmarket" (or "mtx") and "csv"; anything else throws.
MatrixFormat parse_format(const std::string& name);

inline constexpr std::size_t kDefaultCellBudget = 50'000'000;

// MatrixMarket coordinate files (real, integer or pattern field; general or
// symmetric) are densified; pattern entries become 1.0. CSV files are dense
// rows of decimal reals. Inputs whose dense size exceeds `max_cells` are
// refused.
Matrix load_matrix(std::istream& in, MatrixFormat format,
                   std::size_t max_cells = kDefaultCellBudget);
Matrix load_matrix(const std::string& path, MatrixFormat format,
                   std::size_t max_cells = kDefaultCellBudget);

// Writers emit full round-trip precision; MatrixMarket output lists the
// nonzero entries in column-major order with 1-based indices.
void save_matrix(std::ostream& out, const Matrix& a, MatrixFormat format);
void save_matrix(const std::string& path, const Matrix& a, MatrixFormat format);

// Shortest representation that parses back to the same double.
std::string format_double(double value);

} // namespace cssp
