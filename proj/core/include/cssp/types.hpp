#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace cssp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Column and row indices exposed through the public structs are 1-based,
// matching the MatrixMarket convention and the serialized JSON/CSV outputs.
using IndexList = std::vector<Index>;

} // namespace cssp
