#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace gclab {

using Index = Eigen::Index;
using Scalar = double;
using Complex = std::complex<double>;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

}  // namespace gclab
