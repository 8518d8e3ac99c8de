#pragma once

#include <Eigen/Dense>
#include <complex>

namespace semispec {

using Complex = std::complex<double>;
using Matrix  = Eigen::MatrixXcd;
using Vector  = Eigen::VectorXcd;

// Norm tags for the strong/weak pair: B carries the generator-augmented
// inner product, A is the plain Euclidean norm.
enum class NormTag { B, A };

}  // namespace semispec
