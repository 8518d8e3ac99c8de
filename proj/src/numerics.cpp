#include "semispec/numerics.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace semispec::numerics {

const double kGauss16Nodes[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};

const double kGauss16Weights[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

bool isDiagonal(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0, 0.0)) return false;
    }
  }
  return true;
}

double frobeniusNorm(const Matrix& m) { return m.norm(); }

namespace {

double powerIterationNorm(const Matrix& m) {
  const Eigen::Index n = m.cols();
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = Complex(1.0 + 0.5 * std::cos(double(i + 1)), 0.25 * std::sin(double(2 * i + 1)));
  }
  v /= v.norm();
  double sigma = 0.0;
  for (int iter = 0; iter < 400; ++iter) {
    Vector w = m * v;
    Vector u = m.adjoint() * w;
    const double nu = u.norm();
    if (nu == 0.0) return 0.0;
    u /= nu;
    const double next = std::sqrt(nu);
    if (iter > 4 && std::abs(next - sigma) <= 1e-13 * std::max(1.0, next)) {
      return next;
    }
    sigma = next;
    v.swap(u);
  }
  return sigma;
}

}  // namespace

double spectralNorm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  if (isDiagonal(m)) {
    return m.diagonal().cwiseAbs().maxCoeff();
  }
  if (m.rows() <= 128) {
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
  }
  return powerIterationNorm(m);
}

double regressionSlope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (n * sxy - sx * sy) / denom;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace semispec::numerics
