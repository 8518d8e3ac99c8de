#pragma once

#include <functional>
#include <vector>

#include "semispec/types.hpp"

namespace semispec::numerics {

// Largest singular value. Exact diagonal matrices take an O(n) path,
// small dense matrices use a full SVD, large ones power iteration.
double spectralNorm(const Matrix& m);

// True iff every off-diagonal entry is exactly zero.
bool isDiagonal(const Matrix& m);

double frobeniusNorm(const Matrix& m);

// Composite Simpson on [a, b]; `intervals` is rounded up to an even count.
template <typename T, typename F>
T simpsonUniform(F&& f, double a, double b, int intervals, T zero) {
  int n = intervals < 2 ? 2 : intervals;
  if (n % 2) ++n;
  const double h = (b - a) / n;
  T acc = zero;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += f(a + i * h) * w;
  }
  acc *= h / 3.0;
  return acc;
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
extern const double kGauss16Nodes[16];
extern const double kGauss16Weights[16];

// One 16-point Gauss-Legendre panel on [a, b].
template <typename T, typename F>
T gauss16(F&& f, double a, double b, T zero) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T acc = zero;
  for (int i = 0; i < 16; ++i) {
    acc += f(mid + half * kGauss16Nodes[i]) * (kGauss16Weights[i] * half);
  }
  return acc;
}

// Composite Gauss-Legendre with a locally adapted panel width.
// `width(b)` is evaluated at each panel's left edge.
template <typename T, typename F, typename W>
T gauss16Graded(F&& f, double a, double b, W&& width, T zero) {
  T acc = zero;
  double lo = a;
  while (lo < b - 1e-14 * (1.0 + std::abs(b))) {
    double w = width(lo);
    if (w < 1e-5) w = 1e-5;
    const double hi = std::min(b, lo + w);
    acc += gauss16(f, lo, hi, zero);
    lo = hi;
  }
  return acc;
}

// Least-squares slope of y against x.
double regressionSlope(const std::vector<double>& x, const std::vector<double>& y);

double factorial(int n);

}  // namespace semispec::numerics
