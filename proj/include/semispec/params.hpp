#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "semispec/errors.hpp"

namespace semispec {

// Parameters of the verified assumptions. lambda bounds the pole strip,
// (alpha, beta, gamma, c_dolgo) belong to the high-frequency estimate of
// the exponential case, (c10, c11, c12) to the rapid one. c1, c2 and
// c_dolgo are measured on the model by the scans; ell and epsilon place
// the shifted and curved inversion contours.
struct AssumptionParams {
  double lambda = 1.0;
  double alpha = 1.0;
  double beta = 1.5;
  double gamma = 0.5;
  double ell = 0.5;
  double epsilon = 0.0;  // 0 -> chosen automatically from the pole set

  double c1 = 0.0;
  double c2 = 0.0;
  double c_dolgo = 0.0;

  double c10 = 0.0;
  double c11 = 0.0;
  double c12 = 1.0;

  void validate() const {
    if (!(lambda > 0.0)) throw ConfigError("params.lambda must be > 0");
    if (!(alpha > 0.0)) throw ConfigError("params.alpha must be > 0");
    if (!(beta > 0.0)) throw ConfigError("params.beta must be > 0");
    const double gamma_cap = 1.0 / std::log(1.0 + lambda / alpha);
    if (!(gamma > 0.0 && gamma < gamma_cap)) {
      throw ConfigError("params.gamma must lie in (0, 1/ln(1+lambda/alpha))");
    }
    if (!(ell > 0.0 && ell < lambda)) {
      throw ConfigError("params.ell must lie in (0, lambda)");
    }
    if (epsilon != 0.0 && !(epsilon > 0.0 && epsilon < ell)) {
      throw ConfigError("params.epsilon must lie in (0, ell)");
    }
  }
};

// A scan grid {min, max, count} with linear or logarithmic spacing.
struct GridSpec {
  double min = 0.0;
  double max = 1.0;
  int count = 2;
  bool log_spacing = false;

  std::vector<double> points() const {
    std::vector<double> out;
    out.reserve(count);
    if (count < 2) throw ConfigError("grid counts must be >= 2");
    if (log_spacing) {
      if (!(min > 0.0)) throw ConfigError("log-spaced grids require min > 0");
      const double r = std::log(max / min) / (count - 1);
      for (int i = 0; i < count; ++i) out.push_back(min * std::exp(r * i));
    } else {
      const double h = (max - min) / (count - 1);
      for (int i = 0; i < count; ++i) out.push_back(min + h * i);
    }
    return out;
  }
};

}  // namespace semispec
