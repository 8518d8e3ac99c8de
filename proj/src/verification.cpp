#include "semispec/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semispec/errors.hpp"
#include "semispec/numerics.hpp"

namespace semispec {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Scan a |b| grid at both signs, recording the per-|b| maximum.
template <typename F>
ScanSeries scanBothSigns(const std::vector<double>& b_grid, F&& value_at) {
  ScanSeries series;
  series.b.reserve(b_grid.size());
  series.value.reserve(b_grid.size());
  for (double b : b_grid) {
    series.b.push_back(b);
    series.value.push_back(std::max(value_at(b), value_at(-b)));
  }
  return series;
}

std::vector<double> extendedGrid(const std::vector<double>& b_grid) {
  // Same point count again, log-spaced from the grid end to twice the end.
  std::vector<double> ext;
  if (b_grid.empty()) return ext;
  const double lo = b_grid.back();
  const double hi = 2.0 * lo;
  const int count = std::max<size_t>(8, b_grid.size() / 2);
  for (int i = 1; i <= count; ++i) {
    ext.push_back(lo * std::pow(hi / lo, double(i) / count));
  }
  return ext;
}

double fitSlopeAboveFloor(const std::vector<double>& x, const std::vector<double>& y,
                          bool log_x) {
  double ymax = 0.0;
  for (double v : y) ymax = std::max(ymax, v);
  const double floor = std::max(ymax * 1e-14, 1e-290);
  std::vector<double> xs, ys;
  for (size_t i = 0; i < y.size(); ++i) {
    if (y[i] > floor && std::isfinite(y[i]) && x[i] > 0.0) {
      xs.push_back(log_x ? std::log(x[i]) : x[i]);
      ys.push_back(std::log(y[i]));
    }
  }
  if (xs.size() < 2) return -std::numeric_limits<double>::infinity();
  return numerics::regressionSlope(xs, ys);
}

}  // namespace

C1Estimate estimateC1(const GeneratorModel& model, const std::vector<double>& t_grid) {
  if (t_grid.size() < 2) throw DomainError("C1 estimate needs at least two grid points");
  C1Estimate est;
  std::vector<double> norms;
  norms.reserve(t_grid.size());
  for (double t : t_grid) {
    const double v = model.norms().operatorNorm(model.evolve(t), NormTag::B, NormTag::B);
    norms.push_back(v);
    if (v > est.value) {
      est.value = v;
      est.argmax_t = t;
    }
  }
  const size_t n = norms.size();
  if (est.argmax_t == t_grid.back() && n >= 3 && norms[n - 1] > norms[n - 2] &&
      norms[n - 2] > norms[n - 3]) {
    est.growth_warning = true;  // paper's footnote remedy: rescale by e^{-gamma t}
  }
  return est;
}

C2Estimate estimateC2(const GeneratorModel& model, const std::vector<double>& t_grid) {
  C2Estimate est;
  const Eigen::Index n = model.dimension();
  const Matrix id = Matrix::Identity(n, n);
  for (double t : t_grid) {
    if (!(t > 0.0)) continue;
    const double v =
        model.norms().operatorNorm(model.evolve(t) - id, NormTag::B, NormTag::A) / t;
    if (v > est.value) {
      est.value = v;
      est.argmax_t = t;
    }
    est.analytic_bound = std::max(
        est.analytic_bound,
        model.norms().operatorNorm(model.evolve(t), NormTag::A, NormTag::A));
  }
  est.analytic_bound = std::max(est.analytic_bound, 1.0);  // T_0 = Id
  return est;
}

int dolgopyatExponent(double gamma, double b) {
  return static_cast<int>(std::ceil(gamma * std::log(std::abs(b))));
}

namespace ledger_formulas {

double cJohn(double gamma, double ell, double alpha) {
  return gamma * std::log(1.0 + ell / alpha);
}

double c5(double alpha, double beta) {
  return 2.0 * kPi / beta / (1.0 - std::exp(-alpha * 2.0 * kPi / beta));
}

double cOuter(double beta, double c_john) {
  return std::pow(beta, -(1.0 - c_john)) / (2.0 * kPi * (1.0 - c_john));
}

}  // namespace ledger_formulas

DolgopyatScan dolgopyatScan(const GeneratorModel& model, const AssumptionParams& params,
                            const std::vector<double>& b_grid) {
  params.validate();
  for (double b : b_grid) {
    if (std::abs(b) < params.beta) {
      throw PreconditionError("dolgopyat scan grid must satisfy |b| >= beta");
    }
  }
  auto value_at = [&](double b) {
    const int n_tilde = dolgopyatExponent(params.gamma, b);
    const Matrix r = model.resolventMatrix(Complex(params.alpha, b));
    Matrix power = Matrix::Identity(model.dimension(), model.dimension());
    for (int k = 0; k < n_tilde; ++k) power = power * r;
    return model.norms().operatorNorm(power, NormTag::B, NormTag::B) *
           std::pow(params.alpha + params.lambda, double(n_tilde));
  };

  DolgopyatScan scan;
  scan.series = scanBothSigns(b_grid, value_at);
  for (size_t i = 0; i < scan.series.b.size(); ++i) {
    if (scan.series.value[i] > scan.c_dolgo) {
      scan.c_dolgo = scan.series.value[i];
      scan.worst_b = scan.series.b[i];
    }
  }
  double extended_max = scan.c_dolgo;
  for (double b : extendedGrid(b_grid)) {
    extended_max = std::max({extended_max, value_at(b), value_at(-b)});
  }
  scan.extension_change =
      scan.c_dolgo > 0 ? (extended_max - scan.c_dolgo) / scan.c_dolgo : 0.0;
  scan.pass = std::isfinite(scan.c_dolgo) && scan.extension_change < 0.01;
  return scan;
}

RapidScan rapidScan(const GeneratorModel& model, const AssumptionParams& params,
                    const std::vector<double>& b_grid) {
  RapidScan scan;
  const double c12 = params.c12;
  if (!(c12 > 0.0)) throw DomainError("rapid scan requires c12 > 0");
  for (const Complex& e : model.eigenvalues()) {
    const double im = std::abs(e.imag());
    // Violation = eigenvalue strictly right of the curve Re = -|Im|^{-c12}.
    if (im >= params.beta && e.real() > -std::pow(im, -c12) + 1e-12) {
      scan.violating_eigenvalue = e;
      scan.pass = false;
      return scan;
    }
  }
  auto value_at = [&](double b) {
    const Complex z(-std::pow(std::abs(b), -c12), b);
    return model.norms().operatorNorm(model.resolventMatrix(z), NormTag::B, NormTag::B);
  };
  scan.series = scanBothSigns(b_grid, value_at);
  scan.c11_fit = fitSlopeAboveFloor(scan.series.b, scan.series.value, true);
  for (size_t i = 0; i < scan.series.b.size(); ++i) {
    scan.c10 = std::max(scan.c10, scan.series.value[i] /
                                      std::pow(scan.series.b[i], scan.c11_fit));
  }
  scan.pass = std::isfinite(scan.c10) && std::isfinite(scan.c11_fit);
  return scan;
}

OscillatoryCheck oscillatoryBoundCheck(const GeneratorModel& model,
                                       const AssumptionParams& params,
                                       const std::vector<double>& b_grid) {
  OscillatoryCheck check;
  auto value_at = [&](double b) {
    const Matrix r = model.resolventMatrix(Complex(params.alpha, b));
    return std::abs(b) * model.norms().operatorNorm(r, NormTag::B, NormTag::A);
  };
  check.series = scanBothSigns(b_grid, value_at);
  for (size_t i = 0; i < check.series.b.size(); ++i) {
    if (check.series.value[i] > check.c4_measured) {
      check.c4_measured = check.series.value[i];
      check.worst_b = check.series.b[i];
    }
  }
  const double c5 = ledger_formulas::c5(params.alpha, params.beta);
  check.c4_ledger = 2.0 * kPi * params.c1 * c5 * (params.alpha + params.c2);
  check.pass = check.c4_measured <= check.c4_ledger;
  return check;
}

const std::vector<std::pair<std::string, std::string>>& ConstantsLedger::provenance() {
  static const std::vector<std::pair<std::string, std::string>> p = {
      {"c_john", "C_john = gamma ln(1 + ell/alpha)"},
      {"c3", "C3 = C_D [1 - ((alpha+ell)/(alpha+lambda))^{gamma ln beta}]^{-1}"},
      {"c_jim", "C_jim = C1 C3 alpha / ell"},
      {"c5", "C5 = 2 pi beta^{-1} / (1 - e^{-2 pi alpha / beta})"},
      {"c4", "C4 = 2 pi C1 C5 (alpha + C2)"},
      {"c_mid", "C_mid = (1/2pi) int_{-beta}^{beta} ||R(-ell+ib)||_{B->A} / |-ell+ib| db"},
      {"c_outer", "C_outer = (1/2pi) beta^{-(1-C_john)} / (1 - C_john)"},
      {"c_june", "C_june = C_mid + 2 C_outer C4 C_jim"},
      {"c13", "C13(n=1) = C10 + beta^{-C11}"},
  };
  return p;
}

ConstantsLedger computeLedger(const GeneratorModel& model, const AssumptionParams& params) {
  params.validate();
  if (!(params.c1 > 0.0) || !(params.c2 >= 0.0) || !(params.c_dolgo > 0.0)) {
    throw LedgerUndefinedError(
        "ledger requires measured c1, c2 and c_dolgo in the parameters",
        "C1, C2, C_D are scan outputs");
  }

  ConstantsLedger ledger;
  ledger.c_john = ledger_formulas::cJohn(params.gamma, params.ell, params.alpha);

  const double contraction = std::pow(
      (params.alpha + params.ell) / (params.alpha + params.lambda),
      params.gamma * std::log(params.beta));
  if (!(1.0 - contraction > 0.0)) {
    throw LedgerUndefinedError(
        "C3 denominator is not positive (requires beta > 1)",
        "C3 = C_D [1 - ((alpha+ell)/(alpha+lambda))^{gamma ln beta}]^{-1}");
  }
  ledger.c3 = params.c_dolgo / (1.0 - contraction);
  ledger.c_jim = params.c1 * ledger.c3 * params.alpha / params.ell;
  ledger.c5 = ledger_formulas::c5(params.alpha, params.beta);
  ledger.c4 = 2.0 * kPi * params.c1 * ledger.c5 * (params.alpha + params.c2);
  ledger.c_outer = ledger_formulas::cOuter(params.beta, ledger.c_john);

  for (const Complex& e : model.eigenvalues()) {
    if (std::abs(e.real() + params.ell) < 1e-6) {
      throw ContourThroughPoleError(
          "C_mid line Re = -ell passes through a pole; choose a different ell");
    }
  }
  ledger.c_mid = numerics::simpsonUniform<double>(
      [&](double b) {
        const Complex z(-params.ell, b);
        const Matrix r = model.resolventMatrix(z);
        return model.norms().operatorNorm(r, NormTag::B, NormTag::A) / std::abs(z);
      },
      -params.beta, params.beta, 800, 0.0) /
      (2.0 * kPi);

  ledger.c_june = ledger.c_mid + 2.0 * ledger.c_outer * ledger.c4 * ledger.c_jim;
  if (params.c10 > 0.0) {
    ledger.c13 = params.c10 + std::pow(params.beta, -params.c11);
  }
  return ledger;
}

DecayReport exponentialDecayCheck(const GeneratorModel& model,
                                  const SpectralDecomposition& decomposition,
                                  const Vector& mu, double ell, double c_june,
                                  const std::vector<double>& t_grid) {
  if (!(ell > 0.0)) throw DomainError("exponential decay check requires ell > 0");
  DecayReport report;
  report.t_grid = t_grid;

  const Vector z_mu = model.generator() * mu;
  const double z_mu_norm = model.norms().vectorNorm(z_mu, NormTag::B);
  const double scale = std::max(1.0, model.norms().vectorNorm(mu, NormTag::B));
  report.kernel_case = z_mu_norm <= 1e-14 * scale;

  bool pointwise = true;
  for (double t : t_grid) {
    const double r =
        model.norms().vectorNorm(decomposition.remainderApply(t, mu), NormTag::A);
    report.remainder_norms.push_back(r);
    if (report.kernel_case) {
      report.bound_values.push_back(0.0);
      if (r > 1e-10 * scale) pointwise = false;
    } else {
      const double bound = c_june * std::exp(-ell * t) * z_mu_norm;
      report.bound_values.push_back(bound);
      if (r > bound) pointwise = false;
    }
  }
  if (report.kernel_case) {
    report.fitted_rate = -std::numeric_limits<double>::infinity();
    report.pass = pointwise;
    return report;
  }
  report.fitted_rate = fitSlopeAboveFloor(t_grid, report.remainder_norms, false);
  report.pass = pointwise && report.fitted_rate <= -ell + 1e-9;
  return report;
}

int requiredGradedOrder(const AssumptionParams& params, int p) {
  const double threshold = params.c11 + p * (params.c12 + 1.0);
  return static_cast<int>(std::floor(threshold)) + 1;
}

DecayReport rapidDecayCheck(const GeneratorModel& model,
                            const SpectralDecomposition& decomposition, const Vector& mu,
                            int p, int q, const AssumptionParams& params,
                            const std::vector<double>& t_grid) {
  if (p < 1) throw DomainError("rapid decay check requires p >= 1");
  const int q_min = requiredGradedOrder(params, p);
  if (q < q_min) {
    std::ostringstream msg;
    msg << "insufficient regularity: need q > C11 + p (C12 + 1), i.e. q >= " << q_min
        << ", got q = " << q;
    throw InsufficientRegularityError(msg.str());
  }

  DecayReport report;
  report.t_grid = t_grid;
  report.graded_norm = gradedNorm(model, mu, q).value;

  for (double t : t_grid) {
    const double r =
        model.norms().vectorNorm(decomposition.remainderApply(t, mu), NormTag::A);
    report.remainder_norms.push_back(r);
    if (t > 0.0 && report.graded_norm > 0.0) {
      report.c_p = std::max(report.c_p, r * std::pow(t, double(p)) / report.graded_norm);
    }
  }
  for (double t : t_grid) {
    report.bound_values.push_back(t > 0.0 ? report.c_p * std::pow(t, -double(p)) *
                                                report.graded_norm
                                          : report.remainder_norms.front());
  }

  // Slope over the tail (second half of the grid in index order).
  const size_t half = t_grid.size() / 2;
  std::vector<double> tail_t(t_grid.begin() + half, t_grid.end());
  std::vector<double> tail_r(report.remainder_norms.begin() + half,
                             report.remainder_norms.end());
  report.fitted_rate = fitSlopeAboveFloor(tail_t, tail_r, true);
  report.pass = report.fitted_rate <= -double(p) + 1e-9;
  return report;
}

TailBoundCheck laplaceTailBoundCheck(int n, double t, double a) {
  if (n < 0) throw DomainError("tail bound check requires n >= 0");
  if (!(t > 0.0) || !(a > 0.0)) throw DomainError("tail bound check requires t > 0, a > 0");
  TailBoundCheck check;
  const double width = std::min(1.0 / t, a / 16.0);
  check.integral = numerics::gauss16Graded<double>(
      [&](double x) { return std::exp(-t * x) * std::pow(x, double(n)); }, 0.0, a,
      [&](double) { return width; }, 0.0);
  const double fact = numerics::factorial(n);
  check.bound_printed = fact * std::pow(t, -double(n));
  check.bound_chained = fact * std::pow(t, -double(n + 1));
  const double slack = 1.0 + 1e-12;
  check.pass_printed = check.integral <= check.bound_printed * slack;
  check.pass_chained = check.integral <= check.bound_chained * slack;
  return check;
}

C13Check c13BoundCheck(const GeneratorModel& model, const AssumptionParams& params,
                       const Vector& mu, int n, const std::vector<double>& b_grid) {
  if (n < 0) throw DomainError("c13 check requires n >= 0");
  const double gn = gradedNorm(model, mu, n).value;
  if (!(gn > 0.0)) throw DomainError("c13 check requires mu != 0");

  auto value_at = [&](double b) {
    const Complex z(-std::pow(std::abs(b), -params.c12), b);
    const Vector r_mu = model.applyResolvent(z, mu);
    return model.norms().vectorNorm(r_mu, NormTag::B) *
           std::pow(std::abs(b), double(n) - params.c11) / gn;
  };

  C13Check check;
  check.series = scanBothSigns(b_grid, value_at);
  for (double v : check.series.value) check.c13_measured = std::max(check.c13_measured, v);
  double extended_max = check.c13_measured;
  for (double b : extendedGrid(b_grid)) {
    extended_max = std::max({extended_max, value_at(b), value_at(-b)});
  }
  check.extension_change = check.c13_measured > 0
                               ? (extended_max - check.c13_measured) / check.c13_measured
                               : 0.0;
  check.stable = std::isfinite(check.c13_measured) && check.extension_change < 0.01;
  return check;
}

}  // namespace semispec
