#include "semispec/resolvent.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "semispec/errors.hpp"
#include "semispec/numerics.hpp"

namespace semispec {

namespace {

double crossResidual(const GeneratorModel& model, const Matrix& candidate, Complex z) {
  const Matrix direct = model.resolventMatrix(z);
  return model.norms().operatorNorm(candidate - direct, NormTag::B, NormTag::B);
}

}  // namespace

ResolventEvaluation resolventDirect(const GeneratorModel& model, Complex z) {
  ResolventEvaluation eval;
  eval.z = z;
  eval.method = ResolventMethod::Direct;
  eval.matrix = model.resolventMatrix(z);
  const Eigen::Index n = model.dimension();
  Matrix a = -model.generator();
  a.diagonal().array() += z;
  eval.residual = (a * eval.matrix - Matrix::Identity(n, n)).norm();
  return eval;
}

ResolventEvaluation resolventLaplace(const GeneratorModel& model, Complex z,
                                     double t_max, double step) {
  if (!(z.real() > 0.0)) {
    throw DomainError("Laplace representation requires Re(z) > 0");
  }
  if (!(t_max > 0.0) || !(step > 0.0)) {
    throw DomainError("Laplace quadrature requires t_max > 0 and step > 0");
  }
  const Eigen::Index n = model.dimension();
  const Matrix zero = Matrix::Zero(n, n);
  const int intervals = static_cast<int>(std::ceil(t_max / step));
  Matrix value = numerics::simpsonUniform<Matrix>(
      [&](double t) { return Matrix(std::exp(-z * t) * model.evolve(t)); }, 0.0, t_max,
      intervals, zero);

  ResolventEvaluation eval;
  eval.z = z;
  eval.method = ResolventMethod::Laplace;
  eval.matrix = std::move(value);

  double c1 = 0.0;
  for (int i = 0; i <= 16; ++i) {
    const double t = t_max * i / 16.0;
    c1 = std::max(c1, model.norms().operatorNorm(model.evolve(t), NormTag::B, NormTag::B));
  }
  eval.truncation_tail_bound = c1 * std::exp(-z.real() * t_max) / z.real();

  if (model.spectralDistance(z) > model.poleGuardRadius()) {
    eval.residual = crossResidual(model, eval.matrix, z);
  }
  return eval;
}

double resolventIdentityResidual(const GeneratorModel& model, Complex z, Complex zeta) {
  const Matrix rz = model.resolventMatrix(z);
  const Matrix rzeta = model.resolventMatrix(zeta);
  const Matrix lhs = (z - zeta) * rzeta * rz;
  const Matrix rhs = rzeta - rz;
  return model.norms().operatorNorm(lhs - rhs, NormTag::B, NormTag::B);
}

ResolventEvaluation presExtension(const GeneratorModel& model, Complex z, Complex eta) {
  if (!(z.real() > 0.0)) {
    throw DomainError("pres extension requires a base point with Re(z) > 0");
  }
  if (eta == Complex(0, 0)) throw DomainError("eta must be nonzero");
  const Eigen::Index n = model.dimension();
  const Matrix r = model.resolventMatrix(z);
  Matrix factor = r;
  factor.diagonal().array() += eta;

  Eigen::JacobiSVD<Matrix> svd(factor, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues()(n - 1);
  const double smax = svd.singularValues()(0);
  if (!(smin > 1e-12 * std::max(1.0, smax))) {
    throw ExtensionPoleError("extension pole: (eta Id + R(z)) numerically singular");
  }

  ResolventEvaluation eval;
  const Complex target = z + 1.0 / eta;
  eval.z = target;
  eval.method = ResolventMethod::PresExtension;
  eval.matrix = eta * r * svd.solve(Matrix::Identity(n, n));
  if (model.spectralDistance(target) > model.poleGuardRadius()) {
    eval.residual = crossResidual(model, eval.matrix, target);
  }
  return eval;
}

ResolventEvaluation neumannExtension(const GeneratorModel& model, double alpha,
                                     double ell, double b, double tail_tol,
                                     std::optional<double> beta_guard,
                                     bool allow_small_b) {
  if (!(alpha > 0.0) || !(ell > 0.0)) {
    throw DomainError("Neumann extension requires alpha > 0 and ell > 0");
  }
  if (!(tail_tol > 0.0)) throw DomainError("tail_tol must be > 0");

  ResolventEvaluation eval;
  eval.method = ResolventMethod::Neumann;
  if (beta_guard && std::abs(b) < *beta_guard) {
    if (!allow_small_b) {
      std::ostringstream msg;
      msg << "Neumann extension guard violated: |b| = " << std::abs(b) << " < beta = "
          << *beta_guard;
      throw PreconditionError(msg.str());
    }
    eval.small_b_warning = true;
  }

  const Complex base(alpha, b);
  const Complex target(-ell, b);
  const Matrix r = model.resolventMatrix(base);
  const double x = alpha + ell;

  // In finite dimension the spectral radius of R(alpha+ib) is exactly
  // 1/dist(alpha+ib, spec Z); the series converges iff x * rho < 1.
  const double rho = 1.0 / model.spectralDistance(base);
  const double ratio = x * rho;
  if (ratio >= 1.0 - 1e-10) {
    std::ostringstream msg;
    msg << "Neumann series diverges: (alpha+ell) * rho(R) = " << ratio << " >= 1";
    throw SeriesDivergenceError(msg.str());
  }

  const Eigen::Index n = model.dimension();
  Matrix sum = Matrix::Identity(n, n);
  Matrix term = Matrix::Identity(n, n);
  int index = 0;
  double prev_norm = 1.0;
  int growth_run = 0;
  for (int k = 1; k <= 2000; ++k) {
    term = x * (term * r);
    const double term_norm = model.norms().operatorNorm(term, NormTag::B, NormTag::B);
    sum += term;
    index = k;
    if (term_norm > prev_norm) {
      if (++growth_run > 50) {
        throw SeriesDivergenceError("Neumann series terms plateaued without decay");
      }
    } else {
      growth_run = 0;
    }
    prev_norm = term_norm;
    // Geometric tail bound past the transient: sum_{m>k} ||term_m|| <=
    // ||term_k|| * ratio / (1 - ratio).
    if (term_norm * ratio / (1.0 - ratio) < tail_tol) break;
  }

  eval.z = target;
  eval.matrix = r * sum;
  eval.truncation_index = index;
  eval.series_norm = model.norms().operatorNorm(sum, NormTag::B, NormTag::B);
  if (model.spectralDistance(target) > model.poleGuardRadius()) {
    eval.residual = crossResidual(model, eval.matrix, target);
  }
  return eval;
}

double generatorIdentityResidual(const GeneratorModel& model, Complex z, int n) {
  if (n < 1) throw DomainError("generator identity requires n >= 1");
  if (z == Complex(0, 0)) throw DomainError("generator identity requires z != 0");
  const Eigen::Index dim = model.dimension();
  const Matrix r = model.resolventMatrix(z);
  const Matrix& gen = model.generator();

  Matrix zpow = Matrix::Identity(dim, dim);  // Z^j
  Matrix acc = r;
  Complex zinv = 1.0 / z;
  Complex coeff = zinv;  // z^{-(j+1)}
  for (int j = 0; j < n; ++j) {
    acc -= coeff * zpow;
    zpow = zpow * gen;
    coeff *= zinv;
  }
  // zpow = Z^n, coeff reached z^{-(n+1)}; the leading term carries z^{-n}.
  acc -= (coeff * z) * (r * zpow);
  return model.norms().operatorNorm(acc, NormTag::B, NormTag::B);
}

GradedNorm gradedNorm(const GeneratorModel& model, const Vector& mu, int q) {
  if (q < 0) throw DomainError("graded norm requires q >= 0");
  GradedNorm out;
  out.q = q;
  Vector w = mu;
  for (int n = 0; n <= q; ++n) {
    out.value += model.norms().vectorNorm(w, NormTag::B);
    if (n < q) w = model.generator() * w;
  }
  return out;
}

}  // namespace semispec
