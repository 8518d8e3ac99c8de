#pragma once

#include <optional>

#include "semispec/generator_model.hpp"
#include "semispec/types.hpp"

namespace semispec {

enum class ResolventMethod { Direct, Laplace, PresExtension, Neumann };

struct ResolventEvaluation {
  Complex z;
  Matrix matrix;
  ResolventMethod method = ResolventMethod::Direct;
  // Direct: Frobenius defect ||(z Id - Z) R - Id||_F.
  // Other methods: B->B distance to the direct inverse, when z is off
  // the spectrum so the direct route exists.
  std::optional<double> residual;
  // Laplace: bound on the dropped tail C1 e^{-Re(z) t_max} / Re(z).
  double truncation_tail_bound = 0.0;
  // Neumann: index N of the last accumulated series term, and the
  // B->B norm of the partial sum sum_{n=0}^N (alpha+ell)^n R^n.
  int truncation_index = 0;
  double series_norm = 0.0;
  bool small_b_warning = false;
};

// (z Id - Z)^{-1} by direct inversion. Throws PoleError inside the guard.
ResolventEvaluation resolventDirect(const GeneratorModel& model, Complex z);

// Quadrature of the Laplace integral int_0^infty e^{-zt} T_t dt truncated
// at t_max, composite Simpson with the given step. Requires Re(z) > 0.
ResolventEvaluation resolventLaplace(const GeneratorModel& model, Complex z,
                                     double t_max, double step);

// || (z - zeta) R(zeta) R(z) - (R(zeta) - R(z)) ||_{B->B}
double resolventIdentityResidual(const GeneratorModel& model, Complex z, Complex zeta);

// Meromorphic extension through the resolvent equation, evaluated at
// z + 1/eta:  R(z + 1/eta) = eta R(z) (eta Id + R(z))^{-1}.
// (The sign of R(z) in the inverted factor is fixed by the scalar case.)
ResolventEvaluation presExtension(const GeneratorModel& model, Complex z, Complex eta);

// Neumann-series extension
//   R(-ell + ib) = R(alpha + ib) sum_{n>=0} (alpha+ell)^n R(alpha+ib)^n,
// truncated once the bounded tail drops below tail_tol. When beta_guard
// is set, |b| < beta is a precondition violation unless allow_small_b.
ResolventEvaluation neumannExtension(const GeneratorModel& model, double alpha,
                                     double ell, double b, double tail_tol,
                                     std::optional<double> beta_guard = std::nullopt,
                                     bool allow_small_b = false);

// || R(z) - z^{-n} R(z) Z^n - sum_{j=0}^{n-1} z^{-(j+1)} Z^j ||_{B->B}
double generatorIdentityResidual(const GeneratorModel& model, Complex z, int n);

struct GradedNorm {
  int q = 0;
  double value = 0.0;
};

// ||mu||_{Z^q} = sum_{0<=n<=q} ||Z^n mu||_B
GradedNorm gradedNorm(const GeneratorModel& model, const Vector& mu, int q);

}  // namespace semispec
