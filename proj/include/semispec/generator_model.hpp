#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "semispec/types.hpp"

namespace semispec {

enum class ModelKind { General, Ctmc, Jordan, DiagonalRapid };
enum class EvolveMethod { Eigendecomposition, ScalingSquaring };

// Eigendecomposition Z = V diag(values) V^{-1}, cached per model.
// `usable` is false when the eigenvector basis is too ill conditioned
// (Jordan-like spectra); evolve() then falls back to scaling-and-squaring.
struct Eigendata {
  Vector values;
  Matrix vectors;
  Matrix inverse_vectors;
  double condition = 1.0;
  bool usable = false;
};

// Strong/weak norm pair. The strong norm is
//   ||mu||_B = sqrt(||mu||_2^2 + ||Z mu||_2^2) = ||S mu||_2
// with S the Hermitian square root of I + Z^* Z, so every induced
// operator norm is a singular value computation. ||mu||_A = ||mu||_2.
class NormPair {
public:
  explicit NormPair(const Matrix& generator);

  double vectorNorm(const Vector& mu, NormTag tag) const;
  double operatorNorm(const Matrix& op, NormTag from, NormTag to) const;

  bool diagonal() const { return diagonal_; }
  const Matrix& strongFactor() const { return s_; }
  const Matrix& strongFactorInverse() const { return s_inv_; }

private:
  bool diagonal_;
  Eigen::VectorXd s_diag_, s_inv_diag_;
  Matrix s_, s_inv_;
};

// A finite-dimensional semigroup generator Z together with its cached
// spectral data and norm pair. Immutable after construction; cheap to
// copy (shared state) and safe to use from multiple threads.
class GeneratorModel {
public:
  static GeneratorModel fromMatrix(Matrix generator);
  static GeneratorModel ctmc(const Matrix& rate_matrix);
  static GeneratorModel jordanBlock(Complex eigenvalue, int size);
  // Diagonal entries i*k - |k|^{-c} for k in {-K,...,-1,1,...,K}, in
  // ascending k order; requires c in (0,1).
  static GeneratorModel diagonalRapid(double c, int K);
  // Diagonalizable Z = V D V^{-1} with eigenvalue real parts in
  // [abscissa_bound - 2.5, abscissa_bound] (abscissa_bound < 0),
  // pairwise eigenvalue separation >= 0.25 and cond(V) <= ~2.5.
  static GeneratorModel randomStable(int dimension, double abscissa_bound,
                                     std::uint64_t seed);

  int dimension() const;
  ModelKind kind() const;
  const Matrix& generator() const;
  bool diagonal() const;

  const Eigendata& eigendata() const;
  const NormPair& norms() const;
  const std::vector<Complex>& eigenvalues() const;
  double spectralAbscissa() const;
  double spectralRadius() const;
  double poleGuardRadius() const;  // 1e-12 relative to ||Z||

  // T_t = exp(tZ); t = 0 returns the identity exactly, t < 0 is rejected.
  Matrix evolve(double t) const;
  Vector applyEvolve(double t, const Vector& mu) const;
  EvolveMethod evolveMethod() const;

  // Solve (z Id - Z) x = rhs / compute (z Id - Z)^{-1}. Both enforce the
  // near-pole guard and throw PoleError inside it.
  Vector applyResolvent(Complex z, const Vector& rhs) const;
  Matrix resolventMatrix(Complex z) const;

  // Distance from z to the spectrum, and the closest eigenvalue.
  double spectralDistance(Complex z, Complex* nearest = nullptr) const;

private:
  struct Impl;
  explicit GeneratorModel(std::shared_ptr<const Impl> impl);
  static GeneratorModel make(Matrix generator, ModelKind kind);
  std::shared_ptr<const Impl> impl_;
};

double opNorm(const GeneratorModel& model, const Matrix& op, NormTag from, NormTag to);

}  // namespace semispec
