#include "semispec/generator_model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>

#include "semispec/errors.hpp"
#include "semispec/numerics.hpp"

namespace semispec {

namespace {
constexpr double kEigCondLimit = 1e6;
}

// ---------------------------------------------------------------------------
// NormPair

NormPair::NormPair(const Matrix& generator) {
  const Eigen::Index n = generator.rows();
  diagonal_ = numerics::isDiagonal(generator);
  if (diagonal_) {
    s_diag_.resize(n);
    s_inv_diag_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double s = std::sqrt(1.0 + std::norm(generator(i, i)));
      s_diag_(i) = s;
      s_inv_diag_(i) = 1.0 / s;
    }
    s_ = s_diag_.cast<Complex>().asDiagonal();
    s_inv_ = s_inv_diag_.cast<Complex>().asDiagonal();
    return;
  }
  const Matrix gram = Matrix::Identity(n, n) + generator.adjoint() * generator;
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const Eigen::VectorXd roots = es.eigenvalues().cwiseMax(1.0).cwiseSqrt();
  s_ = es.eigenvectors() * roots.cast<Complex>().asDiagonal() *
       es.eigenvectors().adjoint();
  s_inv_ = es.eigenvectors() * roots.cwiseInverse().cast<Complex>().asDiagonal() *
           es.eigenvectors().adjoint();
}

double NormPair::vectorNorm(const Vector& mu, NormTag tag) const {
  if (tag == NormTag::A) return mu.norm();
  if (diagonal_) return (s_diag_.cast<Complex>().asDiagonal() * mu).norm();
  return (s_ * mu).norm();
}

double NormPair::operatorNorm(const Matrix& op, NormTag from, NormTag to) const {
  if (diagonal_ && numerics::isDiagonal(op)) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < op.rows(); ++i) {
      double v = std::abs(op(i, i));
      if (from == NormTag::B) v *= s_inv_diag_(i);
      if (to == NormTag::B) v *= s_diag_(i);
      best = std::max(best, v);
    }
    return best;
  }
  Matrix m = op;
  if (from == NormTag::B) m = m * s_inv_;
  if (to == NormTag::B) m = s_ * m;
  return numerics::spectralNorm(m);
}

// ---------------------------------------------------------------------------
// GeneratorModel

struct GeneratorModel::Impl {
  Matrix z;
  ModelKind kind = ModelKind::General;
  bool diagonal = false;

  mutable std::once_flag eig_once, norm_once;
  mutable std::unique_ptr<Eigendata> eig;
  mutable std::unique_ptr<NormPair> norms;
  mutable std::vector<Complex> eigenvalue_list;

  const Eigendata& eigendata() const {
    std::call_once(eig_once, [this] {
      auto data = std::make_unique<Eigendata>();
      const Eigen::Index n = z.rows();
      if (diagonal) {
        data->values = z.diagonal();
        data->vectors = Matrix::Identity(n, n);
        data->inverse_vectors = Matrix::Identity(n, n);
        data->condition = 1.0;
        data->usable = true;
      } else {
        Eigen::ComplexEigenSolver<Matrix> solver(z, true);
        data->values = solver.eigenvalues();
        data->vectors = solver.eigenvectors();
        Eigen::JacobiSVD<Matrix> svd(data->vectors);
        const double smin = svd.singularValues()(n - 1);
        data->condition =
            smin > 0 ? svd.singularValues()(0) / smin : std::numeric_limits<double>::infinity();
        if (solver.info() == Eigen::Success && data->condition < kEigCondLimit) {
          data->inverse_vectors = data->vectors.partialPivLu().inverse();
          const double defect =
              (data->vectors * data->values.asDiagonal() * data->inverse_vectors - z).norm();
          data->usable = defect <= 1e-8 * std::max(1.0, z.norm());
        }
      }
      eigenvalue_list.assign(data->values.data(), data->values.data() + n);
      eig = std::move(data);
    });
    return *eig;
  }

  const NormPair& normPair() const {
    std::call_once(norm_once, [this] { norms = std::make_unique<NormPair>(z); });
    return *norms;
  }
};

GeneratorModel::GeneratorModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

GeneratorModel GeneratorModel::make(Matrix generator, ModelKind kind) {
  if (generator.rows() != generator.cols() || generator.rows() == 0) {
    throw DomainError("generator matrix must be square and non-empty");
  }
  auto impl = std::make_shared<Impl>();
  impl->diagonal = numerics::isDiagonal(generator);
  impl->z = std::move(generator);
  impl->kind = kind;
  return GeneratorModel(impl);
}

GeneratorModel GeneratorModel::fromMatrix(Matrix generator) {
  return make(std::move(generator), ModelKind::General);
}

GeneratorModel GeneratorModel::ctmc(const Matrix& rate_matrix) {
  if (rate_matrix.rows() != rate_matrix.cols()) {
    throw DomainError("ctmc rate matrix must be square");
  }
  for (Eigen::Index i = 0; i < rate_matrix.rows(); ++i) {
    Complex row_sum(0, 0);
    for (Eigen::Index j = 0; j < rate_matrix.cols(); ++j) {
      row_sum += rate_matrix(i, j);
      if (i != j) {
        const Complex q = rate_matrix(i, j);
        if (q.real() < -1e-14 || std::abs(q.imag()) > 1e-14) {
          throw DomainError("ctmc off-diagonal rates must be real and >= 0");
        }
      }
    }
    if (std::abs(row_sum) > 1e-12) {
      throw DomainError("ctmc row sums must vanish (|sum| <= 1e-12)");
    }
  }
  return make(rate_matrix, ModelKind::Ctmc);
}

GeneratorModel GeneratorModel::jordanBlock(Complex eigenvalue, int size) {
  if (size < 1) throw DomainError("jordan block size must be >= 1");
  Matrix z = Matrix::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    z(i, i) = eigenvalue;
    if (i + 1 < size) z(i, i + 1) = Complex(1, 0);
  }
  return make(std::move(z), ModelKind::Jordan);
}

GeneratorModel GeneratorModel::diagonalRapid(double c, int K) {
  if (!(c > 0.0 && c < 1.0)) throw DomainError("diagonal-rapid requires c in (0,1)");
  if (K < 1) throw DomainError("diagonal-rapid requires K >= 1");
  Matrix z = Matrix::Zero(2 * K, 2 * K);
  Eigen::Index idx = 0;
  for (int k = -K; k <= K; ++k) {
    if (k == 0) continue;
    z(idx, idx) = Complex(-std::pow(std::abs(double(k)), -c), double(k));
    ++idx;
  }
  return make(std::move(z), ModelKind::DiagonalRapid);
}

GeneratorModel GeneratorModel::randomStable(int dimension, double abscissa_bound,
                                            std::uint64_t seed) {
  if (dimension < 1) throw DomainError("random-stable dimension must be >= 1");
  if (!(abscissa_bound < 0.0)) {
    throw DomainError("random-stable requires a negative spectral abscissa bound");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(abscissa_bound - 2.5, abscissa_bound);
  std::uniform_real_distribution<double> im(-2.0, 2.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<Complex> eigs;
  eigs.reserve(dimension);
  int attempts = 0;
  while (static_cast<int>(eigs.size()) < dimension) {
    const Complex cand(re(rng), im(rng));
    bool ok = true;
    for (const Complex& e : eigs) {
      if (std::abs(cand - e) < 0.25) {
        ok = false;
        break;
      }
    }
    if (ok || ++attempts > 10000) eigs.push_back(cand);
  }

  if (dimension == 1) {
    Matrix z(1, 1);
    z(0, 0) = eigs[0];
    return make(std::move(z), ModelKind::General);
  }

  auto random_unitary = [&rng, &gauss](int n) {
    Matrix g(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    return q;
  };

  const Matrix q1 = random_unitary(dimension);
  const Matrix q2 = random_unitary(dimension);
  Eigen::VectorXd sing(dimension);
  const double kappa = 2.5;
  for (int i = 0; i < dimension; ++i) {
    sing(i) = std::pow(kappa, dimension == 1 ? 0.0 : double(i) / (dimension - 1));
  }
  const Matrix v = q1 * sing.cast<Complex>().asDiagonal() * q2;
  const Matrix v_inv = q2.adjoint() * sing.cwiseInverse().cast<Complex>().asDiagonal() *
                       q1.adjoint();
  Vector d(dimension);
  for (int i = 0; i < dimension; ++i) d(i) = eigs[i];
  Matrix z = v * d.asDiagonal() * v_inv;
  return make(std::move(z), ModelKind::General);
}

int GeneratorModel::dimension() const { return static_cast<int>(impl_->z.rows()); }
ModelKind GeneratorModel::kind() const { return impl_->kind; }
const Matrix& GeneratorModel::generator() const { return impl_->z; }
bool GeneratorModel::diagonal() const { return impl_->diagonal; }
const Eigendata& GeneratorModel::eigendata() const { return impl_->eigendata(); }
const NormPair& GeneratorModel::norms() const { return impl_->normPair(); }

const std::vector<Complex>& GeneratorModel::eigenvalues() const {
  impl_->eigendata();
  return impl_->eigenvalue_list;
}

double GeneratorModel::spectralAbscissa() const {
  double a = -std::numeric_limits<double>::infinity();
  for (const Complex& e : eigenvalues()) a = std::max(a, e.real());
  return a;
}

double GeneratorModel::spectralRadius() const {
  double r = 0.0;
  for (const Complex& e : eigenvalues()) r = std::max(r, std::abs(e));
  return r;
}

double GeneratorModel::poleGuardRadius() const {
  return 1e-12 * std::max(1.0, impl_->z.norm());
}

double GeneratorModel::spectralDistance(Complex z, Complex* nearest) const {
  double best = std::numeric_limits<double>::infinity();
  Complex arg(0, 0);
  for (const Complex& e : eigenvalues()) {
    const double d = std::abs(z - e);
    if (d < best) {
      best = d;
      arg = e;
    }
  }
  if (nearest) *nearest = arg;
  return best;
}

EvolveMethod GeneratorModel::evolveMethod() const {
  return eigendata().usable ? EvolveMethod::Eigendecomposition
                            : EvolveMethod::ScalingSquaring;
}

Matrix GeneratorModel::evolve(double t) const {
  if (t < 0.0) throw DomainError("the semigroup is one-sided: t must be >= 0");
  const Eigen::Index n = impl_->z.rows();
  if (t == 0.0) return Matrix::Identity(n, n);
  if (impl_->diagonal) {
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = std::exp(t * impl_->z(i, i));
    return d.asDiagonal();
  }
  const Eigendata& ed = eigendata();
  if (ed.usable) {
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = std::exp(t * ed.values(i));
    return ed.vectors * d.asDiagonal() * ed.inverse_vectors;
  }
  return (t * impl_->z).exp();
}

Vector GeneratorModel::applyEvolve(double t, const Vector& mu) const {
  if (t < 0.0) throw DomainError("the semigroup is one-sided: t must be >= 0");
  if (t == 0.0) return mu;
  const Eigen::Index n = impl_->z.rows();
  if (impl_->diagonal) {
    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i) out(i) = std::exp(t * impl_->z(i, i)) * mu(i);
    return out;
  }
  const Eigendata& ed = eigendata();
  if (ed.usable) {
    Vector u = ed.inverse_vectors * mu;
    for (Eigen::Index i = 0; i < n; ++i) u(i) *= std::exp(t * ed.values(i));
    return ed.vectors * u;
  }
  return evolve(t) * mu;
}

Vector GeneratorModel::applyResolvent(Complex z, const Vector& rhs) const {
  Complex nearest;
  const double dist = spectralDistance(z, &nearest);
  if (dist <= poleGuardRadius()) {
    throw PoleError("resolvent requested inside the near-pole guard", z, nearest);
  }
  const Eigen::Index n = impl_->z.rows();
  if (impl_->diagonal) {
    Vector out(n);
    for (Eigen::Index i = 0; i < n; ++i) out(i) = rhs(i) / (z - impl_->z(i, i));
    return out;
  }
  const Eigendata& ed = eigendata();
  if (ed.usable) {
    Vector u = ed.inverse_vectors * rhs;
    for (Eigen::Index i = 0; i < n; ++i) u(i) /= (z - ed.values(i));
    return ed.vectors * u;
  }
  Matrix a = -impl_->z;
  a.diagonal().array() += z;
  return a.partialPivLu().solve(rhs);
}

Matrix GeneratorModel::resolventMatrix(Complex z) const {
  Complex nearest;
  const double dist = spectralDistance(z, &nearest);
  if (dist <= poleGuardRadius()) {
    throw PoleError("resolvent requested inside the near-pole guard", z, nearest);
  }
  const Eigen::Index n = impl_->z.rows();
  if (impl_->diagonal) {
    Vector d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = 1.0 / (z - impl_->z(i, i));
    return d.asDiagonal();
  }
  Matrix a = -impl_->z;
  a.diagonal().array() += z;
  return a.partialPivLu().inverse();
}

double opNorm(const GeneratorModel& model, const Matrix& op, NormTag from, NormTag to) {
  if (op.rows() != model.dimension() || op.cols() != model.dimension()) {
    throw DomainError("operator dimension mismatch");
  }
  return model.norms().operatorNorm(op, from, to);
}

}  // namespace semispec
