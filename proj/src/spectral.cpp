#include "semispec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "semispec/errors.hpp"
#include "semispec/numerics.hpp"

namespace semispec {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPoleMargin = 1e-6;

double clusterTolerance(const GeneratorModel& model) {
  return 1e-6 * std::max(1.0, model.spectralRadius());
}

struct Cluster {
  Complex rep;
  int multiplicity = 0;
};

std::vector<Cluster> clusterEigenvalues(const GeneratorModel& model) {
  std::vector<Complex> eigs = model.eigenvalues();
  std::sort(eigs.begin(), eigs.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() < b.imag();
  });
  const double tol = clusterTolerance(model);
  std::vector<Cluster> clusters;
  for (const Complex& e : eigs) {
    bool merged = false;
    for (Cluster& c : clusters) {
      if (std::abs(e - c.rep) <= tol) {
        c.rep = (c.rep * double(c.multiplicity) + e) / double(c.multiplicity + 1);
        ++c.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) clusters.push_back({e, 1});
  }
  return clusters;
}

// ---------------------------------------------------------------------------
// Contour geometry

struct ResolvedPath {
  bool curved = false;
  double shift = 0.5;  // ell for the line, epsilon for the curve
  double c12 = 1.0;
  double b0 = std::numeric_limits<double>::infinity();  // curve kink
  double zone_edge = 0.0;   // |b| beyond which the regularized form is used
  double b_cut = 0.0;
  int n_reg = 6;
};

Complex pathPoint(const ResolvedPath& p, double b) {
  if (!p.curved) return Complex(-p.shift, b);
  const double s =
      b == 0.0 ? p.shift : std::min(p.shift, std::pow(std::abs(b), -p.c12));
  return Complex(-s, b);
}

Complex pathDerivative(const ResolvedPath& p, double b) {
  if (!p.curved || std::abs(b) <= p.b0) return Complex(0, 1);
  const double sgn = b > 0 ? 1.0 : -1.0;
  return Complex(sgn * p.c12 * std::pow(std::abs(b), -p.c12 - 1.0), 1.0);
}

double distanceToPath(const ResolvedPath& p, Complex lambda) {
  if (!p.curved) return std::abs(lambda.real() + p.shift);
  double best = std::numeric_limits<double>::infinity();
  const double lo = lambda.imag() - 2.0, hi = lambda.imag() + 2.0;
  for (int i = 0; i <= 4000; ++i) {
    const double b = lo + (hi - lo) * i / 4000.0;
    best = std::min(best, std::abs(lambda - pathPoint(p, b)));
  }
  return best;
}

bool rightOfPath(const ResolvedPath& p, Complex lambda) {
  return lambda.real() > pathPoint(p, lambda.imag()).real();
}

ResolvedPath resolvePath(const GeneratorModel& model, const ContourSpec& contour,
                         double auto_epsilon_cap) {
  ResolvedPath p;
  p.n_reg = std::max(1, contour.regularization_order);
  p.c12 = contour.c12;
  if (contour.kind == ContourSpec::Kind::ShiftedLine) {
    if (!(contour.abscissa > 0.0)) throw DomainError("shifted line requires ell > 0");
    p.curved = false;
    p.shift = contour.abscissa;
  } else if (contour.kind == ContourSpec::Kind::CurvedRapid) {
    p.curved = true;
    if (!(p.c12 > 0.0)) throw DomainError("curved contour requires c12 > 0");
    double eps = contour.epsilon;
    if (eps <= 0.0) {
      // Half the smallest |Re| among strictly stable poles, capped below ell.
      double min_neg = std::numeric_limits<double>::infinity();
      for (const Complex& e : model.eigenvalues()) {
        if (e.real() < -1e-9) min_neg = std::min(min_neg, -e.real());
      }
      eps = 0.9 * auto_epsilon_cap;
      if (std::isfinite(min_neg)) eps = std::min(eps, 0.5 * min_neg);
      if (!(eps > 0.0)) throw DomainError("could not choose a curved-contour epsilon");
    }
    p.shift = eps;
    p.b0 = std::pow(eps, -1.0 / p.c12);
  } else {
    throw DomainError("remainder contours must be shifted-line or curved-rapid");
  }

  const double rho = model.spectralRadius();
  p.zone_edge = std::max({contour.beta + 1.0, 2.0 * rho + 2.0,
                          p.curved ? 1.2 * p.b0 : 0.0});
  p.b_cut = contour.b_cut > 0.0
                ? std::max(contour.b_cut, 1.5 * p.zone_edge)
                : std::max({8.0 * rho, 3.0 * p.zone_edge, 150.0});

  for (const Complex& e : model.eigenvalues()) {
    if (distanceToPath(p, e) < kPoleMargin) {
      std::ostringstream msg;
      msg << "contour passes through a pole near z = (" << e.real() << ", " << e.imag()
          << ")";
      throw ContourThroughPoleError(msg.str());
    }
  }
  return p;
}

// Local panel width: resolve the e^{ibt} oscillation globally and the
// resolvent's variation near eigenvalue ordinates.
class PanelWidth {
public:
  PanelWidth(const GeneratorModel& model, const ResolvedPath& path, double t)
      : path_(path) {
    global_ = std::min(0.5, 1.5 / std::max(t, 1.0));
    by_im_ = model.eigenvalues();
    std::sort(by_im_.begin(), by_im_.end(),
              [](const Complex& a, const Complex& b) { return a.imag() < b.imag(); });
  }

  double operator()(double b) const {
    const Complex z = pathPoint(path_, b);
    double dist = std::numeric_limits<double>::infinity();
    auto it = std::lower_bound(by_im_.begin(), by_im_.end(), b,
                               [](const Complex& e, double v) { return e.imag() < v; });
    const long idx = it - by_im_.begin();
    for (long k = std::max(0L, idx - 3);
         k < std::min<long>(by_im_.size(), idx + 3); ++k) {
      dist = std::min(dist, std::abs(z - by_im_[k]));
    }
    return std::clamp(0.3 * dist, global_ / 256.0, global_);
  }

  double global() const { return global_; }

private:
  const ResolvedPath& path_;
  double global_;
  std::vector<Complex> by_im_;
};

// Counterterm integral c_j = (1/2*pi*i) int e^{zt} z^{-(j+1)} dz over the
// central piece, taken along a deformed rectangle through Re = -L where the
// integrand is benign. Valid because z = 0 lies right of both paths and the
// integrand has no other singularity.
Complex countertermIntegral(const ResolvedPath& path, double t, int j, double wglob) {
  const Complex za = pathPoint(path, -path.zone_edge);
  const Complex zb = pathPoint(path, path.zone_edge);
  const double L = std::max(1.0, path.shift);
  const Complex p1(-L, za.imag());
  const Complex p2(-L, zb.imag());
  auto f = [&](Complex z) { return std::exp(z * t) * std::pow(z, -(j + 1)); };
  auto segment = [&](Complex from, Complex to) {
    const double len = std::abs(to - from);
    if (len == 0.0) return Complex(0, 0);
    const Complex dir = (to - from) / len;
    return numerics::gauss16Graded<Complex>(
        [&](double s) { return f(from + dir * s) * dir; }, 0.0, len,
        [&](double) { return wglob; }, Complex(0, 0));
  };
  const Complex total = segment(za, p1) + segment(p1, p2) + segment(p2, zb);
  return total / Complex(0, 2.0 * kPi);
}

std::vector<std::pair<double, double>> centralSegments(const ResolvedPath& p) {
  if (p.curved && p.b0 < p.zone_edge) {
    return {{-p.zone_edge, -p.b0}, {-p.b0, p.b0}, {p.b0, p.zone_edge}};
  }
  return {{-p.zone_edge, p.zone_edge}};
}

// Shared remainder integral. ValueT is Matrix or Vector; the callables
// evaluate e^{zt} R(z) * w(b) and the regularized outer integrand.
template <typename ValueT, typename FCen, typename FOut, typename Scale>
ValueT integrateRemainder(const ResolvedPath& path, double t, const PanelWidth& width,
                          FCen f_cen, FOut f_out, ValueT zero, Scale scale_by_cj) {
  ValueT acc = zero;
  for (const auto& [lo, hi] : centralSegments(path)) {
    acc += numerics::gauss16Graded<ValueT>(f_cen, lo, hi, width, zero);
  }
  acc += numerics::gauss16Graded<ValueT>(f_out, path.zone_edge, path.b_cut, width, zero);
  acc += numerics::gauss16Graded<ValueT>(f_out, -path.b_cut, -path.zone_edge, width, zero);
  acc /= Complex(0, 2.0 * kPi);
  for (int j = 0; j < path.n_reg; ++j) {
    const Complex cj = countertermIntegral(path, t, j, width.global());
    acc -= scale_by_cj(j, cj);
  }
  return acc;
}

Matrix remainderMatrixOnPath(const GeneratorModel& model, const ResolvedPath& path,
                             double t) {
  const Eigen::Index n = model.dimension();
  const PanelWidth width(model, path, t);

  if (model.diagonal()) {
    const Vector diag = model.generator().diagonal();
    Vector diag_pow_n(n);
    for (Eigen::Index i = 0; i < n; ++i) diag_pow_n(i) = std::pow(diag(i), path.n_reg);
    auto f_cen = [&](double b) -> Vector {
      const Complex z = pathPoint(path, b);
      const Complex w = std::exp(z * t) * pathDerivative(path, b);
      return (w * (z - diag.array()).inverse()).matrix();
    };
    auto f_out = [&](double b) -> Vector {
      const Complex z = pathPoint(path, b);
      const Complex w =
          std::exp(z * t) * std::pow(z, -path.n_reg) * pathDerivative(path, b);
      return (w * diag_pow_n.array() * (z - diag.array()).inverse()).matrix();
    };
    Vector zero = Vector::Zero(n);
    Vector diag_pow_j = Vector::Ones(n);
    auto scale = [&](int j, Complex cj) -> Vector {
      if (j > 0) diag_pow_j = diag_pow_j.cwiseProduct(diag);
      return Vector(cj * diag_pow_j);
    };
    const Vector acc =
        integrateRemainder<Vector>(path, t, width, f_cen, f_out, zero, scale);
    return acc.asDiagonal();
  }

  Matrix z_pow_n = Matrix::Identity(n, n);
  for (int k = 0; k < path.n_reg; ++k) z_pow_n = z_pow_n * model.generator();
  auto f_cen = [&](double b) -> Matrix {
    const Complex z = pathPoint(path, b);
    return Matrix(std::exp(z * t) * pathDerivative(path, b) * model.resolventMatrix(z));
  };
  auto f_out = [&](double b) -> Matrix {
    const Complex z = pathPoint(path, b);
    const Complex w = std::exp(z * t) * std::pow(z, -path.n_reg) * pathDerivative(path, b);
    return Matrix(w * (model.resolventMatrix(z) * z_pow_n));
  };
  Matrix zero = Matrix::Zero(n, n);
  Matrix z_pow_j = Matrix::Identity(n, n);
  auto scale = [&](int j, Complex cj) -> Matrix {
    if (j > 0) z_pow_j = z_pow_j * model.generator();
    return Matrix(cj * z_pow_j);
  };
  return integrateRemainder<Matrix>(path, t, width, f_cen, f_out, zero, scale);
}

Vector remainderApplyOnPath(const GeneratorModel& model, const ResolvedPath& path,
                            double t, const Vector& mu) {
  const Eigen::Index n = model.dimension();
  const PanelWidth width(model, path, t);
  Vector zn_mu = mu;
  for (int k = 0; k < path.n_reg; ++k) zn_mu = model.generator() * zn_mu;
  auto f_cen = [&](double b) -> Vector {
    const Complex z = pathPoint(path, b);
    return Vector(std::exp(z * t) * pathDerivative(path, b) * model.applyResolvent(z, mu));
  };
  auto f_out = [&](double b) -> Vector {
    const Complex z = pathPoint(path, b);
    const Complex w = std::exp(z * t) * std::pow(z, -path.n_reg) * pathDerivative(path, b);
    return Vector(w * model.applyResolvent(z, zn_mu));
  };
  Vector zero = Vector::Zero(n);
  Vector zj_mu = mu;
  auto scale = [&](int j, Complex cj) -> Vector {
    if (j > 0) zj_mu = model.generator() * zj_mu;
    return Vector(cj * zj_mu);
  };
  return integrateRemainder<Vector>(path, t, width, f_cen, f_out, zero, scale);
}

}  // namespace

// ---------------------------------------------------------------------------
// Pole location / projectors

PoleReport locatePoles(const GeneratorModel& model, double lambda, double beta) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be > 0");
  for (const Complex& e : model.eigenvalues()) {
    if (std::abs(e.real() + lambda) < 1e-9) {
      throw DomainError("an eigenvalue sits on the strip boundary Re = -lambda");
    }
  }
  PoleReport report;
  for (const Cluster& c : clusterEigenvalues(model)) {
    if (c.rep.real() > -lambda) {
      report.poles.push_back(c.rep);
      report.multiplicities.push_back(c.multiplicity);
      if (std::abs(c.rep.imag()) > beta) report.beta_violations.push_back(c.rep);
    }
  }
  return report;
}

Matrix rieszProjector(const GeneratorModel& model, Complex pole, double radius, int nodes) {
  if (!(radius > 0.0)) throw DomainError("projector circle radius must be > 0");
  if (nodes < 8) throw DomainError("projector circle needs at least 8 nodes");
  const double tol = clusterTolerance(model);
  for (const Complex& e : model.eigenvalues()) {
    const double d = std::abs(e - pole);
    if (d <= tol) continue;  // part of this pole's cluster
    if (d <= radius + kPoleMargin) {
      std::ostringstream msg;
      msg << "projector circle of radius " << radius << " around (" << pole.real() << ", "
          << pole.imag() << ") also encloses (" << e.real() << ", " << e.imag() << ")";
      throw ContourOverlapError(msg.str());
    }
  }
  const Eigen::Index n = model.dimension();
  Matrix acc = Matrix::Zero(n, n);
  for (int k = 0; k < nodes; ++k) {
    const double theta = 2.0 * kPi * k / nodes;
    const Complex offset = std::polar(radius, theta);
    acc += offset * model.resolventMatrix(pole + offset);
  }
  return acc / double(nodes);
}

PoleOrderResult poleOrder(const GeneratorModel& model, Complex pole, const Matrix& projector) {
  PoleOrderResult result;
  Matrix shifted = model.generator();
  shifted.diagonal().array() -= pole;
  result.nilpotent = shifted * projector;

  Matrix power = result.nilpotent;
  int order = 1;
  while (numerics::spectralNorm(power) > 1e-10 && order <= model.dimension()) {
    power = power * result.nilpotent;
    ++order;
  }
  result.order = order;
  return result;
}

Matrix bromwichReconstruct(const GeneratorModel& model, double t, const ContourSpec& contour) {
  if (contour.kind != ContourSpec::Kind::BromwichLine) {
    throw DomainError("bromwich reconstruction requires a bromwich-line contour");
  }
  const double a = contour.abscissa;
  if (!(a > 0.0)) throw DomainError("bromwich line requires a > 0");
  if (!(t > 0.0)) {
    throw DomainError("truncated inversion requires t > 0 (t = 0 converges too slowly)");
  }
  const double b_cut = contour.b_cut > 0.0 ? contour.b_cut : std::max(1e3, 10.0 / t);
  double step = contour.step;
  if (contour.node_count > 1) step = 2.0 * b_cut / (contour.node_count - 1);
  if (!(step > 0.0)) throw DomainError("bromwich step must be > 0");

  const Eigen::Index n = model.dimension();
  const int intervals = static_cast<int>(std::ceil(2.0 * b_cut / step));
  const Matrix zero = Matrix::Zero(n, n);
  Matrix acc = numerics::simpsonUniform<Matrix>(
      [&](double b) {
        const Complex z(a, b);
        return Matrix(std::exp(z * t) * model.resolventMatrix(z));
      },
      -b_cut, b_cut, intervals, zero);
  return acc / (2.0 * kPi);
}

// ---------------------------------------------------------------------------
// SpectralDecomposition

Matrix SpectralDecomposition::projectorSum() const {
  const Eigen::Index n = model_.dimension();
  Matrix sum = Matrix::Zero(n, n);
  for (const Matrix& p : projectors_) sum += p;
  return sum;
}

Matrix SpectralDecomposition::polynomialPart(double t) const {
  const Eigen::Index n = model_.dimension();
  Matrix acc = Matrix::Zero(n, n);
  for (size_t j = 0; j < poles_.size(); ++j) {
    Matrix block = projectors_[j];
    if (orders_[j] > 1) {
      Matrix npow = Matrix::Identity(n, n);
      double fact = 1.0;
      for (int k = 1; k < orders_[j]; ++k) {
        npow = npow * nilpotents_[j];
        fact *= k;
        block += (std::pow(t, k) / fact) * npow;
      }
    }
    acc += std::exp(t * poles_[j]) * block;
  }
  return acc;
}

Matrix SpectralDecomposition::remainderSubtraction(double t) const {
  return model_.evolve(t) - polynomialPart(t);
}

Vector SpectralDecomposition::remainderApply(double t, const Vector& mu) const {
  if (projectors_.empty()) return model_.applyEvolve(t, mu);
  const Vector complement = mu - projectorSum() * mu;
  return model_.applyEvolve(t, complement);
}

Matrix SpectralDecomposition::remainderContour(double t) const {
  const ResolvedPath path = resolvePath(model_, contour_, contour_.abscissa);
  return remainderMatrixOnPath(model_, path, t);
}

Vector SpectralDecomposition::remainderContourApply(double t, const Vector& mu) const {
  const ResolvedPath path = resolvePath(model_, contour_, contour_.abscissa);
  return remainderApplyOnPath(model_, path, t, mu);
}

SpectralDecomposition decompose(const GeneratorModel& model, const AssumptionParams& params,
                                const ContourSpec& contour) {
  params.validate();
  const PoleReport strip = locatePoles(model, params.lambda, params.beta);

  ContourSpec resolved = contour;
  if (contour.kind == ContourSpec::Kind::ShiftedLine && resolved.abscissa <= 0.0) {
    resolved.abscissa = params.ell;
  }
  if (contour.kind == ContourSpec::Kind::CurvedRapid) {
    resolved.beta = params.beta;
    resolved.c12 = params.c12 > 0 ? params.c12 : contour.c12;
    if (resolved.epsilon <= 0.0 && params.epsilon > 0.0) resolved.epsilon = params.epsilon;
  }
  const ResolvedPath path = resolvePath(model, resolved, params.ell);
  resolved.epsilon = path.curved ? path.shift : resolved.epsilon;
  resolved.b_cut = path.b_cut;

  SpectralDecomposition dec(model, resolved);

  const std::vector<Cluster> clusters = clusterEigenvalues(model);
  for (const Cluster& c : clusters) {
    if (!rightOfPath(path, c.rep)) continue;
    double nearest_other = std::numeric_limits<double>::infinity();
    for (const Cluster& o : clusters) {
      if (&o == &c) continue;
      nearest_other = std::min(nearest_other, std::abs(o.rep - c.rep));
    }
    double radius = std::isfinite(nearest_other) ? 0.45 * nearest_other : 0.5;
    radius = std::min(radius, 1.0);
    const Matrix projector = rieszProjector(model, c.rep, radius, 256);
    PoleOrderResult po = poleOrder(model, c.rep, projector);

    dec.poles_.push_back(c.rep);
    dec.projectors_.push_back(projector);
    dec.orders_.push_back(po.order);
    dec.nilpotents_.push_back(po.order == 1
                                  ? Matrix::Zero(model.dimension(), model.dimension())
                                  : po.nilpotent);
    dec.multiplicities_.push_back(c.multiplicity);
  }

  for (size_t i = 0; i < strip.poles.size(); ++i) {
    const Complex& z = strip.poles[i];
    if (!rightOfPath(path, z)) {
      std::ostringstream msg;
      msg << "strip pole (" << z.real() << ", " << z.imag()
          << ") lies left of the inversion contour and stays inside P_t";
      dec.warnings_.push_back(msg.str());
    }
  }
  for (const Complex& z : strip.beta_violations) {
    std::ostringstream msg;
    msg << "strip pole (" << z.real() << ", " << z.imag() << ") violates |Im| <= beta = "
        << params.beta << "; the model fails the exponential-case holomorphy region";
    dec.warnings_.push_back(msg.str());
  }
  return dec;
}

Matrix curvedRemainder(const GeneratorModel& model, double t, const ContourSpec& contour) {
  if (contour.kind != ContourSpec::Kind::CurvedRapid) {
    throw DomainError("curvedRemainder requires a curved-rapid contour");
  }
  if (!(t > 0.0)) throw DomainError("curved remainder requires t > 0");
  const ResolvedPath path = resolvePath(model, contour, contour.abscissa);
  return remainderMatrixOnPath(model, path, t);
}

}  // namespace semispec
