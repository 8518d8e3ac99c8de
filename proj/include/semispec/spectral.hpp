#pragma once

#include <string>
#include <vector>

#include "semispec/generator_model.hpp"
#include "semispec/params.hpp"
#include "semispec/types.hpp"

namespace semispec {

// Inversion contours. The Bromwich line sits at Re = a > 0, the shifted
// line at Re = -ell, and the curved path of the rapid case follows
// { ib - min(epsilon, |b|^{-c12}) }.
struct ContourSpec {
  enum class Kind { BromwichLine, ShiftedLine, CurvedRapid };
  Kind kind = Kind::ShiftedLine;

  double abscissa = 0.0;  // a (Bromwich) or ell (shifted line); 0 -> from params
  double b_cut = 0.0;     // 0 -> automatic
  double step = 0.01;     // Bromwich Simpson step in b
  int node_count = 0;     // Bromwich: overrides step when > 0

  double epsilon = 0.0;  // curved: 0 -> automatic
  double c12 = 1.0;
  double beta = 1.0;

  // Order n of the z^{-n} R(z) Z^n regularization used on the outer
  // segments of the remainder integrals (Lemma-ZZ form of the integrand).
  int regularization_order = 6;
};

struct PoleReport {
  std::vector<Complex> poles;          // distinct eigenvalues with Re > -lambda
  std::vector<int> multiplicities;
  std::vector<Complex> beta_violations;  // those with |Im| > beta
};

// Eigenvalues of Z in the strip {Re > -lambda}. Poles with |Im| > beta are
// listed as violations of the holomorphy region, not errors.
PoleReport locatePoles(const GeneratorModel& model, double lambda, double beta);

// (1/2*pi*i) integral of R(z) over a circle around `pole`, trapezoidal rule.
// The circle must separate `pole` from the rest of the spectrum by 1e-6.
Matrix rieszProjector(const GeneratorModel& model, Complex pole, double radius, int nodes);

struct PoleOrderResult {
  int order = 1;
  Matrix nilpotent;  // (Z - z_j Id) Pi_j
};

PoleOrderResult poleOrder(const GeneratorModel& model, Complex pole, const Matrix& projector);

// Truncated inverse Laplace transform over the line Re = a:
//   T_t ~ (1/2pi) int_{-b_cut}^{b_cut} e^{(a+ib)t} R(a+ib) db,
// composite Simpson; converges O(1/b_cut). Requires a > 0, t > 0.
Matrix bromwichReconstruct(const GeneratorModel& model, double t, const ContourSpec& contour);

class SpectralDecomposition {
public:
  const GeneratorModel& model() const { return model_; }
  const ContourSpec& contour() const { return contour_; }
  const std::vector<Complex>& poles() const { return poles_; }
  const std::vector<Matrix>& projectors() const { return projectors_; }
  const std::vector<int>& poleOrders() const { return orders_; }
  const std::vector<Matrix>& nilpotentParts() const { return nilpotents_; }
  const std::vector<int>& multiplicities() const { return multiplicities_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  Matrix projectorSum() const;
  // sum_j e^{t z_j} (Pi_j + t N_j + ... + t^{m-1} N_j^{m-1}/(m-1)!)
  Matrix polynomialPart(double t) const;
  // P_t = T_t - polynomialPart(t)
  Matrix remainderSubtraction(double t) const;
  // P_t mu evaluated as T_t (Id - sum_j Pi_j) mu, which is the same
  // operator but avoids the large-t cancellation of the subtraction form.
  Vector remainderApply(double t, const Vector& mu) const;
  // P_t through the contour integral (shifted line or curved path).
  Matrix remainderContour(double t) const;
  Vector remainderContourApply(double t, const Vector& mu) const;

private:
  friend SpectralDecomposition decompose(const GeneratorModel&, const AssumptionParams&,
                                         const ContourSpec&);
  SpectralDecomposition(GeneratorModel model, ContourSpec contour)
      : model_(std::move(model)), contour_(contour) {}

  GeneratorModel model_;
  ContourSpec contour_;
  std::vector<Complex> poles_;
  std::vector<Matrix> projectors_;
  std::vector<int> orders_;
  std::vector<Matrix> nilpotents_;
  std::vector<int> multiplicities_;
  std::vector<std::string> warnings_;
};

// Locate poles, build projectors and nilpotent parts, and bind the
// remainder evaluators. The subtracted pole set consists of the poles
// lying strictly to the right of the chosen contour.
SpectralDecomposition decompose(const GeneratorModel& model, const AssumptionParams& params,
                                const ContourSpec& contour);

// Raw integral (1/2*pi*i) int e^{zt} R(z) dz over the curved contour,
// evaluated in the regularized split form. Equals
// T_t - sum over poles right of the curve of their residues.
Matrix curvedRemainder(const GeneratorModel& model, double t, const ContourSpec& contour);

}  // namespace semispec
