#include <doctest.h>

#include <cmath>

#include "semispec/errors.hpp"
#include "semispec/generator_model.hpp"
#include "semispec/numerics.hpp"
#include "semispec/spectral.hpp"

using namespace semispec;

namespace {

GeneratorModel diagModel() {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = Complex(-0.1, 0);
  d(1, 1) = Complex(-2.0, 0);
  return GeneratorModel::fromMatrix(d);
}

GeneratorModel ctmcModel() {
  Matrix q(2, 2);
  q << Complex(-1, 0), Complex(1, 0), Complex(1, 0), Complex(-1, 0);
  return GeneratorModel::ctmc(q);
}

AssumptionParams defaultParams() {
  AssumptionParams p;
  p.lambda = 1.0;
  p.alpha = 1.0;
  p.beta = 1.5;
  p.gamma = 0.5;
  p.ell = 0.5;
  return p;
}

}  // namespace

TEST_CASE("locate poles in the strip") {
  auto report = locatePoles(diagModel(), 1.0, 1.0);
  REQUIRE(report.poles.size() == 1);
  CHECK(std::abs(report.poles[0] - Complex(-0.1, 0)) < 1e-12);
  CHECK(report.beta_violations.empty());

  auto ctmc = locatePoles(ctmcModel(), 1.5, 1.0);
  REQUIRE(ctmc.poles.size() == 1);
  CHECK(std::abs(ctmc.poles[0]) < 1e-10);
  CHECK(ctmc.multiplicities[0] == 1);

  Matrix osc(1, 1);
  osc(0, 0) = Complex(-0.5, 5.0);
  auto violating = locatePoles(GeneratorModel::fromMatrix(osc), 1.0, 1.0);
  REQUIRE(violating.poles.size() == 1);
  REQUIRE(violating.beta_violations.size() == 1);
  CHECK(std::abs(violating.beta_violations[0] - Complex(-0.5, 5.0)) < 1e-12);

  // eigenvalue exactly on the strip boundary
  CHECK_THROWS_AS(locatePoles(diagModel(), 2.0, 1.0), DomainError);
}

TEST_CASE("riesz projector quadrature") {
  auto md = diagModel();
  const Matrix pi = rieszProjector(md, Complex(-0.1, 0), 0.5, 64);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = Complex(1, 0);
  CHECK((pi - expected).norm() < 1e-10);

  const Matrix stationary = rieszProjector(ctmcModel(), Complex(0, 0), 0.5, 64);
  CHECK((stationary - Matrix::Constant(2, 2, Complex(0.5, 0))).norm() < 1e-10);

  CHECK_THROWS_AS(rieszProjector(md, Complex(-0.1, 0), 2.5, 64), ContourOverlapError);
}

TEST_CASE("projector is contour independent") {
  auto m = GeneratorModel::randomStable(6, -0.5, 19);
  // pick the rightmost eigenvalue; admissible radii differ by > 2x
  Complex pole = m.eigenvalues()[0];
  for (const Complex& e : m.eigenvalues()) {
    if (e.real() > pole.real()) pole = e;
  }
  double nearest = 1e9;
  for (const Complex& e : m.eigenvalues()) {
    if (std::abs(e - pole) > 1e-8) nearest = std::min(nearest, std::abs(e - pole));
  }
  const double r1 = 0.2 * nearest;
  const double r2 = 0.6 * nearest;
  const Matrix p1 = rieszProjector(m, pole, r1, 128);
  const Matrix p2 = rieszProjector(m, pole, r2, 128);
  CHECK((p1 - p2).norm() < 1e-9);
}

TEST_CASE("trapezoid node-doubling convergence") {
  auto md = diagModel();
  Matrix oracle = Matrix::Zero(2, 2);
  oracle(0, 0) = Complex(1, 0);
  // radius/distance ratio 0.6: visible geometric error decay
  const double radius = 0.6 * 1.9;
  double prev = 1e9;
  for (int nodes : {8, 16, 32}) {
    const double defect = (rieszProjector(md, Complex(-0.1, 0), radius, nodes) - oracle).norm();
    if (prev < 1e9 && prev > 1e-12) {
      CHECK(defect * 10.0 <= prev);
    }
    prev = defect;
  }
  CHECK((rieszProjector(md, Complex(-0.1, 0), radius, 128) - oracle).norm() < 1e-12);
}

TEST_CASE("pole order and nilpotent part") {
  auto md = diagModel();
  const Matrix pi = rieszProjector(md, Complex(-0.1, 0), 0.5, 64);
  auto po = poleOrder(md, Complex(-0.1, 0), pi);
  CHECK(po.order == 1);
  CHECK(numerics::spectralNorm(po.nilpotent) < 1e-10);

  auto mj = GeneratorModel::jordanBlock(Complex(-0.1, 0), 2);
  const Matrix pij = rieszProjector(mj, Complex(-0.1, 0), 0.5, 128);
  CHECK(std::abs(pij.trace() - Complex(2, 0)) < 1e-6);
  auto poj = poleOrder(mj, Complex(-0.1, 0), pij);
  CHECK(poj.order == 2);
  Matrix n_expected(2, 2);
  n_expected << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
  CHECK((poj.nilpotent - n_expected).norm() < 1e-8);
}

TEST_CASE("bromwich reconstruction") {
  Matrix z1(1, 1);
  z1(0, 0) = Complex(-1, 0);
  auto m = GeneratorModel::fromMatrix(z1);

  ContourSpec contour;
  contour.kind = ContourSpec::Kind::BromwichLine;
  contour.abscissa = 1.0;
  contour.step = 0.01;

  contour.b_cut = 500.0;
  const double err500 = std::abs(bromwichReconstruct(m, 1.0, contour)(0, 0) -
                                 Complex(std::exp(-1.0), 0));
  CHECK(err500 < 2e-3);
  contour.b_cut = 1000.0;
  const double err1000 = std::abs(bromwichReconstruct(m, 1.0, contour)(0, 0) -
                                  Complex(std::exp(-1.0), 0));
  CHECK(err1000 < err500);

  contour.abscissa = 0.0;
  CHECK_THROWS_AS(bromwichReconstruct(m, 1.0, contour), DomainError);
  contour.abscissa = 1.0;
  CHECK_THROWS_AS(bromwichReconstruct(m, 0.0, contour), DomainError);

  ContourSpec wrong;
  wrong.kind = ContourSpec::Kind::ShiftedLine;
  CHECK_THROWS_AS(bromwichReconstruct(m, 1.0, wrong), DomainError);
}

TEST_CASE("decompose: diagonal model") {
  auto dec = decompose(diagModel(), defaultParams(), ContourSpec{});
  REQUIRE(dec.poles().size() == 1);
  CHECK(std::abs(dec.poles()[0] - Complex(-0.1, 0)) < 1e-12);
  Matrix expected_pi = Matrix::Zero(2, 2);
  expected_pi(0, 0) = Complex(1, 0);
  CHECK((dec.projectors()[0] - expected_pi).norm() < 1e-10);

  for (double t : {1.0, 3.0}) {
    Matrix pt = dec.remainderSubtraction(t);
    CHECK(std::abs(pt(0, 0)) < 1e-10);
    CHECK(std::abs(pt(1, 1) - Complex(std::exp(-2 * t), 0)) < 1e-10);
  }
}

TEST_CASE("decompose: ctmc stationary part") {
  AssumptionParams p = defaultParams();
  p.lambda = 1.5;
  auto dec = decompose(ctmcModel(), p, ContourSpec{});
  REQUIRE(dec.poles().size() == 1);
  CHECK(std::abs(dec.poles()[0]) < 1e-10);
  CHECK((dec.projectorSum() - Matrix::Constant(2, 2, Complex(0.5, 0))).norm() < 1e-10);

  // fluctuation decays at the spectral gap rate
  Vector mu(2);
  mu << Complex(1, 0), Complex(-1, 0);
  mu /= std::sqrt(2.0);
  for (double t : {0.5, 1.0, 2.0}) {
    const double norm_a = dec.remainderApply(t, mu).norm();
    CHECK(norm_a == doctest::Approx(std::exp(-2.0 * t)).epsilon(1e-9));
  }
}

TEST_CASE("decompose: empty pole set") {
  Matrix z = -Matrix::Identity(3, 3);
  auto m = GeneratorModel::fromMatrix(z);
  AssumptionParams p = defaultParams();
  p.lambda = 0.5;
  p.ell = 0.25;
  auto dec = decompose(m, p, ContourSpec{});
  CHECK(dec.poles().empty());
  const Matrix pt = dec.remainderSubtraction(1.0);
  CHECK((pt - m.evolve(1.0)).norm() < 1e-14);
}

TEST_CASE("reconstruction: remainder plus projector terms") {
  AssumptionParams p = defaultParams();

  // includes a defective model: order-2 pole with polynomial factor
  auto mj = GeneratorModel::jordanBlock(Complex(-0.1, 0), 2);
  auto dec = decompose(mj, p, ContourSpec{});
  REQUIRE(dec.poles().size() == 1);
  CHECK(dec.poleOrders()[0] == 2);

  const Matrix complement = Matrix::Identity(2, 2) - dec.projectorSum();
  for (double t : {0.5, 1.0, 2.0, 5.0}) {
    const Matrix rebuilt = mj.evolve(t) * complement + dec.polynomialPart(t);
    CHECK(opNorm(mj, mj.evolve(t) - rebuilt, NormTag::B, NormTag::B) < 1e-8);
  }
}

TEST_CASE("path agreement: shifted line vs subtraction") {
  AssumptionParams p = defaultParams();
  std::vector<GeneratorModel> models = {diagModel(), ctmcModel(),
                                        GeneratorModel::randomStable(6, -0.6, 23)};
  for (size_t i = 0; i < models.size(); ++i) {
    AssumptionParams q = p;
    if (i == 1) q.lambda = 1.5;
    auto dec = decompose(models[i], q, ContourSpec{});
    for (double t : {1.0, 5.0, 10.0}) {
      const Matrix sub = dec.remainderSubtraction(t);
      const Matrix con = dec.remainderContour(t);
      CHECK(opNorm(models[i], sub - con, NormTag::B, NormTag::B) < 1e-6);
    }
  }
}

TEST_CASE("contour through pole is rejected") {
  // line Re = -ell exactly on the eigenvalue -0.1
  AssumptionParams p = defaultParams();
  p.ell = 0.1;
  ContourSpec line;
  line.kind = ContourSpec::Kind::ShiftedLine;
  line.abscissa = 0.1;
  CHECK_THROWS_AS(decompose(diagModel(), p, line), ContourThroughPoleError);
}

TEST_CASE("curved remainder: diagonal two-state") {
  auto md = diagModel();
  ContourSpec curved;
  curved.kind = ContourSpec::Kind::CurvedRapid;
  curved.epsilon = 0.05;
  curved.c12 = 1.0;
  curved.beta = 1.0;
  // no poles right of the curve: the integral reproduces T_t; subtracting
  // the -0.1 pole term leaves diag(0, e^{-2t})
  for (double t : {1.0, 10.0}) {
    const Matrix raw = curvedRemainder(md, t, curved);
    CHECK((raw - md.evolve(t)).norm() < 1e-6);
    Matrix pole_term = Matrix::Zero(2, 2);
    pole_term(0, 0) = Complex(std::exp(-0.1 * t), 0);
    Matrix pt = raw - pole_term;
    CHECK(std::abs(pt(1, 1) - Complex(std::exp(-2 * t), 0)) < 1e-6);
    CHECK(std::abs(pt(0, 0)) < 1e-6);
  }
}

TEST_CASE("curved remainder: diagonal-rapid model") {
  auto m = GeneratorModel::diagonalRapid(0.5, 50);
  AssumptionParams p;
  p.lambda = 0.21;
  p.alpha = 1.0;
  p.beta = 1.0;
  p.gamma = 0.4;
  p.ell = 0.1;
  p.c12 = 1.0;
  ContourSpec curved;
  curved.kind = ContourSpec::Kind::CurvedRapid;
  curved.epsilon = 0.05;
  curved.c12 = 1.0;
  curved.beta = 1.0;
  auto dec = decompose(m, p, curved);
  CHECK(dec.poles().empty());  // every eigenvalue lies left of the curve
  for (double t : {1.0, 10.0}) {
    const Matrix sub = dec.remainderSubtraction(t);
    const Matrix con = dec.remainderContour(t);
    CHECK(opNorm(m, sub - con, NormTag::B, NormTag::B) < 1e-6);
  }

  // the polynomial regime decays, but slower than the spectral-gap rate
  const double n50 = opNorm(m, dec.remainderSubtraction(50.0), NormTag::B, NormTag::B);
  const double n25 = opNorm(m, dec.remainderSubtraction(25.0), NormTag::B, NormTag::B);
  CHECK(n50 < n25);
  const double rate = std::log(n50 / n25) / 25.0;
  CHECK(rate > -0.25);  // far slower than the fastest mode e^{-t}
  CHECK(rate < -0.05);
}
