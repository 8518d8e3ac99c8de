#include <doctest.h>

#include <cmath>

#include "semispec/errors.hpp"
#include "semispec/generator_model.hpp"
#include "semispec/resolvent.hpp"

using namespace semispec;

namespace {

GeneratorModel scalarModel(double re, double im = 0.0) {
  Matrix m(1, 1);
  m(0, 0) = Complex(re, im);
  return GeneratorModel::fromMatrix(m);
}

}  // namespace

TEST_CASE("direct resolvent") {
  auto m = scalarModel(-1.0);
  auto r = resolventDirect(m, Complex(2, 0));
  CHECK(std::abs(r.matrix(0, 0) - Complex(1.0 / 3.0, 0)) < 1e-15);
  CHECK(*r.residual < 1e-12);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = Complex(-0.1, 0);
  d(1, 1) = Complex(-2.0, 0);
  auto md = GeneratorModel::fromMatrix(d);
  auto rd = resolventDirect(md, Complex(1, 0));
  CHECK(std::abs(rd.matrix(0, 0) - Complex(1.0 / 1.1, 0)) < 1e-14);
  CHECK(std::abs(rd.matrix(1, 1) - Complex(1.0 / 3.0, 0)) < 1e-14);
  CHECK(std::abs(rd.matrix(0, 1)) == 0.0);

  try {
    resolventDirect(m, Complex(-1, 0));
    FAIL("expected PoleError");
  } catch (const PoleError& e) {
    CHECK(std::abs(e.nearest_eigenvalue - Complex(-1, 0)) < 1e-12);
  }
}

TEST_CASE("laplace quadrature vs direct inverse") {
  auto m = scalarModel(-1.0);
  auto lap = resolventLaplace(m, Complex(2, 0), 20.0, 0.01);
  CHECK(std::abs(lap.matrix(0, 0) - Complex(1.0 / 3.0, 0)) < 1e-8);
  CHECK(*lap.residual < 1e-8);

  CHECK_THROWS_AS(resolventLaplace(m, Complex(-0.5, 0), 20.0, 0.01), DomainError);
  CHECK_THROWS_AS(resolventLaplace(m, Complex(0.0, 1.0), 20.0, 0.01), DomainError);

  // Re(z) t_max = 50: the dropped tail is negligible and documented.
  auto mr = GeneratorModel::randomStable(5, -0.5, 9);
  auto lap2 = resolventLaplace(mr, Complex(5, 1), 10.0, 0.005);
  CHECK(lap2.truncation_tail_bound < 1e-18);
  CHECK(*lap2.residual < lap2.truncation_tail_bound + 1e-8);
}

TEST_CASE("resolvent equation residual") {
  auto m = scalarModel(-1.0);
  // both sides equal -1/12 at (z, zeta) = (2, 3)
  CHECK(resolventIdentityResidual(m, Complex(2, 0), Complex(3, 0)) < 1e-15);
  CHECK(resolventIdentityResidual(m, Complex(2, 1), Complex(2, 1)) < 1e-16);

  auto big = GeneratorModel::randomStable(20, -0.3, 31);
  CHECK(resolventIdentityResidual(big, Complex(1.3, 0.7), Complex(0.4, -2.0)) < 1e-10);
}

TEST_CASE("meromorphic extension through the resolvent equation") {
  auto m = scalarModel(-1.0);
  // z = 1, eta = -1 targets z + 1/eta = 0 and must reproduce R(0) = 1.
  auto ext = presExtension(m, Complex(1, 0), Complex(-1, 0));
  CHECK(std::abs(ext.z) < 1e-15);
  CHECK(std::abs(ext.matrix(0, 0) - Complex(1, 0)) < 1e-12);
  CHECK(*ext.residual < 1e-12);

  // target at the eigenvalue: (eta Id + R) becomes singular
  CHECK_THROWS_AS(presExtension(m, Complex(1, 0), Complex(-0.5, 0)), ExtensionPoleError);

  auto mr = GeneratorModel::randomStable(8, -1.5, 13);
  auto e2 = presExtension(mr, Complex(1, 3), Complex(0, 2));
  CHECK(*e2.residual < 1e-8);

  // left-half-plane target, still right of the spectrum
  auto e3 = presExtension(mr, Complex(0.8, 0), Complex(-1.0 / 1.0, 0));
  CHECK(e3.z.real() == doctest::Approx(-0.2));
  CHECK(*e3.residual < 1e-8);
}

TEST_CASE("neumann extension") {
  auto m = scalarModel(-2.0);
  auto ext = neumannExtension(m, 1.0, 1.0, 10.0, 1e-12);
  CHECK(std::abs(ext.matrix(0, 0) - Complex(1, 0) / Complex(1, 10)) < 1e-10);
  CHECK(*ext.residual < 1e-10);
  CHECK(ext.truncation_index > 1);

  // guard |b| >= beta
  CHECK_THROWS_AS(neumannExtension(scalarModel(-0.5), 1.0, 0.2, 0.1, 1e-10, 1.5),
                  PreconditionError);
  auto warned = neumannExtension(scalarModel(-0.5), 1.0, 0.2, 1.0, 1e-10, 1.5, true);
  CHECK(warned.small_b_warning);

  // (alpha+ell) rho(R(alpha+ib)) = 3 / |1.5 + 2i| = 1.2 >= 1
  CHECK_THROWS_AS(neumannExtension(scalarModel(-0.5), 1.0, 2.0, 2.0, 1e-10),
                  SeriesDivergenceError);

  auto mr = GeneratorModel::randomStable(10, -1.5, 57);
  auto e2 = neumannExtension(mr, 1.0, 1.0, 20.0, 1e-12);
  CHECK(*e2.residual < 1e-8);

  // truncation bound honesty: remaining tail within 10x of tail_tol
  auto coarse = neumannExtension(mr, 1.0, 1.0, 20.0, 1e-10);
  const Matrix direct = resolventDirect(mr, Complex(-1.0, 20.0)).matrix;
  const double measured_tail =
      mr.norms().operatorNorm(coarse.matrix - direct, NormTag::B, NormTag::B);
  CHECK(measured_tail <= 10.0 * 1e-10);
}

TEST_CASE("generator identities") {
  auto m = scalarModel(-1.0);
  CHECK(generatorIdentityResidual(m, Complex(2, 0), 1) < 1e-15);

  auto mr = GeneratorModel::randomStable(7, -0.5, 3);
  CHECK(generatorIdentityResidual(mr, Complex(1.5, 2.0), 1) < 1e-10);
  CHECK(generatorIdentityResidual(mr, Complex(1.5, 2.0), 2) < 1e-10);

  Matrix nil(2, 2);
  nil << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
  auto mn = GeneratorModel::fromMatrix(nil);
  CHECK(generatorIdentityResidual(mn, Complex(1, 0), 3) < 1e-14);
  // Z^3 = 0, so R(1) = Id + Z exactly
  Matrix expected(2, 2);
  expected << Complex(1, 0), Complex(1, 0), Complex(0, 0), Complex(1, 0);
  CHECK((resolventDirect(mn, Complex(1, 0)).matrix - expected).norm() < 1e-14);

  CHECK_THROWS_AS(generatorIdentityResidual(mr, Complex(0, 0), 1), DomainError);
}

TEST_CASE("graded norm") {
  auto m = scalarModel(-1.0);
  Vector mu(1);
  mu(0) = Complex(1, 0);
  // ||mu||_B = sqrt(2); powers of Z flip sign only, so the q=2 norm is 3 sqrt(2)
  CHECK(gradedNorm(m, mu, 0).value == doctest::Approx(std::sqrt(2.0)));
  CHECK(gradedNorm(m, mu, 2).value == doctest::Approx(3.0 * std::sqrt(2.0)));

  Vector zero = Vector::Zero(1);
  CHECK(gradedNorm(m, zero, 0).value == 0.0);
  CHECK(gradedNorm(m, zero, 5).value == 0.0);

  auto mr = GeneratorModel::randomStable(6, -0.5, 8);
  Vector v(6);
  for (int i = 0; i < 6; ++i) v(i) = Complex(std::sin(i + 1.0), std::cos(2.0 * i));
  double prev = 0.0;
  for (int q = 0; q <= 5; ++q) {
    const double val = gradedNorm(mr, v, q).value;
    CHECK(val >= prev);
    prev = val;
  }
  CHECK_THROWS_AS(gradedNorm(mr, v, -1), DomainError);
}
