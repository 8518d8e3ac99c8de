#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "semispec/errors.hpp"
#include "semispec/generator_model.hpp"
#include "semispec/verification.hpp"

using namespace semispec;

namespace {

Matrix scalarMatrix(Complex v) {
  Matrix m(1, 1);
  m(0, 0) = v;
  return m;
}

Matrix randomMatrix(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

Vector randomVector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

}  // namespace

TEST_CASE("explicit scalar model") {
  auto m = GeneratorModel::fromMatrix(scalarMatrix({-1.0, 0.0}));
  CHECK(m.dimension() == 1);
  CHECK(m.eigenvalues().size() == 1);
  CHECK(std::abs(m.eigenvalues()[0] - Complex(-1.0, 0.0)) < 1e-14);
  CHECK(m.spectralAbscissa() == doctest::Approx(-1.0));
}

TEST_CASE("ctmc validation and spectrum") {
  Matrix q(2, 2);
  q << Complex(-1, 0), Complex(1, 0), Complex(1, 0), Complex(-1, 0);
  auto m = GeneratorModel::ctmc(q);
  auto eigs = m.eigenvalues();
  std::sort(eigs.begin(), eigs.end(),
            [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(std::abs(eigs[0] - Complex(-2, 0)) < 1e-12);
  CHECK(std::abs(eigs[1]) < 1e-12);

  Matrix bad_sum(2, 2);
  bad_sum << Complex(-1, 0), Complex(0.5, 0), Complex(1, 0), Complex(-1, 0);
  CHECK_THROWS_AS(GeneratorModel::ctmc(bad_sum), DomainError);

  Matrix bad_sign(2, 2);
  bad_sign << Complex(1, 0), Complex(-1, 0), Complex(1, 0), Complex(-1, 0);
  CHECK_THROWS_AS(GeneratorModel::ctmc(bad_sign), DomainError);

  Matrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(GeneratorModel::ctmc(rect), DomainError);
}

TEST_CASE("diagonal-rapid entries") {
  auto m = GeneratorModel::diagonalRapid(0.5, 3);
  CHECK(m.dimension() == 6);
  CHECK(m.diagonal());
  // ascending k = -3,-2,-1,1,2,3
  const double r3 = std::pow(3.0, -0.5);
  const double r2 = std::pow(2.0, -0.5);
  CHECK(std::abs(m.generator()(0, 0) - Complex(-r3, -3)) < 1e-15);
  CHECK(std::abs(m.generator()(1, 1) - Complex(-r2, -2)) < 1e-15);
  CHECK(std::abs(m.generator()(2, 2) - Complex(-1, -1)) < 1e-15);
  CHECK(std::abs(m.generator()(3, 3) - Complex(-1, 1)) < 1e-15);
  CHECK(std::abs(m.generator()(5, 5) - Complex(-r3, 3)) < 1e-15);

  CHECK_THROWS_AS(GeneratorModel::diagonalRapid(0.0, 3), DomainError);
  CHECK_THROWS_AS(GeneratorModel::diagonalRapid(1.0, 3), DomainError);
  CHECK_THROWS_AS(GeneratorModel::diagonalRapid(0.5, 0), DomainError);
}

TEST_CASE("evolve basics") {
  auto m = GeneratorModel::fromMatrix(scalarMatrix({-1.0, 0.0}));
  CHECK(std::abs(m.evolve(1.0)(0, 0) - Complex(0.36787944117144233, 0)) < 1e-15);

  // T_0 is the exact identity
  auto r = GeneratorModel::randomStable(5, -0.5, 3);
  CHECK(r.evolve(0.0) == Matrix::Identity(5, 5));

  CHECK_THROWS_AS(m.evolve(-0.1), DomainError);

  Matrix nilpotent(2, 2);
  nilpotent << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
  auto jm = GeneratorModel::fromMatrix(nilpotent);
  CHECK(jm.evolveMethod() == EvolveMethod::ScalingSquaring);
  Matrix expected(2, 2);
  expected << Complex(1, 0), Complex(2, 0), Complex(0, 0), Complex(1, 0);
  CHECK((jm.evolve(2.0) - expected).norm() < 1e-12);
}

TEST_CASE("semigroup law on a grid") {
  auto m = GeneratorModel::randomStable(6, -0.3, 11);
  for (double s : {0.0, 0.7, 2.0, 5.0}) {
    for (double t : {0.0, 1.3, 4.0}) {
      const Matrix lhs = m.evolve(s + t);
      const Matrix rhs = m.evolve(s) * m.evolve(t);
      CHECK((lhs - rhs).norm() < 1e-10);
    }
  }
}

TEST_CASE("ctmc semigroup is stochastic") {
  Matrix q(3, 3);
  q << Complex(-2, 0), Complex(1.5, 0), Complex(0.5, 0),
       Complex(0.2, 0), Complex(-1.0, 0), Complex(0.8, 0),
       Complex(1.0, 0), Complex(1.0, 0), Complex(-2.0, 0);
  auto m = GeneratorModel::ctmc(q);
  for (double t : {0.1, 1.0, 10.0}) {
    const Matrix p = m.evolve(t);
    for (int i = 0; i < 3; ++i) {
      Complex row_sum(0, 0);
      for (int j = 0; j < 3; ++j) {
        CHECK(p(i, j).real() > -1e-12);
        CHECK(std::abs(p(i, j).imag()) < 1e-12);
        row_sum += p(i, j);
      }
      CHECK(std::abs(row_sum - Complex(1, 0)) < 1e-12);
    }
  }
}

TEST_CASE("operator norms") {
  auto m = GeneratorModel::fromMatrix(scalarMatrix({-1.0, 0.0}));
  const Matrix id = Matrix::Identity(1, 1);
  CHECK(opNorm(m, id, NormTag::B, NormTag::B) == doctest::Approx(1.0));
  CHECK(opNorm(m, id, NormTag::A, NormTag::A) == doctest::Approx(1.0));
  CHECK(opNorm(m, id, NormTag::B, NormTag::A) <= 1.0 + 1e-12);

  // S = sqrt(2) for Z = -1, so ||3||_{B->A} = 3/sqrt(2)
  CHECK(opNorm(m, 3.0 * id, NormTag::B, NormTag::A) ==
        doctest::Approx(2.1213203435596424).epsilon(1e-13));
  CHECK(opNorm(m, 0.0 * id, NormTag::B, NormTag::A) == 0.0);
  CHECK(opNorm(m, 0.0 * id, NormTag::B, NormTag::B) == 0.0);

  CHECK_THROWS_AS(opNorm(m, Matrix::Identity(2, 2), NormTag::B, NormTag::B), DomainError);
}

TEST_CASE("weak operator norm is the sharp constant") {
  auto m = GeneratorModel::randomStable(5, -0.5, 21);
  const NormPair& norms = m.norms();
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix t = randomMatrix(5, rng());
    const Vector mu = randomVector(5, rng());
    const double bound = norms.operatorNorm(t, NormTag::B, NormTag::A);
    CHECK((t * mu).norm() <= bound * norms.vectorNorm(mu, NormTag::B) * (1 + 1e-12));
    CHECK(bound <= norms.operatorNorm(t, NormTag::B, NormTag::B) * (1 + 1e-12));
    CHECK(bound <= norms.operatorNorm(t, NormTag::A, NormTag::A) * (1 + 1e-12));
  }

  // Equality attained by the maximizing singular vector of T S^{-1}.
  const Matrix t = randomMatrix(5, 7);
  Eigen::JacobiSVD<Matrix> svd(t * norms.strongFactorInverse(),
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector maximizer = norms.strongFactorInverse() * svd.matrixV().col(0);
  const double attained = (t * maximizer).norm() / norms.vectorNorm(maximizer, NormTag::B);
  CHECK(std::abs(attained - norms.operatorNorm(t, NormTag::B, NormTag::A)) < 1e-10);
}

TEST_CASE("vector norms: pair ordering and axioms") {
  auto m = GeneratorModel::randomStable(6, -0.4, 5);
  const NormPair& norms = m.norms();
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector u = randomVector(6, rng());
    const Vector v = randomVector(6, rng());
    const double ub = norms.vectorNorm(u, NormTag::B);
    CHECK(norms.vectorNorm(u, NormTag::A) <= ub * (1 + 1e-12));
    CHECK(norms.vectorNorm(u + v, NormTag::B) <=
          ub + norms.vectorNorm(v, NormTag::B) + 1e-12);
    CHECK(norms.vectorNorm(2.5 * u, NormTag::B) == doctest::Approx(2.5 * ub));
    if (u.norm() > 0) CHECK(ub > 0.0);
  }
}

TEST_CASE("bounded semigroup sanity on a scan horizon") {
  auto m = GeneratorModel::randomStable(6, -0.5, 17);
  std::vector<double> grid;
  for (int i = 0; i <= 64; ++i) grid.push_back(20.0 * i / 64);
  const C1Estimate c1 = estimateC1(m, grid);
  CHECK(std::isfinite(c1.value));
  CHECK(!c1.growth_warning);
}

TEST_CASE("random stable construction") {
  auto a = GeneratorModel::randomStable(8, -0.5, 42);
  auto b = GeneratorModel::randomStable(8, -0.5, 42);
  CHECK(a.generator() == b.generator());  // deterministic in the seed
  CHECK(a.spectralAbscissa() <= -0.5 + 1e-9);
  auto c = GeneratorModel::randomStable(8, -0.5, 43);
  CHECK(a.generator() != c.generator());
  CHECK_THROWS_AS(GeneratorModel::randomStable(4, 0.5, 1), DomainError);
}

TEST_CASE("eigendata caching is idempotent under threads") {
  auto m = GeneratorModel::randomStable(10, -0.5, 77);
  std::vector<std::thread> workers;
  std::vector<const Eigendata*> seen(8, nullptr);
  for (int i = 0; i < 8; ++i) {
    workers.emplace_back([&m, &seen, i] { seen[i] = &m.eigendata(); });
  }
  for (auto& w : workers) w.join();
  for (int i = 1; i < 8; ++i) CHECK(seen[i] == seen[0]);

  // concurrent evolve agrees with serial evolve
  const Matrix serial = m.evolve(1.5);
  std::vector<Matrix> results(6);
  workers.clear();
  for (int i = 0; i < 6; ++i) {
    workers.emplace_back([&m, &results, i] { results[i] = m.evolve(1.5); });
  }
  for (auto& w : workers) w.join();
  for (const Matrix& r : results) CHECK((r - serial).norm() == 0.0);
}
