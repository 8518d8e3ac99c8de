#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "semispec/generator_model.hpp"
#include "semispec/params.hpp"
#include "semispec/spectral.hpp"

namespace semispec {

struct ModelDescriptor {
  enum class Type { Explicit, Ctmc, Jordan, DiagonalRapid, RandomStable };
  Type type = Type::Explicit;
  Matrix matrix;            // explicit / ctmc
  Complex jordan_eigenvalue{-1.0, 0.0};
  int jordan_size = 2;
  double c = 0.5;           // diagonal-rapid
  int K = 10;
  int dimension = 4;        // random-stable
  double abscissa_bound = -0.5;
  std::optional<std::uint64_t> seed;

  GeneratorModel build(std::uint64_t default_seed) const;
};

struct ProbeSpec {
  enum class Type { ExplicitVector, Random, Eigenvector };
  Type type = Type::Random;
  Vector explicit_vector;
  std::optional<std::uint64_t> seed;
  int eigen_index = 0;

  Vector build(const GeneratorModel& model, std::uint64_t default_seed) const;
};

struct Tolerances {
  double path_agreement = 1e-6;
  double projector = 1e-8;
  double reconstruction = 1e-8;
};

struct ReconstructSpec {
  double t = 1.0;
  double a = 1.0;
  std::vector<double> b_cuts = {500.0, 1000.0, 2000.0};
  double step = 0.01;
};

struct DecaySpec {
  int p = 2;
  int q = 6;
};

struct RunConfig {
  ModelDescriptor model;
  AssumptionParams params;
  std::string pipeline = "exponential";  // or "rapid"
  ContourSpec contour;
  GridSpec b_grid{1.5, 1000.0, 120, true};
  GridSpec t_grid{0.1, 50.0, 40, true};
  std::vector<ProbeSpec> probes;
  Tolerances tolerances;
  DecaySpec decay;
  std::optional<ReconstructSpec> reconstruct;
  std::vector<double> path_agreement_times = {1.0, 5.0, 10.0};
  std::string output_dir = "out";
  std::uint64_t seed = 42;

  void validate() const;  // throws ConfigError naming the offending field
};

RunConfig parseConfig(const nlohmann::json& doc);
RunConfig loadConfigFile(const std::string& path);
nlohmann::ordered_json configEcho(const RunConfig& config);

}  // namespace semispec
