#include "semispec/config.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "semispec/errors.hpp"

namespace semispec {

using nlohmann::json;

namespace {

Matrix parseMatrix(const json& node, const std::string& field) {
  if (!node.contains("re") || !node["re"].is_array()) {
    throw ConfigError(field + ".re must be an array of rows");
  }
  const auto& re = node["re"];
  const size_t rows = re.size();
  if (rows == 0) throw ConfigError(field + " must be non-empty");
  const size_t cols = re[0].size();
  Matrix m(rows, cols);
  for (size_t i = 0; i < rows; ++i) {
    if (re[i].size() != cols) throw ConfigError(field + ".re rows must have equal length");
    for (size_t j = 0; j < cols; ++j) m(i, j) = Complex(re[i][j].get<double>(), 0.0);
  }
  if (node.contains("im")) {
    const auto& im = node["im"];
    if (im.size() != rows) throw ConfigError(field + ".im shape must match .re");
    for (size_t i = 0; i < rows; ++i) {
      for (size_t j = 0; j < cols; ++j) {
        m(i, j) += Complex(0.0, im[i][j].get<double>());
      }
    }
  }
  return m;
}

Vector parseVector(const json& node, const std::string& field) {
  if (!node.contains("re") || !node["re"].is_array()) {
    throw ConfigError(field + ".re must be an array");
  }
  const size_t n = node["re"].size();
  Vector v(n);
  for (size_t i = 0; i < n; ++i) v(i) = Complex(node["re"][i].get<double>(), 0.0);
  if (node.contains("im")) {
    if (node["im"].size() != n) throw ConfigError(field + ".im length must match .re");
    for (size_t i = 0; i < n; ++i) v(i) += Complex(0.0, node["im"][i].get<double>());
  }
  return v;
}

GridSpec parseGrid(const json& node, const std::string& field) {
  GridSpec g;
  g.min = node.value("min", g.min);
  g.max = node.value("max", g.max);
  g.count = node.value("count", g.count);
  if (g.count < 2) throw ConfigError(field + ".count must be >= 2");
  const std::string spacing = node.value("spacing", std::string("linear"));
  if (spacing == "log") {
    g.log_spacing = true;
  } else if (spacing == "linear") {
    g.log_spacing = false;
  } else {
    throw ConfigError(field + ".spacing must be \"linear\" or \"log\"");
  }
  return g;
}

}  // namespace

GeneratorModel ModelDescriptor::build(std::uint64_t default_seed) const {
  switch (type) {
    case Type::Explicit:
      return GeneratorModel::fromMatrix(matrix);
    case Type::Ctmc:
      return GeneratorModel::ctmc(matrix);
    case Type::Jordan:
      return GeneratorModel::jordanBlock(jordan_eigenvalue, jordan_size);
    case Type::DiagonalRapid:
      return GeneratorModel::diagonalRapid(c, K);
    case Type::RandomStable:
      return GeneratorModel::randomStable(dimension, abscissa_bound,
                                          seed.value_or(default_seed));
  }
  throw ConfigError("unknown model type");
}

Vector ProbeSpec::build(const GeneratorModel& model, std::uint64_t default_seed) const {
  const int n = model.dimension();
  switch (type) {
    case Type::ExplicitVector: {
      if (explicit_vector.size() != n) {
        throw ConfigError("probe vector length must match the model dimension");
      }
      return explicit_vector;
    }
    case Type::Random: {
      std::mt19937_64 rng(seed.value_or(default_seed));
      std::normal_distribution<double> gauss(0.0, 1.0);
      Vector v(n);
      for (int i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
      v /= v.norm();
      return v;
    }
    case Type::Eigenvector: {
      if (eigen_index < 0 || eigen_index >= n) {
        throw ConfigError("probe eigvec index out of range");
      }
      Vector v = model.eigendata().vectors.col(eigen_index);
      v /= v.norm();
      return v;
    }
  }
  throw ConfigError("unknown probe type");
}

void RunConfig::validate() const {
  params.validate();
  if (pipeline != "exponential" && pipeline != "rapid") {
    throw ConfigError("pipeline must be \"exponential\" or \"rapid\"");
  }
  if (!(tolerances.path_agreement > 0.0) || !(tolerances.projector > 0.0) ||
      !(tolerances.reconstruction > 0.0)) {
    throw ConfigError("tolerances must be > 0");
  }
  if (b_grid.count < 2 || t_grid.count < 2) {
    throw ConfigError("grid counts must be >= 2");
  }
  if (b_grid.min < params.beta) {
    throw ConfigError("b_grid.min must be >= params.beta");
  }
  if (probes.empty()) throw ConfigError("at least one probe vector is required");
  for (double t : path_agreement_times) {
    if (!(t > 0.0)) throw ConfigError("path_agreement_times must be > 0");
  }
}

RunConfig parseConfig(const json& doc) {
  RunConfig config;
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

  if (!doc.contains("model")) throw ConfigError("config requires a \"model\" section");
  const json& m = doc["model"];
  const std::string type = m.value("type", std::string());
  if (type == "explicit") {
    config.model.type = ModelDescriptor::Type::Explicit;
    config.model.matrix = parseMatrix(m.at("matrix"), "model.matrix");
  } else if (type == "ctmc") {
    config.model.type = ModelDescriptor::Type::Ctmc;
    config.model.matrix = parseMatrix(m.at("matrix"), "model.matrix");
  } else if (type == "jordan") {
    config.model.type = ModelDescriptor::Type::Jordan;
    config.model.jordan_eigenvalue =
        Complex(m.value("eigenvalue_re", -1.0), m.value("eigenvalue_im", 0.0));
    config.model.jordan_size = m.value("size", 2);
  } else if (type == "diagonal_rapid") {
    config.model.type = ModelDescriptor::Type::DiagonalRapid;
    config.model.c = m.value("c", 0.5);
    config.model.K = m.value("K", 10);
  } else if (type == "random_stable") {
    config.model.type = ModelDescriptor::Type::RandomStable;
    config.model.dimension = m.value("dimension", 4);
    config.model.abscissa_bound = m.value("abscissa_bound", -0.5);
    if (m.contains("seed")) config.model.seed = m["seed"].get<std::uint64_t>();
  } else {
    throw ConfigError("model.type must be one of explicit, ctmc, jordan, "
                      "diagonal_rapid, random_stable");
  }

  if (doc.contains("params")) {
    const json& p = doc["params"];
    config.params.lambda = p.value("lambda", config.params.lambda);
    config.params.alpha = p.value("alpha", config.params.alpha);
    config.params.beta = p.value("beta", config.params.beta);
    config.params.gamma = p.value("gamma", config.params.gamma);
    config.params.ell = p.value("ell", config.params.ell);
    config.params.epsilon = p.value("epsilon", config.params.epsilon);
    config.params.c10 = p.value("c10", config.params.c10);
    config.params.c11 = p.value("c11", config.params.c11);
    config.params.c12 = p.value("c12", config.params.c12);
  }

  config.pipeline = doc.value("pipeline", config.pipeline);

  if (doc.contains("contour")) {
    const json& c = doc["contour"];
    const std::string kind = c.value("kind", std::string("shifted_line"));
    if (kind == "shifted_line") {
      config.contour.kind = ContourSpec::Kind::ShiftedLine;
    } else if (kind == "curved_rapid") {
      config.contour.kind = ContourSpec::Kind::CurvedRapid;
    } else if (kind == "bromwich_line") {
      config.contour.kind = ContourSpec::Kind::BromwichLine;
    } else {
      throw ConfigError("contour.kind must be shifted_line, curved_rapid or bromwich_line");
    }
    config.contour.abscissa = c.value("abscissa", 0.0);
    config.contour.b_cut = c.value("b_cut", 0.0);
    config.contour.step = c.value("step", 0.01);
    config.contour.node_count = c.value("node_count", 0);
    config.contour.epsilon = c.value("epsilon", 0.0);
    config.contour.c12 = c.value("c12", 1.0);
    config.contour.beta = c.value("beta", 1.0);
    config.contour.regularization_order = c.value("regularization_order", 6);
  } else {
    config.contour.kind = config.pipeline == "rapid" ? ContourSpec::Kind::CurvedRapid
                                                     : ContourSpec::Kind::ShiftedLine;
    config.contour.abscissa = 0.0;  // decompose substitutes params.ell
  }

  if (doc.contains("b_grid")) config.b_grid = parseGrid(doc["b_grid"], "b_grid");
  if (doc.contains("t_grid")) config.t_grid = parseGrid(doc["t_grid"], "t_grid");

  if (doc.contains("probes")) {
    for (size_t i = 0; i < doc["probes"].size(); ++i) {
      const json& p = doc["probes"][i];
      ProbeSpec probe;
      const std::string ptype = p.value("type", std::string("random"));
      if (ptype == "random") {
        probe.type = ProbeSpec::Type::Random;
        if (p.contains("seed")) probe.seed = p["seed"].get<std::uint64_t>();
      } else if (ptype == "eigvec") {
        probe.type = ProbeSpec::Type::Eigenvector;
        probe.eigen_index = p.value("index", 0);
      } else if (ptype == "explicit") {
        probe.type = ProbeSpec::Type::ExplicitVector;
        probe.explicit_vector = parseVector(p, "probes[" + std::to_string(i) + "]");
      } else {
        throw ConfigError("probe type must be random, eigvec or explicit");
      }
      config.probes.push_back(std::move(probe));
    }
  }
  if (config.probes.empty()) {
    ProbeSpec probe;
    probe.type = ProbeSpec::Type::Random;
    config.probes.push_back(probe);
  }

  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    config.tolerances.path_agreement =
        t.value("path_agreement", config.tolerances.path_agreement);
    config.tolerances.projector = t.value("projector", config.tolerances.projector);
    config.tolerances.reconstruction =
        t.value("reconstruction", config.tolerances.reconstruction);
  }

  if (doc.contains("decay")) {
    config.decay.p = doc["decay"].value("p", config.decay.p);
    config.decay.q = doc["decay"].value("q", config.decay.q);
  }

  if (doc.contains("reconstruct")) {
    const json& r = doc["reconstruct"];
    ReconstructSpec spec;
    spec.t = r.value("t", spec.t);
    spec.a = r.value("a", spec.a);
    spec.step = r.value("step", spec.step);
    if (r.contains("b_cuts")) {
      spec.b_cuts.clear();
      for (const auto& v : r["b_cuts"]) spec.b_cuts.push_back(v.get<double>());
    }
    config.reconstruct = spec;
  }

  if (doc.contains("path_agreement_times")) {
    config.path_agreement_times.clear();
    for (const auto& v : doc["path_agreement_times"]) {
      config.path_agreement_times.push_back(v.get<double>());
    }
  }

  config.output_dir = doc.value("output_dir", config.output_dir);
  config.seed = doc.value("seed", config.seed);

  config.validate();
  return config;
}

RunConfig loadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parseConfig(doc);
}

nlohmann::ordered_json configEcho(const RunConfig& config) {
  nlohmann::ordered_json echo;
  nlohmann::ordered_json model;
  switch (config.model.type) {
    case ModelDescriptor::Type::Explicit:
    case ModelDescriptor::Type::Ctmc: {
      model["type"] = config.model.type == ModelDescriptor::Type::Ctmc ? "ctmc" : "explicit";
      std::vector<std::vector<double>> re, im;
      for (Eigen::Index i = 0; i < config.model.matrix.rows(); ++i) {
        std::vector<double> rrow, irow;
        for (Eigen::Index j = 0; j < config.model.matrix.cols(); ++j) {
          rrow.push_back(config.model.matrix(i, j).real());
          irow.push_back(config.model.matrix(i, j).imag());
        }
        re.push_back(rrow);
        im.push_back(irow);
      }
      model["matrix"] = {{"re", re}, {"im", im}};
      break;
    }
    case ModelDescriptor::Type::Jordan:
      model["type"] = "jordan";
      model["eigenvalue_re"] = config.model.jordan_eigenvalue.real();
      model["eigenvalue_im"] = config.model.jordan_eigenvalue.imag();
      model["size"] = config.model.jordan_size;
      break;
    case ModelDescriptor::Type::DiagonalRapid:
      model["type"] = "diagonal_rapid";
      model["c"] = config.model.c;
      model["K"] = config.model.K;
      break;
    case ModelDescriptor::Type::RandomStable:
      model["type"] = "random_stable";
      model["dimension"] = config.model.dimension;
      model["abscissa_bound"] = config.model.abscissa_bound;
      if (config.model.seed) model["seed"] = *config.model.seed;
      break;
  }
  echo["model"] = model;
  echo["params"] = {{"lambda", config.params.lambda}, {"alpha", config.params.alpha},
                    {"beta", config.params.beta},     {"gamma", config.params.gamma},
                    {"ell", config.params.ell},       {"epsilon", config.params.epsilon},
                    {"c10", config.params.c10},       {"c11", config.params.c11},
                    {"c12", config.params.c12}};
  echo["pipeline"] = config.pipeline;
  echo["b_grid"] = {{"min", config.b_grid.min},
                    {"max", config.b_grid.max},
                    {"count", config.b_grid.count},
                    {"spacing", config.b_grid.log_spacing ? "log" : "linear"}};
  echo["t_grid"] = {{"min", config.t_grid.min},
                    {"max", config.t_grid.max},
                    {"count", config.t_grid.count},
                    {"spacing", config.t_grid.log_spacing ? "log" : "linear"}};
  echo["seed"] = config.seed;
  echo["output_dir"] = config.output_dir;
  return echo;
}

}  // namespace semispec
