#include "semispec/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "semispec/errors.hpp"
#include "semispec/numerics.hpp"
#include "semispec/verification.hpp"

namespace semispec {

using nlohmann::ordered_json;

StageSet StageSet::forSubcommand(const std::string& name) {
  StageSet s;
  if (name == "scan") {
    s.scans = true;
  } else if (name == "ledger") {
    s.ledger = true;
  } else if (name == "decompose") {
    s.decomposition = true;
  } else if (name == "reconstruct") {
    s.reconstruct = true;
  } else if (name == "verify") {
    s.scans = s.ledger = s.decomposition = s.decay = true;
    s.reconstruct = true;
  } else {
    throw ConfigError("unknown subcommand: " + name);
  }
  return s;
}

namespace {

std::vector<double> c1Grid(const GridSpec& t_grid) {
  std::vector<double> grid;
  const int count = std::max(65, t_grid.count);
  for (int i = 0; i < count; ++i) grid.push_back(t_grid.max * i / (count - 1));
  return grid;
}

std::vector<double> c2Grid(const GridSpec& t_grid) {
  std::vector<double> grid = {1e-4, 1e-3, 1e-2, 0.1};
  for (double t : c1Grid(t_grid)) {
    if (t > 0.1) grid.push_back(t);
  }
  return grid;
}

ordered_json seriesJson(const ScanSeries& s) {
  ordered_json j;
  j["count"] = s.b.size();
  return j;
}

}  // namespace

RunResult runPipeline(const RunConfig& config, const StageSet& requested) {
  const auto wall_start = std::chrono::steady_clock::now();
  config.validate();

  StageSet stages = requested;
  if (stages.decay) {
    stages.decomposition = true;
    stages.scans = true;
    if (config.pipeline == "exponential") stages.ledger = true;
  }
  if (stages.ledger) stages.scans = true;

  RunResult result;
  ordered_json& report = result.report;
  report["schema_version"] = 1;
  report["config"] = configEcho(config);

  std::vector<std::string> stage_names;
  if (stages.scans) stage_names.push_back("scan");
  if (stages.ledger) stage_names.push_back("ledger");
  if (stages.decomposition) stage_names.push_back("decompose");
  if (stages.decay) stage_names.push_back("decay");
  if (stages.reconstruct && config.reconstruct) stage_names.push_back("reconstruct");
  report["stages"] = stage_names;

  std::vector<std::pair<std::string, bool>> checks;
  auto record = [&checks, &result](const std::string& name, bool pass) {
    checks.emplace_back(name, pass);
    if (!pass) result.all_pass = false;
  };

  const GeneratorModel model = config.model.build(config.seed);
  AssumptionParams params = config.params;
  const bool exponential = config.pipeline == "exponential";

  // ----- scans ------------------------------------------------------------
  if (stages.scans) {
    ordered_json scans;
    const std::vector<double> tg1 = c1Grid(config.t_grid);
    const C1Estimate c1 = estimateC1(model, tg1);
    params.c1 = c1.value;
    scans["c1"] = {{"value", c1.value},
                   {"argmax_t", c1.argmax_t},
                   {"growth_warning", c1.growth_warning}};
    record("c1_bounded", !c1.growth_warning);
    {
      CsvSeries s{"scan_c1", {"t", "norm_B"}, {}};
      for (double t : tg1) {
        s.rows.push_back(
            {t, model.norms().operatorNorm(model.evolve(t), NormTag::B, NormTag::B)});
      }
      result.series.push_back(std::move(s));
    }

    const C2Estimate c2 = estimateC2(model, c2Grid(config.t_grid));
    params.c2 = c2.value;
    scans["c2"] = {{"value", c2.value},
                   {"argmax_t", c2.argmax_t},
                   {"analytic_bound", c2.analytic_bound}};
    record("c2_within_analytic_bound", c2.value <= c2.analytic_bound * (1.0 + 1e-9));

    const std::vector<double> b_grid = config.b_grid.points();
    if (exponential) {
      const DolgopyatScan dolgo = dolgopyatScan(model, params, b_grid);
      params.c_dolgo = dolgo.c_dolgo;
      scans["dolgopyat"] = {{"c_dolgo", dolgo.c_dolgo},
                            {"worst_b", dolgo.worst_b},
                            {"extension_change", dolgo.extension_change},
                            {"pass", dolgo.pass}};
      scans["dolgopyat"].update(seriesJson(dolgo.series));
      record("dolgopyat_scan", dolgo.pass);
      CsvSeries s{"scan_dolgopyat", {"b", "value"}, {}};
      for (size_t i = 0; i < dolgo.series.b.size(); ++i) {
        s.rows.push_back({dolgo.series.b[i], dolgo.series.value[i]});
      }
      result.series.push_back(std::move(s));

      const OscillatoryCheck osc = oscillatoryBoundCheck(model, params, b_grid);
      scans["oscillatory"] = {{"c4_measured", osc.c4_measured},
                              {"c4_ledger", osc.c4_ledger},
                              {"worst_b", osc.worst_b},
                              {"pass", osc.pass}};
      record("oscillatory_bound", osc.pass);
      CsvSeries os{"scan_oscillatory", {"b", "b_times_norm_BA"}, {}};
      for (size_t i = 0; i < osc.series.b.size(); ++i) {
        os.rows.push_back({osc.series.b[i], osc.series.value[i]});
      }
      result.series.push_back(std::move(os));
    } else {
      const RapidScan rapid = rapidScan(model, params, b_grid);
      scans["rapid"] = {{"c10", rapid.c10}, {"c11_fit", rapid.c11_fit}, {"pass", rapid.pass}};
      if (rapid.violating_eigenvalue) {
        scans["rapid"]["violating_eigenvalue_re"] = rapid.violating_eigenvalue->real();
        scans["rapid"]["violating_eigenvalue_im"] = rapid.violating_eigenvalue->imag();
      }
      record("rapid_scan", rapid.pass);
      if (params.c10 <= 0.0) params.c10 = rapid.c10;
      if (params.c11 <= 0.0 && std::isfinite(rapid.c11_fit)) {
        params.c11 = std::max(0.0, rapid.c11_fit);
      }
      CsvSeries s{"scan_rapid", {"b", "norm_B"}, {}};
      for (size_t i = 0; i < rapid.series.b.size(); ++i) {
        s.rows.push_back({rapid.series.b[i], rapid.series.value[i]});
      }
      result.series.push_back(std::move(s));
    }
    report["scans"] = scans;
  }

  // ----- ledger -----------------------------------------------------------
  ConstantsLedger ledger;
  bool ledger_ok = false;
  if (stages.ledger) {
    ordered_json lj;
    if (exponential) {
      try {
        ledger = computeLedger(model, params);
        ledger_ok = true;
        lj = {{"c_john", ledger.c_john}, {"c3", ledger.c3},
              {"c_jim", ledger.c_jim},   {"c5", ledger.c5},
              {"c4", ledger.c4},         {"c_mid", ledger.c_mid},
              {"c_outer", ledger.c_outer}, {"c_june", ledger.c_june}};
        if (ledger.c13) lj["c13"] = *ledger.c13;
      } catch (const Error& e) {
        lj["error"] = e.what();
      }
      record("ledger_defined", ledger_ok);
    } else {
      lj["c_john"] = params.gamma * std::log(1.0 + params.ell / params.alpha);
      if (params.c10 > 0.0) {
        lj["c13"] = params.c10 + std::pow(params.beta, -params.c11);
      }
      ledger_ok = true;
    }
    ordered_json prov;
    for (const auto& [key, formula] : ConstantsLedger::provenance()) prov[key] = formula;
    lj["provenance"] = prov;
    report["ledger"] = lj;
  }

  // ----- decomposition ----------------------------------------------------
  std::optional<SpectralDecomposition> dec;
  if (stages.decomposition) {
    ordered_json dj;
    try {
      dec = decompose(model, params, config.contour);
      ordered_json pole_table = ordered_json::array();
      for (size_t j = 0; j < dec->poles().size(); ++j) {
        const Complex trace = dec->projectors()[j].trace();
        pole_table.push_back({{"re", dec->poles()[j].real()},
                              {"im", dec->poles()[j].imag()},
                              {"order", dec->poleOrders()[j]},
                              {"multiplicity", dec->multiplicities()[j]},
                              {"projector_trace_re", trace.real()},
                              {"projector_trace_im", trace.imag()}});
      }
      dj["poles"] = pole_table;
      dj["warnings"] = dec->warnings();

      bool trace_ok = true;
      for (size_t j = 0; j < dec->poles().size(); ++j) {
        const Complex trace = dec->projectors()[j].trace();
        if (std::abs(trace - Complex(dec->multiplicities()[j], 0.0)) > 1e-6) {
          trace_ok = false;
        }
      }
      record("projector_trace_multiplicity", trace_ok);

      double worst_agreement = 0.0;
      for (double t : config.path_agreement_times) {
        const Matrix sub = dec->remainderSubtraction(t);
        const Matrix con = dec->remainderContour(t);
        worst_agreement = std::max(
            worst_agreement,
            model.norms().operatorNorm(sub - con, NormTag::B, NormTag::B));
      }
      dj["path_agreement_max_defect"] = worst_agreement;
      record("path_agreement", worst_agreement <= config.tolerances.path_agreement);

      double worst_reconstruction = 0.0;
      if (!dec->poles().empty()) {
        const Matrix complement =
            Matrix::Identity(model.dimension(), model.dimension()) - dec->projectorSum();
        for (double t : {0.5, 1.0, 2.0, 5.0}) {
          const Matrix rebuilt = model.evolve(t) * complement + dec->polynomialPart(t);
          worst_reconstruction = std::max(
              worst_reconstruction,
              model.norms().operatorNorm(model.evolve(t) - rebuilt, NormTag::B, NormTag::B));
        }
      }
      dj["reconstruction_max_defect"] = worst_reconstruction;
      record("reconstruction", worst_reconstruction <= config.tolerances.reconstruction);
    } catch (const Error& e) {
      dj["error"] = e.what();
      record("decomposition", false);
      dec.reset();
    }
    report["decomposition"] = dj;
  }

  // ----- decay ------------------------------------------------------------
  if (stages.decay && dec) {
    ordered_json decay_list = ordered_json::array();
    const std::vector<double> t_grid = config.t_grid.points();
    for (size_t i = 0; i < config.probes.size(); ++i) {
      const Vector mu = config.probes[i].build(model, config.seed + i + 1);
      ordered_json entry;
      entry["probe"] = i;
      try {
        DecayReport rep;
        if (exponential) {
          if (!ledger_ok) throw LedgerUndefinedError("decay bound needs the ledger", "C_june");
          rep = exponentialDecayCheck(model, *dec, mu, params.ell, ledger.c_june, t_grid);
          entry["kind"] = "exponential";
        } else {
          rep = rapidDecayCheck(model, *dec, mu, config.decay.p, config.decay.q, params,
                                t_grid);
          entry["kind"] = "rapid";
          entry["p"] = config.decay.p;
          entry["q"] = config.decay.q;
          entry["c_p"] = rep.c_p;
          entry["graded_norm"] = rep.graded_norm;
        }
        entry["fitted_rate"] = rep.fitted_rate;
        entry["kernel_case"] = rep.kernel_case;
        entry["pass"] = rep.pass;
        record("decay_probe" + std::to_string(i), rep.pass);

        CsvSeries s{"decay_" + std::string(exponential ? "exponential" : "rapid") +
                        "_probe" + std::to_string(i),
                    {"t", "remainder_norm_A", "bound"},
                    {}};
        for (size_t k = 0; k < rep.t_grid.size(); ++k) {
          s.rows.push_back({rep.t_grid[k], rep.remainder_norms[k], rep.bound_values[k]});
        }
        result.series.push_back(std::move(s));
      } catch (const Error& e) {
        entry["error"] = e.what();
        record("decay_probe" + std::to_string(i), false);
      }
      decay_list.push_back(entry);
    }
    report["decay"] = decay_list;
  } else if (stages.decay && !dec) {
    record("decay", false);
  }

  // ----- reconstruct study ------------------------------------------------
  if (stages.reconstruct && config.reconstruct) {
    const ReconstructSpec& spec = *config.reconstruct;
    ordered_json rj;
    CsvSeries s{"reconstruct_error", {"b_cut", "error"}, {}};
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    try {
      const Matrix exact = model.evolve(spec.t);
      for (double b_cut : spec.b_cuts) {
        ContourSpec contour;
        contour.kind = ContourSpec::Kind::BromwichLine;
        contour.abscissa = spec.a;
        contour.b_cut = b_cut;
        contour.step = spec.step;
        const Matrix approx = bromwichReconstruct(model, spec.t, contour);
        const double err = numerics::spectralNorm(approx - exact);
        s.rows.push_back({b_cut, err});
        if (err >= prev) monotone = false;
        prev = err;
      }
      rj["monotone"] = monotone;
      record("reconstruct_monotone", monotone);
    } catch (const Error& e) {
      rj["error"] = e.what();
      record("reconstruct_monotone", false);
    }
    result.series.push_back(std::move(s));
    report["reconstruct"] = rj;
  }

  ordered_json check_list = ordered_json::array();
  for (const auto& [name, pass] : checks) {
    check_list.push_back({{"name", name}, {"pass", pass}});
  }
  report["checks"] = check_list;
  report["pass"] = result.all_pass;

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  report["timing"] = {{"total_seconds", seconds}};
  return result;
}

void writeRunResult(const RunResult& result, const std::string& output_dir) {
  std::filesystem::create_directories(output_dir);
  const std::filesystem::path path = std::filesystem::path(output_dir) / "report.json";
  std::ofstream out(path);
  if (!out) throw Error("cannot write report: " + path.string());
  out << serializeReport(result.report);
  for (const CsvSeries& s : result.series) writeCsv(s, output_dir);
}

}  // namespace semispec
