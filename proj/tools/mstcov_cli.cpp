// mstcov: test and plot symmetry and separability of multivariate
// spatio-temporal covariances.

#include "mstcov/benchmark.hpp"
#include "mstcov/boxplot.hpp"
#include "mstcov/csv_io.hpp"
#include "mstcov/detrend.hpp"
#include "mstcov/error.hpp"
#include "mstcov/parallel.hpp"
#include "mstcov/pipeline.hpp"
#include "mstcov/simulate.hpp"

#include "CLI11.hpp"

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mstcov;

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_interrupt(int) { g_stop.store(true); }

struct Globals {
  std::uint64_t seed = 0;
  std::size_t memory_limit = 3000;
  std::size_t threads = 0;
  std::string output_dir = ".";
  std::string mode = "least-squares";
  std::string null_mode = "regenerate";
  bool fast = false;
};

std::vector<PropertyType> parse_properties(const std::vector<std::string>& names) {
  std::vector<PropertyType> out;
  for (const auto& name : names) {
    if (name == "all") {
      out.assign(kAllProperties.begin(), kAllProperties.end());
    } else if (name == "symmetry") {
      out.insert(out.end(), kSymmetryProperties.begin(), kSymmetryProperties.end());
    } else if (name == "separability") {
      out.insert(out.end(), kSeparabilityProperties.begin(), kSeparabilityProperties.end());
    } else {
      out.push_back(parse_property(name));
    }
  }
  if (out.empty()) out.assign(kAllProperties.begin(), kAllProperties.end());
  return out;
}

fs::path output_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.output_dir);
  return fs::path(g.output_dir) / name;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

PropertyTestOptions test_options(const Globals& g) {
  PropertyTestOptions o;
  o.seed = g.seed;
  o.memory_limit = g.memory_limit;
  o.estimator = parse_estimator_mode(g.mode);
  o.null_mode = parse_null_mode(g.null_mode);
  return o;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Test and visualize symmetry and separability of multivariate spatio-temporal "
               "covariance functions"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--memory-limit,-M", g.memory_limit, "Largest covariance dimension M for reference data");
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_option("--output-dir", g.output_dir, "Directory for output files");
  app.add_option("--mode", g.mode, "rho estimator: least-squares or mean-ratio");
  app.add_option("--null", g.null_mode, "Null distribution: rank-sum or regenerate");
  app.add_flag("--fast", g.fast, "Small preset for simulate/benchmark: m=3, l=2000");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate Model 1 or Model 2 data as CSV");
  int sim_model = 1;
  std::size_t sim_m = 4, sim_l = 10000, sim_shift = 0, sim_lag = 0;
  double sim_beta1 = 0.0, sim_beta2 = 0.0;
  std::string sim_out;
  sim->add_option("--model", sim_model, "1 (symmetry study) or 2 (separability study)")->check(CLI::IsMember({1, 2}));
  auto* sim_m_opt = sim->add_option("--m", sim_m, "Grid side; n = m^2 locations");
  auto* sim_l_opt = sim->add_option("--l", sim_l, "Number of time points");
  sim->add_option("--shift", sim_shift, "Model 1 spatial shift in grid steps");
  sim->add_option("--lag", sim_lag, "Model 1 time lag");
  sim->add_option("--beta1", sim_beta1, "Model 2 variable-time interaction");
  sim->add_option("--beta2", sim_beta2, "Model 2 space-time interaction");
  sim->add_option("-o,--output", sim_out, "Output CSV (default <output-dir>/simulated.csv)");

  // detrend
  auto* det = app.add_subcommand("detrend", "Remove harmonic means by least squares");
  std::string det_in, det_out, det_coef;
  std::vector<double> det_periods(std::begin(kDefaultPeriods), std::end(kDefaultPeriods));
  det->add_option("input", det_in, "Input CSV")->required();
  det->add_option("--periods", det_periods, "Harmonic periods")->delimiter(',');
  det->add_option("-o,--output", det_out, "Residual CSV (default <output-dir>/residuals.csv)");
  det->add_option("--coefficients", det_coef, "Coefficient CSV (default <output-dir>/coefficients.csv)");

  // test
  auto* tst = app.add_subcommand("test", "Rank-based test of covariance properties");
  std::string tst_in;
  std::vector<std::string> tst_props;
  double tst_alpha = 0.05;
  std::size_t tst_U = 10, tst_B = 200;
  bool tst_plot = false, tst_detrend = false;
  tst->add_option("input", tst_in, "Input CSV")->required();
  tst->add_option("--property,-p", tst_props, "Properties (names, 'symmetry', 'separability' or 'all')")->delimiter(',');
  tst->add_option("--alpha", tst_alpha, "Significance level");
  tst->add_option("--max-lag,-U", tst_U, "Largest time lag of the test functions");
  tst->add_option("-B,--bootstrap", tst_B, "Bootstrap draws");
  tst->add_flag("--detrend", tst_detrend, "Remove 24 and 12 period harmonics first");
  tst->add_flag("--plot", tst_plot, "Also write a functional boxplot per property");

  // plot
  auto* plt = app.add_subcommand("plot", "Functional boxplots of test functions as SVG");
  std::string plt_in, plt_grid;
  std::vector<std::string> plt_props;
  std::size_t plt_U = 5, plt_B = 200, plt_columns = 3;
  double plt_alpha = 0.05, plt_fraction = 0.5, plt_whisker = 1.5;
  bool plt_test = false;
  plt->add_option("input", plt_in, "Input CSV")->required();
  plt->add_option("--property,-p", plt_props, "Properties to plot")->delimiter(',');
  plt->add_option("--max-lag,-U", plt_U, "Largest time lag shown");
  plt->add_flag("--test", plt_test, "Run the test and color by its decision");
  plt->add_option("--alpha", plt_alpha, "Significance level for the coloring");
  plt->add_option("-B,--bootstrap", plt_B, "Bootstrap draws when testing");
  plt->add_option("--central-fraction", plt_fraction, "Fraction of deepest curves in the central region");
  plt->add_option("--whisker-factor", plt_whisker, "Whisker inflation of the region height");
  plt->add_option("--grid", plt_grid, "Write all panels into this one SVG file name");
  plt->add_option("--columns", plt_columns, "Panels per row in --grid output");

  // benchmark
  auto* bench = app.add_subcommand("benchmark", "Rejection rates over replicated simulations");
  std::string bench_config;
  std::vector<std::string> bench_settings;
  bench->add_option("--config", bench_config, "key = value config file");
  bench->add_option("--set", bench_settings, "Override a setting, e.g. --set replicates=50");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_thread_count(g.threads);
    if (sim->parsed()) {
      if (g.fast) {
        if (sim_m_opt->count() == 0) sim_m = 3;
        if (sim_l_opt->count() == 0) sim_l = 2000;
      }
      std::vector<std::string> warnings;
      const MvstDataset data =
          sim_model == 1 ? simulate_model1({sim_m, sim_l, sim_shift, sim_lag, g.seed})
                         : simulate_model2({sim_m, sim_l, sim_beta1, sim_beta2, g.seed, g.memory_limit}, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      const fs::path out = sim_out.empty() ? output_path(g, "simulated.csv") : fs::path(sim_out);
      write_dataset_csv(out, data);
      std::cout << "wrote " << out.string() << "\n";
    } else if (det->parsed()) {
      const MvstDataset data = read_dataset_csv(fs::path(det_in));
      const DetrendResult result = harmonic_detrend(data, det_periods);
      const fs::path out = det_out.empty() ? output_path(g, "residuals.csv") : fs::path(det_out);
      write_dataset_csv(out, result.residuals);
      const fs::path coef = det_coef.empty() ? output_path(g, "coefficients.csv") : fs::path(det_coef);
      std::ofstream cf(coef);
      if (!cf) throw ValidationError("cannot write " + coef.string());
      cf << "variable,loc_x,loc_y,term,coefficient\n";
      const auto& fit = result.fit;
      for (std::size_t i = 0; i < fit.num_variables; ++i) {
        for (std::size_t a = 0; a < fit.num_locations; ++a) {
          for (std::size_t k = 0; k < fit.num_terms(); ++k) {
            std::string term = "intercept";
            if (k > 0) {
              char buf[64];
              std::snprintf(buf, sizeof buf, "%s_%g", k % 2 == 1 ? "cos" : "sin", fit.periods[(k - 1) / 2]);
              term = buf;
            }
            char value[40];
            std::snprintf(value, sizeof value, "%.17g", fit.coefficient(i, a, k));
            cf << data.variable_name(i) << ',' << data.coords()[a].x << ',' << data.coords()[a].y
               << ',' << term << ',' << value << '\n';
          }
        }
      }
      std::cout << "wrote " << out.string() << " and " << coef.string() << "\n";
    } else if (tst->parsed()) {
      MvstDataset data = read_dataset_csv(fs::path(tst_in));
      if (tst_detrend) data = harmonic_detrend(data).residuals;
      PropertyTestOptions options = test_options(g);
      options.alpha = tst_alpha;
      options.max_lag = tst_U;
      options.bootstrap = tst_B;
      std::cout << "[\n";
      const auto props = parse_properties(tst_props);
      for (std::size_t k = 0; k < props.size(); ++k) {
        TestFunctionSet F;
        const TestResult result = run_property_test(data, props[k], options, &F);
        const std::string json = to_json(result);
        std::cout << json << (k + 1 < props.size() ? ",\n" : "\n");
        const std::string name(slug(props[k]));
        write_text(output_path(g, "test_" + name + ".json"), json + "\n");
        if (tst_plot) write_text(output_path(g, "boxplot_" + name + ".svg"), render_functional_boxplot(F, &result));
      }
      std::cout << "]\n";
    } else if (plt->parsed()) {
      const MvstDataset data = read_dataset_csv(fs::path(plt_in));
      BoxplotSpec spec;
      spec.central_fraction = plt_fraction;
      spec.whisker_factor = plt_whisker;
      PropertyTestOptions options = test_options(g);
      options.alpha = plt_alpha;
      options.max_lag = plt_U;
      options.bootstrap = plt_B;
      const auto props = parse_properties(plt_props);
      std::vector<TestFunctionSet> sets(props.size());
      std::vector<std::optional<TestResult>> results(props.size());
      for (std::size_t k = 0; k < props.size(); ++k) {
        if (plt_test) {
          results[k] = run_property_test(data, props[k], options, &sets[k]);
        } else {
          sets[k] = data_test_functions(data, props[k], plt_U, options.estimator);
        }
      }
      if (!plt_grid.empty()) {
        std::vector<BoxplotPanel> panels;
        for (std::size_t k = 0; k < props.size(); ++k) panels.push_back({&sets[k], results[k] ? &*results[k] : nullptr});
        const fs::path out = output_path(g, plt_grid);
        write_text(out, render_boxplot_grid(panels, plt_columns, spec));
        std::cout << "wrote " << out.string() << "\n";
      } else {
        for (std::size_t k = 0; k < props.size(); ++k) {
          const fs::path out = output_path(g, "boxplot_" + std::string(slug(props[k])) + ".svg");
          write_text(out, render_functional_boxplot(sets[k], results[k] ? &*results[k] : nullptr, spec));
          std::cout << "wrote " << out.string() << "\n";
        }
      }
    } else if (bench->parsed()) {
      BenchmarkConfig config;
      if (!bench_config.empty()) config = parse_benchmark_config(fs::path(bench_config));
      const bool seed_given = app.get_option("--seed")->count() > 0;
      if (seed_given) config.test.seed = g.seed;
      if (app.get_option("--memory-limit")->count() > 0) config.test.memory_limit = g.memory_limit;
      if (app.get_option("--mode")->count() > 0) config.test.estimator = parse_estimator_mode(g.mode);
      if (app.get_option("--null")->count() > 0) config.test.null_mode = parse_null_mode(g.null_mode);
      if (g.fast) {
        config.m = 3;
        config.l = 2000;
      }
      for (const auto& setting : bench_settings) {
        const auto eq = setting.find('=');
        if (eq == std::string::npos) throw ValidationError("--set expects key=value, got " + setting);
        std::string key = setting.substr(0, eq);
        if (key == "M") key = "memory_limit";
        apply_benchmark_setting(config, key, setting.substr(eq + 1));
      }
      if (config.properties.empty()) {
        config.properties = config.model == 1
                                ? std::vector<PropertyType>(kSymmetryProperties.begin(), kSymmetryProperties.end())
                                : std::vector<PropertyType>(kSeparabilityProperties.begin(), kSeparabilityProperties.end());
      }
      std::signal(SIGINT, on_interrupt);
      const BenchmarkTable table = run_benchmark(config, &g_stop, [](std::size_t done, std::size_t total) {
        std::cerr << "\rreplicates " << done << "/" << total << std::flush;
      });
      std::cerr << "\n";
      {
        std::ofstream csv(output_path(g, "benchmark.csv"));
        write_benchmark_csv(csv, table);
      }
      {
        std::ofstream txt(output_path(g, "benchmark.txt"));
        write_benchmark_text(txt, table);
      }
      write_benchmark_text(std::cout, table);
      if (table.interrupted) return 130;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
