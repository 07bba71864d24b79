// Benchmark runner: low-rank approximation schemes on kernel-matrix
// instances, with CSV output and an optional SVG error plot.

#include <han/bench.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

int run(int argc, char** argv) {
  CLI::App app{
      "Benchmark progressive skeleton (HAN) schemes and Nystrom baselines on "
      "kernel matrices"};
  app.set_config("--config")->description("flat key=value file; flags override");
  app.allow_config_extras(false);

  std::string dataset = "flower";
  std::string kernel = "invdiff";
  std::vector<std::string> methods{"han-a"};
  std::vector<han::Index> samples;
  han::ExperimentConfig cfg;
  std::string symbol = "linear";
  std::uint64_t dataset_seed = 0;
  bool plot = false;

  app.add_option("--dataset", dataset,
                 "flower | fem | airfoil | set3d | circulant | csv:PATH")
      ->capture_default_str();
  app.add_option("--kernel", kernel, "kernel name, e.g. invdiff or gaussian:16")
      ->capture_default_str();
  app.add_option("--method", methods,
                 "nys-b | nys-p | nys-r | han-b | han-u | han-u-eff | han-a "
                 "(repeatable)")
      ->capture_default_str();
  app.add_option("--samples", samples, "baseline sample sizes, comma separated")
      ->delimiter(',');
  app.add_option("--stepsize", cfg.han.b, "progressive sampling stepsize")
      ->capture_default_str();
  app.add_option("--tau", cfg.han.tau, "relative-error stopping threshold")
      ->capture_default_str();
  app.add_option("--max-samples", cfg.han.max_samples,
                 "cap on the total progressive sample size (0: none)")
      ->capture_default_str();
  app.add_option("--max-rank", cfg.han.max_rank, "target rank (0: none)")
      ->capture_default_str();
  app.add_option("--repeats", cfg.repeats, "independent repeats per method")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "base seed; repeat r runs at seed+r")
      ->capture_default_str();
  app.add_option("--out", cfg.out_path, "CSV output path (default: stdout)");
  app.add_flag("--plot", plot, "also write an SVG error plot next to the CSV");
  app.add_flag("--timing", cfg.record_timing,
               "record wall-clock in elapsed_ns (CSV no longer byte-reproducible)");
  app.add_option("--oracle-cap", cfg.oracle_cap,
                 "entry-count cap for the dense error reference "
                 "(HAN_ORACLE_CAP overrides the default)");
  app.add_option("--m", cfg.dataset.m, "x point count (0: dataset default)");
  app.add_option("--n", cfg.dataset.n,
                 "y point count, or circulant corner size (0: default)");
  app.add_option("--symbol", symbol, "circulant symbol: one | wave | linear")
      ->capture_default_str();
  app.add_option("--jitter", cfg.dataset.jitter, "set3d jitter scale in [0,1]")
      ->capture_default_str();
  app.add_option("--dataset-seed", dataset_seed, "seed for the point generator")
      ->capture_default_str();
  app.add_option("--refine-steps", cfg.refine_steps, "alternating rounds in nys-r")
      ->capture_default_str();
  app.add_option("--csv-head", cfg.dataset.csv_head_rows,
                 "x rows taken from the head of an ingested CSV")
      ->capture_default_str();

  if (const char* env = std::getenv("HAN_ORACLE_CAP")) {
    try {
      cfg.oracle_cap = std::stoull(env);
    } catch (...) {
      std::cerr << "error: HAN_ORACLE_CAP is not a number\n";
      return 1;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (dataset == "flower") {
      cfg.dataset.kind = han::DatasetKind::flower;
    } else if (dataset == "fem") {
      cfg.dataset.kind = han::DatasetKind::fem_grid;
    } else if (dataset == "airfoil") {
      cfg.dataset.kind = han::DatasetKind::airfoil_like;
    } else if (dataset == "set3d") {
      cfg.dataset.kind = han::DatasetKind::set3d;
    } else if (dataset == "circulant") {
      cfg.dataset.kind = han::DatasetKind::circulant_corner;
    } else if (dataset.rfind("csv:", 0) == 0) {
      cfg.dataset.kind = han::DatasetKind::csv_file;
      cfg.dataset.csv_path = dataset.substr(4);
    } else {
      std::cerr << "error: unknown dataset '" << dataset << "'\n";
      return 1;
    }
    cfg.dataset.seed = dataset_seed;

    auto sym = han::parse_symbol(symbol);
    if (!sym) {
      std::cerr << "error: unknown circulant symbol '" << symbol << "'\n";
      return 1;
    }
    cfg.dataset.symbol = *sym;

    auto ks = han::KernelSpec::parse(kernel);
    if (!ks) {
      std::cerr << "error: unknown kernel '" << kernel << "'\n";
      return 1;
    }
    cfg.kernel = *ks;

    cfg.methods.clear();
    for (const std::string& name : methods) {
      auto m = han::parse_method(name);
      if (!m) {
        std::cerr << "error: unknown method '" << name << "'\n";
        return 1;
      }
      cfg.methods.push_back(*m);
    }
    cfg.sample_sizes = samples;
    cfg.plot = plot;

    cfg.validate();
  } catch (const han::invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    han::ResultTable table = han::run_experiment(cfg);
    if (cfg.out_path.empty()) {
      han::emit_csv(table, std::cout);
    } else {
      han::emit_csv(table, cfg.out_path);
      std::cerr << "wrote " << table.size() << " rows to " << cfg.out_path << "\n";
    }
    if (cfg.plot) {
      const std::string svg =
          cfg.plot_path.empty()
              ? (cfg.out_path.empty() ? std::string("han-bench.svg")
                                      : cfg.out_path + ".svg")
              : cfg.plot_path;
      han::emit_svg_plot(table, svg);
      std::cerr << "wrote plot to " << svg << "\n";
    }
  } catch (const han::invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const han::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
