#include <han/bench.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

using namespace han;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.dataset.kind = DatasetKind::fem_grid;
  cfg.dataset.m = 40;
  cfg.dataset.n = 200;
  cfg.kernel = KernelSpec(KernelKind::log_dist);
  cfg.methods = {Method::nys_b, Method::han_a};
  cfg.sample_sizes = {5, 10};
  cfg.repeats = 2;
  cfg.seed = 7;
  cfg.han.tau = 1e-10;
  return cfg;
}

}  // namespace

TEST_CASE("csv emit/parse round-trip preserves every row", "[bench]") {
  auto table = run_experiment(small_config());
  REQUIRE_FALSE(table.empty());
  std::ostringstream out;
  emit_csv(table, out);
  std::istringstream in(out.str());
  auto back = parse_csv(in);
  REQUIRE(back.size() == table.size());
  for (std::size_t i = 0; i < table.size(); ++i) CHECK(back[i] == table[i]);
}

TEST_CASE("experiment output is byte-deterministic per seed", "[bench]") {
  auto cfg = small_config();
  std::ostringstream a, b;
  emit_csv(run_experiment(cfg), a);
  emit_csv(run_experiment(cfg), b);
  CHECK(a.str() == b.str());
  cfg.seed = 8;
  std::ostringstream c;
  emit_csv(run_experiment(cfg), c);
  CHECK(a.str() != c.str());
}

TEST_CASE("timing mode records wall-clock and is the only nondeterminism", "[bench]") {
  auto cfg = small_config();
  cfg.record_timing = true;
  auto table = run_experiment(cfg);
  bool any_timed = false;
  for (const auto& r : table)
    if (r.method != "svd" && r.elapsed_ns > 0) any_timed = true;
  CHECK(any_timed);
}

TEST_CASE("reported errors are recomputable from (method, seed, config)", "[bench]") {
  auto cfg = small_config();
  auto table = run_experiment(cfg);
  // pick the nys-b row at repeat 1, S=10 and recompute it from scratch
  auto it = std::find_if(table.begin(), table.end(), [](const ResultRow& r) {
    return r.method == "nys-b" && r.repeat == 1 && r.total_samples == 10;
  });
  REQUIRE(it != table.end());
  auto [x, y] = build_points(cfg.dataset);
  auto src = MatrixSource<double>::kernel(cfg.kernel, x, y);
  Matrix<double> a = src.materialize();
  std::mt19937_64 rng(it->seed);
  auto ap = nys_basic(src, 10, rng, cfg.han.srr.rank_tol);
  ResidualOptions opt;
  const double rel = residual_norms_dense(a, ap, detail::dense_norm2(a, opt), a.norm())
                         .rel_spectral;
  CHECK(std::abs(rel - it->rel_err_spectral) <= 1e-12 * std::max(1.0, rel));
}

TEST_CASE("trivial experiment: rank-1 dataset single row", "[bench]") {
  ExperimentConfig cfg;
  cfg.dataset.kind = DatasetKind::fem_grid;
  cfg.dataset.m = 1;
  cfg.dataset.n = 30;
  cfg.kernel = KernelSpec(KernelKind::exp_dist);
  cfg.methods = {Method::nys_b};
  cfg.sample_sizes = {1};
  cfg.repeats = 1;
  auto table = run_experiment(cfg);
  // one nys-b row (+ svd reference rows)
  REQUIRE(table[0].method == "nys-b");
  CHECK(table[0].rel_err_spectral <= 1e-12);
}

TEST_CASE("config validation fails before compute", "[bench]") {
  ExperimentConfig cfg = small_config();
  cfg.methods.clear();
  CHECK_THROWS_AS(run_experiment(cfg), invalid_input);

  cfg = small_config();
  cfg.sample_sizes = {5000};  // larger than the 40x200 instance
  CHECK_THROWS_AS(run_experiment(cfg), invalid_input);

  cfg = small_config();
  cfg.repeats = 0;
  CHECK_THROWS_AS(run_experiment(cfg), invalid_input);

  // difference kernel on 3D points cannot be evaluated
  cfg = small_config();
  cfg.dataset.kind = DatasetKind::set3d;
  cfg.dataset.m = 20;
  cfg.dataset.n = 100;
  cfg.kernel = KernelSpec(KernelKind::inv_diff);
  CHECK_THROWS_AS(run_experiment(cfg), invalid_input);
}

TEST_CASE("complex-plane dispatch: 2D difference kernel runs complex", "[bench]") {
  ExperimentConfig cfg;
  cfg.dataset.kind = DatasetKind::flower;
  cfg.dataset.m = 30;
  cfg.dataset.n = 150;
  cfg.kernel = KernelSpec(KernelKind::inv_diff);
  cfg.methods = {Method::han_a};
  cfg.repeats = 1;
  cfg.han.tau = 1e-10;
  auto table = run_experiment(cfg);
  REQUIRE_FALSE(table.empty());
  const auto& last = *std::find_if(table.rbegin(), table.rend(), [](const ResultRow& r) {
    return r.method == "han-a";
  });
  CHECK(last.rel_err_spectral <= 1e-8);
}

TEST_CASE("han rows carry the per-iteration trace", "[bench]") {
  ExperimentConfig cfg = small_config();
  cfg.methods = {Method::han_b};
  cfg.repeats = 1;
  auto table = run_experiment(cfg);
  std::vector<const ResultRow*> rows;
  for (const auto& r : table)
    if (r.method == "han-b") rows.push_back(&r);
  REQUIRE(rows.size() >= 2);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    CHECK(rows[t]->iteration == Index(t + 1));
    CHECK(rows[t]->total_samples == Index(t + 1) * cfg.han.b);
    if (t + 1 < rows.size()) CHECK(std::isnan(rows[t]->rel_err_spectral));
  }
  CHECK_FALSE(std::isnan(rows.back()->rel_err_spectral));
}

TEST_CASE("plot mode scores every iteration and writes an svg", "[bench]") {
  ExperimentConfig cfg = small_config();
  cfg.methods = {Method::han_b, Method::nys_p};
  cfg.repeats = 2;
  cfg.plot = true;
  auto table = run_experiment(cfg);
  bool has_svd = false;
  for (const auto& r : table) {
    if (r.method == "svd") has_svd = true;
    if (r.method == "han-b") CHECK_FALSE(std::isnan(r.rel_err_spectral));
  }
  CHECK(has_svd);

  const auto path = (std::filesystem::temp_directory_path() / "han_plot_test.svg").string();
  emit_svg_plot(table, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content.find("<svg") != std::string::npos);
  CHECK(content.find("han-b") != std::string::npos);
  CHECK(content.find("svd") != std::string::npos);
  CHECK(std::count(content.begin(), content.end(), '\n') > 5);
  std::filesystem::remove(path);
}

TEST_CASE("svd reference rows track the oracle", "[bench]") {
  ExperimentConfig cfg = small_config();
  cfg.methods = {Method::nys_p};
  cfg.repeats = 1;
  auto table = run_experiment(cfg);
  auto [x, y] = build_points(cfg.dataset);
  auto src = MatrixSource<double>::kernel(cfg.kernel, x, y);
  auto sv = svd_values(src.materialize());
  for (const auto& r : table)
    if (r.method == "svd" && r.iteration < 5)
      CHECK(r.rel_err_spectral == Catch::Approx(sv(r.iteration) / sv(0)));
}
