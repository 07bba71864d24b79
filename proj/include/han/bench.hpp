#ifndef HAN_BENCH_HPP
#define HAN_BENCH_HPP

#include <han/datasets.hpp>
#include <han/han_schemes.hpp>
#include <han/nystrom.hpp>
#include <han/residual.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace han {

enum class Method { nys_b, nys_p, nys_r, han_b, han_u, han_u_eff, han_a };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::nys_b: return "nys-b";
    case Method::nys_p: return "nys-p";
    case Method::nys_r: return "nys-r";
    case Method::han_b: return "han-b";
    case Method::han_u: return "han-u";
    case Method::han_u_eff: return "han-u-eff";
    case Method::han_a: return "han-a";
  }
  return "?";
}

inline std::optional<Method> parse_method(const std::string& s) {
  const std::pair<const char*, Method> table[] = {
      {"nys-b", Method::nys_b},       {"nys-p", Method::nys_p},
      {"nys-r", Method::nys_r},       {"han-b", Method::han_b},
      {"han-u", Method::han_u},       {"han-u-eff", Method::han_u_eff},
      {"han-a", Method::han_a},
  };
  for (auto& [n, m] : table)
    if (s == n) return m;
  return std::nullopt;
}

inline bool is_han_method(Method m) {
  return m == Method::han_b || m == Method::han_u || m == Method::han_u_eff ||
         m == Method::han_a;
}

struct ExperimentConfig {
  DatasetSpec dataset;
  KernelSpec kernel;
  std::vector<Method> methods;
  std::vector<Index> sample_sizes;  // baseline sample sizes
  HanConfig han;
  Index repeats = 100;
  std::uint64_t seed = 0;
  std::string out_path;  // empty: stdout
  bool plot = false;
  std::string plot_path;               // default: out_path + ".svg"
  std::size_t oracle_cap = std::size_t(1) << 24;  // entry count for the dense reference
  Index svd_curve_max_min_dim = 512;   // dense-SVD tractability guard
  Index refine_steps = 10;             // alternating rounds in nys-r
  /// Record wall-clock in elapsed_ns. Off by default so a fixed seed
  /// reproduces the CSV byte for byte.
  bool record_timing = false;

  void validate() const {
    if (methods.empty()) throw invalid_input("experiment: no methods selected");
    if (repeats < 1) throw invalid_input("experiment: repeats must be >= 1");
    han.validate();
    const bool needs_sizes =
        std::any_of(methods.begin(), methods.end(), [](Method m) { return !is_han_method(m); });
    if (needs_sizes && sample_sizes.empty())
      throw invalid_input("experiment: baseline methods need --samples");
    for (Index s : sample_sizes)
      if (s < 1) throw invalid_input("experiment: sample sizes must be positive");
  }
};

struct ResultRow {
  std::string method;
  std::string dataset;
  std::string kernel;
  Index repeat = 0;
  std::uint64_t seed = 0;
  Index iteration = 0;
  Index total_samples = 0;
  Index rank_i = 0;
  Index rank_j = 0;
  double theta = std::numeric_limits<double>::quiet_NaN();
  double phi = std::numeric_limits<double>::quiet_NaN();
  double rel_err_spectral = std::numeric_limits<double>::quiet_NaN();
  double rel_err_frob = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t kernel_evals = 0;
  std::uint64_t elapsed_ns = 0;
};

inline bool same_value(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

inline bool operator==(const ResultRow& a, const ResultRow& b) {
  return a.method == b.method && a.dataset == b.dataset && a.kernel == b.kernel &&
         a.repeat == b.repeat && a.seed == b.seed && a.iteration == b.iteration &&
         a.total_samples == b.total_samples && a.rank_i == b.rank_i &&
         a.rank_j == b.rank_j && same_value(a.theta, b.theta) &&
         same_value(a.phi, b.phi) &&
         same_value(a.rel_err_spectral, b.rel_err_spectral) &&
         same_value(a.rel_err_frob, b.rel_err_frob) &&
         a.kernel_evals == b.kernel_evals && a.elapsed_ns == b.elapsed_ns;
}

using ResultTable = std::vector<ResultRow>;

inline constexpr const char* kCsvHeader =
    "method,dataset,kernel,repeat,seed,iteration,total_samples,rank_I,rank_J,"
    "theta,phi,rel_err_spectral,rel_err_frob,kernel_evals,elapsed_ns";

namespace detail {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

}  // namespace detail

inline void emit_csv(const ResultTable& table, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (const ResultRow& r : table) {
    out << r.method << ',' << r.dataset << ',' << r.kernel << ',' << r.repeat << ','
        << r.seed << ',' << r.iteration << ',' << r.total_samples << ',' << r.rank_i
        << ',' << r.rank_j << ',' << detail::format_double(r.theta) << ','
        << detail::format_double(r.phi) << ','
        << detail::format_double(r.rel_err_spectral) << ','
        << detail::format_double(r.rel_err_frob) << ',' << r.kernel_evals << ','
        << r.elapsed_ns << "\n";
  }
}

inline void emit_csv(const ResultTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
  if (!out) throw invalid_input("emit_csv: cannot open " + path);
  emit_csv(table, out);
}

inline ResultTable parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw invalid_input("parse_csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw invalid_input("parse_csv: unexpected header");
  ResultTable table;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 15) throw invalid_input("parse_csv: bad column count");
    ResultRow r;
    std::size_t c = 0;
    r.method = cells[c++];
    r.dataset = cells[c++];
    r.kernel = cells[c++];
    r.repeat = std::stoll(cells[c++]);
    r.seed = std::stoull(cells[c++]);
    r.iteration = std::stoll(cells[c++]);
    r.total_samples = std::stoll(cells[c++]);
    r.rank_i = std::stoll(cells[c++]);
    r.rank_j = std::stoll(cells[c++]);
    r.theta = std::stod(cells[c++]);
    r.phi = std::stod(cells[c++]);
    r.rel_err_spectral = std::stod(cells[c++]);
    r.rel_err_frob = std::stod(cells[c++]);
    r.kernel_evals = std::stoull(cells[c++]);
    r.elapsed_ns = std::stoull(cells[c++]);
    table.push_back(std::move(r));
  }
  return table;
}

inline ResultTable parse_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("parse_csv: cannot open " + path);
  return parse_csv(in);
}

namespace detail {

// Reference data shared by all repeats of an experiment.
template <class Scalar>
struct DenseReference {
  Matrix<Scalar> a;
  double norm2 = 0.0;
  double norm_f = 0.0;
};

template <class Scalar>
std::optional<DenseReference<Scalar>> make_reference(const MatrixSource<Scalar>& src,
                                                     std::size_t cap) {
  const std::size_t entries =
      static_cast<std::size_t>(src.rows()) * static_cast<std::size_t>(src.cols());
  if (entries > cap) return std::nullopt;
  DenseReference<Scalar> ref;
  ref.a = src.materialize(cap);
  ResidualOptions opt;
  ref.norm2 = dense_norm2(ref.a, opt);
  ref.norm_f = ref.a.norm();
  return ref;
}

template <class Scalar>
std::pair<double, double> reference_errors(
    const std::optional<DenseReference<Scalar>>& ref, const LowRankApprox<Scalar>& ap) {
  if (!ref)
    return {std::numeric_limits<double>::quiet_NaN(),
            std::numeric_limits<double>::quiet_NaN()};
  auto rn = residual_norms_dense(ref->a, ap, ref->norm2, ref->norm_f);
  return {rn.rel_spectral, rn.rel_frob};
}

template <class Scalar>
HanRun<Scalar> run_han_method(const MatrixSource<Scalar>& src, Method m,
                              const HanConfig& cfg) {
  switch (m) {
    case Method::han_b: return han_b(src, cfg);
    case Method::han_u: return han_u(src, cfg);
    case Method::han_u_eff: return han_u(src, cfg, true);
    case Method::han_a: return han_a(src, cfg);
    default: throw invalid_input("run_han_method: not a progressive scheme");
  }
}

template <class Scalar>
ResultTable run_experiment_typed(const ExperimentConfig& cfg,
                                 const MatrixSource<Scalar>& src) {
  for (Index s : cfg.sample_sizes)
    if (s > std::min(src.rows(), src.cols()))
      throw invalid_input("experiment: sample size exceeds matrix dimensions");
  const auto ref = make_reference(src, cfg.oracle_cap);
  if (!ref)
    std::cerr << "note: instance exceeds the oracle cap; error columns omitted\n";
  ResultTable table;

  for (Method m : cfg.methods) {
    for (Index rep = 0; rep < cfg.repeats; ++rep) {
      const std::uint64_t run_seed = cfg.seed + static_cast<std::uint64_t>(rep);
      ResultRow base;
      base.method = method_name(m);
      base.dataset = cfg.dataset.name();
      base.kernel = cfg.kernel.name();
      base.repeat = rep;
      base.seed = run_seed;

      if (is_han_method(m)) {
        HanConfig hc = cfg.han;
        hc.seed = run_seed;
        const std::uint64_t evals0 = src.eval_count();
        auto run = run_han_method(src, m, hc);
        const std::uint64_t run_evals = src.eval_count() - evals0;
        const auto final_errors = reference_errors(ref, run.approx);
        for (Index t = 0; t < run.trace.iterations(); ++t) {
          const auto& rec = run.trace.records[static_cast<std::size_t>(t)];
          ResultRow row = base;
          row.iteration = rec.iteration;
          row.total_samples = rec.total_samples;
          row.rank_i = rec.rank_rows;
          row.rank_j = rec.rank_cols;
          row.theta = rec.theta;
          row.phi = rec.phi;
          row.kernel_evals = rec.kernel_evals;
          row.elapsed_ns = cfg.record_timing ? rec.elapsed_ns : 0;
          const bool last = t + 1 == run.trace.iterations();
          if (last) {
            row.rel_err_spectral = final_errors.first;
            row.rel_err_frob = final_errors.second;
            row.kernel_evals = run_evals;  // include output assembly
          } else if (cfg.plot && ref) {
            // Reproduce the prefix of the run to score this iteration
            // (sampling is seed-deterministic, so capping the sample count
            // replays the same draws).
            HanConfig hp = hc;
            hp.max_samples = rec.total_samples;
            auto part = run_han_method(src, m, hp);
            const auto errs = reference_errors(ref, part.approx);
            row.rel_err_spectral = errs.first;
            row.rel_err_frob = errs.second;
          }
          table.push_back(std::move(row));
        }
      } else {
        for (Index s : cfg.sample_sizes) {
          std::mt19937_64 rng(run_seed);
          const std::uint64_t evals0 = src.eval_count();
          const auto t0 = std::chrono::steady_clock::now();
          LowRankApprox<Scalar> ap = [&] {
            switch (m) {
              case Method::nys_b: return nys_basic(src, s, rng, cfg.han.srr.rank_tol);
              case Method::nys_p: return nys_pivot(src, s, cfg.han.srr, rng);
              default:
                return nys_refine(src, s, cfg.refine_steps, cfg.han.srr, rng).approx;
            }
          }();
          ResultRow row = base;
          row.iteration = 0;
          row.total_samples = s;
          row.rank_i = ap.row_set().size();
          row.rank_j = ap.col_set().size();
          row.kernel_evals = src.eval_count() - evals0;
          row.elapsed_ns =
              cfg.record_timing
                  ? static_cast<std::uint64_t>(
                        std::chrono::duration_cast<std::chrono::nanoseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count())
                  : 0;
          const auto errs = reference_errors(ref, ap);
          row.rel_err_spectral = errs.first;
          row.rel_err_frob = errs.second;
          table.push_back(std::move(row));
        }
      }
    }
  }

  // SVD reference curve, when tractable.
  if (ref) {
    if (std::min(src.rows(), src.cols()) <= cfg.svd_curve_max_min_dim) {
      Eigen::VectorXd sv = svd_values(ref->a, std::min(src.rows(), src.cols()));
      const Index kmax = std::min<Index>(sv.size() - 1, 400);
      for (Index k = 1; k <= kmax; ++k) {
        const double ratio = sv(k) / sv(0);
        ResultRow row;
        row.method = "svd";
        row.dataset = cfg.dataset.name();
        row.kernel = cfg.kernel.name();
        row.repeat = 0;
        row.seed = cfg.seed;
        row.iteration = k;
        row.total_samples = k;
        row.rank_i = k;
        row.rank_j = k;
        row.rel_err_spectral = ratio;
        table.push_back(std::move(row));
        if (ratio < 1e-16) break;
      }
    } else if (cfg.plot) {
      std::cerr << "note: svd reference curve omitted (matrix too large for the "
                   "dense oracle)\n";
    }
  }

  // Deterministic order regardless of execution interleaving.
  std::stable_sort(table.begin(), table.end(), [&](const ResultRow& a, const ResultRow& b) {
    if (a.method != b.method) {
      auto pos = [&](const std::string& name) {
        for (std::size_t i = 0; i < cfg.methods.size(); ++i)
          if (method_name(cfg.methods[i]) == name) return i;
        return cfg.methods.size();  // svd rows last
      };
      const auto pa = pos(a.method), pb = pos(b.method);
      if (pa != pb) return pa < pb;
      return a.method < b.method;
    }
    if (a.repeat != b.repeat) return a.repeat < b.repeat;
    if (a.total_samples != b.total_samples) return a.total_samples < b.total_samples;
    return a.iteration < b.iteration;
  });
  return table;
}

}  // namespace detail

/// Run the configured experiment: one row per (method, sample size or
/// iteration, repeat), deterministic for a fixed seed.
inline ResultTable run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.dataset.kind == DatasetKind::circulant_corner) {
    DatasetSpec d = cfg.dataset;
    auto src = gen_circulant_corner(d.n > 0 ? d.n : 512, d.symbol);
    return detail::run_experiment_typed<Complex>(cfg, src);
  }
  auto [x, y] = build_points(cfg.dataset);
  const bool complex_plane = x.dim() == 2 && (cfg.kernel.kind == KernelKind::inv_diff ||
                                              cfg.kernel.kind == KernelKind::inv_diff_sq);
  if (cfg.kernel.complex_valued(complex_plane)) {
    auto src = MatrixSource<Complex>::kernel(cfg.kernel, std::move(x), std::move(y),
                                             complex_plane);
    return detail::run_experiment_typed<Complex>(cfg, src);
  }
  auto src = MatrixSource<double>::kernel(cfg.kernel, std::move(x), std::move(y), false);
  return detail::run_experiment_typed<double>(cfg, src);
}

//
// Single-panel SVG: log-scale error against the total sample size, one
// polyline per method (median across repeats) plus the svd curve.
//

inline void emit_svg_plot(const ResultTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("emit_svg_plot: cannot open " + path);

  // method -> S -> median rel_err_spectral
  std::map<std::string, std::map<Index, std::vector<double>>> series;
  for (const ResultRow& r : table)
    if (!std::isnan(r.rel_err_spectral) && r.rel_err_spectral > 0)
      series[r.method][r.total_samples].push_back(r.rel_err_spectral);

  const double width = 760, height = 520;
  const double ml = 70, mr = 170, mt = 30, mb = 55;
  double xmax = 1, ymin_log = 0, ymax_log = -320;
  for (auto& [name, pts] : series)
    for (auto& [s, errs] : pts) {
      xmax = std::max(xmax, double(s));
      for (double e : errs) {
        ymin_log = std::min(ymin_log, std::log10(e));
        ymax_log = std::max(ymax_log, std::log10(e));
      }
    }
  ymin_log = std::floor(ymin_log) - 0.5;
  ymax_log = std::ceil(std::max(ymax_log, ymin_log + 1)) + 0.5;

  auto xpix = [&](double s) { return ml + (width - ml - mr) * s / xmax; };
  auto ypix = [&](double e) {
    const double t = (std::log10(e) - ymin_log) / (ymax_log - ymin_log);
    return height - mb - (height - mt - mb) * t;
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << width - ml - mr
      << "\" height=\"" << height - mt - mb
      << "\" fill=\"none\" stroke=\"#444\"/>\n";

  // y grid at integer powers of ten
  for (int p = int(std::ceil(ymin_log)); p <= int(std::floor(ymax_log)); ++p) {
    const double y = ypix(std::pow(10.0, p));
    out << "<line x1=\"" << ml << "\" y1=\"" << y << "\" x2=\"" << width - mr
        << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" font-size=\"11\" text-anchor=\"end\">1e" << p << "</text>\n";
  }
  for (int t = 0; t <= 5; ++t) {
    const double s = xmax * t / 5.0;
    out << "<text x=\"" << xpix(s) << "\" y=\"" << height - mb + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << Index(s) << "</text>\n";
  }
  out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
      << "\" font-size=\"12\" text-anchor=\"middle\">total samples S (rank for "
         "svd)</text>\n"
      << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
      << "\" font-size=\"12\" transform=\"rotate(-90 16 " << (mt + height - mb) / 2
      << ")\" text-anchor=\"middle\">relative spectral error</text>\n";

  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                           "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  int color = 0, legend_row = 0;
  for (auto& [name, pts] : series) {
    const char* stroke = name == "svd" ? "#000000" : palette[color++ % 8];
    const char* dash = name == "svd" ? " stroke-dasharray=\"5,3\"" : "";
    out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.6\""
        << dash << " points=\"";
    for (auto& [s, errs] : pts) {
      std::vector<double> v = errs;
      std::sort(v.begin(), v.end());
      const double med = v[v.size() / 2];
      out << xpix(double(s)) << ',' << ypix(med) << ' ';
    }
    out << "\"/>\n";
    const double ly = mt + 14 + 18 * legend_row++;
    out << "<line x1=\"" << width - mr + 12 << "\" y1=\"" << ly << "\" x2=\""
        << width - mr + 36 << "\" y2=\"" << ly << "\" stroke=\"" << stroke
        << "\" stroke-width=\"2\"" << dash << "/>\n"
        << "<text x=\"" << width - mr + 42 << "\" y=\"" << ly + 4
        << "\" font-size=\"12\">" << name << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace han

#endif  // HAN_BENCH_HPP
