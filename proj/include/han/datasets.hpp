#ifndef HAN_DATASETS_HPP
#define HAN_DATASETS_HPP

#include <han/kernels.hpp>
#include <han/matrix_source.hpp>
#include <han/types.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

namespace han {

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

}  // namespace detail

//
// Synthetic point-set generators at configurable scale. Geometry is chosen
// to preserve the character of the target experiments: two well-separated
// sets, a short-and-wide interaction matrix, nonuniform layouts.
//

/// Closed petal curve r(t) = 1 + 0.3 cos(8 t), with the x set on a 25-degree
/// arc ("corner") and the y set covering the rest of the curve at a small
/// angular margin, so the cross distance stays positive.
inline std::pair<PointSet, PointSet> gen_flower(Index m = 1018, Index n = 13965,
                                                std::uint64_t seed = 0) {
  if (m < 1 || n < 1) throw invalid_input("gen_flower: sizes must be positive");
  std::mt19937_64 rng(seed);
  const double two_pi = 2.0 * std::numbers::pi;
  const double t0 = detail::uniform01(rng) * two_pi;
  const double arc = 25.0 / 360.0 * two_pi;
  const double margin = arc / static_cast<double>(m);  // one x-spacing gap
  auto curve = [&](double t) {
    const double r = 1.0 + 0.3 * std::cos(8.0 * t);
    return std::pair<double, double>{r * std::cos(t), r * std::sin(t)};
  };
  Eigen::MatrixXd x(m, 2), y(n, 2);
  for (Index i = 0; i < m; ++i) {
    const auto [px, py] = curve(t0 + arc * (static_cast<double>(i) + 0.5) /
                                         static_cast<double>(m));
    x(i, 0) = px;
    x(i, 1) = py;
  }
  const double rest = two_pi - arc - 2.0 * margin;
  for (Index j = 0; j < n; ++j) {
    const auto [px, py] = curve(t0 + arc + margin +
                                rest * (static_cast<double>(j) + 0.5) /
                                    static_cast<double>(n));
    y(j, 0) = px;
    y(j, 1) = py;
  }
  return {PointSet(std::move(x)), PointSet(std::move(y))};
}

/// Near-uniform jittered grid; the x set is the disk of points nearest the
/// grid centre, surrounded by the y points.
inline std::pair<PointSet, PointSet> gen_fem_grid(Index m = 821, Index n = 4125,
                                                  std::uint64_t seed = 0) {
  if (m < 1 || n < 1) throw invalid_input("gen_fem_grid: sizes must be positive");
  std::mt19937_64 rng(seed);
  const Index total = m + n;
  const Index g = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(total))));
  const double h = 1.0 / static_cast<double>(g);
  struct P {
    double x, y, d2;
    Index id;
  };
  std::vector<P> pts;
  pts.reserve(static_cast<std::size_t>(g) * static_cast<std::size_t>(g));
  for (Index i = 0; i < g; ++i)
    for (Index j = 0; j < g; ++j) {
      const double px = (static_cast<double>(i) + 0.5) * h +
                        (detail::uniform01(rng) - 0.5) * 0.4 * h;
      const double py = (static_cast<double>(j) + 0.5) * h +
                        (detail::uniform01(rng) - 0.5) * 0.4 * h;
      const double dx = px - 0.5, dy = py - 0.5;
      pts.push_back({px, py, dx * dx + dy * dy, i * g + j});
    }
  std::stable_sort(pts.begin(), pts.end(), [](const P& a, const P& b) {
    return a.d2 != b.d2 ? a.d2 < b.d2 : a.id < b.id;
  });
  Eigen::MatrixXd x(m, 2), y(n, 2);
  for (Index i = 0; i < m; ++i) {
    x(i, 0) = pts[static_cast<std::size_t>(i)].x;
    x(i, 1) = pts[static_cast<std::size_t>(i)].y;
  }
  for (Index j = 0; j < n; ++j) {
    y(j, 0) = pts[static_cast<std::size_t>(m + j)].x;
    y(j, 1) = pts[static_cast<std::size_t>(m + j)].y;
  }
  return {PointSet(std::move(x)), PointSet(std::move(y))};
}

/// Unstructured 2D cloud: y scattered over an annulus plus a wake strip,
/// x a roughly rectangular patch inside the wake, kept clear of y.
inline std::pair<PointSet, PointSet> gen_airfoil_like(Index m = 617, Index n = 11078,
                                                      std::uint64_t seed = 0) {
  if (m < 1 || n < 1) throw invalid_input("gen_airfoil_like: sizes must be positive");
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd x(m, 2), y(n, 2);
  // x patch
  const double x0 = 2.5, x1 = 4.5, yhw = 0.2;
  for (Index i = 0; i < m; ++i) {
    x(i, 0) = x0 + (x1 - x0) * detail::uniform01(rng);
    x(i, 1) = -yhw + 2.0 * yhw * detail::uniform01(rng);
  }
  const double clear = 0.05;  // margin around the x patch
  const Index n_annulus = (6 * n) / 10;
  for (Index j = 0; j < n; ++j) {
    if (j < n_annulus) {
      const double t = 2.0 * std::numbers::pi * detail::uniform01(rng);
      const double r = 1.0 + detail::uniform01(rng);
      y(j, 0) = r * std::cos(t);
      y(j, 1) = r * std::sin(t);
    } else {
      // wake strip, resample anything that lands too close to the x patch
      double px, py;
      do {
        px = 2.0 + 4.5 * detail::uniform01(rng);
        py = -0.6 + 1.2 * detail::uniform01(rng);
      } while (px > x0 - clear && px < x1 + clear && std::abs(py) < yhw + clear);
      y(j, 0) = px;
      y(j, 1) = py;
    }
  }
  return {PointSet(std::move(x)), PointSet(std::move(y))};
}

/// 3D points: x a structured grid block, y a surrounding jittered grid
/// cloud. `jitter` scales the perturbation within [-h/2, h/2]^3.
inline std::pair<PointSet, PointSet> gen_set3d(Index m = 717, Index n = 6650,
                                               std::uint64_t seed = 0,
                                               double jitter = 1.0) {
  if (m < 1 || n < 1) throw invalid_input("gen_set3d: sizes must be positive");
  if (!(jitter >= 0.0 && jitter <= 1.0))
    throw invalid_input("gen_set3d: jitter must be in [0,1]");
  std::mt19937_64 rng(seed);
  // x block: the first m sites of a cube lattice over [0,1]^3
  const Index gx = static_cast<Index>(
      std::ceil(std::cbrt(static_cast<double>(m))));
  Eigen::MatrixXd x(m, 3);
  {
    Index c = 0;
    for (Index i = 0; i < gx && c < m; ++i)
      for (Index j = 0; j < gx && c < m; ++j)
        for (Index k = 0; k < gx && c < m; ++k, ++c) {
          x(c, 0) = static_cast<double>(i) / static_cast<double>(gx);
          x(c, 1) = static_cast<double>(j) / static_cast<double>(gx);
          x(c, 2) = static_cast<double>(k) / static_cast<double>(gx);
        }
  }
  // y cloud: jittered lattice over [-2,3]^3 with the x region carved out,
  // nearest sites first
  const Index gy = static_cast<Index>(
      std::ceil(std::cbrt(static_cast<double>(4 * n))));
  const double lo = -2.0, hi = 3.0;
  const double h = (hi - lo) / static_cast<double>(gy);
  struct P {
    double x, y, z, d2;
    Index id;
  };
  std::vector<P> cand;
  cand.reserve(static_cast<std::size_t>(gy) * static_cast<std::size_t>(gy) *
               static_cast<std::size_t>(gy));
  for (Index i = 0; i < gy; ++i)
    for (Index j = 0; j < gy; ++j)
      for (Index k = 0; k < gy; ++k) {
        double p[3] = {lo + (static_cast<double>(i) + 0.5) * h,
                       lo + (static_cast<double>(j) + 0.5) * h,
                       lo + (static_cast<double>(k) + 0.5) * h};
        for (double& v : p)
          v += (detail::uniform01(rng) - 0.5) * h * jitter * 0.98;
        // keep clear of the x block [0,1]^3 by at least ~h
        if (p[0] > -h && p[0] < 1.0 + h && p[1] > -h && p[1] < 1.0 + h &&
            p[2] > -h && p[2] < 1.0 + h)
          continue;
        const double dx = p[0] - 0.5, dy = p[1] - 0.5, dz = p[2] - 0.5;
        cand.push_back({p[0], p[1], p[2], dx * dx + dy * dy + dz * dz,
                        (i * gy + j) * gy + k});
      }
  if (static_cast<Index>(cand.size()) < n)
    throw invalid_input("gen_set3d: candidate lattice too small");
  std::stable_sort(cand.begin(), cand.end(), [](const P& a, const P& b) {
    return a.d2 != b.d2 ? a.d2 < b.d2 : a.id < b.id;
  });
  Eigen::MatrixXd y(n, 3);
  for (Index j = 0; j < n; ++j) {
    y(j, 0) = cand[static_cast<std::size_t>(j)].x;
    y(j, 1) = cand[static_cast<std::size_t>(j)].y;
    y(j, 2) = cand[static_cast<std::size_t>(j)].z;
  }
  return {PointSet(std::move(x)), PointSet(std::move(y))};
}

//
// Circulant-corner sources.
//

enum class CirculantSymbol { one, wave, linear };

inline std::optional<CirculantSymbol> parse_symbol(const std::string& s) {
  if (s == "one") return CirculantSymbol::one;
  if (s == "wave") return CirculantSymbol::wave;
  if (s == "linear") return CirculantSymbol::linear;
  return std::nullopt;
}

inline std::function<Complex(double)> symbol_function(CirculantSymbol s) {
  switch (s) {
    case CirculantSymbol::one:
      return [](double) { return Complex(1.0, 0.0); };
    case CirculantSymbol::wave:
      return [](double t) { return std::exp(Complex(0.0, t)); };
    case CirculantSymbol::linear:
      return [](double t) { return Complex(t, 0.0); };
  }
  throw invalid_input("symbol_function: unknown symbol");
}

namespace detail {

// Radix-2 in-place FFT (inverse when sign = +1, unscaled).
inline void fft_pow2(std::vector<Complex>& a, int sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const Complex wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

// First column of the circulant whose eigenvalues are `lambda` on the DFT
// basis: c = IDFT(lambda).
inline Eigen::VectorXcd circulant_first_col(const Eigen::VectorXcd& lambda) {
  const Index n = lambda.size();
  const bool pow2 = n > 0 && (n & (n - 1)) == 0;
  Eigen::VectorXcd c(n);
  if (pow2) {
    std::vector<Complex> a(lambda.data(), lambda.data() + n);
    fft_pow2(a, +1);
    for (Index i = 0; i < n; ++i) c(i) = a[static_cast<std::size_t>(i)] / double(n);
  } else {
    for (Index d = 0; d < n; ++d) {
      Complex acc(0, 0);
      for (Index k = 0; k < n; ++k)
        acc += lambda(k) * std::exp(Complex(0.0, 2.0 * std::numbers::pi *
                                                     double(d) * double(k) / double(n)));
      c(d) = acc / double(n);
    }
  }
  return c;
}

}  // namespace detail

/// Source for the n x n upper-right corner of the 2n x 2n circulant whose
/// eigenvalues are f(t) at 2n equispaced points on [0, 2 pi).
inline MatrixSource<Complex> gen_circulant_corner(
    Index n, const std::function<Complex(double)>& f) {
  if (n < 2) throw invalid_input("gen_circulant_corner: n must be >= 2");
  const Index n2 = 2 * n;
  Eigen::VectorXcd lambda(n2);
  for (Index k = 0; k < n2; ++k)
    lambda(k) = f(2.0 * std::numbers::pi * double(k) / double(n2));
  return MatrixSource<Complex>::circulant_corner(detail::circulant_first_col(lambda));
}

inline MatrixSource<Complex> gen_circulant_corner(
    Index n, CirculantSymbol s = CirculantSymbol::linear) {
  return gen_circulant_corner(n, symbol_function(s));
}

//
// CSV ingestion.
//

/// Parse a CSV of numeric rows (one point per line, optional '#' header
/// lines). With `standardize`, shifts and scales every coordinate to mean 0
/// and population variance 1.
inline PointSet load_csv_points(const std::string& path, bool standardize = false) {
  std::ifstream in(path);
  if (!in) throw invalid_input("load_csv_points: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t ncols = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(cell, &used);
      } catch (...) {
        throw invalid_input("load_csv_points: non-numeric field at line " +
                            std::to_string(lineno));
      }
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
        ++used;
      if (used != cell.size())
        throw invalid_input("load_csv_points: non-numeric field at line " +
                            std::to_string(lineno));
      row.push_back(v);
    }
    if (row.empty())
      throw invalid_input("load_csv_points: empty data line " + std::to_string(lineno));
    if (ncols == 0) ncols = row.size();
    if (row.size() != ncols)
      throw invalid_input("load_csv_points: ragged row at line " + std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw invalid_input("load_csv_points: no data rows");
  Eigen::MatrixXd pts(static_cast<Index>(rows.size()), static_cast<Index>(ncols));
  for (Index i = 0; i < pts.rows(); ++i)
    for (Index j = 0; j < pts.cols(); ++j)
      pts(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  if (standardize) {
    for (Index j = 0; j < pts.cols(); ++j) {
      const double mean = pts.col(j).mean();
      pts.col(j).array() -= mean;
      const double var = pts.col(j).squaredNorm() / static_cast<double>(pts.rows());
      if (var == 0.0)
        throw invalid_input("load_csv_points: zero variance in column " +
                            std::to_string(j));
      pts.col(j) /= std::sqrt(var);
    }
  }
  return PointSet(std::move(pts));
}

//
// Dataset selection for the benchmark runner.
//

enum class DatasetKind { flower, fem_grid, airfoil_like, set3d, circulant_corner, csv_file };

struct DatasetSpec {
  DatasetKind kind = DatasetKind::flower;
  Index m = 0;  // 0: generator default
  Index n = 0;
  std::uint64_t seed = 0;
  double jitter = 1.0;
  CirculantSymbol symbol = CirculantSymbol::linear;
  std::string csv_path;
  Index csv_head_rows = 1000;  // x = leading rows of the ingested set
  bool csv_standardize = true;

  std::string name() const {
    switch (kind) {
      case DatasetKind::flower: return "flower";
      case DatasetKind::fem_grid: return "fem";
      case DatasetKind::airfoil_like: return "airfoil";
      case DatasetKind::set3d: return "set3d";
      case DatasetKind::circulant_corner: return "circulant";
      case DatasetKind::csv_file: return "csv";
    }
    return "?";
  }
};

/// Point sets for a dataset spec; not valid for circulant_corner (which is
/// an implicit matrix, not a point cloud).
inline std::pair<PointSet, PointSet> build_points(const DatasetSpec& d) {
  const auto pick = [](Index v, Index dflt) { return v > 0 ? v : dflt; };
  switch (d.kind) {
    case DatasetKind::flower:
      return gen_flower(pick(d.m, 1018), pick(d.n, 13965), d.seed);
    case DatasetKind::fem_grid:
      return gen_fem_grid(pick(d.m, 821), pick(d.n, 4125), d.seed);
    case DatasetKind::airfoil_like:
      return gen_airfoil_like(pick(d.m, 617), pick(d.n, 11078), d.seed);
    case DatasetKind::set3d:
      return gen_set3d(pick(d.m, 717), pick(d.n, 6650), d.seed, d.jitter);
    case DatasetKind::csv_file: {
      PointSet all = load_csv_points(d.csv_path, d.csv_standardize);
      const Index head = std::min(d.csv_head_rows, all.size() - 1);
      if (head < 1)
        throw invalid_input("build_points: CSV too small to split");
      Eigen::MatrixXd x = all.pts.topRows(head);
      Eigen::MatrixXd y = all.pts.bottomRows(all.size() - head);
      return {PointSet(std::move(x)), PointSet(std::move(y))};
    }
    case DatasetKind::circulant_corner:
      throw invalid_input("build_points: circulant dataset has no point sets");
  }
  throw invalid_input("build_points: unknown dataset");
}

}  // namespace han

#endif  // HAN_DATASETS_HPP
