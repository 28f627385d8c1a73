#ifndef QWALK_DYNAMICS_HPP
#define QWALK_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"
#include "qwalk/floquet.hpp"
#include "qwalk/format.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/spectral.hpp"

// Continuous-time quantum walk on the torus (C_N)^d x G_F, the periodic
// restriction of Z^d x G_F. The adjacency is diagonalized by plane waves on
// the cells tensored with the eigenvectors of G_F.

namespace qwalk {

using ComplexVector = std::vector<std::complex<double>>;

inline constexpr std::int64_t kTorusBudget = std::int64_t{1} << 20;

struct TorusStart {
  std::vector<int> cell;
  int vertex = 0;
};

class TorusOperator {
 public:
  TorusOperator(SpectralDecomposition graph, int d, int n)
      : graph_(std::move(graph)), grid_(n, d), nu_(graph_.size()) {
    const double two_pi = 2.0 * std::numbers::pi;
    cycle_values_.resize(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
      // r and N - r give bit-identical values so exact degeneracies stay exact.
      cycle_values_[r] = 2.0 * std::cos(two_pi * std::min(r, n - r) / n);
    }
    const auto cluster_of = graph_.cluster_index();
    mu_.resize(static_cast<std::size_t>(nu_));
    for (int j = 0; j < nu_; ++j) mu_[j] = graph_.cluster_values[cluster_of[j]];

    eigenvalues_.reserve(static_cast<std::size_t>(dimension()));
    std::vector<double> terms(static_cast<std::size_t>(d));
    for (std::int64_t r = 0; r < grid_.size(); ++r) {
      const auto point = grid_.point(r);
      for (int i = 0; i < d; ++i) terms[i] = cycle_values_[point[i]];
      std::sort(terms.begin(), terms.end());
      const double e0 = std::accumulate(terms.begin(), terms.end(), 0.0);
      for (int j = 0; j < nu_; ++j) eigenvalues_.push_back(e0 + mu_[j]);
    }
  }

  int N() const noexcept { return grid_.n(); }
  int dim() const noexcept { return grid_.dim(); }
  int nu() const noexcept { return nu_; }
  std::int64_t cells() const noexcept { return grid_.size(); }
  std::int64_t dimension() const noexcept { return grid_.size() * nu_; }
  const LatticeGrid& grid() const noexcept { return grid_; }
  const SpectralDecomposition& graph_spectrum() const noexcept { return graph_; }

  /// lambda_{r,j} = 2 sum_i cos(2 pi r_i / N) + mu_j, indexed r * nu + j.
  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }

  std::int64_t vertex_index(std::span<const int> cell, int q) const {
    return grid_.index(cell) * nu_ + q;
  }

  std::int64_t vertex_index(const TorusStart& s) const {
    if (s.cell.size() != static_cast<std::size_t>(dim())) {
      throw ParameterError("start cell has wrong dimension");
    }
    if (s.vertex < 0 || s.vertex >= nu_) throw ParameterError("start vertex out of range");
    return vertex_index(s.cell, s.vertex);
  }

  /// Expands x in the eigenbasis: c_{r,j} = <psi_{r,j}, x>.
  ComplexVector to_eigenbasis(const ComplexVector& x) const {
    ComplexVector y = graph_transform(x, false);
    for (int axis = 0; axis < dim(); ++axis) axis_dft(y, axis, -1);
    return y;
  }

  /// Inverse of to_eigenbasis.
  ComplexVector from_eigenbasis(const ComplexVector& c) const {
    ComplexVector y = c;
    for (int axis = 0; axis < dim(); ++axis) axis_dft(y, axis, +1);
    return graph_transform(y, true);
  }

  /// f(A_N) x through the eigenbasis.
  ComplexVector apply_function(const ComplexVector& x,
                               const std::function<std::complex<double>(double)>& f) const {
    ComplexVector c = to_eigenbasis(x);
    for (std::size_t a = 0; a < c.size(); ++a) c[a] *= f(eigenvalues_[a]);
    return from_eigenbasis(c);
  }

  ComplexVector apply(const ComplexVector& x) const {
    return apply_function(x, [](double lambda) { return std::complex<double>(lambda, 0.0); });
  }

  /// psi_{r,j}(cell k, q) = exp(2 pi i r.k / N) / N^{d/2} * w_j(q).
  std::complex<double> eigenvector_entry(std::int64_t pair, std::int64_t vertex) const {
    const std::int64_t r = pair / nu_;
    const int j = static_cast<int>(pair % nu_);
    const std::int64_t k = vertex / nu_;
    const int q = static_cast<int>(vertex % nu_);
    const auto rp = grid_.point(r);
    const auto kp = grid_.point(k);
    std::int64_t dot = 0;
    for (std::size_t i = 0; i < rp.size(); ++i) dot += static_cast<std::int64_t>(rp[i]) * kp[i];
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(dot % N()) / N();
    const double norm = std::pow(static_cast<double>(N()), -0.5 * dim());
    return std::polar(norm * graph_.eigenvectors(q, j), phase);
  }

 private:
  ComplexVector graph_transform(const ComplexVector& x, bool inverse) const {
    if (x.size() != static_cast<std::size_t>(dimension())) {
      throw ParameterError("vector length does not match torus dimension");
    }
    ComplexVector y(x.size());
    const auto& w = graph_.eigenvectors;
    for (std::int64_t k = 0; k < cells(); ++k) {
      const std::size_t base = static_cast<std::size_t>(k * nu_);
      for (int out = 0; out < nu_; ++out) {
        std::complex<double> acc = 0.0;
        for (int in = 0; in < nu_; ++in) {
          acc += (inverse ? w(out, in) : w(in, out)) * x[base + in];
        }
        y[base + out] = acc;
      }
    }
    return y;
  }

  // Unitary DFT along one cell axis; sign -1 is the forward transform.
  void axis_dft(ComplexVector& y, int axis, int sign) const {
    const int n = N();
    std::int64_t stride = nu_;
    for (int i = dim() - 1; i > axis; --i) stride *= n;
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<std::complex<double>> twiddle(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
      twiddle[t] = std::polar(1.0 / std::sqrt(static_cast<double>(n)), sign * two_pi * t / n);
    ComplexVector line(static_cast<std::size_t>(n));
    const std::int64_t total = dimension();
    for (std::int64_t start = 0; start < total; ++start) {
      if ((start / stride) % n != 0) continue;
      for (int k = 0; k < n; ++k) line[k] = y[static_cast<std::size_t>(start + k * stride)];
      for (int r = 0; r < n; ++r) {
        std::complex<double> acc = 0.0;
        for (int k = 0; k < n; ++k) acc += twiddle[(static_cast<std::int64_t>(r) * k) % n] * line[k];
        y[static_cast<std::size_t>(start + r * stride)] = acc;
      }
    }
  }

  SpectralDecomposition graph_;
  LatticeGrid grid_;
  int nu_;
  std::vector<double> cycle_values_;
  std::vector<double> mu_;
  std::vector<double> eigenvalues_;
};

/// Torus (C_N)^d x G with nu * N^d <= 2^20 vertices.
inline TorusOperator build_torus(const FiniteGraph& g, int d, int n,
                                 double tol = kDefaultClusterTol) {
  if (n < 3) throw ParameterError("torus requires N >= 3");
  if (d < 1) throw ParameterError("lattice dimension must be >= 1");
  std::int64_t size = g.nu();
  for (int i = 0; i < d; ++i) {
    size *= n;
    if (size > kTorusBudget) {
      throw ParameterError("torus size nu * N^d exceeds the 2^20 vertex budget");
    }
  }
  return TorusOperator(eigendecompose_symmetric(g.adjacency(), tol), d, n);
}

/// e^{itA_N} delta_start.
inline ComplexVector evolve(const TorusOperator& op, const TorusStart& start, double t) {
  if (!std::isfinite(t)) throw ParameterError("evolution time must be finite");
  ComplexVector delta(static_cast<std::size_t>(op.dimension()), 0.0);
  delta[static_cast<std::size_t>(op.vertex_index(start))] = 1.0;
  if (t == 0.0) return delta;
  return op.apply_function(delta, [t](double lambda) { return std::polar(1.0, t * lambda); });
}

/// Probability vector on the torus vertices. horizon is +inf for the
/// infinite-time limit.
struct TimeAveragedDistribution {
  std::vector<double> values;
  double horizon = std::numeric_limits<double>::infinity();
  TorusStart start;

  double total() const { return std::accumulate(values.begin(), values.end(), 0.0); }

  /// Mass on each cell (summed over the fundamental domain).
  std::vector<double> cell_mass(int nu) const {
    std::vector<double> mass(values.size() / static_cast<std::size_t>(nu), 0.0);
    for (std::size_t v = 0; v < values.size(); ++v) mass[v / nu] += values[v];
    return mass;
  }

  /// CSV with columns cell_0..cell_{d-1},q,mass.
  std::string to_csv(const TorusOperator& op) const {
    std::string out;
    for (int i = 0; i < op.dim(); ++i) out += "cell_" + std::to_string(i) + ",";
    out += "q,mass\n";
    for (std::int64_t k = 0; k < op.cells(); ++k) {
      const auto cell = op.grid().point(k);
      for (int q = 0; q < op.nu(); ++q) {
        for (int x : cell) out += std::to_string(x) + ",";
        out += std::to_string(q) + "," +
               json_number(values[static_cast<std::size_t>(k * op.nu() + q)]) + "\n";
      }
    }
    return out;
  }
};

namespace detail {

/// (P_K delta_start)(w) for each group K of eigenpair indices.
inline std::vector<ComplexVector> projected_start(const TorusOperator& op,
                                                  const TorusStart& start,
                                                  const std::vector<std::vector<std::int64_t>>& groups) {
  const std::int64_t origin = op.vertex_index(start);
  const std::int64_t m = op.dimension();
  std::vector<std::vector<int>> cell_points;
  cell_points.reserve(static_cast<std::size_t>(op.cells()));
  for (std::int64_t k = 0; k < op.cells(); ++k) cell_points.push_back(op.grid().point(k));
  const double norm = std::pow(static_cast<double>(op.N()), -0.5 * op.dim());
  std::vector<ComplexVector> out;
  out.reserve(groups.size());
  for (const auto& group : groups) {
    ComplexVector v(static_cast<std::size_t>(m), 0.0);
    for (std::int64_t a : group) {
      const std::complex<double> weight = std::conj(op.eigenvector_entry(a, origin));
      if (std::abs(weight) == 0.0) continue;
      // psi_a(w) factorizes; walk the cells once.
      const std::int64_t r = a / op.nu();
      const int j = static_cast<int>(a % op.nu());
      const auto rp = op.grid().point(r);
      for (std::int64_t k = 0; k < op.cells(); ++k) {
        const auto& kp = cell_points[static_cast<std::size_t>(k)];
        std::int64_t dot = 0;
        for (std::size_t i = 0; i < rp.size(); ++i) dot += static_cast<std::int64_t>(rp[i]) * kp[i];
        const std::complex<double> wave =
            std::polar(norm, 2.0 * std::numbers::pi * static_cast<double>(dot % op.N()) / op.N()) *
            weight;
        for (int q = 0; q < op.nu(); ++q)
          v[static_cast<std::size_t>(k * op.nu() + q)] += wave * op.graph_spectrum().eigenvectors(q, j);
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline std::vector<std::vector<std::int64_t>> group_eigenpairs(const TorusOperator& op,
                                                              double tol,
                                                              std::vector<double>* values) {
  const auto& lambda = op.eigenvalues();
  std::vector<std::int64_t> order(lambda.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::int64_t a, std::int64_t b) { return lambda[a] < lambda[b]; });
  std::vector<double> sorted(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = lambda[order[i]];
  std::vector<std::vector<std::int64_t>> groups;
  for (const auto& cluster : cluster_sorted(sorted, tol)) {
    groups.emplace_back();
    for (int i : cluster) groups.back().push_back(order[i]);
    if (values) values->push_back(sorted[cluster.front()]);
  }
  return groups;
}

/// (e^{ix} - 1) / (ix), evaluated as e^{ix/2} sinc(x/2).
inline std::complex<double> mean_phase(double x) {
  const double half = 0.5 * x;
  const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  return std::polar(sinc, half);
}

inline constexpr std::int64_t kFiniteAverageBudget = 2048;
inline constexpr std::int64_t kAverageBudget = 8192;

}  // namespace detail

/// (1/T) int_0^T |e^{itA_N} delta_start|^2 dt in closed form. Eigenvalues
/// that coincide exactly are merged; every other pair carries the factor
/// (e^{iT dLambda} - 1) / (iT dLambda).
inline TimeAveragedDistribution time_averaged(const TorusOperator& op, const TorusStart& start,
                                              double horizon) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ParameterError("time horizon must be positive and finite");
  }
  if (op.dimension() > detail::kFiniteAverageBudget) {
    throw ParameterError("finite-time average limited to 2048 torus vertices");
  }
  std::vector<double> levels;
  const auto groups = detail::group_eigenpairs(op, 0.0, &levels);
  const auto parts = detail::projected_start(op, start, groups);
  const std::size_t g = groups.size();

  std::vector<std::complex<double>> phase(g * g);
  for (std::size_t a = 0; a < g; ++a)
    for (std::size_t b = a + 1; b < g; ++b)
      phase[a * g + b] = detail::mean_phase(horizon * (levels[a] - levels[b]));

  TimeAveragedDistribution out;
  out.horizon = horizon;
  out.start = start;
  out.values.assign(static_cast<std::size_t>(op.dimension()), 0.0);
  for (std::size_t w = 0; w < out.values.size(); ++w) {
    double diag = 0.0;
    std::complex<double> cross = 0.0;
    for (std::size_t a = 0; a < g; ++a) {
      const std::complex<double> ca = parts[a][w];
      if (ca == 0.0) continue;
      diag += std::norm(ca);
      for (std::size_t b = a + 1; b < g; ++b) cross += ca * std::conj(parts[b][w]) * phase[a * g + b];
    }
    out.values[w] = diag + 2.0 * cross.real();
  }
  return out;
}

/// lim_{T -> inf}: sum_K |P_K delta_start|^2 over eigenvalue clusters K of
/// A_N (single linkage, gap tol * max(1, spectral radius)).
inline TimeAveragedDistribution infinite_time_averaged(const TorusOperator& op,
                                                       const TorusStart& start,
                                                       double tol = kDefaultClusterTol) {
  if (!(tol > 0.0)) throw ParameterError("clustering tolerance must be positive");
  if (op.dimension() > detail::kAverageBudget) {
    throw ParameterError("infinite-time average limited to 8192 torus vertices");
  }
  const auto groups = detail::group_eigenpairs(op, tol, nullptr);
  TimeAveragedDistribution out;
  out.start = start;
  out.values.assign(static_cast<std::size_t>(op.dimension()), 0.0);
  for (const auto& part : detail::projected_start(op, start, groups))
    for (std::size_t w = 0; w < part.size(); ++w) out.values[w] += std::norm(part[w]);
  return out;
}

/// (1/2) sum |a_i - b_i|.
inline double total_variation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ParameterError("distributions have different lengths");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return 0.5 * sum;
}

/// Predicted limit d(p, q) / N^d, the same on every cell.
inline std::vector<double> product_prediction(const TorusOperator& op, const DensityMatrix& d,
                                              int p) {
  if (d.nu() != op.nu()) throw ParameterError("density does not match the torus fiber");
  std::vector<double> out(static_cast<std::size_t>(op.dimension()));
  const double cells = static_cast<double>(op.cells());
  for (std::int64_t k = 0; k < op.cells(); ++k)
    for (int q = 0; q < op.nu(); ++q)
      out[static_cast<std::size_t>(k * op.nu() + q)] = d(p, q) / cells;
  return out;
}

}  // namespace qwalk

#endif  // QWALK_DYNAMICS_HPP
