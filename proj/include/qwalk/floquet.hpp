#ifndef QWALK_FLOQUET_HPP
#define QWALK_FLOQUET_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"
#include "qwalk/format.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/spectral.hpp"

namespace qwalk {

inline constexpr double kDefaultCollisionDelta = 1e-9;

/// Periodic graph with a single vertex per cell whose band function is
/// known: Z^d or the triangular lattice (d = 2).
struct BaseLattice {
  enum class Kind { integer, triangular };

  Kind kind = Kind::integer;
  int d = 1;

  static BaseLattice integer(int d) {
    if (d < 1) throw ParameterError("lattice dimension must be >= 1");
    return {Kind::integer, d};
  }
  static BaseLattice triangular() { return {Kind::triangular, 2}; }

  int dim() const noexcept { return d; }
};

/// E_0(theta): 2 sum_i cos(2 pi theta_i) on Z^d; on the triangular lattice
/// the extra neighbour pair contributes 2cos(2 pi (theta_1 + theta_2)).
inline double base_band(const BaseLattice& base, std::span<const double> theta) {
  if (theta.size() != static_cast<std::size_t>(base.dim())) {
    throw ParameterError("theta has wrong dimension");
  }
  const double two_pi = 2.0 * std::numbers::pi;
  double e = 0.0;
  for (double t : theta) e += 2.0 * std::cos(two_pi * t);
  if (base.kind == BaseLattice::Kind::triangular) {
    e += 2.0 * std::cos(two_pi * (theta[0] + theta[1]));
  }
  return e;
}

/// Band functions of a product of a one-vertex lattice with G_F.
struct BandStructure {
  BaseLattice base;
  SpectralDecomposition spectrum;  // of A_{G_F}
  ProductKind rule = ProductKind::cartesian;

  int nu() const noexcept { return spectrum.size(); }
};

inline BandStructure product_spec(const BaseLattice& base, const FiniteGraph& g,
                                  ProductKind kind, double tol = kDefaultClusterTol) {
  return {base, eigendecompose_symmetric(g.adjacency(), tol), kind};
}

inline double band_rule(ProductKind rule, double base_value, double mu) {
  switch (rule) {
    case ProductKind::cartesian: return base_value + mu;
    case ProductKind::tensor: return mu * base_value;
    case ProductKind::strong: return (1.0 + mu) * base_value + mu;
  }
  return base_value + mu;
}

/// E_j(theta) for every eigenvalue mu_j of G_F, in the spectrum's order.
inline std::vector<double> product_bands(const BandStructure& bs,
                                         std::span<const double> theta) {
  const double e0 = base_band(bs.base, theta);
  std::vector<double> bands;
  bands.reserve(static_cast<std::size_t>(bs.nu()));
  for (int j = 0; j < bs.nu(); ++j) bands.push_back(band_rule(bs.rule, e0, bs.spectrum.eigenvalues[j]));
  return bands;
}

/// Indices of constant bands. Cartesian products have none; tensor products
/// are flat where mu_j = 0 and strong products where mu_j = -1.
inline std::vector<int> flat_band_check(const BandStructure& bs) {
  std::vector<int> flat;
  if (bs.rule == ProductKind::cartesian) return flat;
  const double target = bs.rule == ProductKind::tensor ? 0.0 : -1.0;
  double radius = 0.0;
  for (int j = 0; j < bs.nu(); ++j) radius = std::max(radius, std::abs(bs.spectrum.eigenvalues[j]));
  const double tol = bs.spectrum.tol * std::max(1.0, radius);
  for (int j = 0; j < bs.nu(); ++j)
    if (std::abs(bs.spectrum.eigenvalues[j] - target) <= tol) flat.push_back(j);
  return flat;
}

/// Uniform grid L_N^d = {0..N-1}^d, enumerated with the first axis most
/// significant.
class LatticeGrid {
 public:
  LatticeGrid(int n, int d) : n_(n), d_(d) {
    if (n < 1) throw ParameterError("grid size must be >= 1");
    if (d < 1) throw ParameterError("lattice dimension must be >= 1");
    std::int64_t count = 1;
    for (int i = 0; i < d; ++i) {
      count *= n;
      if (count > (std::int64_t{1} << 26)) throw ParameterError("grid too large");
    }
    count_ = count;
  }

  int n() const noexcept { return n_; }
  int dim() const noexcept { return d_; }
  std::int64_t size() const noexcept { return count_; }

  std::vector<int> point(std::int64_t flat) const {
    std::vector<int> r(static_cast<std::size_t>(d_));
    for (int i = d_ - 1; i >= 0; --i) {
      r[i] = static_cast<int>(flat % n_);
      flat /= n_;
    }
    return r;
  }

  std::int64_t index(std::span<const int> r) const {
    std::int64_t flat = 0;
    for (int x : r) flat = flat * n_ + ((x % n_) + n_) % n_;
    return flat;
  }

  /// Flat index of (a + b) mod N.
  std::int64_t shifted(std::int64_t a, std::int64_t b) const {
    std::int64_t flat = 0;
    std::int64_t stride = 1;
    for (int i = 0; i < d_; ++i) {
      const std::int64_t ai = a % n_;
      const std::int64_t bi = b % n_;
      flat += ((ai + bi) % n_) * stride;
      stride *= n_;
      a /= n_;
      b /= n_;
    }
    return flat;
  }

  std::vector<double> theta(std::int64_t flat) const {
    const auto r = point(flat);
    std::vector<double> t(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) t[i] = static_cast<double>(r[i]) / n_;
    return t;
  }

 private:
  int n_;
  int d_;
  std::int64_t count_ = 1;
};

/// Band values E_j(r/N) tabulated on the whole grid.
struct BandGrid {
  LatticeGrid grid;
  int bands = 0;
  std::vector<double> values;  // values[flat * bands + j]

  double at(std::int64_t flat, int j) const {
    return values[static_cast<std::size_t>(flat * bands + j)];
  }
};

inline BandGrid tabulate_bands(const BandStructure& bs, int n) {
  BandGrid table{LatticeGrid(n, bs.base.dim()), bs.nu(), {}};
  table.values.reserve(static_cast<std::size_t>(table.grid.size() * table.bands));
  for (std::int64_t r = 0; r < table.grid.size(); ++r) {
    const auto theta = table.grid.theta(r);
    for (double e : product_bands(bs, theta)) table.values.push_back(e);
  }
  return table;
}

/// #{r : |E_s((r + m)/N) - E_w(r/N)| < delta}.
inline std::int64_t collision_count(const BandGrid& table, std::int64_t shift, int s,
                                    int w, double delta) {
  std::int64_t count = 0;
  for (std::int64_t r = 0; r < table.grid.size(); ++r) {
    const double lhs = table.at(table.grid.shifted(r, shift), s);
    if (std::abs(lhs - table.at(r, w)) < delta) ++count;
  }
  return count;
}

struct FloquetScanReport {
  int N = 0;
  double max_fraction = 0.0;
  std::vector<int> worst_shift;
  std::pair<int, int> worst_pair{0, 0};
  std::vector<int> flat_bands;

  std::string to_json() const {
    auto list = [](const std::vector<int>& v) {
      std::string s = "[";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
      return s + "]";
    };
    return "{\"N\": " + std::to_string(N) + ", \"max_fraction\": " +
           json_number(max_fraction) + ", \"worst_shift\": " + list(worst_shift) +
           ", \"worst_pair\": [" + std::to_string(worst_pair.first) + ", " +
           std::to_string(worst_pair.second) + "], \"flat_bands\": " + list(flat_bands) + "}";
  }
};

/// Worst collision fraction over all nonzero shifts m and band pairs (s, w).
/// Ties keep the first maximum in (m, s, w) lexicographic order.
inline FloquetScanReport floquet_condition_fraction(const BandStructure& bs, int n,
                                                    double delta = kDefaultCollisionDelta) {
  if (n < 2) throw ParameterError("floquet scan requires N >= 2");
  if (!(delta > 0.0)) throw ParameterError("collision delta must be positive");
  const BandGrid table = tabulate_bands(bs, n);
  const double total = static_cast<double>(table.grid.size());

  FloquetScanReport report;
  report.N = n;
  report.flat_bands = flat_band_check(bs);
  std::int64_t best = -1;
  for (std::int64_t m = 1; m < table.grid.size(); ++m) {
    for (int s = 0; s < bs.nu(); ++s) {
      for (int w = 0; w < bs.nu(); ++w) {
        const std::int64_t c = collision_count(table, m, s, w, delta);
        if (c > best) {
          best = c;
          report.worst_shift = table.grid.point(m);
          report.worst_pair = {s, w};
        }
      }
    }
  }
  report.max_fraction = static_cast<double>(best) / total;
  return report;
}

/// H(theta)(p, q) = sum over edges (p, q, n) of exp(2 pi i theta . n), plus
/// the potential on the diagonal.
inline Eigen::MatrixXcd build_floquet_matrix(const PeriodicGraphSpec& spec,
                                             std::span<const double> theta) {
  if (theta.size() != static_cast<std::size_t>(spec.dim())) {
    throw ParameterError("theta has wrong dimension");
  }
  const double two_pi = 2.0 * std::numbers::pi;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(spec.nu(), spec.nu());
  for (const auto& e : spec.edges()) {
    double phase = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) phase += theta[i] * e.offset[i];
    h(e.from, e.to) += std::polar(1.0, two_pi * phase);
  }
  for (int p = 0; p < spec.nu(); ++p) h(p, p) += spec.potential()[p];
  return h;
}

/// Upper bound on how far any sorted eigenvalue of H can move between
/// neighbouring grid points: ||H(theta) - H(theta')||_2 <= 2 pi sum_e |n_e|_1 / N.
inline double floquet_lipschitz_bound(const PeriodicGraphSpec& spec, int n) {
  double l1 = 0.0;
  for (const auto& e : spec.edges())
    for (int x : e.offset) l1 += std::abs(x);
  return 2.0 * std::numbers::pi * l1 / n;
}

struct GridDensityResult {
  Eigen::MatrixXd values;
  int N = 0;
  // Largest change of a sorted eigenvalue between grid neighbours; compare
  // with floquet_lipschitz_bound.
  double max_eigenvalue_step = 0.0;

  DensityMatrix as_density() const { return {values, DensitySource::quadrature}; }
};

/// Grid average over theta = r/N of sum_s |P_{E_s}(theta)(p, q)|^2, where the
/// P_{E_s} project onto the distinct eigenvalues of H(theta).
inline GridDensityResult general_density(const PeriodicGraphSpec& spec, int n,
                                         double tol = kDefaultClusterTol) {
  if (n < 2) throw ParameterError("grid density requires N >= 2");
  if (!(tol > 0.0)) throw ParameterError("clustering tolerance must be positive");
  const LatticeGrid grid(n, spec.dim());
  const int nu = spec.nu();
  GridDensityResult result{Eigen::MatrixXd::Zero(nu, nu), n, 0.0};
  std::vector<double> spectra;
  spectra.reserve(static_cast<std::size_t>(grid.size() * nu));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  for (std::int64_t r = 0; r < grid.size(); ++r) {
    const auto theta = grid.theta(r);
    const Eigen::MatrixXcd h = build_floquet_matrix(spec, theta);
    solver.compute(h);
    if (solver.info() != Eigen::Success) {
      std::string where;
      for (int x : grid.point(r)) where += (where.empty() ? "" : ",") + std::to_string(x);
      throw NumericError("Hermitian eigensolver failed at grid point r=(" + where + ")");
    }
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    for (int k = 0; k < nu; ++k) spectra.push_back(lambda[k]);
    for (const auto& cluster :
         cluster_sorted(std::span<const double>(lambda.data(), static_cast<std::size_t>(nu)), tol)) {
      Eigen::MatrixXcd basis(nu, static_cast<Eigen::Index>(cluster.size()));
      for (std::size_t k = 0; k < cluster.size(); ++k)
        basis.col(static_cast<Eigen::Index>(k)) = v.col(cluster[k]);
      result.values += (basis * basis.adjoint()).cwiseAbs2();
    }
  }
  result.values /= static_cast<double>(grid.size());

  std::int64_t stride = 1;
  for (int axis = spec.dim() - 1; axis >= 0; --axis, stride *= n) {
    for (std::int64_t r = 0; r < grid.size(); ++r) {
      const std::int64_t next = grid.shifted(r, stride);
      for (int k = 0; k < nu; ++k) {
        const double step = std::abs(spectra[static_cast<std::size_t>(next * nu + k)] -
                                     spectra[static_cast<std::size_t>(r * nu + k)]);
        result.max_eigenvalue_step = std::max(result.max_eigenvalue_step, step);
      }
    }
  }
  return result;
}

}  // namespace qwalk

#endif  // QWALK_FLOQUET_HPP
