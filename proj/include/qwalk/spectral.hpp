#ifndef QWALK_SPECTRAL_HPP
#define QWALK_SPECTRAL_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"
#include "qwalk/format.hpp"
#include "qwalk/graph.hpp"

namespace qwalk {

inline constexpr double kDefaultClusterTol = 1e-8;

/// Groups ascending values by single linkage: a new group starts wherever
/// two neighbours differ by more than tol * max(1, max |value|).
inline std::vector<std::vector<int>> cluster_sorted(std::span<const double> sorted,
                                                    double tol) {
  std::vector<std::vector<int>> clusters;
  if (sorted.empty()) return clusters;
  double radius = 0.0;
  for (double v : sorted) radius = std::max(radius, std::abs(v));
  const double gap = tol * std::max(1.0, radius);
  clusters.push_back({0});
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] > gap) clusters.emplace_back();
    clusters.back().push_back(static_cast<int>(i));
  }
  return clusters;
}

/// Eigenpairs of a real symmetric matrix, eigenvalues ascending, with the
/// eigenvalues grouped into numerically distinct clusters.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // columns, orthonormal
  std::vector<std::vector<int>> clusters;
  std::vector<double> cluster_values;
  double tol = kDefaultClusterTol;

  int size() const noexcept { return static_cast<int>(eigenvalues.size()); }
  int distinct() const noexcept { return static_cast<int>(clusters.size()); }

  /// Cluster index of every eigenvalue.
  std::vector<int> cluster_index() const {
    std::vector<int> idx(static_cast<std::size_t>(size()), -1);
    for (std::size_t s = 0; s < clusters.size(); ++s)
      for (int j : clusters[s]) idx[j] = static_cast<int>(s);
    return idx;
  }
};

namespace detail {

inline void assign_clusters(SpectralDecomposition& dec) {
  const auto n = static_cast<std::size_t>(dec.eigenvalues.size());
  dec.clusters = cluster_sorted(std::span<const double>(dec.eigenvalues.data(), n),
                                dec.tol);
  dec.cluster_values.clear();
  for (const auto& c : dec.clusters) {
    double sum = 0.0;
    for (int j : c) sum += dec.eigenvalues[j];
    dec.cluster_values.push_back(sum / static_cast<double>(c.size()));
  }
}

/// Sorts eigenpairs ascending (stable on ties) and clusters them.
inline SpectralDecomposition finish_decomposition(const Eigen::VectorXd& values,
                                                  const Eigen::MatrixXd& vectors,
                                                  double tol) {
  const auto n = values.size();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] < values[b]; });
  SpectralDecomposition dec;
  dec.tol = tol;
  dec.eigenvalues.resize(n);
  dec.eigenvectors.resize(vectors.rows(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    dec.eigenvalues[k] = values[order[k]];
    dec.eigenvectors.col(k) = vectors.col(order[k]);
  }
  assign_clusters(dec);
  return dec;
}

}  // namespace detail

/// Eigendecomposition of a real symmetric matrix.
///
/// Throws NumericError when M is not symmetric to 1e-12 (relative to its
/// largest entry) or when the solver does not converge.
inline SpectralDecomposition eigendecompose_symmetric(const Eigen::MatrixXd& m,
                                                      double tol = kDefaultClusterTol) {
  if (m.rows() != m.cols()) throw NumericError("matrix is not square");
  if (m.rows() == 0) throw NumericError("matrix is empty");
  if (!(tol > 0.0)) throw ParameterError("clustering tolerance must be positive");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw NumericError("matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigensolver did not converge");
  }
  return detail::finish_decomposition(solver.eigenvalues(), solver.eigenvectors(), tol);
}

struct ProjectionKernel {
  Eigen::MatrixXd matrix;
  double cluster_value = 0.0;
};

/// Orthogonal projector onto each distinct eigenspace.
inline std::vector<ProjectionKernel> projection_kernels(const SpectralDecomposition& dec) {
  std::vector<ProjectionKernel> kernels;
  kernels.reserve(dec.clusters.size());
  const auto n = dec.eigenvectors.rows();
  for (std::size_t s = 0; s < dec.clusters.size(); ++s) {
    Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(dec.clusters[s].size()));
    for (std::size_t k = 0; k < dec.clusters[s].size(); ++k)
      basis.col(static_cast<Eigen::Index>(k)) = dec.eigenvectors.col(dec.clusters[s][k]);
    kernels.push_back({basis * basis.transpose(), dec.cluster_values[s]});
  }
  return kernels;
}

enum class DensitySource { numeric, closed_form, quadrature, analytic };

inline std::string to_string(DensitySource s) {
  switch (s) {
    case DensitySource::numeric: return "numeric";
    case DensitySource::closed_form: return "closed-form";
    case DensitySource::quadrature: return "quadrature";
    case DensitySource::analytic: return "analytic";
  }
  return "numeric";
}

/// Limiting weights d(p, q) of the walk started at p on layer q.
struct DensityMatrix {
  Eigen::MatrixXd values;
  DensitySource source = DensitySource::numeric;

  int nu() const noexcept { return static_cast<int>(values.rows()); }
  double operator()(int p, int q) const { return values(p, q); }

  /// {"nu": n, "source": tag, "d": [[...], ...]}, 17 significant digits.
  std::string to_json() const {
    std::string out = "{\"nu\": " + std::to_string(nu()) + ", \"source\": \"" +
                      to_string(source) + "\", \"d\": [";
    for (Eigen::Index p = 0; p < values.rows(); ++p) {
      out += p ? ", [" : "[";
      for (Eigen::Index q = 0; q < values.cols(); ++q) {
        if (q) out += ", ";
        out += json_number(values(p, q));
      }
      out += "]";
    }
    out += "]}";
    return out;
  }
};

/// d(p, q) = sum_s |P_s(p, q)|^2 over the distinct eigenspaces of dec.
inline DensityMatrix density_from_decomposition(const SpectralDecomposition& dec,
                                                DensitySource source) {
  const auto n = dec.eigenvectors.rows();
  DensityMatrix d{Eigen::MatrixXd::Zero(n, n), source};
  for (const auto& kernel : projection_kernels(dec)) {
    d.values += kernel.matrix.cwiseAbs2();
  }
  return d;
}

inline DensityMatrix limiting_density(const FiniteGraph& g,
                                      double tol = kDefaultClusterTol) {
  return density_from_decomposition(eigendecompose_symmetric(g.adjacency(), tol),
                                    DensitySource::numeric);
}

namespace detail {

/// Real orthonormal basis of the DFT modes r and nu-r on n points, written
/// into columns of `vectors` starting at `col`.  Returns the eigen-index r
/// of each column.
inline std::vector<int> real_fourier_basis(int n, Eigen::MatrixXd& vectors,
                                           Eigen::Index row0, Eigen::Index col,
                                           int r_begin) {
  std::vector<int> modes;
  const double two_pi = 2.0 * std::numbers::pi;
  for (int r = r_begin; 2 * r <= n; ++r) {
    if (r == 0 || 2 * r == n) {
      for (int k = 0; k < n; ++k)
        vectors(row0 + k, col) = (r == 0 ? 1.0 : (k % 2 ? -1.0 : 1.0)) / std::sqrt(n);
      modes.push_back(r);
      ++col;
    } else {
      for (int k = 0; k < n; ++k) {
        const double phase = two_pi * r * k / n;
        vectors(row0 + k, col) = std::sqrt(2.0 / n) * std::cos(phase);
        vectors(row0 + k, col + 1) = std::sqrt(2.0 / n) * std::sin(phase);
      }
      modes.push_back(r);
      modes.push_back(r);
      col += 2;
    }
  }
  return modes;
}

}  // namespace detail

/// Exact spectra of the families whose eigenvectors are known in closed form.
///
/// cycle: 2cos(2 pi r / nu) with real cosine/sine DFT vectors.
/// path:  2cos(pi j / (nu + 1)) with sine vectors.
/// star:  0 (mult nu - 1) and +-sqrt(nu).
/// hypercube: m - 2k with multiplicity C(m, k), character vectors.
inline SpectralDecomposition analytic_spectrum(Family family, const std::vector<int>& params,
                                               double tol = kDefaultClusterTol) {
  const double pi = std::numbers::pi;
  switch (family) {
    case Family::cycle: {
      const int nu = build_named(family, params).nu();
      Eigen::MatrixXd vectors(nu, nu);
      const auto modes = detail::real_fourier_basis(nu, vectors, 0, 0, 0);
      Eigen::VectorXd values(nu);
      for (int c = 0; c < nu; ++c) values[c] = 2.0 * std::cos(2.0 * pi * modes[c] / nu);
      return detail::finish_decomposition(values, vectors, tol);
    }
    case Family::path: {
      const int nu = build_named(family, params).nu();
      Eigen::MatrixXd vectors(nu, nu);
      Eigen::VectorXd values(nu);
      for (int j = 1; j <= nu; ++j) {
        values[j - 1] = 2.0 * std::cos(pi * j / (nu + 1));
        for (int l = 1; l <= nu; ++l)
          vectors(l - 1, j - 1) = std::sqrt(2.0 / (nu + 1)) * std::sin(pi * j * l / (nu + 1));
      }
      return detail::finish_decomposition(values, vectors, tol);
    }
    case Family::star: {
      const int leaves = build_named(family, params).nu() - 1;
      const int n = leaves + 1;
      Eigen::MatrixXd vectors = Eigen::MatrixXd::Zero(n, n);
      Eigen::VectorXd values = Eigen::VectorXd::Zero(n);
      // Non-constant leaf modes have eigenvalue 0 and vanish at the center.
      detail::real_fourier_basis(leaves, vectors, 0, 0, 1);
      const double root = std::sqrt(static_cast<double>(leaves));
      for (int sign : {1, -1}) {
        const Eigen::Index col = sign > 0 ? n - 2 : n - 1;
        for (int k = 0; k < leaves; ++k) vectors(k, col) = sign / std::sqrt(2.0 * leaves);
        vectors(leaves, col) = 1.0 / std::sqrt(2.0);
        values[col] = sign * root;
      }
      return detail::finish_decomposition(values, vectors, tol);
    }
    case Family::hypercube: {
      const int nu = build_named(family, params).nu();
      const int m = params[0];
      Eigen::MatrixXd vectors(nu, nu);
      Eigen::VectorXd values(nu);
      const double norm = 1.0 / std::sqrt(static_cast<double>(nu));
      for (int r = 0; r < nu; ++r) {
        values[r] = m - 2 * std::popcount(static_cast<unsigned>(r));
        for (int x = 0; x < nu; ++x)
          vectors(x, r) = (std::popcount(static_cast<unsigned>(r & x)) % 2 ? -norm : norm);
      }
      return detail::finish_decomposition(values, vectors, tol);
    }
    default:
      throw ParameterError("no analytic spectrum for family '" + to_string(family) + "'");
  }
}

}  // namespace qwalk

#endif  // QWALK_SPECTRAL_HPP
