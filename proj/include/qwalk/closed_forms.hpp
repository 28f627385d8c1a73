#ifndef QWALK_CLOSED_FORMS_HPP
#define QWALK_CLOSED_FORMS_HPP

#include <bit>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qwalk/errors.hpp"
#include "qwalk/format.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/spectral.hpp"

// Explicit limiting weights for Z^d x G_F when G_F is a cycle, a path, a star
// or a hypercube. These are evaluated from the closed formulas only and serve
// as independent oracles for the eigendecomposition route.

namespace qwalk {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

namespace detail {

inline void check_vertex(int v, int lo, int hi, const char* what) {
  if (v < lo || v > hi) {
    throw ParameterError(std::string(what) + " vertex " + std::to_string(v) +
                         " outside " + std::to_string(lo) + ".." + std::to_string(hi));
  }
}

inline BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt result = 1;
  for (int i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

}  // namespace detail

/// Cycle C_nu, vertices 0..nu-1.
inline Rational d_cycle_exact(int nu, int p, int q) {
  if (nu < 3) throw ParameterError("cycle requires nu >= 3");
  detail::check_vertex(p, 0, nu - 1, "cycle");
  detail::check_vertex(q, 0, nu - 1, "cycle");
  const Rational n = nu;
  if (nu % 2 == 1) {
    return p == q ? Rational(2 * nu - 1, nu * nu) : Rational(nu - 1, nu * nu);
  }
  const int delta = ((q - p) % nu + nu) % nu;
  if (delta == 0 || delta == nu / 2) return Rational(2, nu) * (1 - 1 / n);
  return Rational(1, nu) * (1 - 2 / n);
}

/// Path P_nu, vertices 1..nu.
inline Rational d_path_exact(int nu, int p, int q) {
  if (nu < 2) throw ParameterError("path requires nu >= 2");
  detail::check_vertex(p, 1, nu, "path");
  detail::check_vertex(q, 1, nu, "path");
  const bool mirror = p + q == nu + 1;
  if (p == q && mirror) return Rational(2, nu + 1);
  if ((p == q) != mirror) return Rational(3, 2 * (nu + 1));
  return Rational(1, nu + 1);
}

/// Star K_{nu,1}, leaves 1..nu and center nu+1.
inline Rational d_star_exact(int nu, int p, int q) {
  if (nu < 1) throw ParameterError("star requires nu >= 1");
  detail::check_vertex(p, 1, nu + 1, "star");
  detail::check_vertex(q, 1, nu + 1, "star");
  const int center = nu + 1;
  if (p == center) std::swap(p, q);
  if (p == center) return Rational(1, 2);
  if (q == center) return Rational(1, 2 * nu);
  if (q == p) return Rational((nu - 1) * (nu - 1), nu * nu) + Rational(1, 2 * nu * nu);
  return Rational(3, 2 * nu * nu);
}

/// Hypercube H_m: weight from the origin on a vertex with u coordinates
/// equal to one. The alternating sum is carried out in exact integers.
inline Rational d_hypercube_exact(int m, int u) {
  if (m < 1) throw ParameterError("hypercube requires m >= 1");
  if (u < 0 || u > m) {
    throw ParameterError("hypercube weight class u=" + std::to_string(u) +
                         " outside 0.." + std::to_string(m));
  }
  BigInt total = 0;
  for (int j = 0; j <= m; ++j) {
    BigInt inner = 0;
    for (int b = 0; b <= u; ++b) {
      const BigInt term = detail::binomial(u, b) * detail::binomial(m - u, j - b);
      inner += (b % 2 ? -term : term);
    }
    total += inner * inner;
  }
  return Rational(total, BigInt(1) << (2 * m));
}

inline double d_cycle(int nu, int p, int q) {
  return d_cycle_exact(nu, p, q).convert_to<double>();
}
inline double d_path(int nu, int p, int q) {
  return d_path_exact(nu, p, q).convert_to<double>();
}
inline double d_star(int nu, int p, int q) {
  return d_star_exact(nu, p, q).convert_to<double>();
}
inline double d_hypercube(int m, int u) {
  return d_hypercube_exact(m, u).convert_to<double>();
}

/// One of the families with a closed-form density; `param` is nu for cycle,
/// path and star and m for the hypercube.
struct ClosedFormFamily {
  Family family;
  int param;

  FiniteGraph graph() const { return build_named(family, {param}); }
};

/// Exact d(p, q) with p, q in the internal 0-based numbering.
inline Rational closed_form_entry(const ClosedFormFamily& f, int p, int q) {
  switch (f.family) {
    case Family::cycle: return d_cycle_exact(f.param, p, q);
    case Family::path: return d_path_exact(f.param, p + 1, q + 1);
    case Family::star: return d_star_exact(f.param, p + 1, q + 1);
    case Family::hypercube:
      detail::check_vertex(p, 0, (1 << f.param) - 1, "hypercube");
      detail::check_vertex(q, 0, (1 << f.param) - 1, "hypercube");
      return d_hypercube_exact(f.param, std::popcount(static_cast<unsigned>(p ^ q)));
    default:
      throw ParameterError("no closed form for family '" + to_string(f.family) + "'");
  }
}

inline DensityMatrix closed_form_density(const ClosedFormFamily& f) {
  const int n = f.graph().nu();
  DensityMatrix d{Eigen::MatrixXd(n, n), DensitySource::closed_form};
  if (f.family == Family::hypercube) {
    std::vector<double> by_weight;
    for (int u = 0; u <= f.param; ++u) by_weight.push_back(d_hypercube(f.param, u));
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        d.values(p, q) = by_weight[std::popcount(static_cast<unsigned>(p ^ q))];
    return d;
  }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      d.values(p, q) = closed_form_entry(f, p, q).convert_to<double>();
  return d;
}

/// CSV "p,q,d" in the conventional labels of the family (cycle 0-based,
/// path and star 1-based, hypercube as bit strings), 12 significant digits.
inline std::string closed_form_csv(const ClosedFormFamily& f) {
  const FiniteGraph g = f.graph();
  const DensityMatrix d = closed_form_density(f);
  std::string out = "p,q,d\n";
  for (int p = 0; p < g.nu(); ++p)
    for (int q = 0; q < g.nu(); ++q)
      out += g.label(p) + "," + g.label(q) + "," + table_number(d(p, q)) + "\n";
  return out;
}

}  // namespace qwalk

#endif  // QWALK_CLOSED_FORMS_HPP
