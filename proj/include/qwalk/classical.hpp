#ifndef QWALK_CLASSICAL_HPP
#define QWALK_CLASSICAL_HPP

#include <cmath>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "qwalk/dynamics.hpp"
#include "qwalk/errors.hpp"
#include "qwalk/format.hpp"
#include "qwalk/graph.hpp"

// Simple random walk on a finite graph: hop to a uniformly random neighbour.

namespace qwalk {

/// pi(v) = deg(v) / (2 |E|).
inline std::vector<double> stationary_distribution(const FiniteGraph& g) {
  if (g.edge_count() == 0) throw ParameterError("graph has no edges");
  std::vector<double> pi(static_cast<std::size_t>(g.nu()));
  const double twice_edges = 2.0 * static_cast<double>(g.edge_count());
  for (int v = 0; v < g.nu(); ++v) {
    if (g.degree(v) == 0) {
      throw ParameterError("vertex " + std::to_string(v) +
                           " is isolated; the neighbour walk is undefined there");
    }
    pi[v] = g.degree(v) / twice_edges;
  }
  return pi;
}

/// BFS two-colouring of every component.
inline bool is_bipartite(const FiniteGraph& g) {
  std::vector<int> colour(static_cast<std::size_t>(g.nu()), -1);
  for (int root = 0; root < g.nu(); ++root) {
    if (colour[root] != -1) continue;
    colour[root] = 0;
    std::queue<int> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
      const int v = frontier.front();
      frontier.pop();
      for (int w : g.neighbors(v)) {
        if (colour[w] == -1) {
          colour[w] = 1 - colour[v];
          frontier.push(w);
        } else if (colour[w] == colour[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

/// One step x -> xP, or x -> x(I + P)/2 when lazy.
inline std::vector<double> transition_step(const FiniteGraph& g, const std::vector<double>& x,
                                           bool lazy) {
  std::vector<double> next(x.size(), 0.0);
  for (int v = 0; v < g.nu(); ++v) {
    if (x[v] == 0.0) continue;
    const int deg = g.degree(v);
    if (deg == 0) {
      next[v] += x[v];
      continue;
    }
    const double move = lazy ? 0.5 * x[v] : x[v];
    if (lazy) next[v] += 0.5 * x[v];
    for (int w : g.neighbors(v)) next[w] += move / deg;
  }
  return next;
}

/// Distribution after `steps` transitions from `start`.
inline std::vector<double> iterate_distribution(const FiniteGraph& g, int start, int steps,
                                                bool lazy = false) {
  if (start < 0 || start >= g.nu()) throw ParameterError("start vertex out of range");
  if (steps < 0) throw ParameterError("steps must be nonnegative");
  std::vector<double> x(static_cast<std::size_t>(g.nu()), 0.0);
  x[start] = 1.0;
  for (int n = 0; n < steps; ++n) x = transition_step(g, x, lazy);
  return x;
}

struct WalkReport {
  std::vector<double> stationary;
  bool bipartite = false;
  // Plain iterates only converge to the stationary law on non-bipartite
  // connected graphs; the lazy walk converges on any connected graph.
  bool iterates_converge = false;
  std::optional<std::vector<double>> iterate;
  int steps = 0;
  bool lazy = false;

  std::string to_json() const {
    auto list = [](const std::vector<double>& v) {
      std::string s = "[";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + json_number(v[i]);
      return s + "]";
    };
    std::string out = "{\"stationary\": " + list(stationary) +
                      ", \"bipartite\": " + (bipartite ? "true" : "false") +
                      ", \"iterates_converge\": " + (iterates_converge ? "true" : "false");
    if (iterate) {
      out += ", \"steps\": " + std::to_string(steps) + ", \"lazy\": " + (lazy ? "true" : "false") +
             ", \"iterate\": " + list(*iterate) +
             ", \"tv_to_stationary\": " + json_number(total_variation(*iterate, stationary));
    }
    return out + "}";
  }
};

inline WalkReport classical_report(const FiniteGraph& g, std::optional<int> start = std::nullopt,
                                   int steps = 0, bool lazy = false) {
  WalkReport report;
  report.stationary = stationary_distribution(g);
  report.bipartite = is_bipartite(g);
  report.iterates_converge = lazy || !report.bipartite;
  report.steps = steps;
  report.lazy = lazy;
  if (start) report.iterate = iterate_distribution(g, *start, steps, lazy);
  return report;
}

}  // namespace qwalk

#endif  // QWALK_CLASSICAL_HPP
