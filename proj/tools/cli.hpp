#ifndef QWALK_TOOLS_CLI_HPP
#define QWALK_TOOLS_CLI_HPP

#include <algorithm>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qwalk/qwalk.hpp"

namespace qwalk::cli {

struct GraphOptions {
  std::string family = "cycle";
  int nu = 5;
  int m = 3;
  int n = 3;
  std::string edges;

  void attach(CLI::App& app) {
    app.add_option("--family", family,
                   "cycle | path | star | complete | complete_bipartite | hypercube | "
                   "petersen | custom")
        ->capture_default_str();
    app.add_option("--nu", nu, "vertex count (cycle, path, complete) or leaf count (star)")
        ->capture_default_str();
    app.add_option("--m", m, "hypercube dimension, or first part of complete_bipartite")
        ->capture_default_str();
    app.add_option("--n", n, "second part of complete_bipartite")->capture_default_str();
    app.add_option("--edges", edges, "edge-list file for --family custom");
  }

  FiniteGraph build() const {
    const Family f = family_from_string(family);
    switch (f) {
      case Family::hypercube: return build_named(f, {m});
      case Family::complete_bipartite: return build_named(f, {m, n});
      case Family::petersen: return build_named(f, {});
      case Family::custom: {
        if (edges.empty()) throw ParameterError("--family custom needs --edges FILE");
        std::ifstream in(edges);
        if (!in) throw ParameterError("cannot read edge list '" + edges + "'");
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return from_edge_list(text);
      }
      default: return build_named(f, {nu});
    }
  }

  /// Closed-form families take nu, except the hypercube which takes m.
  ClosedFormFamily closed_form() const {
    const Family f = family_from_string(family);
    return {f, f == Family::hypercube ? m : nu};
  }
};

inline std::string density_csv(const FiniteGraph& g, const DensityMatrix& d) {
  std::string out = "p,q,d\n";
  for (int p = 0; p < d.nu(); ++p)
    for (int q = 0; q < d.nu(); ++q)
      out += g.label(p) + "," + g.label(q) + "," + json_number(d(p, q)) + "\n";
  return out;
}

/// Runs one subcommand. Exit codes: 0 success, 1 numeric failure,
/// 2 argument or parameter error.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limiting distributions of time-averaged quantum walks on periodic graphs"};
  app.require_subcommand(1, 1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  GraphOptions graph;
  double tol = kDefaultClusterTol;
  double delta = kDefaultCollisionDelta;
  int grid_n = 64;
  int dim = 1;
  std::string format = "json";
  std::string method = "numeric";
  std::string product = "cartesian";
  std::string base = "zd";
  std::string horizon = "1e4";
  std::vector<int> start_cell;
  int start_vertex = 0;
  std::string out_path;
  int start = -1;
  int steps = 0;
  bool lazy = false;

  auto* density = app.add_subcommand("density", "Limiting density matrix d(p,q)");
  graph.attach(*density);
  density->add_option("--tol", tol, "eigenvalue clustering tolerance")->capture_default_str();
  density->add_option("--format", format, "json | csv")->capture_default_str();
  density->add_option("--method", method,
                      "numeric (eigendecomposition) | analytic (cycle, path, star, hypercube) | "
                      "quadrature (grid average on Z^d x G)")
      ->capture_default_str();
  density->add_option("--N", grid_n, "grid size for --method quadrature")->capture_default_str();
  density->add_option("--d", dim, "lattice dimension for --method quadrature")->capture_default_str();

  auto* closed = app.add_subcommand("closed-form", "Closed-form density table (p,q,d)");
  graph.attach(*closed);

  auto* floquet = app.add_subcommand("floquet-check", "Scan the band-collision condition");
  graph.attach(*floquet);
  floquet->add_option("--product", product, "cartesian | tensor | strong")->capture_default_str();
  floquet->add_option("--base", base, "zd | triangular")->capture_default_str();
  floquet->add_option("--d", dim, "dimension of Z^d")->capture_default_str();
  floquet->add_option("--N", grid_n, "grid size")->capture_default_str();
  floquet->add_option("--delta", delta, "collision tolerance")->capture_default_str();
  floquet->add_option("--tol", tol, "eigenvalue clustering tolerance")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Time-averaged walk on the torus (C_N)^d x G");
  graph.attach(*simulate);
  simulate->add_option("--d", dim, "lattice dimension")->capture_default_str();
  simulate->add_option("--N", grid_n, "cells per axis")->capture_default_str();
  simulate->add_option("--T", horizon, "time horizon, or 'inf'")->capture_default_str();
  simulate->add_option("--start-cell", start_cell, "start cell coordinates (default origin)");
  simulate->add_option("--start-vertex", start_vertex, "start vertex in the fundamental domain")
      ->capture_default_str();
  simulate->add_option("--tol", tol, "eigenvalue clustering tolerance for T=inf")
      ->capture_default_str();
  simulate->add_option("--out", out_path, "write the distribution CSV here instead of stdout");

  auto* classical = app.add_subcommand("classical", "Classical random-walk report");
  graph.attach(*classical);
  classical->add_option("--start", start, "start vertex for iterates");
  classical->add_option("--steps", steps, "number of transitions")->capture_default_str();
  classical->add_flag("--lazy", lazy, "use the lazy walk (I+P)/2");

  auto* compare = app.add_subcommand("compare", "Quantum d(p,.) next to classical stationary law");
  graph.attach(*compare);
  compare->add_option("--start", start_vertex, "start vertex p")->capture_default_str();
  compare->add_option("--tol", tol, "eigenvalue clustering tolerance")->capture_default_str();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (density->parsed()) {
      const FiniteGraph g = graph.build();
      DensityMatrix d;
      if (method == "numeric") {
        d = limiting_density(g, tol);
      } else if (method == "analytic") {
        const auto cf = graph.closed_form();
        d = density_from_decomposition(analytic_spectrum(cf.family, {cf.param}, tol),
                                       DensitySource::analytic);
      } else if (method == "quadrature") {
        d = general_density(product_periodic_spec(g, dim, ProductKind::cartesian), grid_n, tol)
                .as_density();
      } else {
        throw ParameterError("unknown --method '" + method + "'");
      }
      if (format == "json") {
        out << d.to_json() << "\n";
      } else if (format == "csv") {
        out << density_csv(g, d);
      } else {
        throw ParameterError("unknown --format '" + format + "'");
      }
    } else if (closed->parsed()) {
      out << closed_form_csv(graph.closed_form());
    } else if (floquet->parsed()) {
      BaseLattice lattice;
      if (base == "zd") {
        lattice = BaseLattice::integer(dim);
      } else if (base == "triangular") {
        lattice = BaseLattice::triangular();
      } else {
        throw ParameterError("unknown --base '" + base + "'");
      }
      const auto bs = product_spec(lattice, graph.build(), product_kind_from_string(product), tol);
      out << floquet_condition_fraction(bs, grid_n, delta).to_json() << "\n";
    } else if (simulate->parsed()) {
      const FiniteGraph g = graph.build();
      const TorusOperator op = build_torus(g, dim, grid_n, tol);
      TorusStart s{start_cell, start_vertex};
      if (s.cell.empty()) s.cell.assign(static_cast<std::size_t>(dim), 0);
      TimeAveragedDistribution dist;
      if (horizon == "inf") {
        dist = infinite_time_averaged(op, s, tol);
      } else {
        double t = 0.0;
        try {
          std::size_t used = 0;
          t = std::stod(horizon, &used);
          if (used != horizon.size()) throw std::invalid_argument(horizon);
        } catch (const std::exception&) {
          throw ParameterError("--T must be a number or 'inf'");
        }
        dist = time_averaged(op, s, t);
      }
      const auto prediction = product_prediction(op, limiting_density(g, tol), start_vertex);
      const std::string summary =
          "tv_vs_prediction," + table_number(total_variation(dist.values, prediction)) + "\n";
      if (out_path.empty()) {
        out << dist.to_csv(op);
        err << summary;
      } else {
        std::ofstream file(out_path);
        if (!file) throw ParameterError("cannot write '" + out_path + "'");
        file << dist.to_csv(op);
        out << summary;
      }
    } else if (classical->parsed()) {
      const FiniteGraph g = graph.build();
      const auto report =
          start >= 0 ? classical_report(g, start, steps, lazy) : classical_report(g);
      out << report.to_json() << "\n";
    } else if (compare->parsed()) {
      const FiniteGraph g = graph.build();
      if (start_vertex < 0 || start_vertex >= g.nu()) throw ParameterError("--start out of range");
      const DensityMatrix d = limiting_density(g, tol);
      const auto pi = stationary_distribution(g);
      out << "q,quantum_d,classical_pi,uniform\n";
      for (int q = 0; q < g.nu(); ++q) {
        out << g.label(q) << "," << table_number(d(start_vertex, q)) << ","
            << table_number(pi[q]) << "," << table_number(1.0 / g.nu()) << "\n";
      }
    }
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace qwalk::cli

#endif  // QWALK_TOOLS_CLI_HPP
