#ifndef QWALK_GRAPH_HPP
#define QWALK_GRAPH_HPP

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"

namespace qwalk {

enum class Family {
  cycle,
  path,
  star,
  complete,
  complete_bipartite,
  hypercube,
  petersen,
  custom,
};

inline std::string to_string(Family f) {
  switch (f) {
    case Family::cycle: return "cycle";
    case Family::path: return "path";
    case Family::star: return "star";
    case Family::complete: return "complete";
    case Family::complete_bipartite: return "complete_bipartite";
    case Family::hypercube: return "hypercube";
    case Family::petersen: return "petersen";
    case Family::custom: return "custom";
  }
  return "custom";
}

inline Family family_from_string(std::string_view name) {
  static const std::map<std::string, Family, std::less<>> table = {
      {"cycle", Family::cycle},
      {"path", Family::path},
      {"star", Family::star},
      {"complete", Family::complete},
      {"complete_bipartite", Family::complete_bipartite},
      {"complete-bipartite", Family::complete_bipartite},
      {"bipartite", Family::complete_bipartite},
      {"hypercube", Family::hypercube},
      {"petersen", Family::petersen},
      {"custom", Family::custom},
  };
  auto it = table.find(name);
  if (it == table.end()) {
    throw ParameterError("unknown graph family '" + std::string(name) + "'");
  }
  return it->second;
}

/// Simple undirected graph on vertices 0..nu-1.
///
/// Edges are stored normalized (u < v) and sorted. Named families keep their
/// tag so vertices can be printed in the conventional labeling: path and star
/// vertices are 1-based (the star center is the last vertex), hypercube
/// vertices are bit strings where bit i is coordinate i.
class FiniteGraph {
 public:
  using Edge = std::pair<int, int>;

  FiniteGraph(int nu, std::vector<Edge> edges, Family family = Family::custom)
      : nu_(nu), family_(family) {
    if (nu < 1) {
      throw ParameterError("graph needs at least one vertex");
    }
    for (auto& [u, v] : edges) {
      if (u < 0 || v < 0 || u >= nu || v >= nu) {
        throw ParameterError("edge (" + std::to_string(u) + "," +
                             std::to_string(v) + ") has an endpoint outside 0.." +
                             std::to_string(nu - 1));
      }
      if (u == v) {
        throw ParameterError("self-loop at vertex " + std::to_string(u));
      }
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
      throw ParameterError("duplicate edge");
    }
    edges_ = std::move(edges);
    neighbors_.assign(static_cast<std::size_t>(nu), {});
    for (const auto& [u, v] : edges_) {
      neighbors_[u].push_back(v);
      neighbors_[v].push_back(u);
    }
    for (auto& n : neighbors_) std::sort(n.begin(), n.end());
  }

  int nu() const noexcept { return nu_; }
  Family family() const noexcept { return family_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<int>& neighbors(int v) const { return neighbors_.at(v); }
  int degree(int v) const { return static_cast<int>(neighbors_.at(v).size()); }

  bool adjacent(int u, int v) const {
    const auto& n = neighbors_.at(u);
    return std::binary_search(n.begin(), n.end(), v);
  }

  Eigen::MatrixXd adjacency() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nu_, nu_);
    for (const auto& [u, v] : edges_) {
      a(u, v) = 1.0;
      a(v, u) = 1.0;
    }
    return a;
  }

  std::string label(int v) const {
    switch (family_) {
      case Family::path:
      case Family::star:
        return std::to_string(v + 1);
      case Family::hypercube: {
        const int m = std::countr_zero(static_cast<unsigned>(nu_));
        std::string bits;
        for (int i = 0; i < m; ++i) bits.push_back(((v >> i) & 1) ? '1' : '0');
        return bits;
      }
      default:
        return std::to_string(v);
    }
  }

 private:
  int nu_;
  Family family_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> neighbors_;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

inline int param_at(const std::vector<int>& params, std::size_t i,
                    const std::string& family) {
  if (params.size() <= i) {
    throw ParameterError(family + " needs " + std::to_string(i + 1) +
                         " parameter(s)");
  }
  return params[i];
}

}  // namespace detail

/// Builds one of the named families.
///
///   cycle [nu]               nu >= 3
///   path [nu]                nu >= 2
///   star [nu]                nu >= 1 leaves, center is vertex nu
///   complete [nu]            nu >= 2
///   complete_bipartite [m,n] m, n >= 1, parts 0..m-1 and m..m+n-1
///   hypercube [m]            m >= 1, 2^m vertices, m <= 20
///   petersen []              Kneser graph K(5,2)
inline FiniteGraph build_named(Family family, const std::vector<int>& params) {
  using detail::param_at;
  using detail::require;
  std::vector<FiniteGraph::Edge> edges;
  switch (family) {
    case Family::cycle: {
      const int nu = param_at(params, 0, "cycle");
      require(nu >= 3, "cycle requires nu >= 3");
      for (int v = 0; v < nu; ++v) edges.emplace_back(v, (v + 1) % nu);
      return FiniteGraph(nu, std::move(edges), family);
    }
    case Family::path: {
      const int nu = param_at(params, 0, "path");
      require(nu >= 2, "path requires nu >= 2");
      for (int v = 0; v + 1 < nu; ++v) edges.emplace_back(v, v + 1);
      return FiniteGraph(nu, std::move(edges), family);
    }
    case Family::star: {
      const int nu = param_at(params, 0, "star");
      require(nu >= 1, "star requires nu >= 1");
      for (int v = 0; v < nu; ++v) edges.emplace_back(v, nu);
      return FiniteGraph(nu + 1, std::move(edges), family);
    }
    case Family::complete: {
      const int nu = param_at(params, 0, "complete");
      require(nu >= 2, "complete requires nu >= 2");
      for (int u = 0; u < nu; ++u)
        for (int v = u + 1; v < nu; ++v) edges.emplace_back(u, v);
      return FiniteGraph(nu, std::move(edges), family);
    }
    case Family::complete_bipartite: {
      const int m = param_at(params, 0, "complete_bipartite");
      const int n = param_at(params, 1, "complete_bipartite");
      require(m >= 1 && n >= 1, "complete_bipartite requires m >= 1 and n >= 1");
      for (int u = 0; u < m; ++u)
        for (int v = 0; v < n; ++v) edges.emplace_back(u, m + v);
      return FiniteGraph(m + n, std::move(edges), family);
    }
    case Family::hypercube: {
      const int m = param_at(params, 0, "hypercube");
      require(m >= 1, "hypercube requires m >= 1");
      require(m <= 20, "hypercube requires m <= 20");
      const int nu = 1 << m;
      for (int x = 0; x < nu; ++x)
        for (int i = 0; i < m; ++i) {
          const int y = x ^ (1 << i);
          if (x < y) edges.emplace_back(x, y);
        }
      return FiniteGraph(nu, std::move(edges), family);
    }
    case Family::petersen: {
      // Vertices are the 2-subsets of {0..4} in lexicographic order,
      // adjacent when disjoint.
      edges = {{0, 7}, {0, 8}, {0, 9}, {1, 5}, {1, 6}, {1, 9}, {2, 4}, {2, 6},
               {2, 8}, {3, 4}, {3, 5}, {3, 7}, {4, 9}, {5, 8}, {6, 7}};
      return FiniteGraph(10, std::move(edges), family);
    }
    case Family::custom:
      break;
  }
  throw ParameterError("family '" + to_string(family) +
                       "' has no named construction");
}

/// Parses "u v" lines (0-indexed, '#' comments, blank lines ignored).
/// Duplicate edges are merged; nu is one more than the largest index.
inline FiniteGraph from_edge_list(std::string_view text) {
  std::set<FiniteGraph::Edge> edges;
  int max_index = -1;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    long long ends[2] = {0, 0};
    std::size_t cursor = first;
    for (auto& value : ends) {
      cursor = line.find_first_not_of(" \t", cursor);
      if (cursor == std::string::npos) {
        throw ParseError(line_no, "expected two vertex indices");
      }
      const char* begin = line.data() + cursor;
      const char* end = line.data() + line.size();
      auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || value < 0 || value > (1LL << 30) ||
          (ptr != end && *ptr != ' ' && *ptr != '\t')) {
        throw ParseError(line_no, "expected a nonnegative integer");
      }
      cursor = static_cast<std::size_t>(ptr - line.data());
    }
    if (line.find_first_not_of(" \t", cursor) != std::string::npos) {
      throw ParseError(line_no, "trailing characters after edge");
    }

    int u = static_cast<int>(ends[0]);
    int v = static_cast<int>(ends[1]);
    if (u == v) {
      throw ParseError(line_no, "self-loop at vertex " + std::to_string(u));
    }
    if (u > v) std::swap(u, v);
    edges.emplace(u, v);
    max_index = std::max(max_index, v);
  }
  if (edges.empty()) {
    throw ParseError(line_no, "edge list contains no edges");
  }
  return FiniteGraph(max_index + 1, {edges.begin(), edges.end()});
}

enum class ProductKind { cartesian, tensor, strong };

inline std::string to_string(ProductKind k) {
  switch (k) {
    case ProductKind::cartesian: return "cartesian";
    case ProductKind::tensor: return "tensor";
    case ProductKind::strong: return "strong";
  }
  return "cartesian";
}

inline ProductKind product_kind_from_string(std::string_view name) {
  if (name == "cartesian") return ProductKind::cartesian;
  if (name == "tensor") return ProductKind::tensor;
  if (name == "strong") return ProductKind::strong;
  throw ParameterError("unknown product kind '" + std::string(name) + "'");
}

/// Directed edge from fundamental vertex `from` in cell 0 to vertex `to` in
/// cell `offset`.
struct OffsetEdge {
  int from;
  int to;
  std::vector<int> offset;

  friend bool operator==(const OffsetEdge&, const OffsetEdge&) = default;
  friend auto operator<=>(const OffsetEdge&, const OffsetEdge&) = default;
};

/// Z^d-periodic graph given by its fundamental domain.
///
/// Every edge must appear in both directions: (p, q, n) together with
/// (q, p, -n). Connectivity of the infinite graph is not checked; callers
/// that need a crystal must supply a connected one.
class PeriodicGraphSpec {
 public:
  PeriodicGraphSpec(int d, int nu, std::vector<OffsetEdge> edges,
                    std::vector<double> potential = {})
      : d_(d), nu_(nu), edges_(std::move(edges)), potential_(std::move(potential)) {
    if (d < 1) throw ParameterError("lattice dimension must be >= 1");
    if (nu < 1) throw ParameterError("fundamental domain must be nonempty");
    if (potential_.empty()) potential_.assign(static_cast<std::size_t>(nu), 0.0);
    if (potential_.size() != static_cast<std::size_t>(nu)) {
      throw ParameterError("potential must have one entry per fundamental vertex");
    }
    std::multiset<OffsetEdge> forward;
    for (const auto& e : edges_) {
      if (e.from < 0 || e.to < 0 || e.from >= nu || e.to >= nu) {
        throw ParameterError("offset edge endpoint out of range");
      }
      if (e.offset.size() != static_cast<std::size_t>(d)) {
        throw ParameterError("offset edge has wrong lattice dimension");
      }
      if (e.from == e.to &&
          std::all_of(e.offset.begin(), e.offset.end(), [](int x) { return x == 0; })) {
        throw ParameterError("offset edge is a self-loop");
      }
      forward.insert(e);
    }
    std::multiset<OffsetEdge> reversed;
    for (const auto& e : edges_) {
      OffsetEdge r{e.to, e.from, e.offset};
      for (auto& x : r.offset) x = -x;
      reversed.insert(std::move(r));
    }
    if (forward != reversed) {
      throw ParameterError("offset edges are not closed under reversal");
    }
  }

  int dim() const noexcept { return d_; }
  int nu() const noexcept { return nu_; }
  const std::vector<OffsetEdge>& edges() const noexcept { return edges_; }
  const std::vector<double>& potential() const noexcept { return potential_; }

 private:
  int d_;
  int nu_;
  std::vector<OffsetEdge> edges_;
  std::vector<double> potential_;
};

/// Z^d itself: one vertex per cell, neighbors at +-e_i.
inline PeriodicGraphSpec integer_lattice_spec(int d) {
  std::vector<OffsetEdge> edges;
  for (int i = 0; i < d; ++i) {
    for (int sign : {1, -1}) {
      std::vector<int> n(static_cast<std::size_t>(d), 0);
      n[i] = sign;
      edges.push_back({0, 0, n});
    }
  }
  return PeriodicGraphSpec(d, 1, std::move(edges));
}

/// Honeycomb lattice with fundamental domain {A, B}; A(n) is joined to B(n),
/// B(n - e_1) and B(n - e_2).
inline PeriodicGraphSpec honeycomb_spec() {
  std::vector<OffsetEdge> edges;
  for (const std::vector<int>& n : {std::vector<int>{0, 0}, {-1, 0}, {0, -1}}) {
    edges.push_back({0, 1, n});
    edges.push_back({1, 0, {-n[0], -n[1]}});
  }
  return PeriodicGraphSpec(2, 2, std::move(edges));
}

/// Product of Z^d with a finite graph, expressed with fundamental domain G.
inline PeriodicGraphSpec product_periodic_spec(const FiniteGraph& g, int d,
                                               ProductKind kind) {
  if (d < 1) throw ParameterError("lattice dimension must be >= 1");
  const std::vector<int> zero(static_cast<std::size_t>(d), 0);
  std::vector<OffsetEdge> edges;
  const bool horizontal = kind != ProductKind::tensor;
  const bool vertical = kind != ProductKind::tensor;
  const bool diagonal = kind != ProductKind::cartesian;

  if (vertical) {
    for (const auto& [u, v] : g.edges()) {
      edges.push_back({u, v, zero});
      edges.push_back({v, u, zero});
    }
  }
  for (int i = 0; i < d; ++i) {
    for (int sign : {1, -1}) {
      std::vector<int> n = zero;
      n[i] = sign;
      if (horizontal) {
        for (int p = 0; p < g.nu(); ++p) edges.push_back({p, p, n});
      }
      if (diagonal) {
        for (const auto& [u, v] : g.edges()) {
          edges.push_back({u, v, n});
          edges.push_back({v, u, n});
        }
      }
    }
  }
  return PeriodicGraphSpec(d, g.nu(), std::move(edges));
}

}  // namespace qwalk

#endif  // QWALK_GRAPH_HPP
