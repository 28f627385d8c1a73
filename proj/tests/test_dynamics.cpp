#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "qwalk/closed_forms.hpp"
#include "qwalk/dynamics.hpp"

namespace qwalk {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm2(const ComplexVector& v) {
  double s = 0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

std::vector<double> probabilities(const ComplexVector& v) {
  std::vector<double> p;
  for (const auto& z : v) p.push_back(std::norm(z));
  return p;
}

TEST(Torus, CycleFiveSpectrum) {
  const auto op = build_torus(build_named(Family::cycle, {5}), 1, 10);
  ASSERT_EQ(op.dimension(), 50);
  std::vector<double> expected;
  for (int r = 0; r < 10; ++r)
    for (int j = 0; j < 5; ++j) expected.push_back(2 * std::cos(kTwoPi * r / 10) + 2 * std::cos(kTwoPi * j / 5));
  auto got = op.eigenvalues();
  std::sort(got.begin(), got.end());
  std::sort(expected.begin(), expected.end());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expected[i], 1e-12);
}

TEST(Torus, PathTwoSpectrum) {
  const auto op = build_torus(build_named(Family::path, {2}), 1, 4);
  for (int r = 0; r < 4; ++r) {
    EXPECT_NEAR(op.eigenvalues()[r * 2], 2 * std::cos(kTwoPi * r / 4) - 1, 1e-14);
    EXPECT_NEAR(op.eigenvalues()[r * 2 + 1], 2 * std::cos(kTwoPi * r / 4) + 1, 1e-14);
  }
}

TEST(Torus, MirroredWaveNumbersAreBitIdentical) {
  const auto op = build_torus(build_named(Family::cycle, {5}), 2, 7);
  const auto& grid = op.grid();
  for (std::int64_t r = 0; r < grid.size(); ++r) {
    auto p = grid.point(r);
    for (int& x : p) x = (7 - x) % 7;
    std::swap(p[0], p[1]);
    const std::int64_t mirror = grid.index(p);
    for (int j = 0; j < 5; ++j) EXPECT_EQ(op.eigenvalues()[r * 5 + j], op.eigenvalues()[mirror * 5 + j]);
  }
}

TEST(Torus, ApplyMatchesSparseAdjacency) {
  std::mt19937 rng(41);
  std::normal_distribution<double> gauss;
  const std::vector<std::pair<FiniteGraph, std::pair<int, int>>> cases = {
      {build_named(Family::cycle, {5}), {1, 9}},
      {build_named(Family::star, {3}), {2, 5}},
      {build_named(Family::petersen, {}), {2, 4}},
      {build_named(Family::path, {2}), {3, 3}},
      {from_edge_list(oracle::random_edge_list(rng, 7)), {1, 6}}};
  for (const auto& [g, shape] : cases) {
    const auto [d, n] = shape;
    const auto op = build_torus(g, d, n);
    const auto adj = oracle::torus_neighbors(g, d, n);
    ASSERT_EQ(static_cast<std::int64_t>(adj.size()), op.dimension());
    ComplexVector x(adj.size());
    for (auto& z : x) z = {gauss(rng), gauss(rng)};
    const auto y = op.apply(x);
    for (std::size_t v = 0; v < adj.size(); ++v) {
      std::complex<double> expected = 0.0;
      for (auto w : adj[v]) expected += x[static_cast<std::size_t>(w)];
      EXPECT_LE(std::abs(y[v] - expected), 1e-9);
    }
    const auto back = op.from_eigenbasis(op.to_eigenbasis(x));
    for (std::size_t v = 0; v < x.size(); ++v) EXPECT_LE(std::abs(back[v] - x[v]), 1e-12);
  }
}

TEST(Torus, RejectsBadSizes) {
  const auto g = build_named(Family::cycle, {4});
  EXPECT_THROW(build_torus(g, 1, 2), ParameterError);
  EXPECT_THROW(build_torus(g, 0, 8), ParameterError);
  EXPECT_THROW(build_torus(g, 3, 128), ParameterError);
  const auto op = build_torus(g, 2, 4);
  EXPECT_THROW(op.vertex_index(TorusStart{{0}, 0}), ParameterError);
  EXPECT_THROW(op.vertex_index(TorusStart{{0, 0}, 4}), ParameterError);
}

TEST(Evolve, IdentityAtTimeZero) {
  const auto op = build_torus(build_named(Family::cycle, {5}), 1, 6);
  const TorusStart s{{2}, 3};
  const auto psi = evolve(op, s, 0.0);
  for (std::int64_t v = 0; v < op.dimension(); ++v)
    EXPECT_EQ(psi[static_cast<std::size_t>(v)], v == op.vertex_index(s) ? 1.0 : 0.0);
}

TEST(Evolve, MatchesDenseExponential) {
  const auto g = build_named(Family::path, {2});
  const auto op = build_torus(g, 1, 4);
  const auto a = oracle::torus_dense(g, 1, 4);
  const TorusStart s{{0}, 0};
  const auto psi = evolve(op, s, std::numbers::pi);
  const auto expected = oracle::dense_evolve(a, op.vertex_index(s), std::numbers::pi);
  for (int v = 0; v < 8; ++v) EXPECT_LE(std::abs(psi[v] - expected[v]), 1e-8);

  const auto k31 = build_named(Family::star, {3});
  const auto op2 = build_torus(k31, 2, 3);
  const auto a2 = oracle::torus_dense(k31, 2, 3);
  const TorusStart s2{{1, 2}, 3};
  for (double t : {0.3, 2.0, 7.5}) {
    const auto got = evolve(op2, s2, t);
    const auto want = oracle::dense_evolve(a2, op2.vertex_index(s2), t);
    for (Eigen::Index v = 0; v < a2.rows(); ++v) EXPECT_LE(std::abs(got[v] - want[v]), 1e-8);
  }
}

TEST(Evolve, Unitary) {
  std::mt19937 rng(43);
  std::uniform_real_distribution<double> time(-50.0, 50.0);
  for (auto f : {Family::cycle, Family::path, Family::star}) {
    const auto op = build_torus(build_named(f, {4}), 2, 5);
    for (int k = 0; k < 10; ++k) EXPECT_NEAR(norm2(evolve(op, {{1, 4}, 2}, time(rng))), 1.0, 1e-10);
  }
}

TEST(TimeAveraged, MatchesSimpsonQuadrature) {
  struct Case {
    FiniteGraph g;
    int d;
    int n;
    TorusStart s;
    double horizon;
  };
  const std::vector<Case> cases = {
      {build_named(Family::path, {2}), 1, 4, {{0}, 0}, 50.0},
      {build_named(Family::cycle, {3}), 1, 8, {{3}, 1}, 20.0},
      {build_named(Family::star, {3}), 1, 5, {{0}, 3}, 15.0},
      {build_named(Family::path, {4}), 1, 16, {{0}, 1}, 10.0},
      {build_named(Family::path, {2}), 2, 4, {{1, 2}, 1}, 12.0}};
  for (const auto& c : cases) {
    ASSERT_LE(c.g.nu() * static_cast<int>(std::pow(c.n, c.d)), 64);
    const auto op = build_torus(c.g, c.d, c.n);
    const auto avg = time_averaged(op, c.s, c.horizon);
    const auto quad = oracle::simpson_average(
        [&](double t) { return probabilities(evolve(op, c.s, t)); }, c.horizon, 10000);
    EXPECT_NEAR(avg.total(), 1.0, 1e-10);
    for (std::size_t v = 0; v < quad.size(); ++v) EXPECT_NEAR(avg.values[v], quad[v], 1e-6);
  }
}

TEST(TimeAveraged, ShortHorizonStaysAtStart) {
  const auto op = build_torus(build_named(Family::cycle, {5}), 1, 6);
  const TorusStart s{{1}, 2};
  const auto avg = time_averaged(op, s, 1e-6);
  for (std::int64_t v = 0; v < op.dimension(); ++v)
    EXPECT_NEAR(avg.values[static_cast<std::size_t>(v)], v == op.vertex_index(s) ? 1.0 : 0.0, 1e-9);
}

TEST(TimeAveraged, ApproachesInfiniteLimit) {
  const auto op = build_torus(build_named(Family::cycle, {3}), 1, 8);
  const TorusStart s{{0}, 0};
  const auto inf = infinite_time_averaged(op, s);
  double previous = 1.0;
  for (double horizon : {1e2, 1e3, 1e4}) {
    const auto avg = time_averaged(op, s, horizon);
    const double tv = total_variation(avg.values, inf.values);
    EXPECT_LE(tv, 1.1 * previous);
    previous = tv;
  }
  EXPECT_LE(total_variation(time_averaged(op, s, 1e5).values, inf.values), 5e-4);
}

TEST(TimeAveraged, RejectsBadArguments) {
  const auto op = build_torus(build_named(Family::cycle, {3}), 1, 8);
  EXPECT_THROW(time_averaged(op, {{0}, 0}, 0.0), ParameterError);
  EXPECT_THROW(time_averaged(op, {{0}, 0}, std::numeric_limits<double>::infinity()), ParameterError);
  EXPECT_THROW(infinite_time_averaged(op, {{0}, 0}, 0.0), ParameterError);
  const auto big = build_torus(build_named(Family::cycle, {3}), 2, 64);
  EXPECT_THROW(time_averaged(big, {{0, 0}, 0}, 10.0), ParameterError);
  EXPECT_THROW(infinite_time_averaged(big, {{0, 0}, 0}), ParameterError);
}

// Summed over the fiber, only the cycle factor matters and the cell mass is
// the limiting density of C_N itself.
TEST(InfiniteTime, CellMassIsCycleDensity) {
  const int n = 25;
  const auto op = build_torus(build_named(Family::cycle, {5}), 1, n);
  for (int cell : {0, 7}) {
    for (int p = 0; p < 5; ++p) {
      const auto dist = infinite_time_averaged(op, {{cell}, p});
      EXPECT_NEAR(dist.total(), 1.0, 1e-10);
      const auto mass = dist.cell_mass(5);
      for (int k = 0; k < n; ++k) EXPECT_NEAR(mass[k], d_cycle(n, cell, k), 1e-9);
    }
  }
}

TEST(InfiniteTime, ApproachesProductPrediction) {
  for (const auto& g : {build_named(Family::cycle, {3}), build_named(Family::cycle, {5}),
                        build_named(Family::path, {4}), build_named(Family::star, {3})}) {
    const auto d = limiting_density(g);
    for (int p = 0; p < g.nu(); ++p) {
      double previous = 2.0;
      for (int n : {16, 32, 64}) {
        const auto op = build_torus(g, 1, n);
        const auto dist = infinite_time_averaged(op, {{0}, p});
        const double tv = total_variation(dist.values, product_prediction(op, d, p));
        EXPECT_LT(tv, previous) << "nu=" << g.nu() << " p=" << p << " N=" << n;
        previous = tv;
      }
    }
  }
}

TEST(InfiniteTime, EntriesTrackCycleDensity) {
  double previous = 1.0;
  for (int n : {32, 64}) {
    const auto op = build_torus(build_named(Family::cycle, {5}), 1, n);
    const auto dist = infinite_time_averaged(op, {{0}, 0});
    double err = 0;
    for (std::int64_t v = 0; v < op.dimension(); ++v)
      err = std::max(err, std::abs(dist.values[static_cast<std::size_t>(v)] - d_cycle(5, 0, static_cast<int>(v % 5)) / n));
    EXPECT_LT(err, previous);
    previous = err;
  }
}

TEST(TotalVariation, Examples) {
  const std::vector<double> x{0.2, 0.3, 0.5};
  EXPECT_EQ(total_variation(x, x), 0.0);
  EXPECT_DOUBLE_EQ(total_variation(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(total_variation(std::vector<double>{.5, .5}, std::vector<double>{.75, .25}), 0.25);
  EXPECT_THROW(total_variation(x, std::vector<double>{1.0}), ParameterError);
}

TEST(Distribution, CsvLayout) {
  const auto op = build_torus(build_named(Family::path, {2}), 2, 3);
  const auto dist = infinite_time_averaged(op, {{0, 0}, 0});
  const std::string csv = dist.to_csv(op);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "cell_0,cell_1,q,mass");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 18);
  EXPECT_EQ(csv, infinite_time_averaged(op, {{0, 0}, 0}).to_csv(op));
}

}  // namespace
}  // namespace qwalk
