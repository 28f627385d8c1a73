#include <gtest/gtest.h>

#include <random>

#include <json.hpp>

#include "oracles.hpp"
#include "qwalk/classical.hpp"
#include "qwalk/closed_forms.hpp"

namespace qwalk {
namespace {

std::vector<double> uniform(int n) { return std::vector<double>(static_cast<std::size_t>(n), 1.0 / n); }

TEST(Stationary, Examples) {
  EXPECT_EQ(stationary_distribution(build_named(Family::complete, {4})), uniform(4));
  EXPECT_EQ(stationary_distribution(build_named(Family::star, {3})),
            (std::vector<double>{1.0 / 6, 1.0 / 6, 1.0 / 6, 0.5}));
  EXPECT_EQ(stationary_distribution(build_named(Family::petersen, {})), uniform(10));
}

TEST(Stationary, InvariantUnderOneStep) {
  std::mt19937 rng(53);
  std::vector<FiniteGraph> graphs = {build_named(Family::path, {7}), build_named(Family::star, {6}),
                                     build_named(Family::complete_bipartite, {2, 5}),
                                     build_named(Family::hypercube, {4})};
  for (int i = 0; i < 30; ++i) graphs.push_back(from_edge_list(oracle::random_edge_list(rng, 20)));
  for (const auto& g : graphs) {
    bool isolated = false;
    for (int v = 0; v < g.nu(); ++v) isolated |= g.degree(v) == 0;
    if (isolated) {
      EXPECT_THROW(stationary_distribution(g), ParameterError);
      continue;
    }
    const auto pi = stationary_distribution(g);
    double total = 0;
    for (double x : pi) total += x;
    EXPECT_NEAR(total, 1.0, 1e-12);
    for (bool lazy : {false, true}) {
      const auto next = transition_step(g, pi, lazy);
      for (int v = 0; v < g.nu(); ++v) EXPECT_NEAR(next[v], pi[v], 1e-12);
    }
  }
}

TEST(Bipartite, Examples) {
  EXPECT_FALSE(is_bipartite(build_named(Family::cycle, {5})));
  EXPECT_TRUE(is_bipartite(build_named(Family::cycle, {6})));
  EXPECT_TRUE(is_bipartite(build_named(Family::star, {3})));
  EXPECT_TRUE(is_bipartite(build_named(Family::hypercube, {3})));
  EXPECT_FALSE(is_bipartite(build_named(Family::petersen, {})));
}

TEST(Iterate, ZeroStepsIsStart) {
  const auto x = iterate_distribution(build_named(Family::cycle, {5}), 2, 0);
  EXPECT_EQ(x, (std::vector<double>{0, 0, 1, 0, 0}));
  EXPECT_THROW(iterate_distribution(build_named(Family::cycle, {5}), 5, 1), ParameterError);
  EXPECT_THROW(iterate_distribution(build_named(Family::cycle, {5}), 0, -1), ParameterError);
}

TEST(Iterate, MatchesMatrixPowers) {
  const std::vector<std::tuple<FiniteGraph, int, bool>> cases = {
      {build_named(Family::cycle, {5}), 200, false},
      {build_named(Family::hypercube, {3}), 400, true},
      {build_named(Family::petersen, {}), 60, false},
      {build_named(Family::star, {4}), 37, true}};
  for (const auto& [g, steps, lazy] : cases) {
    Eigen::MatrixXd p = oracle::transition_matrix(g);
    if (lazy) p = 0.5 * (Eigen::MatrixXd::Identity(g.nu(), g.nu()) + p);
    Eigen::RowVectorXd x = Eigen::RowVectorXd::Zero(g.nu());
    x[0] = 1.0;
    for (int k = 0; k < steps; ++k) x = x * p;
    const auto got = iterate_distribution(g, 0, steps, lazy);
    for (int v = 0; v < g.nu(); ++v) EXPECT_NEAR(got[v], x[v], 1e-12);
  }
}

TEST(Iterate, ConvergenceExamples) {
  const auto c5 = build_named(Family::cycle, {5});
  EXPECT_LE(total_variation(iterate_distribution(c5, 0, 200), uniform(5)), 1e-6);
  const auto h3 = build_named(Family::hypercube, {3});
  EXPECT_LE(total_variation(iterate_distribution(h3, 0, 400, true), uniform(8)), 1e-6);
  // The plain walk on the cube alternates between the two colour classes.
  EXPECT_NEAR(total_variation(iterate_distribution(h3, 0, 400), uniform(8)), 0.5, 1e-12);
}

TEST(Contrast, RegularGraphsQuantumIsNotUniform) {
  for (const auto& [g, diag] : {std::pair{build_named(Family::petersen, {}), 21.0 / 50},
                                std::pair{build_named(Family::hypercube, {3}), 5.0 / 16}}) {
    EXPECT_EQ(stationary_distribution(g), uniform(g.nu()));
    const auto d = limiting_density(g);
    for (int p = 0; p < g.nu(); ++p) {
      EXPECT_NEAR(d(p, p), diag, 1e-9);
      EXPECT_GT(std::abs(d(p, p) - 1.0 / g.nu()), 0.1);
    }
  }
}

TEST(Report, Json) {
  const auto h3 = build_named(Family::hypercube, {3});
  const auto plain = nlohmann::json::parse(classical_report(h3).to_json());
  EXPECT_EQ(plain["bipartite"], true);
  EXPECT_EQ(plain["iterates_converge"], false);
  EXPECT_FALSE(plain.contains("iterate"));
  const auto lazy = nlohmann::json::parse(classical_report(h3, 0, 400, true).to_json());
  EXPECT_EQ(lazy["iterates_converge"], true);
  EXPECT_EQ(lazy["steps"], 400);
  EXPECT_EQ(lazy["iterate"].size(), 8u);
  EXPECT_LE(lazy["tv_to_stationary"].get<double>(), 1e-6);
  const auto c5 = nlohmann::json::parse(classical_report(build_named(Family::cycle, {5})).to_json());
  EXPECT_EQ(c5["bipartite"], false);
  EXPECT_EQ(c5["iterates_converge"], true);
}

TEST(Report, RejectsEdgeless) {
  EXPECT_THROW(stationary_distribution(FiniteGraph(3, {{0, 1}})), ParameterError);
}

}  // namespace
}  // namespace qwalk
