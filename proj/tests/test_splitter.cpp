#include <gtest/gtest.h>

#include <sstream>

#include "hiersage/splitter.hpp"
#include "hiersage/synthgen.hpp"
#include "oracles.hpp"

using namespace hiersage;

namespace {

SplitAssignment with_roles(std::vector<Role> roles) { return SplitAssignment{std::move(roles), {}, 0}; }

Graph synthetic_lcc(std::size_t n, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  return largest_connected_component(generate(cfg).graph).graph;
}

}  // namespace

TEST(SplitSizes, Rounding) {
  EXPECT_EQ(split_sizes(100, {}), (std::array<std::size_t, 3>{70, 20, 10}));
  EXPECT_EQ(split_sizes(10, {}), (std::array<std::size_t, 3>{7, 2, 1}));
  EXPECT_EQ(split_sizes(1000, {}), (std::array<std::size_t, 3>{700, 200, 100}));
}

TEST(SplitGraphs, PathExample) {
  auto g = oracle::from_pairs(4, {{0, 1}, {1, 2}, {2, 3}});
  auto s = with_roles({Role::Train, Role::Train, Role::Val, Role::Test});
  auto sg = build_split_graphs(g, s);
  EXPECT_EQ(sg.train.graph.num_nodes(), 2u);
  EXPECT_EQ(sg.train.graph.num_edges(), 1u);
  EXPECT_EQ(sg.g_tr.edges(), (std::vector<Edge>{{0, 1}}));
  EXPECT_EQ(sg.g_va.edges(), (std::vector<Edge>{{0, 1}, {1, 2}}));
  EXPECT_EQ(sg.in_va, (std::vector<bool>{true, true, true, false}));
  EXPECT_EQ(sg.g_te, g);
}

TEST(SplitGraphs, AllTrain) {
  hiersage::Rng rng(1);
  auto g = oracle::random_connected_graph(10, 0.3, rng);
  auto sg = build_split_graphs(g, with_roles(std::vector<Role>(10, Role::Train)));
  EXPECT_EQ(sg.g_tr, g);
  EXPECT_EQ(sg.g_va, g);
  EXPECT_EQ(sg.g_te, g);
}

TEST(SplitGraphs, TestTestEdgeRemoved) {
  auto g = oracle::from_pairs(3, {{0, 1}, {1, 2}});
  auto sg = build_split_graphs(g, with_roles({Role::Train, Role::Test, Role::Test}));
  EXPECT_TRUE(sg.g_te.has_edge(0, 1));
  EXPECT_FALSE(sg.g_te.has_edge(1, 2));
}

TEST(Split, Example100) {
  auto g = synthetic_lcc(1000, 5);
  auto s = make_split(g, {});
  const auto n = g.num_nodes();
  const auto sizes = split_sizes(n, {});
  EXPECT_EQ(s.count(Role::Train), sizes[0]);
  EXPECT_EQ(s.count(Role::Val), sizes[1]);
  EXPECT_EQ(s.count(Role::Test), sizes[2]);
}

TEST(Split, DeterministicAndSeedSensitive) {
  auto g = synthetic_lcc(1000, 2);
  SplitOptions a;
  a.seed = 17;
  EXPECT_EQ(make_split(g, a).role, make_split(g, a).role);
  SplitOptions b = a;
  b.seed = 18;
  EXPECT_NE(make_split(g, a).role, make_split(g, b).role);
}

TEST(Split, InvariantsOverSeeds) {
  auto g = synthetic_lcc(1000, 3);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SplitOptions opt;
    opt.seed = seed;
    SplitReport report;
    auto s = make_split(g, opt, &report);
    auto sg = build_split_graphs(g, s);
    EXPECT_TRUE(report.ok(false));
    EXPECT_TRUE(is_connected(sg.train.graph));
    for (auto [u, v] : sg.g_te.edges()) EXPECT_FALSE(s.role[u] == Role::Test && s.role[v] == Role::Test);
    for (auto [u, v] : sg.g_va.edges()) {
      EXPECT_FALSE(s.role[u] == Role::Val && s.role[v] == Role::Val);
      EXPECT_NE(s.role[u], Role::Test);
      EXPECT_NE(s.role[v], Role::Test);
    }
    for (auto [u, v] : sg.g_tr.edges()) EXPECT_TRUE(sg.g_va.has_edge(u, v));
    for (auto [u, v] : sg.g_va.edges()) EXPECT_TRUE(sg.g_te.has_edge(u, v));
  }
}

TEST(Split, FailsWithReportWhenImpossible) {
  // On a path the connected training run has at most two neighbours, but
  // each of the five val nodes needs a training neighbour to keep an edge.
  std::vector<Edge> e;
  for (NodeId v = 1; v < 12; ++v) e.emplace_back(v - 1, v);
  auto g = Graph::from_edges(12, e);
  SplitOptions opt;
  opt.fractions = {0.5, 0.4, 0.1};
  opt.max_retries = 20;
  try {
    make_split(g, opt);
    FAIL() << "expected SplitError";
  } catch (const SplitError& err) {
    EXPECT_EQ(err.report().attempts, 20u);
    EXPECT_EQ(err.best_attempt().role.size(), 12u);
  }
}

TEST(Split, TooSmall) { EXPECT_THROW(make_split(oracle::clique(9), {}), Error); }

TEST(Split, TsvRoundTripAndErrors) {
  auto g = synthetic_lcc(1000, 4);
  auto s = make_split(g, {});
  std::ostringstream out;
  write_split_tsv(out, s);
  std::istringstream in(out.str());
  EXPECT_EQ(read_split_tsv(in, g.num_nodes()).role, s.role);
  std::istringstream missing("0\ttrain\n");
  EXPECT_THROW(read_split_tsv(missing, 2), ParseError);
  std::istringstream bad_role("0\ttrain\n1\tholdout\n");
  EXPECT_THROW(read_split_tsv(bad_role, 2), ParseError);
  std::istringstream dup("0\ttrain\n0\tval\n1\ttest\n");
  EXPECT_THROW(read_split_tsv(dup, 2), ParseError);
}
