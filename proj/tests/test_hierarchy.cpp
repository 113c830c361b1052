#include <gtest/gtest.h>

#include <sstream>

#include "hiersage/hierarchy.hpp"

using namespace hiersage;

namespace {

LabelHierarchy parse(const std::string& text) {
  std::istringstream in(text);
  return load_hierarchy(in);
}

ClassNode node(const LabelHierarchy& h, const std::string& name) { return *h.find(name); }

}  // namespace

TEST(Hierarchy, DepthFromFile) {
  auto h = parse("root\t-\nLocation\troot\nCountry\tLocation\n");
  EXPECT_EQ(h.depth(node(h, "Country")), 2);
  EXPECT_EQ(h.depth(h.root()), 0);
  EXPECT_EQ(h.num_leaves(), 1u);
}

TEST(Hierarchy, ChildDeclaredBeforeParentIsFine) {
  auto h = parse("Country\tLocation\nLocation\troot\nroot\t-\n");
  EXPECT_EQ(h.depth(node(h, "Country")), 2);
}

TEST(Hierarchy, RejectsCycles) {
  EXPECT_THROW(parse("root\t-\na\tb\nb\ta\n"), ParseError);
}

TEST(Hierarchy, RejectsTwoParents) {
  EXPECT_THROW(parse("root\t-\nA\troot\nB\troot\nx\tA\nx\tB\n"), ParseError);
}

TEST(Hierarchy, RejectsStructuralErrors) {
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("a\tb\n"), ParseError);              // orphan
  EXPECT_THROW(parse("a\t-\nb\t-\n"), ParseError);        // two roots
  EXPECT_THROW(parse("a\tb\nb\ta\n"), ParseError);        // no root
  EXPECT_THROW(parse("root\t-\nlonely\n"), ParseError);   // one field
}

TEST(Hierarchy, ErrorCarriesLineNumber) {
  try {
    parse("root\t-\nA\troot\nB\tnowhere\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Hierarchy, Lca) {
  auto h = default_hierarchy();
  const auto country = node(h, "Country"), region = node(h, "Region"), person = node(h, "Person");
  EXPECT_EQ(h.lca(country, region), node(h, "Location"));
  EXPECT_EQ(h.lca(country, country), country);
  EXPECT_EQ(h.lca(country, person), h.root());
}

TEST(Hierarchy, LeafIndicesFollowPreorder) {
  auto h = default_hierarchy();
  ASSERT_EQ(h.num_leaves(), 6u);
  EXPECT_EQ(h.label_name(0), "Person");
  EXPECT_EQ(h.label_name(3), "Country");
  EXPECT_EQ(h.label_of("Facility"), 5);
  EXPECT_THROW(h.label_of("Location"), Error);
  EXPECT_THROW(h.label_of("Nope"), Error);
}

TEST(Hierarchy, WriteReadRoundTrip) {
  auto h = make_hierarchy({2, 3, 2});
  std::ostringstream out;
  write_hierarchy(out, h);
  auto back = parse(out.str());
  EXPECT_EQ(back.num_leaves(), 12u);
  EXPECT_EQ(back.depth_histogram(), (std::vector<std::size_t>{1, 2, 6, 12}));
  for (int l = 0; l < 12; ++l) EXPECT_EQ(back.label_name(l), h.label_name(l));
}

TEST(Weights, Wmean1) {
  auto h = default_hierarchy();
  EXPECT_DOUBLE_EQ(wmean1_weight(h, node(h, "Person"), node(h, "Person")), 1.0);
  EXPECT_DOUBLE_EQ(wmean1_weight(h, node(h, "Person"), node(h, "Product")), 0.75);
  EXPECT_DOUBLE_EQ(wmean1_weight(h, node(h, "Person"), node(h, "Country")), 0.25);
  EXPECT_THROW(wmean1_weight(h, node(h, "Name"), node(h, "Person")), Error);
}

TEST(Weights, Wmean2) {
  auto h = default_hierarchy();
  EXPECT_DOUBLE_EQ(wmean2_weight(h, node(h, "Region"), node(h, "Region")), 1.0);
  EXPECT_DOUBLE_EQ(wmean2_weight(h, node(h, "Region"), node(h, "Facility")), 0.5);
  EXPECT_DOUBLE_EQ(wmean2_weight(h, node(h, "Region"), node(h, "Person")), 1.0 / 3.0);
}

TEST(Weights, Wmean2DistanceModesOnUnevenDepths) {
  // a sits at depth 1, b.x at depth 2; their LCA is the root.
  auto h = parse("r\t-\na\tr\nb\tr\nb.x\tb\nb.y\tb\n");
  const auto a = node(h, "a"), bx = node(h, "b.x");
  EXPECT_DOUBLE_EQ(wmean2_weight(h, a, bx, LcaDistance::Center), 0.5);
  EXPECT_DOUBLE_EQ(wmean2_weight(h, a, bx, LcaDistance::Neighbour), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(wmean2_weight(h, a, bx, LcaDistance::Max), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(wmean2_weight(h, a, bx, LcaDistance::Sum), 0.25);
}

TEST(Weights, NeighbourWeightPolicies) {
  auto h = default_hierarchy();
  const int person = h.label_of("Person"), country = h.label_of("Country");
  WeightPolicy uniform{WeightKind::Uniform};
  EXPECT_EQ(neighbour_weight(uniform, h, person, country), 1.0);
  EXPECT_EQ(neighbour_weight(uniform, h, -1, -1), 1.0);
  WeightPolicy w1{WeightKind::Wmean1};
  EXPECT_EQ(neighbour_weight(w1, h, person, person), 1.0);
  EXPECT_EQ(neighbour_weight(w1, h, person, -1), 0.5);
  EXPECT_EQ(neighbour_weight(w1, h, -1, person), 0.5);
}

TEST(Weights, AlwaysInUnitInterval) {
  auto h = make_hierarchy({3, 2, 2});
  for (auto kind : {WeightKind::Uniform, WeightKind::Wmean1, WeightKind::Wmean2}) {
    WeightTable t(WeightPolicy{kind}, h);
    for (int a = -1; a < static_cast<int>(h.num_leaves()); ++a)
      for (int b = -1; b < static_cast<int>(h.num_leaves()); ++b) {
        const double w = t(a, b);
        EXPECT_GT(w, 0.0);
        EXPECT_LE(w, 1.0);
        if (a >= 0 && b >= 0) EXPECT_EQ(w, neighbour_weight(WeightPolicy{kind}, h, a, b));
      }
  }
}

TEST(Weights, TableRejectsBadUnknownWeight) {
  auto h = default_hierarchy();
  EXPECT_THROW(WeightTable(WeightPolicy{WeightKind::Wmean1, 0.0}, h), Error);
  EXPECT_THROW(WeightTable(WeightPolicy{WeightKind::Wmean1, 1.5}, h), Error);
}

TEST(Weights, KindNames) {
  for (auto kind : {WeightKind::Uniform, WeightKind::Wmean1, WeightKind::Wmean2})
    EXPECT_EQ(weight_kind_from_string(to_string(kind)), kind);
  EXPECT_THROW(weight_kind_from_string("max"), Error);
}
