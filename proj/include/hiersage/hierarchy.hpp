#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "hiersage/error.hpp"
#include "hiersage/graph.hpp"

namespace hiersage {

using ClassNode = int;

/// Rooted tree of label classes. Leaves are the assignable classes and get a
/// dense leaf index in pre-order, which is the label id used everywhere else.
class LabelHierarchy {
 public:
  static constexpr ClassNode kNoParent = -1;

  /// Builds from (name, parent name) pairs; the root's parent is "-".
  static LabelHierarchy from_pairs(const std::vector<std::pair<std::string, std::string>>& decl,
                                   const std::vector<std::size_t>& lines = {}) {
    LabelHierarchy h;
    auto line_of = [&](std::size_t i) { return i < lines.size() ? lines[i] : 0; };
    for (std::size_t i = 0; i < decl.size(); ++i) {
      const auto& name = decl[i].first;
      if (name.empty() || name == "-") throw ParseError("invalid class name", line_of(i));
      if (h.index_.count(name)) throw ParseError("class '" + name + "' declared twice", line_of(i));
      h.index_.emplace(name, static_cast<ClassNode>(h.names_.size()));
      h.names_.push_back(name);
    }
    const auto n = h.names_.size();
    h.parent_.assign(n, kNoParent);
    h.children_.assign(n, {});
    h.root_ = kNoParent;
    for (std::size_t i = 0; i < decl.size(); ++i) {
      const auto& par = decl[i].second;
      if (par == "-") {
        if (h.root_ != kNoParent) throw ParseError("multiple roots", line_of(i));
        h.root_ = static_cast<ClassNode>(i);
        continue;
      }
      auto it = h.index_.find(par);
      if (it == h.index_.end()) throw ParseError("orphan class '" + decl[i].first + "': unknown parent '" + par + "'", line_of(i));
      h.parent_[i] = it->second;
      h.children_[static_cast<std::size_t>(it->second)].push_back(static_cast<ClassNode>(i));
    }
    if (n == 0) throw ParseError("empty hierarchy", 0);
    if (h.root_ == kNoParent) throw ParseError("no root declared (expected 'name<TAB>-')", 0);

    // Pre-order from the root; anything unreached sits on a cycle.
    h.depth_.assign(n, -1);
    std::vector<ClassNode> stack{h.root_};
    h.depth_[static_cast<std::size_t>(h.root_)] = 0;
    while (!stack.empty()) {
      ClassNode c = stack.back();
      stack.pop_back();
      h.preorder_.push_back(c);
      const auto& ch = h.children_[static_cast<std::size_t>(c)];
      for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
        h.depth_[static_cast<std::size_t>(*it)] = h.depth_[static_cast<std::size_t>(c)] + 1;
        stack.push_back(*it);
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (h.depth_[i] < 0) throw ParseError("cycle through class '" + h.names_[i] + "'", line_of(i));

    h.leaf_index_.assign(n, -1);
    for (ClassNode c : h.preorder_)
      if (h.children_[static_cast<std::size_t>(c)].empty()) {
        h.leaf_index_[static_cast<std::size_t>(c)] = static_cast<int>(h.leaves_.size());
        h.leaves_.push_back(c);
      }
    return h;
  }

  std::size_t size() const noexcept { return names_.size(); }
  ClassNode root() const noexcept { return root_; }
  ClassNode parent(ClassNode c) const { return parent_.at(checked(c)); }
  int depth(ClassNode c) const { return depth_.at(checked(c)); }
  const std::string& name(ClassNode c) const { return names_.at(checked(c)); }
  const std::vector<ClassNode>& children(ClassNode c) const { return children_.at(checked(c)); }
  bool is_leaf(ClassNode c) const { return children(c).empty(); }
  const std::vector<ClassNode>& preorder() const noexcept { return preorder_; }

  std::optional<ClassNode> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Leaves in pre-order; position = label id.
  const std::vector<ClassNode>& leaves() const noexcept { return leaves_; }
  std::size_t num_leaves() const noexcept { return leaves_.size(); }
  ClassNode leaf(int label) const { return leaves_.at(static_cast<std::size_t>(label)); }
  int leaf_index(ClassNode c) const {
    const int idx = leaf_index_.at(checked(c));
    if (idx < 0) throw Error("class '" + names_[checked(c)] + "' is not a leaf");
    return idx;
  }
  int label_of(const std::string& name) const {
    auto c = find(name);
    if (!c) throw Error("unknown class '" + name + "'");
    return leaf_index(*c);
  }
  const std::string& label_name(int label) const { return name(leaf(label)); }

  ClassNode lca(ClassNode a, ClassNode b) const {
    checked(a);
    checked(b);
    while (depth_[static_cast<std::size_t>(a)] > depth_[static_cast<std::size_t>(b)]) a = parent_[static_cast<std::size_t>(a)];
    while (depth_[static_cast<std::size_t>(b)] > depth_[static_cast<std::size_t>(a)]) b = parent_[static_cast<std::size_t>(b)];
    while (a != b) {
      a = parent_[static_cast<std::size_t>(a)];
      b = parent_[static_cast<std::size_t>(b)];
    }
    return a;
  }

  /// Number of classes per depth level.
  std::vector<std::size_t> depth_histogram() const {
    std::vector<std::size_t> hist;
    for (int d : depth_) {
      if (static_cast<std::size_t>(d) >= hist.size()) hist.resize(static_cast<std::size_t>(d) + 1, 0);
      ++hist[static_cast<std::size_t>(d)];
    }
    return hist;
  }

 private:
  std::size_t checked(ClassNode c) const {
    if (c < 0 || static_cast<std::size_t>(c) >= names_.size())
      throw Error("unknown class id " + std::to_string(c));
    return static_cast<std::size_t>(c);
  }

  std::vector<std::string> names_;
  std::vector<ClassNode> parent_;
  std::vector<std::vector<ClassNode>> children_;
  std::vector<int> depth_;
  std::vector<ClassNode> preorder_;
  std::vector<ClassNode> leaves_;
  std::vector<int> leaf_index_;
  std::unordered_map<std::string, ClassNode> index_;
  ClassNode root_ = kNoParent;
};

/// Reads `child<TAB>parent` lines; the root is declared as `root<TAB>-`.
inline LabelHierarchy load_hierarchy(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> decl;
  std::vector<std::size_t> lines;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    auto f = detail::split_tabs(line);
    if (f.size() != 2) throw ParseError("expected child<TAB>parent", lineno);
    decl.emplace_back(f[0], f[1]);
    lines.push_back(lineno);
  }
  return LabelHierarchy::from_pairs(decl, lines);
}

inline void write_hierarchy(std::ostream& out, const LabelHierarchy& h) {
  for (ClassNode c : h.preorder())
    out << h.name(c) << '\t' << (c == h.root() ? std::string("-") : h.name(h.parent(c))) << '\n';
}

/// Complete tree with the given branching per level; leaf names are
/// "L<level>_<i>" style paths, e.g. {2,3} gives 2 groups of 3 leaves.
inline LabelHierarchy make_hierarchy(const std::vector<std::size_t>& branching) {
  std::vector<std::pair<std::string, std::string>> decl{{"root", "-"}};
  std::vector<std::string> frontier{"root"};
  for (std::size_t level = 0; level < branching.size(); ++level) {
    if (branching[level] == 0) throw Error("branching factors must be >= 1");
    std::vector<std::string> next;
    for (const auto& parent : frontier)
      for (std::size_t i = 0; i < branching[level]; ++i) {
        std::string name = (parent == "root" ? std::string("c") : parent + ".") + std::to_string(i);
        decl.emplace_back(name, parent);
        next.push_back(std::move(name));
      }
    frontier = std::move(next);
  }
  return LabelHierarchy::from_pairs(decl);
}

/// The shipped 3-level toy taxonomy: 2 top groups of 3 leaves each.
inline LabelHierarchy default_hierarchy() {
  return LabelHierarchy::from_pairs({{"ENE", "-"},
                                     {"Name", "ENE"},
                                     {"Person", "Name"},
                                     {"Organization", "Name"},
                                     {"Product", "Name"},
                                     {"Location", "ENE"},
                                     {"Country", "Location"},
                                     {"Region", "Location"},
                                     {"Facility", "Location"}});
}

// ---------------------------------------------------------------------------
// Neighbour weights.

inline void require_leaf(const LabelHierarchy& h, ClassNode c) {
  if (!h.is_leaf(c)) throw Error("class '" + h.name(c) + "' is not a leaf");
}

/// 1 for the same class, 0.75 for siblings under the same parent, 0.25 otherwise.
inline double wmean1_weight(const LabelHierarchy& h, ClassNode a, ClassNode b) {
  require_leaf(h, a);
  require_leaf(h, b);
  if (a == b) return 1.0;
  if (h.parent(a) == h.parent(b)) return 0.75;
  return 0.25;
}

/// Which endpoint's distance to the LCA drives the WMEAN-2 weight.
enum class LcaDistance { Center, Neighbour, Max, Sum };

/// 1 / (1 + distance to the lowest common ancestor).
inline double wmean2_weight(const LabelHierarchy& h, ClassNode center, ClassNode nbr,
                            LcaDistance mode = LcaDistance::Center) {
  require_leaf(h, center);
  require_leaf(h, nbr);
  const int top = h.depth(h.lca(center, nbr));
  const int dc = h.depth(center) - top;
  const int dn = h.depth(nbr) - top;
  int dist = dc;
  switch (mode) {
    case LcaDistance::Center: dist = dc; break;
    case LcaDistance::Neighbour: dist = dn; break;
    case LcaDistance::Max: dist = std::max(dc, dn); break;
    case LcaDistance::Sum: dist = dc + dn; break;
  }
  return 1.0 / (1.0 + dist);
}

enum class WeightKind { Uniform, Wmean1, Wmean2 };

inline const char* to_string(WeightKind k) {
  switch (k) {
    case WeightKind::Uniform: return "mean";
    case WeightKind::Wmean1: return "wmean1";
    case WeightKind::Wmean2: return "wmean2";
  }
  return "?";
}

inline WeightKind weight_kind_from_string(const std::string& s) {
  if (s == "mean" || s == "uniform") return WeightKind::Uniform;
  if (s == "wmean1" || s == "wmean-1") return WeightKind::Wmean1;
  if (s == "wmean2" || s == "wmean-2") return WeightKind::Wmean2;
  throw Error("unknown aggregator '" + s + "' (expected mean, wmean1 or wmean2)");
}

struct WeightPolicy {
  WeightKind kind = WeightKind::Uniform;
  double unknown_label_weight = 0.5;
  LcaDistance lca_distance = LcaDistance::Center;
};

/// Weight of a neighbour in a center's aggregate. Labels are leaf indices;
/// a negative label means unknown.
inline double neighbour_weight(const WeightPolicy& policy, const LabelHierarchy& h, int center_label,
                               int nbr_label) {
  if (policy.kind == WeightKind::Uniform) return 1.0;
  if (center_label < 0 || nbr_label < 0) return policy.unknown_label_weight;
  const ClassNode a = h.leaf(center_label);
  const ClassNode b = h.leaf(nbr_label);
  return policy.kind == WeightKind::Wmean1 ? wmean1_weight(h, a, b) : wmean2_weight(h, a, b, policy.lca_distance);
}

/// Dense leaf × leaf table of neighbour_weight plus the unknown-label weight,
/// for use in inner loops.
class WeightTable {
 public:
  WeightTable() = default;
  WeightTable(const WeightPolicy& policy, const LabelHierarchy& h)
      : policy_(policy), k_(h.num_leaves()), table_(k_ * k_) {
    if (!(policy.unknown_label_weight > 0.0 && policy.unknown_label_weight <= 1.0))
      throw Error("unknown_label_weight must lie in (0, 1]");
    for (std::size_t a = 0; a < k_; ++a)
      for (std::size_t b = 0; b < k_; ++b)
        table_[a * k_ + b] = neighbour_weight(policy, h, static_cast<int>(a), static_cast<int>(b));
  }

  double operator()(int center_label, int nbr_label) const {
    if (policy_.kind == WeightKind::Uniform) return 1.0;
    if (center_label < 0 || nbr_label < 0) return policy_.unknown_label_weight;
    return table_[static_cast<std::size_t>(center_label) * k_ + static_cast<std::size_t>(nbr_label)];
  }

  const WeightPolicy& policy() const noexcept { return policy_; }

 private:
  WeightPolicy policy_;
  std::size_t k_ = 0;
  std::vector<double> table_;
};

}  // namespace hiersage
