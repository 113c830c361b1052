#pragma once

// Command-line front end. `run` is kept separate from main() so the tests can
// drive every subcommand in-process.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hiersage/analysis.hpp"
#include "hiersage/json_io.hpp"
#include "hiersage/pipeline.hpp"

namespace hiersage::cli {

namespace fs = std::filesystem;

inline constexpr const char* kVersion = "0.1.0";

struct GlobalOptions {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string out;
  std::string format = "tsv";
};

/// Collects every output in memory and writes them only once the command has
/// finished. A failure while writing removes whatever was already written.
class OutputSet {
 public:
  void add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }
  std::vector<std::string> names() const {
    std::vector<std::string> n;
    for (const auto& f : files_) n.push_back(f.first);
    return n;
  }

  void commit(const fs::path& dir) {
    std::vector<fs::path> written;
    bool created_dir = false;
    try {
      if (!fs::exists(dir)) created_dir = fs::create_directories(dir);
      for (const auto& [name, content] : files_) {
        const fs::path p = dir / name;
        std::ofstream f(p, std::ios::binary);
        if (!f) throw Error("cannot open '" + p.string() + "' for writing");
        written.push_back(p);
        f << content;
        f.close();
        if (!f) throw Error("failed writing '" + p.string() + "'");
      }
    } catch (...) {
      std::error_code ec;
      for (const auto& p : written) fs::remove(p, ec);
      if (created_dir) fs::remove(dir, ec);
      throw;
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

inline std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw Error("cannot open '" + p.string() + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

/// Parse errors get the file name prepended.
template <typename Fn>
auto parse_file(const fs::path& p, Fn&& fn) {
  std::ifstream f(p);
  if (!f) throw Error("cannot open '" + p.string() + "'");
  try {
    return fn(f);
  } catch (const ParseError& e) {
    throw Error(p.string() + ": " + e.what());
  }
}

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

/// Either JSON or `key=value` lines; values are parsed as JSON where possible
/// (numbers, booleans, arrays) and kept as strings otherwise.
inline Json read_config(const fs::path& p) {
  const std::string text = read_file(p);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    try {
      return Json::parse(text);
    } catch (const Json::exception& e) {
      throw Error(p.string() + ": " + e.what());
    }
  }
  Json j = Json::object();
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::skip_line(line)) continue;
    if (line.back() == '\r') line.pop_back();
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(p.string() + ": line " + std::to_string(lineno) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    Json parsed = Json::parse(value, nullptr, false);
    j[key] = parsed.is_discarded() ? Json(value) : parsed;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Datasets

/// A dataset directory: hierarchy.tsv, nodes.tsv, edges.tsv and optionally
/// attributes.tsv and dataset.json (generator metadata).
struct Dataset {
  LabelHierarchy hierarchy;
  NodeTable nodes;
  Graph graph;
  std::optional<FeatureMatrix> attributes;
  std::vector<int> star_classes;
};

inline Dataset load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("dataset directory '" + dir.string() + "' does not exist");
  Dataset d;
  d.hierarchy = parse_file(dir / "hierarchy.tsv", [](std::istream& in) { return load_hierarchy(in); });
  d.nodes = parse_file(dir / "nodes.tsv", [&](std::istream& in) {
    return load_node_table(in, [&](const std::string& name) {
      const int l = d.hierarchy.label_of(name);
      return l;
    });
  });
  d.graph = parse_file(dir / "edges.tsv", [&](std::istream& in) { return load_edge_list(in, &d.nodes); });
  if (fs::exists(dir / "attributes.tsv")) {
    d.attributes = parse_file(dir / "attributes.tsv", [](std::istream& in) { return read_features_tsv(in); });
    if (d.attributes->rows() != d.graph.num_nodes()) throw Error("attributes.tsv row count does not match nodes.tsv");
  }
  if (fs::exists(dir / "dataset.json")) {
    Json meta = Json::parse(read_file(dir / "dataset.json"), nullptr, false);
    if (meta.is_discarded()) throw Error("dataset.json is not valid JSON");
    for (const auto& name : meta.value("star_classes", std::vector<std::string>{})) d.star_classes.push_back(d.hierarchy.label_of(name));
  }
  return d;
}

/// Graph from either --data DIR or --edges FILE.
struct GraphInput {
  std::string data;
  std::string edges;

  std::pair<Graph, NodeTable> load() const {
    if (!data.empty() == !edges.empty()) throw Error("give exactly one of --data or --edges");
    if (!data.empty()) {
      auto d = load_dataset(data);
      return {std::move(d.graph), std::move(d.nodes)};
    }
    NodeTable t;
    Graph g = parse_file(edges, [&](std::istream& in) { return load_edge_list(in, nullptr, &t); });
    return {std::move(g), std::move(t)};
  }
};

inline std::string features_to_json(const FeatureMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  return Json{{"columns", m.columns()}, {"rows", rows}}.dump() + "\n";
}

inline FeatureMatrix features_from_json(const Json& j) {
  try {
    FeatureMatrix m(j.at("rows").size(), j.at("columns").get<std::vector<std::string>>());
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto row = j.at("rows")[r].get<std::vector<double>>();
      if (row.size() != m.cols()) throw Error("feature row " + std::to_string(r) + " has the wrong width");
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = row[c];
    }
    for (std::size_t c = 0; c < m.cols(); ++c) m.set_one_hot(c, is_one_hot_column_name(m.columns()[c]));
    return m;
  } catch (const Json::exception& e) {
    throw Error(std::string("bad feature JSON: ") + e.what());
  }
}

inline FeatureMatrix load_features(const fs::path& p) {
  if (p.extension() == ".json") {
    Json j = Json::parse(read_file(p), nullptr, false);
    if (j.is_discarded()) throw Error(p.string() + ": not valid JSON");
    return features_from_json(j);
  }
  return parse_file(p, [](std::istream& in) { return read_features_tsv(in); });
}

/// Loads and concatenates the given feature files, checking their row count.
inline FeatureMatrix load_feature_set(const std::vector<std::string>& files, std::size_t rows, bool standardize,
                                      std::span<const NodeId> fit_rows) {
  if (files.empty()) throw Error("no feature files given");
  std::vector<FeatureMatrix> parts;
  for (const auto& f : files) {
    parts.push_back(load_features(f));
    if (parts.back().rows() != rows)
      throw Error(f + ": " + std::to_string(parts.back().rows()) + " rows, graph has " + std::to_string(rows) + " nodes");
  }
  return assemble_features(std::span<const FeatureMatrix>(parts), standardize, fit_rows);
}

inline std::string matrix_output(const FeatureMatrix& m, const std::string& format) {
  if (format == "json") return features_to_json(m);
  std::ostringstream s;
  write_features_tsv(s, m);
  return s.str();
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// ---------------------------------------------------------------------------
// Runner

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args) {
    CLI::App app{"Hierarchy-aware GraphSAGE toolkit", "hiersage"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.add_option("--seed", global_.seed, "Master seed for every random stream")->capture_default_str();
    app.add_option("--jobs", global_.jobs, "Worker threads (1 = deterministic single-worker mode)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--out", global_.out, "Output directory");
    app.add_option("--format", global_.format, "Format of tables and matrices")
        ->check(CLI::IsMember({"tsv", "json"}))
        ->capture_default_str();
    app.fallthrough();

    setup_synth(app);
    setup_hierarchy(app);
    setup_features(app);
    setup_embed(app);
    setup_split(app);
    setup_train(app);
    setup_eval(app);
    setup_search(app);
    setup_analyze(app);
    setup_bench(app);

    std::vector<const char*> argv{"hiersage"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return 0;
    } catch (const CLI::CallForVersion&) {
      out_ << kVersion << '\n';
      return 0;
    } catch (const CLI::ParseError& e) {
      if (e.get_exit_code() == 0) {
        out_ << app.help();
        return 0;
      }
      err_ << Json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
      return 2;
    }

    const auto* sub = app.get_subcommands().front();
    command_ = sub->get_name();
    args_ = args;
    try {
      actions_.at(command_)();
      if (!global_.out.empty()) {
        files_.add("manifest.json", manifest().dump(2) + "\n");
        files_.commit(global_.out);
      }
      return 0;
    } catch (const std::exception& e) {
      err_ << Json{{"error", "failed"}, {"command", command_}, {"message", e.what()}}.dump() << '\n';
      return 1;
    }
  }

 private:
  Json manifest() const {
    const std::string canon = config_.dump();
    return Json{{"schema_version", kManifestSchemaVersion},
                {"tool", "hiersage"},
                {"version", kVersion},
                {"command", command_},
                {"args", args_},
                {"seed", global_.seed},
                {"jobs", global_.jobs},
                {"format", global_.format},
                {"config", config_},
                {"config_hash", hex64(fnv1a(canon))},
                {"outputs", files_.names()},
                {"versions", Json{{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                                "." + std::to_string(EIGEN_MINOR_VERSION)},
                                  {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                        std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                        std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                                  {"cli11", CLI11_VERSION}}}};
  }

  void require_out() const {
    if (global_.out.empty()) throw Error("--out DIR is required for '" + command_ + "'");
  }

  std::string ext() const { return global_.format == "json" ? ".json" : ".tsv"; }

  // ---- synth --------------------------------------------------------------
  struct SynthFlags {
    SynthConfig cfg;
    std::string sizes = "geometric";
    std::string config;
    bool keep_all = false;
  } synth_;

  void setup_synth(CLI::App& app) {
    auto* c = app.add_subcommand("synth", "Generate a synthetic labelled graph into --out");
    auto& s = synth_;
    c->add_option("--config", s.config, "SynthConfig file (JSON or key=value)");
    c->add_option("--n", s.cfg.n)->capture_default_str();
    c->add_option("--groups", s.cfg.groups)->capture_default_str();
    c->add_option("--leaves", s.cfg.leaves_per_group)->capture_default_str();
    c->add_option("--sizes", s.sizes)->check(CLI::IsMember({"uniform", "geometric"}))->capture_default_str();
    c->add_option("--rho", s.cfg.rho)->capture_default_str();
    c->add_option("--p-same", s.cfg.p_same)->capture_default_str();
    c->add_option("--p-sibling", s.cfg.p_sibling)->capture_default_str();
    c->add_option("--p-far", s.cfg.p_far)->capture_default_str();
    c->add_option("--stars", s.cfg.star_classes)->capture_default_str();
    c->add_option("--p-star", s.cfg.p_star)->capture_default_str();
    c->add_option("--attr-corr", s.cfg.attribute_correlation)->capture_default_str();
    c->add_flag("--strict", s.cfg.strict, "Reject classes with expected degree below 1");
    c->add_flag("--keep-all", s.keep_all, "Keep nodes outside the largest connected component");
    actions_["synth"] = [this] { do_synth(); };
  }

  static void apply_synth_json(const Json& j, SynthConfig& c) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& k = it.key();
      const auto& v = it.value();
      if (k == "n") c.n = v.get<std::size_t>();
      else if (k == "groups") c.groups = v.get<std::size_t>();
      else if (k == "leaves" || k == "leaves_per_group") c.leaves_per_group = v.get<std::size_t>();
      else if (k == "sizes") c.sizes = v.get<std::string>() == "uniform" ? ClassSizes::Uniform : ClassSizes::Geometric;
      else if (k == "rho") c.rho = v.get<double>();
      else if (k == "p_same") c.p_same = v.get<double>();
      else if (k == "p_sibling") c.p_sibling = v.get<double>();
      else if (k == "p_far") c.p_far = v.get<double>();
      else if (k == "stars" || k == "star_classes") c.star_classes = v.get<std::size_t>();
      else if (k == "p_star") c.p_star = v.get<double>();
      else if (k == "attribute_correlation") c.attribute_correlation = v.get<double>();
      else if (k == "strict") c.strict = v.get<bool>();
      else if (k == "seed") c.seed = v.get<std::uint64_t>();
      else throw Error("unknown synth config key '" + k + "'");
    }
  }

  static Json synth_json(const SynthConfig& c) {
    return Json{{"n", c.n},
                {"groups", c.groups},
                {"leaves_per_group", c.leaves_per_group},
                {"sizes", c.sizes == ClassSizes::Uniform ? "uniform" : "geometric"},
                {"rho", c.rho},
                {"p_same", c.p_same},
                {"p_sibling", c.p_sibling},
                {"p_far", c.p_far},
                {"star_classes", c.star_classes},
                {"p_star", c.p_star},
                {"attribute_correlation", c.attribute_correlation},
                {"strict", c.strict},
                {"seed", c.seed}};
  }

  void do_synth() {
    require_out();
    SynthConfig cfg = synth_.cfg;
    cfg.sizes = synth_.sizes == "uniform" ? ClassSizes::Uniform : ClassSizes::Geometric;
    cfg.seed = derive_seed(global_.seed, "synth");
    if (!synth_.config.empty()) {
      try {
        apply_synth_json(read_config(synth_.config), cfg);
      } catch (const Json::exception& e) {
        throw Error("bad synth config: " + std::string(e.what()));
      }
    }
    auto data = generate(cfg);
    Graph g = std::move(data.graph);
    std::vector<int> labels = data.labels;
    FeatureMatrix attributes = data.attributes;
    if (!synth_.keep_all) {
      auto lcc = largest_connected_component(g);
      FeatureMatrix a(lcc.graph.num_nodes(), attributes.columns());
      for (std::size_t c = 0; c < a.cols(); ++c) a.set_one_hot(c, attributes.is_one_hot(c));
      std::vector<int> l;
      for (NodeId u = 0; u < lcc.graph.num_nodes(); ++u) {
        const NodeId old = lcc.new_to_old[u];
        l.push_back(labels[old]);
        for (std::size_t c = 0; c < a.cols(); ++c) a(u, c) = attributes(old, c);
      }
      g = std::move(lcc.graph);
      labels = std::move(l);
      attributes = std::move(a);
    }
    NodeTable nodes;
    for (NodeId u = 0; u < g.num_nodes(); ++u) nodes.add("n" + std::to_string(u), labels[u]);

    std::ostringstream h, n, e, a;
    write_hierarchy(h, data.hierarchy);
    write_node_table(n, nodes, [&](int l) { return data.hierarchy.label_name(l); });
    write_edge_list(e, g, nodes);
    write_features_tsv(a, attributes);
    files_.add("hierarchy.tsv", h.str());
    files_.add("nodes.tsv", n.str());
    files_.add("edges.tsv", e.str());
    files_.add("attributes.tsv", a.str());
    std::vector<std::string> stars;
    for (int s : data.star_classes) stars.push_back(data.hierarchy.label_name(s));
    const auto [leaf, group] = empirical_homophily(g, labels, data.hierarchy);
    Json meta{{"generator", synth_json(cfg)},
              {"largest_component_only", !synth_.keep_all},
              {"nodes", g.num_nodes()},
              {"edges", g.num_edges()},
              {"star_classes", stars},
              {"homophily", Json{{"same_leaf", leaf}, {"same_group", group}}}};
    files_.add("dataset.json", meta.dump(2) + "\n");
    config_ = synth_json(cfg);
    out_ << "nodes\t" << g.num_nodes() << "\nedges\t" << g.num_edges() << "\nsame_leaf_homophily\t" << fmt_double(leaf)
         << "\nsame_group_homophily\t" << fmt_double(group) << '\n';
  }

  // ---- hierarchy ----------------------------------------------------------
  std::string hierarchy_file_;

  void setup_hierarchy(CLI::App& app) {
    auto* c = app.add_subcommand("hierarchy", "Validate a hierarchy file and summarise it");
    c->add_option("file", hierarchy_file_, "child<TAB>parent file")->required();
    actions_["hierarchy"] = [this] {
      auto h = parse_file(hierarchy_file_, [](std::istream& in) { return load_hierarchy(in); });
      std::vector<std::string> leaves;
      for (int l = 0; l < static_cast<int>(h.num_leaves()); ++l) leaves.push_back(h.label_name(l));
      Json j{{"classes", h.size()}, {"leaves", h.num_leaves()}, {"root", h.name(h.root())},
             {"depth_histogram", h.depth_histogram()}, {"leaf_names", leaves}};
      config_ = Json{{"file", hierarchy_file_}};
      const std::string body = j.dump(2) + "\n";
      out_ << body;
      if (!global_.out.empty()) files_.add("hierarchy.json", body);
    };
  }

  // ---- features -----------------------------------------------------------
  struct FeatureFlags {
    GraphInput input;
    std::string only;
    std::string split;
    bool full_graph = false;
    bool standardize = false;
    bool normalized = false;
    std::size_t max_communities = 16;
    std::size_t pivots = 0;
  } feat_;

  void setup_features(CLI::App& app) {
    auto* c = app.add_subcommand("features", "Hand-crafted graph descriptors per node");
    c->add_option("--data", feat_.input.data, "Dataset directory");
    c->add_option("--edges", feat_.input.edges, "Edge list file");
    c->add_option("--only", feat_.only, "Comma list of degree,assortativity,betweenness,louvain");
    c->add_option("--split", feat_.split, "Split TSV; Louvain then runs on the training graph");
    c->add_flag("--louvain-full-graph", feat_.full_graph);
    c->add_flag("--standardize", feat_.standardize, "Standardize columns (fitted on training nodes with --split)");
    c->add_flag("--normalized-betweenness", feat_.normalized);
    c->add_option("--max-communities", feat_.max_communities)->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--pivots", feat_.pivots, "Betweenness pivot sources (0 = exact)")->capture_default_str();
    actions_["features"] = [this] { do_features(); };
  }

  void do_features() {
    require_out();
    DescriptorOptions opt;
    if (!feat_.only.empty()) {
      opt.degree = opt.assortativity = opt.betweenness = opt.louvain = false;
      for (const auto& name : split_list(feat_.only)) {
        if (name == "degree") opt.degree = true;
        else if (name == "assortativity") opt.assortativity = true;
        else if (name == "betweenness") opt.betweenness = true;
        else if (name == "louvain") opt.louvain = true;
        else throw Error("unknown descriptor '" + name + "'");
      }
    }
    opt.louvain_full_graph = feat_.full_graph;
    opt.normalized_betweenness = feat_.normalized;
    opt.max_communities = feat_.max_communities;
    opt.betweenness_pivots = feat_.pivots;
    if (feat_.pivots) opt.approx_threshold = 0;
    opt.seed = derive_seed(global_.seed, "louvain");
    opt.jobs = global_.jobs;
    auto [g, nodes] = feat_.input.load();
    std::optional<SplitAssignment> split;
    std::optional<SplitGraphs> sg;
    if (!feat_.split.empty()) {
      split = parse_file(feat_.split, [&](std::istream& in) { return read_split_tsv(in, g.num_nodes()); });
      sg = build_split_graphs(g, *split);
    }
    auto m = graph_descriptors(g, opt, sg ? &sg->train : nullptr);
    if (feat_.standardize) {
      std::vector<NodeId> fit;
      if (split) fit = split->nodes(Role::Train);
      m = assemble_features({m}, true, fit);
    }
    files_.add("features" + ext(), matrix_output(m, global_.format));
    config_ = Json{{"degree", opt.degree}, {"assortativity", opt.assortativity}, {"betweenness", opt.betweenness},
                   {"louvain", opt.louvain}, {"louvain_full_graph", opt.louvain_full_graph},
                   {"normalized_betweenness", opt.normalized_betweenness}, {"max_communities", opt.max_communities},
                   {"pivots", opt.betweenness_pivots}, {"standardize", feat_.standardize}, {"split", feat_.split}};
    out_ << "rows\t" << m.rows() << "\ncolumns\t" << m.cols() << '\n';
  }

  // ---- embed --------------------------------------------------------------
  struct EmbedFlags {
    GraphInput input;
    std::string split;
    EmbedOptions opt;
  } emb_;

  void setup_embed(CLI::App& app) {
    auto* c = app.add_subcommand("embed", "Random-walk skip-gram node embeddings");
    c->add_option("--data", emb_.input.data, "Dataset directory");
    c->add_option("--edges", emb_.input.edges, "Edge list file");
    c->add_option("--split", emb_.split, "Split TSV; walks are then restricted to the training graph");
    c->add_option("--dim", emb_.opt.skipgram.dim)->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--walk-length", emb_.opt.walk_length)->capture_default_str();
    c->add_option("--walks", emb_.opt.walks_per_node)->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--window", emb_.opt.skipgram.window)->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--negatives", emb_.opt.skipgram.negatives)->capture_default_str();
    c->add_option("--epochs", emb_.opt.skipgram.epochs)->capture_default_str();
    c->add_option("--lr", emb_.opt.skipgram.lr)->capture_default_str();
    actions_["embed"] = [this] { do_embed(); };
  }

  void do_embed() {
    require_out();
    auto [g, nodes] = emb_.input.load();
    EmbedOptions opt = emb_.opt;
    opt.skipgram.seed = derive_seed(global_.seed, "walks");
    opt.jobs = global_.jobs;
    std::optional<SplitGraphs> sg;
    if (!emb_.split.empty()) {
      auto split = parse_file(emb_.split, [&](std::istream& in) { return read_split_tsv(in, g.num_nodes()); });
      sg = build_split_graphs(g, split);
    }
    auto m = node_embeddings(g, opt, sg ? &sg->train : nullptr);
    files_.add("embeddings" + ext(), matrix_output(m, global_.format));
    config_ = Json{{"dim", opt.skipgram.dim}, {"walk_length", opt.walk_length}, {"walks_per_node", opt.walks_per_node},
                   {"window", opt.skipgram.window}, {"negatives", opt.skipgram.negatives},
                   {"epochs", opt.skipgram.epochs}, {"lr", opt.skipgram.lr}, {"split", emb_.split}};
    out_ << "rows\t" << m.rows() << "\ndim\t" << m.cols() << '\n';
  }

  // ---- split --------------------------------------------------------------
  struct SplitFlags {
    GraphInput input;
    std::string frac = "0.7,0.2,0.1";
    std::size_t max_retries = 1000;
    bool strict = false;
  } split_;

  void setup_split(CLI::App& app) {
    auto* c = app.add_subcommand("split", "Train/validation/test node split with connectivity checks");
    c->add_option("--data", split_.input.data, "Dataset directory");
    c->add_option("--edges", split_.input.edges, "Edge list file");
    c->add_option("--frac", split_.frac, "train,val,test fractions")->capture_default_str();
    c->add_option("--max-retries", split_.max_retries)->check(CLI::PositiveNumber)->capture_default_str();
    c->add_flag("--strict", split_.strict, "Also require connected validation and test graphs");
    actions_["split"] = [this] { do_split(); };
  }

  static SplitFractions parse_fractions(const std::string& s) {
    const auto parts = split_list(s);
    if (parts.size() != 3) throw Error("--frac needs three comma-separated fractions");
    double v[3];
    for (int i = 0; i < 3; ++i) {
      try {
        std::size_t pos = 0;
        v[i] = std::stod(parts[static_cast<std::size_t>(i)], &pos);
        if (pos != parts[static_cast<std::size_t>(i)].size()) throw std::invalid_argument("trailing");
      } catch (const std::logic_error&) {
        throw Error("bad fraction '" + parts[static_cast<std::size_t>(i)] + "'");
      }
      if (!(v[i] >= 0.0 && v[i] <= 1.0)) throw Error("fractions must lie in [0, 1]");
    }
    if (std::abs(v[0] + v[1] + v[2] - 1.0) > 1e-9) throw Error("fractions must sum to 1");
    return {v[0], v[1], v[2]};
  }

  static Json report_json(const SplitReport& r) {
    return Json{{"attempts", r.attempts},
                {"train_components", r.train_components},
                {"isolated_val", r.isolated_val},
                {"isolated_test", r.isolated_test},
                {"val_graph_connected", r.va_connected},
                {"test_graph_connected", r.te_connected}};
  }

  void do_split() {
    require_out();
    auto [g, nodes] = split_.input.load();
    SplitOptions opt;
    opt.fractions = parse_fractions(split_.frac);
    opt.seed = derive_seed(global_.seed, "split-stream");
    opt.max_retries = split_.max_retries;
    opt.strict = split_.strict;
    SplitReport report;
    auto s = make_split(g, opt, &report);
    std::ostringstream tsv;
    write_split_tsv(tsv, s);
    files_.add("split.tsv", tsv.str());
    Json rj = report_json(report);
    rj["counts"] = Json{{"train", s.count(Role::Train)}, {"val", s.count(Role::Val)}, {"test", s.count(Role::Test)}};
    rj["strict"] = opt.strict;
    files_.add("split_report.json", rj.dump(2) + "\n");
    config_ = Json{{"fractions", {opt.fractions.train, opt.fractions.val, opt.fractions.test}},
                   {"max_retries", opt.max_retries}, {"strict", opt.strict}};
    out_ << rj.dump(2) << '\n';
  }

  // ---- shared by train / eval / search -------------------------------------
  struct ModelFlags {
    std::string data;
    std::string features;
    std::string split;
    bool raw_features = false;
  };

  static void add_model_inputs(CLI::App* c, ModelFlags& f) {
    c->add_option("--data", f.data, "Dataset directory")->required();
    c->add_option("--features", f.features, "Comma list of feature files (TSV or JSON)")->required();
    c->add_option("--split", f.split, "Split TSV")->required();
    c->add_flag("--raw-features", f.raw_features, "Skip standardization (fitted on training nodes)");
  }

  struct Loaded {
    Dataset data;
    std::vector<int> labels;
    FeatureMatrix features;
    SplitAssignment split;
    SplitGraphs graphs;
  };

  static Loaded load_model_inputs(const ModelFlags& f) {
    Loaded l;
    l.data = load_dataset(f.data);
    l.labels = l.data.nodes.labels();
    const auto n = l.data.graph.num_nodes();
    l.split = parse_file(f.split, [&](std::istream& in) { return read_split_tsv(in, n); });
    for (NodeId u = 0; u < n; ++u)
      if (l.labels[u] < 0 && l.split.role[u] != Role::Train)
        throw Error("node '" + l.data.nodes.name(u) + "' is in the " + to_string(l.split.role[u]) + " set but unlabeled");
    const auto fit = l.split.nodes(Role::Train);
    l.features = load_feature_set(split_list(f.features), n, !f.raw_features, fit);
    if (!l.features.all_finite()) throw Error("features contain non-finite values");
    l.graphs = build_split_graphs(l.data.graph, l.split);
    return l;
  }

  static void check_trainable_labels(const Loaded& l) {
    for (NodeId u : l.split.nodes(Role::Train))
      if (l.labels[u] >= 0) return;
    throw Error("no labeled training node");
  }

  SplitDataset view(const Loaded& l) const {
    return SplitDataset{&l.data.graph, &l.features, l.labels, &l.data.hierarchy, &l.split, &l.graphs};
  }

  struct ExperimentFlags {
    std::string config;
    std::string aggregator;
    std::vector<std::size_t> hidden;
    std::vector<std::size_t> fanout;
    std::optional<std::size_t> epochs;
    std::optional<std::size_t> batch_size;
    std::optional<double> lr;
    std::optional<double> unknown_weight;
    bool reverse_fanout = false;
    bool show_target_labels = false;
  };

  static void add_experiment_flags(CLI::App* c, ExperimentFlags& f) {
    c->add_option("--config", f.config, "Experiment config (JSON or key=value)");
    c->add_option("--aggregator", f.aggregator, "mean, wmean1 or wmean2");
    c->add_option("--hidden", f.hidden, "Hidden layer sizes")->delimiter(',');
    c->add_option("--fanout", f.fanout, "Neighbour samples per hop, first hop first")->delimiter(',');
    c->add_option("--epochs", f.epochs);
    c->add_option("--batch-size", f.batch_size);
    c->add_option("--lr", f.lr);
    c->add_option("--unknown-label-weight", f.unknown_weight);
    c->add_flag("--reverse-fanout", f.reverse_fanout, "Use the fanout list last hop first");
    c->add_flag("--show-target-labels", f.show_target_labels,
                "Let batch nodes' own labels take part in weighting during training");
  }

  ExperimentConfig experiment_config(const ExperimentFlags& f) const {
    ExperimentConfig c;
    c.train.seed = derive_seed(global_.seed, "train");
    if (!f.config.empty()) c = experiment_from_json(read_config(f.config), c);
    if (!f.aggregator.empty()) c.model.policy.kind = weight_kind_from_string(f.aggregator);
    if (!f.hidden.empty()) c.model.hidden = f.hidden;
    if (!f.fanout.empty()) c.train.fanout.sizes = f.fanout;
    if (f.epochs) c.train.epochs = *f.epochs;
    if (f.batch_size) c.train.batch_size = *f.batch_size;
    if (f.lr) c.train.lr = *f.lr;
    if (f.unknown_weight) c.model.policy.unknown_label_weight = *f.unknown_weight;
    if (f.reverse_fanout) c.train.reverse_fanout = true;
    if (f.show_target_labels) c.train.hide_target_labels = false;
    if (c.name.empty()) c.name = to_string(c.model.policy.kind);
    return c;
  }

  // ---- train --------------------------------------------------------------
  ModelFlags train_in_;
  ExperimentFlags train_cfg_;

  void setup_train(CLI::App& app) {
    auto* c = app.add_subcommand("train", "Train a GraphSAGE model on the training graph");
    add_model_inputs(c, train_in_);
    add_experiment_flags(c, train_cfg_);
    actions_["train"] = [this] { do_train(); };
  }

  void do_train() {
    require_out();
    const auto cfg = experiment_config(train_cfg_);
    auto l = load_model_inputs(train_in_);
    check_trainable_labels(l);
    WeightTable(cfg.model.policy, l.data.hierarchy);  // validates the policy up front
    SageModel<double> model(l.features.cols(), cfg.model, l.data.hierarchy.num_leaves(), cfg.train.seed);
    const auto train_nodes = l.split.nodes(Role::Train);
    std::vector<NodeId> labelled;
    for (NodeId u : train_nodes)
      if (l.labels[u] >= 0) labelled.push_back(u);
    const auto t0 = std::chrono::steady_clock::now();
    auto result = train(model, l.graphs.g_tr, l.features, l.labels, labelled, l.data.hierarchy, cfg.train);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Json ck = checkpoint_to_json(model, cfg.train, l.features.columns());
    ck["standardized_features"] = !train_in_.raw_features;
    files_.add("checkpoint.json", ck.dump() + "\n");
    Json history{{"epoch_loss", result.epoch_loss}, {"train_nodes", labelled.size()}, {"seconds", secs},
                 {"parameters", model.params().count()}};
    files_.add("history.json", history.dump(2) + "\n");
    config_ = to_json(cfg);
    config_["features"] = train_in_.features;
    config_["split"] = train_in_.split;
    out_ << "epoch\tloss\n";
    for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) out_ << e + 1 << '\t' << fmt_double(result.epoch_loss[e]) << '\n';
  }

  // ---- eval ---------------------------------------------------------------
  ModelFlags eval_in_;
  std::string checkpoint_;
  std::string phase_ = "test";

  void setup_eval(CLI::App& app) {
    auto* c = app.add_subcommand("eval", "Score a checkpoint on the validation or test graph");
    add_model_inputs(c, eval_in_);
    c->add_option("--checkpoint", checkpoint_)->required();
    c->add_option("--phase", phase_)->check(CLI::IsMember({"val", "test"}))->capture_default_str();
    actions_["eval"] = [this] { do_eval(); };
  }

  void do_eval() {
    require_out();
    Json cj = Json::parse(read_file(checkpoint_), nullptr, false);
    if (cj.is_discarded()) throw Error(checkpoint_ + ": not valid JSON");
    auto ck = checkpoint_from_json(cj);
    auto l = load_model_inputs(eval_in_);
    if (cj.value("standardized_features", true) == eval_in_.raw_features)
      throw Error("feature standardization differs from the checkpoint (toggle --raw-features)");
    if (l.features.columns() != ck.feature_columns) throw Error("feature columns do not match the checkpoint");
    if (ck.model.num_classes() != l.data.hierarchy.num_leaves()) throw Error("checkpoint class count does not match the hierarchy");
    const Role phase = role_from_string(phase_);
    const auto nodes = l.split.nodes(phase);
    const Graph& graph = phase == Role::Val ? l.graphs.g_va : l.graphs.g_te;
    const auto fanout = effective_fanout(ck.train, ck.model.num_layers());
    auto ev = evaluate(ck.model, graph, l.features, l.labels, visible_labels(l.labels, l.split, phase), nodes,
                       l.data.hierarchy, fanout, derive_seed(ck.train.seed, phase_));
    Json mj = metrics_to_json(ev.metrics, [&](int c) { return l.data.hierarchy.label_name(c); });
    mj["phase"] = phase_;
    mj["classes"] = [&] {
      std::vector<std::string> names;
      for (int c = 0; c < static_cast<int>(l.data.hierarchy.num_leaves()); ++c) names.push_back(l.data.hierarchy.label_name(c));
      return names;
    }();
    files_.add("metrics.json", mj.dump(2) + "\n");
    config_ = Json{{"checkpoint", checkpoint_}, {"phase", phase_}, {"features", eval_in_.features}, {"split", eval_in_.split}};
    out_ << "phase\t" << phase_ << "\nmicro_f1\t" << fmt_double(ev.metrics.micro_f1) << "\nmacro_f1\t"
         << fmt_double(ev.metrics.macro_f1) << '\n';
  }

  // ---- search -------------------------------------------------------------
  ModelFlags search_in_;
  std::string grid_;
  bool test_all_ = false;

  void setup_search(CLI::App& app) {
    auto* c = app.add_subcommand("search", "Grid search over experiment configs, ranked by validation micro-F1");
    add_model_inputs(c, search_in_);
    c->add_option("--grid", grid_, "Grid JSON: a list of configs, or {base, axes}")->required();
    c->add_flag("--test-all", test_all_, "Report test micro-F1 for every row, not just the winner");
    actions_["search"] = [this] { do_search(); };
  }

  /// Accepts `[cfg, ...]`, `{"grid": [cfg, ...]}` or `{"base": cfg, "axes":
  /// {key: [values...]}}`; axes expand to their cartesian product with the
  /// last key varying fastest.
  std::vector<ExperimentConfig> expand_grid(const Json& j) const {
    ExperimentConfig base;
    base.train.seed = derive_seed(global_.seed, "train");
    std::vector<Json> entries;
    if (j.is_array()) {
      entries.assign(j.begin(), j.end());
    } else if (j.is_object() && j.contains("grid")) {
      entries.assign(j["grid"].begin(), j["grid"].end());
    } else if (j.is_object() && j.contains("axes")) {
      if (j.contains("base")) base = experiment_from_json(j["base"], base);
      std::vector<Json> combos{Json::object()};
      for (auto it = j["axes"].begin(); it != j["axes"].end(); ++it) {
        if (!it.value().is_array() || it.value().empty()) throw Error("grid axis '" + it.key() + "' must be a non-empty list");
        std::vector<Json> next;
        for (const auto& c : combos)
          for (const auto& v : it.value()) {
            Json e = c;
            e[it.key()] = v;
            next.push_back(e);
          }
        combos = std::move(next);
      }
      entries = std::move(combos);
    } else {
      throw Error("grid file must be a list of configs or an object with 'grid' or 'axes'");
    }
    if (entries.empty()) throw Error("grid is empty");
    std::vector<ExperimentConfig> out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      auto c = experiment_from_json(entries[i], base);
      if (!entries[i].contains("name")) c.name = "config_" + std::to_string(i);
      out.push_back(c);
    }
    return out;
  }

  void do_search() {
    require_out();
    Json gj = Json::parse(read_file(grid_), nullptr, false);
    if (gj.is_discarded()) throw Error(grid_ + ": not valid JSON");
    const auto grid = expand_grid(gj);
    auto l = load_model_inputs(search_in_);
    check_trainable_labels(l);
    for (const auto& c : grid) WeightTable(c.model.policy, l.data.hierarchy);
    auto result = grid_search(grid, view(l), test_all_);
    Json rows = Json::array();
    for (std::size_t r = 0; r < result.leaderboard.size(); ++r) {
      const auto& e = result.leaderboard[r];
      rows.push_back(Json{{"rank", r + 1},
                          {"index", e.index},
                          {"name", e.config.name},
                          {"parameters", e.parameters},
                          {"val_micro_f1", e.val_micro_f1},
                          {"test_micro_f1", e.test_micro_f1 ? Json(*e.test_micro_f1) : Json(nullptr)},
                          {"final_loss", e.epoch_loss.empty() ? Json(nullptr) : Json(e.epoch_loss.back())},
                          {"config", to_json(e.config)}});
    }
    const auto& best = result.leaderboard[result.best];
    Json lb{{"best", Json{{"name", best.config.name}, {"index", best.index}, {"val_micro_f1", best.val_micro_f1},
                          {"test_micro_f1", *best.test_micro_f1}}},
            {"leaderboard", rows}};
    files_.add("leaderboard.json", lb.dump(2) + "\n");
    Json ck = checkpoint_to_json(best.model, best.config.train, l.features.columns());
    ck["standardized_features"] = !search_in_.raw_features;
    files_.add("best_checkpoint.json", ck.dump() + "\n");
    config_ = Json{{"grid", gj}, {"features", search_in_.features}, {"split", search_in_.split}, {"test_all", test_all_}};
    out_ << "rank\tname\tval_micro_f1\ttest_micro_f1\n";
    for (const auto& row : rows)
      out_ << row["rank"] << '\t' << row["name"].get<std::string>() << '\t' << fmt_double(row["val_micro_f1"]) << '\t'
           << (row["test_micro_f1"].is_null() ? "-" : fmt_double(row["test_micro_f1"])) << '\n';
  }

  // ---- analyze ------------------------------------------------------------
  std::string analyze_data_;
  double row_sum_ = 1.0;
  std::string stars_;

  void setup_analyze(CLI::App& app) {
    auto* c = app.add_subcommand("analyze", "Neighbourhood label matrix and label histograms");
    c->add_option("--data", analyze_data_, "Dataset directory")->required();
    c->add_option("--row-sum", row_sum_, "Scale of every matrix row")->capture_default_str();
    c->add_option("--stars", stars_, "Comma list of star class names (default: from dataset.json)");
    actions_["analyze"] = [this] { do_analyze(); };
  }

  void do_analyze() {
    require_out();
    if (!(row_sum_ > 0.0)) throw Error("--row-sum must be positive");
    auto d = load_dataset(analyze_data_);
    if (!stars_.empty()) {
      d.star_classes.clear();
      for (const auto& s : split_list(stars_)) d.star_classes.push_back(d.hierarchy.label_of(s));
    }
    const auto& labels = d.nodes.labels();
    auto A = neighbourhood_label_matrix(d.graph, labels, d.hierarchy, row_sum_);
    const auto k = A.classes;
    std::vector<std::string> names;
    for (int c = 0; c < static_cast<int>(k); ++c) names.push_back(d.hierarchy.label_name(c));

    std::string matrix;
    if (global_.format == "json") {
      Json rows = Json::array();
      for (std::size_t i = 0; i < k; ++i) rows.push_back(std::vector<double>(A.values.begin() + static_cast<long>(i * k),
                                                                              A.values.begin() + static_cast<long>((i + 1) * k)));
      matrix = Json{{"classes", names}, {"row_sum", row_sum_}, {"support", A.support}, {"matrix", rows}}.dump(2) + "\n";
    } else {
      std::ostringstream s;
      s << "class";
      for (const auto& n : names) s << '\t' << n;
      s << '\n';
      char buf[32];
      for (std::size_t i = 0; i < k; ++i) {
        s << names[i];
        for (std::size_t j = 0; j < k; ++j) {
          std::snprintf(buf, sizeof buf, "%.10g", A(i, j));
          s << '\t' << buf;
        }
        s << '\n';
      }
      matrix = s.str();
    }
    files_.add("label_matrix" + ext(), matrix);

    Json dist = Json::array();
    for (const auto& [c, count] : label_distribution(labels)) dist.push_back(Json{{"class", names[static_cast<std::size_t>(c)]}, {"count", count}});
    std::vector<std::string> stars;
    for (int s : d.star_classes) stars.push_back(names.at(static_cast<std::size_t>(s)));
    std::size_t unlabeled = 0;
    for (int l : labels) unlabeled += l < 0;
    Json hist{{"label_distribution", dist},
              {"unlabeled", unlabeled},
              {"distinct_neighbour_labels", distinct_labels_per_node(d.graph, labels)},
              {"star_classes", stars},
              {"diagonal_dominance", diagonal_dominance(A, d.star_classes)},
              {"diagonal_dominance_without_star_columns", diagonal_dominance(A, d.star_classes, true)}};
    files_.add("histograms.json", hist.dump(2) + "\n");
    config_ = Json{{"data", analyze_data_}, {"row_sum", row_sum_}, {"stars", stars}};
    out_ << "classes\t" << k << "\ndiagonal_dominance\t" << fmt_double(hist["diagonal_dominance"].get<double>()) << '\n';
  }

  // ---- bench --------------------------------------------------------------
  struct BenchFlags {
    std::size_t seeds = 1;
    std::string config;
    std::optional<std::size_t> epochs;
    std::optional<std::size_t> embed_epochs;
    bool no_embeddings = false;
    bool embed_full_graph = false;
  } bench_;

  void setup_bench(CLI::App& app) {
    auto* c = app.add_subcommand("bench", "End-to-end aggregator comparison on the default synthetic graph");
    c->add_option("--seeds", bench_.seeds, "Number of consecutive seeds to average")->check(CLI::PositiveNumber)->capture_default_str();
    c->add_option("--synth-config", bench_.config, "Override the synthetic generator config");
    c->add_option("--epochs", bench_.epochs, "GraphSAGE training epochs");
    c->add_option("--embed-epochs", bench_.embed_epochs, "Skip-gram epochs");
    c->add_flag("--no-embeddings", bench_.no_embeddings, "Leave skip-gram embeddings out of the features");
    c->add_flag("--embed-full-graph", bench_.embed_full_graph, "Train embeddings on the full graph");
    actions_["bench"] = [this] { do_bench(); };
  }

  void do_bench() {
    BenchConfig cfg;
    if (!bench_.config.empty()) {
      try {
        apply_synth_json(read_config(bench_.config), cfg.synth);
      } catch (const Json::exception& e) {
        throw Error("bad synth config: " + std::string(e.what()));
      }
    }
    validate(cfg.synth);
    if (bench_.epochs) cfg.train.epochs = *bench_.epochs;
    if (bench_.embed_epochs) cfg.embed.skipgram.epochs = *bench_.embed_epochs;
    cfg.use_embeddings = !bench_.no_embeddings;
    cfg.embed_full_graph = bench_.embed_full_graph;
    cfg.jobs = global_.jobs;

    std::vector<BenchResult> runs;
    for (std::size_t i = 0; i < bench_.seeds; ++i) {
      cfg.seed = global_.seed + i;
      runs.push_back(run_bench(cfg));
    }
    const auto table = bench_table(runs);
    Json per_seed = Json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
      Json rows = Json::array();
      for (const auto& r : runs[i].rows)
        rows.push_back(Json{{"aggregator", r.aggregator}, {"val_micro_f1", r.val_micro_f1},
                            {"test_micro_f1", r.test_micro_f1}, {"epoch_loss", r.epoch_loss}});
      per_seed.push_back(Json{{"seed", global_.seed + i}, {"nodes", runs[i].nodes}, {"edges", runs[i].edges},
                              {"feature_dim", runs[i].feature_dim}, {"split_attempts", runs[i].split_report.attempts},
                              {"rows", rows}});
    }
    Json summary = Json::array();
    for (const auto& [name, v] : table) summary.push_back(Json{{"aggregator", name}, {"val_micro_f1", v.first}, {"test_micro_f1", v.second}});
    Json result{{"seeds", bench_.seeds}, {"summary", summary}, {"runs", per_seed}};
    config_ = synth_json(cfg.synth);
    config_["seeds"] = bench_.seeds;
    config_["epochs"] = cfg.train.epochs;
    config_["embed_epochs"] = cfg.embed.skipgram.epochs;
    config_["embeddings"] = cfg.use_embeddings;
    config_["embed_full_graph"] = cfg.embed_full_graph;
    std::string rendered;
    if (global_.format == "json") {
      rendered = result.dump(2) + "\n";
    } else {
      std::ostringstream s;
      s << "aggregator\tval_micro_f1\ttest_micro_f1\n";
      for (const auto& [name, v] : table) s << name << '\t' << fmt_double(v.first) << '\t' << fmt_double(v.second) << '\n';
      rendered = s.str();
    }
    out_ << rendered;
    if (!global_.out.empty()) {
      files_.add("bench.json", result.dump(2) + "\n");
      if (global_.format == "tsv") files_.add("bench.tsv", rendered);
    }
  }

  /// Mean (val, test) micro-F1 per aggregator, in run order.
  static std::vector<std::pair<std::string, std::pair<double, double>>> bench_table(const std::vector<BenchResult>& runs) {
    std::vector<std::pair<std::string, std::pair<double, double>>> t;
    for (const auto& r : runs.front().rows) t.push_back({r.aggregator, {0.0, 0.0}});
    for (const auto& run : runs)
      for (std::size_t i = 0; i < run.rows.size(); ++i) {
        t[i].second.first += run.rows[i].val_micro_f1 / static_cast<double>(runs.size());
        t[i].second.second += run.rows[i].test_micro_f1 / static_cast<double>(runs.size());
      }
    return t;
  }

  std::ostream& out_;
  std::ostream& err_;
  GlobalOptions global_;
  std::map<std::string, std::function<void()>> actions_;
  std::string command_;
  std::vector<std::string> args_;
  Json config_ = Json::object();
  OutputSet files_;
};

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Runner r(out, err);
  return r.run(args);
}

}  // namespace hiersage::cli
