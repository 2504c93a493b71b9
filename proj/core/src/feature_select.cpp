#include "debris/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "debris/error.hpp"
#include "debris/parallel.hpp"
#include "debris/rng.hpp"
#include "json_util.hpp"

namespace debris {

std::size_t TreeNode::majority() const {
  std::size_t best = 0;
  for (std::size_t c = 1; c < class_weights.size(); ++c) {
    if (class_weights[c] > class_weights[best]) best = c;
  }
  return best;
}

std::size_t DecisionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].leaf) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[n.feature] <= n.threshold ? n.left : n.right);
  }
  return nodes[i].majority();
}

std::size_t DecisionTree::depth() const {
  std::size_t d = 0;
  for (const auto& n : nodes) d = std::max(d, n.depth);
  return d;
}

std::size_t DecisionTree::split_count() const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(),
                                                [](const TreeNode& n) { return !n.leaf; }));
}

namespace {

double gini(std::span<const double> w, double total) {
  if (total <= 0.0) return 0.0;
  double s = 0.0;
  for (double v : w) s += (v / total) * (v / total);
  return std::max(0.0, 1.0 - s);
}

// Per-feature row orderings by ascending value (stable on row index).
std::vector<std::vector<std::uint32_t>> presort(const TrainingData& data) {
  std::vector<std::vector<std::uint32_t>> order(data.n_features);
  for (std::size_t f = 0; f < data.n_features; ++f) {
    auto& o = order[f];
    o.resize(data.rows());
    std::iota(o.begin(), o.end(), 0u);
    std::stable_sort(o.begin(), o.end(), [&](std::uint32_t a, std::uint32_t b) {
      return data.at(a, f) < data.at(b, f);
    });
  }
  return order;
}

struct Candidate {
  double gain = 0.0;
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
};

// Level-wise CART: one sweep per feature per level over the presorted rows.
DecisionTree grow(const TrainingData& data, const std::vector<std::vector<std::uint32_t>>& order,
                  std::span<const double> weights, std::size_t max_depth) {
  const std::size_t n = data.rows(), k = data.n_classes, d = data.n_features;
  DecisionTree tree;
  tree.n_features = d;
  tree.n_classes = k;
  tree.max_depth = max_depth;

  TreeNode root;
  root.class_weights.assign(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] > 0.0) root.class_weights[data.y[i]] += weights[i];
  }
  root.weight = std::accumulate(root.class_weights.begin(), root.class_weights.end(), 0.0);
  root.impurity = gini(root.class_weights, root.weight);
  tree.nodes.push_back(root);

  std::vector<std::int32_t> node_of(n, 0);
  std::vector<std::size_t> active{0};
  std::vector<std::int32_t> slot(1, 0);  // node id -> position in `active`

  for (std::size_t depth = 0; depth < max_depth && !active.empty(); ++depth) {
    std::vector<std::size_t> splittable;
    for (auto id : active) {
      if (tree.nodes[id].impurity > 0.0) splittable.push_back(id);
    }
    if (splittable.empty()) break;
    slot.assign(tree.nodes.size(), -1);
    for (std::size_t s = 0; s < splittable.size(); ++s) slot[splittable[s]] = static_cast<std::int32_t>(s);

    const std::size_t m = splittable.size();
    std::vector<Candidate> best(m);
    std::vector<double> left(m * k);
    std::vector<double> left_total(m);
    std::vector<double> last(m);
    std::vector<char> seen(m);

    for (std::size_t f = 0; f < d; ++f) {
      std::fill(left.begin(), left.end(), 0.0);
      std::fill(left_total.begin(), left_total.end(), 0.0);
      std::fill(seen.begin(), seen.end(), 0);
      for (auto row : order[f]) {
        const double w = weights[row];
        if (w <= 0.0) continue;
        const auto nid = node_of[row];
        if (nid < 0) continue;
        const auto s = slot[static_cast<std::size_t>(nid)];
        if (s < 0) continue;
        const auto su = static_cast<std::size_t>(s);
        const double x = data.at(row, f);
        if (seen[su] && x != last[su]) {
          const auto& node = tree.nodes[splittable[su]];
          const double wl = left_total[su], wr = node.weight - wl;
          std::span<const double> lw(&left[su * k], k);
          double right_buf[16];
          std::vector<double> right_vec;
          double* rw = right_buf;
          if (k > 16) {
            right_vec.resize(k);
            rw = right_vec.data();
          }
          for (std::size_t c = 0; c < k; ++c) rw[c] = node.class_weights[c] - lw[c];
          const double gain = node.weight * node.impurity - wl * gini(lw, wl) -
                              wr * gini(std::span<const double>(rw, k), wr);
          if (gain > best[su].gain) {
            double t = 0.5 * (last[su] + x);
            if (!(t < x)) t = last[su];
            best[su] = {gain, true, f, t};
          }
        }
        seen[su] = 1;
        last[su] = x;
        left[su * k + data.y[row]] += w;
        left_total[su] += w;
      }
    }

    std::vector<std::size_t> next;
    for (std::size_t s = 0; s < m; ++s) {
      const auto id = splittable[s];
      const double tol = 1e-12 * tree.nodes[id].weight;
      if (!best[s].found || !(best[s].gain > tol)) continue;
      TreeNode l, r;
      l.class_weights.assign(k, 0.0);
      r.class_weights.assign(k, 0.0);
      l.depth = r.depth = depth + 1;
      tree.nodes[id].leaf = false;
      tree.nodes[id].feature = best[s].feature;
      tree.nodes[id].threshold = best[s].threshold;
      tree.nodes[id].left = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.push_back(std::move(l));
      tree.nodes[id].right = static_cast<std::int32_t>(tree.nodes.size());
      tree.nodes.push_back(std::move(r));
      next.push_back(static_cast<std::size_t>(tree.nodes[id].left));
      next.push_back(static_cast<std::size_t>(tree.nodes[id].right));
    }
    // Route rows to the new children and fill their class weights.
    for (std::size_t i = 0; i < n; ++i) {
      const auto nid = node_of[i];
      if (nid < 0) continue;
      const auto& node = tree.nodes[static_cast<std::size_t>(nid)];
      if (node.leaf) {
        node_of[i] = -1;
        continue;
      }
      const auto child = data.at(i, node.feature) <= node.threshold ? node.left : node.right;
      node_of[i] = child;
      if (weights[i] > 0.0) tree.nodes[static_cast<std::size_t>(child)].class_weights[data.y[i]] += weights[i];
    }
    for (auto id : next) {
      auto& c = tree.nodes[id];
      c.weight = std::accumulate(c.class_weights.begin(), c.class_weights.end(), 0.0);
      c.impurity = gini(c.class_weights, c.weight);
    }
    active = std::move(next);
  }
  return tree;
}

void check(const TrainingData& data, std::span<const double> weights) {
  if (data.n_features == 0 || data.n_classes == 0 || data.rows() == 0 ||
      data.x.size() != data.rows() * data.n_features) {
    throw Error(ErrorKind::DimensionMismatch, "training matrix does not match rows x features");
  }
  if (!weights.empty() && weights.size() != data.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "weight count does not match rows");
  }
  for (auto y : data.y) {
    if (y >= data.n_classes) throw Error(ErrorKind::DimensionMismatch, "label outside class range");
  }
}

}  // namespace

DecisionTree fit_tree(const TrainingData& data, std::size_t max_depth, std::span<const double> weights) {
  check(data, weights);
  std::vector<double> ones;
  if (weights.empty()) {
    ones.assign(data.rows(), 1.0);
    weights = ones;
  }
  return grow(data, presort(data), weights, max_depth);
}

std::vector<double> tree_importances(const DecisionTree& tree) {
  std::vector<double> imp(tree.n_features, 0.0);
  for (const auto& n : tree.nodes) {
    if (n.leaf) continue;
    const auto& l = tree.nodes[static_cast<std::size_t>(n.left)];
    const auto& r = tree.nodes[static_cast<std::size_t>(n.right)];
    imp[n.feature] += n.weight * n.impurity - l.weight * l.impurity - r.weight * r.impurity;
  }
  return imp;
}

double ImportanceReport::importance(Feature f) const {
  auto it = std::find(features.begin(), features.end(), f);
  if (it == features.end()) throw Error(ErrorKind::MissingFeature, "feature not in report");
  return importances[static_cast<std::size_t>(it - features.begin())];
}

namespace {

struct Forest {
  std::vector<DecisionTree> trees;
  std::vector<double> importances;  // normalized
};

struct ClassMap {
  std::vector<ClassLabel> classes;
  std::array<int, kClassCount> index{};
};

ClassMap class_map(const Dataset& d) {
  std::array<bool, kClassCount> present{};
  for (const auto& r : d.records) present[static_cast<std::size_t>(r.label)] = true;
  ClassMap m;
  m.index.fill(-1);
  for (auto c : kAllClasses) {
    if (!present[static_cast<std::size_t>(c)]) continue;
    m.index[static_cast<std::size_t>(c)] = static_cast<int>(m.classes.size());
    m.classes.push_back(c);
  }
  return m;
}

// Trains on `rows` of (x, y). Identical (row, label) pairs are merged and
// carried as bootstrap counts, which is exactly equivalent to duplicating them.
Forest train_forest(std::span<const double> x, std::span<const std::uint32_t> y, std::size_t d,
                    std::size_t n_classes, std::span<const std::size_t> rows, const ForestConfig& cfg) {
  std::map<std::pair<std::vector<double>, std::uint32_t>, std::uint32_t> key_of;
  std::vector<std::uint32_t> unique_of(rows.size());
  std::vector<double> ux;
  std::vector<std::uint32_t> uy;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = rows[i];
    std::vector<double> v(x.begin() + static_cast<std::ptrdiff_t>(r * d),
                          x.begin() + static_cast<std::ptrdiff_t>((r + 1) * d));
    auto [it, inserted] = key_of.try_emplace({v, y[r]}, static_cast<std::uint32_t>(uy.size()));
    if (inserted) {
      ux.insert(ux.end(), v.begin(), v.end());
      uy.push_back(y[r]);
    }
    unique_of[i] = it->second;
  }
  TrainingData data{ux, uy, d, n_classes};
  check(data, {});
  const auto order = presort(data);

  Forest forest;
  forest.trees.resize(cfg.n_trees);
  parallel_for(cfg.n_trees, [&](std::size_t t) {
    Rng rng(derive_seed(cfg.seed, 0x100000 + t));
    std::vector<double> w(uy.size(), 0.0);
    for (std::size_t draw = 0; draw < rows.size(); ++draw) w[unique_of[rng.below(rows.size())]] += 1.0;
    forest.trees[t] = grow(data, order, w, cfg.max_depth);
  });
  forest.importances.assign(d, 0.0);
  for (const auto& t : forest.trees) {
    auto imp = tree_importances(t);
    for (std::size_t f = 0; f < d; ++f) forest.importances[f] += imp[f];
  }
  const double total = std::accumulate(forest.importances.begin(), forest.importances.end(), 0.0);
  if (total > 0.0) {
    for (auto& v : forest.importances) v /= total;
  }
  return forest;
}

std::size_t vote(const Forest& forest, std::span<const double> x, std::size_t n_classes) {
  std::vector<std::size_t> votes(n_classes, 0);
  for (const auto& t : forest.trees) ++votes[t.predict(x)];
  return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

double accuracy(const Forest& forest, std::span<const double> x, std::span<const std::uint32_t> y,
                std::size_t d, std::size_t n_classes, std::span<const std::size_t> rows) {
  if (rows.empty()) return 0.0;
  std::size_t hits = 0;
  for (auto r : rows) {
    if (vote(forest, x.subspan(r * d, d), n_classes) == y[r]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

void check_config(const ForestConfig& cfg) {
  if (cfg.n_trees == 0) throw Error(ErrorKind::Config, "n_trees must be positive");
  if (cfg.max_depth == 0) throw Error(ErrorKind::Config, "max_depth must be positive");
  if (!(cfg.split_fraction > 0.0 && cfg.split_fraction < 1.0)) {
    throw Error(ErrorKind::Config, "split_fraction must lie in (0, 1)");
  }
}

}  // namespace

ImportanceReport fit_forest(const Dataset& dataset, std::span<const Feature> features,
                            const ForestConfig& cfg) {
  check_config(cfg);
  if (features.empty()) throw Error(ErrorKind::DimensionMismatch, "no features selected");
  const auto cm = class_map(dataset);
  if (cm.classes.size() < 2) throw Error(ErrorKind::SingleClass, "forest needs at least two classes");
  const auto x = feature_matrix(dataset, features);
  const std::size_t d = features.size();
  std::vector<std::uint32_t> y(dataset.size());
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    y[i] = static_cast<std::uint32_t>(cm.index[static_cast<std::size_t>(dataset.records[i].label)]);
  }

  // Stratified split: shuffle each class's rows, first round(f * n_c) train.
  Rng split_rng(derive_seed(cfg.seed, 0));
  std::vector<std::size_t> train, test;
  for (std::size_t c = 0; c < cm.classes.size(); ++c) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == c) rows.push_back(i);
    }
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[split_rng.below(i)]);
    const auto n_train = static_cast<std::size_t>(std::llround(cfg.split_fraction * static_cast<double>(rows.size())));
    train.insert(train.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
    test.insert(test.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());

  const auto forest = train_forest(x, y, d, cm.classes.size(), train, cfg);
  ImportanceReport rep;
  rep.features.assign(features.begin(), features.end());
  rep.importances = forest.importances;
  rep.train_accuracy = accuracy(forest, x, y, d, cm.classes.size(), train);
  rep.test_accuracy = accuracy(forest, x, y, d, cm.classes.size(), test);
  rep.train_rows = train.size();
  rep.test_rows = test.size();
  rep.classes = cm.classes;
  rep.config = cfg;
  return rep;
}

double cross_domain_accuracy(const Dataset& train, const Dataset& test, std::span<const Feature> features,
                             const ForestConfig& cfg) {
  check_config(cfg);
  const auto cm = class_map(train);
  if (cm.classes.size() < 2) throw Error(ErrorKind::SingleClass, "forest needs at least two classes");
  if (test.empty()) throw Error(ErrorKind::EmptySample, "empty evaluation dataset");
  const std::size_t d = features.size();
  const auto x = feature_matrix(train, features);
  std::vector<std::uint32_t> y(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    y[i] = static_cast<std::uint32_t>(cm.index[static_cast<std::size_t>(train.records[i].label)]);
  }
  std::vector<std::size_t> rows(train.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const auto forest = train_forest(x, y, d, cm.classes.size(), rows, cfg);

  // Coast and Sand name the same non-water substrate in the two domains.
  auto mapped = [&](ClassLabel c) {
    int idx = cm.index[static_cast<std::size_t>(c)];
    if (idx < 0 && c == ClassLabel::Coast) idx = cm.index[static_cast<std::size_t>(ClassLabel::Sand)];
    if (idx < 0 && c == ClassLabel::Sand) idx = cm.index[static_cast<std::size_t>(ClassLabel::Coast)];
    return idx;
  };
  std::size_t hits = 0;
  for (const auto& r : test.records) {
    auto v = feature_vector(r, features);
    const int truth = mapped(r.label);
    if (truth >= 0 && vote(forest, v, cm.classes.size()) == static_cast<std::size_t>(truth)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

std::string_view to_string(FeatureSetId id) {
  switch (id) {
    case FeatureSetId::A: return "A";
    case FeatureSetId::B: return "B";
    case FeatureSetId::C: return "C";
    case FeatureSetId::D: return "D";
  }
  return "A";
}

FeatureSetId feature_set_from_name(std::string_view name) {
  for (auto id : {FeatureSetId::A, FeatureSetId::B, FeatureSetId::C, FeatureSetId::D}) {
    if (to_string(id) == name) return id;
  }
  throw Error(ErrorKind::Config, "unknown feature set '" + std::string(name) + "'");
}

FeatureSet fixed_feature_set(FeatureSetId id) {
  FeatureSet s;
  s.id = id;
  switch (id) {
    case FeatureSetId::A: s.features.assign(all_features().begin(), all_features().end()); break;
    case FeatureSetId::B: s.features.assign(band_features().begin(), band_features().end()); break;
    case FeatureSetId::C: s.features.assign(index_features().begin(), index_features().end()); break;
    case FeatureSetId::D:
      throw Error(ErrorKind::Config, "feature set D is data-driven; build it from an importance report");
  }
  return s;
}

std::vector<FeatureSet> build_feature_sets(const ImportanceReport& report, const CorrelationMatrix& corr,
                                           std::span<const CorrelationMatrix> per_class) {
  if (report.features.size() < 3) {
    throw Error(ErrorKind::NoEligibleCandidate, "set D needs an importance report over at least 3 features");
  }
  std::vector<std::size_t> rank(report.features.size());
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    if (report.importances[a] != report.importances[b]) return report.importances[a] > report.importances[b];
    return report.features[a] < report.features[b];
  });
  const Feature t1 = report.features[rank[0]], t2 = report.features[rank[1]];

  auto passes = [&](const CorrelationMatrix& m, Feature c) {
    return std::fabs(m.between(c, t1)) < kCorrelationGate && std::fabs(m.between(c, t2)) < kCorrelationGate;
  };
  auto gather = [&](bool strict) {
    std::vector<Feature> out;
    for (auto c : corr.features) {
      if (c == t1 || c == t2) continue;
      bool ok = passes(corr, c);
      if (strict) {
        for (const auto& m : per_class) ok = ok && passes(m, c);
      }
      if (ok) out.push_back(c);
    }
    return out;
  };

  FeatureSet d;
  d.id = FeatureSetId::D;
  auto cands = gather(true);
  if (cands.size() < 2) {
    cands = gather(false);
    d.relaxed = true;
  }
  if (cands.size() < 2) {
    throw Error(ErrorKind::NoEligibleCandidate, "fewer than two features pass the correlation gate");
  }
  auto score = [&](Feature c) { return std::max(std::fabs(corr.between(c, t1)), std::fabs(corr.between(c, t2))); };
  std::stable_sort(cands.begin(), cands.end(), [&](Feature a, Feature b) {
    const double sa = score(a), sb = score(b);
    if (sa != sb) return sa < sb;
    return a < b;
  });
  d.features = {t1, t2, cands[0], cands[1]};

  return {fixed_feature_set(FeatureSetId::A), fixed_feature_set(FeatureSetId::B),
          fixed_feature_set(FeatureSetId::C), d};
}

namespace {

using detail::Json;
using detail::num;

Json report_json(const ImportanceReport& r) {
  Json imp = Json::object();
  for (std::size_t i = 0; i < r.features.size(); ++i) imp[std::string(to_string(r.features[i]))] = num(r.importances[i]);
  Json classes = Json::array();
  for (auto c : r.classes) classes.push_back(std::string(to_string(c)));
  return Json{{"label", r.label},
              {"importances", imp},
              {"train_accuracy", num(r.train_accuracy)},
              {"test_accuracy", num(r.test_accuracy)},
              {"train_rows", r.train_rows},
              {"test_rows", r.test_rows},
              {"classes", classes},
              {"config", Json{{"n_trees", r.config.n_trees},
                              {"max_depth", r.config.max_depth},
                              {"split_fraction", num(r.config.split_fraction)},
                              {"seed", r.config.seed},
                              {"max_features", "all"},
                              {"vote", "majority"}}}};
}

Json set_json(const FeatureSet& s) {
  Json names = Json::array();
  for (auto f : s.features) names.push_back(std::string(to_string(f)));
  Json j{{"id", std::string(to_string(s.id))}, {"features", names}};
  if (s.id == FeatureSetId::D) j["relaxed"] = s.relaxed;
  return j;
}

}  // namespace

std::string to_json(const ImportanceReport& report) { return detail::dump(report_json(report)); }
std::string to_json(const FeatureSet& set) { return detail::dump(set_json(set)); }

}  // namespace debris
