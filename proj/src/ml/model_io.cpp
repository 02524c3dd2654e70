#include "vdo/ml/model_io.hpp"

#include <algorithm>
#include <type_traits>

#include "vdo/error.hpp"

namespace vdo::ml {
namespace {

using nlohmann::json;

json labels_to_json(const std::vector<Label>& labels) {
  json j = json::array();
  for (Label l : labels) j.push_back(std::string(label_id(l)));
  return j;
}

Label label_from_json(const json& j) {
  const auto l = parse_label(j.get<std::string>());
  if (!l) throw ParseError(0, "unknown label \"" + j.get<std::string>() + "\" in model");
  return *l;
}

std::vector<Label> labels_from_json(const json& j) {
  std::vector<Label> out;
  for (const auto& e : j) out.push_back(label_from_json(e));
  if (!std::is_sorted(out.begin(), out.end())) throw ParseError(0, "model class list is not in taxonomy order");
  return out;
}

json sparse_to_json(const SparseVector& v) {
  json j = json::array();
  for (const auto& e : v) j.push_back(json::array({e.column, e.value}));
  return j;
}

SparseVector sparse_from_json(const json& j) {
  SparseVector v;
  for (const auto& e : j) v.push_back({e.at(0).get<std::uint32_t>(), e.at(1).get<double>()});
  return v;
}

json svm_params_to_json(const SvmParams& p) {
  return {{"c", p.c}, {"tolerance", p.tolerance}, {"epsilon", p.epsilon}, {"exponent", p.exponent}};
}

SvmParams svm_params_from_json(const json& j) {
  SvmParams p;
  p.c = j.value("c", p.c);
  p.tolerance = j.value("tolerance", p.tolerance);
  p.epsilon = j.value("epsilon", p.epsilon);
  p.exponent = j.value("exponent", p.exponent);
  return p;
}

json nb_to_json(const NaiveBayesModel& m, NbInput input) {
  return {{"classes", labels_to_json(m.classes)},
          {"num_columns", m.num_columns},
          {"input", input == NbInput::Counts ? "counts" : "weights"},
          {"log_prior", m.log_prior},
          {"log_likelihood", m.log_likelihood}};
}

NbInput nb_input_from_json(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "counts") return NbInput::Counts;
  if (s == "weights") return NbInput::Weights;
  throw ParseError(0, "unknown naive bayes input \"" + s + "\"");
}

NaiveBayesModel nb_from_json(const json& j) {
  NaiveBayesModel m;
  m.classes = labels_from_json(j.at("classes"));
  m.num_columns = j.at("num_columns").get<std::size_t>();
  m.log_prior = j.at("log_prior").get<std::vector<double>>();
  m.log_likelihood = j.at("log_likelihood").get<std::vector<std::vector<double>>>();
  if (m.log_prior.size() != m.classes.size() || m.log_likelihood.size() != m.classes.size()) {
    throw ParseError(0, "naive bayes tables do not match the class list");
  }
  for (const auto& row : m.log_likelihood) {
    if (row.size() != m.num_columns) throw ParseError(0, "naive bayes likelihood row has the wrong width");
  }
  return m;
}

json tree_to_json(const TreeModel& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes) {
    nodes.push_back({{"feature", n.feature},
                     {"threshold", n.threshold},
                     {"left", n.left},
                     {"right", n.right},
                     {"leaf_class", n.leaf_class},
                     {"class_weights", n.class_weights}});
  }
  return {{"classes", labels_to_json(t.classes)}, {"num_columns", t.num_columns}, {"nodes", std::move(nodes)}};
}

TreeModel tree_from_json(const json& j) {
  TreeModel t;
  t.classes = labels_from_json(j.at("classes"));
  t.num_columns = j.at("num_columns").get<std::size_t>();
  for (const auto& n : j.at("nodes")) {
    TreeNode node;
    node.feature = n.at("feature").get<std::uint32_t>();
    node.threshold = n.at("threshold").get<double>();
    node.left = n.at("left").get<std::int32_t>();
    node.right = n.at("right").get<std::int32_t>();
    node.leaf_class = n.at("leaf_class").get<std::uint32_t>();
    node.class_weights = n.at("class_weights").get<std::vector<double>>();
    t.nodes.push_back(std::move(node));
  }
  const auto count = static_cast<std::int32_t>(t.nodes.size());
  if (count == 0) throw ParseError(0, "tree has no nodes");
  for (std::int32_t i = 0; i < count; ++i) {
    const auto& n = t.nodes[i];
    const bool leaf = n.left < 0 && n.right < 0;
    if (!leaf && (n.left <= i || n.right <= i || n.left >= count || n.right >= count)) {
      throw ParseError(0, "tree node " + std::to_string(i) + " has invalid children");
    }
    if (n.leaf_class >= t.classes.size() || n.class_weights.size() != t.classes.size()) {
      throw ParseError(0, "tree node " + std::to_string(i) + " has an invalid class");
    }
  }
  return t;
}

json svm_to_json(const SvmModel& m) {
  json machines = json::array();
  for (const auto& bm : m.machines) {
    machines.push_back({{"positive", std::string(label_id(bm.positive))},
                        {"negative", std::string(label_id(bm.negative))},
                        {"bias", bm.bias},
                        {"weights", sparse_to_json(bm.weights)}});
  }
  return {{"classes", labels_to_json(m.classes)},
          {"num_columns", m.num_columns},
          {"column_min", m.column_min},
          {"column_range", m.column_range},
          {"machines", std::move(machines)}};
}

SvmModel svm_from_json(const json& j) {
  SvmModel m;
  m.classes = labels_from_json(j.at("classes"));
  m.num_columns = j.at("num_columns").get<std::size_t>();
  m.column_min = j.at("column_min").get<std::vector<double>>();
  m.column_range = j.at("column_range").get<std::vector<double>>();
  if (m.column_min.size() != m.num_columns || m.column_range.size() != m.num_columns) {
    throw ParseError(0, "svm normalization ranges have the wrong width");
  }
  for (const auto& bm : j.at("machines")) {
    m.machines.push_back({label_from_json(bm.at("positive")), label_from_json(bm.at("negative")),
                          sparse_from_json(bm.at("weights")), bm.at("bias").get<double>()});
  }
  const auto k = m.classes.size();
  if (m.machines.size() != k * (k - 1) / 2) throw ParseError(0, "svm machine count is not k(k-1)/2");
  return m;
}

json forest_to_json(const ForestModel& f) {
  json trees = json::array();
  for (const auto& t : f.trees) trees.push_back(tree_to_json(t));
  return {{"classes", labels_to_json(f.classes)},
          {"num_columns", f.num_columns},
          {"seed", f.seed},
          {"trees", std::move(trees)}};
}

ForestModel forest_from_json(const json& j) {
  ForestModel f;
  f.classes = labels_from_json(j.at("classes"));
  f.num_columns = j.at("num_columns").get<std::size_t>();
  f.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& t : j.at("trees")) f.trees.push_back(tree_from_json(t));
  if (f.trees.empty()) throw ParseError(0, "forest has no trees");
  for (const auto& t : f.trees) {
    if (t.classes != f.classes) throw ParseError(0, "forest tree class list differs from the forest's");
  }
  return f;
}

json boost_to_json(const BoostModel& b) {
  json members = json::array();
  for (const auto& m : b.members) {
    members.push_back(
        {{"error", m.error}, {"beta", m.beta}, {"perfect", m.perfect}, {"model", svm_to_json(m.model)}});
  }
  return {{"classes", labels_to_json(b.classes)}, {"num_columns", b.num_columns}, {"members", std::move(members)}};
}

BoostModel boost_from_json(const json& j) {
  BoostModel b;
  b.classes = labels_from_json(j.at("classes"));
  b.num_columns = j.at("num_columns").get<std::size_t>();
  for (const auto& m : j.at("members")) {
    b.members.push_back({svm_from_json(m.at("model")), m.at("error").get<double>(), m.at("beta").get<double>(),
                         m.at("perfect").get<bool>()});
  }
  if (b.members.empty()) throw ParseError(0, "boosted model has no members");
  return b;
}

}  // namespace

json spec_to_json(const AlgorithmSpec& spec) {
  return {{"kind", std::string(algorithm_id(spec.kind))},
          {"seed", spec.seed},
          {"naive_bayes", {{"input", spec.naive_bayes.input == NbInput::Counts ? "counts" : "weights"}}},
          {"decision_tree",
           {{"confidence", spec.tree.confidence}, {"min_leaf", spec.tree.min_leaf}, {"prune", spec.tree.prune}}},
          {"svm", svm_params_to_json(spec.svm)},
          {"random_forest",
           {{"num_trees", spec.forest.num_trees},
            {"features_per_split", spec.forest.features_per_split},
            {"min_leaf", spec.forest.min_leaf},
            {"bag_fraction", spec.forest.bag_fraction}}},
          {"adaboost_svm",
           {{"iterations", spec.boost.iterations},
            {"resample_fraction", spec.boost.resample_fraction},
            {"base", svm_params_to_json(spec.boost.base)}}}};
}

AlgorithmSpec spec_from_json(const json& j) {
  try {
    const auto kind = parse_algorithm(j.at("kind").get<std::string>());
    if (!kind) throw ParseError(0, "unknown algorithm kind");
    auto spec = AlgorithmSpec::defaults(*kind);
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("naive_bayes")) spec.naive_bayes.input = nb_input_from_json(j["naive_bayes"].at("input"));
    if (j.contains("decision_tree")) {
      const auto& t = j["decision_tree"];
      spec.tree.confidence = t.value("confidence", spec.tree.confidence);
      spec.tree.min_leaf = t.value("min_leaf", spec.tree.min_leaf);
      spec.tree.prune = t.value("prune", spec.tree.prune);
    }
    if (j.contains("svm")) spec.svm = svm_params_from_json(j["svm"]);
    if (j.contains("random_forest")) {
      const auto& f = j["random_forest"];
      spec.forest.num_trees = f.value("num_trees", spec.forest.num_trees);
      spec.forest.features_per_split = f.value("features_per_split", spec.forest.features_per_split);
      spec.forest.min_leaf = f.value("min_leaf", spec.forest.min_leaf);
      spec.forest.bag_fraction = f.value("bag_fraction", spec.forest.bag_fraction);
    }
    if (j.contains("adaboost_svm")) {
      const auto& b = j["adaboost_svm"];
      spec.boost.iterations = b.value("iterations", spec.boost.iterations);
      spec.boost.resample_fraction = b.value("resample_fraction", spec.boost.resample_fraction);
      if (b.contains("base")) spec.boost.base = svm_params_from_json(b["base"]);
    }
    return spec;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("invalid algorithm spec: ") + e.what());
  }
}

json model_to_json(const TrainedModel& model) {
  json state = std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NaiveBayesState>) {
          return nb_to_json(s.model, s.input);
        } else if constexpr (std::is_same_v<T, TreeModel>) {
          return tree_to_json(s);
        } else if constexpr (std::is_same_v<T, SvmModel>) {
          return svm_to_json(s);
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          return forest_to_json(s);
        } else if constexpr (std::is_same_v<T, BoostModel>) {
          return boost_to_json(s);
        } else {
          return {{"naive_bayes", nb_to_json(s.naive_bayes, s.nb_input)},
                  {"svm", svm_to_json(s.svm)},
                  {"decision_tree", tree_to_json(s.tree)},
                  {"random_forest", forest_to_json(s.forest)},
                  {"adaboost_svm", boost_to_json(s.boost)}};
        }
      },
      model.state);
  return {{"format", "vdo-model"},
          {"version", kModelFormatVersion},
          {"kind", std::string(algorithm_id(model.kind))},
          {"classes", labels_to_json(model.classes)},
          {"num_columns", model.num_columns},
          {"state", std::move(state)}};
}

TrainedModel model_from_json(const json& j) {
  try {
    if (!j.is_object() || j.value("format", std::string{}) != "vdo-model") {
      throw ParseError(0, "not a vdo-model document");
    }
    if (j.at("version").get<int>() != kModelFormatVersion) {
      throw ParseError(0, "unsupported model version " + j.at("version").dump());
    }
    const auto kind = parse_algorithm(j.at("kind").get<std::string>());
    if (!kind) throw ParseError(0, "unknown model kind " + j.at("kind").dump());
    TrainedModel m{*kind, labels_from_json(j.at("classes")), j.at("num_columns").get<std::size_t>(), {}};
    const auto& s = j.at("state");
    switch (*kind) {
      case AlgorithmKind::NaiveBayes:
        m.state = NaiveBayesState{nb_from_json(s), nb_input_from_json(s.at("input"))};
        break;
      case AlgorithmKind::DecisionTree:
        m.state = tree_from_json(s);
        break;
      case AlgorithmKind::Svm:
        m.state = svm_from_json(s);
        break;
      case AlgorithmKind::RandomForest:
        m.state = forest_from_json(s);
        break;
      case AlgorithmKind::AdaBoostSvm:
        m.state = boost_from_json(s);
        break;
      case AlgorithmKind::MajorityVote: {
        VoteModel v;
        v.naive_bayes = nb_from_json(s.at("naive_bayes"));
        v.nb_input = nb_input_from_json(s.at("naive_bayes").at("input"));
        v.svm = svm_from_json(s.at("svm"));
        v.tree = tree_from_json(s.at("decision_tree"));
        v.forest = forest_from_json(s.at("random_forest"));
        v.boost = boost_from_json(s.at("adaboost_svm"));
        m.state = std::move(v);
        break;
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw ParseError(0, std::string("invalid model document: ") + e.what());
  }
}

}  // namespace vdo::ml
