#include "typoscope/experiment.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "typoscope/error.hpp"
#include "typoscope/text.hpp"

namespace typoscope {

namespace {

std::vector<WindowSpec> parse_windows(const std::string& v) {
  std::vector<WindowSpec> out;
  if (v == "none" || v == "-") return out;
  for (const auto& part : split(v, ',')) {
    std::string num = part;
    bool trunc = false;
    if (!num.empty() && num.back() == 't') {
      trunc = true;
      num.pop_back();
    }
    out.push_back({static_cast<int>(parse_long(num, "window list")), trunc});
  }
  return out;
}

std::vector<int> parse_ints(const std::string& v) {
  std::vector<int> out;
  if (v == "none" || v == "-") return out;
  for (const auto& part : split(v, ',')) {
    out.push_back(static_cast<int>(parse_long(part, "integer list")));
  }
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("expected true|false, got " + v);
}

ModelSpec default_model_spec() {
  ModelSpec spec;
  spec.family = ModelFamily::Hand;
  spec.hand.depth = 1;
  spec.hand.hidden = 128;
  spec.hand.psi = Activation::Sigmoid;
  spec.hand.dropout = 0.4;
  spec.hand.l2 = 0.0;
  spec.hand.optimizer = OptimizerKind::Sgd;
  spec.hand.lr = 0.1;
  spec.hand.epochs = 50;
  spec.neural.depth = 1;
  spec.neural.hidden = 128;
  spec.neural.psi = Activation::Relu;
  spec.neural.dropout = 0.2;
  spec.neural.l2 = 0.0;
  spec.neural.optimizer = OptimizerKind::RmsProp;
  spec.neural.lr = 0.001;
  spec.neural.epochs = 50;
  spec.features = default_feature_config();
  spec.alpha = 0.7;
  return spec;
}

void apply_train_key(TrainConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "train_eps") cfg.train_eps = parse_double(value, key);
  else if (key == "lr") cfg.lr = parse_double(value, key);
  else if (key == "l2") cfg.l2 = parse_double(value, key);
  else if (key == "dropout") cfg.dropout = parse_double(value, key);
  else if (key == "epochs") cfg.epochs = static_cast<int>(parse_long(value, key));
  else if (key == "depth") cfg.depth = static_cast<int>(parse_long(value, key));
  else if (key == "hidden") cfg.hidden = static_cast<int>(parse_long(value, key));
  else if (key == "psi") cfg.psi = activation_from_string(value);
  else if (key == "optimizer") cfg.optimizer = optimizer_from_string(value);
  else if (key == "seed") cfg.seed = std::stoull(value);
  else throw ConfigError("unknown hyperparameter key \"" + key + "\"");
}

bool is_train_key(const std::string& key) {
  static const std::set<std::string> keys = {"train_eps", "lr",  "l2",        "dropout", "epochs",
                                             "depth",     "hidden", "psi", "optimizer", "seed"};
  return keys.count(key) > 0;
}

}  // namespace

void apply_spec_key(ModelSpec& spec, const std::string& key, const std::string& value) {
  if (key.rfind("hand_", 0) == 0) {
    apply_train_key(spec.hand, key.substr(5), value);
    return;
  }
  if (key.rfind("neural_", 0) == 0 && is_train_key(key.substr(7))) {
    apply_train_key(spec.neural, key.substr(7), value);
    return;
  }
  if (is_train_key(key)) {
    apply_train_key(spec.hand, key, value);
    apply_train_key(spec.neural, key, value);
    return;
  }
  if (key == "alpha") spec.alpha = parse_double(value, key);
  else if (key == "ec_window") {
    spec.ec_window = value == "inf" ? kUnboundedWindow
                                    : static_cast<int>(parse_long(value, key));
  } else if (key == "ec_max_len") spec.ec_max_len = static_cast<int>(parse_long(value, key));
  else if (key == "windows") spec.features.windows = parse_windows(value);
  else if (key == "families") {
    spec.features.conditional = spec.features.joint = spec.features.pmi =
        spec.features.asymmetry = false;
    if (value != "none" && value != "-") {
      for (const auto& fam : split(value, ',')) {
        if (fam == "conditional") spec.features.conditional = true;
        else if (fam == "joint") spec.features.joint = true;
        else if (fam == "pmi") spec.features.pmi = true;
        else if (fam == "asymmetry") spec.features.asymmetry = true;
        else throw ConfigError("unknown feature family \"" + fam + "\"");
      }
    }
  } else if (key == "b_values") spec.features.b_values = parse_ints(value);
  else if (key == "lambda") spec.features.lambda = parse_double(value, key);
  else if (key == "thresholds") spec.features.length_thresholds = parse_ints(value);
  else if (key == "features") {
    if (value == "default") spec.features = default_feature_config();
    else if (value == "small") spec.features = small_feature_config();
    else if (value == "bias") spec.features = bias_only_config();
    else throw ConfigError("unknown feature preset \"" + value + "\"");
  } else if (key == "emb_size") spec.net.emb_size = static_cast<int>(parse_long(value, key));
  else if (key == "rnn_size") spec.net.rnn_size = static_cast<int>(parse_long(value, key));
  else if (key == "betas") {
    spec.net.pooling.betas.clear();
    for (const auto& part : split(value, ',')) {
      spec.net.pooling.betas.push_back(parse_double(part, "betas"));
    }
  } else if (key == "neural_max_len") {
    spec.net.max_len = static_cast<int>(parse_long(value, key));
  } else {
    throw ConfigError("unknown experiment key \"" + key + "\"");
  }
}

ExperimentConfig parse_experiment(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty experiment config");
  {
    const auto f = split(strip(line), '\t');
    if (f.size() != 3 || f[0] != "typoscope" || f[1] != "experiment") {
      throw ParseError("not a typoscope experiment config");
    }
    if (split(f[2], '.').at(0) != "1") {
      throw ParseError("unsupported experiment config version " + f[2]);
    }
  }

  ExperimentConfig cfg;
  cfg.spec = default_model_spec();

  enum class Section { Header, Languages, Synthetic, Folds, Grid };
  Section section = Section::Header;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    if (s == "[languages]") { section = Section::Languages; continue; }
    if (s == "[synthetic]") { section = Section::Synthetic; continue; }
    if (s == "[folds]") { section = Section::Folds; continue; }
    if (s == "[grid]") { section = Section::Grid; continue; }

    const auto f = split(s, '\t');
    const std::string ctx = "experiment config line " + std::to_string(line_no);
    switch (section) {
      case Section::Header: {
        if (f.size() != 2) throw ParseError(ctx + ": expected key<TAB>value");
        const std::string& key = f[0];
        const std::string& value = f[1];
        if (key == "model") {
          cfg.spec.family = model_family_from_string(value);
          if (value == "bias") cfg.spec.features = bias_only_config();
        } else if (key == "scheme") {
          cfg.spec.typology.scheme = relation_scheme_from_string(value);
        } else if (key == "include_root") {
          cfg.spec.typology.include_root = parse_bool(value);
        } else if (key == "eps") {
          cfg.eval_eps = parse_double(value, key);
        } else if (key == "binary_top_k") {
          cfg.binary_top_k = static_cast<int>(parse_long(value, key));
        } else if (key == "cv_folds") {
          cfg.cv_folds = static_cast<int>(parse_long(value, key));
        } else if (key == "seed") {
          cfg.seed = std::stoull(value);
          cfg.spec.hand.seed = cfg.seed;
          cfg.spec.neural.seed = cfg.seed;
        } else {
          apply_spec_key(cfg.spec, key, value);
        }
        break;
      }
      case Section::Languages:
        if (f.size() != 2) throw ParseError(ctx + ": expected id<TAB>path");
        cfg.languages.emplace_back(f[0], f[1]);
        break;
      case Section::Synthetic:
        if (f.size() != 5) {
          throw ParseError(ctx + ": expected id<TAB>path<TAB>substrate<TAB>rv<TAB>rn");
        }
        cfg.synthetic.push_back({f[0], f[1], f[2], f[3], f[4]});
        break;
      case Section::Folds: {
        if (f.size() != 2) throw ParseError(ctx + ": expected index<TAB>id,id,...");
        const std::size_t idx = static_cast<std::size_t>(parse_long(f[0], "fold index"));
        if (cfg.folds.size() <= idx) cfg.folds.resize(idx + 1);
        cfg.folds[idx] = split(f[1], ',');
        break;
      }
      case Section::Grid:
        if (f.size() != 2) throw ParseError(ctx + ": expected key<TAB>v1,v2,...");
        cfg.grid.emplace_back(f[0], split(f[1], ','));
        break;
    }
  }
  if (cfg.languages.empty()) throw ConfigError("experiment config lists no languages");
  return cfg;
}

ExperimentConfig parse_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return parse_experiment(in);
}

TrainingPool load_pool(const ExperimentConfig& cfg) {
  TrainingPool pool;
  for (const auto& [id, path] : cfg.languages) {
    pool.languages.push_back(
        make_pool_language(id, parse_conllu_file(path, id), cfg.spec.typology));
  }
  for (const auto& entry : cfg.synthetic) {
    PoolLanguage lang = make_pool_language(entry.id, parse_conllu_file(entry.path, entry.id),
                                           cfg.spec.typology);
    lang.synthetic = true;
    lang.substrate = entry.substrate;
    lang.superstrates = {entry.rv, entry.rn};
    pool.languages.push_back(std::move(lang));
  }
  return pool;
}

std::vector<ModelSpec> expand_grid(const ExperimentConfig& cfg) {
  std::vector<ModelSpec> points = {cfg.spec};
  for (const auto& [key, values] : cfg.grid) {
    std::vector<ModelSpec> next;
    next.reserve(points.size() * values.size());
    for (const auto& point : points) {
      for (const auto& value : values) {
        ModelSpec p = point;
        apply_spec_key(p, key, value);
        next.push_back(std::move(p));
      }
    }
    points = std::move(next);
  }
  return points;
}

FoldPlan fold_plan_of(const ExperimentConfig& cfg) {
  if (!cfg.folds.empty()) {
    for (const auto& fold : cfg.folds) {
      if (fold.empty()) throw ConfigError("experiment config contains an empty fold");
    }
    return FoldPlan{cfg.folds};
  }
  std::vector<std::string> ids;
  for (const auto& [id, path] : cfg.languages) {
    (void)path;
    ids.push_back(id);
  }
  return make_fold_plan(ids, cfg.cv_folds);
}

}  // namespace typoscope
