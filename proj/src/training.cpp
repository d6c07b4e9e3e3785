#include "typoscope/training.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "typoscope/error.hpp"
#include "typoscope/text.hpp"

namespace typoscope {

OptimizerKind optimizer_from_string(const std::string& s) {
  if (s == "sgd") return OptimizerKind::Sgd;
  if (s == "rmsprop") return OptimizerKind::RmsProp;
  throw ConfigError("unknown optimizer \"" + s + "\" (expected sgd|rmsprop)");
}

std::string to_string(OptimizerKind k) { return k == OptimizerKind::Sgd ? "sgd" : "rmsprop"; }

ModelFamily model_family_from_string(const std::string& s) {
  if (s == "ec") return ModelFamily::Ec;
  if (s == "hand" || s == "bias") return ModelFamily::Hand;
  if (s == "neural") return ModelFamily::Neural;
  if (s == "combined") return ModelFamily::Combined;
  throw ConfigError("unknown model family \"" + s + "\"");
}

std::string to_string(ModelFamily f) {
  switch (f) {
    case ModelFamily::Ec: return "ec";
    case ModelFamily::Hand: return "hand";
    case ModelFamily::Neural: return "neural";
    case ModelFamily::Combined: return "combined";
  }
  return "?";
}

PoolLanguage make_pool_language(const std::string& id, Treebank tb, const TypologyOptions& opts) {
  PoolLanguage lang;
  lang.id = id;
  lang.treebank = std::move(tb);
  lang.treebank.language_id = id;
  lang.corpus = to_tagged_corpus(lang.treebank);
  lang.gold = directionality(lang.treebank, opts);
  lang.gold.language_id = id;
  return lang;
}

const PoolLanguage* TrainingPool::find(const std::string& id) const {
  for (const auto& lang : languages) {
    if (lang.id == id) return &lang;
  }
  return nullptr;
}

// ---- objective ----

Eigen::VectorXd loss_dscores(const Eigen::VectorXd& scores, const DirectionalityVector& gold,
                             const RelationCatalog& catalog, double eps, double* loss_out) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(scores.size());
  double loss = 0.0;
  for (const auto& [rel, e] : gold.entries) {
    const auto it = catalog.index.find(rel);
    if (it == catalog.index.end()) {
      throw DataError("training relation \"" + rel + "\" missing from the catalog");
    }
    const int i = it->second;
    const double p_hat = logistic(scores[i]);
    const double resid = p_hat - e.p_right;
    loss += e.rel_freq * std::max(std::abs(resid) - eps, 0.0);
    if (std::abs(resid) > eps) {
      d[i] += e.rel_freq * (resid > 0.0 ? 1.0 : -1.0) * p_hat * (1.0 - p_hat);
    }
  }
  if (loss_out) *loss_out = loss;
  return d;
}

namespace {

double l2_penalty(const std::vector<BlockRef>& bs) {
  double acc = 0.0;
  for (const auto& b : bs) {
    if (!b.is_weight) continue;
    for (Eigen::Index i = 0; i < b.size(); ++i) acc += b.data[i] * b.data[i];
  }
  return acc;
}

void add_l2_grad(const std::vector<BlockRef>& params, const std::vector<BlockRef>& grads,
                 double l2) {
  if (l2 == 0.0) return;
  for (std::size_t k = 0; k < params.size(); ++k) {
    if (!params[k].is_weight) continue;
    for (Eigen::Index i = 0; i < params[k].size(); ++i) {
      grads[k].data[i] += 2.0 * l2 * params[k].data[i];
    }
  }
}

double language_loss(const Eigen::VectorXd& scores, const DirectionalityVector& gold,
                     const RelationCatalog& catalog, double eps) {
  double loss = 0.0;
  for (const auto& [rel, e] : gold.entries) {
    const auto it = catalog.index.find(rel);
    if (it == catalog.index.end()) {
      throw DataError("training relation \"" + rel + "\" missing from the catalog");
    }
    loss += e.rel_freq * eps_loss(logistic(scores[it->second]), e.p_right, eps);
  }
  return loss;
}

void scale_blocks(const std::vector<BlockRef>& bs, double s) {
  for (const auto& b : bs) {
    for (Eigen::Index i = 0; i < b.size(); ++i) b.data[i] *= s;
  }
}

class Optimizer {
 public:
  explicit Optimizer(const TrainConfig& cfg)
      : kind_(cfg.optimizer), lr_(cfg.lr), decay_(cfg.rms_decay), stab_(cfg.rms_stab) {}

  void step(const std::vector<BlockRef>& params, const std::vector<BlockRef>& grads) {
    if (acc_.empty() && kind_ == OptimizerKind::RmsProp) {
      for (const auto& p : params) acc_.emplace_back(static_cast<std::size_t>(p.size()), 0.0);
    }
    for (std::size_t k = 0; k < params.size(); ++k) {
      double* p = params[k].data;
      const double* g = grads[k].data;
      const Eigen::Index n = params[k].size();
      if (kind_ == OptimizerKind::Sgd) {
        for (Eigen::Index i = 0; i < n; ++i) p[i] -= lr_ * g[i];
      } else {
        // theta -= lr * g / (sqrt(acc) + stab), acc = decay*acc + (1-decay)*g^2
        auto& a = acc_[k];
        for (Eigen::Index i = 0; i < n; ++i) {
          auto& ai = a[static_cast<std::size_t>(i)];
          ai = decay_ * ai + (1.0 - decay_) * g[i] * g[i];
          p[i] -= lr_ * g[i] / (std::sqrt(ai) + stab_);
        }
      }
    }
  }

 private:
  OptimizerKind kind_;
  double lr_, decay_, stab_;
  std::vector<std::vector<double>> acc_;
};

std::vector<Eigen::VectorXd> draw_masks(int depth, int hidden, double rate, Rng& rng) {
  std::vector<Eigen::VectorXd> masks;
  if (rate <= 0.0) return masks;
  const double keep = 1.0 - rate;
  for (int l = 0; l < depth; ++l) {
    Eigen::VectorXd m(hidden);
    for (int i = 0; i < hidden; ++i) m[i] = rng.uniform01() < keep ? 1.0 / keep : 0.0;
    masks.push_back(std::move(m));
  }
  return masks;
}

std::vector<BlockRef> neural_blocks(const GruParams& gru, const ScoringParams& p) {
  auto bs = blocks(gru);
  const auto sb = blocks(p);
  bs.insert(bs.end(), sb.begin(), sb.end());
  return bs;
}

std::vector<BlockRef> neural_blocks(const GruGrads& gru, const ScoringGrads& g) {
  auto bs = blocks(gru);
  const auto sb = blocks(g);
  bs.insert(bs.end(), sb.begin(), sb.end());
  return bs;
}

}  // namespace

double objective_hand(const ScoringParams& p, const std::vector<HandExample>& examples,
                      const RelationCatalog& catalog, double eps, double l2) {
  double total = 0.0;
  for (const auto& ex : examples) {
    total += language_loss(score(*ex.features, p), *ex.gold, catalog, eps);
  }
  return total / static_cast<double>(examples.size()) + l2 * l2_penalty(blocks(p));
}

double objective_neural(const ScoringParams& p, const GruParams& gru, const PoolingSpec& pooling,
                        const TagInventory& inv, const std::vector<NeuralExample>& examples,
                        const RelationCatalog& catalog, double eps, double l2) {
  double total = 0.0;
  for (const auto& ex : examples) {
    const Eigen::VectorXd feats = featurize_neural(*ex.corpus, gru, pooling, inv);
    total += language_loss(score(feats, p), *ex.gold, catalog, eps);
  }
  return total / static_cast<double>(examples.size()) +
         l2 * (l2_penalty(blocks(p)) + l2_penalty(blocks(gru)));
}

double objective_and_grad_hand(const ScoringParams& p, const std::vector<HandExample>& examples,
                               const RelationCatalog& catalog, double eps, double l2,
                               ScoringGrads& grads) {
  grads = zero_grads_like(p);
  double total = 0.0;
  const std::vector<Eigen::VectorXd> no_masks;
  for (const auto& ex : examples) {
    const ScoreTrace tr = score_forward(*ex.features, p, no_masks);
    double loss = 0.0;
    const Eigen::VectorXd d = loss_dscores(tr.scores, *ex.gold, catalog, eps, &loss);
    total += loss;
    score_backward(tr, *ex.features, p, no_masks, d, grads);
  }
  const double n = static_cast<double>(examples.size());
  scale_blocks(blocks(grads), 1.0 / n);
  add_l2_grad(blocks(p), blocks(grads), l2);
  return total / n + l2 * l2_penalty(blocks(p));
}

double objective_and_grad_neural(const ScoringParams& p, const GruParams& gru,
                                 const PoolingSpec& pooling, const TagInventory& inv,
                                 const std::vector<NeuralExample>& examples,
                                 const RelationCatalog& catalog, double eps, double l2,
                                 ScoringGrads& sgrads, GruGrads& ggrads) {
  sgrads = zero_grads_like(p);
  ggrads = zero_grads_like(gru);
  double total = 0.0;
  const std::vector<Eigen::VectorXd> no_masks;
  for (const auto& ex : examples) {
    const NeuralFeaturizer feats(*ex.corpus, gru, pooling, inv);
    const ScoreTrace tr = score_forward(feats.features(), p, no_masks);
    double loss = 0.0;
    const Eigen::VectorXd d = loss_dscores(tr.scores, *ex.gold, catalog, eps, &loss);
    total += loss;
    const Eigen::VectorXd dfeat = score_backward(tr, feats.features(), p, no_masks, d, sgrads);
    const GruGrads g = feats.backward(dfeat);
    const auto dst = blocks(ggrads);
    const auto src = blocks(g);
    for (std::size_t k = 0; k < dst.size(); ++k) {
      for (Eigen::Index i = 0; i < dst[k].size(); ++i) dst[k].data[i] += src[k].data[i];
    }
  }
  const double n = static_cast<double>(examples.size());
  scale_blocks(neural_blocks(ggrads, sgrads), 1.0 / n);
  add_l2_grad(neural_blocks(gru, p), neural_blocks(ggrads, sgrads), l2);
  return total / n + l2 * (l2_penalty(blocks(p)) + l2_penalty(blocks(gru)));
}

// ---- training loops ----

namespace {

std::vector<DirectionalityVector> golds_of(const std::vector<const PoolLanguage*>& langs) {
  std::vector<DirectionalityVector> golds;
  golds.reserve(langs.size());
  for (const auto* l : langs) golds.push_back(l->gold);
  return golds;
}

TagInventory inventory_of(const std::vector<const PoolLanguage*>& langs) {
  std::vector<const TaggedCorpus*> corpora;
  corpora.reserve(langs.size());
  for (const auto* l : langs) corpora.push_back(&l->corpus);
  return TagInventory::from_corpora(corpora);
}

void check_finite(double obj) {
  if (!std::isfinite(obj)) {
    throw TrainError("objective diverged (non-finite value " + fmt_double(obj) + ")");
  }
}

}  // namespace

HandModel train_hand(const std::vector<const PoolLanguage*>& langs, const TrainConfig& cfg,
                     const FeatureConfig& features, const InitStats& stats, TrainCurve* curve) {
  if (langs.empty()) throw ConfigError("train_hand: empty training set");

  HandModel m;
  m.features = features;
  m.dropout_rate = cfg.dropout;
  m.seed = cfg.seed;
  m.inventory = inventory_of(langs);
  m.catalog = RelationCatalog::from_golds(golds_of(langs));

  std::vector<Eigen::VectorXd> feats;
  feats.reserve(langs.size());
  for (const auto* l : langs) feats.push_back(featurize_hand(l->corpus, features, m.inventory));
  const int dim = static_cast<int>(feats[0].size());

  Rng rng_init(derive_seed(cfg.seed, "init"));
  Rng rng_shuffle(derive_seed(cfg.seed, "shuffle"));
  Rng rng_dropout(derive_seed(cfg.seed, "dropout"));
  m.params = init_scoring(stats, m.catalog, cfg.depth, cfg.hidden, dim, cfg.psi, rng_init);

  std::vector<HandExample> examples;
  for (std::size_t i = 0; i < langs.size(); ++i) examples.push_back({&feats[i], &langs[i]->gold});

  double best_obj = objective_hand(m.params, examples, m.catalog, cfg.train_eps, cfg.l2);
  check_finite(best_obj);
  ScoringParams best = m.params;
  int best_epoch = 0;
  if (curve) curve->epoch_objective.push_back(best_obj);

  Optimizer opt(cfg);
  std::vector<std::size_t> order(langs.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng_shuffle.shuffle(order);
    for (const std::size_t i : order) {
      const auto masks = draw_masks(cfg.depth, cfg.hidden, cfg.dropout, rng_dropout);
      ScoringGrads grads = zero_grads_like(m.params);
      const ScoreTrace tr = score_forward(feats[i], m.params, masks);
      const Eigen::VectorXd d =
          loss_dscores(tr.scores, langs[i]->gold, m.catalog, cfg.train_eps, nullptr);
      score_backward(tr, feats[i], m.params, masks, d, grads);
      add_l2_grad(blocks(m.params), blocks(grads), cfg.l2);
      opt.step(blocks(m.params), blocks(grads));
    }
    const double obj = objective_hand(m.params, examples, m.catalog, cfg.train_eps, cfg.l2);
    check_finite(obj);
    if (curve) curve->epoch_objective.push_back(obj);
    if (obj < best_obj) {
      best_obj = obj;
      best = m.params;
      best_epoch = epoch;
    }
  }
  m.params = best;
  if (curve) curve->best_epoch = best_epoch;
  return m;
}

NeuralModel train_neural(const std::vector<const PoolLanguage*>& langs, const TrainConfig& cfg,
                         const NeuralSettings& net, const InitStats& stats, TrainCurve* curve) {
  if (langs.empty()) throw ConfigError("train_neural: empty training set");

  NeuralModel m;
  m.pooling = net.pooling;
  m.max_len = net.max_len;
  m.dropout_rate = cfg.dropout;
  m.seed = cfg.seed;
  m.inventory = inventory_of(langs);
  m.catalog = RelationCatalog::from_golds(golds_of(langs));

  std::vector<TaggedCorpus> filtered;
  filtered.reserve(langs.size());
  for (const auto* l : langs) filtered.push_back(length_filter(l->corpus, net.max_len));

  Rng rng_init(derive_seed(cfg.seed, "init"));
  Rng rng_shuffle(derive_seed(cfg.seed, "shuffle"));
  Rng rng_dropout(derive_seed(cfg.seed, "dropout"));
  m.gru = init_gru(m.inventory, net.emb_size, net.rnn_size, rng_init);
  const int dim = static_cast<int>(net.pooling.betas.size()) * net.rnn_size;
  m.params = init_scoring(stats, m.catalog, cfg.depth, cfg.hidden, dim, cfg.psi, rng_init);

  std::vector<NeuralExample> examples;
  for (std::size_t i = 0; i < langs.size(); ++i) {
    examples.push_back({&filtered[i], &langs[i]->gold});
  }

  double best_obj = objective_neural(m.params, m.gru, m.pooling, m.inventory, examples, m.catalog,
                                     cfg.train_eps, cfg.l2);
  check_finite(best_obj);
  ScoringParams best_scoring = m.params;
  GruParams best_gru = m.gru;
  int best_epoch = 0;
  if (curve) curve->epoch_objective.push_back(best_obj);

  Optimizer opt(cfg);
  std::vector<std::size_t> order(langs.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng_shuffle.shuffle(order);
    for (const std::size_t i : order) {
      const auto masks = draw_masks(cfg.depth, cfg.hidden, cfg.dropout, rng_dropout);
      ScoringGrads sgrads = zero_grads_like(m.params);
      const NeuralFeaturizer feats(filtered[i], m.gru, m.pooling, m.inventory);
      const ScoreTrace tr = score_forward(feats.features(), m.params, masks);
      const Eigen::VectorXd d =
          loss_dscores(tr.scores, langs[i]->gold, m.catalog, cfg.train_eps, nullptr);
      const Eigen::VectorXd dfeat =
          score_backward(tr, feats.features(), m.params, masks, d, sgrads);
      GruGrads ggrads = feats.backward(dfeat);
      add_l2_grad(neural_blocks(m.gru, m.params), neural_blocks(ggrads, sgrads), cfg.l2);
      opt.step(neural_blocks(m.gru, m.params), neural_blocks(ggrads, sgrads));
    }
    const double obj = objective_neural(m.params, m.gru, m.pooling, m.inventory, examples,
                                        m.catalog, cfg.train_eps, cfg.l2);
    check_finite(obj);
    if (curve) curve->epoch_objective.push_back(obj);
    if (obj < best_obj) {
      best_obj = obj;
      best_scoring = m.params;
      best_gru = m.gru;
      best_epoch = epoch;
    }
  }
  m.params = best_scoring;
  m.gru = best_gru;
  if (curve) curve->best_epoch = best_epoch;
  return m;
}

std::string ModelSpec::describe() const {
  std::ostringstream os;
  os << to_string(family);
  if (family == ModelFamily::Ec) {
    os << " window=" << (ec_window == kUnboundedWindow ? std::string("inf")
                                                       : std::to_string(ec_window));
    return os.str();
  }
  const auto one = [&os](const char* tag, const TrainConfig& c) {
    os << " " << tag << "(depth=" << c.depth << " h=" << c.hidden << " psi=" << to_string(c.psi)
       << " opt=" << to_string(c.optimizer) << " lr=" << fmt_double(c.lr)
       << " l2=" << fmt_double(c.l2) << " dropout=" << fmt_double(c.dropout)
       << " eps=" << fmt_double(c.train_eps) << " epochs=" << c.epochs << " seed=" << c.seed
       << ")";
  };
  if (family == ModelFamily::Hand) one("hand", hand);
  else if (family == ModelFamily::Neural) one("neural", neural);
  else {
    one("hand", hand);
    one("neural", neural);
    os << " alpha=" << fmt_double(alpha);
  }
  return os.str();
}

Model train_model(const std::vector<const PoolLanguage*>& train, const ModelSpec& spec,
                  const InitStats& stats) {
  switch (spec.family) {
    case ModelFamily::Ec: {
      std::vector<const Treebank*> tbs;
      tbs.reserve(train.size());
      for (const auto* l : train) tbs.push_back(&l->treebank);
      return ec_train(tbs, spec.typology.scheme, spec.ec_window, spec.ec_max_len);
    }
    case ModelFamily::Hand:
      return train_hand(train, spec.hand, spec.features, stats);
    case ModelFamily::Neural:
      return train_neural(train, spec.neural, spec.net, stats);
    case ModelFamily::Combined: {
      CombinedModel comb;
      comb.alpha = spec.alpha;
      comb.hand = train_hand(train, spec.hand, spec.features, stats);
      comb.neural = train_neural(train, spec.neural, spec.net, stats);
      return comb;
    }
  }
  throw ConfigError("unreachable model family");
}

// ---- cross-validation ----

FoldPlan make_fold_plan(const std::vector<std::string>& ids, int k) {
  if (k < 1 || k > static_cast<int>(ids.size())) {
    throw ConfigError("fold count must be in [1, number of languages]");
  }
  FoldPlan plan;
  plan.folds.resize(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    plan.folds[i % static_cast<std::size_t>(k)].push_back(ids[i]);
  }
  return plan;
}

void validate_fold_plan(const TrainingPool& pool, const FoldPlan& plan) {
  std::set<std::string> seen;
  for (const auto& fold : plan.folds) {
    if (fold.empty()) throw ConfigError("empty fold");
    for (const auto& id : fold) {
      if (!pool.find(id)) throw ConfigError("fold references unknown language " + id);
      if (!seen.insert(id).second) throw ConfigError("language " + id + " appears in two folds");
    }
  }
  for (const auto& lang : pool.languages) {
    if (!seen.count(lang.id) && !lang.synthetic) {
      throw ConfigError("non-synthetic pool language " + lang.id + " is missing from the folds");
    }
  }
}

std::vector<std::string> fold_train_ids(const FoldPlan& plan, int fold) {
  std::vector<std::string> ids;
  for (std::size_t k = 0; k < plan.folds.size(); ++k) {
    if (static_cast<int>(k) == fold) continue;
    ids.insert(ids.end(), plan.folds[k].begin(), plan.folds[k].end());
  }
  return ids;
}

bool synth_admitted(const PoolLanguage& lang, const std::vector<std::string>& train_ids) {
  const std::set<std::string> ids(train_ids.begin(), train_ids.end());
  if (!ids.count(lang.substrate)) return false;
  for (const auto& sup : lang.superstrates) {
    if (!sup.empty() && sup != "none" && !ids.count(sup)) return false;
  }
  return true;
}

namespace {

std::vector<CvRow> run_fold(const TrainingPool& pool, const FoldPlan& plan,
                            const std::vector<ModelSpec>& grid, double eval_eps, int g, int k) {
  const std::vector<std::string> train_ids = fold_train_ids(plan, k);
  const std::set<std::string> primary = [&] {
    std::set<std::string> s;
    for (const auto& fold : plan.folds) s.insert(fold.begin(), fold.end());
    return s;
  }();

  std::vector<const PoolLanguage*> train;
  for (const auto& id : train_ids) train.push_back(pool.find(id));
  for (const auto& lang : pool.languages) {
    if (primary.count(lang.id)) continue;
    if (synth_admitted(lang, train_ids)) train.push_back(&lang);
  }

  std::vector<DirectionalityVector> golds;
  for (const auto* l : train) golds.push_back(l->gold);
  const InitStats stats = init_stats(golds);
  const Model model = train_model(train, grid[static_cast<std::size_t>(g)], stats);

  std::vector<CvRow> rows;
  for (const auto& id : plan.folds[static_cast<std::size_t>(k)]) {
    const PoolLanguage* held = pool.find(id);
    const auto pred = complete_predictions(predict(model, held->corpus), held->gold, 0.5);
    rows.push_back({g, k, id, aggregate_loss(pred, held->gold, eval_eps).aggregate_loss});
  }
  return rows;
}

}  // namespace

CvReport cross_validate(const TrainingPool& pool, const FoldPlan& plan,
                        const std::vector<ModelSpec>& grid, double eval_eps, int jobs) {
  if (grid.empty()) throw ConfigError("empty hyperparameter grid");
  validate_fold_plan(pool, plan);

  const int n_folds = static_cast<int>(plan.folds.size());
  const int n_grid = static_cast<int>(grid.size());
  std::vector<std::vector<CvRow>> slots(static_cast<std::size_t>(n_folds * n_grid));

  const auto slot_of = [n_folds](int g, int k) {
    return static_cast<std::size_t>(g * n_folds + k);
  };

  if (jobs <= 1) {
    for (int g = 0; g < n_grid; ++g) {
      for (int k = 0; k < n_folds; ++k) {
        slots[slot_of(g, k)] = run_fold(pool, plan, grid, eval_eps, g, k);
      }
    }
  } else {
    std::vector<std::future<void>> pending;
    for (int g = 0; g < n_grid; ++g) {
      for (int k = 0; k < n_folds; ++k) {
        if (static_cast<int>(pending.size()) >= jobs) {
          pending.front().get();
          pending.erase(pending.begin());
        }
        pending.push_back(std::async(std::launch::async, [&, g, k] {
          slots[slot_of(g, k)] = run_fold(pool, plan, grid, eval_eps, g, k);
        }));
      }
    }
    for (auto& f : pending) f.get();
  }

  CvReport report;
  report.mean_loss.assign(static_cast<std::size_t>(n_grid), 0.0);
  std::vector<int> counts(static_cast<std::size_t>(n_grid), 0);
  for (int g = 0; g < n_grid; ++g) {
    for (int k = 0; k < n_folds; ++k) {
      for (const auto& row : slots[slot_of(g, k)]) {
        report.rows.push_back(row);
        report.mean_loss[static_cast<std::size_t>(g)] += row.loss;
        ++counts[static_cast<std::size_t>(g)];
      }
    }
    report.mean_loss[static_cast<std::size_t>(g)] /= counts[static_cast<std::size_t>(g)];
  }
  report.best_point = static_cast<int>(std::min_element(report.mean_loss.begin(),
                                                        report.mean_loss.end()) -
                                       report.mean_loss.begin());
  for (const auto& spec : grid) report.grid_desc.push_back(spec.describe());
  return report;
}

void write_cv_report(const CvReport& r, std::ostream& out) {
  out << "typoscope\tcv-report\t1.0\n";
  out << "grid_points\t" << r.mean_loss.size() << "\n";
  for (std::size_t g = 0; g < r.mean_loss.size(); ++g) {
    out << "point\t" << g << "\t" << fmt_double(r.mean_loss[g]) << "\t" << r.grid_desc[g] << "\n";
  }
  out << "best_point\t" << r.best_point << "\n";
  out << "rows\t" << r.rows.size() << "\n";
  for (const auto& row : r.rows) {
    out << row.grid_point << "\t" << row.fold << "\t" << row.language << "\t"
        << fmt_double(row.loss) << "\n";
  }
}

}  // namespace typoscope
