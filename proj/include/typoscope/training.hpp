#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "typoscope/evaluation.hpp"
#include "typoscope/model.hpp"

namespace typoscope {

enum class OptimizerKind { Sgd, RmsProp };
OptimizerKind optimizer_from_string(const std::string& s);
std::string to_string(OptimizerKind k);

struct TrainConfig {
  double train_eps = 0.1;
  double l2 = 0.0;
  double dropout = 0.0;  // inverted dropout on hidden post-activations
  OptimizerKind optimizer = OptimizerKind::Sgd;
  double lr = 0.1;
  double rms_decay = 0.9;
  double rms_stab = 1e-8;
  int epochs = 50;
  std::uint64_t seed = 0;
  int depth = 1;
  int hidden = 128;
  Activation psi = Activation::Sigmoid;
};

struct NeuralSettings {
  int emb_size = 128;
  int rnn_size = 32;
  PoolingSpec pooling;
  int max_len = 40;
};

// One training example is an entire language: its unparsed corpus, the gold
// directionality vector derived from its treebank, and (for EC training and
// synthesis) the treebank itself.
struct PoolLanguage {
  std::string id;
  Treebank treebank;
  TaggedCorpus corpus;
  DirectionalityVector gold;
  bool synthetic = false;
  std::string substrate;                  // synthetic provenance
  std::vector<std::string> superstrates;  // empty entries allowed ("none")
};

PoolLanguage make_pool_language(const std::string& id, Treebank tb, const TypologyOptions& opts);

struct TrainingPool {
  std::vector<PoolLanguage> languages;

  const PoolLanguage* find(const std::string& id) const;
};

// ---- objective ----

struct HandExample {
  const Eigen::VectorXd* features = nullptr;
  const DirectionalityVector* gold = nullptr;
};

struct NeuralExample {
  const TaggedCorpus* corpus = nullptr;  // already length-filtered
  const DirectionalityVector* gold = nullptr;
};

// Mean per-language expected loss (predictions through the logistic) plus
// l2 * sum of squared weights (biases excluded; GRU weight matrices and the
// embedding count as weights on the neural path).
double objective_hand(const ScoringParams& p, const std::vector<HandExample>& examples,
                      const RelationCatalog& catalog, double eps, double l2);
double objective_neural(const ScoringParams& p, const GruParams& gru, const PoolingSpec& pooling,
                        const TagInventory& inv, const std::vector<NeuralExample>& examples,
                        const RelationCatalog& catalog, double eps, double l2);

// Full-objective analytic gradients (no dropout), for optimization sanity
// checks against finite differences.
double objective_and_grad_hand(const ScoringParams& p, const std::vector<HandExample>& examples,
                               const RelationCatalog& catalog, double eps, double l2,
                               ScoringGrads& grads);
double objective_and_grad_neural(const ScoringParams& p, const GruParams& gru,
                                 const PoolingSpec& pooling, const TagInventory& inv,
                                 const std::vector<NeuralExample>& examples,
                                 const RelationCatalog& catalog, double eps, double l2,
                                 ScoringGrads& sgrads, GruGrads& ggrads);

// d(language loss)/d(scores): the epsilon-insensitive subgradient is zero
// inside the ball and at the kink (the flat side).
Eigen::VectorXd loss_dscores(const Eigen::VectorXd& scores, const DirectionalityVector& gold,
                             const RelationCatalog& catalog, double eps, double* loss_out);

// ---- training ----

struct TrainCurve {
  std::vector<double> epoch_objective;  // index 0 is the initial parameters
  int best_epoch = 0;
};

// One gradient step per language visit, seeded shuffle per epoch, L2 applied
// at every step, best epoch (by full-pool objective) returned.
HandModel train_hand(const std::vector<const PoolLanguage*>& langs, const TrainConfig& cfg,
                     const FeatureConfig& features, const InitStats& stats,
                     TrainCurve* curve = nullptr);
NeuralModel train_neural(const std::vector<const PoolLanguage*>& langs, const TrainConfig& cfg,
                         const NeuralSettings& net, const InitStats& stats,
                         TrainCurve* curve = nullptr);

// ---- experiment-level model spec ----

enum class ModelFamily { Ec, Hand, Neural, Combined };
ModelFamily model_family_from_string(const std::string& s);
std::string to_string(ModelFamily f);

struct ModelSpec {
  ModelFamily family = ModelFamily::Hand;
  TrainConfig hand;    // used by Hand and Combined
  TrainConfig neural;  // used by Neural and Combined
  FeatureConfig features;
  NeuralSettings net;
  double alpha = 0.7;  // Combined interpolation weight
  int ec_window = 8;
  int ec_max_len = 40;
  TypologyOptions typology;  // relation scheme for EC training

  std::string describe() const;
};

Model train_model(const std::vector<const PoolLanguage*>& train, const ModelSpec& spec,
                  const InitStats& stats);

// ---- cross-validation ----

struct FoldPlan {
  std::vector<std::vector<std::string>> folds;  // partition of primary language ids
};

FoldPlan make_fold_plan(const std::vector<std::string>& ids, int k);

// Primary ids = union of folds; every other pool language must be synthetic.
void validate_fold_plan(const TrainingPool& pool, const FoldPlan& plan);

std::vector<std::string> fold_train_ids(const FoldPlan& plan, int fold);

// A synthetic language enters a fold's training set only when its substrate
// and every superstrate are among that fold's training languages.
bool synth_admitted(const PoolLanguage& lang, const std::vector<std::string>& train_ids);

struct CvRow {
  int grid_point = 0;
  int fold = 0;
  std::string language;
  double loss = 0.0;
};

struct CvReport {
  std::vector<CvRow> rows;
  std::vector<double> mean_loss;  // per grid point, over held-out languages
  int best_point = 0;
  std::vector<std::string> grid_desc;
};

// Held-out evaluation predicts each held-out language's gold vector from its
// own corpus; predictions are completed with the UNK entry (or 0.5 for EC).
CvReport cross_validate(const TrainingPool& pool, const FoldPlan& plan,
                        const std::vector<ModelSpec>& grid, double eval_eps, int jobs = 1);

void write_cv_report(const CvReport& r, std::ostream& out);

}  // namespace typoscope
