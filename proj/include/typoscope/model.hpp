#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "typoscope/ec_model.hpp"
#include "typoscope/hand_features.hpp"
#include "typoscope/neural.hpp"
#include "typoscope/scorer.hpp"

namespace typoscope {

struct HandModel {
  RelationCatalog catalog;
  TagInventory inventory;
  FeatureConfig features;
  ScoringParams params;
  double dropout_rate = 0.0;
  std::uint64_t seed = 0;
};

struct NeuralModel {
  RelationCatalog catalog;
  TagInventory inventory;
  GruParams gru;
  PoolingSpec pooling;
  int max_len = 40;
  ScoringParams params;
  double dropout_rate = 0.0;
  std::uint64_t seed = 0;
};

// Weighted product of experts: scores combined linearly before the logistic.
struct CombinedModel {
  HandModel hand;
  NeuralModel neural;
  double alpha = 0.7;
};

using Model = std::variant<ECModel, HandModel, NeuralModel, CombinedModel>;

std::string model_kind(const Model& m);

Eigen::VectorXd model_scores(const HandModel& m, const TaggedCorpus& c);
Eigen::VectorXd model_scores(const NeuralModel& m, const TaggedCorpus& c);

// Directionality predictions over the model's relation inventory (catalog
// relations including UNK; EC models predict their trained relations).
std::map<std::string, double> predict(const Model& m, const TaggedCorpus& c);

// Flat view of a parameter block; serialization, optimizers and gradient
// checks all walk blocks in one fixed order.
struct BlockRef {
  std::string name;
  double* data = nullptr;
  Eigen::Index rows = 0, cols = 0;
  bool is_weight = false;  // false for bias vectors (excluded from L2)

  Eigen::Index size() const { return rows * cols; }
};

// The views alias the argument's storage; treat them as read-only when the
// argument is semantically const.
std::vector<BlockRef> blocks(const ScoringParams& p);
std::vector<BlockRef> blocks(const ScoringGrads& g);
std::vector<BlockRef> blocks(const GruParams& p);
std::vector<BlockRef> blocks(const GruGrads& g);

// Parameters are stored as decimal text that round-trips doubles exactly, so
// a save/load cycle is lossless.
void save_model(const Model& m, std::ostream& out);
void save_model_file(const Model& m, const std::string& path);
Model load_model(std::istream& in);
Model load_model_file(const std::string& path);

}  // namespace typoscope
