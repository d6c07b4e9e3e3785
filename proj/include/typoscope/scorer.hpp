#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "typoscope/rng.hpp"
#include "typoscope/typology.hpp"

namespace typoscope {

enum class Activation { Sigmoid, Relu };
Activation activation_from_string(const std::string& s);
std::string to_string(Activation a);

// Reserved catalog entry covering relations unseen at training time.
inline const std::string kUnkRelation = "UNK";

struct RelationCatalog {
  std::vector<std::string> names;  // sorted training relations, then UNK
  std::map<std::string, int> index;

  static RelationCatalog from_golds(const std::vector<DirectionalityVector>& golds);
  std::size_t size() const { return names.size(); }
  bool operator==(const RelationCatalog& other) const { return names == other.names; }
};

// Depth-d feed-forward scorer: d hidden layers of width `hidden` under psi,
// then an affine output layer (one score per relation).  depth 0 is plain
// affine scoring (per-relation logistic regression once transformed).
struct ScoringParams {
  int depth = 0;
  int hidden = 0;
  Activation psi = Activation::Sigmoid;
  std::vector<Eigen::MatrixXd> w;  // depth matrices
  std::vector<Eigen::VectorXd> b;
  Eigen::MatrixXd v;  // relations x (depth ? hidden : feature_dim)
  Eigen::VectorXd b_v;

  int feature_dim() const {
    return static_cast<int>(depth > 0 ? w[0].cols() : v.cols());
  }
  int relation_count() const { return static_cast<int>(v.rows()); }
};

struct ScoringGrads {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;
  Eigen::MatrixXd v;
  Eigen::VectorXd b_v;
};

ScoringGrads zero_grads_like(const ScoringParams& p);

Eigen::VectorXd score(const Eigen::VectorXd& feat, const ScoringParams& p);

// Training-time forward pass; masks (one per hidden layer, empty for none)
// are multiplied into post-activation outputs (inverted dropout: surviving
// units are pre-scaled by 1/keep, so inference uses the plain forward pass).
struct ScoreTrace {
  std::vector<Eigen::VectorXd> pre;   // activations before masking, per layer
  std::vector<Eigen::VectorXd> post;  // after masking
  Eigen::VectorXd scores;
};
ScoreTrace score_forward(const Eigen::VectorXd& feat, const ScoringParams& p,
                         const std::vector<Eigen::VectorXd>& masks);

// Accumulates parameter gradients and returns d(loss)/d(features).
Eigen::VectorXd score_backward(const ScoreTrace& trace, const Eigen::VectorXd& feat,
                               const ScoringParams& p,
                               const std::vector<Eigen::VectorXd>& masks,
                               const Eigen::VectorXd& dscores, ScoringGrads& grads);

double logistic(double x);

std::map<std::string, double> to_directionality(const Eigen::VectorXd& scores,
                                                const RelationCatalog& catalog);

// V = 0, output bias at clip(logit(pbar_r), -10, 10) so a fresh model
// predicts the weighted-mean directionality of every relation; hidden
// weights Xavier-uniform, hidden biases 0.  Catalog entries missing from
// stats (UNK in particular) get the unweighted mean of all pbar values.
ScoringParams init_scoring(const InitStats& stats, const RelationCatalog& catalog, int depth,
                           int hidden, int feature_dim, Activation psi, Rng& rng);

double clipped_logit(double p);

// alpha * hand + (1 - alpha) * neural, applied before the logistic.
Eigen::VectorXd combine(const Eigen::VectorXd& hand_scores, const Eigen::VectorXd& neural_scores,
                        double alpha);

}  // namespace typoscope
