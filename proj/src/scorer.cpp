#include "typoscope/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "typoscope/error.hpp"

namespace typoscope {

namespace {

Eigen::VectorXd apply_activation(const Eigen::VectorXd& z, Activation psi) {
  if (psi == Activation::Sigmoid) {
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  }
  return z.cwiseMax(0.0);
}

// derivative expressed through the activation value (sigmoid) or input sign
// (relu; subgradient 0 at the kink).
Eigen::VectorXd activation_grad(const Eigen::VectorXd& act, Activation psi) {
  if (psi == Activation::Sigmoid) {
    return act.unaryExpr([](double a) { return a * (1.0 - a); });
  }
  return act.unaryExpr([](double a) { return a > 0.0 ? 1.0 : 0.0; });
}

void xavier_fill(Eigen::MatrixXd& m, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-bound, bound);
  }
}

}  // namespace

Activation activation_from_string(const std::string& s) {
  if (s == "sigmoid") return Activation::Sigmoid;
  if (s == "relu") return Activation::Relu;
  throw ConfigError("unknown activation \"" + s + "\" (expected sigmoid|relu)");
}

std::string to_string(Activation a) {
  return a == Activation::Sigmoid ? "sigmoid" : "relu";
}

RelationCatalog RelationCatalog::from_golds(const std::vector<DirectionalityVector>& golds) {
  std::set<std::string> rels;
  for (const auto& g : golds) {
    for (const auto& [rel, e] : g.entries) {
      (void)e;
      if (rel == kUnkRelation) throw DataError("relation name collides with the reserved UNK");
      rels.insert(rel);
    }
  }
  RelationCatalog cat;
  cat.names.assign(rels.begin(), rels.end());
  cat.names.push_back(kUnkRelation);
  for (std::size_t i = 0; i < cat.names.size(); ++i) cat.index[cat.names[i]] = static_cast<int>(i);
  return cat;
}

ScoringGrads zero_grads_like(const ScoringParams& p) {
  ScoringGrads g;
  for (const auto& w : p.w) g.w.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  for (const auto& b : p.b) g.b.push_back(Eigen::VectorXd::Zero(b.size()));
  g.v = Eigen::MatrixXd::Zero(p.v.rows(), p.v.cols());
  g.b_v = Eigen::VectorXd::Zero(p.b_v.size());
  return g;
}

Eigen::VectorXd score(const Eigen::VectorXd& feat, const ScoringParams& p) {
  if (feat.size() != p.feature_dim()) {
    throw DataError("feature dimension " + std::to_string(feat.size()) +
                    " does not match the model's " + std::to_string(p.feature_dim()));
  }
  Eigen::VectorXd a = feat;
  for (int i = 0; i < p.depth; ++i) {
    a = apply_activation(p.w[static_cast<std::size_t>(i)] * a + p.b[static_cast<std::size_t>(i)],
                         p.psi);
  }
  return p.v * a + p.b_v;
}

ScoreTrace score_forward(const Eigen::VectorXd& feat, const ScoringParams& p,
                         const std::vector<Eigen::VectorXd>& masks) {
  if (feat.size() != p.feature_dim()) {
    throw DataError("feature dimension " + std::to_string(feat.size()) +
                    " does not match the model's " + std::to_string(p.feature_dim()));
  }
  ScoreTrace tr;
  Eigen::VectorXd a = feat;
  for (int i = 0; i < p.depth; ++i) {
    const Eigen::VectorXd act = apply_activation(
        p.w[static_cast<std::size_t>(i)] * a + p.b[static_cast<std::size_t>(i)], p.psi);
    tr.pre.push_back(act);
    a = masks.empty() ? act
                      : act.cwiseProduct(masks[static_cast<std::size_t>(i)]).eval();
    tr.post.push_back(a);
  }
  tr.scores = p.v * a + p.b_v;
  return tr;
}

Eigen::VectorXd score_backward(const ScoreTrace& trace, const Eigen::VectorXd& feat,
                               const ScoringParams& p,
                               const std::vector<Eigen::VectorXd>& masks,
                               const Eigen::VectorXd& dscores, ScoringGrads& grads) {
  const Eigen::VectorXd& top = p.depth > 0 ? trace.post.back() : feat;
  grads.v += dscores * top.transpose();
  grads.b_v += dscores;
  Eigen::VectorXd delta = p.v.transpose() * dscores;
  for (int i = p.depth - 1; i >= 0; --i) {
    const std::size_t li = static_cast<std::size_t>(i);
    if (!masks.empty()) delta = delta.cwiseProduct(masks[li]).eval();
    delta = delta.cwiseProduct(activation_grad(trace.pre[li], p.psi)).eval();
    const Eigen::VectorXd& below = i > 0 ? trace.post[li - 1] : feat;
    grads.w[li] += delta * below.transpose();
    grads.b[li] += delta;
    delta = (p.w[li].transpose() * delta).eval();
  }
  return delta;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::map<std::string, double> to_directionality(const Eigen::VectorXd& scores,
                                                const RelationCatalog& catalog) {
  if (static_cast<std::size_t>(scores.size()) != catalog.size()) {
    throw DataError("score vector size does not match the relation catalog");
  }
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    out[catalog.names[i]] = logistic(scores[static_cast<Eigen::Index>(i)]);
  }
  return out;
}

double clipped_logit(double p) {
  if (p <= 0.0) return -10.0;
  if (p >= 1.0) return 10.0;
  return std::clamp(std::log(p / (1.0 - p)), -10.0, 10.0);
}

ScoringParams init_scoring(const InitStats& stats, const RelationCatalog& catalog, int depth,
                           int hidden, int feature_dim, Activation psi, Rng& rng) {
  ScoringParams p;
  p.depth = depth;
  p.hidden = hidden;
  p.psi = psi;

  int prev = feature_dim;
  for (int i = 0; i < depth; ++i) {
    Eigen::MatrixXd w(hidden, prev);
    xavier_fill(w, rng);
    p.w.push_back(std::move(w));
    p.b.push_back(Eigen::VectorXd::Zero(hidden));
    prev = hidden;
  }
  const int n = static_cast<int>(catalog.size());
  p.v = Eigen::MatrixXd::Zero(n, prev);

  double pbar_mean = 0.5;
  if (!stats.pbar.empty()) {
    double acc = 0.0;
    for (const auto& [rel, pb] : stats.pbar) {
      (void)rel;
      acc += pb;
    }
    pbar_mean = acc / static_cast<double>(stats.pbar.size());
  }
  p.b_v.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto it = stats.pbar.find(catalog.names[static_cast<std::size_t>(i)]);
    p.b_v[i] = clipped_logit(it != stats.pbar.end() ? it->second : pbar_mean);
  }
  return p;
}

Eigen::VectorXd combine(const Eigen::VectorXd& hand_scores, const Eigen::VectorXd& neural_scores,
                        double alpha) {
  if (hand_scores.size() != neural_scores.size()) {
    throw DataError("combine: score vectors disagree on the relation catalog size");
  }
  return alpha * hand_scores + (1.0 - alpha) * neural_scores;
}

}  // namespace typoscope
