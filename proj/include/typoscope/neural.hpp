#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "typoscope/corpus.hpp"
#include "typoscope/rng.hpp"
#include "typoscope/tags.hpp"

namespace typoscope {

// GRU over learned embeddings of one-hot tag indices.  Gate matrices act on
// the concatenation [x; h].  Embedding rows: one per inventory tag, then the
// boundary symbol, then a reserved OOV row for tags unseen at training time.
struct GruParams {
  Eigen::MatrixXd emb;  // (inventory + 2) x emb_size
  Eigen::MatrixXd wz, wr, wc;  // rnn_size x (emb_size + rnn_size)
  Eigen::VectorXd bz, br, bc;  // rnn_size
  int emb_size = 0;
  int rnn_size = 0;
};

struct GruGrads {
  Eigen::MatrixXd emb, wz, wr, wc;
  Eigen::VectorXd bz, br, bc;
};

GruGrads zero_grads_like(const GruParams& p);

// Recurrent blocks start orthogonal (verified to 1e-6), input blocks and the
// embedding use Xavier-uniform, biases start at zero.
GruParams init_gru(const TagInventory& inv, int emb_size, int rnn_size, Rng& rng);

int embedding_row(const std::string& tag, const TagInventory& inv);

// Final hidden state after reading the whole boundary-augmented sequence.
// Components lie strictly inside (-1, 1).
Eigen::VectorXd gru_encode(const std::vector<std::string>& seq, const GruParams& p,
                           const TagInventory& inv);

struct PoolingSpec {
  std::vector<double> betas = {-4, -2, -1, 0, 1, 2, 4};
};

// Power mean with inverse temperature beta over the rows of fprime
// (sentences x units); beta = 0 is the geometric mean.
Eigen::VectorXd soft_pool(const Eigen::MatrixXd& fprime, double beta);

// Pooling reads at most this many sentences, in corpus order.
inline constexpr std::size_t kPoolingSentenceCap = 10000;

// Concatenated soft-pooled GRU features, |betas| * rnn_size values in (0,1).
// The corpus should already be length-filtered.
Eigen::VectorXd featurize_neural(const TaggedCorpus& c, const GruParams& p,
                                 const PoolingSpec& spec, const TagInventory& inv);

// Forward pass that keeps what the backward pass needs.  The backward pass
// re-runs each sentence's recurrence so memory stays bounded by one
// sentence regardless of corpus size.
class NeuralFeaturizer {
 public:
  NeuralFeaturizer(const TaggedCorpus& c, const GruParams& p, const PoolingSpec& spec,
                   const TagInventory& inv);

  const Eigen::VectorXd& features() const { return features_; }

  // d(features) -> d(GRU parameters), accumulated in sentence order.
  GruGrads backward(const Eigen::VectorXd& dfeat) const;

 private:
  const GruParams& params_;
  const PoolingSpec& spec_;
  const TagInventory& inv_;
  std::vector<std::vector<int>> rows_;  // embedding rows per pooled sentence
  Eigen::MatrixXd fprime_;              // sentences x rnn_size
  std::vector<Eigen::VectorXd> pool_mean_;  // per beta: mean of fprime^beta (or of log)
  Eigen::VectorXd features_;
};

}  // namespace typoscope
