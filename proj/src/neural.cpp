#include "typoscope/neural.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "typoscope/error.hpp"

namespace typoscope {

namespace {

// tanh can round to exactly +-1; keep f' strictly inside (0,1) so negative
// powers and logs stay finite.
constexpr double kFClamp = 1e-12;

double clamp_fprime(double v) {
  if (v < kFClamp) return kFClamp;
  if (v > 1.0 - kFClamp) return 1.0 - kFClamp;
  return v;
}

Eigen::VectorXd sigmoid_vec(const Eigen::VectorXd& x) {
  return x.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Eigen::MatrixXd random_orthogonal(int n, Rng& rng) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = rng.gaussian();
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  const double err = (q.transpose() * q - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (err > 1e-6) throw Error("orthogonal initialization failed the Q^T Q = I check");
  return q;
}

void xavier_fill(Eigen::Ref<Eigen::MatrixXd> m, double fan_in, double fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / (fan_in + fan_out));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-bound, bound);
  }
}

struct StepTrace {
  int row = 0;  // embedding row
  Eigen::VectorXd z, r, hc, h_prev;
};

Eigen::VectorXd run_gru(const std::vector<int>& rows, const GruParams& p,
                        std::vector<StepTrace>* trace) {
  const int rnn = p.rnn_size;
  const int emb = p.emb_size;
  Eigen::VectorXd h = Eigen::VectorXd::Zero(rnn);
  Eigen::VectorXd cat(emb + rnn);
  for (const int row : rows) {
    cat.head(emb) = p.emb.row(row).transpose();
    cat.tail(rnn) = h;
    const Eigen::VectorXd z = sigmoid_vec(p.wz * cat + p.bz);
    const Eigen::VectorXd r = sigmoid_vec(p.wr * cat + p.br);
    Eigen::VectorXd ccat(emb + rnn);
    ccat.head(emb) = cat.head(emb);
    ccat.tail(rnn) = r.cwiseProduct(h);
    const Eigen::VectorXd hc = (p.wc * ccat + p.bc).array().tanh().matrix();
    if (trace) trace->push_back({row, z, r, hc, h});
    h = (Eigen::VectorXd::Ones(rnn) - z).cwiseProduct(h) + z.cwiseProduct(hc);
  }
  return h;
}

}  // namespace

GruGrads zero_grads_like(const GruParams& p) {
  GruGrads g;
  g.emb = Eigen::MatrixXd::Zero(p.emb.rows(), p.emb.cols());
  g.wz = Eigen::MatrixXd::Zero(p.wz.rows(), p.wz.cols());
  g.wr = Eigen::MatrixXd::Zero(p.wr.rows(), p.wr.cols());
  g.wc = Eigen::MatrixXd::Zero(p.wc.rows(), p.wc.cols());
  g.bz = Eigen::VectorXd::Zero(p.bz.size());
  g.br = Eigen::VectorXd::Zero(p.br.size());
  g.bc = Eigen::VectorXd::Zero(p.bc.size());
  return g;
}

GruParams init_gru(const TagInventory& inv, int emb_size, int rnn_size, Rng& rng) {
  GruParams p;
  p.emb_size = emb_size;
  p.rnn_size = rnn_size;
  const int rows = static_cast<int>(inv.size()) + 2;
  p.emb.resize(rows, emb_size);
  xavier_fill(p.emb, rows, emb_size, rng);
  for (Eigen::MatrixXd* w : {&p.wz, &p.wr, &p.wc}) {
    w->resize(rnn_size, emb_size + rnn_size);
    xavier_fill(w->leftCols(emb_size), emb_size, rnn_size, rng);
    w->rightCols(rnn_size) = random_orthogonal(rnn_size, rng);
  }
  p.bz = Eigen::VectorXd::Zero(rnn_size);
  p.br = Eigen::VectorXd::Zero(rnn_size);
  p.bc = Eigen::VectorXd::Zero(rnn_size);
  return p;
}

int embedding_row(const std::string& tag, const TagInventory& inv) {
  if (tag == kBoundaryTag) return static_cast<int>(inv.size());
  const int idx = inv.index_of(tag);
  return idx >= 0 ? idx : static_cast<int>(inv.size()) + 1;  // OOV row
}

Eigen::VectorXd gru_encode(const std::vector<std::string>& seq, const GruParams& p,
                           const TagInventory& inv) {
  std::vector<int> rows;
  rows.reserve(seq.size());
  for (const auto& tag : seq) rows.push_back(embedding_row(tag, inv));
  return run_gru(rows, p, nullptr);
}

Eigen::VectorXd soft_pool(const Eigen::MatrixXd& fprime, double beta) {
  if (fprime.rows() == 0) throw DataError("soft_pool: no sentences");
  const Eigen::Index n = fprime.rows();
  const Eigen::Index k = fprime.cols();
  Eigen::VectorXd out(k);
  if (beta == 0.0) {
    for (Eigen::Index c = 0; c < k; ++c) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) acc += std::log(fprime(i, c));
      out[c] = std::exp(acc / static_cast<double>(n));
    }
  } else {
    for (Eigen::Index c = 0; c < k; ++c) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) acc += std::pow(fprime(i, c), beta);
      out[c] = std::pow(acc / static_cast<double>(n), 1.0 / beta);
    }
  }
  return out;
}

Eigen::VectorXd featurize_neural(const TaggedCorpus& c, const GruParams& p,
                                 const PoolingSpec& spec, const TagInventory& inv) {
  return NeuralFeaturizer(c, p, spec, inv).features();
}

NeuralFeaturizer::NeuralFeaturizer(const TaggedCorpus& c, const GruParams& p,
                                   const PoolingSpec& spec, const TagInventory& inv)
    : params_(p), spec_(spec), inv_(inv) {
  if (c.sequences.empty()) throw DataError("featurize_neural: empty corpus");
  if (spec.betas.empty()) throw ConfigError("pooling spec has no beta values");

  const std::size_t n = std::min(c.sequences.size(), kPoolingSentenceCap);
  rows_.reserve(n);
  fprime_.resize(static_cast<Eigen::Index>(n), p.rnn_size);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> rows;
    rows.reserve(c.sequences[i].size());
    for (const auto& tag : c.sequences[i]) rows.push_back(embedding_row(tag, inv));
    const Eigen::VectorXd f = run_gru(rows, p, nullptr);
    for (int k = 0; k < p.rnn_size; ++k) {
      fprime_(static_cast<Eigen::Index>(i), k) = clamp_fprime((f[k] + 1.0) / 2.0);
    }
    rows_.push_back(std::move(rows));
  }

  features_.resize(static_cast<Eigen::Index>(spec.betas.size()) * p.rnn_size);
  for (std::size_t b = 0; b < spec.betas.size(); ++b) {
    const double beta = spec.betas[b];
    Eigen::VectorXd mean(p.rnn_size);
    for (int k = 0; k < p.rnn_size; ++k) {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < fprime_.rows(); ++i) {
        acc += beta == 0.0 ? std::log(fprime_(i, k)) : std::pow(fprime_(i, k), beta);
      }
      mean[k] = acc / static_cast<double>(fprime_.rows());
    }
    pool_mean_.push_back(mean);
    for (int k = 0; k < p.rnn_size; ++k) {
      features_[static_cast<Eigen::Index>(b) * p.rnn_size + k] =
          beta == 0.0 ? std::exp(mean[k]) : std::pow(mean[k], 1.0 / beta);
    }
  }
}

GruGrads NeuralFeaturizer::backward(const Eigen::VectorXd& dfeat) const {
  const int rnn = params_.rnn_size;
  const int emb = params_.emb_size;
  const double n = static_cast<double>(fprime_.rows());

  // d(features) -> d(f') through each power mean.
  Eigen::MatrixXd dfp = Eigen::MatrixXd::Zero(fprime_.rows(), rnn);
  for (std::size_t b = 0; b < spec_.betas.size(); ++b) {
    const double beta = spec_.betas[b];
    for (int k = 0; k < rnn; ++k) {
      const double dpi = dfeat[static_cast<Eigen::Index>(b) * rnn + k];
      if (dpi == 0.0) continue;
      if (beta == 0.0) {
        const double pi = std::exp(pool_mean_[b][k]);
        for (Eigen::Index i = 0; i < fprime_.rows(); ++i) {
          dfp(i, k) += dpi * pi / (n * fprime_(i, k));
        }
      } else {
        const double mpow = std::pow(pool_mean_[b][k], 1.0 / beta - 1.0);
        for (Eigen::Index i = 0; i < fprime_.rows(); ++i) {
          dfp(i, k) += dpi * mpow * std::pow(fprime_(i, k), beta - 1.0) / n;
        }
      }
    }
  }

  GruGrads g = zero_grads_like(params_);
  std::vector<StepTrace> trace;
  Eigen::VectorXd cat(emb + rnn), ccat(emb + rnn);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    trace.clear();
    run_gru(rows_[i], params_, &trace);

    // d(f') -> d(final h); the f -> f' map halves the gradient.
    Eigen::VectorXd dh = dfp.row(static_cast<Eigen::Index>(i)).transpose() / 2.0;
    for (std::size_t s = trace.size(); s-- > 0;) {
      const StepTrace& st = trace[s];
      cat.head(emb) = params_.emb.row(st.row).transpose();
      cat.tail(rnn) = st.h_prev;
      ccat.head(emb) = cat.head(emb);
      ccat.tail(rnn) = st.r.cwiseProduct(st.h_prev);

      const Eigen::VectorXd dz = dh.cwiseProduct(st.hc - st.h_prev);
      const Eigen::VectorXd dhc = dh.cwiseProduct(st.z);
      Eigen::VectorXd dh_prev =
          dh.cwiseProduct(Eigen::VectorXd::Ones(rnn) - st.z);

      const Eigen::VectorXd dhc_pre =
          dhc.cwiseProduct((Eigen::VectorXd::Ones(rnn) - st.hc.cwiseProduct(st.hc)));
      g.wc += dhc_pre * ccat.transpose();
      g.bc += dhc_pre;
      const Eigen::VectorXd dccat = params_.wc.transpose() * dhc_pre;
      Eigen::VectorXd dx = dccat.head(emb);
      const Eigen::VectorXd drh = dccat.tail(rnn);
      const Eigen::VectorXd dr = drh.cwiseProduct(st.h_prev);
      dh_prev += drh.cwiseProduct(st.r);

      const Eigen::VectorXd dz_pre =
          dz.cwiseProduct(st.z.cwiseProduct(Eigen::VectorXd::Ones(rnn) - st.z));
      const Eigen::VectorXd dr_pre =
          dr.cwiseProduct(st.r.cwiseProduct(Eigen::VectorXd::Ones(rnn) - st.r));
      g.wz += dz_pre * cat.transpose();
      g.bz += dz_pre;
      g.wr += dr_pre * cat.transpose();
      g.br += dr_pre;

      const Eigen::VectorXd dcat =
          params_.wz.transpose() * dz_pre + params_.wr.transpose() * dr_pre;
      dx += dcat.head(emb);
      dh_prev += dcat.tail(rnn);

      g.emb.row(st.row) += dx.transpose();
      dh = dh_prev;
    }
  }
  return g;
}

}  // namespace typoscope
