#include "support.hpp"

#include <algorithm>
#include <cmath>

namespace typoscope::test {

namespace {

struct GenNode {
  std::string tag;
  std::string rel;
  std::vector<GenNode> left, right;
};

struct Generator {
  Rng& rng;

  void place(GenNode& parent, GenNode child, double p_right) {
    (rng.bernoulli(p_right) ? parent.right : parent.left).push_back(std::move(child));
  }

  std::string np_head_tag(const std::string& role) {
    const double u = rng.uniform01();
    // Argument roles share one composition, so POS pairs stay genuinely
    // ambiguous between nsubj/dobj/iobj; possessor-like modifiers lean
    // proper, as in real text.
    if (role == "nmod") return u < 0.50 ? "PROPN" : "NOUN";
    return u < 0.60 ? "NOUN" : (u < 0.82 ? "PRON" : "PROPN");
  }

  GenNode noun_phrase(const std::string& role, int depth) {
    GenNode np;
    np.tag = np_head_tag(role);
    np.rel = role;
    if (np.tag == "NOUN") {
      if (rng.bernoulli(0.55)) place(np, {"DET", "det", {}, {}}, 0.05);
      if (rng.bernoulli(0.45)) place(np, {"ADJ", "amod", {}, {}}, 0.25);
      if (rng.bernoulli(0.12)) place(np, {"ADJ", "amod", {}, {}}, 0.25);
      if (rng.bernoulli(0.15)) place(np, {"NUM", "nummod", {}, {}}, 0.15);
      if (rng.bernoulli(0.35)) place(np, {"ADP", "case", {}, {}}, 0.90);
      if (depth < 2 && rng.bernoulli(0.22)) {
        place(np, noun_phrase("nmod", depth + 1), 0.75);
      }
      if (depth < 2 && rng.bernoulli(0.10)) {
        // Reduced relative clause: a verb under a noun.
        place(np, embedded_clause("acl", depth + 1), 0.80);
      }
      if (depth < 2 && rng.bernoulli(0.10)) {
        GenNode second = noun_phrase("conj", depth + 1);
        if (rng.bernoulli(0.85)) place(second, {"CONJ", "cc", {}, {}}, 0.05);
        place(np, std::move(second), 0.90);
      }
    } else if (np.tag == "PROPN") {
      if (rng.bernoulli(0.20)) place(np, {"ADP", "case", {}, {}}, 0.90);
    } else if (rng.bernoulli(0.10)) {
      place(np, {"ADP", "case", {}, {}}, 0.90);
    }
    return np;
  }

  GenNode embedded_clause(const std::string& role, int depth) {
    GenNode verb{"VERB", role, {}, {}};
    if (role != "acl" && rng.bernoulli(0.55)) place(verb, noun_phrase("nsubj", depth + 1), 0.10);
    if (rng.bernoulli(0.45)) place(verb, noun_phrase("dobj", depth + 1), 0.85);
    if (rng.bernoulli(0.25)) place(verb, {"ADV", "advmod", {}, {}}, 0.30);
    return verb;
  }

  GenNode clause() {
    GenNode verb{"VERB", "root", {}, {}};
    if (rng.bernoulli(0.85)) place(verb, noun_phrase("nsubj", 0), 0.10);
    if (rng.bernoulli(0.65)) place(verb, noun_phrase("dobj", 0), 0.85);
    if (rng.bernoulli(0.25)) place(verb, noun_phrase("iobj", 0), 0.70);
    if (rng.bernoulli(0.45)) place(verb, {"ADV", "advmod", {}, {}}, 0.30);
    if (rng.bernoulli(0.12)) place(verb, embedded_clause("ccomp", 0), 0.85);
    if (rng.bernoulli(0.10)) place(verb, embedded_clause("conj", 0), 0.90);
    if (rng.bernoulli(0.85)) place(verb, {"PUNCT", "punct", {}, {}}, 0.95);
    return verb;
  }
};

void flatten(const GenNode& node, const GenNode* parent,
             std::vector<std::pair<const GenNode*, const GenNode*>>& order) {
  for (const GenNode& child : node.left) flatten(child, &node, order);
  order.emplace_back(&node, parent);
  for (const GenNode& child : node.right) flatten(child, &node, order);
}

}  // namespace

Treebank make_fixture_treebank(int n_sentences, std::uint64_t seed,
                               const std::string& language_id) {
  Rng rng(derive_seed(seed, "fixture"));
  Generator gen{rng};
  Treebank tb;
  tb.language_id = language_id;
  for (int s = 0; s < n_sentences; ++s) {
    const GenNode root = gen.clause();
    std::vector<std::pair<const GenNode*, const GenNode*>> order;
    flatten(root, nullptr, order);

    std::map<const GenNode*, int> position;
    for (std::size_t i = 0; i < order.size(); ++i) {
      position[order[i].first] = static_cast<int>(i) + 1;
    }
    Sentence sent;
    sent.sent_id = "s" + std::to_string(s + 1);
    for (std::size_t i = 0; i < order.size(); ++i) {
      Token tok;
      tok.index = static_cast<int>(i) + 1;
      tok.tag = order[i].first->tag;
      tok.head = order[i].second ? position.at(order[i].second) : 0;
      tok.deprel = order[i].first->rel;
      sent.tokens.push_back(std::move(tok));
    }
    tb.sentences.push_back(std::move(sent));
  }
  return tb;
}

TaggedCorpus random_tagged_corpus(int n_sentences, int max_len,
                                  const std::vector<std::string>& tags, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "random-corpus"));
  TaggedCorpus c;
  c.language_id = "random";
  for (int s = 0; s < n_sentences; ++s) {
    const int len = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(max_len)));
    std::vector<std::string> seq;
    seq.push_back(kBoundaryTag);
    for (int i = 0; i < len; ++i) seq.push_back(tags[rng.index(tags.size())]);
    seq.push_back(kBoundaryTag);
    c.sequences.push_back(std::move(seq));
  }
  return c;
}

PrevalenceTable oracle_prevalence(const TaggedCorpus& c, Measure measure, WindowSpec window,
                                  const TagInventory& inv, double lambda) {
  TaggedCorpus working = c;
  if (window.offset < 0) {
    working.sequences.clear();
    for (const auto& seq : c.sequences) {
      working.sequences.emplace_back(seq.rbegin(), seq.rend());
    }
  }
  const int w = std::abs(window.offset);
  const std::vector<std::string> t_range = feature_t_range(inv);
  const std::vector<std::string>& s_range = inv.tags();
  const int b = measure == Measure::AtLeast2 ? 2 : (measure == Measure::AtLeast1 ? 1 : 0);

  // g(t | j) for one anchor, or "undefined".
  const auto g_of = [&](const std::vector<std::string>& seq, int j,
                        const std::string& t) -> std::pair<bool, double> {
    std::vector<std::string> win;
    for (int p = j + 1; p <= j + w; ++p) {
      win.push_back(p < static_cast<int>(seq.size()) ? seq[static_cast<std::size_t>(p)]
                                                     : kBoundaryTag);
    }
    if (window.truncated) {
      std::vector<std::string> cut;
      for (const auto& tag : win) {
        if (tag == kBoundaryTag || tag == seq[static_cast<std::size_t>(j)]) break;
        cut.push_back(tag);
      }
      win = cut;
    }
    int count = 0;
    for (const auto& tag : win) {
      if (tag == t) ++count;
    }
    if (measure == Measure::Fraction) {
      if (win.empty()) return {false, 0.0};
      return {true, static_cast<double>(count) / static_cast<double>(win.size())};
    }
    return {true, count >= b ? 1.0 : 0.0};
  };

  // Global unsmoothed mean of g over all defined (position, t) pairs.
  double g_sum = 0.0;
  double n_def = 0.0;
  for (const auto& seq : working.sequences) {
    for (int j = 1; j + 1 < static_cast<int>(seq.size()); ++j) {
      if (seq[static_cast<std::size_t>(j)] == kBoundaryTag) continue;
      bool defined = true;
      double row = 0.0;
      for (const auto& t : t_range) {
        const auto [ok, g] = g_of(seq, j, t);
        defined = ok;
        if (!ok) break;
        row += g;
      }
      if (defined) {
        n_def += 1.0;
        g_sum += row;
      }
    }
  }
  const double mean_g =
      n_def > 0.0 ? g_sum / (n_def * static_cast<double>(t_range.size())) : 0.0;

  PrevalenceTable table;
  table.uni.resize(t_range.size());
  for (std::size_t ti = 0; ti < t_range.size(); ++ti) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& seq : working.sequences) {
      for (int j = 1; j + 1 < static_cast<int>(seq.size()); ++j) {
        if (seq[static_cast<std::size_t>(j)] == kBoundaryTag) continue;
        const auto [ok, g] = g_of(seq, j, t_range[ti]);
        if (!ok) continue;
        num += g;
        den += 1.0;
      }
    }
    table.uni[ti] = (den + lambda) > 0.0 ? (num + lambda * mean_g) / (den + lambda) : 0.0;
  }
  table.cond.assign(s_range.size(), std::vector<double>(t_range.size(), 0.0));
  for (std::size_t si = 0; si < s_range.size(); ++si) {
    for (std::size_t ti = 0; ti < t_range.size(); ++ti) {
      double num = 0.0;
      double den = 0.0;
      for (const auto& seq : working.sequences) {
        for (int j = 1; j + 1 < static_cast<int>(seq.size()); ++j) {
          if (seq[static_cast<std::size_t>(j)] != s_range[si]) continue;
          const auto [ok, g] = g_of(seq, j, t_range[ti]);
          if (!ok) continue;
          num += g;
          den += 1.0;
        }
      }
      table.cond[si][ti] =
          (den + lambda) > 0.0 ? (num + lambda * table.uni[ti]) / (den + lambda) : 0.0;
    }
  }
  return table;
}

ECModel oracle_ec_train(const std::vector<const Treebank*>& treebanks, RelationScheme scheme,
                        int window, int max_len) {
  ECModel m;
  m.window = window;
  using Key = std::pair<std::string, std::string>;
  std::map<Key, double> denom;
  std::map<Key, std::map<std::string, double>> rnum, lnum;

  for (const Treebank* tbp : treebanks) {
    m.trained_languages.push_back(tbp->language_id);
    std::map<Key, long> pairs;
    std::map<Key, std::map<std::string, long>> rcnt, lcnt;
    long total = 0;
    for (const Sentence& sent : tbp->sentences) {
      if (static_cast<int>(sent.tokens.size()) > max_len) continue;
      for (const Token& tok : sent.tokens) {
        if (tok.head == 0) continue;
        const Token& head = sent.tokens[static_cast<std::size_t>(tok.head) - 1];
        m.relations.insert(normalize_relation(tok.deprel, head.tag, tok.tag, scheme));
      }
      const int n = static_cast<int>(sent.tokens.size());
      for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
          if (window != kUnboundedWindow && j - i >= window) continue;
          const Token& a = sent.tokens[static_cast<std::size_t>(i) - 1];
          const Token& bt = sent.tokens[static_cast<std::size_t>(j) - 1];
          const Key key{a.tag, bt.tag};
          ++pairs[key];
          ++total;
          if (bt.head == i) ++rcnt[key][normalize_relation(bt.deprel, a.tag, bt.tag, scheme)];
          if (a.head == j) ++lcnt[key][normalize_relation(a.deprel, bt.tag, a.tag, scheme)];
        }
      }
    }
    if (total == 0) continue;
    const double s = 1.0 / static_cast<double>(total);
    for (const auto& [k, v] : pairs) denom[k] += s * static_cast<double>(v);
    for (const auto& [k, rels] : rcnt) {
      for (const auto& [rel, v] : rels) rnum[k][rel] += s * static_cast<double>(v);
    }
    for (const auto& [k, rels] : lcnt) {
      for (const auto& [rel, v] : rels) lnum[k][rel] += s * static_cast<double>(v);
    }
  }
  for (const auto& [k, rels] : rnum) {
    for (const auto& [rel, v] : rels) m.right_prob[k][rel] = v / denom.at(k);
  }
  for (const auto& [k, rels] : lnum) {
    for (const auto& [rel, v] : rels) m.left_prob[k][rel] = v / denom.at(k);
  }
  return m;
}

std::map<std::string, double> oracle_ec_predict(const ECModel& m, const TaggedCorpus& c) {
  std::map<std::string, double> er, el;
  for (const auto& seq : c.sequences) {
    const int len = static_cast<int>(seq.size());
    for (int i = 0; i < len; ++i) {
      if (seq[static_cast<std::size_t>(i)] == kBoundaryTag) continue;
      for (int j = i + 1; j < len; ++j) {
        if (seq[static_cast<std::size_t>(j)] == kBoundaryTag) continue;
        if (m.window != kUnboundedWindow && j - i >= m.window) continue;
        const std::pair<std::string, std::string> key{seq[static_cast<std::size_t>(i)],
                                                      seq[static_cast<std::size_t>(j)]};
        if (const auto it = m.right_prob.find(key); it != m.right_prob.end()) {
          for (const auto& [rel, p] : it->second) er[rel] += p;
        }
        if (const auto it = m.left_prob.find(key); it != m.left_prob.end()) {
          for (const auto& [rel, p] : it->second) el[rel] += p;
        }
      }
    }
  }
  std::map<std::string, double> out;
  for (const auto& rel : m.relations) {
    const double r = er.count(rel) ? er.at(rel) : 0.0;
    const double l = el.count(rel) ? el.at(rel) : 0.0;
    out[rel] = (r + l) > 0.0 ? r / (r + l) : 0.5;
  }
  return out;
}

std::map<std::pair<std::string, std::string>, double> bigram_conditional(const TaggedCorpus& c) {
  std::map<std::string, long> first;
  std::map<std::pair<std::string, std::string>, long> both;
  for (const auto& seq : c.sequences) {
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      if (seq[i] == kBoundaryTag) continue;
      ++first[seq[i]];
      ++both[{seq[i], seq[i + 1]}];
    }
  }
  std::map<std::pair<std::string, std::string>, double> out;
  for (const auto& [key, count] : both) {
    out[key] = static_cast<double>(count) / static_cast<double>(first.at(key.first));
  }
  return out;
}

double max_grad_rel_error(const std::vector<BlockRef>& params, const std::vector<BlockRef>& grads,
                          const std::function<double()>& objective, double step) {
  double worst = 0.0;
  for (std::size_t k = 0; k < params.size(); ++k) {
    for (Eigen::Index i = 0; i < params[k].size(); ++i) {
      double& x = params[k].data[i];
      const double saved = x;
      x = saved + step;
      const double up = objective();
      x = saved - step;
      const double down = objective();
      x = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double analytic = grads[k].data[i];
      // The floor keeps central-difference noise on near-zero coordinates
      // from registering as relative error.
      const double scale = std::max(1e-5, std::abs(numeric) + std::abs(analytic));
      worst = std::max(worst, std::abs(numeric - analytic) / scale);
    }
  }
  return worst;
}

}  // namespace typoscope::test
