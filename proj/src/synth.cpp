#include "typoscope/synth.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <tuple>

#include "typoscope/error.hpp"
#include "typoscope/rng.hpp"

namespace typoscope {

bool is_projective(const Sentence& sent) {
  const int n = static_cast<int>(sent.tokens.size());
  for (const Token& tok : sent.tokens) {
    if (tok.head == 0) continue;
    const int lo = std::min(tok.index, tok.head);
    const int hi = std::max(tok.index, tok.head);
    for (int k = lo + 1; k < hi; ++k) {
      // Every word between head and child must descend from the head.
      int cur = k;
      bool under_head = false;
      int hops = 0;
      while (cur != 0) {
        if (cur == tok.head) {
          under_head = true;
          break;
        }
        cur = sent.tokens[static_cast<std::size_t>(cur) - 1].head;
        if (++hops > n) break;
      }
      if (!under_head) return false;
    }
  }
  return true;
}

namespace {

struct SentencePermuter {
  const Sentence& sent;
  const SynthSpec& spec;
  const DirectionalityVector& substrate_dir;
  Rng& rng;
  std::vector<std::vector<int>> children;  // index 0 = virtual root

  const DirectionalityVector* superstrate_for(const std::string& tag) const {
    if (spec.superstrate_verb && spec.verb_tags.count(tag)) return &*spec.superstrate_verb;
    if (spec.superstrate_noun && spec.noun_tags.count(tag)) return &*spec.superstrate_noun;
    return nullptr;
  }

  double p_right_of(const Token& head, const Token& child,
                    const DirectionalityVector& sup) const {
    const std::string rel = normalize_relation(child.deprel, head.tag, child.tag, spec.scheme);
    if (const auto it = sup.entries.find(rel); it != sup.entries.end()) return it->second.p_right;
    if (const auto it = substrate_dir.entries.find(rel); it != substrate_dir.entries.end()) {
      return it->second.p_right;
    }
    return 0.5;  // relation seen nowhere; should not occur for substrate edges
  }

  void linearize(int node, std::vector<int>& out) {
    const Token& head = sent.tokens[static_cast<std::size_t>(node) - 1];
    const auto& kids = children[static_cast<std::size_t>(node)];
    if (const DirectionalityVector* sup = superstrate_for(head.tag)) {
      std::vector<int> left, right;
      for (const int c : kids) {
        const Token& child = sent.tokens[static_cast<std::size_t>(c) - 1];
        (rng.bernoulli(p_right_of(head, child, *sup)) ? right : left).push_back(c);
      }
      for (const int c : left) linearize(c, out);
      out.push_back(node);
      for (const int c : right) linearize(c, out);
    } else {
      // Keep the substrate arrangement: children and head in original order.
      bool placed = false;
      for (const int c : kids) {
        if (c > node && !placed) {
          out.push_back(node);
          placed = true;
        }
        linearize(c, out);
      }
      if (!placed) out.push_back(node);
    }
  }
};

}  // namespace

SynthTreebank permute(const SynthSpec& spec) {
  if (!spec.substrate) throw ConfigError("permute: no substrate treebank");
  const Treebank& sub = *spec.substrate;

  SynthTreebank out;
  out.substrate_id = sub.language_id;
  out.rv_id = spec.superstrate_verb ? spec.superstrate_verb->language_id : "none";
  out.rn_id = spec.superstrate_noun ? spec.superstrate_noun->language_id : "none";
  out.seed = spec.seed;
  if (spec.superstrate_verb) {
    out.permuted_tags.insert(spec.verb_tags.begin(), spec.verb_tags.end());
  }
  if (spec.superstrate_noun) {
    out.permuted_tags.insert(spec.noun_tags.begin(), spec.noun_tags.end());
  }
  out.treebank.language_id = spec.output_id.empty()
                                 ? sub.language_id + "~" + out.rv_id + "~" + out.rn_id
                                 : spec.output_id;

  TypologyOptions opts;
  opts.scheme = spec.scheme;
  const DirectionalityVector substrate_dir = directionality(sub, opts);

  const std::uint64_t stream = derive_seed(spec.seed, "synth");
  for (std::size_t si = 0; si < sub.sentences.size(); ++si) {
    const Sentence& sent = sub.sentences[si];
    const int n = static_cast<int>(sent.tokens.size());
    std::vector<int> node_map(static_cast<std::size_t>(n) + 1, 0);

    if (!is_projective(sent)) {
      ++out.non_projective_copied;
      for (int i = 1; i <= n; ++i) node_map[static_cast<std::size_t>(i)] = i;
      out.treebank.sentences.push_back(sent);
      out.node_maps.push_back(std::move(node_map));
      continue;
    }

    Rng rng(derive_seed(stream, std::to_string(si)));
    SentencePermuter perm{sent, spec, substrate_dir, rng, {}};
    perm.children.assign(static_cast<std::size_t>(n) + 1, {});
    int root = 0;
    for (const Token& tok : sent.tokens) {
      perm.children[static_cast<std::size_t>(tok.head)].push_back(tok.index);
      if (tok.head == 0) root = tok.index;
    }

    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    perm.linearize(root, order);

    for (int pos = 0; pos < n; ++pos) {
      node_map[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = pos + 1;
    }
    Sentence permuted;
    permuted.sent_id = sent.sent_id;
    permuted.tokens.reserve(static_cast<std::size_t>(n));
    for (int pos = 0; pos < n; ++pos) {
      const Token& orig = sent.tokens[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)]) - 1];
      Token tok = orig;
      tok.index = pos + 1;
      tok.head = orig.head == 0 ? 0 : node_map[static_cast<std::size_t>(orig.head)];
      permuted.tokens.push_back(std::move(tok));
    }
    out.treebank.sentences.push_back(std::move(permuted));
    out.node_maps.push_back(std::move(node_map));
  }
  return out;
}

namespace {

std::multiset<std::tuple<std::string, std::string, std::string>> edge_multiset(
    const Sentence& sent) {
  std::multiset<std::tuple<std::string, std::string, std::string>> edges;
  for (const Token& tok : sent.tokens) {
    const std::string head_tag =
        tok.head == 0 ? "ROOT" : sent.tokens[static_cast<std::size_t>(tok.head) - 1].tag;
    edges.insert({head_tag, tok.tag, tok.deprel});
  }
  return edges;
}

}  // namespace

std::vector<SynthViolation> verify_synth(const SynthTreebank& s, const Treebank& substrate) {
  std::vector<SynthViolation> violations;
  if (s.treebank.sentences.size() != substrate.sentences.size()) {
    violations.push_back({0, "sentence count differs"});
    return violations;
  }
  const bool have_maps = s.node_maps.size() == substrate.sentences.size();

  for (std::size_t si = 0; si < substrate.sentences.size(); ++si) {
    const Sentence& orig = substrate.sentences[si];
    const Sentence& perm = s.treebank.sentences[si];
    const int sent_no = static_cast<int>(si) + 1;

    if (orig.tokens.size() != perm.tokens.size()) {
      violations.push_back({sent_no, "token count differs"});
      continue;
    }
    if (edge_multiset(orig) != edge_multiset(perm)) {
      violations.push_back({sent_no, "edge multiset differs"});
    }
    if (!is_projective(perm)) {
      violations.push_back({sent_no, "output sentence is not projective"});
    }
    if (!have_maps) continue;

    const auto& node_map = s.node_maps[si];
    for (const Token& head : orig.tokens) {
      if (s.permuted_tags.count(head.tag)) continue;
      // Substrate order of the head and its dependents must survive.
      std::vector<int> items;
      items.push_back(head.index);
      for (const Token& tok : orig.tokens) {
        if (tok.head == head.index) items.push_back(tok.index);
      }
      std::sort(items.begin(), items.end());
      for (std::size_t i = 1; i < items.size(); ++i) {
        if (node_map[static_cast<std::size_t>(items[i - 1])] >=
            node_map[static_cast<std::size_t>(items[i])]) {
          violations.push_back({sent_no, "dependent order changed under non-permuted head " +
                                             std::to_string(head.index)});
          break;
        }
      }
    }
  }
  return violations;
}

void write_synth_conllu(const SynthTreebank& s, std::ostream& out) {
  out << "# synth: substrate=" << s.substrate_id << ", rv=" << s.rv_id << ", rn=" << s.rn_id
      << ", seed=" << s.seed << "\n";
  write_conllu(s.treebank, out);
}

}  // namespace typoscope
