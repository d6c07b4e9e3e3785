#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "typoscope/corpus.hpp"
#include "typoscope/typology.hpp"

namespace typoscope {

bool is_projective(const Sentence& sent);

struct SynthSpec {
  const Treebank* substrate = nullptr;
  std::optional<DirectionalityVector> superstrate_verb;  // nullopt = no permutation
  std::optional<DirectionalityVector> superstrate_noun;
  std::uint64_t seed = 0;
  std::set<std::string> verb_tags = {"VERB"};
  std::set<std::string> noun_tags = {"NOUN"};
  RelationScheme scheme = RelationScheme::StripSubtypes;  // for superstrate lookups
  std::string output_id;  // language id of the generated treebank
};

struct SynthTreebank {
  Treebank treebank;
  std::string substrate_id;
  std::string rv_id;  // "none" when absent
  std::string rn_id;
  std::uint64_t seed = 0;
  std::set<std::string> permuted_tags;  // head tags whose dependents were redrawn
  int non_projective_copied = 0;
  // Per sentence: substrate position (1-based) -> output position.
  std::vector<std::vector<int>> node_maps;
};

// Re-linearizes each projective tree bottom-up.  A dependent of a verb-set
// (noun-set) head lands on the side drawn Bernoulli(p_right of its relation
// in the matching superstrate); dependents kept on one side preserve their
// substrate relative order, and subtrees stay contiguous, so the output is
// projective by construction.  Heads of other tags, or heads whose
// superstrate is absent, keep the substrate order entirely.  Relations the
// superstrate does not cover fall back to the substrate's own directionality.
// Non-projective sentences are copied unchanged and counted.
SynthTreebank permute(const SynthSpec& spec);

struct SynthViolation {
  int sentence = 0;  // 1-based
  std::string what;
};

// Checks edge-multiset equality, projectivity, and (via the node maps) that
// dependents of non-permuted heads kept their substrate order.
std::vector<SynthViolation> verify_synth(const SynthTreebank& s, const Treebank& substrate);

// "# synth: substrate=..., rv=..., rn=..., seed=..." followed by CoNLL-U.
void write_synth_conllu(const SynthTreebank& s, std::ostream& out);

}  // namespace typoscope
