#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "typoscope/corpus.hpp"

namespace typoscope {

enum class RelationScheme {
  StripSubtypes,  // "nmod:poss" -> "nmod"
  KeepSubtypes,
  PosPair,  // relation replaced by "(HEADTAG,CHILDTAG)"
};

RelationScheme relation_scheme_from_string(const std::string& s);
std::string to_string(RelationScheme s);

struct TypologyOptions {
  RelationScheme scheme = RelationScheme::StripSubtypes;
  // When set, edges to the virtual root are counted under their own relation
  // name (they are always rightward: every child position exceeds 0).
  bool include_root = false;
};

// Relation key for an edge under a scheme.  head_tag is unused except for
// the pos-pair scheme.
std::string normalize_relation(const std::string& deprel, const std::string& head_tag,
                               const std::string& child_tag, RelationScheme scheme);

struct DirEntry {
  double p_right = 0.0;  // fraction of edges with child to the right of head
  double rel_freq = 0.0; // fraction of all counted edges carrying this relation
  long count = 0;

  bool operator==(const DirEntry&) const = default;
};

struct DirectionalityVector {
  std::string language_id;
  std::map<std::string, DirEntry> entries;
};

// Empirical directionality of every relation in a treebank.  Edges to the
// virtual root are excluded unless opts.include_root.
DirectionalityVector directionality(const Treebank& tb, const TypologyOptions& opts = {});

// Cross-language aggregates used for model initialization:
//   weight(r, L) = rel_freq(r, L) / sum_L' rel_freq(r, L')
//   pbar(r)      = sum_L weight(r, L) * p_right(r, L)
struct InitStats {
  std::map<std::string, double> pbar;
  std::map<std::pair<std::string, std::string>, double> weights;  // (relation, language)
};

InitStats init_stats(const std::vector<DirectionalityVector>& train);

enum class Direction { Leftward, Rightward };

inline Direction binary_label(double p) {
  return p > 0.5 ? Direction::Rightward : Direction::Leftward;
}

// TSV columns: relation, p_right, rel_freq, count.  No header row;
// relations in lexicographic order.
void write_directionality_tsv(const DirectionalityVector& v, std::ostream& out);
DirectionalityVector read_directionality_tsv(std::istream& in, const std::string& language_id);

// Versioned structured-text document (carries language id and scheme).
void write_directionality_doc(const DirectionalityVector& v, RelationScheme scheme,
                              std::ostream& out);
DirectionalityVector read_directionality_doc(std::istream& in);

// Reads either format, sniffing the magic line; ".conllu" inputs are handled
// by the CLI, not here.
DirectionalityVector read_directionality_any(std::istream& in, const std::string& language_id);

}  // namespace typoscope
