#pragma once

#include <map>
#include <string>
#include <vector>

#include "typoscope/corpus.hpp"

namespace typoscope {

// Fixed inventory of real tags (sorted, boundary excluded) shared by every
// featurizer so catalogs, weight vectors and embeddings stay aligned across
// languages.  Tags outside the inventory are ignored by the hand features
// and mapped to a reserved OOV row by the neural encoder.
class TagInventory {
 public:
  TagInventory() = default;
  explicit TagInventory(std::vector<std::string> tags);

  static TagInventory from_corpora(const std::vector<const TaggedCorpus*>& corpora);
  // The canonical UD v1 17-tag list; a documented default, not an enforced set.
  static TagInventory universal();

  const std::vector<std::string>& tags() const { return tags_; }
  std::size_t size() const { return tags_.size(); }
  // -1 when absent.  The boundary symbol is not a real tag.
  int index_of(const std::string& tag) const;

  bool operator==(const TagInventory& other) const { return tags_ == other.tags_; }

 private:
  std::vector<std::string> tags_;
  std::map<std::string, int> index_;
};

}  // namespace typoscope
