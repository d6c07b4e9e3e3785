#include "typoscope/tags.hpp"

#include <algorithm>
#include <set>

#include "typoscope/error.hpp"

namespace typoscope {

TagInventory::TagInventory(std::vector<std::string> tags) : tags_(std::move(tags)) {
  std::sort(tags_.begin(), tags_.end());
  tags_.erase(std::unique(tags_.begin(), tags_.end()), tags_.end());
  for (const auto& t : tags_) {
    if (t == kBoundaryTag) throw DataError("boundary symbol cannot be an inventory tag");
  }
  for (std::size_t i = 0; i < tags_.size(); ++i) index_[tags_[i]] = static_cast<int>(i);
}

TagInventory TagInventory::from_corpora(const std::vector<const TaggedCorpus*>& corpora) {
  std::set<std::string> tags;
  for (const TaggedCorpus* c : corpora) {
    for (const auto& seq : c->sequences) {
      for (const auto& t : seq) {
        if (t != kBoundaryTag) tags.insert(t);
      }
    }
  }
  return TagInventory(std::vector<std::string>(tags.begin(), tags.end()));
}

TagInventory TagInventory::universal() {
  return TagInventory({"ADJ", "ADP", "ADV", "AUX", "CONJ", "DET", "INTJ", "NOUN", "NUM", "PART",
                       "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"});
}

int TagInventory::index_of(const std::string& tag) const {
  const auto it = index_.find(tag);
  return it == index_.end() ? -1 : it->second;
}

}  // namespace typoscope
