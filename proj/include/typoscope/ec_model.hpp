#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "typoscope/corpus.hpp"
#include "typoscope/typology.hpp"

namespace typoscope {

// Window value meaning "no distance limit".
inline constexpr int kUnboundedWindow = std::numeric_limits<int>::max();

// Expected-count heuristic.  Trained tag-pair link probabilities: for an
// ordered surface pair (t at i, t' at j, i < j, j - i < window),
//   right_prob[(t,t')][r] = weighted fraction linked by a rightward r edge
//                           (t is the parent of t'),
//   left_prob[(t,t')][r]  = same with t' the parent (leftward edge).
// Languages are weighted by 1 / (their total in-window pair count), i.e. a
// weighted micro-average that gives each training language equal say.
struct ECModel {
  int window = 8;
  std::map<std::pair<std::string, std::string>, std::map<std::string, double>> right_prob;
  std::map<std::pair<std::string, std::string>, std::map<std::string, double>> left_prob;
  std::vector<std::string> trained_languages;
  std::set<std::string> relations;
};

// Probabilities are unsmoothed; pairs never seen in training contribute
// nothing at prediction time.  Sentences longer than max_len are dropped
// before counting (pass kUnboundedWindow / a large max_len to disable).
ECModel ec_train(const std::vector<const Treebank*>& treebanks, RelationScheme scheme, int window,
                 int max_len = 40);

// Soft-vote directionality estimates over an unparsed corpus.  Boundary
// positions never enter pair enumeration.  Relations whose expected counts
// are both zero fall back to 0.5.
std::map<std::string, double> ec_predict(const ECModel& m, const TaggedCorpus& c);

void write_ec_model(const ECModel& m, std::ostream& out);
ECModel read_ec_model(std::istream& in);

}  // namespace typoscope
