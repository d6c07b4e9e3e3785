#pragma once

// Shared test fixtures and independent oracles.  Everything here is written
// as literally as possible (fresh nested loops per quantity) so it stays an
// independent check on the library implementations.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "typoscope/corpus.hpp"
#include "typoscope/ec_model.hpp"
#include "typoscope/hand_features.hpp"
#include "typoscope/model.hpp"
#include "typoscope/rng.hpp"

namespace typoscope::test {

// A small projective grammar over UD-ish tags.  Children are linearized by
// per-relation Bernoulli draws, so the generated treebank has a known,
// roughly stationary directionality profile.
Treebank make_fixture_treebank(int n_sentences, std::uint64_t seed,
                               const std::string& language_id = "fixture");

// Random boundary-augmented tag sequences (no trees) for property tests.
TaggedCorpus random_tagged_corpus(int n_sentences, int max_len,
                                  const std::vector<std::string>& tags, std::uint64_t seed);

// Literal re-implementation of one prevalence variant: windows built as
// explicit tag lists, truncation by rescanning, means and backoff smoothing
// applied exactly as specified, position by position.
PrevalenceTable oracle_prevalence(const TaggedCorpus& c, Measure measure, WindowSpec window,
                                  const TagInventory& inv, double lambda);

// Literal expected-count oracles (nested loops over all position pairs).
ECModel oracle_ec_train(const std::vector<const Treebank*>& treebanks, RelationScheme scheme,
                        int window, int max_len);
std::map<std::string, double> oracle_ec_predict(const ECModel& m, const TaggedCorpus& c);

// P(next = t | current = s) over boundary-augmented sequences; pairs whose
// first element is a boundary are skipped.  Missing s -> entry absent.
std::map<std::pair<std::string, std::string>, double> bigram_conditional(const TaggedCorpus& c);

// Central finite differences over every coordinate of every block; returns
// the largest relative error against the analytic gradient.
double max_grad_rel_error(const std::vector<BlockRef>& params, const std::vector<BlockRef>& grads,
                          const std::function<double()>& objective, double step = 1e-5);

}  // namespace typoscope::test
