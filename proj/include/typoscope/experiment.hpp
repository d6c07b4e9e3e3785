#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "typoscope/training.hpp"

namespace typoscope {

// Structured-text experiment description driving `train` and `cv`:
//
//   typoscope<TAB>experiment<TAB>1.0
//   model<TAB>hand            (ec | hand | bias | neural | combined)
//   scheme<TAB>strip
//   seed<TAB>42
//   eps<TAB>0.1               (evaluation epsilon)
//   ... hyperparameter keys, see keys() in experiment.cpp ...
//   [languages]
//   <id><TAB><path.conllu>
//   [synthetic]               (optional augmentation languages)
//   <id><TAB><path.conllu><TAB><substrate_id><TAB><rv_id|none><TAB><rn_id|none>
//   [folds]                   (cv only; omit to get k round-robin folds)
//   <index><TAB><id,id,...>
//   [grid]                    (cv only; cartesian product of value lists)
//   <key><TAB><v1,v2,...>
struct ExperimentConfig {
  ModelSpec spec;
  double eval_eps = 0.1;
  int binary_top_k = 20;
  std::uint64_t seed = 0;
  int cv_folds = 5;
  std::vector<std::pair<std::string, std::string>> languages;  // id, path
  struct SynthEntry {
    std::string id, path, substrate, rv, rn;
  };
  std::vector<SynthEntry> synthetic;
  std::vector<std::vector<std::string>> folds;  // empty = round-robin cv_folds
  std::vector<std::pair<std::string, std::vector<std::string>>> grid;
};

ExperimentConfig parse_experiment(std::istream& in);
ExperimentConfig parse_experiment_file(const std::string& path);

// Loads every listed treebank and derives corpora and gold vectors.
TrainingPool load_pool(const ExperimentConfig& cfg);

// Cartesian expansion of the [grid] section over the base spec.
std::vector<ModelSpec> expand_grid(const ExperimentConfig& cfg);

FoldPlan fold_plan_of(const ExperimentConfig& cfg);

// Applies one key=value hyperparameter override to a spec (shared by the
// config parser and the grid expander).
void apply_spec_key(ModelSpec& spec, const std::string& key, const std::string& value);

}  // namespace typoscope
