#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "typoscope/corpus.hpp"
#include "typoscope/tags.hpp"

namespace typoscope {

// Signed window specification.  offset > 0 looks right; offset < 0 is the
// mirror-image quantity, computed on the reversed corpus.  A truncated
// window is cut before the first boundary symbol or repeat of the anchor
// tag.
struct WindowSpec {
  int offset = 1;
  bool truncated = false;

  WindowSpec mirrored() const { return {-offset, truncated}; }
  friend auto operator<=>(const WindowSpec&, const WindowSpec&) = default;
};

// Prevalence measure g(t|j) over a window:
//   Fraction  — fraction of window slots holding t (undefined on an empty
//               truncated window; undefined values are omitted from means),
//   AtLeast1/2 — 1 if the window holds at least 1/2 tokens of t, else 0.
enum class Measure { Fraction, AtLeast1, AtLeast2 };

enum class FeatureFamily { Unigram, Conditional, Joint, Pmi, PmiInverse, Asymmetry };

struct FeatureConfig {
  std::vector<WindowSpec> windows;
  bool conditional = true;
  bool joint = true;
  bool pmi = true;
  bool asymmetry = true;
  std::vector<int> b_values;  // subset of {1,2}; empty disables the b measures
  double lambda = 1.0;        // backoff smoothing strength
  std::vector<int> length_thresholds = {40};  // one feature block per threshold
};

// The full window set: {+-1, +-3, +-8, +-100}, plain and truncated, with
// both b measures and every family enabled.
FeatureConfig default_feature_config();
// Tiny config useful for quick experiments: windows {+-1, +-3}, PMI +
// asymmetry + conditional families, fraction measure only.
FeatureConfig small_feature_config();
// No windows, no families: featurization yields an empty vector, so a model
// over it scores with its bias alone.
FeatureConfig bias_only_config();

struct VariantKey {
  Measure measure = Measure::Fraction;
  WindowSpec window;

  friend auto operator<=>(const VariantKey&, const VariantKey&) = default;
};

// Smoothed prevalence means for one (measure, window) variant.
//   uni[t]      = backoff-smoothed mean_j g(t|j)
//   cond[s][t]  = backoff-smoothed mean_{j: T_j = s} g(t|j)
// t ranges over the boundary symbol + inventory tags ("t range"); s over
// inventory tags only (a real token's tag is never the boundary).
struct PrevalenceTable {
  std::vector<double> uni;
  std::vector<std::vector<double>> cond;
};

// t range = ["#"] + inventory tags (already the lexicographic order of the
// union, as "#" sorts before every ASCII letter).
std::vector<std::string> feature_t_range(const TagInventory& inv);

// Tables for every variant the config needs, mirrors included when the
// asymmetry family is on.  The corpus must already be length-filtered.
std::map<VariantKey, PrevalenceTable> prevalence_tables(const TaggedCorpus& c,
                                                        const FeatureConfig& cfg,
                                                        const TagInventory& inv);

// min(x/y, 1) with the convention that any ratio over a zero denominator is
// 1 (the limit the smoothing pulls rare-event ratios toward).
inline double clipped_ratio(double x, double y) {
  return y <= 0.0 ? 1.0 : (x < y ? x / y : 1.0);
}

struct FeatureCatalog {
  struct Entry {
    int threshold = 0;
    FeatureFamily family = FeatureFamily::Unigram;
    WindowSpec window;
    Measure measure = Measure::Fraction;
    int s = -1;  // index into s range (inventory); -1 for unigram entries
    int t = 0;   // index into t range
  };
  std::vector<Entry> entries;
  std::vector<std::string> names;
  std::map<std::string, int> index;

  std::size_t size() const { return entries.size(); }
};

// Deterministic ordering: (threshold, family, window, measure, s, t), with
// thresholds in config order, families in enum order, windows sorted by
// (offset, truncated), measures fraction first then ascending b.
FeatureCatalog build_catalog(const FeatureConfig& cfg, const TagInventory& inv);

// The full hand-engineered feature vector, aligned with build_catalog.
Eigen::VectorXd featurize_hand(const TaggedCorpus& c, const FeatureConfig& cfg,
                               const TagInventory& inv);

TaggedCorpus reverse_corpus(const TaggedCorpus& c);

std::string to_string(Measure m);
std::string to_string(FeatureFamily f);
std::string to_string(const WindowSpec& w);

}  // namespace typoscope
