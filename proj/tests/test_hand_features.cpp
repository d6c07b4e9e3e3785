#include <doctest.h>

#include <set>

#include "support.hpp"
#include "typoscope/error.hpp"
#include "typoscope/hand_features.hpp"

using namespace typoscope;

namespace {

TaggedCorpus nv_corpus() {
  TaggedCorpus c;
  c.language_id = "nv";
  c.sequences = {{"#", "N", "V", "#"}};
  return c;
}

int t_index(const TagInventory& inv, const std::string& tag) {
  const auto range = feature_t_range(inv);
  for (std::size_t i = 0; i < range.size(); ++i) {
    if (range[i] == tag) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

TEST_CASE("prevalence: worked [#,N,V,#] example at w=1") {
  const TagInventory inv({"N", "V"});
  FeatureConfig cfg;
  cfg.windows = {{1, false}};
  cfg.lambda = 0.0;
  cfg.b_values = {1};
  const auto tables = prevalence_tables(nv_corpus(), cfg, inv);

  const PrevalenceTable& frac = tables.at({Measure::Fraction, {1, false}});
  const int vi = t_index(inv, "V");
  const int ni = t_index(inv, "N");
  const int hi = t_index(inv, "#");
  // Window of N is [V]; window of V is [#].
  CHECK(frac.cond[static_cast<std::size_t>(inv.index_of("N"))][static_cast<std::size_t>(vi)] == 1.0);
  CHECK(frac.uni[static_cast<std::size_t>(ni)] == 0.0);
  CHECK(frac.uni[static_cast<std::size_t>(vi)] == 0.5);
  CHECK(frac.uni[static_cast<std::size_t>(hi)] == 0.5);

  const PrevalenceTable& b1 = tables.at({Measure::AtLeast1, {1, false}});
  CHECK(b1.cond[static_cast<std::size_t>(inv.index_of("N"))][static_cast<std::size_t>(vi)] == 1.0);
  CHECK(b1.cond[static_cast<std::size_t>(inv.index_of("V"))][static_cast<std::size_t>(hi)] == 1.0);
}

TEST_CASE("prevalence at w=1 with no smoothing is bigram conditional probability") {
  const std::vector<std::string> tags = {"A", "B", "C", "D"};
  for (int trial = 0; trial < 10; ++trial) {
    const TaggedCorpus c =
        test::random_tagged_corpus(12, 9, tags, 500 + static_cast<std::uint64_t>(trial));
    const TagInventory inv = TagInventory::from_corpora({&c});
    FeatureConfig cfg;
    cfg.windows = {{1, false}};
    cfg.lambda = 0.0;
    const auto tables = prevalence_tables(c, cfg, inv);
    const PrevalenceTable& tab = tables.at({Measure::Fraction, {1, false}});
    const auto bigrams = test::bigram_conditional(c);
    std::set<std::string> seen_first;
    for (const auto& [key, v] : bigrams) {
      (void)v;
      seen_first.insert(key.first);
    }
    const auto t_range = feature_t_range(inv);
    for (std::size_t s = 0; s < inv.size(); ++s) {
      if (!seen_first.count(inv.tags()[s])) continue;  // 0/0 under lambda=0
      for (std::size_t t = 0; t < t_range.size(); ++t) {
        const auto it = bigrams.find({inv.tags()[s], t_range[t]});
        const double expected = it == bigrams.end() ? 0.0 : it->second;
        CHECK(std::abs(tab.cond[s][t] - expected) <= 1e-12);
      }
    }
  }
}

TEST_CASE("clipped_ratio clips at one and treats zero denominators as one") {
  CHECK(clipped_ratio(0.25, 0.5) == 0.5);
  CHECK(clipped_ratio(0.5, 0.25) == 1.0);
  CHECK(clipped_ratio(0.0, 0.3) == 0.0);
  CHECK(clipped_ratio(0.0, 0.0) == 1.0);
  CHECK(clipped_ratio(0.2, 0.0) == 1.0);
}

TEST_CASE("catalog: conditional-only config emits unigram + conditional entries") {
  const TagInventory inv({"N", "V"});
  FeatureConfig cfg;
  cfg.windows = {{1, false}};
  cfg.joint = cfg.pmi = cfg.asymmetry = false;
  const FeatureCatalog cat = build_catalog(cfg, inv);
  // t range is {#, N, V}; s ranges over real tags only.
  CHECK(cat.size() == 3 + 2 * 3);
  const Eigen::VectorXd v = featurize_hand(nv_corpus(), cfg, inv);
  CHECK(v.size() == static_cast<Eigen::Index>(cat.size()));
  // Values agree with the prevalence tables entry by entry.
  cfg.lambda = 1.0;
  const auto tables = prevalence_tables(length_filter(nv_corpus(), 40), cfg, inv);
  const PrevalenceTable& tab = tables.at({Measure::Fraction, {1, false}});
  for (std::size_t i = 0; i < cat.size(); ++i) {
    const auto& e = cat.entries[i];
    const double expect = e.family == FeatureFamily::Unigram
                              ? tab.uni[static_cast<std::size_t>(e.t)]
                              : tab.cond[static_cast<std::size_t>(e.s)][static_cast<std::size_t>(e.t)];
    CHECK(v[static_cast<Eigen::Index>(i)] == doctest::Approx(expect).epsilon(1e-15));
  }
}

TEST_CASE("catalog names are unique and the index is their inverse") {
  const TagInventory inv({"A", "B", "C"});
  const FeatureCatalog cat = build_catalog(default_feature_config(), inv);
  CHECK(cat.names.size() == cat.entries.size());
  CHECK(cat.index.size() == cat.names.size());
  for (std::size_t i = 0; i < cat.names.size(); ++i) {
    CHECK(cat.index.at(cat.names[i]) == static_cast<int>(i));
  }
}

TEST_CASE("featurizing a corpus concatenated with itself changes nothing") {
  const TaggedCorpus c = test::random_tagged_corpus(15, 10, {"A", "B", "C"}, 600);
  TaggedCorpus doubled = c;
  doubled.sequences.insert(doubled.sequences.end(), c.sequences.begin(), c.sequences.end());
  const TagInventory inv = TagInventory::from_corpora({&c});
  // The raw means are duplication-invariant; the backoff terms deliberately
  // fade with sample size, so this identity is checked unsmoothed.
  FeatureConfig cfg = small_feature_config();
  cfg.lambda = 0.0;
  const Eigen::VectorXd a = featurize_hand(c, cfg, inv);
  const Eigen::VectorXd b = featurize_hand(doubled, cfg, inv);
  CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("length thresholds concatenate independently computed blocks") {
  const TaggedCorpus c = test::random_tagged_corpus(25, 30, {"A", "B"}, 601);
  const TagInventory inv = TagInventory::from_corpora({&c});
  FeatureConfig cfg = small_feature_config();
  cfg.length_thresholds = {10, 40};
  const Eigen::VectorXd both = featurize_hand(c, cfg, inv);
  FeatureConfig cfg10 = cfg;
  cfg10.length_thresholds = {10};
  FeatureConfig cfg40 = cfg;
  cfg40.length_thresholds = {40};
  const Eigen::VectorXd f10 = featurize_hand(c, cfg10, inv);
  const Eigen::VectorXd f40 = featurize_hand(c, cfg40, inv);
  REQUIRE(both.size() == f10.size() + f40.size());
  CHECK((both.head(f10.size()) - f10).cwiseAbs().maxCoeff() == 0.0);
  CHECK((both.tail(f40.size()) - f40).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mirror consistency: reversing the corpus swaps +w and -w features") {
  const TaggedCorpus c = test::random_tagged_corpus(12, 8, {"A", "B", "C"}, 602);
  const TagInventory inv = TagInventory::from_corpora({&c});
  const FeatureConfig cfg = default_feature_config();
  const FeatureCatalog cat = build_catalog(cfg, inv);
  const Eigen::VectorXd fwd = featurize_hand(c, cfg, inv);
  const Eigen::VectorXd rev = featurize_hand(reverse_corpus(c), cfg, inv);
  for (std::size_t i = 0; i < cat.size(); ++i) {
    FeatureCatalog::Entry mirrored = cat.entries[i];
    mirrored.window = mirrored.window.mirrored();
    // Locate the mirrored entry by name.
    const std::string name =
        "len" + std::to_string(mirrored.threshold) + "." + to_string(mirrored.family) + "." +
        to_string(mirrored.window) + "." + to_string(mirrored.measure) +
        (mirrored.family == FeatureFamily::Unigram
             ? ".t=" + feature_t_range(inv)[static_cast<std::size_t>(mirrored.t)]
             : ".s=" + inv.tags()[static_cast<std::size_t>(mirrored.s)] +
                   ".t=" + feature_t_range(inv)[static_cast<std::size_t>(mirrored.t)]);
    REQUIRE(cat.index.count(name));
    const int j = cat.index.at(name);
    CHECK(rev[static_cast<Eigen::Index>(i)] ==
          doctest::Approx(fwd[j]).epsilon(1e-15));
  }
}

TEST_CASE("large lambda pulls conditional/unconditional ratios toward one") {
  const TaggedCorpus c = test::random_tagged_corpus(10, 8, {"A", "B", "C", "R"}, 603);
  const TagInventory inv = TagInventory::from_corpora({&c});
  FeatureConfig cfg;
  cfg.windows = {{1, false}};
  cfg.lambda = 1e8;
  const auto tables = prevalence_tables(c, cfg, inv);
  const PrevalenceTable& tab = tables.at({Measure::Fraction, {1, false}});
  for (std::size_t s = 0; s < inv.size(); ++s) {
    for (std::size_t t = 0; t < tab.uni.size(); ++t) {
      if (tab.uni[t] < 1e-12) continue;
      CHECK(tab.cond[s][t] / tab.uni[t] == doctest::Approx(1.0).epsilon(1e-4));
    }
  }
}

TEST_CASE("every variant matches the literal oracle on small corpora") {
  const std::vector<std::string> tags = {"A", "B", "C"};
  const FeatureConfig cfg = [] {
    FeatureConfig f = default_feature_config();
    f.lambda = 0.7;
    return f;
  }();
  for (int trial = 0; trial < 4; ++trial) {
    const TaggedCorpus c =
        test::random_tagged_corpus(3 + trial * 2, 12, tags, 700 + static_cast<std::uint64_t>(trial));
    const TagInventory inv = TagInventory::from_corpora({&c});
    const auto tables = prevalence_tables(c, cfg, inv);
    for (const auto& [key, tab] : tables) {
      const PrevalenceTable slow =
          test::oracle_prevalence(c, key.measure, key.window, inv, cfg.lambda);
      for (std::size_t t = 0; t < tab.uni.size(); ++t) {
        CHECK(std::abs(tab.uni[t] - slow.uni[t]) <= 1e-12);
      }
      for (std::size_t s = 0; s < tab.cond.size(); ++s) {
        for (std::size_t t = 0; t < tab.cond[s].size(); ++t) {
          CHECK(std::abs(tab.cond[s][t] - slow.cond[s][t]) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("all emitted feature values lie in [0,1]") {
  const TaggedCorpus c = test::random_tagged_corpus(20, 15, {"A", "B", "C", "D"}, 604);
  const TagInventory inv = TagInventory::from_corpora({&c});
  const Eigen::VectorXd v = featurize_hand(c, default_feature_config(), inv);
  CHECK(v.minCoeff() >= 0.0);
  CHECK(v.maxCoeff() <= 1.0);
}

TEST_CASE("featurize_hand reports an empty corpus after filtering") {
  TaggedCorpus c;
  c.sequences.push_back(std::vector<std::string>{"#", "A", "A", "A", "#"});
  const TagInventory inv({"A"});
  FeatureConfig cfg = small_feature_config();
  cfg.length_thresholds = {2};
  CHECK_THROWS_WITH_AS(featurize_hand(c, cfg, inv), "no sentences", DataError);
}
