#include "typoscope/hand_features.hpp"

#include <algorithm>
#include <set>

#include "typoscope/error.hpp"

namespace typoscope {

namespace {

std::vector<Measure> enabled_measures(const FeatureConfig& cfg) {
  std::vector<Measure> ms = {Measure::Fraction};
  std::vector<int> bs = cfg.b_values;
  std::sort(bs.begin(), bs.end());
  for (const int b : bs) {
    if (b == 1) ms.push_back(Measure::AtLeast1);
    else if (b == 2) ms.push_back(Measure::AtLeast2);
    else throw ConfigError("b value must be 1 or 2, got " + std::to_string(b));
  }
  return ms;
}

std::vector<WindowSpec> sorted_windows(const FeatureConfig& cfg) {
  std::vector<WindowSpec> ws = cfg.windows;
  for (const auto& w : ws) {
    if (w.offset == 0) throw ConfigError("window offset must be nonzero");
  }
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  return ws;
}

// Raw (unsmoothed) accumulators for one variant.
struct RawSums {
  std::vector<double> uni_sum;                // per t-range index
  std::vector<std::vector<double>> cond_sum;  // per s, per t
  std::vector<double> cond_n;                 // defined positions with T_j = s
  double n_def = 0.0;
  double g_total = 0.0;  // sum over (defined j, t in t range) of g(t|j)
};

// One pass over the (possibly reversed) sequences with a rightward window
// of size w.  Sequences are boundary-augmented; positions whose tag is the
// boundary are never anchors.  Window slots past the end of the sequence
// read as boundary symbols.
RawSums accumulate(const std::vector<std::vector<std::string>>& seqs, Measure measure, int w,
                   bool truncated, const TagInventory& inv) {
  const int n_t = static_cast<int>(inv.size()) + 1;  // t range: boundary + tags
  RawSums raw;
  raw.uni_sum.assign(static_cast<std::size_t>(n_t), 0.0);
  raw.cond_sum.assign(inv.size(), std::vector<double>(static_cast<std::size_t>(n_t), 0.0));
  raw.cond_n.assign(inv.size(), 0.0);

  std::vector<int> counts(static_cast<std::size_t>(n_t), 0);
  std::vector<int> touched;
  touched.reserve(static_cast<std::size_t>(w) + 1);

  for (const auto& seq : seqs) {
    const int len = static_cast<int>(seq.size());
    std::vector<int> tidx(seq.size());  // t-range index per element; -1 = unknown tag
    for (int p = 0; p < len; ++p) {
      const std::string& tag = seq[static_cast<std::size_t>(p)];
      tidx[static_cast<std::size_t>(p)] = tag == kBoundaryTag ? 0 : inv.index_of(tag) + 1;
      if (tidx[static_cast<std::size_t>(p)] == 0 && tag != kBoundaryTag) {
        tidx[static_cast<std::size_t>(p)] = -1;  // index_of returned -1
      }
    }
    for (int j = 1; j + 1 < len; ++j) {
      if (seq[static_cast<std::size_t>(j)] == kBoundaryTag) continue;
      const std::string& anchor = seq[static_cast<std::size_t>(j)];

      int wsize = 0;
      for (int p = j + 1; p <= j + w; ++p) {
        const bool past_end = p >= len;
        const std::string& tag = past_end ? kBoundaryTag : seq[static_cast<std::size_t>(p)];
        if (truncated && (tag == kBoundaryTag || tag == anchor)) break;
        ++wsize;
        const int ti = past_end ? 0 : tidx[static_cast<std::size_t>(p)];
        if (ti >= 0) {
          if (counts[static_cast<std::size_t>(ti)] == 0) touched.push_back(ti);
          ++counts[static_cast<std::size_t>(ti)];
        }
      }

      if (measure == Measure::Fraction && wsize == 0) {
        touched.clear();  // undefined g; omit this position from all means
        continue;
      }

      raw.n_def += 1.0;
      const int si = inv.index_of(anchor);
      if (si >= 0) raw.cond_n[static_cast<std::size_t>(si)] += 1.0;

      const int b = measure == Measure::AtLeast2 ? 2 : 1;
      for (const int ti : touched) {
        double g;
        if (measure == Measure::Fraction) {
          g = static_cast<double>(counts[static_cast<std::size_t>(ti)]) / wsize;
        } else {
          g = counts[static_cast<std::size_t>(ti)] >= b ? 1.0 : 0.0;
        }
        if (g != 0.0) {
          raw.uni_sum[static_cast<std::size_t>(ti)] += g;
          if (si >= 0) raw.cond_sum[static_cast<std::size_t>(si)][static_cast<std::size_t>(ti)] += g;
          raw.g_total += g;
        }
        counts[static_cast<std::size_t>(ti)] = 0;
      }
      touched.clear();
    }
  }
  return raw;
}

PrevalenceTable smooth(const RawSums& raw, double lambda, int n_t) {
  PrevalenceTable table;
  const double mean_g = raw.n_def > 0.0 ? raw.g_total / (raw.n_def * n_t) : 0.0;
  table.uni.assign(static_cast<std::size_t>(n_t), 0.0);
  const double uden = raw.n_def + lambda;
  for (int t = 0; t < n_t; ++t) {
    table.uni[static_cast<std::size_t>(t)] =
        uden > 0.0 ? (raw.uni_sum[static_cast<std::size_t>(t)] + lambda * mean_g) / uden : 0.0;
  }
  table.cond.assign(raw.cond_sum.size(), std::vector<double>(static_cast<std::size_t>(n_t), 0.0));
  for (std::size_t s = 0; s < raw.cond_sum.size(); ++s) {
    const double cden = raw.cond_n[s] + lambda;
    for (int t = 0; t < n_t; ++t) {
      table.cond[s][static_cast<std::size_t>(t)] =
          cden > 0.0
              ? (raw.cond_sum[s][static_cast<std::size_t>(t)] + lambda * table.uni[static_cast<std::size_t>(t)]) / cden
              : 0.0;
    }
  }
  return table;
}

}  // namespace

FeatureConfig default_feature_config() {
  FeatureConfig cfg;
  for (const int w : {1, 3, 8, 100}) {
    for (const int sign : {1, -1}) {
      cfg.windows.push_back({sign * w, false});
      cfg.windows.push_back({sign * w, true});
    }
  }
  cfg.b_values = {1, 2};
  return cfg;
}

FeatureConfig small_feature_config() {
  FeatureConfig cfg;
  for (const int w : {1, 3}) {
    for (const int sign : {1, -1}) cfg.windows.push_back({sign * w, false});
  }
  cfg.joint = false;
  return cfg;
}

FeatureConfig bias_only_config() {
  FeatureConfig cfg;
  cfg.windows.clear();
  cfg.conditional = cfg.joint = cfg.pmi = cfg.asymmetry = false;
  return cfg;
}

std::vector<std::string> feature_t_range(const TagInventory& inv) {
  std::vector<std::string> t_range;
  t_range.reserve(inv.size() + 1);
  t_range.push_back(kBoundaryTag);
  for (const auto& t : inv.tags()) t_range.push_back(t);
  return t_range;
}

std::map<VariantKey, PrevalenceTable> prevalence_tables(const TaggedCorpus& c,
                                                        const FeatureConfig& cfg,
                                                        const TagInventory& inv) {
  if (c.sequences.empty()) throw DataError("no sentences");
  const int n_t = static_cast<int>(inv.size()) + 1;

  std::set<VariantKey> needed;
  for (const Measure m : enabled_measures(cfg)) {
    for (const WindowSpec& w : sorted_windows(cfg)) {
      needed.insert({m, w});
      if (cfg.asymmetry) needed.insert({m, w.mirrored()});
    }
  }

  const TaggedCorpus* fwd = &c;
  TaggedCorpus rev;
  bool have_rev = false;

  std::map<VariantKey, PrevalenceTable> tables;
  for (const VariantKey& key : needed) {
    const bool mirror = key.window.offset < 0;
    if (mirror && !have_rev) {
      rev = reverse_corpus(c);
      have_rev = true;
    }
    const auto& seqs = mirror ? rev.sequences : fwd->sequences;
    const RawSums raw =
        accumulate(seqs, key.measure, std::abs(key.window.offset), key.window.truncated, inv);
    tables[key] = smooth(raw, cfg.lambda, n_t);
  }
  return tables;
}

FeatureCatalog build_catalog(const FeatureConfig& cfg, const TagInventory& inv) {
  const auto t_range = feature_t_range(inv);
  const auto& s_range = inv.tags();
  const auto windows = sorted_windows(cfg);
  const auto measures = enabled_measures(cfg);

  std::vector<FeatureFamily> families = {FeatureFamily::Unigram};
  if (cfg.conditional) families.push_back(FeatureFamily::Conditional);
  if (cfg.joint) families.push_back(FeatureFamily::Joint);
  if (cfg.pmi) {
    families.push_back(FeatureFamily::Pmi);
    families.push_back(FeatureFamily::PmiInverse);
  }
  if (cfg.asymmetry) families.push_back(FeatureFamily::Asymmetry);

  FeatureCatalog cat;
  for (const int thr : cfg.length_thresholds) {
    for (const FeatureFamily fam : families) {
      for (const WindowSpec& w : windows) {
        for (const Measure m : measures) {
          const std::string prefix =
              "len" + std::to_string(thr) + "." + to_string(fam) + "." + to_string(w) + "." +
              to_string(m);
          if (fam == FeatureFamily::Unigram) {
            for (std::size_t t = 0; t < t_range.size(); ++t) {
              cat.entries.push_back({thr, fam, w, m, -1, static_cast<int>(t)});
              cat.names.push_back(prefix + ".t=" + t_range[t]);
            }
          } else {
            for (std::size_t s = 0; s < s_range.size(); ++s) {
              for (std::size_t t = 0; t < t_range.size(); ++t) {
                cat.entries.push_back(
                    {thr, fam, w, m, static_cast<int>(s), static_cast<int>(t)});
                cat.names.push_back(prefix + ".s=" + s_range[s] + ".t=" + t_range[t]);
              }
            }
          }
        }
      }
    }
  }
  for (std::size_t i = 0; i < cat.names.size(); ++i) cat.index[cat.names[i]] = static_cast<int>(i);
  return cat;
}

Eigen::VectorXd featurize_hand(const TaggedCorpus& c, const FeatureConfig& cfg,
                               const TagInventory& inv) {
  const FeatureCatalog cat = build_catalog(cfg, inv);
  Eigen::VectorXd out(static_cast<Eigen::Index>(cat.size()));
  if (cat.size() == 0) return out;

  std::map<int, std::map<VariantKey, PrevalenceTable>> per_threshold;
  for (const int thr : cfg.length_thresholds) {
    per_threshold[thr] = prevalence_tables(length_filter(c, thr), cfg, inv);
  }

  for (std::size_t i = 0; i < cat.size(); ++i) {
    const auto& e = cat.entries[i];
    const auto& tables = per_threshold.at(e.threshold);
    const PrevalenceTable& tab = tables.at({e.measure, e.window});
    const std::size_t t = static_cast<std::size_t>(e.t);
    double v = 0.0;
    switch (e.family) {
      case FeatureFamily::Unigram:
        v = tab.uni[t];
        break;
      case FeatureFamily::Conditional:
        v = tab.cond[static_cast<std::size_t>(e.s)][t];
        break;
      case FeatureFamily::Joint:
        // pi_{t|s} * pi_s, with pi_s read from the same variant's unigram
        // table (s's t-range index is s+1: the boundary occupies slot 0).
        v = tab.cond[static_cast<std::size_t>(e.s)][t] * tab.uni[static_cast<std::size_t>(e.s) + 1];
        break;
      case FeatureFamily::Pmi:
        v = clipped_ratio(tab.cond[static_cast<std::size_t>(e.s)][t], tab.uni[t]);
        break;
      case FeatureFamily::PmiInverse:
        v = clipped_ratio(tab.uni[t], tab.cond[static_cast<std::size_t>(e.s)][t]);
        break;
      case FeatureFamily::Asymmetry: {
        const PrevalenceTable& mir = tables.at({e.measure, e.window.mirrored()});
        v = clipped_ratio(tab.cond[static_cast<std::size_t>(e.s)][t],
                          mir.cond[static_cast<std::size_t>(e.s)][t]);
        break;
      }
    }
    out[static_cast<Eigen::Index>(i)] = v;
  }
  return out;
}

TaggedCorpus reverse_corpus(const TaggedCorpus& c) {
  TaggedCorpus out;
  out.language_id = c.language_id;
  out.sequences.reserve(c.sequences.size());
  for (const auto& seq : c.sequences) {
    out.sequences.emplace_back(seq.rbegin(), seq.rend());
  }
  return out;
}

std::string to_string(Measure m) {
  switch (m) {
    case Measure::Fraction: return "frac";
    case Measure::AtLeast1: return "b1";
    case Measure::AtLeast2: return "b2";
  }
  return "?";
}

std::string to_string(FeatureFamily f) {
  switch (f) {
    case FeatureFamily::Unigram: return "uni";
    case FeatureFamily::Conditional: return "cond";
    case FeatureFamily::Joint: return "joint";
    case FeatureFamily::Pmi: return "pmi";
    case FeatureFamily::PmiInverse: return "ipmi";
    case FeatureFamily::Asymmetry: return "asym";
  }
  return "?";
}

std::string to_string(const WindowSpec& w) {
  return "w" + std::to_string(w.offset) + (w.truncated ? "t" : "");
}

}  // namespace typoscope
