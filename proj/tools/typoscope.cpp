// typoscope — predicts dependency-relation directionality from POS sequences.
//
// Subcommands: stats, ec-train, ec-predict, featurize, train, predict,
// evaluate, cv, synth.  Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "typoscope/error.hpp"
#include "typoscope/experiment.hpp"
#include "typoscope/model.hpp"
#include "typoscope/synth.hpp"
#include "typoscope/text.hpp"

namespace ts = typoscope;

namespace {

struct GlobalFlags {
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string scheme = "strip";
  bool include_root = false;
  double eps = 0.1;
  bool quiet = false;
};

std::uint64_t resolve_seed(const GlobalFlags& g) {
  if (g.seed_set) return g.seed;
  if (const char* env = std::getenv("TYPOSCOPE_SEED")) {
    return std::stoull(env);
  }
  return 0;
}

ts::TypologyOptions typology_of(const GlobalFlags& g) {
  ts::TypologyOptions opts;
  opts.scheme = ts::relation_scheme_from_string(g.scheme);
  opts.include_root = g.include_root;
  return opts;
}

void echo_config(const GlobalFlags& g, const std::string& cmd, std::uint64_t seed) {
  if (g.quiet) return;
  std::cerr << "typoscope " << cmd << ": scheme=" << g.scheme << " eps=" << ts::fmt_double(g.eps)
            << " seed=" << seed << (g.include_root ? " include_root=true" : "") << "\n";
}

std::string stem_of(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

// Pre-tagged input: CoNLL-U by default, plain whitespace-separated tag lines
// for ".tags" files.
ts::TaggedCorpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ts::DataError("cannot open " + path);
  if (path.size() > 5 && path.substr(path.size() - 5) == ".tags") {
    return ts::parse_tag_lines(in, stem_of(path));
  }
  return ts::to_tagged_corpus(ts::parse_conllu(in, stem_of(path)));
}

// Gold / superstrate directionalities: a directionality doc or TSV, or a
// treebank (computed under the given options).
ts::DirectionalityVector load_directionality(const std::string& path,
                                             const ts::TypologyOptions& opts) {
  if (path.size() > 7 && path.substr(path.size() - 7) == ".conllu") {
    return ts::directionality(ts::parse_conllu_file(path, stem_of(path)), opts);
  }
  std::ifstream in(path);
  if (!in) throw ts::DataError("cannot open " + path);
  return ts::read_directionality_any(in, stem_of(path));
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw ts::DataError("cannot write " + path);
  return file;
}

ts::ModelSpec spec_from_flags(const GlobalFlags& g, const std::string& model,
                              const std::vector<std::string>& hyper, std::uint64_t seed) {
  std::ostringstream cfg;
  cfg << "typoscope\texperiment\t1.0\nmodel\t" << model << "\nseed\t" << seed
      << "\n[languages]\nx\tx\n";
  std::istringstream in(cfg.str());
  ts::ExperimentConfig parsed = ts::parse_experiment(in);
  parsed.spec.typology = typology_of(g);
  for (const auto& kv : hyper) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ts::ConfigError("expected key=value, got " + kv);
    ts::apply_spec_key(parsed.spec, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return parsed.spec;
}

void write_predictions(const std::map<std::string, double>& pred, const std::string& kind,
                       const std::string& language, std::ostream& out) {
  out << "typoscope\tpredictions\t1.0\n";
  out << "model\t" << kind << "\n";
  out << "language\t" << language << "\n";
  out << "entries\t" << pred.size() << "\n";
  for (const auto& [rel, p] : pred) out << rel << "\t" << ts::fmt_double(p) << "\n";
}

std::map<std::string, double> read_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ts::DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ts::ParseError("empty predictions file");
  const auto f = ts::split(ts::strip(line), '\t');
  if (f.size() != 3 || f[0] != "typoscope" || f[1] != "predictions") {
    throw ts::ParseError("not a typoscope predictions document");
  }
  if (ts::split(f[2], '.').at(0) != "1") {
    throw ts::ParseError("unsupported predictions version " + f[2]);
  }
  long n = -1;
  while (n < 0 && std::getline(in, line)) {
    const auto kv = ts::split(ts::strip(line), '\t');
    if (kv.size() != 2) throw ts::ParseError("bad predictions header line: " + line);
    if (kv[0] == "entries") n = ts::parse_long(kv[1], "entries");
  }
  std::map<std::string, double> pred;
  for (long i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ts::ParseError("truncated predictions document");
    const auto kv = ts::split(ts::strip(line), '\t');
    if (kv.size() != 2) throw ts::ParseError("bad prediction row: " + line);
    pred[kv[0]] = ts::parse_double(kv[1], "prediction");
  }
  return pred;
}

int run(int argc, char** argv) {
  CLI::App app{"directionality prediction toolkit"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--seed", g.seed, "base seed (env TYPOSCOPE_SEED as fallback)")
      ->each([&g](const std::string&) { g.seed_set = true; });
  app.add_option("--scheme", g.scheme, "relation scheme: strip|keep|pos-pair")
      ->check(CLI::IsMember({"strip", "keep", "pos-pair"}));
  app.add_flag("--include-root", g.include_root, "count edges to the virtual root");
  app.add_option("--eps", g.eps, "evaluation epsilon (default 0.1)");
  app.add_flag("--quiet", g.quiet, "suppress the resolved-config echo");

  // stats
  auto* stats = app.add_subcommand("stats", "treebank -> directionality TSV");
  std::string stats_in, stats_out, stats_doc;
  stats->add_option("treebank", stats_in, "CoNLL-U file")->required();
  stats->add_option("-o,--output", stats_out, "output TSV (default stdout)");
  stats->add_option("--doc", stats_doc, "also write the versioned document here");

  // ec-train
  auto* ectrain = app.add_subcommand("ec-train", "treebanks -> expected-count model");
  std::vector<std::string> ec_inputs;
  std::string ec_out, ec_window = "8";
  int ec_max_len = 40;
  ectrain->add_option("treebanks", ec_inputs, "CoNLL-U files")->required();
  ectrain->add_option("-o,--output", ec_out, "model file")->required();
  ectrain->add_option("-w,--window", ec_window, "window size (2|4|8|16|inf, default 8)");
  ectrain->add_option("--max-len", ec_max_len, "sentence length cutoff (default 40)");

  // ec-predict
  auto* ecpred = app.add_subcommand("ec-predict", "model + corpus -> predictions");
  std::string ecp_model, ecp_corpus, ecp_out;
  ecpred->add_option("-m,--model", ecp_model, "ec model file")->required();
  ecpred->add_option("corpus", ecp_corpus, "tagged corpus (.conllu or .tags)")->required();
  ecpred->add_option("-o,--output", ecp_out, "predictions document (default stdout)");

  // featurize
  auto* feat = app.add_subcommand("featurize", "corpus -> feature TSV");
  std::string feat_corpus, feat_out;
  std::vector<std::string> feat_hyper;
  feat->add_option("corpus", feat_corpus, "tagged corpus (.conllu or .tags)")->required();
  feat->add_option("-o,--output", feat_out, "output TSV (default stdout)");
  feat->add_option("--set", feat_hyper, "feature settings, key=value (windows=, families=, ...)");

  // train
  auto* train = app.add_subcommand("train", "experiment config -> model file");
  std::string train_cfg, train_out;
  train->add_option("config", train_cfg, "experiment config file")->required();
  train->add_option("-o,--output", train_out, "model file")->required();

  // predict
  auto* pred = app.add_subcommand("predict", "model + corpus -> predictions");
  std::string pred_model, pred_corpus, pred_out;
  pred->add_option("-m,--model", pred_model, "model file")->required();
  pred->add_option("corpus", pred_corpus, "tagged corpus (.conllu or .tags)")->required();
  pred->add_option("-o,--output", pred_out, "predictions document (default stdout)");

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "predictions vs gold -> report");
  std::string eval_pred, eval_gold, eval_prefix;
  int eval_top_k = 20;
  eval->add_option("--pred", eval_pred, "predictions document")->required();
  eval->add_option("--gold", eval_gold, "gold directionality (doc/TSV/.conllu)")->required();
  eval->add_option("--out-prefix", eval_prefix,
                   "write <prefix>.summary.txt, <prefix>.relations.tsv, <prefix>.scatter.tsv");
  eval->add_option("--top-k", eval_top_k, "relations in the binary score (default 20)");

  // cv
  auto* cv = app.add_subcommand("cv", "experiment config -> cross-validation report");
  std::string cv_cfg, cv_out;
  int cv_jobs = 1;
  cv->add_option("config", cv_cfg, "experiment config file")->required();
  cv->add_option("-o,--output", cv_out, "report file (default stdout)");
  cv->add_option("--jobs", cv_jobs, "parallel fold/grid jobs (default 1)");

  // synth
  auto* synth = app.add_subcommand("synth", "substrate + superstrates -> synthetic treebank");
  std::string sy_sub, sy_rv, sy_rn, sy_out, sy_verb_tags = "VERB", sy_noun_tags = "NOUN";
  synth->add_option("--substrate", sy_sub, "substrate CoNLL-U file")->required();
  synth->add_option("--rv", sy_rv, "verb superstrate (doc/TSV/.conllu, 'self', or 'none')");
  synth->add_option("--rn", sy_rn, "noun superstrate (doc/TSV/.conllu, 'self', or 'none')");
  synth->add_option("-o,--output", sy_out, "output CoNLL-U (default stdout)");
  synth->add_option("--verb-tags", sy_verb_tags, "verb head tags (default VERB)");
  synth->add_option("--noun-tags", sy_noun_tags, "noun head tags (default NOUN)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  const std::uint64_t seed = resolve_seed(g);
  const ts::TypologyOptions opts = typology_of(g);

  if (stats->parsed()) {
    echo_config(g, "stats", seed);
    const ts::Treebank tb = ts::parse_conllu_file(stats_in, stem_of(stats_in));
    const ts::DirectionalityVector v = ts::directionality(tb, opts);
    std::ofstream file;
    ts::write_directionality_tsv(v, open_output(file, stats_out));
    if (!stats_doc.empty()) {
      std::ofstream doc(stats_doc);
      if (!doc) throw ts::DataError("cannot write " + stats_doc);
      ts::write_directionality_doc(v, opts.scheme, doc);
    }
  } else if (ectrain->parsed()) {
    echo_config(g, "ec-train", seed);
    std::vector<ts::Treebank> tbs;
    for (const auto& path : ec_inputs) tbs.push_back(ts::parse_conllu_file(path, stem_of(path)));
    std::vector<const ts::Treebank*> ptrs;
    for (const auto& tb : tbs) ptrs.push_back(&tb);
    const int w = ec_window == "inf" ? ts::kUnboundedWindow
                                     : static_cast<int>(ts::parse_long(ec_window, "window"));
    const ts::ECModel m = ts::ec_train(ptrs, opts.scheme, w, ec_max_len);
    std::ofstream out(ec_out);
    if (!out) throw ts::DataError("cannot write " + ec_out);
    ts::write_ec_model(m, out);
  } else if (ecpred->parsed()) {
    echo_config(g, "ec-predict", seed);
    std::ifstream min(ecp_model);
    if (!min) throw ts::DataError("cannot open " + ecp_model);
    const ts::ECModel m = ts::read_ec_model(min);
    const ts::TaggedCorpus corpus = load_corpus(ecp_corpus);
    std::ofstream file;
    write_predictions(ts::ec_predict(m, corpus), "ec", corpus.language_id,
                      open_output(file, ecp_out));
  } else if (feat->parsed()) {
    echo_config(g, "featurize", seed);
    const ts::ModelSpec spec = spec_from_flags(g, "hand", feat_hyper, seed);
    const ts::TaggedCorpus corpus = load_corpus(feat_corpus);
    const ts::TagInventory inv = ts::TagInventory::from_corpora({&corpus});
    const ts::FeatureCatalog cat = ts::build_catalog(spec.features, inv);
    const Eigen::VectorXd v = ts::featurize_hand(corpus, spec.features, inv);
    std::ofstream file;
    std::ostream& out = open_output(file, feat_out);
    for (std::size_t i = 0; i < cat.size(); ++i) {
      out << cat.names[i] << "\t" << ts::fmt_double(v[static_cast<Eigen::Index>(i)]) << "\n";
    }
  } else if (train->parsed()) {
    echo_config(g, "train", seed);
    ts::ExperimentConfig cfg = ts::parse_experiment_file(train_cfg);
    if (g.seed_set) {
      cfg.seed = seed;
      cfg.spec.hand.seed = seed;
      cfg.spec.neural.seed = seed;
    }
    const ts::TrainingPool pool = ts::load_pool(cfg);
    std::vector<const ts::PoolLanguage*> langs;
    std::vector<ts::DirectionalityVector> golds;
    for (const auto& lang : pool.languages) {
      langs.push_back(&lang);
      golds.push_back(lang.gold);
    }
    const ts::Model model = ts::train_model(langs, cfg.spec, ts::init_stats(golds));
    ts::save_model_file(model, train_out);
  } else if (pred->parsed()) {
    echo_config(g, "predict", seed);
    const ts::Model model = ts::load_model_file(pred_model);
    const ts::TaggedCorpus corpus = load_corpus(pred_corpus);
    std::ofstream file;
    write_predictions(ts::predict(model, corpus), ts::model_kind(model), corpus.language_id,
                      open_output(file, pred_out));
  } else if (eval->parsed()) {
    echo_config(g, "evaluate", seed);
    const ts::DirectionalityVector gold = load_directionality(eval_gold, opts);
    const auto raw = read_predictions(eval_pred);
    const auto pred_map = ts::complete_predictions(raw, gold, 0.5);
    const ts::EvalReport report = ts::evaluate(pred_map, gold, g.eps, eval_top_k);
    if (eval_prefix.empty()) {
      ts::write_report_summary(report, g.eps, std::cout);
    } else {
      std::ofstream summary(eval_prefix + ".summary.txt");
      std::ofstream relations(eval_prefix + ".relations.tsv");
      std::ofstream scatter(eval_prefix + ".scatter.tsv");
      if (!summary || !relations || !scatter) {
        throw ts::DataError("cannot write report files at prefix " + eval_prefix);
      }
      ts::write_report_summary(report, g.eps, summary);
      ts::write_report_relations_tsv(report, relations);
      ts::write_report_scatter_tsv(report, scatter);
    }
  } else if (cv->parsed()) {
    echo_config(g, "cv", seed);
    ts::ExperimentConfig cfg = ts::parse_experiment_file(cv_cfg);
    if (g.seed_set) {
      cfg.seed = seed;
      cfg.spec.hand.seed = seed;
      cfg.spec.neural.seed = seed;
    }
    const ts::TrainingPool pool = ts::load_pool(cfg);
    const ts::CvReport report = ts::cross_validate(pool, ts::fold_plan_of(cfg),
                                                   ts::expand_grid(cfg), cfg.eval_eps, cv_jobs);
    std::ofstream file;
    ts::write_cv_report(report, open_output(file, cv_out));
  } else if (synth->parsed()) {
    echo_config(g, "synth", seed);
    const ts::Treebank sub = ts::parse_conllu_file(sy_sub, stem_of(sy_sub));
    ts::SynthSpec spec;
    spec.substrate = &sub;
    spec.seed = seed;
    spec.scheme = opts.scheme;
    const auto superstrate = [&](const std::string& arg)
        -> std::optional<ts::DirectionalityVector> {
      if (arg.empty() || arg == "none") return std::nullopt;
      if (arg == "self") {
        ts::DirectionalityVector v = ts::directionality(sub, opts);
        v.language_id = "self";
        return v;
      }
      return load_directionality(arg, opts);
    };
    spec.superstrate_verb = superstrate(sy_rv);
    spec.superstrate_noun = superstrate(sy_rn);
    spec.verb_tags.clear();
    for (const auto& t : ts::split(sy_verb_tags, ',')) spec.verb_tags.insert(t);
    spec.noun_tags.clear();
    for (const auto& t : ts::split(sy_noun_tags, ',')) spec.noun_tags.insert(t);
    const ts::SynthTreebank result = ts::permute(spec);
    if (!g.quiet && result.non_projective_copied > 0) {
      std::cerr << "typoscope synth: copied " << result.non_projective_copied
                << " non-projective sentences unchanged\n";
    }
    std::ofstream file;
    ts::write_synth_conllu(result, open_output(file, sy_out));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ts::ConfigError& e) {
    std::cerr << "typoscope: " << e.what() << "\n";
    return 1;
  } catch (const ts::Error& e) {
    std::cerr << "typoscope: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "typoscope: " << e.what() << "\n";
    return 2;
  }
}
