#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "typoscope/evaluation.hpp"
#include "typoscope/experiment.hpp"
#include "typoscope/text.hpp"

using namespace typoscope;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("typoscope_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

CliResult run_cli(const TempDir& dir, const std::vector<std::string>& args) {
  std::string cmd = std::string("'") + TYPOSCOPE_CLI_PATH + "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  const fs::path out = dir.path / "stdout.txt";
  const fs::path err = dir.path / "stderr.txt";
  cmd += " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int rc = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WEXITSTATUS(rc);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

const char* kTwoTokenFixture =
    "1\tThe\tthe\tDET\t_\t_\t2\tdet\t_\t_\n"
    "2\tcat\tcat\tNOUN\t_\t_\t0\troot\t_\t_\n";

}  // namespace

TEST_CASE("cli stats emits one TSV row for the two-token fixture") {
  TempDir dir;
  const fs::path in = dir.path / "two.conllu";
  write_file(in, kTwoTokenFixture);
  const CliResult r = run_cli(dir, {"stats", in.string()});
  REQUIRE(r.exit_code == 0);
  const auto lines = split(strip(r.out), '\n');
  REQUIRE(lines.size() == 1);
  const auto cols = split(lines[0], '\t');
  REQUIRE(cols.size() == 4);
  CHECK(cols[0] == "det");
  CHECK(parse_double(cols[1], "p_right") == 0.0);
  CHECK(parse_double(cols[2], "rel_freq") == 1.0);
  CHECK(cols[3] == "1");
  CHECK(r.err.find("seed=0") != std::string::npos);  // resolved config echo
}

TEST_CASE("cli exit codes: 1 for usage errors, 2 for data errors") {
  TempDir dir;
  CHECK(run_cli(dir, {"no-such-command"}).exit_code == 1);
  CHECK(run_cli(dir, {"stats", "--bogus-flag", "x.conllu"}).exit_code == 1);
  CHECK(run_cli(dir, {"stats", (dir.path / "missing.conllu").string()}).exit_code == 2);
  const fs::path empty = dir.path / "empty.conllu";
  write_file(empty, "# nothing here\n");
  CHECK(run_cli(dir, {"stats", empty.string()}).exit_code == 2);
}

namespace {

// Four small languages on disk plus the experiment config text heading.
struct MiniPool {
  TempDir dir;
  std::vector<std::string> ids = {"la", "lb", "lc", "ld"};
  std::vector<fs::path> files;

  MiniPool() {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const Treebank tb =
          test::make_fixture_treebank(25, 7000 + static_cast<std::uint64_t>(i), ids[i]);
      files.push_back(dir.path / (ids[i] + ".conllu"));
      write_conllu_file(tb, files.back().string());
    }
  }

  std::string config_header(const std::string& extra) const {
    std::string cfg =
        "typoscope\texperiment\t1.0\n"
        "model\thand\n"
        "features\tsmall\n"
        "depth\t1\n"
        "hidden\t8\n"
        "lr\t0.3\n"
        "dropout\t0\n"
        "epochs\t15\n"
        "seed\t5\n" +
        extra + "[languages]\n";
    return cfg;
  }
};

}  // namespace

TEST_CASE("cli pipeline reproduces in-process cross-validation exactly") {
  MiniPool mini;

  // In-process: fold {lc, ld} held out, trained on {la, lb}.
  TrainingPool pool;
  for (std::size_t i = 0; i < mini.ids.size(); ++i) {
    pool.languages.push_back(make_pool_language(
        mini.ids[i], parse_conllu_file(mini.files[i].string(), mini.ids[i]), {}));
  }
  FoldPlan plan;
  plan.folds = {{"la", "lb"}, {"lc", "ld"}};
  ModelSpec spec;
  spec.family = ModelFamily::Hand;
  spec.features = small_feature_config();
  spec.hand.depth = 1;
  spec.hand.hidden = 8;
  spec.hand.lr = 0.3;
  spec.hand.dropout = 0.0;
  spec.hand.epochs = 15;
  spec.hand.seed = 5;
  const CvReport report = cross_validate(pool, plan, {spec}, 0.1);

  // CLI: train on {la, lb} (fold 1's training set), predict + evaluate lc.
  std::string cfg = mini.config_header("");
  cfg += mini.ids[0] + "\t" + mini.files[0].string() + "\n";
  cfg += mini.ids[1] + "\t" + mini.files[1].string() + "\n";
  const fs::path cfg_path = mini.dir.path / "exp.cfg";
  write_file(cfg_path, cfg);

  const fs::path model_path = mini.dir.path / "m.model";
  REQUIRE(run_cli(mini.dir, {"train", cfg_path.string(), "-o", model_path.string()}).exit_code ==
          0);
  const fs::path pred_path = mini.dir.path / "lc.pred";
  REQUIRE(run_cli(mini.dir, {"predict", "-m", model_path.string(), mini.files[2].string(), "-o",
                             pred_path.string()})
              .exit_code == 0);
  const CliResult ev = run_cli(mini.dir, {"evaluate", "--pred", pred_path.string(), "--gold",
                                          mini.files[2].string()});
  REQUIRE(ev.exit_code == 0);

  double cli_loss = -1.0;
  for (const auto& line : split(ev.out, '\n')) {
    const auto kv = split(line, '\t');
    if (kv.size() == 2 && kv[0] == "aggregate_loss") cli_loss = parse_double(kv[1], "loss");
  }
  REQUIRE(cli_loss >= 0.0);

  double inproc_loss = -1.0;
  for (const auto& row : report.rows) {
    if (row.fold == 1 && row.language == "lc") inproc_loss = row.loss;
  }
  REQUIRE(inproc_loss >= 0.0);
  CHECK(cli_loss == inproc_loss);  // exact: files round-trip parameters losslessly
}

TEST_CASE("cli predict with an untrained model follows the initialization contract") {
  MiniPool mini;
  std::string cfg = mini.config_header("");
  // lr = 0 keeps the parameters at their initialization.
  cfg = cfg.replace(cfg.find("lr\t0.3"), 6, "lr\t0");
  cfg += mini.ids[0] + "\t" + mini.files[0].string() + "\n";
  cfg += mini.ids[1] + "\t" + mini.files[1].string() + "\n";
  const fs::path cfg_path = mini.dir.path / "exp.cfg";
  write_file(cfg_path, cfg);
  const fs::path model_path = mini.dir.path / "fresh.model";
  REQUIRE(run_cli(mini.dir, {"train", cfg_path.string(), "-o", model_path.string()}).exit_code ==
          0);
  const CliResult pr = run_cli(mini.dir, {"predict", "-m", model_path.string(),
                                          mini.files[3].string()});
  REQUIRE(pr.exit_code == 0);

  std::vector<DirectionalityVector> golds;
  for (int i = 0; i < 2; ++i) {
    golds.push_back(
        directionality(parse_conllu_file(mini.files[static_cast<std::size_t>(i)].string(),
                                         mini.ids[static_cast<std::size_t>(i)])));
    golds.back().language_id = mini.ids[static_cast<std::size_t>(i)];
  }
  const InitStats stats = init_stats(golds);
  double pbar_mean = 0.0;
  for (const auto& [rel, pb] : stats.pbar) {
    (void)rel;
    pbar_mean += pb;
  }
  pbar_mean /= static_cast<double>(stats.pbar.size());

  bool in_entries = false;
  int checked = 0;
  for (const auto& line : split(pr.out, '\n')) {
    const auto kv = split(line, '\t');
    if (kv.size() == 2 && kv[0] == "entries") {
      in_entries = true;
      continue;
    }
    if (!in_entries || kv.size() != 2) continue;
    const double expect =
        logistic(clipped_logit(kv[0] == "UNK" ? pbar_mean : stats.pbar.at(kv[0])));
    CHECK(parse_double(kv[1], "p") == expect);
    ++checked;
  }
  CHECK(checked >= 5);
}

TEST_CASE("cli evaluate of gold against itself reports zero loss") {
  MiniPool mini;
  const DirectionalityVector gold =
      directionality(parse_conllu_file(mini.files[0].string(), mini.ids[0]));
  std::string pred_doc = "typoscope\tpredictions\t1.0\nmodel\ttest\nlanguage\tla\nentries\t" +
                         std::to_string(gold.entries.size()) + "\n";
  for (const auto& [rel, e] : gold.entries) pred_doc += rel + "\t" + fmt_double(e.p_right) + "\n";
  const fs::path pred_path = mini.dir.path / "self.pred";
  write_file(pred_path, pred_doc);
  const CliResult ev = run_cli(mini.dir, {"evaluate", "--pred", pred_path.string(), "--gold",
                                          mini.files[0].string()});
  REQUIRE(ev.exit_code == 0);
  CHECK(ev.out.find("aggregate_loss\t0\n") != std::string::npos);
  CHECK(ev.out.find("binary_accuracy\t1\n") != std::string::npos);
}

TEST_CASE("cli runs are byte-identical under identical flags and inputs") {
  MiniPool mini;
  const fs::path synth1 = mini.dir.path / "s1.conllu";
  const fs::path synth2 = mini.dir.path / "s2.conllu";
  for (const auto& out : {synth1, synth2}) {
    REQUIRE(run_cli(mini.dir, {"--seed", "31", "synth", "--substrate", mini.files[0].string(),
                               "--rv", mini.files[1].string(), "--rn", "self", "-o",
                               out.string()})
                .exit_code == 0);
  }
  CHECK(slurp(synth1) == slurp(synth2));
  CHECK(slurp(synth1).rfind("# synth: substrate=la, rv=lb, rn=self, seed=31", 0) == 0);

  std::string cfg = mini.config_header("");
  cfg += mini.ids[0] + "\t" + mini.files[0].string() + "\n";
  cfg += mini.ids[1] + "\t" + mini.files[1].string() + "\n";
  const fs::path cfg_path = mini.dir.path / "exp.cfg";
  write_file(cfg_path, cfg);
  const fs::path m1 = mini.dir.path / "m1.model";
  const fs::path m2 = mini.dir.path / "m2.model";
  REQUIRE(run_cli(mini.dir, {"train", cfg_path.string(), "-o", m1.string()}).exit_code == 0);
  REQUIRE(run_cli(mini.dir, {"train", cfg_path.string(), "-o", m2.string()}).exit_code == 0);
  CHECK(slurp(m1) == slurp(m2));
}

TEST_CASE("cli ec-train / ec-predict round trip") {
  MiniPool mini;
  const fs::path model = mini.dir.path / "ec.model";
  REQUIRE(run_cli(mini.dir, {"ec-train", mini.files[0].string(), mini.files[1].string(), "-o",
                             model.string(), "-w", "8"})
              .exit_code == 0);
  const CliResult pr = run_cli(mini.dir, {"ec-predict", "-m", model.string(),
                                          mini.files[2].string()});
  REQUIRE(pr.exit_code == 0);
  CHECK(pr.out.find("typoscope\tpredictions\t1.0") == 0);
  CHECK(pr.out.find("model\tec") != std::string::npos);
}

TEST_CASE("cli featurize lists catalog names with values") {
  MiniPool mini;
  const CliResult r = run_cli(mini.dir, {"featurize", mini.files[0].string(), "--set",
                                         "windows=1,-1", "--set", "families=conditional",
                                         "--set", "b_values=none"});
  REQUIRE(r.exit_code == 0);
  const auto lines = split(strip(r.out), '\n');
  CHECK(lines.size() > 10);
  for (const auto& line : lines) {
    const auto kv = split(line, '\t');
    REQUIRE(kv.size() == 2);
    const double v = parse_double(kv[1], "feature");
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("cli cv writes a grid report") {
  MiniPool mini;
  std::string cfg = mini.config_header("");
  for (std::size_t i = 0; i < mini.ids.size(); ++i) {
    cfg += mini.ids[i] + "\t" + mini.files[i].string() + "\n";
  }
  cfg += "[folds]\n0\tla,lb\n1\tlc,ld\n[grid]\nlr\t0.1,0.3\n";
  const fs::path cfg_path = mini.dir.path / "cv.cfg";
  write_file(cfg_path, cfg);
  const fs::path report = mini.dir.path / "cv.report";
  REQUIRE(run_cli(mini.dir, {"cv", cfg_path.string(), "-o", report.string(), "--jobs", "2"})
              .exit_code == 0);
  const std::string text = slurp(report);
  CHECK(text.find("typoscope\tcv-report\t1.0") == 0);
  CHECK(text.find("grid_points\t2") != std::string::npos);
  CHECK(text.find("best_point\t") != std::string::npos);
  CHECK(text.find("rows\t8") != std::string::npos);  // 2 grid points x 4 held-out languages
}
