#include "typoscope/model.hpp"

#include <fstream>
#include <sstream>

#include "typoscope/error.hpp"
#include "typoscope/text.hpp"

namespace typoscope {

std::string model_kind(const Model& m) {
  switch (m.index()) {
    case 0: return "ec";
    case 1: return "hand";
    case 2: return "neural";
    case 3: return "combined";
  }
  return "?";
}

Eigen::VectorXd model_scores(const HandModel& m, const TaggedCorpus& c) {
  return score(featurize_hand(c, m.features, m.inventory), m.params);
}

Eigen::VectorXd model_scores(const NeuralModel& m, const TaggedCorpus& c) {
  const TaggedCorpus filtered = length_filter(c, m.max_len);
  return score(featurize_neural(filtered, m.gru, m.pooling, m.inventory), m.params);
}

std::map<std::string, double> predict(const Model& m, const TaggedCorpus& c) {
  if (const auto* ec = std::get_if<ECModel>(&m)) return ec_predict(*ec, c);
  if (const auto* hand = std::get_if<HandModel>(&m)) {
    return to_directionality(model_scores(*hand, c), hand->catalog);
  }
  if (const auto* neural = std::get_if<NeuralModel>(&m)) {
    return to_directionality(model_scores(*neural, c), neural->catalog);
  }
  const auto& comb = std::get<CombinedModel>(m);
  if (!(comb.hand.catalog == comb.neural.catalog)) {
    throw DataError("combined model: sub-model relation catalogs differ");
  }
  const Eigen::VectorXd s =
      combine(model_scores(comb.hand, c), model_scores(comb.neural, c), comb.alpha);
  return to_directionality(s, comb.hand.catalog);
}

namespace {

template <class M>
BlockRef make_block(const std::string& name, const M& m, bool is_weight) {
  return {name, const_cast<double*>(m.data()), m.rows(), m.cols(), is_weight};
}

}  // namespace

std::vector<BlockRef> blocks(const ScoringParams& p) {
  std::vector<BlockRef> out;
  for (std::size_t i = 0; i < p.w.size(); ++i) {
    out.push_back(make_block("w" + std::to_string(i), p.w[i], true));
    out.push_back(make_block("b" + std::to_string(i), p.b[i], false));
  }
  out.push_back(make_block("V", p.v, true));
  out.push_back(make_block("bV", p.b_v, false));
  return out;
}

std::vector<BlockRef> blocks(const ScoringGrads& g) {
  std::vector<BlockRef> out;
  for (std::size_t i = 0; i < g.w.size(); ++i) {
    out.push_back(make_block("w" + std::to_string(i), g.w[i], true));
    out.push_back(make_block("b" + std::to_string(i), g.b[i], false));
  }
  out.push_back(make_block("V", g.v, true));
  out.push_back(make_block("bV", g.b_v, false));
  return out;
}

std::vector<BlockRef> blocks(const GruParams& p) {
  return {make_block("emb", p.emb, true), make_block("wz", p.wz, true),
          make_block("bz", p.bz, false),  make_block("wr", p.wr, true),
          make_block("br", p.br, false),  make_block("wc", p.wc, true),
          make_block("bc", p.bc, false)};
}

std::vector<BlockRef> blocks(const GruGrads& g) {
  return {make_block("emb", g.emb, true), make_block("wz", g.wz, true),
          make_block("bz", g.bz, false),  make_block("wr", g.wr, true),
          make_block("br", g.br, false),  make_block("wc", g.wc, true),
          make_block("bc", g.bc, false)};
}

namespace {

void write_block(std::ostream& out, const BlockRef& b) {
  out << "block\t" << b.name << "\t" << b.rows << "\t" << b.cols << "\n";
  // Eigen storage is column-major; emit row by row for readability.
  for (Eigen::Index i = 0; i < b.rows; ++i) {
    for (Eigen::Index j = 0; j < b.cols; ++j) {
      if (j) out << "\t";
      out << fmt_double(b.data[j * b.rows + i]);
    }
    out << "\n";
  }
}

void write_string_list(std::ostream& out, const std::string& key,
                       const std::vector<std::string>& items) {
  out << key << "\t" << items.size() << "\n";
  for (const auto& s : items) out << s << "\n";
}

void write_scoring_common(std::ostream& out, const RelationCatalog& catalog,
                          const TagInventory& inv, const ScoringParams& params,
                          double dropout_rate, std::uint64_t seed) {
  out << "seed\t" << seed << "\n";
  out << "dropout\t" << fmt_double(dropout_rate) << "\n";
  out << "depth\t" << params.depth << "\n";
  out << "hidden\t" << params.hidden << "\n";
  out << "psi\t" << to_string(params.psi) << "\n";
  write_string_list(out, "tags", inv.tags());
  write_string_list(out, "relations", catalog.names);
}

std::string families_string(const FeatureConfig& f) {
  std::vector<std::string> fams;
  if (f.conditional) fams.push_back("conditional");
  if (f.joint) fams.push_back("joint");
  if (f.pmi) fams.push_back("pmi");
  if (f.asymmetry) fams.push_back("asymmetry");
  return fams.empty() ? "-" : join(fams, ",");
}

std::string ints_string(const std::vector<int>& v) {
  std::vector<std::string> parts;
  for (const int x : v) parts.push_back(std::to_string(x));
  return parts.empty() ? "-" : join(parts, ",");
}

std::string windows_string(const FeatureConfig& f) {
  std::vector<std::string> parts;
  for (const auto& w : f.windows) {
    parts.push_back(std::to_string(w.offset) + (w.truncated ? ":t" : ":p"));
  }
  return parts.empty() ? "-" : join(parts, ",");
}

void write_hand_body(std::ostream& out, const HandModel& m) {
  write_scoring_common(out, m.catalog, m.inventory, m.params, m.dropout_rate, m.seed);
  out << "windows\t" << windows_string(m.features) << "\n";
  out << "families\t" << families_string(m.features) << "\n";
  out << "b_values\t" << ints_string(m.features.b_values) << "\n";
  out << "lambda\t" << fmt_double(m.features.lambda) << "\n";
  out << "thresholds\t" << ints_string(m.features.length_thresholds) << "\n";
  out << "feature_dim\t" << m.params.feature_dim() << "\n";
  const auto bs = blocks(m.params);
  out << "blocks\t" << bs.size() << "\n";
  for (const auto& b : bs) write_block(out, b);
}

void write_neural_body(std::ostream& out, const NeuralModel& m) {
  write_scoring_common(out, m.catalog, m.inventory, m.params, m.dropout_rate, m.seed);
  out << "emb_size\t" << m.gru.emb_size << "\n";
  out << "rnn_size\t" << m.gru.rnn_size << "\n";
  std::vector<std::string> betas;
  for (const double b : m.pooling.betas) betas.push_back(fmt_double(b));
  out << "betas\t" << join(betas, ",") << "\n";
  out << "neural_max_len\t" << m.max_len << "\n";
  auto bs = blocks(m.gru);
  const auto sb = blocks(m.params);
  bs.insert(bs.end(), sb.begin(), sb.end());
  out << "blocks\t" << bs.size() << "\n";
  for (const auto& b : bs) write_block(out, b);
}

// ---- reading ----

struct LineReader {
  std::istream& in;
  std::string line{};

  bool next() {
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }
  std::vector<std::string> fields() { return split(line, '\t'); }
  std::pair<std::string, std::string> kv() {
    const auto f = fields();
    if (f.size() != 2) throw ParseError("expected key<TAB>value, got: " + line);
    return {f[0], f[1]};
  }
};

void read_block_into(LineReader& r, const BlockRef& b, const std::vector<std::string>& header) {
  if (header.size() != 4 || header[0] != "block") throw ParseError("expected a block header");
  if (header[1] != b.name || parse_long(header[2], "rows") != b.rows ||
      parse_long(header[3], "cols") != b.cols) {
    throw ParseError("block mismatch: expected " + b.name + " " + std::to_string(b.rows) + "x" +
                     std::to_string(b.cols) + ", got " + header[1] + " " + header[2] + "x" +
                     header[3]);
  }
  for (Eigen::Index i = 0; i < b.rows; ++i) {
    if (!r.next()) throw ParseError("truncated block " + b.name);
    const auto f = r.fields();
    if (static_cast<Eigen::Index>(f.size()) != b.cols) {
      throw ParseError("block " + b.name + ": wrong column count");
    }
    for (Eigen::Index j = 0; j < b.cols; ++j) {
      b.data[j * b.rows + i] = parse_double(f[static_cast<std::size_t>(j)], "block " + b.name);
    }
  }
}

std::vector<std::string> read_string_list(LineReader& r, const std::string& key) {
  const auto [k, v] = r.kv();
  if (k != key) throw ParseError("expected key " + key + ", got " + k);
  const long n = parse_long(v, key);
  std::vector<std::string> items;
  for (long i = 0; i < n; ++i) {
    if (!r.next()) throw ParseError("truncated " + key + " list");
    items.push_back(r.line);
  }
  return items;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  if (s == "-") return out;
  for (const auto& part : split(s, ',')) {
    out.push_back(static_cast<int>(parse_long(part, "integer list")));
  }
  return out;
}

struct ScoringHeader {
  std::uint64_t seed = 0;
  double dropout = 0.0;
  int depth = 0, hidden = 0;
  Activation psi = Activation::Sigmoid;
  TagInventory inventory;
  RelationCatalog catalog;
};

ScoringHeader read_scoring_common(LineReader& r) {
  ScoringHeader h;
  {
    if (!r.next()) throw ParseError("truncated model");
    const auto [k, v] = r.kv();
    if (k != "seed") throw ParseError("expected seed");
    h.seed = static_cast<std::uint64_t>(std::stoull(v));
  }
  for (const std::string key : {"dropout", "depth", "hidden", "psi"}) {
    if (!r.next()) throw ParseError("truncated model");
    const auto [k, v] = r.kv();
    if (k != key) throw ParseError("expected " + key + ", got " + k);
    if (key == "dropout") h.dropout = parse_double(v, "dropout");
    else if (key == "depth") h.depth = static_cast<int>(parse_long(v, "depth"));
    else if (key == "hidden") h.hidden = static_cast<int>(parse_long(v, "hidden"));
    else h.psi = activation_from_string(v);
  }
  if (!r.next()) throw ParseError("truncated model");
  h.inventory = TagInventory(read_string_list(r, "tags"));
  if (!r.next()) throw ParseError("truncated model");
  h.catalog.names = read_string_list(r, "relations");
  for (std::size_t i = 0; i < h.catalog.names.size(); ++i) {
    h.catalog.index[h.catalog.names[i]] = static_cast<int>(i);
  }
  return h;
}

ScoringParams make_scoring_shell(const ScoringHeader& h, int feature_dim, int relations) {
  ScoringParams p;
  p.depth = h.depth;
  p.hidden = h.hidden;
  p.psi = h.psi;
  int prev = feature_dim;
  for (int i = 0; i < h.depth; ++i) {
    p.w.push_back(Eigen::MatrixXd::Zero(h.hidden, prev));
    p.b.push_back(Eigen::VectorXd::Zero(h.hidden));
    prev = h.hidden;
  }
  p.v = Eigen::MatrixXd::Zero(relations, prev);
  p.b_v = Eigen::VectorXd::Zero(relations);
  return p;
}

void read_blocks(LineReader& r, const std::vector<BlockRef>& bs) {
  if (!r.next()) throw ParseError("truncated model (blocks)");
  const auto [k, v] = r.kv();
  if (k != "blocks") throw ParseError("expected blocks count");
  if (parse_long(v, "blocks") != static_cast<long>(bs.size())) {
    throw ParseError("unexpected number of parameter blocks");
  }
  for (const auto& b : bs) {
    if (!r.next()) throw ParseError("truncated model (block header)");
    read_block_into(r, b, r.fields());
  }
}

HandModel read_hand_body(LineReader& r) {
  HandModel m;
  const ScoringHeader h = read_scoring_common(r);
  m.seed = h.seed;
  m.dropout_rate = h.dropout;
  m.inventory = h.inventory;
  m.catalog = h.catalog;

  FeatureConfig f;
  f.windows.clear();
  f.conditional = f.joint = f.pmi = f.asymmetry = false;
  int feature_dim = -1;
  for (const std::string key :
       {"windows", "families", "b_values", "lambda", "thresholds", "feature_dim"}) {
    if (!r.next()) throw ParseError("truncated hand model");
    const auto [k, v] = r.kv();
    if (k != key) throw ParseError("expected " + key + ", got " + k);
    if (key == "windows") {
      if (v != "-") {
        for (const auto& part : split(v, ',')) {
          const auto bits = split(part, ':');
          if (bits.size() != 2) throw ParseError("bad window spec " + part);
          f.windows.push_back({static_cast<int>(parse_long(bits[0], "window")), bits[1] == "t"});
        }
      }
    } else if (key == "families") {
      if (v != "-") {
        for (const auto& fam : split(v, ',')) {
          if (fam == "conditional") f.conditional = true;
          else if (fam == "joint") f.joint = true;
          else if (fam == "pmi") f.pmi = true;
          else if (fam == "asymmetry") f.asymmetry = true;
          else throw ParseError("unknown feature family " + fam);
        }
      }
    } else if (key == "b_values") {
      f.b_values = parse_int_list(v);
    } else if (key == "lambda") {
      f.lambda = parse_double(v, "lambda");
    } else if (key == "thresholds") {
      f.length_thresholds = parse_int_list(v);
    } else {
      feature_dim = static_cast<int>(parse_long(v, "feature_dim"));
    }
  }
  m.features = f;
  const FeatureCatalog cat = build_catalog(f, m.inventory);
  if (static_cast<int>(cat.size()) != feature_dim) {
    throw ParseError("feature_dim does not match the rebuilt catalog");
  }
  m.params = make_scoring_shell(h, feature_dim, static_cast<int>(m.catalog.size()));
  read_blocks(r, blocks(m.params));
  return m;
}

NeuralModel read_neural_body(LineReader& r) {
  NeuralModel m;
  const ScoringHeader h = read_scoring_common(r);
  m.seed = h.seed;
  m.dropout_rate = h.dropout;
  m.inventory = h.inventory;
  m.catalog = h.catalog;

  int emb_size = 0, rnn_size = 0;
  for (const std::string key : {"emb_size", "rnn_size", "betas", "neural_max_len"}) {
    if (!r.next()) throw ParseError("truncated neural model");
    const auto [k, v] = r.kv();
    if (k != key) throw ParseError("expected " + key + ", got " + k);
    if (key == "emb_size") emb_size = static_cast<int>(parse_long(v, "emb_size"));
    else if (key == "rnn_size") rnn_size = static_cast<int>(parse_long(v, "rnn_size"));
    else if (key == "betas") {
      m.pooling.betas.clear();
      for (const auto& part : split(v, ',')) m.pooling.betas.push_back(parse_double(part, "beta"));
    } else {
      m.max_len = static_cast<int>(parse_long(v, "neural_max_len"));
    }
  }
  m.gru.emb_size = emb_size;
  m.gru.rnn_size = rnn_size;
  const int rows = static_cast<int>(m.inventory.size()) + 2;
  m.gru.emb = Eigen::MatrixXd::Zero(rows, emb_size);
  m.gru.wz = Eigen::MatrixXd::Zero(rnn_size, emb_size + rnn_size);
  m.gru.wr = Eigen::MatrixXd::Zero(rnn_size, emb_size + rnn_size);
  m.gru.wc = Eigen::MatrixXd::Zero(rnn_size, emb_size + rnn_size);
  m.gru.bz = Eigen::VectorXd::Zero(rnn_size);
  m.gru.br = Eigen::VectorXd::Zero(rnn_size);
  m.gru.bc = Eigen::VectorXd::Zero(rnn_size);
  const int feat_dim = static_cast<int>(m.pooling.betas.size()) * rnn_size;
  m.params = make_scoring_shell(h, feat_dim, static_cast<int>(m.catalog.size()));
  auto bs = blocks(m.gru);
  const auto sb = blocks(m.params);
  bs.insert(bs.end(), sb.begin(), sb.end());
  read_blocks(r, bs);
  return m;
}

}  // namespace

void save_model(const Model& m, std::ostream& out) {
  out << "typoscope\tmodel\t1.0\n";
  if (const auto* ec = std::get_if<ECModel>(&m)) {
    // The EC writer emits its own header; rewriting it here would duplicate.
    std::ostringstream tmp;
    write_ec_model(*ec, tmp);
    const std::string body = tmp.str();
    out << body.substr(body.find('\n') + 1);
    return;
  }
  out << "model_kind\t" << model_kind(m) << "\n";
  if (const auto* hand = std::get_if<HandModel>(&m)) {
    write_hand_body(out, *hand);
  } else if (const auto* neural = std::get_if<NeuralModel>(&m)) {
    write_neural_body(out, *neural);
  } else {
    const auto& comb = std::get<CombinedModel>(m);
    out << "alpha\t" << fmt_double(comb.alpha) << "\n";
    out << "submodel\thand\n";
    write_hand_body(out, comb.hand);
    out << "end_submodel\n";
    out << "submodel\tneural\n";
    write_neural_body(out, comb.neural);
    out << "end_submodel\n";
  }
}

void save_model_file(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  save_model(m, out);
}

Model load_model(std::istream& in) {
  LineReader r{in};
  if (!r.next()) throw ParseError("empty model file");
  {
    const auto f = r.fields();
    if (f.size() != 3 || f[0] != "typoscope" || f[1] != "model") {
      throw ParseError("not a typoscope model file");
    }
    if (split(f[2], '.').at(0) != "1") {
      throw ParseError("unsupported model file version " + f[2]);
    }
  }
  if (!r.next()) throw ParseError("model file missing model_kind");
  const auto [k, kind] = r.kv();
  if (k != "model_kind") throw ParseError("expected model_kind");

  if (kind == "ec") {
    // Re-assemble the EC reader's expected layout.
    std::ostringstream rest;
    rest << "typoscope\tmodel\t1.0\n";
    rest << "model_kind\tec\n";
    std::string line;
    while (std::getline(in, line)) rest << line << "\n";
    std::istringstream full(rest.str());
    return read_ec_model(full);
  }
  if (kind == "hand") return read_hand_body(r);
  if (kind == "neural") return read_neural_body(r);
  if (kind == "combined") {
    CombinedModel comb;
    if (!r.next()) throw ParseError("truncated combined model");
    const auto [ak, av] = r.kv();
    if (ak != "alpha") throw ParseError("expected alpha");
    comb.alpha = parse_double(av, "alpha");
    for (int part = 0; part < 2; ++part) {
      if (!r.next()) throw ParseError("truncated combined model");
      const auto [sk, sv] = r.kv();
      if (sk != "submodel") throw ParseError("expected submodel");
      if (sv == "hand") comb.hand = read_hand_body(r);
      else if (sv == "neural") comb.neural = read_neural_body(r);
      else throw ParseError("unknown submodel kind " + sv);
      if (!r.next() || r.line != "end_submodel") throw ParseError("expected end_submodel");
    }
    if (!(comb.hand.catalog == comb.neural.catalog)) {
      throw ParseError("combined model: sub-model catalogs differ");
    }
    return comb;
  }
  throw ParseError("unknown model_kind " + kind);
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return load_model(in);
}

}  // namespace typoscope
