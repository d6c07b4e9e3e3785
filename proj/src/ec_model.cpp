#include "typoscope/ec_model.hpp"

#include <istream>
#include <ostream>

#include "typoscope/error.hpp"
#include "typoscope/text.hpp"

namespace typoscope {

namespace {

using PairKey = std::pair<std::string, std::string>;

bool in_window(int i, int j, int window) {
  return window == kUnboundedWindow || j - i < window;
}

}  // namespace

ECModel ec_train(const std::vector<const Treebank*>& treebanks, RelationScheme scheme, int window,
                 int max_len) {
  if (treebanks.empty()) throw DataError("ec_train: no treebanks");
  ECModel m;
  m.window = window;

  std::map<PairKey, double> denom;
  std::map<PairKey, std::map<std::string, double>> right_num;
  std::map<PairKey, std::map<std::string, double>> left_num;

  for (const Treebank* tbp : treebanks) {
    const Treebank tb = length_filter(*tbp, max_len);
    m.trained_languages.push_back(tbp->language_id);

    // The relation inventory covers every edge, not just in-window ones, so
    // relations the window never captures still get the 0.5 fallback.
    for (const Sentence& sent : tb.sentences) {
      for (const Token& tok : sent.tokens) {
        if (tok.head == 0) continue;
        const Token& head = sent.tokens[static_cast<std::size_t>(tok.head) - 1];
        m.relations.insert(normalize_relation(tok.deprel, head.tag, tok.tag, scheme));
      }
    }

    std::map<PairKey, long> pair_count;
    std::map<PairKey, std::map<std::string, long>> right_count;
    std::map<PairKey, std::map<std::string, long>> left_count;
    long total_pairs = 0;

    for (const Sentence& sent : tb.sentences) {
      const int n = static_cast<int>(sent.tokens.size());
      for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n && in_window(i, j, window); ++j) {
          const Token& ti = sent.tokens[static_cast<std::size_t>(i) - 1];
          const Token& tj = sent.tokens[static_cast<std::size_t>(j) - 1];
          const PairKey key{ti.tag, tj.tag};
          ++pair_count[key];
          ++total_pairs;
          if (tj.head == i) {
            const std::string rel = normalize_relation(tj.deprel, ti.tag, tj.tag, scheme);
            ++right_count[key][rel];
            m.relations.insert(rel);
          }
          if (ti.head == j) {
            const std::string rel = normalize_relation(ti.deprel, tj.tag, ti.tag, scheme);
            ++left_count[key][rel];
            m.relations.insert(rel);
          }
        }
      }
    }

    if (total_pairs == 0) continue;  // nothing within the window for this language
    const double s = 1.0 / static_cast<double>(total_pairs);
    for (const auto& [key, c] : pair_count) denom[key] += s * static_cast<double>(c);
    for (const auto& [key, rels] : right_count) {
      for (const auto& [rel, c] : rels) right_num[key][rel] += s * static_cast<double>(c);
    }
    for (const auto& [key, rels] : left_count) {
      for (const auto& [rel, c] : rels) left_num[key][rel] += s * static_cast<double>(c);
    }
  }

  for (const auto& [key, rels] : right_num) {
    for (const auto& [rel, num] : rels) m.right_prob[key][rel] = num / denom.at(key);
  }
  for (const auto& [key, rels] : left_num) {
    for (const auto& [rel, num] : rels) m.left_prob[key][rel] = num / denom.at(key);
  }
  return m;
}

std::map<std::string, double> ec_predict(const ECModel& m, const TaggedCorpus& c) {
  if (c.sequences.empty()) throw DataError("ec_predict: empty corpus");

  std::map<std::string, double> ecnt_right;
  std::map<std::string, double> ecnt_left;
  for (const auto& seq : c.sequences) {
    const int len = static_cast<int>(seq.size());
    // Positions 1 .. len-2 are real tokens ([0] and [len-1] are boundaries).
    for (int i = 1; i + 1 < len; ++i) {
      if (seq[static_cast<std::size_t>(i)] == kBoundaryTag) continue;
      for (int j = i + 1; j + 1 < len && in_window(i, j, m.window); ++j) {
        if (seq[static_cast<std::size_t>(j)] == kBoundaryTag) continue;
        const PairKey key{seq[static_cast<std::size_t>(i)], seq[static_cast<std::size_t>(j)]};
        if (const auto it = m.right_prob.find(key); it != m.right_prob.end()) {
          for (const auto& [rel, p] : it->second) ecnt_right[rel] += p;
        }
        if (const auto it = m.left_prob.find(key); it != m.left_prob.end()) {
          for (const auto& [rel, p] : it->second) ecnt_left[rel] += p;
        }
      }
    }
  }

  std::map<std::string, double> out;
  for (const auto& rel : m.relations) {
    const double er = ecnt_right.count(rel) ? ecnt_right.at(rel) : 0.0;
    const double el = ecnt_left.count(rel) ? ecnt_left.at(rel) : 0.0;
    out[rel] = (er + el) > 0.0 ? er / (er + el) : 0.5;
  }
  return out;
}

void write_ec_model(const ECModel& m, std::ostream& out) {
  out << "typoscope\tmodel\t1.0\n";
  out << "model_kind\tec\n";
  out << "window\t" << (m.window == kUnboundedWindow ? std::string("inf")
                                                     : std::to_string(m.window))
      << "\n";
  out << "languages\t" << join(m.trained_languages, ",") << "\n";
  out << "relations\t"
      << join(std::vector<std::string>(m.relations.begin(), m.relations.end()), ",") << "\n";
  std::size_t rows = 0;
  for (const auto& [key, rels] : m.right_prob) { (void)key; rows += rels.size(); }
  for (const auto& [key, rels] : m.left_prob) { (void)key; rows += rels.size(); }
  out << "entries\t" << rows << "\n";
  for (const auto& [key, rels] : m.right_prob) {
    for (const auto& [rel, p] : rels) {
      out << key.first << "\t" << key.second << "\t" << rel << "\tR\t" << fmt_double(p) << "\n";
    }
  }
  for (const auto& [key, rels] : m.left_prob) {
    for (const auto& [rel, p] : rels) {
      out << key.first << "\t" << key.second << "\t" << rel << "\tL\t" << fmt_double(p) << "\n";
    }
  }
}

ECModel read_ec_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty model file");
  auto cols = split(strip(line), '\t');
  if (cols.size() != 3 || cols[0] != "typoscope" || cols[1] != "model") {
    throw ParseError("not a typoscope model file");
  }
  if (split(cols[2], '.').at(0) != "1") {
    throw ParseError("unsupported model file version " + cols[2]);
  }
  ECModel m;
  long entries = -1;
  while (entries < 0 && std::getline(in, line)) {
    cols = split(strip(line), '\t');
    if (cols.size() != 2) throw ParseError("bad model header line: " + line);
    if (cols[0] == "model_kind") {
      if (cols[1] != "ec") throw ParseError("expected an ec model, found " + cols[1]);
    } else if (cols[0] == "window") {
      m.window = cols[1] == "inf" ? kUnboundedWindow
                                  : static_cast<int>(parse_long(cols[1], "window"));
    } else if (cols[0] == "languages") {
      m.trained_languages = cols[1].empty() ? std::vector<std::string>{} : split(cols[1], ',');
    } else if (cols[0] == "relations") {
      if (!cols[1].empty()) {
        for (const auto& rel : split(cols[1], ',')) m.relations.insert(rel);
      }
    } else if (cols[0] == "entries") {
      entries = parse_long(cols[1], "entries");
    } else {
      throw ParseError("unknown ec model header key: " + cols[0]);
    }
  }
  for (long k = 0; k < entries; ++k) {
    if (!std::getline(in, line)) throw ParseError("truncated ec model file");
    cols = split(strip(line), '\t');
    if (cols.size() != 5) throw ParseError("bad ec model entry: " + line);
    const PairKey key{cols[0], cols[1]};
    const double p = parse_double(cols[4], "ec probability");
    if (cols[3] == "R") m.right_prob[key][cols[2]] = p;
    else if (cols[3] == "L") m.left_prob[key][cols[2]] = p;
    else throw ParseError("bad ec direction flag: " + cols[3]);
    m.relations.insert(cols[2]);
  }
  return m;
}

}  // namespace typoscope
