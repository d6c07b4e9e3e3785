#include "typoscope/typology.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "typoscope/error.hpp"
#include "typoscope/text.hpp"

namespace typoscope {

RelationScheme relation_scheme_from_string(const std::string& s) {
  if (s == "strip") return RelationScheme::StripSubtypes;
  if (s == "keep") return RelationScheme::KeepSubtypes;
  if (s == "pos-pair") return RelationScheme::PosPair;
  throw ConfigError("unknown relation scheme \"" + s + "\" (expected strip|keep|pos-pair)");
}

std::string to_string(RelationScheme s) {
  switch (s) {
    case RelationScheme::StripSubtypes: return "strip";
    case RelationScheme::KeepSubtypes: return "keep";
    case RelationScheme::PosPair: return "pos-pair";
  }
  return "?";
}

std::string normalize_relation(const std::string& deprel, const std::string& head_tag,
                               const std::string& child_tag, RelationScheme scheme) {
  switch (scheme) {
    case RelationScheme::StripSubtypes: {
      const auto colon = deprel.find(':');
      return colon == std::string::npos ? deprel : deprel.substr(0, colon);
    }
    case RelationScheme::KeepSubtypes:
      return deprel;
    case RelationScheme::PosPair:
      return "(" + head_tag + "," + child_tag + ")";
  }
  return deprel;
}

DirectionalityVector directionality(const Treebank& tb, const TypologyOptions& opts) {
  DirectionalityVector out;
  out.language_id = tb.language_id;

  std::map<std::string, std::pair<long, long>> counts;  // relation -> (total, rightward)
  long total = 0;
  for (const Sentence& sent : tb.sentences) {
    for (const Token& tok : sent.tokens) {
      if (tok.head == 0 && !opts.include_root) continue;
      const std::string head_tag =
          tok.head == 0 ? "ROOT" : sent.tokens[static_cast<std::size_t>(tok.head) - 1].tag;
      const std::string rel = normalize_relation(tok.deprel, head_tag, tok.tag, opts.scheme);
      auto& c = counts[rel];
      ++c.first;
      if (tok.index > tok.head) ++c.second;
      ++total;
    }
  }
  if (total == 0) throw DataError("no edges in treebank " + tb.language_id);

  for (const auto& [rel, c] : counts) {
    DirEntry e;
    e.count = c.first;
    e.p_right = static_cast<double>(c.second) / static_cast<double>(c.first);
    e.rel_freq = static_cast<double>(c.first) / static_cast<double>(total);
    out.entries[rel] = e;
  }
  return out;
}

InitStats init_stats(const std::vector<DirectionalityVector>& train) {
  InitStats stats;
  std::map<std::string, double> freq_sum;
  for (const auto& v : train) {
    for (const auto& [rel, e] : v.entries) freq_sum[rel] += e.rel_freq;
  }
  for (const auto& v : train) {
    for (const auto& [rel, e] : v.entries) {
      const double w = e.rel_freq / freq_sum.at(rel);
      stats.weights[{rel, v.language_id}] = w;
      stats.pbar[rel] += w * e.p_right;
    }
  }
  return stats;
}

void write_directionality_tsv(const DirectionalityVector& v, std::ostream& out) {
  for (const auto& [rel, e] : v.entries) {
    out << rel << "\t" << fmt_double(e.p_right) << "\t" << fmt_double(e.rel_freq) << "\t"
        << e.count << "\n";
  }
}

DirectionalityVector read_directionality_tsv(std::istream& in, const std::string& language_id) {
  DirectionalityVector v;
  v.language_id = language_id;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    const auto cols = split(s, '\t');
    if (cols.size() != 4) {
      throw ParseError("directionality TSV line " + std::to_string(line_no) +
                       ": expected 4 columns");
    }
    DirEntry e;
    e.p_right = parse_double(cols[1], "p_right");
    e.rel_freq = parse_double(cols[2], "rel_freq");
    e.count = parse_long(cols[3], "count");
    v.entries[cols[0]] = e;
  }
  if (v.entries.empty()) throw DataError("empty directionality table");
  return v;
}

void write_directionality_doc(const DirectionalityVector& v, RelationScheme scheme,
                              std::ostream& out) {
  out << "typoscope\tdirectionality\t1.0\n";
  out << "language\t" << v.language_id << "\n";
  out << "scheme\t" << to_string(scheme) << "\n";
  out << "entries\t" << v.entries.size() << "\n";
  write_directionality_tsv(v, out);
}

DirectionalityVector read_directionality_doc(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty directionality document");
  auto cols = split(strip(line), '\t');
  if (cols.size() != 3 || cols[0] != "typoscope" || cols[1] != "directionality") {
    throw ParseError("not a typoscope directionality document");
  }
  if (split(cols[2], '.').at(0) != "1") {
    throw ParseError("unsupported directionality document version " + cols[2]);
  }
  std::string language_id;
  long n = -1;
  while (n < 0 && std::getline(in, line)) {
    cols = split(strip(line), '\t');
    if (cols.size() != 2) throw ParseError("bad directionality header line: " + line);
    if (cols[0] == "language") language_id = cols[1];
    else if (cols[0] == "scheme") { /* informational */ }
    else if (cols[0] == "entries") n = parse_long(cols[1], "entries");
    else throw ParseError("unknown directionality header key: " + cols[0]);
  }
  if (n < 0) throw ParseError("directionality document missing entries count");
  DirectionalityVector v = read_directionality_tsv(in, language_id);
  if (static_cast<long>(v.entries.size()) != n) {
    throw ParseError("directionality document: entry count mismatch");
  }
  return v;
}

DirectionalityVector read_directionality_any(std::istream& in, const std::string& language_id) {
  if (in.peek() == 't') return read_directionality_doc(in);
  return read_directionality_tsv(in, language_id);
}

}  // namespace typoscope
