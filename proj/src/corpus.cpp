#include "typoscope/corpus.hpp"

#include <fstream>
#include <sstream>

#include "typoscope/error.hpp"
#include "typoscope/text.hpp"

namespace typoscope {

namespace {

bool is_plain_id(const std::string& id) {
  if (id.empty()) return false;
  for (const char c : id) {
    if (c < '0' || c > '9') return false;  // "1-2" and "1.1" fall out here
  }
  return true;
}

void validate_sentence(const Sentence& sent, std::size_t sent_no) {
  const int n = static_cast<int>(sent.tokens.size());
  int roots = 0;
  for (const Token& tok : sent.tokens) {
    if (tok.head < 0 || tok.head > n) {
      throw DataError("sentence " + std::to_string(sent_no) + ": head " +
                      std::to_string(tok.head) + " out of range [0," + std::to_string(n) + "]");
    }
    if (tok.head == tok.index) {
      throw DataError("sentence " + std::to_string(sent_no) + ": token " +
                      std::to_string(tok.index) + " is its own head");
    }
    if (tok.tag == kBoundaryTag) {
      throw DataError("sentence " + std::to_string(sent_no) +
                      ": reserved boundary symbol used as a token tag");
    }
    if (tok.head == 0) ++roots;
  }
  if (roots != 1) {
    throw DataError("sentence " + std::to_string(sent_no) + ": expected exactly one root, found " +
                    std::to_string(roots));
  }
  // With one parent per token and a single root, acyclicity implies a tree.
  for (const Token& tok : sent.tokens) {
    int hops = 0;
    int cur = tok.index;
    while (cur != 0) {
      cur = sent.tokens[static_cast<std::size_t>(cur) - 1].head;
      if (++hops > n) {
        throw DataError("sentence " + std::to_string(sent_no) +
                        ": cyclic head references involving token " + std::to_string(tok.index));
      }
    }
  }
}

}  // namespace

Treebank parse_conllu(std::istream& in, const std::string& language_id) {
  Treebank tb;
  tb.language_id = language_id;

  Sentence sent;
  std::string pending_sent_id;
  bool in_sentence = false;
  std::string line;
  std::size_t line_no = 0;

  auto flush = [&]() {
    if (!in_sentence) return;
    sent.sent_id = pending_sent_id;
    // Re-number: positions are defined by the surviving plain token lines.
    for (std::size_t i = 0; i < sent.tokens.size(); ++i) {
      sent.tokens[i].index = static_cast<int>(i) + 1;
    }
    validate_sentence(sent, tb.sentences.size() + 1);
    tb.sentences.push_back(std::move(sent));
    sent = Sentence{};
    pending_sent_id.clear();
    in_sentence = false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos && strip(line.substr(1, eq - 1)) == "sent_id") {
        pending_sent_id = strip(line.substr(eq + 1));
      }
      continue;
    }
    const auto cols = split(line, '\t');
    if (cols.size() != 10) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 10 columns, found " +
                       std::to_string(cols.size()));
    }
    if (!is_plain_id(cols[0])) continue;  // multiword range or empty node

    Token tok;
    tok.index = static_cast<int>(parse_long(cols[0], "ID at line " + std::to_string(line_no)));
    tok.tag = cols[3];
    tok.head = static_cast<int>(parse_long(cols[6], "HEAD at line " + std::to_string(line_no)));
    tok.deprel = cols[7];
    if (tok.tag.empty() || tok.tag.find(' ') != std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": bad UPOS \"" + cols[3] + "\"");
    }
    sent.tokens.push_back(std::move(tok));
    in_sentence = true;
  }
  flush();

  if (tb.sentences.empty()) throw DataError("empty treebank");
  return tb;
}

Treebank parse_conllu_file(const std::string& path, const std::string& language_id) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return parse_conllu(in, language_id);
}

void write_conllu(const Treebank& tb, std::ostream& out) {
  for (const Sentence& sent : tb.sentences) {
    if (!sent.sent_id.empty()) out << "# sent_id = " << sent.sent_id << "\n";
    for (const Token& tok : sent.tokens) {
      out << tok.index << "\t_\t_\t" << tok.tag << "\t_\t_\t" << tok.head << "\t" << tok.deprel
          << "\t_\t_\n";
    }
    out << "\n";
  }
}

void write_conllu_file(const Treebank& tb, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  write_conllu(tb, out);
}

TaggedCorpus to_tagged_corpus(const Treebank& tb) {
  TaggedCorpus c;
  c.language_id = tb.language_id;
  c.sequences.reserve(tb.sentences.size());
  for (const Sentence& sent : tb.sentences) {
    std::vector<std::string> seq;
    seq.reserve(sent.tokens.size() + 2);
    seq.push_back(kBoundaryTag);
    for (const Token& tok : sent.tokens) seq.push_back(tok.tag);
    seq.push_back(kBoundaryTag);
    c.sequences.push_back(std::move(seq));
  }
  return c;
}

TaggedCorpus length_filter(const TaggedCorpus& c, int max_len) {
  TaggedCorpus out;
  out.language_id = c.language_id;
  for (const auto& seq : c.sequences) {
    if (static_cast<int>(seq.size()) - 2 <= max_len) out.sequences.push_back(seq);
  }
  return out;
}

Treebank length_filter(const Treebank& tb, int max_len) {
  Treebank out;
  out.language_id = tb.language_id;
  for (const Sentence& sent : tb.sentences) {
    if (static_cast<int>(sent.tokens.size()) <= max_len) out.sentences.push_back(sent);
  }
  return out;
}

TaggedCorpus parse_tag_lines(std::istream& in, const std::string& language_id) {
  TaggedCorpus c;
  c.language_id = language_id;
  std::string line;
  while (std::getline(in, line)) {
    const std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    std::istringstream iss(s);
    std::vector<std::string> seq;
    seq.push_back(kBoundaryTag);
    std::string tag;
    while (iss >> tag) {
      if (tag == kBoundaryTag) throw DataError("reserved boundary symbol in tag line");
      seq.push_back(tag);
    }
    seq.push_back(kBoundaryTag);
    c.sequences.push_back(std::move(seq));
  }
  if (c.sequences.empty()) throw DataError("empty corpus");
  return c;
}

}  // namespace typoscope
