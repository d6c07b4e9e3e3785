#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace typoscope {

// Reserved boundary symbol used in tag-sequence views.  Never a real token tag.
inline const std::string kBoundaryTag = "#";

struct Token {
  int index = 0;        // 1-based surface position
  std::string tag;      // UPOS
  int head = 0;         // 0 = virtual root, else 1-based position of the head
  std::string deprel;   // raw relation string, subtypes kept

  bool operator==(const Token&) const = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::string sent_id;  // from "# sent_id = ..." when present

  bool operator==(const Sentence&) const = default;
};

struct Treebank {
  std::string language_id;
  std::vector<Sentence> sentences;

  bool operator==(const Treebank&) const = default;
};

// Unparsed view: tag sequences only, each wrapped in boundary tags.
struct TaggedCorpus {
  std::string language_id;
  std::vector<std::vector<std::string>> sequences;
};

// Parses CoNLL-U text (10 tab-separated columns, blank-line sentence
// separators, "#" comments).  Multiword ranges ("1-2") and empty nodes
// ("1.1") are skipped.  UTF-8; LF or CRLF.
Treebank parse_conllu(std::istream& in, const std::string& language_id);
Treebank parse_conllu_file(const std::string& path, const std::string& language_id);

void write_conllu(const Treebank& tb, std::ostream& out);
void write_conllu_file(const Treebank& tb, const std::string& path);

TaggedCorpus to_tagged_corpus(const Treebank& tb);

// Keeps sequences whose real-token count (boundaries excluded) is <= max_len.
TaggedCorpus length_filter(const TaggedCorpus& c, int max_len);
Treebank length_filter(const Treebank& tb, int max_len);

// Plain tag-sequence text: one sentence per line, whitespace-separated tags
// (no boundary symbols).  Accepted anywhere a pre-tagged corpus is expected.
TaggedCorpus parse_tag_lines(std::istream& in, const std::string& language_id);

}  // namespace typoscope
