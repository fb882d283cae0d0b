#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gec {

// A single whitespace-free, NFC-normalized word. Tokens are immutable after
// construction; construction validates the invariants.
class Token {
public:
  Token(std::string text, std::size_t index);

  const std::string& text() const { return text_; }
  std::size_t index() const { return index_; }

  bool operator==(const Token& other) const = default;

private:
  std::string text_;
  std::size_t index_;
};

class Sentence {
public:
  Sentence() = default;
  Sentence(std::vector<std::string> words, std::string id);

  const std::vector<Token>& tokens() const { return tokens_; }
  const std::string& id() const { return id_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  // Tokens joined with single spaces.
  std::string text() const;

private:
  std::vector<Token> tokens_;
  std::string id_;
};

struct SentencePair {
  Sentence source;  // erroneous
  Sentence target;  // corrected
};

// One annotated edit over a source sentence. Spans are token offsets;
// start == end encodes an insertion before `start`, an empty correction with
// end > start encodes a deletion. The correction may be multi-word.
struct M2Edit {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string error_type;
  std::string correction;

  bool is_insertion() const { return start == end; }
  bool is_deletion() const { return correction.empty() && end > start; }

  bool operator==(const M2Edit&) const = default;
};

struct M2Annotation {
  int annotator_id = 0;
  std::vector<M2Edit> edits;  // sorted by start, non-overlapping

  bool operator==(const M2Annotation&) const = default;
};

struct M2Record {
  std::vector<std::string> source_tokens;
  std::vector<M2Annotation> annotations;  // sorted by annotator id

  bool operator==(const M2Record&) const = default;
};

// Token/label columns of one sentence. Lengths are validated at construction.
class GedRecord {
public:
  GedRecord(std::vector<std::string> tokens, std::vector<std::string> labels);

  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return tokens_.size(); }

  bool operator==(const GedRecord&) const = default;

private:
  std::vector<std::string> tokens_;
  std::vector<std::string> labels_;
};

// Readers normalize all text to NFC; writers emit UTF-8 with LF endings.
// Parse errors carry the file name and line number.

std::vector<SentencePair> read_parallel(const std::string& source_path,
                                        const std::string& target_path);

std::vector<Sentence> read_sentences(const std::string& path);

std::vector<M2Record> read_m2(const std::string& path);
std::vector<M2Record> parse_m2(const std::string& content, const std::string& name);
std::string write_m2(const std::vector<M2Record>& records);

std::vector<GedRecord> read_ged(const std::string& path);
std::vector<GedRecord> parse_ged(const std::string& content, const std::string& name);
std::string write_ged(const std::vector<GedRecord>& records);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace gec
