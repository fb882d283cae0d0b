#include "gec/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gec/errors.hpp"
#include "gec/unicode.hpp"

namespace gec {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> split_lines(const std::string& content) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : content) {
    if (ch == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) {
    if (cur.back() == '\r') cur.pop_back();
    lines.push_back(std::move(cur));
  }
  return lines;
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

std::vector<std::string> split_on(const std::string& text, const std::string& sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(text.substr(pos));
      break;
    }
    parts.push_back(text.substr(pos, next - pos));
    pos = next + sep.size();
  }
  return parts;
}

long parse_int(const std::string& s, const std::string& file, std::size_t line,
               const char* what) {
  long value = 0;
  const auto* begin = s.data();
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw FormatError(file, line, std::string("expected integer ") + what + ", got '" + s + "'");
  }
  return value;
}

}  // namespace

Token::Token(std::string text, std::size_t index)
    : text_(std::move(text)), index_(index) {
  if (text_.empty()) throw ValidationError("token text must be non-empty");
  for (char32_t cp : uni::decode_utf8(text_)) {
    if (uni::is_space(cp)) throw ValidationError("token text must not contain whitespace");
    if (cp < 0x20 || cp == 0x7F) throw ValidationError("token text must not contain control characters");
  }
}

Sentence::Sentence(std::vector<std::string> words, std::string id)
    : id_(std::move(id)) {
  tokens_.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    tokens_.emplace_back(uni::nfc_utf8(words[i]), i);
  }
}

std::string Sentence::text() const {
  std::string out;
  for (const auto& tok : tokens_) {
    if (!out.empty()) out.push_back(' ');
    out += tok.text();
  }
  return out;
}

GedRecord::GedRecord(std::vector<std::string> tokens, std::vector<std::string> labels)
    : tokens_(std::move(tokens)), labels_(std::move(labels)) {
  if (tokens_.size() != labels_.size()) {
    throw ValidationError("GED record has " + std::to_string(tokens_.size()) +
                          " tokens but " + std::to_string(labels_.size()) + " labels");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("error while writing '" + path + "'");
}

std::vector<Sentence> read_sentences(const std::string& path) {
  const auto lines = split_lines(read_file(path));
  std::vector<Sentence> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto words = split_ws(lines[i]);
    if (words.empty()) throw FormatError(path, i + 1, "empty line");
    out.emplace_back(std::move(words), std::to_string(i + 1));
  }
  return out;
}

std::vector<SentencePair> read_parallel(const std::string& source_path,
                                        const std::string& target_path) {
  auto sources = read_sentences(source_path);
  auto targets = read_sentences(target_path);
  if (sources.size() != targets.size()) {
    throw FormatError("line count mismatch " + std::to_string(sources.size()) +
                      " vs " + std::to_string(targets.size()));
  }
  std::vector<SentencePair> pairs;
  pairs.reserve(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    pairs.push_back({std::move(sources[i]), std::move(targets[i])});
  }
  return pairs;
}

std::vector<M2Record> parse_m2(const std::string& content, const std::string& name) {
  const auto lines = split_lines(content);
  std::vector<M2Record> records;

  M2Record current;
  bool open = false;
  // annotator id -> position in current.annotations
  auto annotation_for = [&](int id) -> M2Annotation& {
    for (auto& ann : current.annotations) {
      if (ann.annotator_id == id) return ann;
    }
    current.annotations.push_back(M2Annotation{id, {}});
    return current.annotations.back();
  };
  auto flush = [&]() {
    if (!open) return;
    std::sort(current.annotations.begin(), current.annotations.end(),
              [](const M2Annotation& a, const M2Annotation& b) {
                return a.annotator_id < b.annotator_id;
              });
    records.push_back(std::move(current));
    current = M2Record{};
    open = false;
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const std::size_t lineno = i + 1;
    if (is_blank(line)) {
      flush();
      continue;
    }
    if (line.rfind("S ", 0) == 0 || line == "S") {
      if (open) throw FormatError(name, lineno, "S-line without blank-line separator");
      auto words = split_ws(line.substr(1));
      if (words.empty()) throw FormatError(name, lineno, "S-line with no tokens");
      for (auto& w : words) w = uni::nfc_utf8(w);
      current.source_tokens = std::move(words);
      open = true;
      continue;
    }
    if (line.rfind("A ", 0) == 0) {
      if (!open) throw FormatError(name, lineno, "A-line before any S-line");
      const auto fields = split_on(line.substr(2), "|||");
      if (fields.size() != 6) {
        throw FormatError(name, lineno, "expected 6 |||-separated fields, got " +
                                            std::to_string(fields.size()));
      }
      const auto offsets = split_ws(fields[0]);
      if (offsets.size() != 2) throw FormatError(name, lineno, "expected two offsets");
      const int annotator = static_cast<int>(parse_int(fields[5], name, lineno, "annotator id"));
      if (fields[1] == "noop") {
        annotation_for(annotator);
        continue;
      }
      const long start = parse_int(offsets[0], name, lineno, "start offset");
      const long end = parse_int(offsets[1], name, lineno, "end offset");
      if (end < start) {
        throw FormatError(name, lineno, "end < start at line " + std::to_string(lineno));
      }
      if (start < 0 || static_cast<std::size_t>(end) > current.source_tokens.size()) {
        throw FormatError(name, lineno, "edit span [" + std::to_string(start) + ", " +
                                            std::to_string(end) + ") outside sentence of " +
                                            std::to_string(current.source_tokens.size()) +
                                            " tokens");
      }
      std::string correction = fields[2] == "-NONE-" ? "" : fields[2];
      auto& ann = annotation_for(annotator);
      M2Edit edit{static_cast<std::size_t>(start), static_cast<std::size_t>(end),
                  fields[1], uni::nfc_utf8(correction)};
      if (!ann.edits.empty() && edit.start < ann.edits.back().end) {
        throw FormatError(name, lineno,
                          "edit overlaps or precedes a previous edit of annotator " +
                              std::to_string(annotator));
      }
      ann.edits.push_back(std::move(edit));
      continue;
    }
    throw FormatError(name, lineno, "unrecognized line (expected S/A/blank)");
  }
  flush();
  return records;
}

std::vector<M2Record> read_m2(const std::string& path) {
  return parse_m2(read_file(path), path);
}

std::string write_m2(const std::vector<M2Record>& records) {
  std::string out;
  for (const auto& record : records) {
    out += "S";
    for (const auto& tok : record.source_tokens) {
      out += ' ';
      out += tok;
    }
    out += '\n';
    for (const auto& ann : record.annotations) {
      if (ann.edits.empty()) {
        out += "A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||" +
               std::to_string(ann.annotator_id) + "\n";
        continue;
      }
      for (const auto& edit : ann.edits) {
        out += "A " + std::to_string(edit.start) + " " + std::to_string(edit.end) +
               "|||" + edit.error_type + "|||" +
               (edit.correction.empty() ? "-NONE-" : edit.correction) +
               "|||REQUIRED|||-NONE-|||" + std::to_string(ann.annotator_id) + "\n";
      }
    }
    out += '\n';
  }
  return out;
}

std::vector<GedRecord> parse_ged(const std::string& content, const std::string& name) {
  const auto lines = split_lines(content);
  std::vector<GedRecord> records;
  std::vector<std::string> tokens;
  std::vector<std::string> labels;
  auto flush = [&]() {
    if (tokens.empty()) return;
    records.emplace_back(std::move(tokens), std::move(labels));
    tokens.clear();
    labels.clear();
  };
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (is_blank(line)) {
      flush();
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError(name, i + 1, "expected token<TAB>label");
    }
    const std::string tok = line.substr(0, tab);
    const std::string label = line.substr(tab + 1);
    if (tok.empty() || label.empty()) {
      throw FormatError(name, i + 1, "empty token or label");
    }
    tokens.push_back(uni::nfc_utf8(tok));
    labels.push_back(label);
  }
  flush();
  return records;
}

std::vector<GedRecord> read_ged(const std::string& path) {
  return parse_ged(read_file(path), path);
}

std::string write_ged(const std::vector<GedRecord>& records) {
  std::string out;
  for (const auto& record : records) {
    for (std::size_t i = 0; i < record.size(); ++i) {
      out += record.tokens()[i];
      out += '\t';
      out += record.labels()[i];
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

}  // namespace gec
