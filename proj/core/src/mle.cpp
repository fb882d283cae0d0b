#include "gec/mle.hpp"

#include <charconv>

#include "gec/errors.hpp"
#include "gec/unicode.hpp"

namespace gec {

namespace {

constexpr char kSep = '\x1f';

std::string unigram_key(const std::string& word, const std::string& etype) {
  return word + kSep + etype;
}

std::string bigram_key(const std::string& prev, const std::string& word,
                       const std::string& etype) {
  return prev + kSep + word + kSep + etype;
}

std::optional<std::string> best_of(const std::map<std::string, long>& corrections) {
  if (corrections.empty()) return std::nullopt;
  const std::string* best = nullptr;
  long best_count = 0;
  for (const auto& [correction, count] : corrections) {
    if (best == nullptr || count > best_count) {
      best = &correction;
      best_count = count;
    }
  }
  return *best;
}

void merge_counts(std::map<std::string, long>& into, const std::map<std::string, long>& from) {
  for (const auto& [correction, count] : from) into[correction] += count;
}

std::vector<std::string> split_space(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ' ') {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

void MleModel::add(const Event& event, long count) {
  if (count < 1) throw ValidationError("event count must be >= 1");
  events_[event] += count;
  by_unigram_[unigram_key(event.word, event.etype)][event.correction] += count;
  by_bigram_[bigram_key(event.prev, event.word, event.etype)][event.correction] += count;
  if (event.etype != kAnyTag) tagged_ = true;
}

std::optional<std::string> MleModel::lookup_bigram(
    const std::string& prev, const std::string& word,
    const std::optional<std::string>& etype) const {
  if (etype) {
    const auto it = by_bigram_.find(bigram_key(prev, word, *etype));
    if (it == by_bigram_.end()) return std::nullopt;
    return best_of(it->second);
  }
  // Marginalize over error types.
  std::map<std::string, long> merged;
  const auto prefix = prev + kSep + word + kSep;
  for (auto it = by_bigram_.lower_bound(prefix);
       it != by_bigram_.end() && it->first.compare(0, prefix.size(), prefix) == 0; ++it) {
    merge_counts(merged, it->second);
  }
  return best_of(merged);
}

std::optional<std::string> MleModel::lookup_unigram(
    const std::string& word, const std::optional<std::string>& etype) const {
  if (etype) {
    const auto it = by_unigram_.find(unigram_key(word, *etype));
    if (it == by_unigram_.end()) return std::nullopt;
    return best_of(it->second);
  }
  std::map<std::string, long> merged;
  const auto prefix = word + kSep;
  for (auto it = by_unigram_.lower_bound(prefix);
       it != by_unigram_.end() && it->first.compare(0, prefix.size(), prefix) == 0; ++it) {
    merge_counts(merged, it->second);
  }
  return best_of(merged);
}

std::string MleModel::serialize() const {
  std::string out = "# gec-mle 1\n";
  for (const auto& [event, count] : events_) {
    out += event.prev;
    out += '\t';
    out += event.word;
    out += '\t';
    out += event.etype;
    out += '\t';
    out += event.correction;
    out += '\t';
    out += std::to_string(count);
    out += '\n';
  }
  return out;
}

MleModel MleModel::parse(const std::string& content, const std::string& name) {
  MleModel model;
  std::size_t pos = 0;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string::npos) nl = content.size();
    std::string line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "# gec-mle 1") {
        throw FormatError(name, lineno, "expected model header '# gec-mle 1'");
      }
      saw_header = true;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t fpos = 0;
    while (true) {
      const auto tab = line.find('\t', fpos);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(fpos));
        break;
      }
      fields.push_back(line.substr(fpos, tab - fpos));
      fpos = tab + 1;
    }
    if (fields.size() != 5) {
      throw FormatError(name, lineno, "expected 5 tab-separated fields, got " +
                                          std::to_string(fields.size()));
    }
    long count = 0;
    const auto [ptr, ec] =
        std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(), count);
    if (ec != std::errc{} || ptr != fields[4].data() + fields[4].size() || count < 1) {
      throw FormatError(name, lineno, "invalid count '" + fields[4] + "'");
    }
    model.add({uni::nfc_utf8(fields[0]), uni::nfc_utf8(fields[1]), fields[2],
               uni::nfc_utf8(fields[3])},
              count);
  }
  if (!saw_header) throw FormatError(name, 1, "missing model header '# gec-mle 1'");
  return model;
}

MleModel mle_train(const std::vector<AnnotatedPair>& corpus, bool use_tags) {
  MleModel model;
  for (const auto& annotated : corpus) {
    const auto& src = annotated.pair.source.tokens();
    for (const auto& edit : annotated.edits) {
      const auto& op = edit.op;
      if (op.kind == OpKind::Insert) continue;
      MleModel::Event event;
      event.prev = op.source.begin == 0 ? MleModel::kBoundary
                                        : src[op.source.begin - 1].text();
      event.word = op_source_text(op, annotated.pair);
      event.correction = op_target_text(op, annotated.pair);
      if (!use_tags) {
        event.etype = MleModel::kAnyTag;
      } else if (op.kind == OpKind::Merge) {
        event.etype = "Merge";
      } else {
        event.etype = edit.tags.canonical();
      }
      model.add(event);
    }
  }
  return model;
}

namespace {

std::optional<std::string> lookup_with_backoff(const MleModel& model, const std::string& prev,
                                               const std::string& word,
                                               const std::optional<std::string>& etype) {
  if (auto hit = model.lookup_bigram(prev, word, etype)) return hit;
  return model.lookup_unigram(word, etype);
}

}  // namespace

Sentence mle_apply(const MleModel& model, const Sentence& sentence,
                   const std::vector<std::string>* labels) {
  if (labels != nullptr && labels->size() != sentence.size()) {
    throw ValidationError("sentence " + sentence.id() + ": " +
                          std::to_string(labels->size()) + " labels for " +
                          std::to_string(sentence.size()) + " tokens");
  }

  const bool use_labels = labels != nullptr && model.tagged();
  const auto& tokens = sentence.tokens();
  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  while (i < tokens.size()) {
    const std::string prev = i == 0 ? MleModel::kBoundary : tokens[i - 1].text();

    if (labels != nullptr && (*labels)[i] == "Merge-B") {
      std::size_t run_end = i + 1;
      while (run_end < tokens.size() && (*labels)[run_end] == "Merge-I") ++run_end;
      bool consumed = false;
      for (std::size_t len = run_end - i; len >= 2; --len) {
        std::string phrase = tokens[i].text();
        for (std::size_t k = i + 1; k < i + len; ++k) {
          phrase += ' ';
          phrase += tokens[k].text();
        }
        const std::optional<std::string> phrase_type =
            use_labels ? std::optional<std::string>("Merge") : std::nullopt;
        if (auto hit = lookup_with_backoff(model, prev, phrase, phrase_type)) {
          for (auto& word : split_space(*hit)) out.push_back(std::move(word));
          i += len;
          consumed = true;
          break;
        }
      }
      if (consumed) continue;
    }

    const std::optional<std::string> etype =
        use_labels ? std::optional<std::string>((*labels)[i]) : std::nullopt;
    if (auto hit = lookup_with_backoff(model, prev, tokens[i].text(), etype)) {
      for (auto& word : split_space(*hit)) out.push_back(std::move(word));
    } else {
      out.push_back(tokens[i].text());
    }
    ++i;
  }
  return Sentence(std::move(out), sentence.id());
}

}  // namespace gec
