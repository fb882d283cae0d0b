#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gec/annotate.hpp"
#include "gec/corpus.hpp"

namespace gec {

// Bigram maximum-likelihood lookup corrector: counts of
// (previous word, erroneous word, error type) -> correction, with unigram
// backoff and pass-through on misses. Words may be multi-token phrases when
// they come from merge edits; corrections may be empty (deletion) or
// multi-word (split).
class MleModel {
public:
  static constexpr const char* kBoundary = "<s>";
  static constexpr const char* kAnyTag = "ANY";

  struct Event {
    std::string prev;
    std::string word;
    std::string etype;
    std::string correction;

    auto operator<=>(const Event&) const = default;
  };

  void add(const Event& event, long count = 1);

  bool empty() const { return events_.empty(); }
  std::size_t size() const { return events_.size(); }

  // False when every event was trained under the ANY wildcard; label-aware
  // application then falls back to marginalized lookups.
  bool tagged() const { return tagged_; }

  // Argmax correction for the bigram key, if observed. A null etype
  // marginalizes counts over error types. Ties break by highest count then
  // lexicographically smallest correction.
  std::optional<std::string> lookup_bigram(const std::string& prev, const std::string& word,
                                           const std::optional<std::string>& etype) const;
  std::optional<std::string> lookup_unigram(const std::string& word,
                                            const std::optional<std::string>& etype) const;

  // Versioned sorted TSV: prev, word, etype, correction, count.
  std::string serialize() const;
  static MleModel parse(const std::string& content, const std::string& name);

  const std::map<Event, long>& events() const { return events_; }

private:
  std::map<Event, long> events_;
  std::map<std::string, std::map<std::string, long>> by_unigram_;  // key: word \x1f etype
  std::map<std::string, std::map<std::string, long>> by_bigram_;   // key: prev \x1f word \x1f etype
  bool tagged_ = false;
};

// Accumulates one event per edit (keep edits teach identity). Error types are
// the edits' canonical tags, except merges which train under plain "Merge";
// with use_tags off everything trains under the ANY wildcard. Insertions have
// no source word and contribute nothing.
MleModel mle_train(const std::vector<AnnotatedPair>& corpus, bool use_tags = true);

// Left-to-right application with strict bigram -> unigram -> pass-through
// backoff. Context is always the original previous source token. When labels
// are given, Merge-B/Merge-I runs are first looked up as phrases (longest run
// first) under the "Merge" type.
Sentence mle_apply(const MleModel& model, const Sentence& sentence,
                   const std::vector<std::string>* labels = nullptr);

}  // namespace gec
