#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gec/align.hpp"
#include "gec/corpus.hpp"

namespace gec {

// Error-tag component set, e.g. {"O","X"} rendered canonically as "O+X".
// The main ALC classes are single letters (O, M, X, S, P); structural
// components (Merge, Split, Delete, Insert) come from the op kind; C marks a
// kept token and UNK an unclassifiable edit.
struct TagSet {
  std::set<std::string> components;

  // Sorted components joined with '+'.
  std::string canonical() const;

  bool operator==(const TagSet&) const = default;
};

struct TypedEdit {
  EditOp op;
  TagSet tags;
  // Set when an ingested tag was not recognized as a known component.
  bool external_unknown = false;
};

struct AnnotatedPair {
  SentencePair pair;
  std::vector<TypedEdit> edits;
};

// Deterministic built-in subset classifier. Keeps map to C, structural ops to
// their structural tag; replacements are P (punctuation-only or edge
// punctuation), O (differ only by confusion pairs / diacritics) or UNK.
TagSet classify_builtin(const EditOp& op, const SentencePair& pair, const CostMatrix& costs);

AnnotatedPair annotate_builtin(const SentencePair& pair, const Alignment& alignment,
                               const CostMatrix& costs);

// Merges external per-edit component tags (one entry per non-keep op, in
// order, compounds as "O+X") with the structural tags of the alignment.
AnnotatedPair ingest_annotations(const SentencePair& pair, const Alignment& alignment,
                                 const std::vector<std::string>& external_tags);

enum class Granularity { Full43 = 43, Main13 = 13, Binary2 = 2 };

Granularity granularity_from_int(int value);

// Labels the 43-class space can always express, regardless of the frequency
// threshold.
bool is_structural_label(const std::string& label);

// Tag combinations observed on replace/split edits across a corpus.
using TagCounts = std::map<std::string, long>;

TagCounts count_tag_frequencies(const std::vector<AnnotatedPair>& corpus);

// Combinations with count > threshold; structural labels are implicitly
// modeled and need not be listed.
std::set<std::string> select_modeled(const TagCounts& counts, long threshold);

std::string write_modeled(const std::set<std::string>& modeled);
std::set<std::string> parse_modeled(const std::string& content);

// 43-class label -> 13-class entry. Compounds reduce to their main-class
// combination when the 13-class inventory lists it, else to the dominant
// single class (precedence P > O > M > X > S), else UNK.
std::string reduce_to_13(const std::string& label43);
// Any non-C label becomes E.
std::string reduce_to_2(const std::string& label);
std::string reduce_label(const std::string& label43, Granularity granularity);

// One label per SOURCE token: C for keeps, Merge-B/Merge-I across merge
// spans, Delete for deletions, the edit's combination for replace/split
// (reduced to UNK at 43-class when not modeled), nothing for insertions.
GedRecord project_ged_labels(const AnnotatedPair& annotated, Granularity granularity,
                             const std::set<std::string>& modeled);

struct ResolveResult {
  Sentence sentence;
  int orphan_merge_i = 0;  // Merge-I labels without a preceding Merge-B
};

// Applies detected merge and delete labels to the source: Delete tokens are
// dropped and Merge-B (Merge-I)* runs concatenated. Orphan Merge-I tokens
// pass through and are counted.
ResolveResult resolve_detections(const Sentence& source, const std::vector<std::string>& labels);

struct DistributionRow {
  std::string label;
  long count = 0;
  double percent = 0.0;
};

// Error-type distribution over all non-keep edits, either by full combination
// or by component membership (an edit tagged {O,X} counts under both O and X).
std::vector<DistributionRow> error_distribution(const std::vector<AnnotatedPair>& corpus,
                                                bool by_component);

// Non-keep ops as M2 edits typed with their canonical tag.
M2Record to_m2_record(const AnnotatedPair& annotated, int annotator_id = 0);

// Tag file: one line per sentence, space-separated canonical tags, one per
// non-keep edit; an empty line means no edits. This is also the ingestion
// format for external annotator output.
std::vector<std::vector<std::string>> read_tag_lines(const std::string& path);
std::string write_tag_line(const AnnotatedPair& annotated);

}  // namespace gec
