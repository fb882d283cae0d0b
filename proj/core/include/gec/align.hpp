#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gec/corpus.hpp"
#include "gec/costs.hpp"

namespace gec {

enum class OpKind { Keep, Replace, Insert, Delete, Merge, Split };

char op_kind_letter(OpKind kind);
OpKind op_kind_from_letter(char letter);

// Half-open token index range.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
  bool operator==(const Span&) const = default;
};

struct EditOp {
  OpKind kind = OpKind::Keep;
  Span source;  // empty for Insert
  Span target;  // empty for Delete
  double cost = 0.0;

  bool operator==(const EditOp&) const = default;
};

// Ordered edit script whose source spans partition the source indices and
// target spans partition the target indices.
struct Alignment {
  std::vector<EditOp> ops;
  double total_cost = 0.0;
};

// Minimal-cost character edit distance between two tokens. Symmetric, zero
// iff the strings are equal.
double token_distance(const std::string& a, const std::string& b, const CostMatrix& costs);

// Token-grid dynamic program producing Keep/Replace/Insert/Delete ops only.
// Replace cost is the character distance; whole-token insert/delete cost the
// summed per-character cost plus the tie-breaking bias. The backtrace prefers
// diagonal moves over delete over insert so output is deterministic.
Alignment align_basic(const SentencePair& pair, const CostMatrix& costs);

// Iterative greedy merge/split refinement: each pass fuses the contiguous run
// of non-keep ops whose fusion (many-to-one Merge or one-to-many Split) gives
// the largest strict drop in cumulative cost, until no fusion improves. The
// fused cost compares the concatenated source texts against the concatenated
// target texts.
Alignment refine_merge_split(const Alignment& alignment, const SentencePair& pair,
                             const CostMatrix& costs);

// align_basic followed by refine_merge_split.
Alignment extract_edits(const SentencePair& pair, const CostMatrix& costs);

// Source-index/target-index alignment links. Keep/Replace/Merge/Split ops
// contribute the cross product of their spans; Insert/Delete contribute none.
using LinkSet = std::set<std::pair<std::size_t, std::size_t>>;
LinkSet alignment_links(const Alignment& alignment);

struct AlignmentScore {
  double precision = 1.0;
  double recall = 1.0;
  double aer = 0.0;
};

// Precision/recall/AER of predicted links against gold sure links.
// Empty against empty scores perfect by convention.
AlignmentScore alignment_eval(const LinkSet& predicted, const LinkSet& gold);
AlignmentScore alignment_eval(const Alignment& predicted, const LinkSet& gold);

// Source (target) texts of an op joined by spaces; used by serialization and
// the annotators.
std::string op_source_text(const EditOp& op, const SentencePair& pair);
std::string op_target_text(const EditOp& op, const SentencePair& pair);

// One op per line: kind, source span, target span, cost, source text, target
// text; a blank line closes the sentence.
void append_alignment_tsv(std::string& out, const Alignment& alignment,
                          const SentencePair& pair);

// Non-keep ops as M2 edits with the op kind letter as the error type.
M2Record to_m2_record(const SentencePair& pair, const Alignment& alignment,
                      int annotator_id = 0);

}  // namespace gec
