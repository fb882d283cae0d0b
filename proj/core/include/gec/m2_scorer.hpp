#pragma once

#include <map>
#include <string>
#include <vector>

#include "gec/corpus.hpp"

namespace gec {

struct GecScore {
  long matched = 0;
  long proposed = 0;
  long gold = 0;
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  double f05 = 1.0;
  long timeouts = 0;
  std::map<int, long> annotator_picks;
};

struct M2Options {
  double beta = 0.5;
  int max_unchanged_words = 2;
  // Drops hypothesis edits that only change casing/spacing and matches
  // corrections case-insensitively. A no-op for Arabic.
  bool case_insensitive = true;
  // Per-sentence wall-clock budget; a sentence that exceeds it scores as if
  // the system had left it unchanged (zero proposed edits). <= 0 times out
  // immediately.
  double timeout_secs = 30.0;
  bool timeout_enabled = true;
  int jobs = 1;
};

// MaxMatch scoring: per sentence, builds the Levenshtein edit lattice between
// source and hypothesis (with transitive arcs over runs of up to
// max_unchanged_words kept words), picks the lattice edit sequence maximizing
// matches against gold edits via shortest-path search, and choosing per
// sentence the annotator that maximizes the sentence F_beta. Counts are
// accumulated corpus-wide. Zero proposed edits score precision 1 by
// convention.
GecScore m2_score(const std::vector<Sentence>& sources,
                  const std::vector<Sentence>& hypotheses,
                  const std::vector<M2Record>& gold, const M2Options& options = {});

// Fills precision/recall/f1/f05 from the matched/proposed/gold counts with
// the scorer's 0/0 -> 1 conventions.
void compute_prf(GecScore& score);

double f_beta(long matched, long proposed, long gold, double beta);

}  // namespace gec
