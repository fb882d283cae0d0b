#pragma once

#include <string>
#include <vector>

#include "gec/costs.hpp"

namespace gec {

// Toolkit configuration. Loaded from a `key = value` text file (one pair per
// line, `#` comments); CLI flags override file values. Unknown keys and
// negative numeric values are rejected.
struct Config {
  // align.*
  double align_default_substitution = 1.0;
  double align_default_indel = 1.0;
  double align_indel_bias = 0.1;
  double align_confusion_cost = 0.25;
  double align_diacritic_cost = 0.25;
  // Comma-separated two-character pairs, e.g. "أا,إا,يى,ةه".
  std::string align_confusion_pairs = "أا,إا,يى,ةه";
  // All characters in the string get the diacritic indel cost.
  std::string align_diacritics =
      "ًٌٍَُِّْٰـ";

  // annotate.*
  long annotate_threshold = 100;

  // m2.*
  double m2_timeout_secs = 30.0;
  int m2_max_unchanged = 2;
  double m2_beta = 0.5;
  bool m2_case_insensitive = true;

  // ged.*
  int ged_granularity = 43;

  int jobs = 1;

  // io.*: default paths used when the matching CLI flag is absent, so a
  // config file can serve as a full experiment manifest.
  std::string io_src;
  std::string io_tgt;
  std::string io_in;
  std::string io_out;
  std::string io_gold;
  std::string io_hyp;
  std::string io_pred;
  std::string io_model;
  std::string io_ged;

  // Applies `key = value` pairs from the file on top of the current values.
  void load_file(const std::string& path);
  void apply(const std::string& key, const std::string& value);

  // Builds the character cost matrix the align.* settings describe.
  CostMatrix make_cost_matrix() const;

  void validate() const;
};

}  // namespace gec
