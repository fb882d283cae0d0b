#pragma once

#include <map>
#include <string>
#include <vector>

#include "gec/corpus.hpp"

namespace gec {

struct ClassScore {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f05 = 0.0;
};

struct GedScore {
  std::map<std::string, ClassScore> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f05 = 0.0;
  double accuracy = 0.0;
  long total = 0;
  long correct = 0;
};

// Macro-averaged one-vs-rest scoring over the classes present in gold or
// predicted. A class with no predictions scores precision 0 (and recall 0
// when it has no gold), so missing a gold class is penalized.
GedScore ged_score(const std::vector<GedRecord>& gold,
                   const std::vector<GedRecord>& predicted);

}  // namespace gec
