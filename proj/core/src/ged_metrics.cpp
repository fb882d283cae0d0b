#include "gec/ged_metrics.hpp"

#include "gec/errors.hpp"

namespace gec {

GedScore ged_score(const std::vector<GedRecord>& gold,
                   const std::vector<GedRecord>& predicted) {
  if (gold.size() != predicted.size()) {
    throw ValidationError("gold has " + std::to_string(gold.size()) +
                          " sentences but predictions have " +
                          std::to_string(predicted.size()));
  }

  GedScore score;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != predicted[s].size()) {
      throw ValidationError("sentence " + std::to_string(s + 1) + ": gold has " +
                            std::to_string(gold[s].size()) + " labels but prediction has " +
                            std::to_string(predicted[s].size()));
    }
    for (std::size_t t = 0; t < gold[s].size(); ++t) {
      const auto& g = gold[s].labels()[t];
      const auto& p = predicted[s].labels()[t];
      ++score.total;
      if (g == p) {
        ++score.correct;
        ++score.per_class[g].tp;
      } else {
        ++score.per_class[g].fn;
        ++score.per_class[p].fp;
      }
    }
  }

  double sum_p = 0.0;
  double sum_r = 0.0;
  double sum_f = 0.0;
  for (auto& [label, cls] : score.per_class) {
    const long denom_p = cls.tp + cls.fp;
    const long denom_r = cls.tp + cls.fn;
    cls.precision = denom_p > 0 ? static_cast<double>(cls.tp) / static_cast<double>(denom_p) : 0.0;
    cls.recall = denom_r > 0 ? static_cast<double>(cls.tp) / static_cast<double>(denom_r) : 0.0;
    const double fdenom = 0.25 * cls.precision + cls.recall;
    cls.f05 = fdenom > 0.0 ? 1.25 * cls.precision * cls.recall / fdenom : 0.0;
    sum_p += cls.precision;
    sum_r += cls.recall;
    sum_f += cls.f05;
  }

  const auto classes = static_cast<double>(score.per_class.size());
  score.macro_precision = score.per_class.empty() ? 1.0 : sum_p / classes;
  score.macro_recall = score.per_class.empty() ? 1.0 : sum_r / classes;
  score.macro_f05 = score.per_class.empty() ? 1.0 : sum_f / classes;
  score.accuracy =
      score.total == 0 ? 1.0 : static_cast<double>(score.correct) / static_cast<double>(score.total);
  return score;
}

}  // namespace gec
