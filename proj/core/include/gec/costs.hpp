#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>

namespace gec {

// Character-level edit costs for the weighted Levenshtein distance.
// Substitution is symmetric with cost(a,a) == 0; insertion/deletion cost is
// per character. The defaults follow the dominant Arabic confusion patterns:
// hamzated/bare alef, final yeh/alef maksura and teh marbuta/heh substitute
// cheaply, and harakat insert/delete cheaply.
class CostMatrix {
public:
  // Unit costs plus the Arabic confusion pairs and diacritics at 0.25.
  static CostMatrix with_defaults();

  // Plain unit costs, no special pairs. Mostly useful for tests.
  static CostMatrix unit();

  double substitution(char32_t a, char32_t b) const;
  double indel(char32_t c) const;

  // Flat tie-breaking cost added to every whole-token insert/delete so that
  // one replace beats a delete+insert of comparable size.
  double token_indel_bias() const { return token_indel_bias_; }

  double default_substitution() const { return default_substitution_; }
  double default_indel() const { return default_indel_; }

  void set_default_substitution(double cost);
  void set_default_indel(double cost);
  void set_token_indel_bias(double cost);
  void set_pair(char32_t a, char32_t b, double cost);
  void set_char_indel(char32_t c, double cost);

  // The configured cheap-substitution pairs and cheap-indel characters; the
  // error classifier uses the same sets to decide orthographic variants.
  const std::set<std::pair<char32_t, char32_t>>& confusion_pairs() const {
    return confusion_pairs_;
  }
  const std::set<char32_t>& cheap_indel_chars() const { return cheap_indel_chars_; }

private:
  double default_substitution_ = 1.0;
  double default_indel_ = 1.0;
  double token_indel_bias_ = 0.1;
  std::map<std::pair<char32_t, char32_t>, double> pair_cost_;
  std::map<char32_t, double> indel_cost_;
  std::set<std::pair<char32_t, char32_t>> confusion_pairs_;
  std::set<char32_t> cheap_indel_chars_;
};

}  // namespace gec
