#include "gec/costs.hpp"

#include <algorithm>

#include "gec/errors.hpp"
#include "gec/unicode.hpp"

namespace gec {

namespace {

constexpr char32_t kAlef = 0x0627;
constexpr char32_t kAlefHamzaAbove = 0x0623;
constexpr char32_t kAlefHamzaBelow = 0x0625;
constexpr char32_t kYeh = 0x064A;
constexpr char32_t kAlefMaksura = 0x0649;
constexpr char32_t kTehMarbuta = 0x0629;
constexpr char32_t kHeh = 0x0647;

std::pair<char32_t, char32_t> ordered(char32_t a, char32_t b) {
  return a <= b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

CostMatrix CostMatrix::unit() { return CostMatrix{}; }

CostMatrix CostMatrix::with_defaults() {
  CostMatrix costs;
  const double confusion = 0.25;
  costs.set_pair(kAlefHamzaAbove, kAlef, confusion);
  costs.set_pair(kAlefHamzaBelow, kAlef, confusion);
  costs.set_pair(kYeh, kAlefMaksura, confusion);
  costs.set_pair(kTehMarbuta, kHeh, confusion);
  for (char32_t c = 0x064B; c <= 0x0652; ++c) costs.set_char_indel(c, confusion);
  costs.set_char_indel(0x0670, confusion);  // superscript alef
  costs.set_char_indel(0x0640, confusion);  // tatweel
  return costs;
}

double CostMatrix::substitution(char32_t a, char32_t b) const {
  if (a == b) return 0.0;
  const auto it = pair_cost_.find(ordered(a, b));
  return it != pair_cost_.end() ? it->second : default_substitution_;
}

double CostMatrix::indel(char32_t c) const {
  const auto it = indel_cost_.find(c);
  return it != indel_cost_.end() ? it->second : default_indel_;
}

void CostMatrix::set_default_substitution(double cost) {
  if (cost < 0.0) throw ValidationError("substitution cost must be non-negative");
  default_substitution_ = cost;
}

void CostMatrix::set_default_indel(double cost) {
  if (cost < 0.0) throw ValidationError("indel cost must be non-negative");
  default_indel_ = cost;
}

void CostMatrix::set_token_indel_bias(double cost) {
  if (cost < 0.0) throw ValidationError("token indel bias must be non-negative");
  token_indel_bias_ = cost;
}

void CostMatrix::set_pair(char32_t a, char32_t b, double cost) {
  if (cost < 0.0) throw ValidationError("substitution cost must be non-negative");
  if (a == b) throw ValidationError("cannot set a substitution cost for identical characters");
  pair_cost_[ordered(a, b)] = cost;
  if (cost < default_substitution_) {
    confusion_pairs_.insert(ordered(a, b));
  } else {
    confusion_pairs_.erase(ordered(a, b));
  }
}

void CostMatrix::set_char_indel(char32_t c, double cost) {
  if (cost < 0.0) throw ValidationError("indel cost must be non-negative");
  indel_cost_[c] = cost;
  if (cost < default_indel_) {
    cheap_indel_chars_.insert(c);
  } else {
    cheap_indel_chars_.erase(c);
  }
}

}  // namespace gec
