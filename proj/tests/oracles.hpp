// Independent reference implementations used only by tests: plain recursion
// and exhaustive enumeration instead of the library's dynamic programs.
#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gec/align.hpp"
#include "gec/corpus.hpp"
#include "gec/costs.hpp"
#include "gec/unicode.hpp"

namespace oracle {

inline double char_edit_distance_rec(const std::u32string& a, const std::u32string& b,
                                     std::size_t i, std::size_t j,
                                     const gec::CostMatrix& costs,
                                     std::map<std::pair<std::size_t, std::size_t>, double>& memo) {
  if (i == a.size() && j == b.size()) return 0.0;
  const auto key = std::make_pair(i, j);
  const auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  double best = std::numeric_limits<double>::infinity();
  if (i < a.size() && j < b.size()) {
    best = std::min(best, costs.substitution(a[i], b[j]) +
                              char_edit_distance_rec(a, b, i + 1, j + 1, costs, memo));
  }
  if (i < a.size()) {
    best = std::min(best,
                    costs.indel(a[i]) + char_edit_distance_rec(a, b, i + 1, j, costs, memo));
  }
  if (j < b.size()) {
    best = std::min(best,
                    costs.indel(b[j]) + char_edit_distance_rec(a, b, i, j + 1, costs, memo));
  }
  memo[key] = best;
  return best;
}

inline double char_edit_distance(const std::string& a, const std::string& b,
                                 const gec::CostMatrix& costs) {
  const auto ca = gec::uni::decode_utf8(a);
  const auto cb = gec::uni::decode_utf8(b);
  std::map<std::pair<std::size_t, std::size_t>, double> memo;
  return char_edit_distance_rec(ca, cb, 0, 0, costs, memo);
}

inline double token_indel(const std::string& token, const gec::CostMatrix& costs) {
  double total = costs.token_indel_bias();
  for (char32_t c : gec::uni::decode_utf8(token)) total += costs.indel(c);
  return total;
}

// Exhaustive enumeration over monotone one-to-one K/R/I/D alignments. Token
// costs are precomputed; the search itself tries every path.
struct BasicCostTables {
  std::vector<std::vector<double>> sub;
  std::vector<double> del;
  std::vector<double> ins;
};

inline double basic_min_cost_rec(const BasicCostTables& t, std::size_t i, std::size_t j) {
  if (i == t.del.size() && j == t.ins.size()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  if (i < t.del.size() && j < t.ins.size()) {
    best = std::min(best, t.sub[i][j] + basic_min_cost_rec(t, i + 1, j + 1));
  }
  if (i < t.del.size()) {
    best = std::min(best, t.del[i] + basic_min_cost_rec(t, i + 1, j));
  }
  if (j < t.ins.size()) {
    best = std::min(best, t.ins[j] + basic_min_cost_rec(t, i, j + 1));
  }
  return best;
}

inline double basic_min_cost(const std::vector<std::string>& src,
                             const std::vector<std::string>& tgt,
                             const gec::CostMatrix& costs) {
  BasicCostTables t;
  t.sub.assign(src.size(), std::vector<double>(tgt.size(), 0.0));
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = 0; j < tgt.size(); ++j) {
      t.sub[i][j] = char_edit_distance(src[i], tgt[j], costs);
    }
  }
  for (const auto& w : src) t.del.push_back(token_indel(w, costs));
  for (const auto& w : tgt) t.ins.push_back(token_indel(w, costs));
  return basic_min_cost_rec(t, 0, 0);
}

inline std::string concat(const std::vector<std::string>& words, std::size_t begin,
                          std::size_t end) {
  std::string out;
  for (std::size_t k = begin; k < end; ++k) out += words[k];
  return out;
}

// Exhaustive enumeration allowing many-to-one and one-to-many blocks too.
inline double merge_split_min_cost_rec(const std::vector<std::string>& src,
                                       const std::vector<std::string>& tgt, std::size_t i,
                                       std::size_t j, const gec::CostMatrix& costs) {
  if (i == src.size() && j == tgt.size()) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  if (i < src.size() && j < tgt.size()) {
    best = std::min(best, char_edit_distance(src[i], tgt[j], costs) +
                              merge_split_min_cost_rec(src, tgt, i + 1, j + 1, costs));
    for (std::size_t a = 2; i + a <= src.size(); ++a) {
      best = std::min(best, char_edit_distance(concat(src, i, i + a), tgt[j], costs) +
                                merge_split_min_cost_rec(src, tgt, i + a, j + 1, costs));
    }
    for (std::size_t b = 2; j + b <= tgt.size(); ++b) {
      best = std::min(best, char_edit_distance(src[i], concat(tgt, j, j + b), costs) +
                                merge_split_min_cost_rec(src, tgt, i + 1, j + b, costs));
    }
  }
  if (i < src.size()) {
    best = std::min(best, token_indel(src[i], costs) +
                              merge_split_min_cost_rec(src, tgt, i + 1, j, costs));
  }
  if (j < tgt.size()) {
    best = std::min(best, token_indel(tgt[j], costs) +
                              merge_split_min_cost_rec(src, tgt, i, j + 1, costs));
  }
  return best;
}

inline double merge_split_min_cost(const std::vector<std::string>& src,
                                   const std::vector<std::string>& tgt,
                                   const gec::CostMatrix& costs) {
  return merge_split_min_cost_rec(src, tgt, 0, 0, costs);
}

}  // namespace oracle
