#include "gec/align.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <limits>

#include "gec/errors.hpp"
#include "gec/unicode.hpp"

namespace gec {

char op_kind_letter(OpKind kind) {
  switch (kind) {
    case OpKind::Keep: return 'K';
    case OpKind::Replace: return 'R';
    case OpKind::Insert: return 'I';
    case OpKind::Delete: return 'D';
    case OpKind::Merge: return 'M';
    case OpKind::Split: return 'S';
  }
  return '?';
}

OpKind op_kind_from_letter(char letter) {
  switch (letter) {
    case 'K': return OpKind::Keep;
    case 'R': return OpKind::Replace;
    case 'I': return OpKind::Insert;
    case 'D': return OpKind::Delete;
    case 'M': return OpKind::Merge;
    case 'S': return OpKind::Split;
    default: throw ValidationError(std::string("unknown edit op kind '") + letter + "'");
  }
}

namespace {

double char_distance(const std::u32string& a, const std::u32string& b,
                     const CostMatrix& costs) {
  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<double> prev(m + 1, 0.0);
  std::vector<double> cur(m + 1, 0.0);
  for (std::size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1] + costs.indel(b[j - 1]);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = prev[0] + costs.indel(a[i - 1]);
    for (std::size_t j = 1; j <= m; ++j) {
      const double sub = prev[j - 1] + costs.substitution(a[i - 1], b[j - 1]);
      const double del = prev[j] + costs.indel(a[i - 1]);
      const double ins = cur[j - 1] + costs.indel(b[j - 1]);
      cur[j] = std::min({sub, del, ins});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

double token_indel_cost(const std::u32string& cps, const CostMatrix& costs) {
  double total = costs.token_indel_bias();
  for (char32_t c : cps) total += costs.indel(c);
  return total;
}

std::vector<std::u32string> decode_tokens(const Sentence& sentence) {
  std::vector<std::u32string> out;
  out.reserve(sentence.size());
  for (const auto& tok : sentence.tokens()) out.push_back(uni::decode_utf8(tok.text()));
  return out;
}

}  // namespace

double token_distance(const std::string& a, const std::string& b, const CostMatrix& costs) {
  return char_distance(uni::decode_utf8(a), uni::decode_utf8(b), costs);
}

Alignment align_basic(const SentencePair& pair, const CostMatrix& costs) {
  const auto src = decode_tokens(pair.source);
  const auto tgt = decode_tokens(pair.target);
  const std::size_t n = src.size();
  const std::size_t m = tgt.size();

  std::vector<double> del_cost(n);
  std::vector<double> ins_cost(m);
  for (std::size_t i = 0; i < n; ++i) del_cost[i] = token_indel_cost(src[i], costs);
  for (std::size_t j = 0; j < m; ++j) ins_cost[j] = token_indel_cost(tgt[j], costs);

  std::vector<std::vector<double>> sub(n, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      sub[i][j] = src[i] == tgt[j] ? 0.0 : char_distance(src[i], tgt[j], costs);
    }
  }

  std::vector<std::vector<double>> dp(n + 1, std::vector<double>(m + 1, 0.0));
  for (std::size_t i = 1; i <= n; ++i) dp[i][0] = dp[i - 1][0] + del_cost[i - 1];
  for (std::size_t j = 1; j <= m; ++j) dp[0][j] = dp[0][j - 1] + ins_cost[j - 1];
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      dp[i][j] = std::min({dp[i - 1][j - 1] + sub[i - 1][j - 1],
                           dp[i - 1][j] + del_cost[i - 1],
                           dp[i][j - 1] + ins_cost[j - 1]});
    }
  }

  // Backtrace preferring diagonal over delete over insert.
  std::vector<EditOp> rev;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && dp[i][j] == dp[i - 1][j - 1] + sub[i - 1][j - 1]) {
      const bool equal = src[i - 1] == tgt[j - 1];
      rev.push_back({equal ? OpKind::Keep : OpKind::Replace,
                     {i - 1, i},
                     {j - 1, j},
                     sub[i - 1][j - 1]});
      --i, --j;
    } else if (i > 0 && dp[i][j] == dp[i - 1][j] + del_cost[i - 1]) {
      rev.push_back({OpKind::Delete, {i - 1, i}, {j, j}, del_cost[i - 1]});
      --i;
    } else {
      assert(j > 0);
      rev.push_back({OpKind::Insert, {i, i}, {j - 1, j}, ins_cost[j - 1]});
      --j;
    }
  }
  std::reverse(rev.begin(), rev.end());

  Alignment result;
  result.ops = std::move(rev);
  for (const auto& op : result.ops) result.total_cost += op.cost;
  return result;
}

namespace {

// Optimal alignment of one run's spans allowing merges (>=2 source tokens to
// one target token) and splits (one source token to >=2 target tokens)
// besides the one-to-one moves. Never produces many-to-many blocks. Offsets
// in the returned ops are absolute.
struct RegionResult {
  std::vector<EditOp> ops;
  double cost = 0.0;
};

RegionResult align_region(const std::vector<std::u32string>& src, Span src_span,
                          const std::vector<std::u32string>& tgt, Span tgt_span,
                          const CostMatrix& costs) {
  const std::size_t n = src_span.size();
  const std::size_t m = tgt_span.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<std::vector<double>> dp(n + 1, std::vector<double>(m + 1, kInf));
  std::vector<std::vector<int>> fusions(n + 1, std::vector<int>(m + 1, 0));
  // move to reach (i, j): lengths of the consumed source/target block
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> from(
      n + 1, std::vector<std::pair<std::size_t, std::size_t>>(m + 1, {0, 0}));
  dp[0][0] = 0.0;

  constexpr double kTie = 1e-9;
  auto relax = [&](std::size_t i, std::size_t j, std::size_t di, std::size_t dj,
                   double cost, bool is_fusion) {
    const double candidate = dp[i][j] + cost;
    const int candidate_fusions = fusions[i][j] + (is_fusion ? 1 : 0);
    double& current = dp[i + di][j + dj];
    int& current_fusions = fusions[i + di][j + dj];
    // lower cost wins; near-ties go to the path with fewer fusions
    if (candidate < current - kTie ||
        (candidate < current + kTie && candidate_fusions < current_fusions)) {
      current = candidate;
      current_fusions = candidate_fusions;
      from[i + di][j + dj] = {di, dj};
    }
  };

  // Fusion moves are handicapped by the indel bias they displace so that a
  // merge/split must win on reused characters, not on the R-vs-D+I
  // tie-breaker. Op costs stay the plain fused distance.
  const double fusion_handicap = costs.token_indel_bias();

  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (dp[i][j] == kInf) continue;
      const std::size_t si = src_span.begin + i;
      const std::size_t tj = tgt_span.begin + j;
      if (i < n && j < m) {
        relax(i, j, 1, 1, src[si] == tgt[tj] ? 0.0 : char_distance(src[si], tgt[tj], costs),
              false);
      }
      if (i < n) relax(i, j, 1, 0, token_indel_cost(src[si], costs), false);
      if (j < m) relax(i, j, 0, 1, token_indel_cost(tgt[tj], costs), false);
      if (j < m) {
        std::u32string merged = i < n ? src[si] : std::u32string();
        for (std::size_t a = 2; i + a <= n; ++a) {
          merged += src[si + a - 1];
          relax(i, j, a, 1,
                char_distance(merged, tgt[tj], costs) +
                    fusion_handicap * static_cast<double>(a - 1),
                true);
        }
      }
      if (i < n) {
        std::u32string split = j < m ? tgt[tj] : std::u32string();
        for (std::size_t b = 2; j + b <= m; ++b) {
          split += tgt[tj + b - 1];
          relax(i, j, 1, b,
                char_distance(src[si], split, costs) +
                    fusion_handicap * static_cast<double>(b - 1),
                true);
        }
      }
    }
  }

  // Backtrace; op costs are recomputed without the fusion handicap.
  RegionResult result;
  std::size_t i = n;
  std::size_t j = m;
  std::vector<EditOp> rev;
  while (i > 0 || j > 0) {
    const auto [di, dj] = from[i][j];
    const Span s{src_span.begin + i - di, src_span.begin + i};
    const Span t{tgt_span.begin + j - dj, tgt_span.begin + j};
    OpKind kind;
    double cost = 0.0;
    if (di == 1 && dj == 1) {
      if (src[s.begin] == tgt[t.begin]) {
        kind = OpKind::Keep;
      } else {
        kind = OpKind::Replace;
        cost = char_distance(src[s.begin], tgt[t.begin], costs);
      }
    } else if (di == 1 && dj == 0) {
      kind = OpKind::Delete;
      cost = token_indel_cost(src[s.begin], costs);
    } else if (di == 0 && dj == 1) {
      kind = OpKind::Insert;
      cost = token_indel_cost(tgt[t.begin], costs);
    } else {
      kind = dj == 1 ? OpKind::Merge : OpKind::Split;
      std::u32string left;
      for (std::size_t k = s.begin; k < s.end; ++k) left += src[k];
      std::u32string right;
      for (std::size_t k = t.begin; k < t.end; ++k) right += tgt[k];
      cost = char_distance(left, right, costs);
    }
    rev.push_back({kind, s, t, cost});
    result.cost += cost;
    i -= di;
    j -= dj;
  }
  std::reverse(rev.begin(), rev.end());
  result.ops = std::move(rev);
  return result;
}

}  // namespace

Alignment refine_merge_split(const Alignment& alignment, const SentencePair& pair,
                             const CostMatrix& costs) {
  constexpr double kMinGain = 1e-9;
  const auto src = decode_tokens(pair.source);
  const auto tgt = decode_tokens(pair.target);

  std::vector<EditOp> ops = alignment.ops;
  while (true) {
    // maximal contiguous runs of non-keep ops; re-optimizing a maximal run
    // dominates any of its sub-runs
    double best_gain = 0.0;
    std::size_t best_begin = 0;
    std::size_t best_end = 0;
    RegionResult best_region;

    std::size_t b = 0;
    while (b < ops.size()) {
      if (ops[b].kind == OpKind::Keep) {
        ++b;
        continue;
      }
      std::size_t e = b;
      double run_cost = 0.0;
      while (e < ops.size() && ops[e].kind != OpKind::Keep) {
        run_cost += ops[e].cost;
        ++e;
      }
      const Span src_span{ops[b].source.begin, ops[e - 1].source.end};
      const Span tgt_span{ops[b].target.begin, ops[e - 1].target.end};
      auto region = align_region(src, src_span, tgt, tgt_span, costs);
      const double gain = run_cost - region.cost;
      if (gain > best_gain + kMinGain) {
        best_gain = gain;
        best_begin = b;
        best_end = e;
        best_region = std::move(region);
      }
      b = e;
    }

    if (best_gain <= kMinGain) break;
    std::vector<EditOp> next;
    next.reserve(ops.size());
    next.insert(next.end(), ops.begin(), ops.begin() + static_cast<std::ptrdiff_t>(best_begin));
    next.insert(next.end(), best_region.ops.begin(), best_region.ops.end());
    next.insert(next.end(), ops.begin() + static_cast<std::ptrdiff_t>(best_end), ops.end());
    ops = std::move(next);
  }

  Alignment result;
  result.ops = std::move(ops);
  result.total_cost = 0.0;
  for (const auto& op : result.ops) result.total_cost += op.cost;
  return result;
}

Alignment extract_edits(const SentencePair& pair, const CostMatrix& costs) {
  return refine_merge_split(align_basic(pair, costs), pair, costs);
}

LinkSet alignment_links(const Alignment& alignment) {
  LinkSet links;
  for (const auto& op : alignment.ops) {
    if (op.kind == OpKind::Insert || op.kind == OpKind::Delete) continue;
    for (std::size_t s = op.source.begin; s < op.source.end; ++s) {
      for (std::size_t t = op.target.begin; t < op.target.end; ++t) {
        links.emplace(s, t);
      }
    }
  }
  return links;
}

AlignmentScore alignment_eval(const LinkSet& predicted, const LinkSet& gold) {
  std::size_t correct = 0;
  for (const auto& link : predicted) correct += gold.count(link);

  AlignmentScore score;
  score.precision = predicted.empty()
                        ? 1.0
                        : static_cast<double>(correct) / static_cast<double>(predicted.size());
  score.recall =
      gold.empty() ? 1.0 : static_cast<double>(correct) / static_cast<double>(gold.size());
  const std::size_t denom = predicted.size() + gold.size();
  score.aer = denom == 0
                  ? 0.0
                  : 1.0 - 2.0 * static_cast<double>(correct) / static_cast<double>(denom);
  return score;
}

AlignmentScore alignment_eval(const Alignment& predicted, const LinkSet& gold) {
  return alignment_eval(alignment_links(predicted), gold);
}

namespace {

std::string join_span(const Sentence& s, Span span) {
  std::string out;
  for (std::size_t i = span.begin; i < span.end; ++i) {
    if (!out.empty()) out.push_back(' ');
    out += s.tokens()[i].text();
  }
  return out;
}

}  // namespace

std::string op_source_text(const EditOp& op, const SentencePair& pair) {
  return join_span(pair.source, op.source);
}

std::string op_target_text(const EditOp& op, const SentencePair& pair) {
  return join_span(pair.target, op.target);
}

namespace {

std::string format_cost(double cost) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", cost);
  return buf;
}

}  // namespace

void append_alignment_tsv(std::string& out, const Alignment& alignment,
                          const SentencePair& pair) {
  for (const auto& op : alignment.ops) {
    out += op_kind_letter(op.kind);
    out += '\t';
    out += std::to_string(op.source.begin) + ":" + std::to_string(op.source.end);
    out += '\t';
    out += std::to_string(op.target.begin) + ":" + std::to_string(op.target.end);
    out += '\t';
    out += format_cost(op.cost);
    out += '\t';
    out += op_source_text(op, pair);
    out += '\t';
    out += op_target_text(op, pair);
    out += '\n';
  }
  out += '\n';
}

M2Record to_m2_record(const SentencePair& pair, const Alignment& alignment,
                      int annotator_id) {
  M2Record record;
  for (const auto& tok : pair.source.tokens()) record.source_tokens.push_back(tok.text());
  M2Annotation annotation;
  annotation.annotator_id = annotator_id;
  for (const auto& op : alignment.ops) {
    if (op.kind == OpKind::Keep) continue;
    annotation.edits.push_back({op.source.begin, op.source.end,
                                std::string(1, op_kind_letter(op.kind)),
                                op_target_text(op, pair)});
  }
  record.annotations.push_back(std::move(annotation));
  return record;
}

}  // namespace gec
