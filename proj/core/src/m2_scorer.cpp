#include "gec/m2_scorer.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <set>

#include "gec/errors.hpp"
#include "gec/parallel.hpp"
#include "gec/unicode.hpp"

namespace gec {

double f_beta(long matched, long proposed, long gold, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * static_cast<double>(gold) + static_cast<double>(proposed);
  if (denom == 0.0) return matched == 0 ? 1.0 : 0.0;
  return (1.0 + b2) * static_cast<double>(matched) / denom;
}

void compute_prf(GecScore& score) {
  score.precision =
      score.proposed == 0 ? 1.0
                          : static_cast<double>(score.matched) / static_cast<double>(score.proposed);
  score.recall =
      score.gold == 0 ? 1.0
                      : static_cast<double>(score.matched) / static_cast<double>(score.gold);
  score.f1 = f_beta(score.matched, score.proposed, score.gold, 1.0);
  score.f05 = f_beta(score.matched, score.proposed, score.gold, 0.5);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point at{};
  bool enabled = false;

  bool expired() const { return enabled && Clock::now() >= at; }
};

struct TimeoutInterrupt {};

void check(const Deadline& deadline) {
  if (deadline.expired()) throw TimeoutInterrupt{};
}

struct Vertex {
  int i = 0;
  int j = 0;
  auto operator<=>(const Vertex&) const = default;
};

enum class EType { Noop, Sub, Ins, Del };

// A lattice arc: spans source token offsets [start, end); `unchanged` counts
// the kept words folded into a compound arc.
struct Arc {
  EType type = EType::Noop;
  int start = 0;
  int end = 0;
  std::string orig;
  std::string corr;
  int unchanged = 0;
  double steps = 1.0;  // primitive edge count, the base path length
};

using EdgeKey = std::pair<Vertex, Vertex>;

struct Lattice {
  std::vector<Vertex> vertices;        // sorted
  std::map<EdgeKey, Arc> arcs;
  std::map<Vertex, std::vector<Vertex>> out_adj;
  std::map<Vertex, std::vector<Vertex>> in_adj;
  // Relaxation order of the shortest-path search: the sorted base arcs
  // followed by transitive arcs in discovery order. Matches the reference
  // scorer's edge list so weight ties resolve the same way.
  std::vector<EdgeKey> edge_order;

  void add_arc(const Vertex& from, const Vertex& to, Arc arc) {
    const auto [it, inserted] = arcs.emplace(EdgeKey{from, to}, std::move(arc));
    if (inserted) {
      out_adj[from].push_back(to);
      in_adj[to].push_back(from);
    }
  }

  void seal_base_order() {
    edge_order.clear();
    edge_order.reserve(arcs.size());
    for (const auto& [key, arc] : arcs) edge_order.push_back(key);
  }
};

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t begin,
                        std::size_t end) {
  std::string out;
  for (std::size_t k = begin; k < end; ++k) {
    if (!out.empty()) out.push_back(' ');
    out += tokens[k];
  }
  return out;
}

// All-optimal-backpointer Levenshtein grid for one substitution cost.
// Backpointer order is substitution/noop, deletion, insertion.
void add_levenshtein_arcs(Lattice& lattice, const std::vector<std::string>& src,
                          const std::vector<std::string>& hyp, int sub_cost,
                          const Deadline& deadline) {
  const int n = static_cast<int>(src.size());
  const int m = static_cast<int>(hyp.size());
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1, 0));
  for (int i = 1; i <= n; ++i) d[i][0] = i;
  for (int j = 1; j <= m; ++j) d[0][j] = j;
  for (int i = 1; i <= n; ++i) {
    check(deadline);
    for (int j = 1; j <= m; ++j) {
      const int sub = d[i - 1][j - 1] + (src[i - 1] == hyp[j - 1] ? 0 : sub_cost);
      const int del = d[i - 1][j] + 1;
      const int ins = d[i][j - 1] + 1;
      d[i][j] = std::min({sub, del, ins});
    }
  }

  auto arc_for = [&](int i, int j, int pi, int pj) -> Arc {
    if (pi == i - 1 && pj == j - 1) {
      if (src[i - 1] == hyp[j - 1]) {
        return {EType::Noop, i - 1, i, src[i - 1], hyp[j - 1], 1, 1.0};
      }
      return {EType::Sub, i - 1, i, src[i - 1], hyp[j - 1], 0, 1.0};
    }
    if (pi == i - 1 && pj == j) return {EType::Del, i - 1, i, src[i - 1], "", 0, 1.0};
    // The reference scorer stamps first-row insertions with the hypothesis
    // index; reproduced here so scores stay comparable with published ones.
    const int at = i == 0 ? j - 1 : i;
    return {EType::Ins, at, at, "", hyp[j - 1], 0, 1.0};
  };

  for (int i = 0; i <= n; ++i) {
    check(deadline);
    for (int j = 0; j <= m; ++j) {
      if (i == 0 && j == 0) continue;
      const Vertex here{i, j};
      if (i > 0 && j > 0) {
        const int sub = d[i - 1][j - 1] + (src[i - 1] == hyp[j - 1] ? 0 : sub_cost);
        if (sub == d[i][j]) lattice.add_arc({i - 1, j - 1}, here, arc_for(i, j, i - 1, j - 1));
      }
      if (i > 0 && d[i - 1][j] + 1 == d[i][j]) {
        lattice.add_arc({i - 1, j}, here, arc_for(i, j, i - 1, j));
      }
      if (j > 0 && d[i][j - 1] + 1 == d[i][j]) {
        lattice.add_arc({i, j - 1}, here, arc_for(i, j, i, j - 1));
      }
    }
  }
}

Arc compose(const Arc& a, const Arc& b) {
  auto joined = [](const std::string& x, const std::string& y) {
    return x + " " + y;
  };
  Arc out;
  out.start = a.start;
  out.end = b.end;
  out.unchanged = a.unchanged + b.unchanged;
  out.steps = a.steps + b.steps;
  if (a.type == EType::Ins) {
    if (b.type == EType::Ins) {
      out.type = EType::Ins;
      out.orig = "";
      out.corr = joined(a.corr, b.corr);
    } else if (b.type == EType::Del) {
      out.type = EType::Sub;
      out.orig = b.orig;
      out.corr = a.corr;
    } else {  // Sub or Noop
      out.type = EType::Sub;
      out.orig = b.orig;
      out.corr = joined(a.corr, b.corr);
    }
  } else if (a.type == EType::Del) {
    if (b.type == EType::Ins) {
      out.type = EType::Sub;
      out.orig = a.orig;
      out.corr = b.corr;
    } else if (b.type == EType::Del) {
      out.type = EType::Del;
      out.orig = joined(a.orig, b.orig);
      out.corr = "";
    } else {
      out.type = EType::Sub;
      out.orig = joined(a.orig, b.orig);
      out.corr = b.corr;
    }
  } else {  // Sub or Noop
    if (b.type == EType::Ins) {
      out.type = EType::Sub;
      out.orig = a.orig;
      out.corr = joined(a.corr, b.corr);
    } else if (b.type == EType::Del) {
      out.type = EType::Sub;
      out.orig = joined(a.orig, b.orig);
      out.corr = a.corr;
    } else if (a.type == EType::Noop && b.type == EType::Noop) {
      out.type = EType::Noop;
      out.orig = joined(a.orig, b.orig);
      out.corr = joined(a.corr, b.corr);
    } else {
      out.type = EType::Sub;
      out.orig = joined(a.orig, b.orig);
      out.corr = joined(a.corr, b.corr);
    }
  }
  return out;
}

// Adds compound arcs (Floyd-Warshall style over sorted vertices) as long as
// they fold at most max_unchanged kept words; then removes multi-step noop
// arcs.
void add_transitive_arcs(Lattice& lattice, int max_unchanged, const Deadline& deadline) {
  for (const auto& k : lattice.vertices) {
    check(deadline);
    // copies: the pass mutates adjacency; sorted so discovery order (and
    // with it the relaxation order) matches the reference
    auto in = lattice.in_adj[k];
    auto out = lattice.out_adj[k];
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    std::size_t probes = 0;
    for (const auto& i : in) {
      check(deadline);
      const Arc& aik = lattice.arcs.at({i, k});
      for (const auto& j : out) {
        if ((++probes & 0xFF) == 0) check(deadline);
        const Arc& akj = lattice.arcs.at({k, j});
        const double through = aik.steps + akj.steps;
        const auto existing = lattice.arcs.find({i, j});
        const double current =
            existing == lattice.arcs.end() ? std::numeric_limits<double>::infinity()
                                           : existing->second.steps;
        if (through < current) {
          Arc composed = compose(aik, akj);
          if (composed.unchanged <= max_unchanged) {
            if (existing == lattice.arcs.end()) {
              lattice.add_arc(i, j, std::move(composed));
            } else {
              existing->second = std::move(composed);
            }
            lattice.edge_order.push_back({i, j});
          }
        }
      }
    }
  }

  for (auto it = lattice.arcs.begin(); it != lattice.arcs.end();) {
    if (it->second.type == EType::Noop && it->second.steps > 1.0) {
      const auto [from, to] = it->first;
      auto& outs = lattice.out_adj[from];
      outs.erase(std::remove(outs.begin(), outs.end(), to), outs.end());
      auto& ins = lattice.in_adj[to];
      ins.erase(std::remove(ins.begin(), ins.end(), from), ins.end());
      lattice.edge_order.erase(
          std::remove(lattice.edge_order.begin(), lattice.edge_order.end(), it->first),
          lattice.edge_order.end());
      it = lattice.arcs.erase(it);
    } else {
      ++it;
    }
  }
}

struct GoldEdit {
  int start = 0;
  int end = 0;
  std::string orig;
  std::string corr;
};

std::string normalize_correction(const std::string& text, bool case_insensitive) {
  return case_insensitive ? uni::to_lower_utf8(text) : text;
}

bool arc_matches(const Arc& arc, const GoldEdit& gold, bool case_insensitive) {
  return arc.start == gold.start && arc.end == gold.end && arc.orig == gold.orig &&
         normalize_correction(arc.corr, case_insensitive) ==
             normalize_correction(gold.corr, case_insensitive);
}

// Weighted arc distances for one annotator: matching arcs get a dominant
// negative weight, every other non-noop arc pays a small epsilon on top of
// its step count. Parallel insertion arcs at one position are matched to the
// annotator's insertions at that position from both ends so that consecutive
// gold insertions can pair with consecutive arcs.
std::map<EdgeKey, double> weight_arcs(const Lattice& lattice,
                                      const std::vector<GoldEdit>& gold,
                                      bool case_insensitive, const Deadline& deadline) {
  constexpr double kEpsilon = 0.001;
  const double match_weight = -static_cast<double>(lattice.arcs.size() + 10);

  std::map<EdgeKey, double> weight;
  std::map<std::pair<int, int>, std::vector<EdgeKey>> by_span;
  std::size_t seen = 0;
  for (const auto& [key, arc] : lattice.arcs) {
    if ((++seen & 0xFFF) == 0) check(deadline);
    weight[key] = arc.steps;
    by_span[{arc.start, arc.end}].push_back(key);
  }
  std::map<std::pair<int, int>, std::vector<const GoldEdit*>> gold_by_span;
  for (const auto& g : gold) gold_by_span[{g.start, g.end}].push_back(&g);

  for (const auto& [span, keys] : by_span) {
    check(deadline);
    const auto gold_it = gold_by_span.find(span);
    const std::vector<const GoldEdit*> empty;
    const auto& span_gold = gold_it == gold_by_span.end() ? empty : gold_it->second;

    if (span.first == span.second) {
      // Insertion group: keys are sorted; chain matches inward from both ends.
      int lptr = 0;
      int rptr = static_cast<int>(keys.size()) - 1;
      int cur = lptr;
      int g_lptr = 0;
      int g_rptr = static_cast<int>(span_gold.size()) - 1;
      while (lptr <= rptr) {
        const EdgeKey& key = keys[static_cast<std::size_t>(cur)];
        const Arc& arc = lattice.arcs.at(key);
        bool matched = false;
        if (cur == lptr) {
          for (int g = g_lptr; g <= g_rptr; ++g) {
            if (arc_matches(arc, *span_gold[static_cast<std::size_t>(g)], case_insensitive)) {
              matched = true;
              weight[key] = match_weight;
              g_lptr = g + 1;
              break;
            }
          }
        } else {
          for (int g = g_rptr; g >= g_lptr; --g) {
            if (arc_matches(arc, *span_gold[static_cast<std::size_t>(g)], case_insensitive)) {
              matched = true;
              weight[key] = match_weight;
              g_rptr = g - 1;
              break;
            }
          }
        }
        if (!matched) weight[key] += kEpsilon;
        if (matched) {
          if (cur == lptr) {
            ++lptr;
            while (lptr < static_cast<int>(keys.size()) &&
                   keys[static_cast<std::size_t>(lptr)].first !=
                       keys[static_cast<std::size_t>(cur)].second) {
              weight[keys[static_cast<std::size_t>(lptr)]] += kEpsilon;
              ++lptr;
            }
            cur = lptr;
          } else {
            --rptr;
            while (rptr >= 0 && keys[static_cast<std::size_t>(rptr)].second !=
                                    keys[static_cast<std::size_t>(cur)].first) {
              weight[keys[static_cast<std::size_t>(rptr)]] += kEpsilon;
              --rptr;
            }
            cur = rptr;
          }
        } else {
          if (cur == lptr) {
            ++lptr;
            cur = rptr;
          } else {
            --rptr;
            cur = lptr;
          }
        }
      }
    } else {
      for (const auto& key : keys) {
        const Arc& arc = lattice.arcs.at(key);
        bool matched = false;
        for (const auto* g : span_gold) {
          if (arc_matches(arc, *g, case_insensitive)) {
            matched = true;
            weight[key] = match_weight;
            break;
          }
        }
        if (!matched && arc.type != EType::Noop) weight[key] += kEpsilon;
      }
    }
  }
  return weight;
}

// Bellman-Ford over the reference's edge order; only strict improvements
// update the parent, so weight ties resolve exactly like the reference
// scorer. Passes stop early once a sweep makes no update.
std::vector<const Arc*> best_path(const Lattice& lattice,
                                  const std::map<EdgeKey, double>& weight,
                                  const Deadline& deadline) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::map<Vertex, double> dist;
  std::map<Vertex, Vertex> parent;
  for (const auto& v : lattice.vertices) dist[v] = kInf;
  if (lattice.vertices.empty()) return {};
  dist[Vertex{0, 0}] = 0.0;

  for (std::size_t pass = 1; pass < lattice.vertices.size(); ++pass) {
    check(deadline);
    bool changed = false;
    for (const auto& key : lattice.edge_order) {
      const double dv = dist[key.first];
      if (dv == kInf) continue;
      const double candidate = dv + weight.at(key);
      double& dw = dist[key.second];
      if (candidate < dw) {
        dw = candidate;
        parent[key.second] = key.first;
        changed = true;
      }
    }
    if (!changed) break;
  }

  std::vector<const Arc*> path;
  Vertex v = lattice.vertices.back();
  while (true) {
    const auto it = parent.find(v);
    if (it == parent.end()) break;
    const Arc& arc = lattice.arcs.at({it->second, v});
    if (arc.type != EType::Noop) path.push_back(&arc);
    v = it->second;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// In-order matching: every gold edit is consumed at most once.
long count_matches(const std::vector<const Arc*>& path, const std::vector<GoldEdit>& gold,
                   bool case_insensitive) {
  long matches = 0;
  std::size_t next = 0;
  for (const auto* arc : path) {
    for (std::size_t g = next; g < gold.size(); ++g) {
      if (arc_matches(*arc, gold[g], case_insensitive)) {
        ++matches;
        next = g + 1;
        break;
      }
    }
  }
  return matches;
}

struct SentenceStats {
  long matched = 0;
  long proposed = 0;
  long gold = 0;
  int annotator = -1;
  bool timed_out = false;
};

struct AnnotatorEdits {
  int id = 0;
  std::vector<GoldEdit> edits;
};

// An edit that only changes letter case proposes nothing under
// case-insensitive matching. Whitespace is deliberately significant:
// merge/split proposals must stay countable.
bool trivial_edit(const Arc& arc) {
  return uni::to_lower_utf8(arc.orig) == uni::to_lower_utf8(arc.corr);
}

// Annotator choice: highest sentence F_beta, then most matches, then the
// smallest beta-weighted proposed+gold mass.
void pick_best_annotator(SentenceStats& stats, const std::vector<AnnotatorEdits>& annotators,
                         const std::vector<std::vector<const Arc*>>& paths, double beta,
                         bool case_insensitive) {
  double best_f = -1.0;
  long best_matched = -1;
  double best_mass = std::numeric_limits<double>::infinity();
  const double b2 = beta * beta;

  for (std::size_t a = 0; a < annotators.size(); ++a) {
    const auto& gold = annotators[a].edits;
    const long proposed = static_cast<long>(paths[a].size());
    const long matched = count_matches(paths[a], gold, case_insensitive);
    const long gold_count = static_cast<long>(gold.size());
    const double f = f_beta(matched, proposed, gold_count, beta);
    const double mass = static_cast<double>(proposed) + b2 * static_cast<double>(gold_count);
    if (f > best_f || (f == best_f && matched > best_matched) ||
        (f == best_f && matched == best_matched && mass < best_mass)) {
      best_f = f;
      best_matched = matched;
      best_mass = mass;
      stats.matched = matched;
      stats.proposed = proposed;
      stats.gold = gold_count;
      stats.annotator = annotators[a].id;
    }
  }
}

// Zero-proposal stats: used for timeouts, where the hypothesis is replaced by
// the source.
SentenceStats unchanged_stats(const std::vector<AnnotatorEdits>& annotators, double beta) {
  SentenceStats stats;
  std::vector<std::vector<const Arc*>> no_paths(annotators.size());
  pick_best_annotator(stats, annotators, no_paths, beta, true);
  return stats;
}

std::vector<AnnotatorEdits> gold_edits_of(const M2Record& record,
                                          const std::vector<std::string>& src_tokens) {
  std::vector<AnnotatorEdits> out;
  if (record.annotations.empty()) {
    out.push_back({0, {}});
    return out;
  }
  for (const auto& ann : record.annotations) {
    AnnotatorEdits entry;
    entry.id = ann.annotator_id;
    for (const auto& edit : ann.edits) {
      entry.edits.push_back({static_cast<int>(edit.start), static_cast<int>(edit.end),
                             join_tokens(src_tokens, edit.start, edit.end), edit.correction});
    }
    out.push_back(std::move(entry));
  }
  return out;
}

SentenceStats score_sentence(const std::vector<std::string>& src_tokens,
                             const std::vector<std::string>& hyp_tokens,
                             const M2Record& record, const M2Options& options) {
  const auto annotators = gold_edits_of(record, src_tokens);

  Deadline deadline;
  if (options.timeout_enabled) {
    deadline.enabled = true;
    deadline.at = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(options.timeout_secs));
  }

  try {
    check(deadline);
    // Each substitution-cost grid is pruned to its own backward-reachable
    // arcs before the union, like the reference builds its two graphs.
    const Vertex last{static_cast<int>(src_tokens.size()),
                      static_cast<int>(hyp_tokens.size())};
    Lattice lattice;
    std::set<Vertex> vertex_union;
    for (const int sub_cost : {1, 2}) {
      Lattice raw;
      add_levenshtein_arcs(raw, src_tokens, hyp_tokens, sub_cost, deadline);
      std::set<Vertex> reachable;
      std::vector<Vertex> stack{last};
      while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        if (!reachable.insert(v).second) continue;
        const auto it = raw.in_adj.find(v);
        if (it == raw.in_adj.end()) continue;
        for (const auto& u : it->second) stack.push_back(u);
      }
      std::size_t copied = 0;
      for (const auto& [key, arc] : raw.arcs) {
        if ((++copied & 0xFFF) == 0) check(deadline);
        if (reachable.count(key.second)) lattice.add_arc(key.first, key.second, arc);
      }
      vertex_union.insert(reachable.begin(), reachable.end());
    }
    lattice.vertices.assign(vertex_union.begin(), vertex_union.end());
    lattice.seal_base_order();
    add_transitive_arcs(lattice, options.max_unchanged_words, deadline);

    SentenceStats stats;
    std::vector<std::vector<const Arc*>> paths;
    paths.reserve(annotators.size());
    for (const auto& annotator : annotators) {
      const auto weight =
          weight_arcs(lattice, annotator.edits, options.case_insensitive, deadline);
      auto path = best_path(lattice, weight, deadline);
      if (options.case_insensitive) {
        std::erase_if(path, [](const Arc* arc) { return trivial_edit(*arc); });
      }
      paths.push_back(std::move(path));
    }
    pick_best_annotator(stats, annotators, paths, options.beta, options.case_insensitive);
    return stats;
  } catch (const TimeoutInterrupt&) {
    SentenceStats stats = unchanged_stats(annotators, options.beta);
    stats.timed_out = true;
    return stats;
  }
}

}  // namespace

GecScore m2_score(const std::vector<Sentence>& sources,
                  const std::vector<Sentence>& hypotheses,
                  const std::vector<M2Record>& gold, const M2Options& options) {
  if (sources.size() != gold.size()) {
    throw ValidationError("source count " + std::to_string(sources.size()) +
                          " does not match gold record count " + std::to_string(gold.size()));
  }
  if (hypotheses.size() != gold.size()) {
    throw ValidationError("hypothesis count " + std::to_string(hypotheses.size()) +
                          " does not match gold record count " + std::to_string(gold.size()));
  }
  for (std::size_t idx = 0; idx < gold.size(); ++idx) {
    if (sources[idx].size() != gold[idx].source_tokens.size()) {
      throw ValidationError("sentence " + std::to_string(idx + 1) + ": source has " +
                            std::to_string(sources[idx].size()) +
                            " tokens but the gold record has " +
                            std::to_string(gold[idx].source_tokens.size()));
    }
  }

  std::vector<SentenceStats> stats(gold.size());
  parallel_for(gold.size(), options.jobs, [&](std::size_t idx) {
    std::vector<std::string> src_tokens;
    for (const auto& tok : sources[idx].tokens()) src_tokens.push_back(tok.text());
    std::vector<std::string> hyp_tokens;
    for (const auto& tok : hypotheses[idx].tokens()) hyp_tokens.push_back(tok.text());
    stats[idx] = score_sentence(src_tokens, hyp_tokens, gold[idx], options);
  });

  GecScore score;
  for (const auto& s : stats) {
    score.matched += s.matched;
    score.proposed += s.proposed;
    score.gold += s.gold;
    if (s.timed_out) ++score.timeouts;
    ++score.annotator_picks[s.annotator];
  }
  compute_prf(score);
  return score;
}

}  // namespace gec
