#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "gec/corpus.hpp"
#include "gec/errors.hpp"
#include "gec/ged_metrics.hpp"
#include "gec/m2_scorer.hpp"
#include "gec/parallel.hpp"
#include "gec/report.hpp"
#include "oracle_m2.hpp"

using namespace gec;

namespace {

Sentence sent(const std::vector<std::string>& words) { return Sentence(words, "s"); }

M2Record record_of(const std::vector<std::string>& tokens,
                   const std::vector<std::vector<M2Edit>>& annotators) {
  M2Record record;
  record.source_tokens = tokens;
  int id = 0;
  for (const auto& edits : annotators) {
    record.annotations.push_back({id++, edits});
  }
  return record;
}

M2Options no_timeout() {
  M2Options options;
  options.timeout_enabled = false;
  return options;
}

}  // namespace

TEST_CASE("perfect hypothesis scores ones") {
  const std::vector<Sentence> src = {sent({"a", "b"})};
  const std::vector<Sentence> hyp = {sent({"x", "b"})};
  const std::vector<M2Record> gold = {record_of({"a", "b"}, {{{0, 1, "O", "x"}}})};
  const auto score = m2_score(src, hyp, gold, no_timeout());
  CHECK(score.matched == 1);
  CHECK(score.proposed == 1);
  CHECK(score.gold == 1);
  CHECK(score.precision == 1.0);
  CHECK(score.recall == 1.0);
  CHECK(score.f05 == 1.0);
}

TEST_CASE("unchanged hypothesis scores by the zero-proposal convention") {
  const std::vector<Sentence> src = {sent({"a", "b"})};
  const std::vector<Sentence> hyp = {sent({"a", "b"})};
  const std::vector<M2Record> gold = {record_of({"a", "b"}, {{{0, 1, "O", "x"}}})};
  const auto score = m2_score(src, hyp, gold, no_timeout());
  CHECK(score.matched == 0);
  CHECK(score.proposed == 0);
  CHECK(score.gold == 1);
  CHECK(score.precision == 1.0);
  CHECK(score.recall == 0.0);
  CHECK(score.f05 == 0.0);
}

TEST_CASE("three sentence fixture gives the exact rational scores") {
  // S1: gold fixes b->q and d->w, system fixes b only.
  // S2: gold fixes f->r, system fixes it and spuriously changes g->x.
  // S3: gold fixes i->t, system leaves the sentence unchanged.
  const std::vector<Sentence> src = {sent({"a", "b", "c", "d"}), sent({"e", "f", "g"}),
                                     sent({"h", "i"})};
  const std::vector<Sentence> hyp = {sent({"a", "q", "c", "d"}), sent({"e", "r", "x"}),
                                     sent({"h", "i"})};
  const std::vector<M2Record> gold = {
      record_of({"a", "b", "c", "d"}, {{{1, 2, "O", "q"}, {3, 4, "O", "w"}}}),
      record_of({"e", "f", "g"}, {{{1, 2, "O", "r"}}}),
      record_of({"h", "i"}, {{{1, 2, "O", "t"}}})};

  const auto score = m2_score(src, hyp, gold, no_timeout());
  CHECK(score.matched == 2);
  CHECK(score.proposed == 3);
  CHECK(score.gold == 4);
  CHECK(score.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(score.recall == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(score.f05 == doctest::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("compound gold edits match through transitive arcs") {
  const std::vector<Sentence> src = {sent({"a", "b", "c", "d"})};
  const std::vector<Sentence> hyp = {sent({"a", "x", "y", "d"})};
  SUBCASE("one compound edit") {
    const std::vector<M2Record> gold = {record_of({"a", "b", "c", "d"}, {{{1, 3, "X", "x y"}}})};
    const auto score = m2_score(src, hyp, gold, no_timeout());
    CHECK(score.matched == 1);
    CHECK(score.proposed == 1);
    CHECK(score.gold == 1);
  }
  SUBCASE("two single edits") {
    const std::vector<M2Record> gold = {
        record_of({"a", "b", "c", "d"}, {{{1, 2, "X", "x"}, {2, 3, "X", "y"}}})};
    const auto score = m2_score(src, hyp, gold, no_timeout());
    CHECK(score.matched == 2);
    CHECK(score.proposed == 2);
    CHECK(score.gold == 2);
  }
}

TEST_CASE("hand-worked example: compound edit granularity adapts to gold") {
  // The system rewrote "at mat" as "on the mat"; gold analyzes it as one
  // replacement plus one untouched word. MaxMatch must pick the compound
  // "at" -> "on the" over separate substitution+insertion edits.
  const std::vector<Sentence> src = {sent({"The", "cat", "sat", "at", "mat", "."})};
  const std::vector<Sentence> hyp = {sent({"The", "dog", "sat", "on", "the", "mat", "."})};
  const std::vector<M2Record> gold = {record_of(
      {"The", "cat", "sat", "at", "mat", "."},
      {{{1, 2, "X", "dog"}, {3, 4, "X", "on the"}}})};
  const auto score = m2_score(src, hyp, gold, no_timeout());
  CHECK(score.matched == 2);
  CHECK(score.proposed == 2);
  CHECK(score.gold == 2);
  CHECK(score.f05 == 1.0);
}

TEST_CASE("max_unchanged limits compound folding") {
  const std::vector<Sentence> src = {sent({"a", "b", "c"})};
  const std::vector<Sentence> hyp = {sent({"x", "b", "y"})};
  const std::vector<M2Record> gold = {record_of({"a", "b", "c"}, {{{0, 3, "X", "x b y"}}})};

  auto options = no_timeout();
  const auto score = m2_score(src, hyp, gold, options);
  CHECK(score.matched == 1);
  CHECK(score.proposed == 1);

  options.max_unchanged_words = 0;
  const auto strict = m2_score(src, hyp, gold, options);
  CHECK(strict.matched == 0);
  CHECK(strict.proposed == 2);
}

TEST_CASE("insertion edits match") {
  const std::vector<Sentence> src = {sent({"a", "b"})};
  const std::vector<Sentence> hyp = {sent({"a", ",", "b"})};
  const std::vector<M2Record> gold = {record_of({"a", "b"}, {{{1, 1, "P", ","}}})};
  const auto score = m2_score(src, hyp, gold, no_timeout());
  CHECK(score.matched == 1);
  CHECK(score.proposed == 1);
  CHECK(score.gold == 1);
}

TEST_CASE("deletion edits match") {
  const std::vector<Sentence> src = {sent({"a", "x", "b"})};
  const std::vector<Sentence> hyp = {sent({"a", "b"})};
  const std::vector<M2Record> gold = {record_of({"a", "x", "b"}, {{{1, 2, "U", ""}}})};
  const auto score = m2_score(src, hyp, gold, no_timeout());
  CHECK(score.matched == 1);
  CHECK(score.proposed == 1);
}

TEST_CASE("reference parity on sentence-initial insertions") {
  // The reference lattice stamps first-row insertions with hypothesis
  // offsets, so the gold insertion at offset 1 is consumed by the second
  // inserted token and the substitution analysis loses to insert+delete.
  const std::vector<Sentence> src = {sent({"aa", "dd", "bb", "ff", "cc", "aa"})};
  const std::vector<Sentence> hyp = {sent({"s0", "n0", "dd", "ff", "aa"})};
  const std::vector<M2Record> gold = {
      record_of({"aa", "dd", "bb", "ff", "cc", "aa"},
                {{{1, 1, "X", "n0"}, {2, 3, "X", ""}, {4, 5, "X", ""}}})};
  const auto score = m2_score(src, hyp, gold, no_timeout());
  CHECK(score.matched == 3);
  CHECK(score.proposed == 5);
  CHECK(score.gold == 3);
}

TEST_CASE("consecutive insertions match distinct gold edits at one offset") {
  const std::vector<Sentence> src = {sent({"a", "b"})};
  const std::vector<Sentence> hyp = {sent({"a", "x", "y", "b"})};
  const std::vector<M2Record> gold = {
      record_of({"a", "b"}, {{{1, 1, "X", "x"}, {1, 1, "X", "y"}}})};
  const auto score = m2_score(src, hyp, gold, no_timeout());
  CHECK(score.matched == 2);
  CHECK(score.proposed == 2);
  CHECK(score.gold == 2);
}

TEST_CASE("multi-word insertion matches one compound gold edit") {
  const std::vector<Sentence> src = {sent({"a", "b"})};
  const std::vector<Sentence> hyp = {sent({"a", "x", "y", "b"})};
  const std::vector<M2Record> gold = {record_of({"a", "b"}, {{{1, 1, "X", "x y"}}})};
  const auto score = m2_score(src, hyp, gold, no_timeout());
  CHECK(score.matched == 1);
  CHECK(score.proposed == 1);
  CHECK(score.gold == 1);
}

TEST_CASE("annotator ties break toward the lighter gold set") {
  // hypothesis proposes nothing and every annotator scores zero; the one
  // with fewer gold edits is preferred
  const std::vector<Sentence> src = {sent({"a", "b"})};
  const std::vector<Sentence> hyp = {sent({"a", "b"})};
  const std::vector<M2Record> gold = {
      record_of({"a", "b"}, {{{0, 1, "O", "x"}, {1, 2, "O", "y"}}, {{0, 1, "O", "z"}}})};
  const auto score = m2_score(src, hyp, gold, no_timeout());
  CHECK(score.gold == 1);
  CHECK(score.annotator_picks.at(1) == 1);
}

TEST_CASE("annotator maximizing sentence F is chosen") {
  const std::vector<Sentence> src = {sent({"a", "b"})};
  const std::vector<Sentence> hyp = {sent({"x", "b"})};
  // annotator 0 wants a different fix; annotator 1 matches the system
  const std::vector<M2Record> gold = {
      record_of({"a", "b"}, {{{0, 1, "O", "z"}}, {{0, 1, "O", "x"}}})};
  const auto score = m2_score(src, hyp, gold, no_timeout());
  CHECK(score.matched == 1);
  CHECK(score.proposed == 1);
  CHECK(score.gold == 1);
  CHECK(score.annotator_picks.at(1) == 1);
}

TEST_CASE("noop annotator wins for unchanged output") {
  const std::vector<Sentence> src = {sent({"a", "b"})};
  const std::vector<Sentence> hyp = {sent({"a", "b"})};
  const std::vector<M2Record> gold = {record_of({"a", "b"}, {{{0, 1, "O", "z"}}, {}})};
  const auto score = m2_score(src, hyp, gold, no_timeout());
  CHECK(score.matched == 0);
  CHECK(score.proposed == 0);
  CHECK(score.gold == 0);
  CHECK(score.annotator_picks.at(1) == 1);
  CHECK(score.f05 == 1.0);
}

TEST_CASE("timeout zero degrades every sentence to zero proposals") {
  const std::vector<Sentence> src = {sent({"a", "b"}), sent({"c"})};
  const std::vector<Sentence> hyp = {sent({"x", "b"}), sent({"y"})};
  const std::vector<M2Record> gold = {record_of({"a", "b"}, {{{0, 1, "O", "x"}}}),
                                      record_of({"c"}, {{{0, 1, "O", "y"}}})};
  M2Options options;
  options.timeout_secs = 0.0;
  const auto score = m2_score(src, hyp, gold, options);
  CHECK(score.timeouts == 2);
  CHECK(score.proposed == 0);
  CHECK(score.matched == 0);
  CHECK(score.precision == 1.0);
  CHECK(score.recall == 0.0);
}

TEST_CASE("count mismatches are rejected") {
  const std::vector<Sentence> one = {sent({"a"})};
  const std::vector<Sentence> two = {sent({"a"}), sent({"b"})};
  const std::vector<M2Record> gold = {record_of({"a"}, {})};
  CHECK_THROWS_AS(m2_score(two, one, gold, no_timeout()), ValidationError);
  CHECK_THROWS_AS(m2_score(one, two, gold, no_timeout()), ValidationError);
  // source/record token count mismatch
  const std::vector<Sentence> wrong = {sent({"a", "b", "c"})};
  CHECK_THROWS_AS(m2_score(wrong, one, gold, no_timeout()), ValidationError);
}

TEST_CASE("case-insensitive matching for latin text") {
  // the correction differs from gold only in casing
  const std::vector<Sentence> src = {sent({"the", "cat"})};
  const std::vector<Sentence> hyp = {sent({"dog", "cat"})};
  const std::vector<M2Record> gold = {record_of({"the", "cat"}, {{{0, 1, "O", "DOG"}}})};
  const auto score = m2_score(src, hyp, gold, no_timeout());
  CHECK(score.matched == 1);

  auto options = no_timeout();
  options.case_insensitive = false;
  const auto strict = m2_score(src, hyp, gold, options);
  CHECK(strict.matched == 0);
}

TEST_CASE("case-only hypothesis edits are dropped as trivial") {
  const std::vector<Sentence> src = {sent({"the", "cat"})};
  const std::vector<Sentence> hyp = {sent({"The", "cat"})};
  const std::vector<M2Record> gold = {record_of({"the", "cat"}, {{{0, 1, "O", "The"}}})};
  const auto score = m2_score(src, hyp, gold, no_timeout());
  CHECK(score.proposed == 0);

  auto options = no_timeout();
  options.case_insensitive = false;
  const auto strict = m2_score(src, hyp, gold, options);
  CHECK(strict.proposed == 1);
  CHECK(strict.matched == 1);
}

TEST_CASE("max-match equals exhaustive lattice enumeration") {
  struct Fixture {
    std::vector<std::string> src;
    std::vector<std::string> hyp;
    std::vector<M2Edit> gold;
  };
  const std::vector<Fixture> fixtures = {
      {{"a", "b", "c", "d"}, {"a", "x", "y", "d"}, {{1, 3, "X", "x y"}}},
      {{"a", "b", "c", "d"}, {"a", "x", "y", "d"}, {{1, 2, "X", "x"}, {2, 3, "X", "y"}}},
      {{"a", "b", "c"}, {"x", "b", "y"}, {{0, 3, "X", "x b y"}}},
      {{"a", "b"}, {"a", ",", "b"}, {{1, 1, "P", ","}}},
      {{"a", "x", "b"}, {"a", "b"}, {{1, 2, "U", ""}}},
      {{"w", "a", "b", "c", "z"}, {"w", "c", "z"}, {{1, 4, "X", "c"}}},
      {{"a", "b", "c", "d", "e", "f"},
       {"a", "q", "c", "r", "e", "f"},
       {{1, 2, "X", "q"}, {3, 4, "X", "r"}, {5, 6, "X", "zz"}}},
      {{"a"}, {"b", "c", "d"}, {{0, 1, "X", "b c d"}}},
      {{"a", "b", "c", "d", "e", "f", "g", "h"},
       {"a", "b", "x", "d", "e", "y", "g", "h"},
       {{2, 3, "X", "x"}, {5, 6, "X", "y"}}},
  };

  for (const auto& fixture : fixtures) {
    CAPTURE(fixture.src);
    const std::vector<Sentence> src = {sent(fixture.src)};
    const std::vector<Sentence> hyp = {sent(fixture.hyp)};
    const std::vector<M2Record> gold = {record_of(fixture.src, {fixture.gold})};
    const auto score = m2_score(src, hyp, gold, no_timeout());
    const auto expected =
        oracle_m2::best_for_annotator(fixture.src, fixture.hyp, fixture.gold, 2);
    CHECK(expected.outcomes.count({score.matched, score.proposed}) == 1);
  }
}

TEST_CASE("max-match equals enumeration on random small cases") {
  std::mt19937 rng(90210);
  const std::vector<std::string> vocab = {"aa", "bb", "cc", "dd", "ee", "ff"};
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::uniform_int_distribution<int> len_dist(1, 5);
  std::uniform_int_distribution<int> coin(0, 9);

  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::string> src;
    const int n = len_dist(rng);
    for (int i = 0; i < n; ++i) src.push_back(vocab[pick(rng)]);

    // perturb into a hypothesis and derive a plausible gold edit set; half
    // the gold edits are taken from the perturbation, half are random
    std::vector<std::string> hyp;
    std::vector<M2Edit> gold;
    int inserted = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      const int roll = coin(rng);
      if (roll == 0) {  // substitution
        const auto replacement = "s" + std::to_string(i);
        hyp.push_back(replacement);
        if (coin(rng) < 7) gold.push_back({i, i + 1, "X", replacement});
      } else if (roll == 1) {  // deletion
        if (coin(rng) < 7) gold.push_back({i, i + 1, "X", ""});
      } else if (roll == 2) {  // insertion of a fresh token
        const auto novel = "n" + std::to_string(inserted++);
        hyp.push_back(novel);
        hyp.push_back(src[i]);
        if (coin(rng) < 7) gold.push_back({i, i, "X", novel});
      } else {
        hyp.push_back(src[i]);
        if (coin(rng) == 9) gold.push_back({i, i + 1, "X", vocab[pick(rng)]});
      }
    }
    if (hyp.empty()) hyp.push_back(src.front());

    const std::vector<Sentence> fsrc = {sent(src)};
    const std::vector<Sentence> fhyp = {sent(hyp)};
    const std::vector<M2Record> fgold = {record_of(src, {gold})};
    const auto score = m2_score(fsrc, fhyp, fgold, no_timeout());
    const auto expected = oracle_m2::best_for_annotator(src, hyp, gold, 2);
    CAPTURE(trial);
    CHECK(expected.outcomes.count({score.matched, score.proposed}) == 1);
  }
}

TEST_CASE("ged_score counts classes invented by the prediction") {
  const std::vector<GedRecord> gold = {GedRecord({"a", "b"}, {"C", "C"})};
  const std::vector<GedRecord> pred = {GedRecord({"a", "b"}, {"X", "C"})};
  const auto score = ged_score(gold, pred);
  REQUIRE(score.per_class.count("X") == 1);
  CHECK(score.per_class.at("X").precision == 0.0);
  CHECK(score.per_class.size() == 2);
  CHECK(score.accuracy == doctest::Approx(0.5));
}

TEST_CASE("f_beta conventions and monotonicity") {
  CHECK(f_beta(0, 0, 0, 0.5) == 1.0);
  CHECK(f_beta(0, 3, 0, 0.5) == 0.0);
  CHECK(f_beta(0, 0, 3, 0.5) == 0.0);

  std::mt19937 rng(5);
  std::uniform_int_distribution<long> dist(0, 20);
  for (int trial = 0; trial < 200; ++trial) {
    const long proposed = dist(rng) + 1;
    const long gold = dist(rng) + 1;
    const long matched = std::min({dist(rng), proposed, gold});
    if (matched + 1 <= std::min(proposed, gold)) {
      CHECK(f_beta(matched + 1, proposed, gold, 0.5) >= f_beta(matched, proposed, gold, 0.5));
    }
  }
}

TEST_CASE("ged_score perfect prediction") {
  const std::vector<GedRecord> gold = {GedRecord({"a", "b"}, {"C", "O"})};
  const auto score = ged_score(gold, gold);
  CHECK(score.macro_precision == 1.0);
  CHECK(score.macro_recall == 1.0);
  CHECK(score.macro_f05 == 1.0);
  CHECK(score.accuracy == 1.0);
}

TEST_CASE("ged_score all-C prediction against one error") {
  std::vector<std::string> tokens(10, "w");
  std::vector<std::string> gold_labels(10, "C");
  gold_labels[3] = "O";
  const std::vector<std::string> pred_labels(10, "C");
  const std::vector<GedRecord> gold = {GedRecord(tokens, gold_labels)};
  const std::vector<GedRecord> pred = {GedRecord(tokens, pred_labels)};

  const auto score = ged_score(gold, pred);
  CHECK(score.accuracy == doctest::Approx(0.9));
  const auto& o = score.per_class.at("O");
  CHECK(o.precision == 0.0);
  CHECK(o.recall == 0.0);
  CHECK(o.f05 == 0.0);
  const auto& c = score.per_class.at("C");
  CHECK(c.precision == doctest::Approx(0.9));
  CHECK(c.recall == 1.0);
  // macro over {C, O}
  CHECK(score.macro_precision == doctest::Approx(0.45));
  CHECK(score.macro_recall == doctest::Approx(0.5));
}

TEST_CASE("ged_score confusion-matrix fixture evaluates the formula") {
  // class E: tp=8, fp=2, fn=2 over 100 tokens
  std::vector<std::string> tokens(100, "w");
  std::vector<std::string> gold_labels(100, "C");
  std::vector<std::string> pred_labels(100, "C");
  for (int i = 0; i < 8; ++i) gold_labels[i] = pred_labels[i] = "E";   // tp
  for (int i = 8; i < 10; ++i) gold_labels[i] = "E";                    // fn
  for (int i = 10; i < 12; ++i) pred_labels[i] = "E";                   // fp
  const std::vector<GedRecord> gold = {GedRecord(tokens, gold_labels)};
  const std::vector<GedRecord> pred = {GedRecord(tokens, pred_labels)};

  const auto score = ged_score(gold, pred);
  const auto& e = score.per_class.at("E");
  CHECK(e.precision == doctest::Approx(0.8));
  CHECK(e.recall == doctest::Approx(0.8));
  CHECK(e.f05 == doctest::Approx(0.8));
  CHECK(score.accuracy == doctest::Approx(0.96));
}

TEST_CASE("ged_score UNK gold counts as an ordinary class") {
  const std::vector<GedRecord> gold = {GedRecord({"a", "b"}, {"UNK", "C"})};
  const std::vector<GedRecord> pred = {GedRecord({"a", "b"}, {"C", "C"})};
  const auto score = ged_score(gold, pred);
  CHECK(score.per_class.at("UNK").recall == 0.0);
  CHECK(score.accuracy == doctest::Approx(0.5));
}

TEST_CASE("ged_score validates lengths") {
  const std::vector<GedRecord> gold = {GedRecord({"a", "b"}, {"C", "O"})};
  const std::vector<GedRecord> pred = {GedRecord({"a"}, {"C"})};
  CHECK_THROWS_WITH_AS(ged_score(gold, pred),
                       "sentence 1: gold has 2 labels but prediction has 1",
                       ValidationError);
  CHECK_THROWS_AS(ged_score(gold, {}), ValidationError);
}

TEST_CASE("parallel_for fills slots like the serial loop and propagates errors") {
  std::vector<int> serial(200, 0);
  std::vector<int> threaded(200, 0);
  parallel_for(serial.size(), 1, [&](std::size_t i) { serial[i] = static_cast<int>(i * i); });
  parallel_for(threaded.size(), 4, [&](std::size_t i) { threaded[i] = static_cast<int>(i * i); });
  CHECK(serial == threaded);

  CHECK_THROWS_AS(parallel_for(100, 4,
                               [](std::size_t i) {
                                 if (i == 57) throw ValidationError("boom");
                               }),
                  ValidationError);
}

TEST_CASE("reports render deterministically") {
  GecScore gec_score;
  gec_score.matched = 2;
  gec_score.proposed = 3;
  gec_score.gold = 4;
  compute_prf(gec_score);
  gec_score.annotator_picks[0] = 3;

  const auto human = render_gec_report(gec_score, ReportFormat::Human);
  CHECK(human.find("precision   0.6667") != std::string::npos);
  CHECK(human.find("F0.5        0.6250") != std::string::npos);
  CHECK(human.find("0:3") != std::string::npos);

  const auto tsv = render_gec_report(gec_score, ReportFormat::Tsv);
  CHECK(tsv.find("2\t3\t4\t0.6667\t0.5000\t0.5714\t0.6250\t0\t0:3") != std::string::npos);

  const std::vector<GedRecord> gold = {GedRecord({"a"}, {"C"})};
  const auto ged = ged_score(gold, gold);
  const auto ged_tsv = render_ged_report(ged, ReportFormat::Tsv);
  CHECK(ged_tsv.find("C\t1\t0\t0\t1.0000\t1.0000\t1.0000") != std::string::npos);

  AlignmentScore alignment{1.0, 0.5, 1.0 / 3.0};
  CHECK(render_alignment_report(alignment, ReportFormat::Tsv) ==
        "precision\trecall\taer\n1.0000\t0.5000\t0.3333\n");
  CHECK(render_alignment_report(alignment, ReportFormat::Human).find("AER         0.3333") !=
        std::string::npos);
}
