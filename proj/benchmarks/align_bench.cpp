#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "gec/align.hpp"
#include "gec/corpus.hpp"
#include "gec/costs.hpp"
#include "gec/m2_scorer.hpp"
#include "gec/unicode.hpp"

namespace {

// Arabic letters commonly seen in the corpora.
const std::vector<std::string> kLetters = {
    "ا", "ب", "ت", "ج", "د", "ر",
    "س", "ع", "ك", "ل", "م", "ن",
    "ه", "و", "ي"};

std::string random_word(std::mt19937& rng, int min_len, int max_len) {
  std::uniform_int_distribution<int> len_dist(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, kLetters.size() - 1);
  std::string word;
  const int len = len_dist(rng);
  for (int i = 0; i < len; ++i) word += kLetters[pick(rng)];
  return word;
}

std::vector<std::string> random_sentence(std::mt19937& rng, int words) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(words));
  for (int i = 0; i < words; ++i) out.push_back(random_word(rng, 2, 7));
  return out;
}

// Perturbs roughly 30% of tokens: substitutions, deletions and space drops.
std::vector<std::string> perturb(std::mt19937& rng, const std::vector<std::string>& words) {
  std::uniform_int_distribution<int> coin(0, 9);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const int roll = coin(rng);
    if (roll == 0 && i + 1 < words.size()) {
      out.push_back(words[i] + words[i + 1]);
      ++i;
    } else if (roll == 1) {
      auto cps = gec::uni::decode_utf8(words[i]);
      cps[0] = U'ط';
      out.push_back(gec::uni::encode_utf8(cps));
    } else if (roll != 2) {
      out.push_back(words[i]);
    }
  }
  if (out.empty()) out.push_back(words.front());
  return out;
}

void BM_TokenDistance(benchmark::State& state) {
  std::mt19937 rng(7);
  const auto costs = gec::CostMatrix::with_defaults();
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < 256; ++i) {
    pairs.emplace_back(random_word(rng, 4, 10), random_word(rng, 4, 10));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(gec::token_distance(a, b, costs));
  }
}
BENCHMARK(BM_TokenDistance);

void BM_ExtractEdits(benchmark::State& state) {
  std::mt19937 rng(11);
  const auto costs = gec::CostMatrix::with_defaults();
  std::vector<gec::SentencePair> pairs;
  for (int i = 0; i < 64; ++i) {
    const auto tgt = random_sentence(rng, static_cast<int>(state.range(0)));
    const auto src = perturb(rng, tgt);
    pairs.push_back({gec::Sentence(src, "s"), gec::Sentence(tgt, "t")});
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gec::extract_edits(pairs[i++ % pairs.size()], costs));
  }
}
BENCHMARK(BM_ExtractEdits)->Arg(10)->Arg(25)->Arg(50);

void BM_M2Sentence(benchmark::State& state) {
  std::mt19937 rng(13);
  const int words = static_cast<int>(state.range(0));
  const auto src_words = random_sentence(rng, words);
  auto hyp_words = src_words;
  hyp_words[static_cast<std::size_t>(words) / 2] = "من";

  gec::M2Record record;
  record.source_tokens = src_words;
  record.annotations.push_back(
      {0, {{static_cast<std::size_t>(words) / 2, static_cast<std::size_t>(words) / 2 + 1,
            "O", "من"}}});

  const std::vector<gec::Sentence> sources{gec::Sentence(src_words, "1")};
  const std::vector<gec::Sentence> hyps{gec::Sentence(hyp_words, "1")};
  const std::vector<gec::M2Record> gold{record};

  gec::M2Options options;
  options.timeout_enabled = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gec::m2_score(sources, hyps, gold, options));
  }
}
BENCHMARK(BM_M2Sentence)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
