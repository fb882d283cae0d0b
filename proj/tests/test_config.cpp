#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "gec/config.hpp"
#include "gec/errors.hpp"

using namespace gec;

namespace {

struct TempConfig {
  std::string path;
  explicit TempConfig(const std::string& content) {
    static int counter = 0;
    path = "gec_test_cfg_" + std::to_string(counter++) + ".cfg";
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  ~TempConfig() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config parses key value pairs and comments") {
  TempConfig file(
      "# comment\n"
      "align.confusion_cost = 0.5\n"
      "annotate.threshold = 7   # trailing comment\n"
      "m2.timeout_secs = 12.5\n"
      "jobs = 4\n");
  Config config;
  config.load_file(file.path);
  CHECK(config.align_confusion_cost == doctest::Approx(0.5));
  CHECK(config.annotate_threshold == 7);
  CHECK(config.m2_timeout_secs == doctest::Approx(12.5));
  CHECK(config.jobs == 4);
}

TEST_CASE("config rejects unknown keys") {
  TempConfig file("align.bogus = 1\n");
  Config config;
  CHECK_THROWS_AS(config.load_file(file.path), ValidationError);
}

TEST_CASE("config rejects negative numerics") {
  TempConfig file("align.default_indel = -1\n");
  Config config;
  CHECK_THROWS_AS(config.load_file(file.path), ValidationError);
}

TEST_CASE("config rejects malformed lines and values") {
  Config config;
  CHECK_THROWS_AS(config.apply("m2.beta", "abc"), ValidationError);
  CHECK_THROWS_AS(config.apply("annotate.threshold", "1.5"), ValidationError);
  CHECK_THROWS_AS(config.apply("m2.case_insensitive", "maybe"), ValidationError);
  TempConfig file("no equals sign here\n");
  CHECK_THROWS_AS(config.load_file(file.path), FormatError);
}

TEST_CASE("cost matrix built from config") {
  Config config;
  const auto costs = config.make_cost_matrix();
  // default confusion pairs at 0.25
  CHECK(costs.substitution(0x0623, 0x0627) == doctest::Approx(0.25));
  CHECK(costs.substitution(0x0627, 0x0623) == doctest::Approx(0.25));
  CHECK(costs.substitution(0x064A, 0x0649) == doctest::Approx(0.25));
  CHECK(costs.substitution(0x0629, 0x0647) == doctest::Approx(0.25));
  CHECK(costs.substitution(U'a', U'b') == doctest::Approx(1.0));
  CHECK(costs.substitution(U'a', U'a') == 0.0);
  // diacritics indel at 0.25
  CHECK(costs.indel(0x064E) == doctest::Approx(0.25));
  CHECK(costs.indel(U'a') == doctest::Approx(1.0));
  CHECK(costs.token_indel_bias() == doctest::Approx(0.1));
}

TEST_CASE("config cost overrides take effect") {
  Config config;
  config.apply("align.confusion_pairs", "ab");
  config.apply("align.confusion_cost", "0.125");
  config.apply("align.diacritics", "z");
  config.apply("align.diacritic_cost", "0.0");
  const auto costs = config.make_cost_matrix();
  CHECK(costs.substitution(U'a', U'b') == doctest::Approx(0.125));
  CHECK(costs.indel(U'z') == 0.0);
  // the Arabic defaults were replaced
  CHECK(costs.substitution(0x0623, 0x0627) == doctest::Approx(1.0));
}

TEST_CASE("config rejects bad confusion pair entries") {
  Config config;
  config.apply("align.confusion_pairs", "abc");
  CHECK_THROWS_AS(config.make_cost_matrix(), ValidationError);
}

TEST_CASE("config carries io path defaults") {
  TempConfig file(
      "io.src = data/a.txt\n"
      "io.tgt = data/b.txt\n"
      "io.model = models/m.tsv\n");
  Config config;
  config.load_file(file.path);
  CHECK(config.io_src == "data/a.txt");
  CHECK(config.io_tgt == "data/b.txt");
  CHECK(config.io_model == "models/m.tsv");
  CHECK(config.io_out.empty());
}

TEST_CASE("granularity validation") {
  Config config;
  config.apply("ged.granularity", "13");
  config.validate();
  config.apply("ged.granularity", "7");
  CHECK_THROWS_AS(config.validate(), ValidationError);
}
