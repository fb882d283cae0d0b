#include "gec/config.hpp"

#include <charconv>
#include <cstdlib>

#include "gec/corpus.hpp"
#include "gec/errors.hpp"
#include "gec/unicode.hpp"

namespace gec {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end != value.c_str() + value.size() || value.empty()) {
    throw ValidationError("config key '" + key + "': expected a number, got '" + value + "'");
  }
  return v;
}

long parse_long(const std::string& key, const std::string& value) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ValidationError("config key '" + key + "': expected an integer, got '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ValidationError("config key '" + key + "': expected true/false, got '" + value + "'");
}

}  // namespace

void Config::apply(const std::string& key, const std::string& value) {
  if (key == "align.default_substitution") {
    align_default_substitution = parse_double(key, value);
  } else if (key == "align.default_indel") {
    align_default_indel = parse_double(key, value);
  } else if (key == "align.indel_bias") {
    align_indel_bias = parse_double(key, value);
  } else if (key == "align.confusion_cost") {
    align_confusion_cost = parse_double(key, value);
  } else if (key == "align.diacritic_cost") {
    align_diacritic_cost = parse_double(key, value);
  } else if (key == "align.confusion_pairs") {
    align_confusion_pairs = value;
  } else if (key == "align.diacritics") {
    align_diacritics = value;
  } else if (key == "annotate.threshold") {
    annotate_threshold = parse_long(key, value);
  } else if (key == "m2.timeout_secs") {
    m2_timeout_secs = parse_double(key, value);
  } else if (key == "m2.max_unchanged") {
    m2_max_unchanged = static_cast<int>(parse_long(key, value));
  } else if (key == "m2.beta") {
    m2_beta = parse_double(key, value);
  } else if (key == "m2.case_insensitive") {
    m2_case_insensitive = parse_bool(key, value);
  } else if (key == "ged.granularity") {
    ged_granularity = static_cast<int>(parse_long(key, value));
  } else if (key == "jobs") {
    jobs = static_cast<int>(parse_long(key, value));
  } else if (key == "io.src") {
    io_src = value;
  } else if (key == "io.tgt") {
    io_tgt = value;
  } else if (key == "io.in") {
    io_in = value;
  } else if (key == "io.out") {
    io_out = value;
  } else if (key == "io.gold") {
    io_gold = value;
  } else if (key == "io.hyp") {
    io_hyp = value;
  } else if (key == "io.pred") {
    io_pred = value;
  } else if (key == "io.model") {
    io_model = value;
  } else if (key == "io.ged") {
    io_ged = value;
  } else {
    throw ValidationError("unknown config key '" + key + "'");
  }
}

void Config::load_file(const std::string& path) {
  const auto content = read_file(path);
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const auto nl = content.find('\n', pos);
    std::string line = content.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? content.size() + 1 : nl + 1;
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError(path, lineno, "expected 'key = value'");
    }
    apply(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  validate();
}

void Config::validate() const {
  auto non_negative = [](const char* name, double v) {
    if (v < 0.0) throw ValidationError(std::string("config key '") + name + "' must be non-negative");
  };
  non_negative("align.default_substitution", align_default_substitution);
  non_negative("align.default_indel", align_default_indel);
  non_negative("align.indel_bias", align_indel_bias);
  non_negative("align.confusion_cost", align_confusion_cost);
  non_negative("align.diacritic_cost", align_diacritic_cost);
  non_negative("annotate.threshold", static_cast<double>(annotate_threshold));
  non_negative("m2.timeout_secs", m2_timeout_secs);
  non_negative("m2.max_unchanged", m2_max_unchanged);
  non_negative("m2.beta", m2_beta);
  non_negative("jobs", jobs);
  if (ged_granularity != 43 && ged_granularity != 13 && ged_granularity != 2) {
    throw ValidationError("ged.granularity must be one of 43, 13, 2");
  }
}

CostMatrix Config::make_cost_matrix() const {
  validate();
  CostMatrix costs;
  costs.set_default_substitution(align_default_substitution);
  costs.set_default_indel(align_default_indel);
  costs.set_token_indel_bias(align_indel_bias);
  if (!align_confusion_pairs.empty()) {
    std::size_t pos = 0;
    while (pos <= align_confusion_pairs.size()) {
      const auto comma = align_confusion_pairs.find(',', pos);
      const auto piece = align_confusion_pairs.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos);
      pos = comma == std::string::npos ? align_confusion_pairs.size() + 1 : comma + 1;
      if (piece.empty()) continue;
      const auto cps = uni::decode_utf8(piece);
      if (cps.size() != 2) {
        throw ValidationError("align.confusion_pairs entries must be exactly two characters");
      }
      costs.set_pair(cps[0], cps[1], align_confusion_cost);
    }
  }
  for (char32_t c : uni::decode_utf8(align_diacritics)) {
    costs.set_char_indel(c, align_diacritic_cost);
  }
  return costs;
}

}  // namespace gec
