#include "gec/annotate.hpp"

#include <algorithm>

#include "gec/errors.hpp"
#include "gec/unicode.hpp"

namespace gec {

namespace {

const std::set<std::string> kStructuralComponents = {"Merge", "Split", "Delete",
                                                     "Insert", "UNK", "C"};

const std::set<std::string> kInventory13 = {"Delete", "Merge-B", "Merge-I", "M",
                                            "M+O",    "O",       "O+X",     "P",
                                            "S",      "X",       "Split",   "UNK",
                                            "C"};

bool is_main_class(const std::string& comp) {
  return comp == "O" || comp == "M" || comp == "X" || comp == "S" || comp == "P";
}

// ARETA subtags start with their main-class letter (OH, MI, XC, ...);
// structural components are never reduced this way.
std::string main_class_of(const std::string& comp) {
  if (kStructuralComponents.count(comp)) return "";
  if (comp.empty()) return "";
  const char c = comp[0];
  if (c == 'O' || c == 'M' || c == 'X' || c == 'S' || c == 'P') return std::string(1, c);
  return "";
}

std::u32string strip_edge_punct(const std::u32string& cps) {
  std::size_t b = 0;
  std::size_t e = cps.size();
  while (b < e && uni::is_punct(cps[b])) ++b;
  while (e > b && uni::is_punct(cps[e - 1])) --e;
  return cps.substr(b, e - b);
}

// True when `a` can be turned into `b` using only confusion-pair
// substitutions and diacritic insertions/deletions.
bool orthographic_variant(const std::u32string& a, const std::u32string& b,
                          const CostMatrix& costs) {
  const auto& pairs = costs.confusion_pairs();
  const auto& cheap = costs.cheap_indel_chars();
  auto confusable = [&](char32_t x, char32_t y) {
    return pairs.count(x <= y ? std::pair{x, y} : std::pair{y, x}) > 0;
  };

  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<std::vector<char>> ok(n + 1, std::vector<char>(m + 1, 0));
  ok[0][0] = 1;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      if (!ok[i][j]) continue;
      if (i < n && j < m && (a[i] == b[j] || confusable(a[i], b[j]))) ok[i + 1][j + 1] = 1;
      if (i < n && cheap.count(a[i])) ok[i + 1][j] = 1;
      if (j < m && cheap.count(b[j])) ok[i][j + 1] = 1;
    }
  }
  return ok[n][m] != 0;
}

}  // namespace

std::string TagSet::canonical() const {
  std::string out;
  for (const auto& comp : components) {
    if (!out.empty()) out.push_back('+');
    out += comp;
  }
  return out;
}

TagSet classify_builtin(const EditOp& op, const SentencePair& pair, const CostMatrix& costs) {
  switch (op.kind) {
    case OpKind::Keep: return {{"C"}};
    case OpKind::Merge: return {{"Merge"}};
    case OpKind::Split: return {{"Split"}};
    case OpKind::Delete: return {{"Delete"}};
    case OpKind::Insert: return {{"Insert"}};
    case OpKind::Replace: break;
  }
  const auto a = uni::decode_utf8(pair.source.tokens()[op.source.begin].text());
  const auto b = uni::decode_utf8(pair.target.tokens()[op.target.begin].text());
  if (uni::is_punct_only(a) && uni::is_punct_only(b)) return {{"P"}};
  if (a != b && strip_edge_punct(a) == strip_edge_punct(b)) return {{"P"}};
  if (orthographic_variant(a, b, costs)) return {{"O"}};
  return {{"UNK"}};
}

AnnotatedPair annotate_builtin(const SentencePair& pair, const Alignment& alignment,
                               const CostMatrix& costs) {
  AnnotatedPair out;
  out.pair = pair;
  out.edits.reserve(alignment.ops.size());
  for (const auto& op : alignment.ops) {
    out.edits.push_back({op, classify_builtin(op, pair, costs), false});
  }
  return out;
}

AnnotatedPair ingest_annotations(const SentencePair& pair, const Alignment& alignment,
                                 const std::vector<std::string>& external_tags) {
  std::size_t non_keep = 0;
  for (const auto& op : alignment.ops) {
    if (op.kind != OpKind::Keep) ++non_keep;
  }
  if (non_keep != external_tags.size()) {
    throw ValidationError("expected " + std::to_string(non_keep) +
                          " external tags (one per non-keep edit), got " +
                          std::to_string(external_tags.size()));
  }

  AnnotatedPair out;
  out.pair = pair;
  out.edits.reserve(alignment.ops.size());
  std::size_t next_tag = 0;
  for (const auto& op : alignment.ops) {
    TypedEdit edit;
    edit.op = op;
    switch (op.kind) {
      case OpKind::Keep: edit.tags.components.insert("C"); break;
      case OpKind::Merge: edit.tags.components.insert("Merge"); break;
      case OpKind::Split: edit.tags.components.insert("Split"); break;
      case OpKind::Delete: edit.tags.components.insert("Delete"); break;
      case OpKind::Insert: edit.tags.components.insert("Insert"); break;
      case OpKind::Replace: break;
    }
    if (op.kind != OpKind::Keep) {
      const auto& raw = external_tags[next_tag++];
      std::size_t pos = 0;
      while (pos <= raw.size()) {
        const auto plus = raw.find('+', pos);
        const auto comp = raw.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
        pos = plus == std::string::npos ? raw.size() + 1 : plus + 1;
        if (comp.empty()) continue;
        if (!is_main_class(comp) && !kStructuralComponents.count(comp) &&
            main_class_of(comp).empty()) {
          edit.external_unknown = true;
        }
        edit.tags.components.insert(comp);
      }
      if (edit.tags.components.empty()) {
        throw ValidationError("empty external tag for a non-keep edit");
      }
    }
    out.edits.push_back(std::move(edit));
  }
  return out;
}

Granularity granularity_from_int(int value) {
  switch (value) {
    case 43: return Granularity::Full43;
    case 13: return Granularity::Main13;
    case 2: return Granularity::Binary2;
    default: throw ValidationError("granularity must be one of 43, 13, 2");
  }
}

bool is_structural_label(const std::string& label) {
  return label == "C" || label == "UNK" || label == "Delete" || label == "Merge-B" ||
         label == "Merge-I";
}

TagCounts count_tag_frequencies(const std::vector<AnnotatedPair>& corpus) {
  TagCounts counts;
  for (const auto& annotated : corpus) {
    for (const auto& edit : annotated.edits) {
      if (edit.op.kind == OpKind::Replace || edit.op.kind == OpKind::Split) {
        ++counts[edit.tags.canonical()];
      }
    }
  }
  return counts;
}

std::set<std::string> select_modeled(const TagCounts& counts, long threshold) {
  std::set<std::string> modeled;
  for (const auto& [label, count] : counts) {
    if (count > threshold) modeled.insert(label);
  }
  return modeled;
}

std::string write_modeled(const std::set<std::string>& modeled) {
  std::string out;
  for (const auto& label : modeled) {
    out += label;
    out += '\n';
  }
  return out;
}

std::set<std::string> parse_modeled(const std::string& content) {
  std::set<std::string> modeled;
  std::size_t pos = 0;
  while (pos < content.size()) {
    auto nl = content.find('\n', pos);
    if (nl == std::string::npos) nl = content.size();
    std::string line = content.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) modeled.insert(line);
    pos = nl + 1;
  }
  return modeled;
}

std::string reduce_to_13(const std::string& label43) {
  if (kInventory13.count(label43)) return label43;

  std::set<std::string> mains;
  std::size_t pos = 0;
  while (pos <= label43.size()) {
    const auto plus = label43.find('+', pos);
    const auto comp =
        label43.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
    pos = plus == std::string::npos ? label43.size() + 1 : plus + 1;
    if (comp.empty()) continue;
    const auto main = main_class_of(comp);
    if (!main.empty()) mains.insert(main);
  }

  if (!mains.empty()) {
    TagSet reduced{mains};
    auto candidate = reduced.canonical();
    if (kInventory13.count(candidate)) return candidate;
    for (const char* cls : {"P", "O", "M", "X", "S"}) {
      if (mains.count(cls)) return cls;
    }
  }
  return "UNK";
}

std::string reduce_to_2(const std::string& label) {
  return label == "C" ? "C" : "E";
}

std::string reduce_label(const std::string& label43, Granularity granularity) {
  switch (granularity) {
    case Granularity::Full43: return label43;
    case Granularity::Main13: return reduce_to_13(label43);
    case Granularity::Binary2: return reduce_to_2(label43);
  }
  return label43;
}

GedRecord project_ged_labels(const AnnotatedPair& annotated, Granularity granularity,
                             const std::set<std::string>& modeled) {
  const auto& source = annotated.pair.source;
  std::vector<std::string> labels(source.size());

  for (const auto& edit : annotated.edits) {
    const auto& op = edit.op;
    switch (op.kind) {
      case OpKind::Insert:
        break;  // no source token to label
      case OpKind::Keep:
        for (std::size_t i = op.source.begin; i < op.source.end; ++i) labels[i] = "C";
        break;
      case OpKind::Merge:
        labels[op.source.begin] = "Merge-B";
        for (std::size_t i = op.source.begin + 1; i < op.source.end; ++i) {
          labels[i] = "Merge-I";
        }
        break;
      case OpKind::Delete:
        for (std::size_t i = op.source.begin; i < op.source.end; ++i) labels[i] = "Delete";
        break;
      case OpKind::Replace:
      case OpKind::Split: {
        std::string label = edit.tags.canonical();
        if (!is_structural_label(label) && !modeled.count(label)) label = "UNK";
        for (std::size_t i = op.source.begin; i < op.source.end; ++i) labels[i] = label;
        break;
      }
    }
  }

  if (granularity != Granularity::Full43) {
    for (auto& label : labels) label = reduce_label(label, granularity);
  }

  std::vector<std::string> tokens;
  tokens.reserve(source.size());
  for (const auto& tok : source.tokens()) tokens.push_back(tok.text());
  return GedRecord(std::move(tokens), std::move(labels));
}

ResolveResult resolve_detections(const Sentence& source, const std::vector<std::string>& labels) {
  if (labels.size() != source.size()) {
    throw ValidationError("sentence " + source.id() + ": " + std::to_string(labels.size()) +
                          " labels for " + std::to_string(source.size()) + " tokens");
  }
  ResolveResult result;
  std::vector<std::string> words;
  std::size_t i = 0;
  const auto& tokens = source.tokens();
  while (i < tokens.size()) {
    const auto& label = labels[i];
    if (label == "Delete") {
      ++i;
      continue;
    }
    if (label == "Merge-B") {
      std::string merged = tokens[i].text();
      ++i;
      while (i < tokens.size() && labels[i] == "Merge-I") {
        merged += tokens[i].text();
        ++i;
      }
      words.push_back(std::move(merged));
      continue;
    }
    if (label == "Merge-I") ++result.orphan_merge_i;
    words.push_back(tokens[i].text());
    ++i;
  }
  result.sentence = Sentence(std::move(words), source.id());
  return result;
}

M2Record to_m2_record(const AnnotatedPair& annotated, int annotator_id) {
  M2Record record;
  for (const auto& tok : annotated.pair.source.tokens()) {
    record.source_tokens.push_back(tok.text());
  }
  M2Annotation annotation;
  annotation.annotator_id = annotator_id;
  for (const auto& edit : annotated.edits) {
    if (edit.op.kind == OpKind::Keep) continue;
    annotation.edits.push_back({edit.op.source.begin, edit.op.source.end,
                                edit.tags.canonical(),
                                op_target_text(edit.op, annotated.pair)});
  }
  record.annotations.push_back(std::move(annotation));
  return record;
}

std::vector<std::vector<std::string>> read_tag_lines(const std::string& path) {
  const auto content = read_file(path);
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> cur;
  std::string word;
  auto flush_word = [&]() {
    if (!word.empty()) cur.push_back(std::move(word)), word.clear();
  };
  for (char ch : content) {
    if (ch == '\n') {
      flush_word();
      out.push_back(std::move(cur));
      cur.clear();
    } else if (ch == ' ' || ch == '\t' || ch == '\r') {
      flush_word();
    } else {
      word.push_back(ch);
    }
  }
  flush_word();
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string write_tag_line(const AnnotatedPair& annotated) {
  std::string out;
  for (const auto& edit : annotated.edits) {
    if (edit.op.kind == OpKind::Keep) continue;
    if (!out.empty()) out.push_back(' ');
    out += edit.tags.canonical();
  }
  out.push_back('\n');
  return out;
}

std::vector<DistributionRow> error_distribution(const std::vector<AnnotatedPair>& corpus,
                                                bool by_component) {
  TagCounts counts;
  long total = 0;
  for (const auto& annotated : corpus) {
    for (const auto& edit : annotated.edits) {
      if (edit.op.kind == OpKind::Keep) continue;
      ++total;
      if (by_component) {
        for (const auto& comp : edit.tags.components) ++counts[comp];
      } else {
        ++counts[edit.tags.canonical()];
      }
    }
  }

  std::vector<DistributionRow> rows;
  rows.reserve(counts.size());
  for (const auto& [label, count] : counts) {
    rows.push_back({label, count, total == 0 ? 0.0 : 100.0 * static_cast<double>(count) /
                                                         static_cast<double>(total)});
  }
  std::sort(rows.begin(), rows.end(), [](const DistributionRow& a, const DistributionRow& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.label < b.label;
  });
  return rows;
}

}  // namespace gec
