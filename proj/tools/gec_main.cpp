// Command line front end: alignment extraction, error-type annotation, GED
// label projection, the MLE corrector and the M2/GED scorers, all driven by
// one multiplexed executable.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gec/align.hpp"
#include "gec/annotate.hpp"
#include "gec/config.hpp"
#include "gec/corpus.hpp"
#include "gec/errors.hpp"
#include "gec/ged_metrics.hpp"
#include "gec/m2_scorer.hpp"
#include "gec/mle.hpp"
#include "gec/parallel.hpp"
#include "gec/report.hpp"

namespace {

constexpr const char* kVersion =
    "gec 0.1.0 (formats: m2 1, ged 1, align 1, mle 1)";

struct GlobalArgs {
  std::string config_path;
  int jobs = 1;
  bool jobs_set = false;
};

gec::Config load_config(const GlobalArgs& args) {
  gec::Config config;
  if (!args.config_path.empty()) config.load_file(args.config_path);
  if (args.jobs_set) config.jobs = args.jobs;
  config.validate();
  return config;
}

// Flag value if given, else the config manifest value; mandatory inputs must
// come from one of the two.
std::string resolved_path(const std::string& flag_value, const std::string& config_value,
                          const char* what, bool required) {
  if (!flag_value.empty()) return flag_value;
  if (!config_value.empty()) return config_value;
  if (required) {
    throw gec::ValidationError(std::string(what) + " is required (flag or config io.* key)");
  }
  return "";
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    gec::write_file(out_path, content);
  }
}

std::vector<gec::AnnotatedPair> annotate_corpus(const std::vector<gec::SentencePair>& pairs,
                                                const gec::CostMatrix& costs,
                                                const std::string& external_tags_path,
                                                int jobs) {
  std::vector<gec::Alignment> alignments(pairs.size());
  gec::parallel_for(pairs.size(), jobs, [&](std::size_t i) {
    alignments[i] = gec::extract_edits(pairs[i], costs);
  });

  std::vector<gec::AnnotatedPair> annotated(pairs.size());
  if (external_tags_path.empty()) {
    gec::parallel_for(pairs.size(), jobs, [&](std::size_t i) {
      annotated[i] = gec::annotate_builtin(pairs[i], alignments[i], costs);
    });
    return annotated;
  }

  const auto tag_lines = gec::read_tag_lines(external_tags_path);
  if (tag_lines.size() != pairs.size()) {
    throw gec::ValidationError("tag file has " + std::to_string(tag_lines.size()) +
                               " lines but the corpus has " + std::to_string(pairs.size()) +
                               " sentences");
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    try {
      annotated[i] = gec::ingest_annotations(pairs[i], alignments[i], tag_lines[i]);
    } catch (const gec::ValidationError& e) {
      throw gec::ValidationError("sentence " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return annotated;
}

int run_align(const GlobalArgs& global, const std::string& src_flag,
              const std::string& tgt_flag, const std::string& out_flag,
              const std::string& m2_out) {
  const auto config = load_config(global);
  const auto src_path = resolved_path(src_flag, config.io_src, "--src", true);
  const auto tgt_path = resolved_path(tgt_flag, config.io_tgt, "--tgt", true);
  const auto out_path = resolved_path(out_flag, config.io_out, "--out", false);
  const auto costs = config.make_cost_matrix();
  const auto pairs = gec::read_parallel(src_path, tgt_path);

  std::vector<gec::Alignment> alignments(pairs.size());
  gec::parallel_for(pairs.size(), config.jobs, [&](std::size_t i) {
    alignments[i] = gec::extract_edits(pairs[i], costs);
  });

  std::string ops_text;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    gec::append_alignment_tsv(ops_text, alignments[i], pairs[i]);
  }
  emit(out_path, ops_text);

  if (!m2_out.empty()) {
    std::vector<gec::M2Record> records;
    records.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      records.push_back(gec::to_m2_record(pairs[i], alignments[i]));
    }
    gec::write_file(m2_out, gec::write_m2(records));
  }
  return 0;
}

int run_annotate(const GlobalArgs& global, const std::string& src_flag,
                 const std::string& tgt_flag, const std::string& m2_out,
                 const std::string& tags_out, const std::string& ged_out,
                 const std::string& external_tags, const std::string& modeled_in,
                 const std::string& modeled_out, int granularity, long threshold,
                 bool threshold_set) {
  const auto config = load_config(global);
  const auto src_path = resolved_path(src_flag, config.io_src, "--src", true);
  const auto tgt_path = resolved_path(tgt_flag, config.io_tgt, "--tgt", true);
  const auto costs = config.make_cost_matrix();
  const auto pairs = gec::read_parallel(src_path, tgt_path);
  const auto annotated = annotate_corpus(pairs, costs, external_tags, config.jobs);

  if (!m2_out.empty()) {
    std::vector<gec::M2Record> records;
    records.reserve(annotated.size());
    for (const auto& ann : annotated) records.push_back(gec::to_m2_record(ann));
    gec::write_file(m2_out, gec::write_m2(records));
  }
  if (!tags_out.empty()) {
    std::string text;
    for (const auto& ann : annotated) text += gec::write_tag_line(ann);
    gec::write_file(tags_out, text);
  }

  if (!ged_out.empty() || !modeled_out.empty()) {
    std::set<std::string> modeled;
    if (!modeled_in.empty()) {
      modeled = gec::parse_modeled(gec::read_file(modeled_in));
    } else {
      const long effective = threshold_set ? threshold : config.annotate_threshold;
      modeled = gec::select_modeled(gec::count_tag_frequencies(annotated), effective);
    }
    if (!modeled_out.empty()) {
      gec::write_file(modeled_out, gec::write_modeled(modeled));
    }
    if (!ged_out.empty()) {
      const auto gran = gec::granularity_from_int(granularity);
      std::vector<gec::GedRecord> records;
      records.reserve(annotated.size());
      for (const auto& ann : annotated) {
        records.push_back(gec::project_ged_labels(ann, gran, modeled));
      }
      gec::write_file(ged_out, gec::write_ged(records));
    }
  }
  return 0;
}

int run_project(const GlobalArgs& global, const std::string& in_flag, int to,
                const std::string& out_flag) {
  const auto config = load_config(global);
  const auto in_path = resolved_path(in_flag, config.io_in, "--in", true);
  const auto out_path = resolved_path(out_flag, config.io_out, "--out", false);
  const auto gran = gec::granularity_from_int(to);
  if (gran == gec::Granularity::Full43) {
    throw gec::ValidationError("--to must be 13 or 2 (labels are already 43-class at most)");
  }
  const auto records = gec::read_ged(in_path);
  std::vector<gec::GedRecord> projected;
  projected.reserve(records.size());
  for (const auto& record : records) {
    std::vector<std::string> labels;
    labels.reserve(record.size());
    for (const auto& label : record.labels()) {
      labels.push_back(gec::reduce_label(label, gran));
    }
    projected.emplace_back(record.tokens(), std::move(labels));
  }
  emit(out_path, gec::write_ged(projected));
  return 0;
}

int run_preprocess(const GlobalArgs& global, const std::string& ged_flag,
                   const std::string& src_flag, const std::string& out_flag) {
  const auto config = load_config(global);
  const auto ged_path = resolved_path(ged_flag, config.io_ged, "--ged", true);
  const auto src_path = resolved_path(src_flag, config.io_src, "--src", false);
  const auto out_path = resolved_path(out_flag, config.io_out, "--out", false);
  const auto records = gec::read_ged(ged_path);

  if (!src_path.empty()) {
    const auto sources = gec::read_sentences(src_path);
    if (sources.size() != records.size()) {
      throw gec::ValidationError("--src has " + std::to_string(sources.size()) +
                                 " sentences but the GED file has " +
                                 std::to_string(records.size()));
    }
    for (std::size_t i = 0; i < sources.size(); ++i) {
      if (sources[i].size() != records[i].size()) {
        throw gec::ValidationError("sentence " + std::to_string(i + 1) +
                                   ": --src and GED token counts differ");
      }
    }
  }

  std::string text;
  int orphans = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    gec::Sentence source(records[i].tokens(), std::to_string(i + 1));
    auto resolved = gec::resolve_detections(source, records[i].labels());
    orphans += resolved.orphan_merge_i;
    text += resolved.sentence.text();
    text += '\n';
  }
  emit(out_path, text);
  if (orphans > 0) {
    std::cerr << "warning: " << orphans << " Merge-I label(s) without a preceding Merge-B\n";
  }
  return 0;
}

int run_mle_train(const GlobalArgs& global, const std::string& src_flag,
                  const std::string& tgt_flag, const std::string& external_tags,
                  bool no_tags, const std::string& out_flag) {
  const auto config = load_config(global);
  const auto src_path = resolved_path(src_flag, config.io_src, "--src", true);
  const auto tgt_path = resolved_path(tgt_flag, config.io_tgt, "--tgt", true);
  const auto out_path = resolved_path(out_flag, config.io_out, "--out", false);
  const auto costs = config.make_cost_matrix();
  const auto pairs = gec::read_parallel(src_path, tgt_path);
  const auto annotated = annotate_corpus(pairs, costs, external_tags, config.jobs);
  const auto model = gec::mle_train(annotated, !no_tags);
  emit(out_path, model.serialize());
  return 0;
}

int run_mle_apply(const GlobalArgs& global, const std::string& model_flag,
                  const std::string& src_flag, const std::string& ged_flag,
                  const std::string& out_flag) {
  const auto config = load_config(global);
  const auto model_path = resolved_path(model_flag, config.io_model, "--model", true);
  const auto src_path = resolved_path(src_flag, config.io_src, "--src", true);
  const auto ged_path = resolved_path(ged_flag, config.io_ged, "--ged", false);
  const auto out_path = resolved_path(out_flag, config.io_out, "--out", false);
  const auto model = gec::MleModel::parse(gec::read_file(model_path), model_path);
  const auto sources = gec::read_sentences(src_path);

  std::vector<gec::GedRecord> labels;
  if (!ged_path.empty()) {
    labels = gec::read_ged(ged_path);
    if (labels.size() != sources.size()) {
      throw gec::ValidationError("GED file has " + std::to_string(labels.size()) +
                                 " sentences but --src has " + std::to_string(sources.size()));
    }
  }

  std::vector<std::string> lines(sources.size());
  gec::parallel_for(sources.size(), config.jobs, [&](std::size_t i) {
    const std::vector<std::string>* sentence_labels =
        ged_path.empty() ? nullptr : &labels[i].labels();
    lines[i] = gec::mle_apply(model, sources[i], sentence_labels).text();
  });

  std::string text;
  for (const auto& line : lines) {
    text += line;
    text += '\n';
  }
  emit(out_path, text);
  return 0;
}

int run_m2_score(const GlobalArgs& global, const std::string& gold_flag,
                 const std::string& hyp_flag, const std::string& src_flag, double beta,
                 bool beta_set, int max_unchanged, bool max_unchanged_set,
                 double timeout_secs, bool timeout_set, bool tsv) {
  auto config = load_config(global);
  const auto gold_path = resolved_path(gold_flag, config.io_gold, "--gold", true);
  const auto hyp_path = resolved_path(hyp_flag, config.io_hyp, "--hyp", true);
  const auto src_path = resolved_path(src_flag, config.io_src, "--src", false);
  const auto gold = gec::read_m2(gold_path);
  const auto hypotheses = gec::read_sentences(hyp_path);

  std::vector<gec::Sentence> sources;
  if (!src_path.empty()) {
    sources = gec::read_sentences(src_path);
  } else {
    sources.reserve(gold.size());
    for (std::size_t i = 0; i < gold.size(); ++i) {
      sources.emplace_back(gold[i].source_tokens, std::to_string(i + 1));
    }
  }

  gec::M2Options options;
  options.beta = beta_set ? beta : config.m2_beta;
  options.max_unchanged_words = max_unchanged_set ? max_unchanged : config.m2_max_unchanged;
  options.timeout_secs = timeout_set ? timeout_secs : config.m2_timeout_secs;
  options.case_insensitive = config.m2_case_insensitive;
  options.jobs = config.jobs;

  const auto score = gec::m2_score(sources, hypotheses, gold, options);
  std::cout << gec::render_gec_report(score,
                                      tsv ? gec::ReportFormat::Tsv : gec::ReportFormat::Human);
  return 0;
}

int run_ged_score(const GlobalArgs& global, const std::string& gold_flag,
                  const std::string& pred_flag, int granularity, bool tsv) {
  const auto config = load_config(global);
  const auto gold_path = resolved_path(gold_flag, config.io_gold, "--gold", true);
  const auto pred_path = resolved_path(pred_flag, config.io_pred, "--pred", true);
  const auto gran = gec::granularity_from_int(granularity);
  auto gold = gec::read_ged(gold_path);
  auto pred = gec::read_ged(pred_path);
  if (gran != gec::Granularity::Full43) {
    auto reduce = [&](std::vector<gec::GedRecord>& records) {
      for (auto& record : records) {
        std::vector<std::string> labels;
        labels.reserve(record.size());
        for (const auto& label : record.labels()) {
          labels.push_back(gec::reduce_label(label, gran));
        }
        record = gec::GedRecord(record.tokens(), std::move(labels));
      }
    };
    reduce(gold);
    reduce(pred);
  }
  const auto score = gec::ged_score(gold, pred);
  std::cout << gec::render_ged_report(score,
                                      tsv ? gec::ReportFormat::Tsv : gec::ReportFormat::Human);
  return 0;
}

int run_stats(const GlobalArgs& global, const std::string& src_flag,
              const std::string& tgt_flag, const std::string& external_tags,
              const std::string& by, const std::string& out_flag) {
  if (by != "combination" && by != "component") {
    throw gec::ValidationError("--by must be 'combination' or 'component'");
  }
  const auto config = load_config(global);
  const auto src_path = resolved_path(src_flag, config.io_src, "--src", true);
  const auto tgt_path = resolved_path(tgt_flag, config.io_tgt, "--tgt", true);
  const auto out_path = resolved_path(out_flag, config.io_out, "--out", false);
  const auto costs = config.make_cost_matrix();
  const auto pairs = gec::read_parallel(src_path, tgt_path);
  const auto annotated = annotate_corpus(pairs, costs, external_tags, config.jobs);
  const auto rows = gec::error_distribution(annotated, by == "component");
  emit(out_path, gec::render_distribution(rows));
  return 0;
}

}  // namespace

namespace {

int run_tool(int argc, char** argv) {
  CLI::App app{"Edit extraction, error typing and scoring toolkit for "
               "grammatical error correction corpora"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  GlobalArgs global;
  app.add_option("--config", global.config_path, "Key=value configuration file");
  auto* jobs_opt =
      app.add_option("--jobs", global.jobs, "Worker threads for per-sentence stages")
          ->check(CLI::PositiveNumber);

  // align
  auto* align = app.add_subcommand("align", "Extract token edit operations from parallel text");
  std::string al_src, al_tgt, al_out, al_m2;
  align->add_option("--src", al_src, "Erroneous side, one sentence per line");
  align->add_option("--tgt", al_tgt, "Corrected side, one sentence per line");
  align->add_option("--out", al_out, "Alignment ops TSV ('-' for stdout)");
  align->add_option("--m2-out", al_m2, "Also write the non-keep ops as an M2 file");

  // annotate
  auto* annotate = app.add_subcommand("annotate", "Assign error types to extracted edits");
  std::string an_src, an_tgt, an_m2, an_tags, an_ged, an_ext, an_modin, an_modout;
  int an_gran = 43;
  long an_threshold = 100;
  annotate->add_option("--src", an_src);
  annotate->add_option("--tgt", an_tgt);
  annotate->add_option("--m2-out", an_m2, "M2 file typed with canonical tags");
  annotate->add_option("--tags-out", an_tags, "Per-sentence tag lines (ingestion format)");
  annotate->add_option("--ged-out", an_ged, "Token/label TSV at --granularity");
  annotate->add_option("--external-tags", an_ext,
                       "Ingest external annotator tags instead of the built-in classifier");
  annotate->add_option("--modeled-in", an_modin, "Read the modeled label set from a file");
  annotate->add_option("--modeled-out", an_modout, "Write the modeled label set");
  annotate->add_option("--granularity", an_gran, "43, 13 or 2")->check(CLI::IsMember({43, 13, 2}));
  auto* thr_opt = annotate->add_option("--threshold", an_threshold,
                                       "Minimum combination count to model (exclusive)");

  // project
  auto* project = app.add_subcommand("project", "Convert GED labels to a coarser granularity");
  std::string pj_in, pj_out;
  int pj_to = 13;
  project->add_option("--in", pj_in, "GED TSV input");
  project->add_option("--to", pj_to, "Target granularity: 13 or 2")->required();
  project->add_option("--out", pj_out, "Output TSV ('-' for stdout)");

  // preprocess
  auto* preprocess =
      app.add_subcommand("preprocess", "Resolve detected merge/delete labels in source text");
  std::string pp_ged, pp_src, pp_out;
  preprocess->add_option("--ged", pp_ged, "GED TSV with tokens and labels");
  preprocess->add_option("--src", pp_src, "Optional source text to cross-check tokens");
  preprocess->add_option("--out", pp_out, "Resolved text ('-' for stdout)");

  // mle-train
  auto* mle_train = app.add_subcommand("mle-train", "Train the bigram MLE corrector");
  std::string mt_src, mt_tgt, mt_ext, mt_out;
  bool mt_no_tags = false;
  mle_train->add_option("--src", mt_src);
  mle_train->add_option("--tgt", mt_tgt);
  mle_train->add_option("--external-tags", mt_ext, "Ingested tags for error-type conditioning");
  mle_train->add_flag("--no-tags", mt_no_tags, "Train under the ANY wildcard type");
  mle_train->add_option("--out", mt_out, "Model TSV ('-' for stdout)");

  // mle-apply
  auto* mle_apply = app.add_subcommand("mle-apply", "Apply a trained MLE model");
  std::string ma_model, ma_src, ma_ged, ma_out;
  mle_apply->add_option("--model", ma_model);
  mle_apply->add_option("--src", ma_src);
  mle_apply->add_option("--ged", ma_ged, "Detected labels aligned to --src");
  mle_apply->add_option("--out", ma_out, "Corrected text ('-' for stdout)");

  // m2-score
  auto* m2s = app.add_subcommand("m2-score", "MaxMatch GEC scoring with per-sentence timeout");
  std::string ms_gold, ms_hyp, ms_src;
  double ms_beta = 0.5;
  int ms_max_unchanged = 2;
  double ms_timeout = 30.0;
  bool ms_tsv = false;
  m2s->add_option("--gold", ms_gold, "Gold M2 file");
  m2s->add_option("--hyp", ms_hyp, "System output, one sentence per line");
  m2s->add_option("--src", ms_src, "Source text (defaults to the M2 S-lines)");
  auto* beta_opt = m2s->add_option("--beta", ms_beta, "F-measure beta for annotator choice");
  auto* mu_opt = m2s->add_option("--max-unchanged", ms_max_unchanged,
                                 "Max kept words folded into a compound edit");
  auto* to_opt = m2s->add_option("--timeout-secs", ms_timeout,
                                 "Per-sentence budget; exceeded sentences score as unchanged");
  m2s->add_flag("--tsv", ms_tsv, "Machine-readable report");

  // ged-score
  auto* geds = app.add_subcommand("ged-score", "Macro P/R/F0.5 and accuracy for GED labels");
  std::string gs_gold, gs_pred;
  int gs_gran = 43;
  bool gs_tsv = false;
  geds->add_option("--gold", gs_gold);
  geds->add_option("--pred", gs_pred);
  geds->add_option("--granularity", gs_gran, "Reduce both sides before scoring")
      ->check(CLI::IsMember({43, 13, 2}));
  geds->add_flag("--tsv", gs_tsv, "Machine-readable report");

  // stats
  auto* stats = app.add_subcommand("stats", "Error type distribution over a parallel corpus");
  std::string st_src, st_tgt, st_ext, st_out;
  std::string st_by = "combination";
  stats->add_option("--src", st_src);
  stats->add_option("--tgt", st_tgt);
  stats->add_option("--external-tags", st_ext);
  stats->add_option("--by", st_by, "'combination' or 'component'");
  stats->add_option("--out", st_out, "Distribution TSV ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  global.jobs_set = jobs_opt->count() > 0;

  try {
    if (align->parsed()) return run_align(global, al_src, al_tgt, al_out, al_m2);
    if (annotate->parsed()) {
      return run_annotate(global, an_src, an_tgt, an_m2, an_tags, an_ged, an_ext, an_modin,
                          an_modout, an_gran, an_threshold, thr_opt->count() > 0);
    }
    if (project->parsed()) return run_project(global, pj_in, pj_to, pj_out);
    if (preprocess->parsed()) return run_preprocess(global, pp_ged, pp_src, pp_out);
    if (mle_train->parsed()) {
      return run_mle_train(global, mt_src, mt_tgt, mt_ext, mt_no_tags, mt_out);
    }
    if (mle_apply->parsed()) return run_mle_apply(global, ma_model, ma_src, ma_ged, ma_out);
    if (m2s->parsed()) {
      return run_m2_score(global, ms_gold, ms_hyp, ms_src, ms_beta, beta_opt->count() > 0,
                          ms_max_unchanged, mu_opt->count() > 0, ms_timeout,
                          to_opt->count() > 0, ms_tsv);
    }
    if (geds->parsed()) return run_ged_score(global, gs_gold, gs_pred, gs_gran, gs_tsv);
    if (stats->parsed()) return run_stats(global, st_src, st_tgt, st_ext, st_by, st_out);
  } catch (const gec::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gec::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (...) {
    std::cerr << "error: unexpected failure\n";
    return 1;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_tool(argc, argv);
  } catch (...) {
    std::fputs("error: unexpected failure\n", stderr);
    return 1;
  }
}
