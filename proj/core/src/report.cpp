#include "gec/report.hpp"

#include <cstdio>

namespace gec {

std::string format_metric(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

std::string render_gec_report(const GecScore& score, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::Tsv) {
    std::string picks;
    for (const auto& [annotator, count] : score.annotator_picks) {
      if (!picks.empty()) picks += ",";
      picks += std::to_string(annotator) + ":" + std::to_string(count);
    }
    out += "matched\tproposed\tgold\tprecision\trecall\tf1\tf0.5\ttimeouts\tannotator_picks\n";
    out += std::to_string(score.matched) + "\t" + std::to_string(score.proposed) + "\t" +
           std::to_string(score.gold) + "\t" + format_metric(score.precision) + "\t" +
           format_metric(score.recall) + "\t" + format_metric(score.f1) + "\t" +
           format_metric(score.f05) + "\t" + std::to_string(score.timeouts) + "\t" + picks +
           "\n";
    return out;
  }
  out += "M2 evaluation\n";
  out += "  matched     " + std::to_string(score.matched) + "\n";
  out += "  proposed    " + std::to_string(score.proposed) + "\n";
  out += "  gold        " + std::to_string(score.gold) + "\n";
  out += "  precision   " + format_metric(score.precision) + "\n";
  out += "  recall      " + format_metric(score.recall) + "\n";
  out += "  F1          " + format_metric(score.f1) + "\n";
  out += "  F0.5        " + format_metric(score.f05) + "\n";
  out += "  timeouts    " + std::to_string(score.timeouts) + "\n";
  out += "  annotator picks:";
  for (const auto& [annotator, count] : score.annotator_picks) {
    out += " " + std::to_string(annotator) + ":" + std::to_string(count);
  }
  out += "\n";
  out += "note: zero proposed edits score precision 1 by convention\n";
  if (score.timeouts > 0) {
    out += "warning: " + std::to_string(score.timeouts) +
           " sentence(s) timed out and scored as unchanged output\n";
  }
  return out;
}

std::string render_ged_report(const GedScore& score, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::Tsv) {
    out += "class\ttp\tfp\tfn\tprecision\trecall\tf0.5\n";
    for (const auto& [label, cls] : score.per_class) {
      out += label + "\t" + std::to_string(cls.tp) + "\t" + std::to_string(cls.fp) + "\t" +
             std::to_string(cls.fn) + "\t" + format_metric(cls.precision) + "\t" +
             format_metric(cls.recall) + "\t" + format_metric(cls.f05) + "\n";
    }
    out += "macro\t-\t-\t-\t" + format_metric(score.macro_precision) + "\t" +
           format_metric(score.macro_recall) + "\t" + format_metric(score.macro_f05) + "\n";
    out += "accuracy\t" + std::to_string(score.correct) + "\t-\t-\t" +
           format_metric(score.accuracy) + "\t-\t-\n";
    return out;
  }
  out += "GED evaluation\n";
  out += "  class             P       R       F0.5\n";
  for (const auto& [label, cls] : score.per_class) {
    std::string padded = label;
    if (padded.size() < 16) padded.append(16 - padded.size(), ' ');
    out += "  " + padded + "  " + format_metric(cls.precision) + "  " +
           format_metric(cls.recall) + "  " + format_metric(cls.f05) + "\n";
  }
  out += "  macro P     " + format_metric(score.macro_precision) + "\n";
  out += "  macro R     " + format_metric(score.macro_recall) + "\n";
  out += "  macro F0.5  " + format_metric(score.macro_f05) + "\n";
  out += "  accuracy    " + format_metric(score.accuracy) + " (" +
         std::to_string(score.correct) + "/" + std::to_string(score.total) + ")\n";
  return out;
}

std::string render_alignment_report(const AlignmentScore& score, ReportFormat format) {
  if (format == ReportFormat::Tsv) {
    return "precision\trecall\taer\n" + format_metric(score.precision) + "\t" +
           format_metric(score.recall) + "\t" + format_metric(score.aer) + "\n";
  }
  return "Alignment evaluation\n  precision   " + format_metric(score.precision) +
         "\n  recall      " + format_metric(score.recall) + "\n  AER         " +
         format_metric(score.aer) + "\n";
}

std::string render_distribution(const std::vector<DistributionRow>& rows) {
  std::string out = "label\tcount\tpercent\n";
  for (const auto& row : rows) {
    out += row.label + "\t" + std::to_string(row.count) + "\t" + format_metric(row.percent) + "\n";
  }
  return out;
}

}  // namespace gec
