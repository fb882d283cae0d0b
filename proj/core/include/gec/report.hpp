#pragma once

#include <string>
#include <vector>

#include "gec/align.hpp"
#include "gec/annotate.hpp"
#include "gec/ged_metrics.hpp"
#include "gec/m2_scorer.hpp"

namespace gec {

enum class ReportFormat { Human, Tsv };

std::string render_gec_report(const GecScore& score, ReportFormat format);
std::string render_ged_report(const GedScore& score, ReportFormat format);
std::string render_alignment_report(const AlignmentScore& score, ReportFormat format);
std::string render_distribution(const std::vector<DistributionRow>& rows);

// Fixed four-decimal rendering so reports are byte-stable.
std::string format_metric(double value);

}  // namespace gec
