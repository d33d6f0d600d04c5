#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pagefuse/core.hpp"

namespace pagefuse {

enum class PatchApproach { P, R, PplusR };
// median applies only to the dating task; mean works for both.
enum class LineAggMethod { mean, count, probs, median };

// Per-cutout model outputs for one page, ready for aggregation.
struct ScoredPatch {
    std::string cutout_id;
    int scale = 1;
    bool in_text_region = false;
    std::optional<ClassProbs> probs;
    std::optional<double> year;
};

struct ScoredLine {
    std::string cutout_id;
    int length_px = 0;
    std::optional<ClassProbs> probs;
    std::optional<double> year;
};

struct PageScores {
    std::string page_id;
    std::vector<ScoredPatch> patches;
    std::vector<ScoredLine> lines;
};

// Average of the k most confident patches of one scale. Confidence is the max
// class probability; ties break by cutout_id.
ClassProbs patch_scale_aggregate(const std::vector<ScoredPatch>& patches, std::size_t k = 10);

struct PageResult {
    std::optional<ClassProbs> probs;
    std::optional<double> year;
};

PageResult patch_page_aggregate(const PageScores& page, PatchApproach approach, TaskKind task,
                                std::size_t top_k = 10);

ClassProbs line_page_classify(const std::vector<ScoredLine>& lines, LineAggMethod method,
                              int min_length);

double line_page_date(const std::vector<ScoredLine>& lines, LineAggMethod method, int min_length);

// Textline system entry point with the all-lines-filtered fallback: uniform
// distribution (classification) or fallback_year (dating), flagged.
struct LineAggOutcome {
    PageResult result;
    bool fallback_used = false;
};

LineAggOutcome line_page_aggregate(const PageScores& page, LineAggMethod method, int min_length,
                                   TaskKind task, std::size_t num_classes, double fallback_year);

}  // namespace pagefuse
