#pragma once

#include <vector>

#include "pagefuse/aggregate.hpp"
#include "pagefuse/core.hpp"
#include "pagefuse/model.hpp"

namespace pagefuse {

// Number of worker threads: min(hardware, PAGEFUSE_THREADS when set).
int worker_threads();

// Run the model over every cutout of every page. Cutouts carrying a
// precomputed score keep it; the rest are scored with the model.
// The parallel kernel distributes pages over OpenMP threads and produces
// output identical to the serial reference.
std::vector<PageScores> score_pages_serial(const std::vector<PageRecord>& pages,
                                           const LinearModel& model);
std::vector<PageScores> score_pages_parallel(const std::vector<PageRecord>& pages,
                                             const LinearModel& model);

struct AggregateOptions {
    bool use_patches = false;  // patch system vs textline system
    PatchApproach approach = PatchApproach::P;
    LineAggMethod method = LineAggMethod::mean;
    int min_length = 0;
    std::size_t top_k = 10;
    double fallback_year = 0.0;
};

struct PagePrediction {
    std::string page_id;
    PageResult result;
    bool fallback_used = false;
};

std::vector<PagePrediction> aggregate_pages_serial(const std::vector<PageScores>& scores,
                                                   const AggregateOptions& opts, TaskKind task,
                                                   std::size_t num_classes);
std::vector<PagePrediction> aggregate_pages_parallel(const std::vector<PageScores>& scores,
                                                     const AggregateOptions& opts, TaskKind task,
                                                     std::size_t num_classes);

}  // namespace pagefuse
