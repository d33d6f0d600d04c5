#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pagefuse/core.hpp"

namespace pagefuse {

struct PerPageEntry {
    std::string page_id;
    bool correct = false;   // classification
    double distance = 0.0;  // dating
};

struct TaskMetricReport {
    TaskKind task = TaskKind::classify;
    double metric_value = 0.0;  // accuracy or MAE-to-interval
    std::vector<PerPageEntry> per_page;
};

// Fraction of pages whose argmax prediction is a member of the label set.
double accuracy(const std::vector<ClassProbs>& preds, const std::vector<LabelSet>& labels);

// Mean over pages of max(0, a - y, y - b).
double date_mae(const std::vector<double>& preds, const std::vector<DateInterval>& labels);

TaskMetricReport evaluate_classify(const std::vector<std::string>& page_ids,
                                   const std::vector<ClassProbs>& preds,
                                   const std::vector<LabelSet>& labels);

TaskMetricReport evaluate_date(const std::vector<std::string>& page_ids,
                               const std::vector<double>& preds,
                               const std::vector<DateInterval>& labels);

struct Split {
    std::vector<PageRecord> train;
    std::vector<PageRecord> validation;
};

// Draws per_class single-label pages per class for validation; multi-label
// pages always stay in train.
Split split_uniform_validation(const std::vector<PageRecord>& pages, std::size_t num_classes,
                               std::size_t per_class, std::uint64_t seed);

Split split_random(const std::vector<PageRecord>& pages, std::size_t n, std::uint64_t seed);

struct RankedMethod {
    std::string name;
    double metric_value;
};

// Sorted best-first: ascending for error/MAE, descending for accuracy.
std::vector<RankedMethod> compare_methods(const std::map<std::string, TaskMetricReport>& results,
                                          bool higher_is_better);

}  // namespace pagefuse
