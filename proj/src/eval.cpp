#include "pagefuse/eval.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "pagefuse/losses.hpp"

namespace pagefuse {

double accuracy(const std::vector<ClassProbs>& preds, const std::vector<LabelSet>& labels) {
    if (preds.size() != labels.size()) throw Error("LengthMismatch", "preds vs labels");
    if (preds.empty()) throw Error("Empty", "nothing to evaluate");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        if (labels[i].contains(preds[i].argmax())) ++correct;
    return static_cast<double>(correct) / static_cast<double>(preds.size());
}

double date_mae(const std::vector<double>& preds, const std::vector<DateInterval>& labels) {
    if (preds.size() != labels.size()) throw Error("LengthMismatch", "preds vs labels");
    if (preds.empty()) throw Error("Empty", "nothing to evaluate");
    double sum = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        sum += loss_date(DateLossKind::eval_metric, preds[i], labels[i]);
    return sum / static_cast<double>(preds.size());
}

TaskMetricReport evaluate_classify(const std::vector<std::string>& page_ids,
                                   const std::vector<ClassProbs>& preds,
                                   const std::vector<LabelSet>& labels) {
    if (page_ids.size() != preds.size()) throw Error("LengthMismatch", "page_ids vs preds");
    TaskMetricReport report;
    report.task = TaskKind::classify;
    report.metric_value = accuracy(preds, labels);
    for (std::size_t i = 0; i < preds.size(); ++i)
        report.per_page.push_back({page_ids[i], labels[i].contains(preds[i].argmax()), 0.0});
    return report;
}

TaskMetricReport evaluate_date(const std::vector<std::string>& page_ids,
                               const std::vector<double>& preds,
                               const std::vector<DateInterval>& labels) {
    if (page_ids.size() != preds.size()) throw Error("LengthMismatch", "page_ids vs preds");
    TaskMetricReport report;
    report.task = TaskKind::date;
    report.metric_value = date_mae(preds, labels);
    for (std::size_t i = 0; i < preds.size(); ++i)
        report.per_page.push_back(
            {page_ids[i], false, loss_date(DateLossKind::eval_metric, preds[i], labels[i])});
    return report;
}

Split split_uniform_validation(const std::vector<PageRecord>& pages, std::size_t num_classes,
                               std::size_t per_class, std::uint64_t seed) {
    // Pools of single-label page indices, one per class.
    std::vector<std::vector<std::size_t>> pools(num_classes);
    for (std::size_t i = 0; i < pages.size(); ++i) {
        const auto& label = pages[i].label;
        if (label.labels && label.labels->size() == 1)
            pools[label.labels->classes().front()].push_back(i);
    }
    std::mt19937_64 rng(seed);
    std::vector<bool> in_validation(pages.size(), false);
    for (std::size_t c = 0; c < num_classes; ++c) {
        if (pools[c].size() < per_class)
            throw Error("InsufficientPages",
                        "class " + std::to_string(c) + " has only " +
                            std::to_string(pools[c].size()) + " single-label pages");
        std::shuffle(pools[c].begin(), pools[c].end(), rng);
        for (std::size_t k = 0; k < per_class; ++k) in_validation[pools[c][k]] = true;
    }
    Split split;
    for (std::size_t i = 0; i < pages.size(); ++i)
        (in_validation[i] ? split.validation : split.train).push_back(pages[i]);
    return split;
}

Split split_random(const std::vector<PageRecord>& pages, std::size_t n, std::uint64_t seed) {
    if (n > pages.size()) throw Error("TooFew", "validation size exceeds page count");
    std::vector<std::size_t> order(pages.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<bool> in_validation(pages.size(), false);
    for (std::size_t k = 0; k < n; ++k) in_validation[order[k]] = true;
    Split split;
    for (std::size_t i = 0; i < pages.size(); ++i)
        (in_validation[i] ? split.validation : split.train).push_back(pages[i]);
    return split;
}

std::vector<RankedMethod> compare_methods(const std::map<std::string, TaskMetricReport>& results,
                                          bool higher_is_better) {
    if (results.empty()) throw Error("Empty", "no methods to compare");
    std::vector<RankedMethod> table;
    for (const auto& [name, report] : results) table.push_back({name, report.metric_value});
    std::stable_sort(table.begin(), table.end(),
                     [higher_is_better](const RankedMethod& a, const RankedMethod& b) {
                         if (a.metric_value != b.metric_value)
                             return higher_is_better ? a.metric_value > b.metric_value
                                                     : a.metric_value < b.metric_value;
                         return a.name < b.name;
                     });
    return table;
}

}  // namespace pagefuse
