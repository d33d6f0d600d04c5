#include "pagefuse/pipeline.hpp"

#include <cstdlib>
#include <exception>
#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pagefuse {

int worker_threads() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("PAGEFUSE_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

namespace {

PageScores score_one_page(const PageRecord& page, const LinearModel& model) {
    PageScores scores;
    scores.page_id = page.page_id;
    for (const auto& cut : page.cutouts) {
        std::optional<ClassProbs> probs;
        std::optional<double> year;
        if (model.task == TaskKind::classify) {
            if (cut.score_probs)
                probs = ClassProbs(*cut.score_probs);
            else if (cut.features)
                probs = model.forward_classify(*cut.features);
            else
                throw Error("MissingFeatures", "cutout " + cut.cutout_id + " cannot be scored");
        } else {
            if (cut.score_year)
                year = *cut.score_year;
            else if (cut.features)
                year = model.forward_date(*cut.features);
            else
                throw Error("MissingFeatures", "cutout " + cut.cutout_id + " cannot be scored");
        }
        if (cut.kind == CutoutKind::patch) {
            scores.patches.push_back({cut.cutout_id, cut.scale.value_or(1),
                                      cut.in_text_region.value_or(false), std::move(probs),
                                      year});
        } else {
            scores.lines.push_back(
                {cut.cutout_id, cut.length_px.value_or(0), std::move(probs), year});
        }
    }
    return scores;
}

PagePrediction aggregate_one_page(const PageScores& page, const AggregateOptions& opts,
                                  TaskKind task, std::size_t num_classes) {
    PagePrediction pred;
    pred.page_id = page.page_id;
    if (opts.use_patches) {
        pred.result = patch_page_aggregate(page, opts.approach, task, opts.top_k);
    } else {
        auto outcome = line_page_aggregate(page, opts.method, opts.min_length, task, num_classes,
                                           opts.fallback_year);
        pred.result = std::move(outcome.result);
        pred.fallback_used = outcome.fallback_used;
    }
    return pred;
}

}  // namespace

std::vector<PageScores> score_pages_serial(const std::vector<PageRecord>& pages,
                                           const LinearModel& model) {
    std::vector<PageScores> out;
    out.reserve(pages.size());
    for (const auto& page : pages) out.push_back(score_one_page(page, model));
    return out;
}

std::vector<PageScores> score_pages_parallel(const std::vector<PageRecord>& pages,
                                             const LinearModel& model) {
    std::vector<PageScores> out(pages.size());
    std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(worker_threads())
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(pages.size()); ++i) {
        try {
            out[static_cast<std::size_t>(i)] =
                score_one_page(pages[static_cast<std::size_t>(i)], model);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<PagePrediction> aggregate_pages_serial(const std::vector<PageScores>& scores,
                                                   const AggregateOptions& opts, TaskKind task,
                                                   std::size_t num_classes) {
    std::vector<PagePrediction> out;
    out.reserve(scores.size());
    for (const auto& page : scores)
        out.push_back(aggregate_one_page(page, opts, task, num_classes));
    return out;
}

std::vector<PagePrediction> aggregate_pages_parallel(const std::vector<PageScores>& scores,
                                                     const AggregateOptions& opts, TaskKind task,
                                                     std::size_t num_classes) {
    std::vector<PagePrediction> out(scores.size());
    std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(worker_threads())
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(scores.size()); ++i) {
        try {
            out[static_cast<std::size_t>(i)] =
                aggregate_one_page(scores[static_cast<std::size_t>(i)], opts, task, num_classes);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace pagefuse
