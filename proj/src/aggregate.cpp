#include "pagefuse/aggregate.hpp"

#include <algorithm>
#include <cmath>

namespace pagefuse {

namespace {

ClassProbs mean_probs(const std::vector<const ClassProbs*>& vecs) {
    const std::size_t n = vecs.front()->size();
    std::vector<double> acc(n, 0.0);
    for (const ClassProbs* p : vecs) {
        if (p->size() != n) throw Error("ShapeMismatch", "mixed class counts in aggregation");
        for (std::size_t i = 0; i < n; ++i) acc[i] += (*p)[i];
    }
    for (double& v : acc) v /= static_cast<double>(vecs.size());
    return ClassProbs(std::move(acc));
}

}  // namespace

ClassProbs patch_scale_aggregate(const std::vector<ScoredPatch>& patches, std::size_t k) {
    if (patches.empty()) throw Error("EmptyScale", "no patches on this scale");
    std::vector<const ScoredPatch*> order;
    order.reserve(patches.size());
    for (const auto& p : patches) {
        if (!p.probs) throw Error("MissingScore", "patch " + p.cutout_id + " has no probs");
        order.push_back(&p);
    }
    std::sort(order.begin(), order.end(), [](const ScoredPatch* a, const ScoredPatch* b) {
        double ca = a->probs->max_prob(), cb = b->probs->max_prob();
        if (ca != cb) return ca > cb;
        return a->cutout_id < b->cutout_id;
    });
    order.resize(std::min(k, order.size()));
    std::vector<const ClassProbs*> top;
    for (const ScoredPatch* p : order) top.push_back(&*p->probs);
    return mean_probs(top);
}

PageResult patch_page_aggregate(const PageScores& page, PatchApproach approach, TaskKind task,
                                std::size_t top_k) {
    if (page.patches.empty()) throw Error("NoPatches", page.page_id + ": no patch cutouts");

    auto by_scale = [&](bool region_only) {
        std::vector<std::vector<ScoredPatch>> scales(4);
        for (const auto& p : page.patches) {
            if (p.scale < 1 || p.scale > 4)
                throw Error("InvalidCutout", "patch scale out of range");
            if (region_only && !p.in_text_region) continue;
            scales[static_cast<std::size_t>(p.scale - 1)].push_back(p);
        }
        return scales;
    };

    if (task == TaskKind::date) {
        // Plain means: confidence is undefined for scalar regression.
        auto scale_means = [&](bool region_only) {
            std::vector<double> means;
            for (const auto& group : by_scale(region_only)) {
                if (group.empty()) continue;
                double sum = 0.0;
                for (const auto& p : group) {
                    if (!p.year) throw Error("MissingScore", "patch has no year");
                    sum += *p.year;
                }
                means.push_back(sum / static_cast<double>(group.size()));
            }
            return means;
        };
        std::vector<double> means = scale_means(approach == PatchApproach::R);
        if (approach == PatchApproach::PplusR) {
            auto r = scale_means(true);
            means.insert(means.end(), r.begin(), r.end());
        }
        if (means.empty()) means = scale_means(false);  // R fallback to P
        double sum = 0.0;
        for (double m : means) sum += m;
        return {std::nullopt, sum / static_cast<double>(means.size())};
    }

    auto scale_aggregates = [&](bool region_only) {
        std::vector<ClassProbs> aggs;
        for (const auto& group : by_scale(region_only)) {
            if (group.empty()) continue;
            aggs.push_back(patch_scale_aggregate(group, top_k));
        }
        return aggs;
    };

    if (approach == PatchApproach::PplusR) {
        std::vector<ClassProbs> aggs = scale_aggregates(false);
        auto r = scale_aggregates(true);
        aggs.insert(aggs.end(), r.begin(), r.end());
        std::vector<const ClassProbs*> ptrs;
        for (const auto& a : aggs) ptrs.push_back(&a);
        return {mean_probs(ptrs), std::nullopt};
    }

    std::vector<ClassProbs> aggs = scale_aggregates(approach == PatchApproach::R);
    if (aggs.empty()) aggs = scale_aggregates(false);  // all four region scales empty
    // Most confident scale wins; ties resolve to the lowest scale index
    // because scale aggregates are produced in scale order.
    std::size_t best = 0;
    for (std::size_t i = 1; i < aggs.size(); ++i)
        if (aggs[i].max_prob() > aggs[best].max_prob()) best = i;
    return {aggs[best], std::nullopt};
}

ClassProbs line_page_classify(const std::vector<ScoredLine>& lines, LineAggMethod method,
                              int min_length) {
    std::vector<const ClassProbs*> surviving;
    for (const auto& line : lines) {
        if (line.length_px < min_length) continue;
        if (!line.probs) throw Error("MissingScore", "line " + line.cutout_id + " has no probs");
        surviving.push_back(&*line.probs);
    }
    if (surviving.empty()) throw Error("NoLines", "all textlines filtered out");

    if (method == LineAggMethod::mean) return mean_probs(surviving);

    const std::size_t n = surviving.front()->size();
    std::vector<double> acc(n, 0.0);
    for (const ClassProbs* p : surviving) {
        if (p->size() != n) throw Error("ShapeMismatch", "mixed class counts");
        std::size_t winner = p->argmax();
        switch (method) {
            case LineAggMethod::count:
                acc[winner] += 1.0;
                break;
            case LineAggMethod::probs:
                acc[winner] += (*p)[winner];
                break;
            default:
                throw Error("InvalidMethod", "median is a dating-only aggregation");
        }
    }
    double total = 0.0;
    for (double v : acc) total += v;
    for (double& v : acc) v /= total;
    return ClassProbs(std::move(acc));
}

double line_page_date(const std::vector<ScoredLine>& lines, LineAggMethod method,
                      int min_length) {
    std::vector<double> years;
    for (const auto& line : lines) {
        if (line.length_px < min_length) continue;
        if (!line.year) throw Error("MissingScore", "line " + line.cutout_id + " has no year");
        years.push_back(*line.year);
    }
    if (years.empty()) throw Error("NoLines", "all textlines filtered out");

    if (method == LineAggMethod::mean) {
        double sum = 0.0;
        for (double y : years) sum += y;
        return sum / static_cast<double>(years.size());
    }
    if (method != LineAggMethod::median)
        throw Error("InvalidMethod", "dating aggregation must be mean or median");
    std::sort(years.begin(), years.end());
    const std::size_t n = years.size();
    if (n % 2 == 1) return years[n / 2];
    return 0.5 * (years[n / 2 - 1] + years[n / 2]);
}

LineAggOutcome line_page_aggregate(const PageScores& page, LineAggMethod method, int min_length,
                                   TaskKind task, std::size_t num_classes, double fallback_year) {
    try {
        if (task == TaskKind::classify)
            return {{line_page_classify(page.lines, method, min_length), std::nullopt}, false};
        return {{std::nullopt, line_page_date(page.lines, method, min_length)}, false};
    } catch (const Error& e) {
        if (e.code() != "NoLines") throw;
    }
    if (task == TaskKind::classify) {
        std::vector<double> uniform(num_classes, 1.0 / static_cast<double>(num_classes));
        return {{ClassProbs(std::move(uniform)), std::nullopt}, true};
    }
    return {{std::nullopt, fallback_year}, true};
}

}  // namespace pagefuse
