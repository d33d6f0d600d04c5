#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "pagefuse/aggregate.hpp"

using namespace pagefuse;

namespace {

ScoredPatch patch(const std::string& id, std::vector<double> probs, int scale = 1,
                  bool region = false) {
    return {id, scale, region, ClassProbs(std::move(probs)), std::nullopt};
}

ScoredLine line(const std::string& id, std::vector<double> probs, int length = 200) {
    return {id, length, ClassProbs(std::move(probs)), std::nullopt};
}

ScoredLine dline(const std::string& id, double year, int length = 200) {
    return {id, length, std::nullopt, year};
}

ClassProbs random_probs(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    std::vector<double> v(n);
    double sum = 0.0;
    for (double& x : v) {
        x = unit(rng);
        sum += x;
    }
    for (double& x : v) x /= sum;
    return ClassProbs(std::move(v));
}

// Brute-force reference: full sort of all (confidence, id) pairs, then mean.
ClassProbs brute_force_topk(std::vector<ScoredPatch> patches, std::size_t k) {
    std::sort(patches.begin(), patches.end(), [](const ScoredPatch& a, const ScoredPatch& b) {
        if (a.probs->max_prob() != b.probs->max_prob())
            return a.probs->max_prob() > b.probs->max_prob();
        return a.cutout_id < b.cutout_id;
    });
    std::size_t take = std::min(k, patches.size());
    std::vector<double> acc(patches.front().probs->size(), 0.0);
    for (std::size_t i = 0; i < take; ++i)
        for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += (*patches[i].probs)[c];
    for (double& v : acc) v /= static_cast<double>(take);
    return ClassProbs(std::move(acc));
}

}  // namespace

TEST_CASE("patch scale aggregation basics") {
    CHECK(patch_scale_aggregate({patch("a", {0.7, 0.3})})[0] == doctest::Approx(0.7));

    std::vector<ScoredPatch> same(12, patch("x", {0.7, 0.3}));
    auto agg = patch_scale_aggregate(same);
    CHECK(agg[0] == doctest::Approx(0.7));

    std::vector<ScoredPatch> three = {patch("a", {0.9, 0.1}), patch("b", {0.2, 0.8}),
                                      patch("c", {0.6, 0.4})};
    auto top2 = patch_scale_aggregate(three, 2);
    CHECK(top2[0] == doctest::Approx(0.55));
    CHECK(top2[1] == doctest::Approx(0.45));

    CHECK_THROWS_WITH_AS(patch_scale_aggregate({}), doctest::Contains("EmptyScale"), Error);
}

TEST_CASE("top-k with k >= count equals the plain mean") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
        std::vector<ScoredPatch> patches;
        std::size_t n = 1 + rng() % 8;
        for (std::size_t i = 0; i < n; ++i)
            patches.push_back(patch("p" + std::to_string(i), random_probs(rng, 3).values()));
        auto agg = patch_scale_aggregate(patches, 100);
        std::vector<double> mean(3, 0.0);
        for (const auto& p : patches)
            for (std::size_t c = 0; c < 3; ++c) mean[c] += (*p.probs)[c];
        for (std::size_t c = 0; c < 3; ++c)
            CHECK(agg[c] == doctest::Approx(mean[c] / static_cast<double>(n)));
    }
}

TEST_CASE("patch page aggregation selects the most confident scale") {
    PageScores page;
    page.page_id = "p";
    page.patches = {patch("a", {0.9, 0.1}, 1), patch("b", {0.6, 0.4}, 2)};
    auto out = patch_page_aggregate(page, PatchApproach::P, TaskKind::classify);
    CHECK((*out.probs)[0] == doctest::Approx(0.9));
}

TEST_CASE("single scale P returns that scale's aggregate") {
    PageScores page;
    page.page_id = "p";
    page.patches = {patch("a", {0.3, 0.7}, 2), patch("b", {0.5, 0.5}, 2)};
    auto out = patch_page_aggregate(page, PatchApproach::P, TaskKind::classify);
    CHECK((*out.probs)[1] == doctest::Approx(0.6));
}

TEST_CASE("P+R with identical region flags equals P") {
    PageScores page;
    page.page_id = "p";
    for (int s = 1; s <= 4; ++s) {
        page.patches.push_back(patch("a" + std::to_string(s), {0.8, 0.2}, s, true));
        page.patches.push_back(patch("b" + std::to_string(s), {0.8, 0.2}, s, true));
    }
    auto pr = patch_page_aggregate(page, PatchApproach::PplusR, TaskKind::classify);
    auto p = patch_page_aggregate(page, PatchApproach::P, TaskKind::classify);
    CHECK((*pr.probs)[0] == doctest::Approx((*p.probs)[0]));
}

TEST_CASE("R with no region patches falls back to P") {
    PageScores page;
    page.page_id = "p";
    page.patches = {patch("a", {0.9, 0.1}, 1, false)};
    auto out = patch_page_aggregate(page, PatchApproach::R, TaskKind::classify);
    CHECK((*out.probs)[0] == doctest::Approx(0.9));
}

TEST_CASE("dating patch aggregation averages scale means") {
    PageScores page;
    page.page_id = "p";
    page.patches = {{"a", 1, false, std::nullopt, 1400.0},
                    {"b", 1, false, std::nullopt, 1420.0},
                    {"c", 2, false, std::nullopt, 1500.0}};
    auto out = patch_page_aggregate(page, PatchApproach::P, TaskKind::date);
    CHECK(*out.year == doctest::Approx(0.5 * (1410.0 + 1500.0)));
}

TEST_CASE("line classification aggregations") {
    auto mean = line_page_classify({line("a", {0.9, 0.1}), line("b", {0.6, 0.4})},
                                   LineAggMethod::mean, 0);
    CHECK(mean[0] == doctest::Approx(0.75));
    CHECK(mean[1] == doctest::Approx(0.25));

    // count and probs can disagree
    std::vector<ScoredLine> lines = {line("a", {0.99, 0.01}), line("b", {0.5, 0.5}),
                                     line("c", {0.4, 0.6})};
    // winners: (0, 0.99), (0, 0.5) -- tie at 0.5/0.5 resolves to class 0 -- and (1, 0.6)
    auto count = line_page_classify(lines, LineAggMethod::count, 0);
    CHECK(count.argmax() == 0);
    lines[1] = line("b", {0.45, 0.55});  // winners now (0,0.99), (1,0.55), (1,0.6)
    count = line_page_classify(lines, LineAggMethod::count, 0);
    CHECK(count.argmax() == 1);  // 2 votes vs 1
    auto probs = line_page_classify(lines, LineAggMethod::probs, 0);
    CHECK(probs.argmax() == 1);  // 1.15 vs 0.99
    lines[2] = line("c", {0.65, 0.35});  // winners (0,0.99), (1,0.55), (0,0.65)
    probs = line_page_classify(lines, LineAggMethod::probs, 0);
    CHECK(probs.argmax() == 0);  // mass 1.64 vs 0.55
}

TEST_CASE("unanimous lines agree across all methods") {
    std::vector<ScoredLine> lines(3, line("x", {0.2, 0.7, 0.1}));
    for (auto method : {LineAggMethod::mean, LineAggMethod::count, LineAggMethod::probs})
        CHECK(line_page_classify(lines, method, 0).argmax() == 1);
}

TEST_CASE("length filter and NoLines") {
    std::vector<ScoredLine> lines = {line("a", {0.9, 0.1}, 32), line("b", {0.1, 0.9}, 300)};
    auto agg = line_page_classify(lines, LineAggMethod::mean, 64);
    CHECK(agg.argmax() == 1);  // the short line is dropped
    CHECK_THROWS_WITH_AS(line_page_classify(lines, LineAggMethod::mean, 1000),
                         doctest::Contains("NoLines"), Error);
}

TEST_CASE("dating line aggregation") {
    CHECK(line_page_date({dline("a", 1410), dline("b", 1420), dline("c", 1500)},
                         LineAggMethod::median, 0) == doctest::Approx(1420.0));
    CHECK(line_page_date({dline("a", 1400), dline("b", 1500)}, LineAggMethod::median, 0) ==
          doctest::Approx(1450.0));
    CHECK(line_page_date({dline("a", 1400), dline("b", 1500)}, LineAggMethod::mean, 0) ==
          doctest::Approx(1450.0));
}

TEST_CASE("median ignores perturbations of non-middle values") {
    double base = line_page_date({dline("a", 1300), dline("b", 1420), dline("c", 1600)},
                                 LineAggMethod::median, 0);
    double moved = line_page_date({dline("a", 1100), dline("b", 1420), dline("c", 1900)},
                                  LineAggMethod::median, 0);
    CHECK(base == moved);
}

TEST_CASE("aggregates are permutation invariant") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 30; ++t) {
        std::vector<ScoredPatch> patches;
        for (int i = 0; i < 8; ++i)
            patches.push_back(patch("p" + std::to_string(i), random_probs(rng, 3).values(),
                                    1 + static_cast<int>(rng() % 4), rng() % 2 == 0));
        PageScores page{"p", patches, {}};
        auto before = patch_page_aggregate(page, PatchApproach::PplusR, TaskKind::classify);
        std::shuffle(page.patches.begin(), page.patches.end(), rng);
        auto after = patch_page_aggregate(page, PatchApproach::PplusR, TaskKind::classify);
        for (std::size_t c = 0; c < 3; ++c)
            CHECK((*before.probs)[c] == doctest::Approx((*after.probs)[c]).epsilon(1e-12));
    }
}

TEST_CASE("top-k matches the brute-force reference exactly") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        std::vector<ScoredPatch> patches;
        std::size_t n = 1 + rng() % 12;
        for (std::size_t i = 0; i < n; ++i)
            patches.push_back(patch("p" + std::to_string(rng() % 20), random_probs(rng, 4).values()));
        auto fast = patch_scale_aggregate(patches, 10);
        auto slow = brute_force_topk(patches, 10);
        for (std::size_t c = 0; c < 4; ++c) CHECK(fast[c] == slow[c]);
    }
}

TEST_CASE("fallback emits uniform probs or the fallback year") {
    PageScores empty{"p", {}, {}};
    auto cls = line_page_aggregate(empty, LineAggMethod::mean, 64, TaskKind::classify, 3, 0.0);
    CHECK(cls.fallback_used);
    CHECK((*cls.result.probs)[0] == doctest::Approx(1.0 / 3.0));
    auto date = line_page_aggregate(empty, LineAggMethod::median, 128, TaskKind::date, 0, 1480.0);
    CHECK(date.fallback_used);
    CHECK(*date.result.year == doctest::Approx(1480.0));
}
