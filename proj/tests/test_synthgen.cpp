#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pagefuse/synthgen.hpp"

using namespace pagefuse;

TEST_CASE("zero noise puts every cutout at its class mean") {
    SynthConfig cfg;
    cfg.num_classes = 3;
    cfg.feature_dim = 4;
    cfg.pages = 20;
    cfg.noise_sigma = 0.0;
    cfg.seed = 1;
    for (const auto& page : generate(cfg)) {
        REQUIRE(page.label.labels->size() == 1);
        auto mu = cfg.class_mean(page.label.labels->classes().front());
        for (const auto& cut : page.cutouts)
            for (std::size_t j = 0; j < cfg.feature_dim; ++j)
                CHECK((*cut.features)[j] == mu[j]);
    }
}

TEST_CASE("mixed fraction zero gives only single labels") {
    SynthConfig cfg;
    cfg.pages = 50;
    cfg.mixed_label_fraction = 0.0;
    cfg.seed = 2;
    for (const auto& page : generate(cfg)) CHECK(page.label.labels->size() == 1);
}

TEST_CASE("mixed pages carry exactly two labels") {
    SynthConfig cfg;
    cfg.num_classes = 4;
    cfg.feature_dim = 4;
    cfg.pages = 100;
    cfg.mixed_label_fraction = 1.0;
    cfg.seed = 3;
    for (const auto& page : generate(cfg)) CHECK(page.label.labels->size() == 2);
}

TEST_CASE("generation is deterministic under the seed") {
    SynthConfig cfg;
    cfg.pages = 10;
    cfg.seed = 4;
    auto a = generate(cfg);
    auto b = generate(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].page_id == b[i].page_id);
        REQUIRE(a[i].cutouts.size() == b[i].cutouts.size());
        for (std::size_t j = 0; j < a[i].cutouts.size(); ++j)
            CHECK(*a[i].cutouts[j].features == *b[i].cutouts[j].features);
    }
}

TEST_CASE("patch and textline metadata are populated") {
    SynthConfig cfg;
    cfg.pages = 5;
    cfg.seed = 5;
    for (const auto& page : generate(cfg)) {
        bool saw_patch = false, saw_line = false;
        for (const auto& cut : page.cutouts) {
            if (cut.kind == CutoutKind::patch) {
                saw_patch = true;
                CHECK(cut.scale.has_value());
                CHECK(cut.in_text_region.has_value());
            } else {
                saw_line = true;
                CHECK(cut.length_px.has_value());
            }
        }
        CHECK(saw_patch);
        CHECK(saw_line);
    }
}

TEST_CASE("date mode intervals contain the generating year structure") {
    SynthConfig cfg;
    cfg.date_mode = true;
    cfg.pages = 50;
    cfg.seed = 6;
    for (const auto& page : generate(cfg)) {
        REQUIRE(page.label.interval.has_value());
        CHECK(page.label.interval->a <= page.label.interval->b);
        CHECK(page.label.interval->radius() >= cfg.interval_halfwidth.first - 1e-9);
    }
}

TEST_CASE("bayes oracle posterior") {
    SynthConfig cfg;
    cfg.num_classes = 2;
    cfg.feature_dim = 4;
    cfg.class_separation = 8.0;
    cfg.noise_sigma = 1.0;

    auto at_mean = oracle_bayes_classify(cfg, cfg.class_mean(0));
    CHECK(at_mean[0] > 0.999);

    // equidistant point -> uniform
    std::vector<double> mid(4, 0.0);
    mid[0] = mid[1] = cfg.class_separation / 2.0;
    auto uniform = oracle_bayes_classify(cfg, mid);
    CHECK(uniform[0] == doctest::Approx(0.5));

    std::vector<double> arbitrary = {1.0, -0.5, 2.0, 0.3};
    auto p = oracle_bayes_classify(cfg, arbitrary);
    double sum = 0.0;
    for (double v : p.values()) sum += v;
    CHECK(sum == doctest::Approx(1.0));

    cfg.noise_sigma = 0.0;
    CHECK_THROWS_AS(oracle_bayes_classify(cfg, arbitrary), Error);
}

TEST_CASE("invalid configs are rejected") {
    SynthConfig cfg;
    cfg.num_classes = 5;
    cfg.feature_dim = 3;  // cannot orthogonalize
    CHECK_THROWS_AS(generate(cfg), Error);
    SynthConfig bad;
    bad.mixed_label_fraction = 1.5;
    CHECK_THROWS_AS(generate(bad), Error);
}
