#include "pagefuse/synthgen.hpp"

#include <cmath>
#include <random>

namespace pagefuse {

void SynthConfig::validate() const {
    if (num_classes < 1 || feature_dim < 1 || pages < 1)
        throw Error("InvalidConfig", "counts and dimensions must be positive");
    if (!date_mode && feature_dim < num_classes)
        throw Error("InvalidConfig", "feature_dim must be >= num_classes for orthogonal means");
    if (cutouts_per_page.first < 1 || cutouts_per_page.second < cutouts_per_page.first)
        throw Error("InvalidConfig", "bad cutouts_per_page range");
    if (mixed_label_fraction < 0.0 || mixed_label_fraction > 1.0)
        throw Error("InvalidConfig", "mixed_label_fraction outside [0, 1]");
    if (noise_sigma < 0.0) throw Error("InvalidConfig", "noise_sigma must be >= 0");
    if (!(year_range.first < year_range.second))
        throw Error("InvalidConfig", "year_range requires lo < hi");
    if (interval_halfwidth.first < 0.0 || interval_halfwidth.second < interval_halfwidth.first)
        throw Error("InvalidConfig", "bad interval_halfwidth range");
    if (length_px_range.first < 0 || length_px_range.second < length_px_range.first)
        throw Error("InvalidConfig", "bad length_px_range");
}

std::vector<double> SynthConfig::class_mean(std::size_t c) const {
    std::vector<double> mu(feature_dim, 0.0);
    mu[c] = class_separation;
    return mu;
}

namespace {

std::string page_name(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%06zu", i);
    return buf;
}

}  // namespace

std::vector<PageRecord> generate(const SynthConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> pick_class(0, cfg.num_classes - 1);
    std::uniform_int_distribution<std::size_t> pick_count(cfg.cutouts_per_page.first,
                                                          cfg.cutouts_per_page.second);
    std::uniform_int_distribution<int> pick_length(cfg.length_px_range.first,
                                                   cfg.length_px_range.second);
    std::uniform_real_distribution<double> pick_year(cfg.year_range.first, cfg.year_range.second);
    std::uniform_real_distribution<double> pick_halfwidth(cfg.interval_halfwidth.first,
                                                          cfg.interval_halfwidth.second);

    const double year_mid = 0.5 * (cfg.year_range.first + cfg.year_range.second);
    const double year_half = 0.5 * (cfg.year_range.second - cfg.year_range.first);

    std::vector<PageRecord> pages;
    pages.reserve(cfg.pages);
    for (std::size_t p = 0; p < cfg.pages; ++p) {
        PageRecord page;
        page.page_id = page_name(p);

        double true_year = 0.0;
        std::size_t c1 = 0, c2 = 0;
        bool mixed = false;
        if (cfg.date_mode) {
            true_year = pick_year(rng);
            double w1 = pick_halfwidth(rng), w2 = pick_halfwidth(rng);
            page.label.interval = DateInterval(true_year - w1, true_year + w2);
        } else {
            c1 = pick_class(rng);
            mixed = cfg.num_classes >= 2 && unit(rng) < cfg.mixed_label_fraction;
            if (mixed) {
                c2 = pick_class(rng);
                while (c2 == c1) c2 = pick_class(rng);
                page.label.labels = LabelSet({c1, c2}, cfg.num_classes);
            } else {
                page.label.labels = LabelSet({c1}, cfg.num_classes);
            }
        }

        auto make_features = [&]() {
            std::vector<double> x(cfg.feature_dim, 0.0);
            if (cfg.date_mode) {
                double t_norm = (true_year - year_mid) / year_half;
                x[0] = cfg.class_separation * t_norm;
            } else {
                std::size_t c = (mixed && unit(rng) < 0.5) ? c2 : c1;
                x = cfg.class_mean(c);
            }
            for (double& v : x) v += cfg.noise_sigma * gauss(rng);
            return x;
        };

        std::size_t num_patches = pick_count(rng);
        for (std::size_t i = 0; i < num_patches; ++i) {
            CutoutRecord cut;
            cut.page_id = page.page_id;
            cut.cutout_id = "patch" + std::to_string(i);
            cut.kind = CutoutKind::patch;
            cut.scale = static_cast<int>(i % 4) + 1;
            cut.in_text_region = unit(rng) < 0.7;
            cut.features = make_features();
            page.cutouts.push_back(std::move(cut));
        }
        std::size_t num_lines = pick_count(rng);
        for (std::size_t i = 0; i < num_lines; ++i) {
            CutoutRecord cut;
            cut.page_id = page.page_id;
            cut.cutout_id = "line" + std::to_string(i);
            cut.kind = CutoutKind::textline;
            cut.length_px = pick_length(rng);
            cut.features = make_features();
            page.cutouts.push_back(std::move(cut));
        }
        page.validate();
        pages.push_back(std::move(page));
    }
    return pages;
}

ClassProbs oracle_bayes_classify(const SynthConfig& cfg, const std::vector<double>& features) {
    cfg.validate();
    if (cfg.noise_sigma <= 0.0)
        throw Error("InvalidConfig", "Bayes oracle requires noise_sigma > 0");
    if (features.size() != cfg.feature_dim)
        throw Error("DimensionMismatch", "feature dimension mismatch");
    const double s2 = cfg.noise_sigma * cfg.noise_sigma;
    std::vector<double> logits(cfg.num_classes);
    for (std::size_t c = 0; c < cfg.num_classes; ++c) {
        std::vector<double> mu = cfg.class_mean(c);
        double dot = 0.0, norm2 = 0.0;
        for (std::size_t j = 0; j < cfg.feature_dim; ++j) {
            dot += mu[j] * features[j];
            norm2 += mu[j] * mu[j];
        }
        logits[c] = dot / s2 - norm2 / (2.0 * s2);
    }
    std::vector<double> p(cfg.num_classes);
    double zmax = logits[0], sum = 0.0;
    for (double z : logits) zmax = std::max(zmax, z);
    for (std::size_t c = 0; c < cfg.num_classes; ++c) {
        p[c] = std::exp(logits[c] - zmax);
        sum += p[c];
    }
    for (double& v : p) v /= sum;
    return ClassProbs(std::move(p));
}

}  // namespace pagefuse
