#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pagefuse/core.hpp"

namespace pagefuse {

struct SynthConfig {
    std::size_t num_classes = 2;
    std::size_t feature_dim = 8;
    std::size_t pages = 100;
    std::pair<std::size_t, std::size_t> cutouts_per_page = {4, 12};  // per cutout kind
    double mixed_label_fraction = 0.0;
    double class_separation = 2.0;
    double noise_sigma = 1.0;
    bool date_mode = false;
    std::pair<double, double> year_range = {1100.0, 1900.0};
    std::pair<double, double> interval_halfwidth = {5.0, 25.0};
    std::pair<int, int> length_px_range = {32, 512};
    std::uint64_t seed = 0;

    void validate() const;

    // Class mean directions: orthogonal unit axes scaled by class_separation.
    std::vector<double> class_mean(std::size_t c) const;
};

std::vector<PageRecord> generate(const SynthConfig& cfg);

// Exact posterior under the generating Gaussian mixture with equal priors.
ClassProbs oracle_bayes_classify(const SynthConfig& cfg, const std::vector<double>& features);

}  // namespace pagefuse
