#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pagefuse/core.hpp"

namespace pagefuse {

struct LinearFusion {
    double alpha = 0.5;  // weight on system 1
};

struct LogLinearFusion {
    std::size_t num_classes = 0;
    std::vector<double> weights;  // row-major [C x 2C]
    std::vector<double> bias;     // [C]
    double lambda = 0.0;

    void validate() const;
    // The averaging anchor: W0 = [I | I], b = 0.
    static LogLinearFusion anchor(std::size_t num_classes, double lambda);
};

ClassProbs fuse_linear(const ClassProbs& y1, const ClassProbs& y2, double alpha);
double fuse_linear(double y1, double y2, double alpha);

// One validation page for fusion tuning/training.
struct FusionPair {
    ClassProbs y1;
    ClassProbs y2;
    PageLabel label;
};

struct DateFusionPair {
    double y1;
    double y2;
    DateInterval interval;
};

double tune_alpha(const std::vector<FusionPair>& pairs, double grid_step = 0.01);
double tune_alpha(const std::vector<DateFusionPair>& pairs, double grid_step = 0.01);

ClassProbs fuse_loglinear(const LogLinearFusion& model, const ClassProbs& y1,
                          const ClassProbs& y2);

// Full-batch gradient descent on summed cross-entropy (L_hard for multi-label
// pages) plus lambda * (||W - W0||_F^2 + ||b||^2), initialized at the anchor.
LogLinearFusion train_loglinear(const std::vector<FusionPair>& pairs, double lambda);

struct CrossvalResult {
    double lambda;
    LogLinearFusion final_model;
    double cv_error;
};

CrossvalResult crossval_lambda(const std::vector<FusionPair>& pairs, std::size_t folds = 10,
                               std::vector<double> lambda_grid = {1e-4, 1e-3, 1e-2, 1e-1, 1.0,
                                                                  10.0, 100.0},
                               std::uint64_t seed = 0);

}  // namespace pagefuse
