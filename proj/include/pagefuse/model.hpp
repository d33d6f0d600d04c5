#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "pagefuse/core.hpp"
#include "pagefuse/losses.hpp"

namespace pagefuse {

struct YearScale {
    double offset = 0.0;
    double scale = 1.0;
};

// Linear softmax classifier or linear scalar regressor over cutout features.
struct LinearModel {
    TaskKind task = TaskKind::classify;
    std::size_t num_classes = 0;  // 1 for the date task
    std::size_t feature_dim = 0;
    std::vector<double> weights;  // row-major [num_classes x feature_dim]
    std::vector<double> bias;     // [num_classes]
    YearScale year_scale;

    void validate() const;
    std::vector<double> logits(const std::vector<double>& features) const;
    ClassProbs forward_classify(const std::vector<double>& features) const;
    double forward_date(const std::vector<double>& features) const;

    std::vector<double> flatten() const;
    void unflatten(const std::vector<double>& params);
};

enum class OptimizerKind { sgd, adam };

struct AdamParams {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 32;
    std::size_t iterations = 1000;
    std::uint64_t seed = 0;
    std::variant<ClassLossKind, DateLossKind> loss = ClassLossKind::cross_entropy;
    bool class_weighting = false;
    int min_length_px = 0;  // textline filter; patches always pass
    OptimizerKind optimizer = OptimizerKind::adam;
    AdamParams adam;
    std::size_t checkpoint_stride = 100;
};

struct Checkpoint {
    std::size_t iteration = 0;
    std::vector<double> parameters;
};

struct TrainResult {
    LinearModel model;
    std::vector<Checkpoint> checkpoints;
    std::vector<double> loss_log;  // per-iteration mini-batch loss
};

// Inverse-frequency class weights, one per class, sample-weighted mean 1.
std::vector<double> class_weights(const std::vector<PageRecord>& pages, std::size_t num_classes);

TrainResult train(const std::vector<PageRecord>& pages, const TrainConfig& cfg);

LinearModel average_checkpoints(const std::vector<Checkpoint>& ckpts,
                                const LinearModel& reference);

// Best checkpoint plus those +-1, +-2, +-3 strides apart when they exist.
std::vector<Checkpoint> select_checkpoints_patch(const std::vector<Checkpoint>& ckpts,
                                                 std::size_t best_iteration,
                                                 std::size_t stride = 1000);

struct TextlineSelection {
    std::size_t n;  // number of trailing checkpoints averaged
    LinearModel averaged;
    double validation_error;
};

// Averages the last N checkpoints for N in 2..9 and returns the N minimizing the
// supplied validation error (ties -> smaller N).
TextlineSelection select_checkpoints_textline(
    const std::vector<Checkpoint>& ckpts, const LinearModel& reference,
    const std::function<double(const LinearModel&)>& validation_error);

}  // namespace pagefuse
