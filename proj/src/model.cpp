#include "pagefuse/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace pagefuse {

void LinearModel::validate() const {
    if (task == TaskKind::classify && num_classes < 2)
        throw Error("InvalidModel", "classification needs at least 2 classes");
    if (task == TaskKind::date && num_classes != 1)
        throw Error("InvalidModel", "date model output dimension must be 1");
    if (weights.size() != num_classes * feature_dim || bias.size() != num_classes)
        throw Error("ShapeMismatch", "parameter shapes inconsistent with dimensions");
    for (double w : weights)
        if (!std::isfinite(w)) throw Error("NonFinite", "non-finite weight");
    for (double b : bias)
        if (!std::isfinite(b)) throw Error("NonFinite", "non-finite bias");
}

std::vector<double> LinearModel::logits(const std::vector<double>& features) const {
    if (features.size() != feature_dim)
        throw Error("DimensionMismatch", "feature dimension " + std::to_string(features.size()) +
                                             " != " + std::to_string(feature_dim));
    std::vector<double> z(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
        double acc = bias[c];
        const double* row = weights.data() + c * feature_dim;
        for (std::size_t j = 0; j < feature_dim; ++j) acc += row[j] * features[j];
        z[c] = acc;
    }
    return z;
}

ClassProbs LinearModel::forward_classify(const std::vector<double>& features) const {
    return softmax(logits(features));
}

double LinearModel::forward_date(const std::vector<double>& features) const {
    return year_scale.offset + year_scale.scale * logits(features)[0];
}

std::vector<double> LinearModel::flatten() const {
    std::vector<double> p = weights;
    p.insert(p.end(), bias.begin(), bias.end());
    return p;
}

void LinearModel::unflatten(const std::vector<double>& params) {
    if (params.size() != num_classes * feature_dim + num_classes)
        throw Error("ShapeMismatch", "parameter vector length mismatch");
    weights.assign(params.begin(), params.begin() + num_classes * feature_dim);
    bias.assign(params.begin() + num_classes * feature_dim, params.end());
}

std::vector<double> class_weights(const std::vector<PageRecord>& pages, std::size_t num_classes) {
    std::vector<double> counts(num_classes, 0.0);
    for (const auto& page : pages) {
        if (!page.label.is_classification()) continue;
        for (std::size_t c : page.label.labels->classes())
            counts[c] += static_cast<double>(page.cutouts.size());
    }
    double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    std::vector<double> weights(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c) {
        if (counts[c] == 0.0)
            throw Error("EmptyClass", "class " + std::to_string(c) + " has no samples");
        weights[c] = total / (static_cast<double>(num_classes) * counts[c]);
    }
    return weights;
}

namespace {

struct Sample {
    const std::vector<double>* features;
    const PageLabel* label;
};

std::vector<Sample> collect_samples(const std::vector<PageRecord>& pages, int min_length_px) {
    std::vector<Sample> samples;
    for (const auto& page : pages) {
        for (const auto& cut : page.cutouts) {
            if (cut.kind == CutoutKind::textline && cut.length_px &&
                *cut.length_px < min_length_px)
                continue;
            if (!cut.features)
                throw Error("MissingFeatures", "cutout " + cut.cutout_id + " has no features");
            samples.push_back({&*cut.features, &page.label});
        }
    }
    return samples;
}

class Optimizer {
public:
    Optimizer(const TrainConfig& cfg, std::size_t dim)
        : cfg_(cfg), m_(dim, 0.0), v_(dim, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grad) {
        ++t_;
        if (cfg_.optimizer == OptimizerKind::sgd) {
            for (std::size_t i = 0; i < params.size(); ++i)
                params[i] -= cfg_.learning_rate * grad[i];
            return;
        }
        const auto& a = cfg_.adam;
        const double bc1 = 1.0 - std::pow(a.beta1, static_cast<double>(t_));
        const double bc2 = 1.0 - std::pow(a.beta2, static_cast<double>(t_));
        for (std::size_t i = 0; i < params.size(); ++i) {
            m_[i] = a.beta1 * m_[i] + (1.0 - a.beta1) * grad[i];
            v_[i] = a.beta2 * v_[i] + (1.0 - a.beta2) * grad[i] * grad[i];
            params[i] -= cfg_.learning_rate * (m_[i] / bc1) / (std::sqrt(v_[i] / bc2) + a.epsilon);
        }
    }

private:
    const TrainConfig& cfg_;
    std::size_t t_ = 0;
    std::vector<double> m_, v_;
};

}  // namespace

TrainResult train(const std::vector<PageRecord>& pages, const TrainConfig& cfg) {
    if (cfg.iterations < 1) throw Error("InvalidConfig", "iterations must be >= 1");
    if (cfg.batch_size < 1) throw Error("InvalidConfig", "batch_size must be >= 1");
    if (cfg.learning_rate <= 0) throw Error("InvalidConfig", "learning_rate must be positive");

    const bool is_date = std::holds_alternative<DateLossKind>(cfg.loss);
    auto samples = collect_samples(pages, cfg.min_length_px);
    if (samples.empty()) throw Error("EmptyTrainingSet", "no cutouts survive the filters");

    const std::size_t feature_dim = samples.front().features->size();
    for (const auto& s : samples)
        if (s.features->size() != feature_dim)
            throw Error("DimensionMismatch", "inconsistent feature dimensions");

    LinearModel model;
    model.feature_dim = feature_dim;
    if (is_date) {
        model.task = TaskKind::date;
        model.num_classes = 1;
        // Normalize targets to zero mean, unit-ish variance midpoints.
        double sum = 0.0, sq = 0.0;
        std::size_t n = 0;
        for (const auto& page : pages) {
            if (!page.label.interval) throw Error("InvalidLabel", "date task needs intervals");
            double m = page.label.interval->midpoint();
            sum += m;
            sq += m * m;
            ++n;
        }
        double mean = sum / static_cast<double>(n);
        double var = std::max(0.0, sq / static_cast<double>(n) - mean * mean);
        model.year_scale = {mean, std::max(1.0, std::sqrt(var))};
    } else {
        model.task = TaskKind::classify;
        std::size_t num_classes = 0;
        for (const auto& page : pages) {
            if (!page.label.labels) throw Error("InvalidLabel", "classify task needs label sets");
            for (std::size_t c : page.label.labels->classes())
                num_classes = std::max(num_classes, c + 1);
        }
        if (num_classes < 2) throw Error("InvalidConfig", "need at least 2 classes");
        model.num_classes = num_classes;
    }
    model.weights.assign(model.num_classes * feature_dim, 0.0);
    model.bias.assign(model.num_classes, 0.0);

    std::vector<double> weights_per_class;
    if (cfg.class_weighting && !is_date)
        weights_per_class = class_weights(pages, model.num_classes);

    std::vector<double> params = model.flatten();
    Optimizer opt(cfg, params.size());
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);

    TrainResult result;
    result.checkpoints.push_back({0, params});

    std::vector<double> grad(params.size());
    const std::size_t wsize = model.num_classes * feature_dim;

    for (std::size_t iter = 1; iter <= cfg.iterations; ++iter) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double batch_loss = 0.0;
        for (std::size_t b = 0; b < cfg.batch_size; ++b) {
            const Sample& s = samples[pick(rng)];
            const auto& x = *s.features;
            if (is_date) {
                double z = params[wsize];  // bias
                for (std::size_t j = 0; j < feature_dim; ++j) z += params[j] * x[j];
                double y = model.year_scale.offset + model.year_scale.scale * z;
                auto [loss, dy] =
                    loss_date_grad(std::get<DateLossKind>(cfg.loss), y, *s.label->interval);
                double dz = dy * model.year_scale.scale;
                batch_loss += loss;
                for (std::size_t j = 0; j < feature_dim; ++j) grad[j] += dz * x[j];
                grad[wsize] += dz;
            } else {
                std::vector<double> z(model.num_classes);
                for (std::size_t c = 0; c < model.num_classes; ++c) {
                    double acc = params[wsize + c];
                    const double* row = params.data() + c * feature_dim;
                    for (std::size_t j = 0; j < feature_dim; ++j) acc += row[j] * x[j];
                    z[c] = acc;
                }
                auto kind = std::get<ClassLossKind>(cfg.loss);
                auto [loss, gz] = loss_class_grad(kind, z, *s.label->labels);
                double w = 1.0;
                if (cfg.class_weighting) {
                    ClassProbs f = softmax(z);
                    if (kind == ClassLossKind::soft) {
                        // f-weighted mean of the page labels' class weights
                        double num = 0.0, den = 0.0;
                        for (std::size_t c : s.label->labels->classes()) {
                            num += f[c] * weights_per_class[c];
                            den += f[c];
                        }
                        w = den > 0 ? num / den : 1.0;
                    } else {
                        w = weights_per_class[hard_selected_label(f, *s.label->labels)];
                    }
                }
                batch_loss += w * loss;
                for (std::size_t c = 0; c < model.num_classes; ++c) {
                    double g = w * gz[c];
                    for (std::size_t j = 0; j < feature_dim; ++j)
                        grad[c * feature_dim + j] += g * x[j];
                    grad[wsize + c] += g;
                }
            }
        }
        double inv = 1.0 / static_cast<double>(cfg.batch_size);
        for (double& g : grad) g *= inv;
        opt.step(params, grad);
        result.loss_log.push_back(batch_loss * inv);
        if (iter % cfg.checkpoint_stride == 0 || iter == cfg.iterations)
            if (result.checkpoints.back().iteration != iter)
                result.checkpoints.push_back({iter, params});
    }

    model.unflatten(params);
    model.validate();
    result.model = std::move(model);
    return result;
}

LinearModel average_checkpoints(const std::vector<Checkpoint>& ckpts,
                                const LinearModel& reference) {
    if (ckpts.empty()) throw Error("Empty", "no checkpoints to average");
    const std::size_t dim = ckpts.front().parameters.size();
    std::vector<double> mean(dim, 0.0);
    for (const auto& ck : ckpts) {
        if (ck.parameters.size() != dim)
            throw Error("ShapeMismatch", "checkpoint parameter counts differ");
        for (std::size_t i = 0; i < dim; ++i) mean[i] += ck.parameters[i];
    }
    for (double& v : mean) v /= static_cast<double>(ckpts.size());
    LinearModel out = reference;
    out.unflatten(mean);
    return out;
}

std::vector<Checkpoint> select_checkpoints_patch(const std::vector<Checkpoint>& ckpts,
                                                 std::size_t best_iteration, std::size_t stride) {
    auto find = [&](std::size_t iter) -> const Checkpoint* {
        for (const auto& ck : ckpts)
            if (ck.iteration == iter) return &ck;
        return nullptr;
    };
    if (!find(best_iteration))
        throw Error("MissingCheckpoint",
                    "no checkpoint at iteration " + std::to_string(best_iteration));
    std::vector<Checkpoint> selected;
    for (int k = -3; k <= 3; ++k) {
        long long iter = static_cast<long long>(best_iteration) +
                         static_cast<long long>(stride) * k;
        if (iter < 0) continue;
        if (const Checkpoint* ck = find(static_cast<std::size_t>(iter)))
            selected.push_back(*ck);
    }
    return selected;
}

TextlineSelection select_checkpoints_textline(
    const std::vector<Checkpoint>& ckpts, const LinearModel& reference,
    const std::function<double(const LinearModel&)>& validation_error) {
    if (ckpts.size() < 2)
        throw Error("InsufficientCheckpoints", "need at least 2 checkpoints");
    TextlineSelection best{0, reference, 0.0};
    bool have = false;
    for (std::size_t n = 2; n <= 9 && n <= ckpts.size(); ++n) {
        std::vector<Checkpoint> tail(ckpts.end() - static_cast<std::ptrdiff_t>(n), ckpts.end());
        LinearModel averaged = average_checkpoints(tail, reference);
        double err = validation_error(averaged);
        if (!have || err < best.validation_error) {
            best = {n, std::move(averaged), err};
            have = true;
        }
    }
    return best;
}

}  // namespace pagefuse
