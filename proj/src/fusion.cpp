#include "pagefuse/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pagefuse/losses.hpp"

namespace pagefuse {

void LogLinearFusion::validate() const {
    if (num_classes < 2) throw Error("InvalidModel", "log-linear fusion needs >= 2 classes");
    if (weights.size() != num_classes * 2 * num_classes || bias.size() != num_classes)
        throw Error("ShapeMismatch", "fusion parameter shapes inconsistent");
    for (double w : weights)
        if (!std::isfinite(w)) throw Error("NonFinite", "non-finite fusion weight");
    if (lambda < 0) throw Error("InvalidModel", "lambda must be >= 0");
}

LogLinearFusion LogLinearFusion::anchor(std::size_t num_classes, double lambda) {
    LogLinearFusion m;
    m.num_classes = num_classes;
    m.lambda = lambda;
    m.weights.assign(num_classes * 2 * num_classes, 0.0);
    m.bias.assign(num_classes, 0.0);
    for (std::size_t c = 0; c < num_classes; ++c) {
        m.weights[c * 2 * num_classes + c] = 1.0;
        m.weights[c * 2 * num_classes + num_classes + c] = 1.0;
    }
    return m;
}

ClassProbs fuse_linear(const ClassProbs& y1, const ClassProbs& y2, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw Error("AlphaOutOfRange", "alpha must be in [0, 1]");
    if (y1.size() != y2.size()) throw Error("ShapeMismatch", "class counts differ");
    std::vector<double> out(y1.size());
    for (std::size_t i = 0; i < y1.size(); ++i) out[i] = alpha * y1[i] + (1.0 - alpha) * y2[i];
    return ClassProbs(std::move(out));
}

double fuse_linear(double y1, double y2, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw Error("AlphaOutOfRange", "alpha must be in [0, 1]");
    return alpha * y1 + (1.0 - alpha) * y2;
}

namespace {

// Grid argmin with ties resolved toward 0.5, then toward the smaller alpha.
double alpha_grid_argmin(const std::function<double(double)>& metric, double grid_step) {
    double best_alpha = 0.0, best_err = 0.0;
    bool have = false;
    const int steps = static_cast<int>(std::round(1.0 / grid_step));
    for (int i = 0; i <= steps; ++i) {
        double alpha = std::min(1.0, i * grid_step);
        double err = metric(alpha);
        bool better = !have || err < best_err - 1e-12;
        if (!better && have && std::abs(err - best_err) <= 1e-12) {
            double da = std::abs(alpha - 0.5), db = std::abs(best_alpha - 0.5);
            better = da < db - 1e-12 || (std::abs(da - db) <= 1e-12 && alpha < best_alpha);
        }
        if (better) {
            best_alpha = alpha;
            best_err = err;
            have = true;
        }
    }
    return best_alpha;
}

double classify_error(const std::vector<FusionPair>& pairs, double alpha) {
    std::size_t wrong = 0;
    for (const auto& p : pairs) {
        std::size_t pred = fuse_linear(p.y1, p.y2, alpha).argmax();
        if (!p.label.labels->contains(pred)) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(pairs.size());
}

}  // namespace

double tune_alpha(const std::vector<FusionPair>& pairs, double grid_step) {
    if (pairs.empty()) throw Error("Empty", "no validation pairs");
    return alpha_grid_argmin([&](double a) { return classify_error(pairs, a); }, grid_step);
}

double tune_alpha(const std::vector<DateFusionPair>& pairs, double grid_step) {
    if (pairs.empty()) throw Error("Empty", "no validation pairs");
    auto mae = [&](double alpha) {
        double sum = 0.0;
        for (const auto& p : pairs)
            sum += loss_date(DateLossKind::eval_metric, fuse_linear(p.y1, p.y2, alpha),
                             p.interval);
        return sum / static_cast<double>(pairs.size());
    };
    return alpha_grid_argmin(mae, grid_step);
}

namespace {

std::vector<double> concat_probs(const ClassProbs& y1, const ClassProbs& y2) {
    std::vector<double> x = y1.values();
    x.insert(x.end(), y2.values().begin(), y2.values().end());
    return x;
}

}  // namespace

ClassProbs fuse_loglinear(const LogLinearFusion& model, const ClassProbs& y1,
                          const ClassProbs& y2) {
    if (y1.size() != model.num_classes || y2.size() != model.num_classes)
        throw Error("ShapeMismatch", "input class counts do not match the fusion");
    const std::size_t C = model.num_classes;
    std::vector<double> x = concat_probs(y1, y2);
    std::vector<double> z(C);
    for (std::size_t c = 0; c < C; ++c) {
        double acc = model.bias[c];
        const double* row = model.weights.data() + c * 2 * C;
        for (std::size_t j = 0; j < 2 * C; ++j) acc += row[j] * x[j];
        z[c] = acc;
    }
    return softmax(z);
}

namespace {

struct Objective {
    const std::vector<FusionPair>& pairs;
    const LogLinearFusion& anchor;
    double lambda;
    std::size_t C;

    // params layout: W row-major then b
    double value_and_grad(const std::vector<double>& params, std::vector<double>* grad) const {
        if (grad) grad->assign(params.size(), 0.0);
        const std::size_t wsize = C * 2 * C;
        double obj = 0.0;
        for (const auto& p : pairs) {
            std::vector<double> x = concat_probs(p.y1, p.y2);
            std::vector<double> z(C);
            for (std::size_t c = 0; c < C; ++c) {
                double acc = params[wsize + c];
                const double* row = params.data() + c * 2 * C;
                for (std::size_t j = 0; j < 2 * C; ++j) acc += row[j] * x[j];
                z[c] = acc;
            }
            auto [loss, gz] = loss_class_grad(ClassLossKind::hard, z, *p.label.labels);
            obj += loss;
            if (grad)
                for (std::size_t c = 0; c < C; ++c) {
                    for (std::size_t j = 0; j < 2 * C; ++j)
                        (*grad)[c * 2 * C + j] += gz[c] * x[j];
                    (*grad)[wsize + c] += gz[c];
                }
        }
        for (std::size_t i = 0; i < wsize; ++i) {
            double d = params[i] - anchor.weights[i];
            obj += lambda * d * d;
            if (grad) (*grad)[i] += 2.0 * lambda * d;
        }
        for (std::size_t c = 0; c < C; ++c) {
            double b = params[wsize + c];
            obj += lambda * b * b;
            if (grad) (*grad)[wsize + c] += 2.0 * lambda * b;
        }
        return obj;
    }
};

}  // namespace

LogLinearFusion train_loglinear(const std::vector<FusionPair>& pairs, double lambda) {
    if (pairs.empty()) throw Error("Empty", "no fusion training pairs");
    const std::size_t C = pairs.front().y1.size();
    if (C < 2) throw Error("InvalidModel", "log-linear fusion needs >= 2 classes");
    for (const auto& p : pairs) {
        if (p.y1.size() != C || p.y2.size() != C)
            throw Error("ShapeMismatch", "inconsistent class counts in fusion pairs");
        if (!p.label.labels) throw Error("InvalidLabel", "log-linear fusion is classification-only");
    }

    LogLinearFusion anchor = LogLinearFusion::anchor(C, lambda);
    Objective obj{pairs, anchor, lambda, C};

    std::vector<double> params = anchor.weights;
    params.insert(params.end(), anchor.bias.begin(), anchor.bias.end());

    std::vector<double> grad;
    double fval = obj.value_and_grad(params, &grad);
    double lr = 1.0;
    std::vector<double> trial(params.size());

    for (std::size_t step = 0; step < 10000; ++step) {
        double gnorm2 = 0.0;
        for (double g : grad) gnorm2 += g * g;
        if (std::sqrt(gnorm2) < 1e-6) break;

        // Backtracking line search with a growing initial step.
        bool accepted = false;
        while (lr > 1e-18) {
            for (std::size_t i = 0; i < params.size(); ++i)
                trial[i] = params[i] - lr * grad[i];
            double ftrial = obj.value_and_grad(trial, nullptr);
            if (ftrial <= fval - 1e-4 * lr * gnorm2) {
                params.swap(trial);
                fval = obj.value_and_grad(params, &grad);
                lr *= 2.0;
                accepted = true;
                break;
            }
            lr *= 0.5;
        }
        if (!accepted) break;
    }

    LogLinearFusion out = anchor;
    const std::size_t wsize = C * 2 * C;
    out.weights.assign(params.begin(), params.begin() + wsize);
    out.bias.assign(params.begin() + wsize, params.end());
    out.validate();
    return out;
}

CrossvalResult crossval_lambda(const std::vector<FusionPair>& pairs, std::size_t folds,
                               std::vector<double> lambda_grid, std::uint64_t seed) {
    if (folds < 2) throw Error("InvalidConfig", "need at least 2 folds");
    if (pairs.size() < folds)
        throw Error("TooFewExamples", "fewer examples than folds");
    if (lambda_grid.empty()) throw Error("InvalidConfig", "empty lambda grid");

    std::vector<std::size_t> order(pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::size_t> fold_of(pairs.size());
    for (std::size_t i = 0; i < order.size(); ++i) fold_of[order[i]] = i % folds;

    double best_lambda = lambda_grid.front();
    double best_err = 0.0;
    bool have = false;
    for (double lambda : lambda_grid) {
        double total_err = 0.0;
        for (std::size_t f = 0; f < folds; ++f) {
            std::vector<FusionPair> train_pairs, held;
            for (std::size_t i = 0; i < pairs.size(); ++i)
                (fold_of[i] == f ? held : train_pairs).push_back(pairs[i]);
            LogLinearFusion m = train_loglinear(train_pairs, lambda);
            std::size_t wrong = 0;
            for (const auto& p : held)
                if (!p.label.labels->contains(fuse_loglinear(m, p.y1, p.y2).argmax())) ++wrong;
            total_err += static_cast<double>(wrong) / static_cast<double>(held.size());
        }
        double mean_err = total_err / static_cast<double>(folds);
        // ties -> larger lambda, i.e. closer to averaging
        if (!have || mean_err < best_err - 1e-12 ||
            (std::abs(mean_err - best_err) <= 1e-12 && lambda > best_lambda)) {
            best_lambda = lambda;
            best_err = mean_err;
            have = true;
        }
    }
    return {best_lambda, train_loglinear(pairs, best_lambda), best_err};
}

}  // namespace pagefuse
