#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "pagefuse/core.hpp"

namespace pagefuse {

enum class ClassLossKind { cross_entropy, hard, soft };
enum class DateLossKind { mse_midpoint, mae_midpoint, eval_metric, interval_huber };

// Numerically stable softmax (max-shifted).
ClassProbs softmax(const std::vector<double>& logits);

// Probabilities are clamped to [1e-12, 1] before any log.
constexpr double kProbClamp = 1e-12;

// L_hard: -log of the most probable page-level label's probability.
double loss_hard(const ClassProbs& f, const LabelSet& labels);

// L_soft: sum over page labels of -log(f_i) * f_i.
double loss_soft(const ClassProbs& f, const LabelSet& labels);

// Index of the label L_hard selects (argmax over the label set, ties -> lowest index).
std::size_t hard_selected_label(const ClassProbs& f, const LabelSet& labels);

struct ClassLossGrad {
    double loss;
    std::vector<double> grad_wrt_logits;
};

// Loss value and analytic gradient with respect to the logits.
ClassLossGrad loss_class_grad(ClassLossKind kind, const std::vector<double>& logits,
                              const LabelSet& labels);

double loss_date(DateLossKind kind, double y, const DateInterval& iv);

struct DateLossGrad {
    double loss;
    double dloss_dy;
};

DateLossGrad loss_date_grad(DateLossKind kind, double y, const DateInterval& iv);

// Central finite differences against the analytic gradient; returns the max over
// coordinates of |analytic - numeric| / max(1, |analytic|, |numeric|).
double grad_check(const std::function<double(const std::vector<double>&)>& fn,
                  const std::vector<double>& analytic_grad, const std::vector<double>& point,
                  double eps);

}  // namespace pagefuse
