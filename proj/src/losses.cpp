#include "pagefuse/losses.hpp"

#include <algorithm>
#include <cmath>

namespace pagefuse {

namespace {

double clamp_prob(double p) { return std::min(1.0, std::max(kProbClamp, p)); }

void check_labels(const ClassProbs& f, const LabelSet& labels) {
    for (std::size_t c : labels.classes())
        if (c >= f.size()) throw Error("IndexOutOfRange", "label index exceeds class count");
}

}  // namespace

ClassProbs softmax(const std::vector<double>& logits) {
    if (logits.empty()) throw Error("Empty", "softmax of empty logits");
    double zmax = logits[0];
    for (double z : logits) {
        if (!std::isfinite(z)) throw Error("NonFinite", "non-finite logit");
        zmax = std::max(zmax, z);
    }
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - zmax);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return ClassProbs(std::move(p));
}

std::size_t hard_selected_label(const ClassProbs& f, const LabelSet& labels) {
    check_labels(f, labels);
    std::size_t best = labels.classes().front();
    for (std::size_t c : labels.classes())
        if (f[c] > f[best]) best = c;  // ties keep the lowest index (classes are sorted)
    return best;
}

double loss_hard(const ClassProbs& f, const LabelSet& labels) {
    return -std::log(clamp_prob(f[hard_selected_label(f, labels)]));
}

double loss_soft(const ClassProbs& f, const LabelSet& labels) {
    check_labels(f, labels);
    double loss = 0.0;
    for (std::size_t c : labels.classes()) loss += -std::log(clamp_prob(f[c])) * f[c];
    return loss;
}

ClassLossGrad loss_class_grad(ClassLossKind kind, const std::vector<double>& logits,
                              const LabelSet& labels) {
    ClassProbs f = softmax(logits);
    check_labels(f, labels);
    const std::size_t n = f.size();
    std::vector<double> grad(n, 0.0);

    if (kind == ClassLossKind::cross_entropy && labels.size() > 1)
        throw Error("MultiLabelUnsupported", "cross entropy requires a single label");

    if (kind == ClassLossKind::cross_entropy || kind == ClassLossKind::hard) {
        std::size_t selected = hard_selected_label(f, labels);
        for (std::size_t k = 0; k < n; ++k) grad[k] = f[k];
        grad[selected] -= 1.0;
        return {-std::log(clamp_prob(f[selected])), std::move(grad)};
    }

    // soft: full product rule through the f_i weights
    double loss = 0.0;
    for (std::size_t i : labels.classes()) {
        double fi = f[i];
        double coef = -(std::log(clamp_prob(fi)) + 1.0) * fi;
        loss += -std::log(clamp_prob(fi)) * fi;
        for (std::size_t k = 0; k < n; ++k) {
            double jac = (i == k ? fi * (1.0 - fi) : -fi * f[k]);
            grad[k] += coef / fi * jac;
        }
    }
    return {loss, std::move(grad)};
}

double loss_date(DateLossKind kind, double y, const DateInterval& iv) {
    const double m = iv.midpoint();
    const double r = iv.radius();
    switch (kind) {
        case DateLossKind::mse_midpoint:
            return (y - m) * (y - m);
        case DateLossKind::mae_midpoint:
            return std::abs(y - m);
        case DateLossKind::eval_metric:
            return std::max({0.0, iv.a - y, y - iv.b});
        case DateLossKind::interval_huber:
            if (r == 0.0) return std::abs(y - iv.a);  // limit of both linear branches
            if (y <= iv.a) return iv.a - y + r / 2.0;
            if (y >= iv.b) return y - iv.b + r / 2.0;
            return (y - m) * (y - m) / (2.0 * r);
    }
    throw Error("InvalidLoss", "unknown date loss kind");
}

DateLossGrad loss_date_grad(DateLossKind kind, double y, const DateInterval& iv) {
    const double m = iv.midpoint();
    const double r = iv.radius();
    double g = 0.0;
    switch (kind) {
        case DateLossKind::mse_midpoint:
            g = 2.0 * (y - m);
            break;
        case DateLossKind::mae_midpoint:
            g = (y > m) - (y < m);
            break;
        case DateLossKind::eval_metric:
            g = (y < iv.a) ? -1.0 : (y > iv.b) ? 1.0 : 0.0;
            break;
        case DateLossKind::interval_huber:
            if (r == 0.0)
                g = (y > iv.a) - (y < iv.a);
            else if (y <= iv.a)
                g = -1.0;
            else if (y >= iv.b)
                g = 1.0;
            else
                g = (y - m) / r;
            break;
    }
    return {loss_date(kind, y, iv), g};
}

double grad_check(const std::function<double(const std::vector<double>&)>& fn,
                  const std::vector<double>& analytic_grad, const std::vector<double>& point,
                  double eps) {
    if (eps <= 0.0) throw Error("InvalidEps", "eps must be positive");
    if (analytic_grad.size() != point.size())
        throw Error("ShapeMismatch", "gradient and point dimensions differ");
    std::vector<double> x = point;
    double max_err = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        x[i] = xi + eps;
        double fp = fn(x);
        x[i] = xi - eps;
        double fm = fn(x);
        x[i] = xi;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw Error("NonFinite", "loss evaluated to a non-finite value");
        double numeric = (fp - fm) / (2.0 * eps);
        double analytic = analytic_grad[i];
        double err = std::abs(analytic - numeric) /
                     std::max({1.0, std::abs(analytic), std::abs(numeric)});
        max_err = std::max(max_err, err);
    }
    return max_err;
}

}  // namespace pagefuse
