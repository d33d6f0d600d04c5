#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pagefuse/losses.hpp"

using namespace pagefuse;

namespace {

std::vector<double> random_logits(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    std::vector<double> z(n);
    for (double& v : z) v = d(rng);
    return z;
}

}  // namespace

TEST_CASE("softmax basics") {
    CHECK(softmax({0.0, 0.0})[0] == doctest::Approx(0.5));
    auto p = softmax({std::log(2.0), 0.0});
    CHECK(p[0] == doctest::Approx(2.0 / 3.0));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0));
    auto q = softmax({1000.0, 0.0});  // no overflow
    CHECK(q[0] == doctest::Approx(1.0));
    CHECK(q[1] == doctest::Approx(0.0));
    CHECK_THROWS_AS(softmax({std::nan(""), 0.0}), Error);
}

TEST_CASE("loss_hard values") {
    ClassProbs f({0.5, 0.3, 0.2});
    CHECK(loss_hard(f, LabelSet({0, 2}, 3)) == doctest::Approx(-std::log(0.5)));
    CHECK(loss_hard(f, LabelSet({1}, 3)) == doctest::Approx(-std::log(0.3)));
    ClassProbs uniform({1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(loss_hard(uniform, LabelSet({0, 1, 2}, 3)) == doctest::Approx(std::log(3.0)));
}

TEST_CASE("loss_soft values") {
    ClassProbs f({0.5, 0.3, 0.2});
    CHECK(loss_soft(f, LabelSet({0, 2}, 3)) ==
          doctest::Approx(0.5 * std::log(2.0) + 0.2 * std::log(5.0)));
    CHECK(loss_soft(f, LabelSet({0}, 3)) == doctest::Approx(0.5 * std::log(2.0)));
    // confident correct prediction goes to ~0 under the clamp
    double eps = 1e-12;
    ClassProbs confident({1.0 - 2 * eps, eps, eps});
    CHECK(loss_soft(confident, LabelSet({0}, 3)) < 1e-10);
}

TEST_CASE("loss_hard equals -log max over the label set") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 1000; ++t) {
        ClassProbs f = softmax(random_logits(rng, 5));
        std::vector<std::size_t> classes;
        for (std::size_t c = 0; c < 5; ++c)
            if (rng() % 2) classes.push_back(c);
        if (classes.empty()) classes.push_back(rng() % 5);
        LabelSet labels(classes, 5);
        double best = 0.0;
        for (std::size_t c : labels.classes()) best = std::max(best, f[c]);
        CHECK(loss_hard(f, labels) == doctest::Approx(-std::log(best)));
    }
}

TEST_CASE("adding a label never increases loss_hard") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 300; ++t) {
        ClassProbs f = softmax(random_logits(rng, 4));
        std::size_t c1 = rng() % 4, extra = rng() % 4;
        double small = loss_hard(f, LabelSet({c1}, 4));
        double big = loss_hard(f, LabelSet({c1, extra}, 4));
        CHECK(big <= small + 1e-12);
    }
}

TEST_CASE("singleton loss_soft is at most loss_hard") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 300; ++t) {
        ClassProbs f = softmax(random_logits(rng, 4));
        LabelSet labels({rng() % 4}, 4);
        CHECK(loss_soft(f, labels) <= loss_hard(f, labels) + 1e-12);
    }
}

TEST_CASE("class gradients at simple points") {
    auto hard = loss_class_grad(ClassLossKind::hard, {0.0, 0.0}, LabelSet({0}, 2));
    CHECK(hard.grad_wrt_logits[0] == doctest::Approx(-0.5));
    CHECK(hard.grad_wrt_logits[1] == doctest::Approx(0.5));

    auto soft = loss_class_grad(ClassLossKind::soft, {0.0, 0.0}, LabelSet({0, 1}, 2));
    CHECK(soft.grad_wrt_logits[0] == doctest::Approx(0.0));
    CHECK(soft.grad_wrt_logits[1] == doctest::Approx(0.0));

    CHECK_THROWS_WITH_AS(
        loss_class_grad(ClassLossKind::cross_entropy, {0.0, 0.0}, LabelSet({0, 1}, 2)),
        doctest::Contains("MultiLabelUnsupported"), Error);
}

TEST_CASE("soft gradient matches finite differences") {
    LabelSet labels({0, 2}, 3);
    std::vector<double> z{1.0, 0.0, -1.0};
    auto [loss, grad] = loss_class_grad(ClassLossKind::soft, z, labels);
    auto fn = [&](const std::vector<double>& p) { return loss_soft(softmax(p), labels); };
    CHECK(grad_check(fn, grad, z, 1e-6) < 1e-5);
}

TEST_CASE("date loss values") {
    DateInterval iv(1400, 1450);
    CHECK(loss_date(DateLossKind::interval_huber, 1425, iv) == doctest::Approx(0.0));
    CHECK(loss_date(DateLossKind::interval_huber, 1400, iv) == doctest::Approx(12.5));
    CHECK(loss_date(DateLossKind::interval_huber, 1500, iv) == doctest::Approx(62.5));
    CHECK(loss_date(DateLossKind::eval_metric, 1430, iv) == doctest::Approx(0.0));
    CHECK(loss_date(DateLossKind::eval_metric, 1460, iv) == doctest::Approx(10.0));
    CHECK(loss_date(DateLossKind::mse_midpoint, 1430, iv) == doctest::Approx(25.0));
    CHECK(loss_date(DateLossKind::mae_midpoint, 1430, iv) == doctest::Approx(5.0));
}

TEST_CASE("interval huber boundary continuity from both branches") {
    DateInterval iv(1400, 1450);
    double r = iv.radius();
    // quadratic branch limit at y -> a equals the linear value r/2
    double quad_at_a = (1400.0 - iv.midpoint()) * (1400.0 - iv.midpoint()) / (2.0 * r);
    CHECK(quad_at_a == doctest::Approx(r / 2.0));
    CHECK(loss_date(DateLossKind::interval_huber, 1400, iv) == doctest::Approx(r / 2.0));
    CHECK(loss_date(DateLossKind::interval_huber, 1450, iv) == doctest::Approx(r / 2.0));
}

TEST_CASE("degenerate interval falls back to absolute error") {
    DateInterval point(1500, 1500);
    CHECK(loss_date(DateLossKind::interval_huber, 1510, point) == doctest::Approx(10.0));
    CHECK(loss_date(DateLossKind::interval_huber, 1500, point) == doctest::Approx(0.0));
    CHECK(loss_date_grad(DateLossKind::interval_huber, 1490, point).dloss_dy ==
          doctest::Approx(-1.0));
}

TEST_CASE("date gradients") {
    DateInterval iv(1400, 1450);
    CHECK(loss_date_grad(DateLossKind::interval_huber, 1390, iv).dloss_dy ==
          doctest::Approx(-1.0));
    CHECK(loss_date_grad(DateLossKind::interval_huber, 1437.5, iv).dloss_dy ==
          doctest::Approx(0.5));
    for (auto kind : {DateLossKind::mse_midpoint, DateLossKind::mae_midpoint,
                      DateLossKind::eval_metric, DateLossKind::interval_huber})
        CHECK(loss_date_grad(kind, 1425.0, iv).dloss_dy == doctest::Approx(0.0));
}

TEST_CASE("eval metric and huber differ by r/2 outside the interval") {
    DateInterval iv(1400, 1450);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> year(1300.0, 1600.0);
    for (int t = 0; t < 200; ++t) {
        double y = year(rng);
        if (y > iv.a && y < iv.b) continue;
        double gap = loss_date(DateLossKind::interval_huber, y, iv) -
                     loss_date(DateLossKind::eval_metric, y, iv);
        CHECK(gap == doctest::Approx(iv.radius() / 2.0));
    }
}

TEST_CASE("grad_check on a quadratic is exact up to roundoff") {
    auto fn = [](const std::vector<double>& p) { return p[0] * p[0]; };
    CHECK(grad_check(fn, {6.0}, {3.0}, 1e-6) < 1e-7);
}

TEST_CASE("grad_check flags a corrupted gradient") {
    auto fn = [](const std::vector<double>& p) { return p[0] * p[0]; };
    CHECK(grad_check(fn, {6.5}, {3.0}, 1e-6) > 1e-2);
}

TEST_CASE("analytic gradients pass finite differences at random points") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> year(1300.0, 1600.0);
    for (std::size_t t = 0; t < 100; ++t) {
        std::vector<double> z = random_logits(rng, 4);
        LabelSet labels({t % 4, (t + 2) % 4}, 4);
        {
            auto [loss, grad] = loss_class_grad(ClassLossKind::soft, z, labels);
            auto fn = [&](const std::vector<double>& p) { return loss_soft(softmax(p), labels); };
            CHECK(grad_check(fn, grad, z, 1e-6) < 1e-5);
        }
        DateInterval iv(1400, 1450);
        double y = year(rng);
        if (std::abs(y - iv.a) > 0.5 && std::abs(y - iv.b) > 0.5) {
            auto [loss, dy] = loss_date_grad(DateLossKind::interval_huber, y, iv);
            auto fn = [&](const std::vector<double>& p) {
                return loss_date(DateLossKind::interval_huber, p[0], iv);
            };
            CHECK(grad_check(fn, {dy}, {y}, 1e-6) < 1e-6);
        }
    }
}
