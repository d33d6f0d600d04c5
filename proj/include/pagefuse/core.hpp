#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pagefuse {

// All domain-level failures surface as Error with a short machine-readable code.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Normalized categorical distribution over task classes.
class ClassProbs {
public:
    explicit ClassProbs(std::vector<double> values);

    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    // Lowest index wins ties.
    std::size_t argmax() const;
    double max_prob() const { return values_[argmax()]; }

private:
    std::vector<double> values_;
};

inline ClassProbs validate_probs(std::vector<double> values) {
    return ClassProbs(std::move(values));
}

// Non-empty set of page-level class indices.
class LabelSet {
public:
    LabelSet(std::vector<std::size_t> classes, std::size_t num_classes);

    const std::vector<std::size_t>& classes() const { return classes_; }
    bool contains(std::size_t c) const;
    std::size_t size() const { return classes_.size(); }

private:
    std::vector<std::size_t> classes_;  // sorted, deduplicated
};

// Year interval <a;b> with a <= b.
struct DateInterval {
    double a;
    double b;

    DateInterval(double a_, double b_) : a(a_), b(b_) {
        if (!(a <= b)) throw Error("InvalidInterval", "interval requires a <= b");
    }

    double midpoint() const { return 0.5 * (a + b); }
    double radius() const { return midpoint() - a; }
};

inline std::pair<double, double> interval_midpoint_radius(const DateInterval& iv) {
    return {iv.midpoint(), iv.radius()};
}

enum class CutoutKind { patch, textline };
enum class TaskKind { classify, date };

struct CutoutRecord {
    std::string page_id;
    std::string cutout_id;
    CutoutKind kind = CutoutKind::patch;
    std::optional<int> scale;            // patch only, 1..4
    std::optional<bool> in_text_region;  // patch only
    std::optional<int> length_px;        // textline only
    std::optional<std::vector<double>> features;
    std::optional<std::vector<double>> score_probs;
    std::optional<double> score_year;

    void validate() const;
};

// Page label: exactly one of the two alternatives.
struct PageLabel {
    std::optional<LabelSet> labels;
    std::optional<DateInterval> interval;

    bool is_classification() const { return labels.has_value(); }
};

struct PageRecord {
    std::string page_id;
    PageLabel label;
    std::vector<CutoutRecord> cutouts;

    void validate() const;
};

}  // namespace pagefuse
