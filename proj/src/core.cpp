#include "pagefuse/core.hpp"

#include <algorithm>
#include <set>

namespace pagefuse {

namespace {
constexpr double kNormTolerance = 1e-9;
}

ClassProbs::ClassProbs(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error("Empty", "ClassProbs requires at least one entry");
    double sum = 0.0;
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error("NonFinite", "probability is not finite");
        if (v < 0.0 || v > 1.0) throw Error("OutOfRange", "probability outside [0, 1]");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kNormTolerance)
        throw Error("NotNormalized", "probabilities sum to " + std::to_string(sum));
}

std::size_t ClassProbs::argmax() const {
    return static_cast<std::size_t>(
        std::max_element(values_.begin(), values_.end()) - values_.begin());
}

LabelSet::LabelSet(std::vector<std::size_t> classes, std::size_t num_classes) {
    if (classes.empty()) throw Error("Empty", "label set must be non-empty");
    std::set<std::size_t> uniq(classes.begin(), classes.end());
    for (std::size_t c : uniq) {
        if (c >= num_classes)
            throw Error("IndexOutOfRange",
                        "class " + std::to_string(c) + " >= " + std::to_string(num_classes));
    }
    classes_.assign(uniq.begin(), uniq.end());
}

bool LabelSet::contains(std::size_t c) const {
    return std::binary_search(classes_.begin(), classes_.end(), c);
}

void CutoutRecord::validate() const {
    if (kind == CutoutKind::patch) {
        if (!scale || !in_text_region)
            throw Error("InvalidCutout", cutout_id + ": patch needs scale and in_text_region");
        if (*scale < 1 || *scale > 4)
            throw Error("InvalidCutout", cutout_id + ": scale must be in 1..4");
    } else {
        if (!length_px)
            throw Error("InvalidCutout", cutout_id + ": textline needs length_px");
        if (*length_px < 0)
            throw Error("InvalidCutout", cutout_id + ": negative length_px");
    }
    if (!features && !score_probs && !score_year)
        throw Error("InvalidCutout", cutout_id + ": needs features or a score");
}

void PageRecord::validate() const {
    for (const auto& c : cutouts) {
        if (c.page_id != page_id)
            throw Error("InvalidPage",
                        page_id + ": cutout " + c.cutout_id + " carries page_id " + c.page_id);
        c.validate();
    }
}

}  // namespace pagefuse
