#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pagefuse/aggregate.hpp"
#include "pagefuse/core.hpp"
#include "pagefuse/fusion.hpp"
#include "pagefuse/model.hpp"

namespace pagefuse::io {

inline constexpr const char* kFormatTag = "pagefuse/1";

std::string encode_base64(const std::vector<double>& values);
std::vector<double> decode_base64(const std::string& text);

nlohmann::json page_to_json(const PageRecord& page);
PageRecord page_from_json(const nlohmann::json& j);

void write_pages_jsonl(const std::string& path, const std::vector<PageRecord>& pages);
std::vector<PageRecord> read_pages_jsonl(const std::string& path);

// One page-level prediction line. `extra` carries unknown fields verbatim so
// read-modify-write round trips preserve them.
struct Prediction {
    std::string page_id;
    std::optional<ClassProbs> probs;
    std::optional<double> year;
    std::string method;
    bool fallback_used = false;
    nlohmann::json extra = nlohmann::json::object();
};

void write_predictions_jsonl(const std::string& path, const std::vector<Prediction>& preds);
std::vector<Prediction> read_predictions_jsonl(const std::string& path);

// Model container: JSON header + base64 row-major little-endian doubles.
void write_model(const std::string& path, const LinearModel& model);
LinearModel read_model(const std::string& path);

void write_checkpoints(const std::string& dir, const std::vector<Checkpoint>& ckpts,
                       const LinearModel& reference);

void write_linear_fusion(const std::string& path, const LinearFusion& fusion);
void write_loglinear_fusion(const std::string& path, const LogLinearFusion& fusion);
// Reads either fusion flavor; exactly one output is set.
struct AnyFusion {
    std::optional<LinearFusion> linear;
    std::optional<LogLinearFusion> loglinear;
};
AnyFusion read_fusion(const std::string& path);

// Page labels as a standalone jsonl file (page_id + label).
void write_labels_jsonl(const std::string& path, const std::vector<PageRecord>& pages);
struct LabeledPage {
    std::string page_id;
    PageLabel label;
};
std::vector<LabeledPage> read_labels_jsonl(const std::string& path);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace pagefuse::io
