#include "pagefuse/io.hpp"

#include <cstring>
#include <fstream>

namespace pagefuse::io {

using nlohmann::json;

namespace {

constexpr char kB64Chars[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IoError", "cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("IoError", "cannot open for reading: " + path);
    return in;
}

json parse_line(const std::string& line, const std::string& path, std::size_t lineno) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded())
        throw Error("IoError", path + ":" + std::to_string(lineno) + ": invalid JSON");
    return j;
}

}  // namespace

std::string encode_base64(const std::vector<double>& values) {
    // little-endian IEEE-754 doubles
    std::vector<unsigned char> bytes(values.size() * 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &values[i], 8);
        for (int b = 0; b < 8; ++b) bytes[i * 8 + b] = (bits >> (8 * b)) & 0xFF;
    }
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < bytes.size(); i += 3) {
        std::uint32_t chunk = bytes[i] << 16;
        if (i + 1 < bytes.size()) chunk |= bytes[i + 1] << 8;
        if (i + 2 < bytes.size()) chunk |= bytes[i + 2];
        out.push_back(kB64Chars[(chunk >> 18) & 0x3F]);
        out.push_back(kB64Chars[(chunk >> 12) & 0x3F]);
        out.push_back(i + 1 < bytes.size() ? kB64Chars[(chunk >> 6) & 0x3F] : '=');
        out.push_back(i + 2 < bytes.size() ? kB64Chars[chunk & 0x3F] : '=');
    }
    return out;
}

std::vector<double> decode_base64(const std::string& text) {
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::vector<unsigned char> bytes;
    std::uint32_t chunk = 0;
    int have = 0;
    for (char c : text) {
        if (c == '=') break;
        int v = value_of(c);
        if (v < 0) throw Error("IoError", "invalid base64 payload");
        chunk = (chunk << 6) | static_cast<std::uint32_t>(v);
        if (++have == 4) {
            bytes.push_back((chunk >> 16) & 0xFF);
            bytes.push_back((chunk >> 8) & 0xFF);
            bytes.push_back(chunk & 0xFF);
            chunk = 0;
            have = 0;
        }
    }
    if (have == 2) bytes.push_back((chunk >> 4) & 0xFF);
    if (have == 3) {
        bytes.push_back((chunk >> 10) & 0xFF);
        bytes.push_back((chunk >> 2) & 0xFF);
    }
    if (bytes.size() % 8 != 0) throw Error("IoError", "base64 payload is not whole doubles");
    std::vector<double> values(bytes.size() / 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[i * 8 + b]) << (8 * b);
        std::memcpy(&values[i], &bits, 8);
    }
    return values;
}

namespace {

json label_to_json(const PageLabel& label) {
    json j;
    if (label.labels) {
        j["classes"] = label.labels->classes();
    } else if (label.interval) {
        j["interval"] = {label.interval->a, label.interval->b};
    }
    return j;
}

PageLabel label_from_json(const json& j) {
    PageLabel label;
    if (j.contains("classes")) {
        std::vector<std::size_t> classes = j.at("classes").get<std::vector<std::size_t>>();
        std::size_t bound = 0;
        for (std::size_t c : classes) bound = std::max(bound, c + 1);
        label.labels = LabelSet(std::move(classes), bound);
    } else if (j.contains("interval")) {
        auto iv = j.at("interval");
        label.interval = DateInterval(iv.at(0).get<double>(), iv.at(1).get<double>());
    } else {
        throw Error("IoError", "label needs 'classes' or 'interval'");
    }
    return label;
}

}  // namespace

json page_to_json(const PageRecord& page) {
    json j;
    j["page_id"] = page.page_id;
    j["label"] = label_to_json(page.label);
    json cuts = json::array();
    for (const auto& c : page.cutouts) {
        json cj;
        cj["cutout_id"] = c.cutout_id;
        cj["kind"] = c.kind == CutoutKind::patch ? "patch" : "textline";
        if (c.scale) cj["scale"] = *c.scale;
        if (c.in_text_region) cj["in_text_region"] = *c.in_text_region;
        if (c.length_px) cj["length_px"] = *c.length_px;
        if (c.features) cj["features"] = *c.features;
        if (c.score_probs) cj["score_probs"] = *c.score_probs;
        if (c.score_year) cj["score_year"] = *c.score_year;
        cuts.push_back(std::move(cj));
    }
    j["cutouts"] = std::move(cuts);
    return j;
}

PageRecord page_from_json(const json& j) {
    PageRecord page;
    page.page_id = j.at("page_id").get<std::string>();
    page.label = label_from_json(j.at("label"));
    for (const auto& cj : j.at("cutouts")) {
        CutoutRecord c;
        c.page_id = page.page_id;
        c.cutout_id = cj.at("cutout_id").get<std::string>();
        c.kind = cj.at("kind").get<std::string>() == "patch" ? CutoutKind::patch
                                                             : CutoutKind::textline;
        if (cj.contains("scale")) c.scale = cj.at("scale").get<int>();
        if (cj.contains("in_text_region")) c.in_text_region = cj.at("in_text_region").get<bool>();
        if (cj.contains("length_px")) c.length_px = cj.at("length_px").get<int>();
        if (cj.contains("features"))
            c.features = cj.at("features").get<std::vector<double>>();
        if (cj.contains("score_probs"))
            c.score_probs = cj.at("score_probs").get<std::vector<double>>();
        if (cj.contains("score_year")) c.score_year = cj.at("score_year").get<double>();
        page.cutouts.push_back(std::move(c));
    }
    page.validate();
    return page;
}

void write_pages_jsonl(const std::string& path, const std::vector<PageRecord>& pages) {
    auto out = open_out(path);
    for (const auto& page : pages) out << page_to_json(page).dump() << '\n';
}

std::vector<PageRecord> read_pages_jsonl(const std::string& path) {
    auto in = open_in(path);
    std::vector<PageRecord> pages;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        pages.push_back(page_from_json(parse_line(line, path, lineno)));
    }
    return pages;
}

void write_predictions_jsonl(const std::string& path, const std::vector<Prediction>& preds) {
    auto out = open_out(path);
    for (const auto& p : preds) {
        json j = p.extra;
        j["page_id"] = p.page_id;
        if (p.probs) j["probs"] = p.probs->values();
        if (p.year) j["year"] = *p.year;
        j["method"] = p.method;
        j["flags"] = {{"fallback_used", p.fallback_used}};
        out << j.dump() << '\n';
    }
}

std::vector<Prediction> read_predictions_jsonl(const std::string& path) {
    auto in = open_in(path);
    std::vector<Prediction> preds;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = parse_line(line, path, lineno);
        Prediction p;
        p.page_id = j.at("page_id").get<std::string>();
        if (j.contains("probs")) p.probs = ClassProbs(j.at("probs").get<std::vector<double>>());
        if (j.contains("year")) p.year = j.at("year").get<double>();
        if (j.contains("method")) p.method = j.at("method").get<std::string>();
        if (j.contains("flags") && j.at("flags").contains("fallback_used"))
            p.fallback_used = j.at("flags").at("fallback_used").get<bool>();
        // keep unknown fields
        for (auto it = j.begin(); it != j.end(); ++it)
            if (it.key() != "page_id" && it.key() != "probs" && it.key() != "year" &&
                it.key() != "method" && it.key() != "flags")
                p.extra[it.key()] = it.value();
        preds.push_back(std::move(p));
    }
    return preds;
}

void write_model(const std::string& path, const LinearModel& model) {
    model.validate();
    json j;
    j["format"] = kFormatTag;
    j["task"] = model.task == TaskKind::classify ? "classify" : "date";
    j["num_classes"] = model.num_classes;
    j["feature_dim"] = model.feature_dim;
    j["year_scale"] = {{"offset", model.year_scale.offset}, {"scale", model.year_scale.scale}};
    j["params"] = encode_base64(model.flatten());
    write_json_file(path, j);
}

LinearModel read_model(const std::string& path) {
    json j = read_json_file(path);
    if (j.value("format", "") != kFormatTag)
        throw Error("IoError", path + ": unrecognized model format");
    LinearModel model;
    model.task = j.at("task").get<std::string>() == "date" ? TaskKind::date : TaskKind::classify;
    model.num_classes = j.at("num_classes").get<std::size_t>();
    model.feature_dim = j.at("feature_dim").get<std::size_t>();
    model.year_scale.offset = j.at("year_scale").at("offset").get<double>();
    model.year_scale.scale = j.at("year_scale").at("scale").get<double>();
    model.weights.assign(model.num_classes * model.feature_dim, 0.0);
    model.bias.assign(model.num_classes, 0.0);
    model.unflatten(decode_base64(j.at("params").get<std::string>()));
    model.validate();
    return model;
}

void write_checkpoints(const std::string& dir, const std::vector<Checkpoint>& ckpts,
                       const LinearModel& reference) {
    for (const auto& ck : ckpts) {
        LinearModel snapshot = reference;
        snapshot.unflatten(ck.parameters);
        char name[32];
        std::snprintf(name, sizeof(name), "checkpoint_%09zu.json", ck.iteration);
        write_model(dir + "/" + name, snapshot);
    }
}

void write_linear_fusion(const std::string& path, const LinearFusion& fusion) {
    json j;
    j["format"] = kFormatTag;
    j["fusion"] = "linear";
    j["alpha"] = fusion.alpha;
    write_json_file(path, j);
}

void write_loglinear_fusion(const std::string& path, const LogLinearFusion& fusion) {
    fusion.validate();
    json j;
    j["format"] = kFormatTag;
    j["fusion"] = "loglinear";
    j["num_classes"] = fusion.num_classes;
    j["lambda"] = fusion.lambda;
    std::vector<double> params = fusion.weights;
    params.insert(params.end(), fusion.bias.begin(), fusion.bias.end());
    j["params"] = encode_base64(params);
    write_json_file(path, j);
}

AnyFusion read_fusion(const std::string& path) {
    json j = read_json_file(path);
    if (j.value("format", "") != kFormatTag)
        throw Error("IoError", path + ": unrecognized fusion format");
    AnyFusion out;
    if (j.at("fusion") == "linear") {
        out.linear = LinearFusion{j.at("alpha").get<double>()};
    } else {
        LogLinearFusion m;
        m.num_classes = j.at("num_classes").get<std::size_t>();
        m.lambda = j.at("lambda").get<double>();
        std::vector<double> params = decode_base64(j.at("params").get<std::string>());
        const std::size_t wsize = m.num_classes * 2 * m.num_classes;
        if (params.size() != wsize + m.num_classes)
            throw Error("IoError", path + ": fusion payload size mismatch");
        m.weights.assign(params.begin(), params.begin() + wsize);
        m.bias.assign(params.begin() + wsize, params.end());
        m.validate();
        out.loglinear = std::move(m);
    }
    return out;
}

void write_labels_jsonl(const std::string& path, const std::vector<PageRecord>& pages) {
    auto out = open_out(path);
    for (const auto& page : pages) {
        json j;
        j["page_id"] = page.page_id;
        j["label"] = label_to_json(page.label);
        out << j.dump() << '\n';
    }
}

std::vector<LabeledPage> read_labels_jsonl(const std::string& path) {
    auto in = open_in(path);
    std::vector<LabeledPage> labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j = parse_line(line, path, lineno);
        labels.push_back({j.at("page_id").get<std::string>(), label_from_json(j.at("label"))});
    }
    return labels;
}

json read_json_file(const std::string& path) {
    auto in = open_in(path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw Error("IoError", path + ": invalid JSON");
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace pagefuse::io
