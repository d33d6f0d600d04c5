// pagefuse: synthetic data generation, training, aggregation, fusion and
// evaluation over JSON-lines page datasets.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "pagefuse/eval.hpp"
#include "pagefuse/io.hpp"
#include "pagefuse/pipeline.hpp"
#include "pagefuse/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pagefuse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitGateFailure = 1;
constexpr int kExitInputError = 2;

SynthConfig synth_config_from_json(const json& j) {
    SynthConfig cfg;
    cfg.num_classes = j.value("num_classes", cfg.num_classes);
    cfg.feature_dim = j.value("feature_dim", cfg.feature_dim);
    cfg.pages = j.value("pages", cfg.pages);
    if (j.contains("cutouts_per_page"))
        cfg.cutouts_per_page = {j["cutouts_per_page"][0].get<std::size_t>(),
                                j["cutouts_per_page"][1].get<std::size_t>()};
    cfg.mixed_label_fraction = j.value("mixed_label_fraction", cfg.mixed_label_fraction);
    cfg.class_separation = j.value("class_separation", cfg.class_separation);
    cfg.noise_sigma = j.value("noise_sigma", cfg.noise_sigma);
    cfg.date_mode = j.value("date_mode", cfg.date_mode);
    if (j.contains("year_range"))
        cfg.year_range = {j["year_range"][0].get<double>(), j["year_range"][1].get<double>()};
    if (j.contains("interval_halfwidth"))
        cfg.interval_halfwidth = {j["interval_halfwidth"][0].get<double>(),
                                  j["interval_halfwidth"][1].get<double>()};
    if (j.contains("length_px_range"))
        cfg.length_px_range = {j["length_px_range"][0].get<int>(),
                               j["length_px_range"][1].get<int>()};
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

json synth_config_to_json(const SynthConfig& cfg) {
    json j;
    j["num_classes"] = cfg.num_classes;
    j["feature_dim"] = cfg.feature_dim;
    j["pages"] = cfg.pages;
    j["cutouts_per_page"] = {cfg.cutouts_per_page.first, cfg.cutouts_per_page.second};
    j["mixed_label_fraction"] = cfg.mixed_label_fraction;
    j["class_separation"] = cfg.class_separation;
    j["noise_sigma"] = cfg.noise_sigma;
    j["date_mode"] = cfg.date_mode;
    j["year_range"] = {cfg.year_range.first, cfg.year_range.second};
    j["interval_halfwidth"] = {cfg.interval_halfwidth.first, cfg.interval_halfwidth.second};
    j["length_px_range"] = {cfg.length_px_range.first, cfg.length_px_range.second};
    j["seed"] = cfg.seed;
    return j;
}

struct LossFlag {
    std::string name = "ce";

    bool is_date() const {
        return name == "mse" || name == "mae" || name == "eval" || name == "huber";
    }
    std::variant<ClassLossKind, DateLossKind> parse() const {
        if (name == "ce") return ClassLossKind::cross_entropy;
        if (name == "hard") return ClassLossKind::hard;
        if (name == "soft") return ClassLossKind::soft;
        if (name == "mse") return DateLossKind::mse_midpoint;
        if (name == "mae") return DateLossKind::mae_midpoint;
        if (name == "eval") return DateLossKind::eval_metric;
        if (name == "huber") return DateLossKind::interval_huber;
        throw Error("BadConfig", "unknown loss '" + name + "'");
    }
};

PatchApproach parse_approach(const std::string& s) {
    if (s == "P") return PatchApproach::P;
    if (s == "R") return PatchApproach::R;
    if (s == "P+R") return PatchApproach::PplusR;
    throw Error("BadConfig", "unknown approach '" + s + "'");
}

LineAggMethod parse_agg(const std::string& s) {
    if (s == "mean") return LineAggMethod::mean;
    if (s == "count") return LineAggMethod::count;
    if (s == "probs") return LineAggMethod::probs;
    if (s == "median") return LineAggMethod::median;
    throw Error("BadConfig", "unknown aggregation '" + s + "'");
}

double mean_interval_midpoint(const std::vector<PageRecord>& pages) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& p : pages)
        if (p.label.interval) {
            sum += p.label.interval->midpoint();
            ++n;
        }
    return n ? sum / static_cast<double>(n) : 0.0;
}

// Page-level validation metric for the training log: error rate via textline
// mean aggregation, or MAE-to-interval via median aggregation.
double validation_metric(const LinearModel& model, const std::vector<PageRecord>& pages) {
    if (pages.empty()) return 0.0;
    auto scores = score_pages_parallel(pages, model);
    AggregateOptions opts;
    opts.method = model.task == TaskKind::classify ? LineAggMethod::mean : LineAggMethod::median;
    opts.fallback_year = mean_interval_midpoint(pages);
    auto preds = aggregate_pages_parallel(scores, opts, model.task, model.num_classes);
    if (model.task == TaskKind::classify) {
        std::vector<ClassProbs> probs;
        std::vector<LabelSet> labels;
        for (std::size_t i = 0; i < pages.size(); ++i) {
            probs.push_back(*preds[i].result.probs);
            labels.push_back(*pages[i].label.labels);
        }
        return 1.0 - accuracy(probs, labels);
    }
    std::vector<double> years;
    std::vector<DateInterval> intervals;
    for (std::size_t i = 0; i < pages.size(); ++i) {
        years.push_back(*preds[i].result.year);
        intervals.push_back(*pages[i].label.interval);
    }
    return date_mae(years, intervals);
}

int cmd_synth(const std::string& config_path, const std::string& out_dir) {
    SynthConfig cfg = synth_config_from_json(io::read_json_file(config_path));
    auto pages = generate(cfg);
    fs::create_directories(out_dir);
    io::write_pages_jsonl(out_dir + "/pages.jsonl", pages);
    io::write_labels_jsonl(out_dir + "/labels.jsonl", pages);
    json manifest;
    manifest["format"] = io::kFormatTag;
    manifest["kind"] = "dataset";
    manifest["seed"] = cfg.seed;
    manifest["config"] = synth_config_to_json(cfg);
    io::write_json_file(out_dir + "/manifest.json", manifest);
    std::cout << "wrote " << pages.size() << " pages to " << out_dir << "\n";
    return kExitOk;
}

int cmd_train(const std::string& dataset, const std::string& out_dir, const TrainConfig& cfg,
              std::size_t val_pages, std::uint64_t split_seed) {
    auto pages = io::read_pages_jsonl(dataset);
    Split split{pages, {}};
    if (val_pages > 0) split = split_random(pages, val_pages, split_seed);

    TrainResult result = train(split.train, cfg);
    fs::create_directories(out_dir);
    fs::create_directories(out_dir + "/checkpoints");
    io::write_model(out_dir + "/model.json", result.model);
    io::write_checkpoints(out_dir + "/checkpoints", result.checkpoints, result.model);

    std::ofstream log(out_dir + "/train_log.jsonl");
    LinearModel snapshot = result.model;
    for (const auto& ck : result.checkpoints) {
        snapshot.unflatten(ck.parameters);
        json entry;
        entry["iteration"] = ck.iteration;
        double loss = 0.0;
        if (ck.iteration > 0) {
            // trailing window over the mini-batch losses since the last checkpoint
            std::size_t end = ck.iteration;
            std::size_t begin = end > cfg.checkpoint_stride ? end - cfg.checkpoint_stride : 0;
            for (std::size_t i = begin; i < end; ++i) loss += result.loss_log[i];
            loss /= static_cast<double>(end - begin);
        }
        entry["train_loss"] = loss;
        entry["val_metric"] = validation_metric(snapshot, split.validation);
        log << entry.dump() << '\n';
    }
    std::cout << "trained " << cfg.iterations << " iterations, "
              << result.checkpoints.size() << " checkpoints -> " << out_dir << "\n";
    return kExitOk;
}

int cmd_predict(const std::string& dataset, const std::string& model_path,
                const std::string& out_path, const std::string& system,
                const AggregateOptions& opts_in) {
    auto pages = io::read_pages_jsonl(dataset);
    LinearModel model = io::read_model(model_path);
    AggregateOptions opts = opts_in;
    opts.use_patches = system == "patch";
    if (model.task == TaskKind::date && opts.fallback_year == 0.0)
        opts.fallback_year = mean_interval_midpoint(pages);

    auto scores = score_pages_parallel(pages, model);
    auto preds = aggregate_pages_parallel(scores, opts, model.task, model.num_classes);

    std::vector<io::Prediction> out;
    for (const auto& p : preds) {
        io::Prediction rec;
        rec.page_id = p.page_id;
        rec.probs = p.result.probs;
        rec.year = p.result.year;
        rec.method = system == "patch"
                         ? (opts.approach == PatchApproach::P      ? "patch/P"
                            : opts.approach == PatchApproach::R    ? "patch/R"
                                                                   : "patch/P+R")
                         : (opts.method == LineAggMethod::mean     ? "line/mean"
                            : opts.method == LineAggMethod::count  ? "line/count"
                            : opts.method == LineAggMethod::probs  ? "line/probs"
                                                                   : "line/median");
        rec.fallback_used = p.fallback_used;
        out.push_back(std::move(rec));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.page_id < b.page_id; });
    io::write_predictions_jsonl(out_path, out);
    std::cout << "wrote " << out.size() << " predictions to " << out_path << "\n";
    return kExitOk;
}

struct AlignedPair {
    io::Prediction p1;
    io::Prediction p2;  // unused for evaluate
    PageLabel label;
};

std::vector<AlignedPair> align(const std::vector<io::Prediction>& preds1,
                               const std::vector<io::Prediction>* preds2,
                               const std::vector<io::LabeledPage>& labels) {
    std::map<std::string, const io::Prediction*> by_id2;
    if (preds2)
        for (const auto& p : *preds2) by_id2[p.page_id] = &p;
    std::map<std::string, const PageLabel*> by_id_label;
    for (const auto& l : labels) by_id_label[l.page_id] = &l.label;

    std::vector<AlignedPair> out;
    for (const auto& p : preds1) {
        auto lit = by_id_label.find(p.page_id);
        if (lit == by_id_label.end())
            throw Error("PageIdMismatch", "no label for page " + p.page_id);
        AlignedPair pair;
        pair.p1 = p;
        if (preds2) {
            auto pit = by_id2.find(p.page_id);
            if (pit == by_id2.end())
                throw Error("PageIdMismatch", "no second-system prediction for " + p.page_id);
            pair.p2 = *pit->second;
        }
        pair.label = *lit->second;
        out.push_back(std::move(pair));
    }
    return out;
}

int cmd_fuse(const std::string& preds1_path, const std::string& preds2_path,
             const std::string& labels_path, const std::string& mode,
             const std::string& out_model, const std::string& out_preds, double alpha_step,
             std::size_t folds, const std::vector<double>& lambda_grid, std::uint64_t seed) {
    auto preds1 = io::read_predictions_jsonl(preds1_path);
    auto preds2 = io::read_predictions_jsonl(preds2_path);
    auto labels = io::read_labels_jsonl(labels_path);
    auto pairs = align(preds1, &preds2, labels);
    if (pairs.empty()) throw Error("Empty", "no aligned pages");

    const bool is_date = pairs.front().p1.year.has_value();
    std::vector<io::Prediction> fused;

    if (mode == "linear") {
        double alpha;
        if (is_date) {
            std::vector<DateFusionPair> dp;
            for (const auto& p : pairs) dp.push_back({*p.p1.year, *p.p2.year, *p.label.interval});
            alpha = tune_alpha(dp, alpha_step);
            for (const auto& p : pairs) {
                io::Prediction r;
                r.page_id = p.p1.page_id;
                r.year = fuse_linear(*p.p1.year, *p.p2.year, alpha);
                r.method = "fuse/linear";
                fused.push_back(std::move(r));
            }
        } else {
            std::vector<FusionPair> cp;
            for (const auto& p : pairs) cp.push_back({*p.p1.probs, *p.p2.probs, p.label});
            alpha = tune_alpha(cp, alpha_step);
            for (const auto& p : pairs) {
                io::Prediction r;
                r.page_id = p.p1.page_id;
                r.probs = fuse_linear(*p.p1.probs, *p.p2.probs, alpha);
                r.method = "fuse/linear";
                fused.push_back(std::move(r));
            }
        }
        io::write_linear_fusion(out_model, LinearFusion{alpha});
        std::cout << "alpha = " << alpha << "\n";
    } else if (mode == "loglinear") {
        if (is_date) throw Error("BadConfig", "log-linear fusion is classification-only");
        std::vector<FusionPair> cp;
        for (const auto& p : pairs) cp.push_back({*p.p1.probs, *p.p2.probs, p.label});
        CrossvalResult cv = crossval_lambda(cp, folds, lambda_grid, seed);
        for (const auto& p : pairs) {
            io::Prediction r;
            r.page_id = p.p1.page_id;
            r.probs = fuse_loglinear(cv.final_model, *p.p1.probs, *p.p2.probs);
            r.method = "fuse/loglinear";
            fused.push_back(std::move(r));
        }
        io::write_loglinear_fusion(out_model, cv.final_model);
        std::cout << "lambda = " << cv.lambda << ", cv_error = " << cv.cv_error << "\n";
    } else {
        throw Error("BadConfig", "mode must be linear or loglinear");
    }

    std::sort(fused.begin(), fused.end(),
              [](const auto& a, const auto& b) { return a.page_id < b.page_id; });
    io::write_predictions_jsonl(out_preds, fused);
    return kExitOk;
}

int cmd_evaluate(const std::string& preds_path, const std::string& labels_path,
                 const std::string& task, const std::string& out_prefix) {
    auto preds = io::read_predictions_jsonl(preds_path);
    auto labels = io::read_labels_jsonl(labels_path);
    auto pairs = align(preds, nullptr, labels);
    if (pairs.empty()) throw Error("Empty", "no aligned pages");

    TaskMetricReport report;
    std::vector<std::string> ids;
    if (task == "date") {
        std::vector<double> years;
        std::vector<DateInterval> intervals;
        for (const auto& p : pairs) {
            if (!p.p1.year) throw Error("BadConfig", "date evaluation needs year predictions");
            if (!p.label.interval) throw Error("BadConfig", "date evaluation needs intervals");
            ids.push_back(p.p1.page_id);
            years.push_back(*p.p1.year);
            intervals.push_back(*p.label.interval);
        }
        report = evaluate_date(ids, years, intervals);
    } else {
        std::vector<ClassProbs> probs;
        std::vector<LabelSet> label_sets;
        for (const auto& p : pairs) {
            if (!p.p1.probs) throw Error("BadConfig", "classification needs probs predictions");
            if (!p.label.labels) throw Error("BadConfig", "classification needs label sets");
            ids.push_back(p.p1.page_id);
            probs.push_back(*p.p1.probs);
            label_sets.push_back(*p.label.labels);
        }
        report = evaluate_classify(ids, probs, label_sets);
    }

    json summary;
    summary["format"] = io::kFormatTag;
    summary["task"] = task;
    summary["metric"] = task == "date" ? "mae_years" : "accuracy";
    summary["metric_value"] = report.metric_value;
    summary["pages"] = report.per_page.size();
    io::write_json_file(out_prefix + ".json", summary);

    std::ofstream per_page(out_prefix + ".per_page.jsonl");
    for (const auto& entry : report.per_page) {
        json j;
        j["page_id"] = entry.page_id;
        if (task == "date")
            j["distance"] = entry.distance;
        else
            j["correct"] = entry.correct;
        per_page << j.dump() << '\n';
    }

    if (task == "date")
        std::printf("%-12s %10s\n%-12s %10.4f\n", "task", "mae_years", task.c_str(),
                    report.metric_value);
    else
        std::printf("%-12s %10s\n%-12s %9.2f%%\n", "task", "accuracy", task.c_str(),
                    100.0 * report.metric_value);
    return kExitOk;
}

int cmd_gradcheck(std::size_t trials, std::uint64_t seed, double eps, bool corrupt) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logit(-3.0, 3.0);
    std::uniform_real_distribution<double> year(1300.0, 1600.0);
    double worst = 0.0;
    auto note = [&](const char* name, double err) {
        std::printf("%-16s max_rel_err %.3e %s\n", name, err, err < 1e-5 ? "ok" : "FAIL");
        worst = std::max(worst, err);
    };

    for (auto kind : {ClassLossKind::cross_entropy, ClassLossKind::hard, ClassLossKind::soft}) {
        double max_err = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            std::vector<double> z{logit(rng), logit(rng), logit(rng), logit(rng)};
            LabelSet labels = kind == ClassLossKind::cross_entropy
                                  ? LabelSet({t % 4}, 4)
                                  : LabelSet({t % 4, (t + 1) % 4}, 4);
            auto [loss, grad] = loss_class_grad(kind, z, labels);
            if (corrupt && !grad.empty()) grad[0] += 1.0;
            auto fn = [&](const std::vector<double>& p) {
                ClassProbs f = softmax(p);
                if (kind == ClassLossKind::soft) return loss_soft(f, labels);
                return -std::log(std::max(1e-12, f[hard_selected_label(f, labels)]));
            };
            // skip points where the argmax flips within the stencil
            if (kind != ClassLossKind::soft) {
                ClassProbs f = softmax(z);
                std::size_t sel = hard_selected_label(f, labels);
                bool near_tie = false;
                for (std::size_t c : labels.classes())
                    if (c != sel && std::abs(f[c] - f[sel]) < 1e-3) near_tie = true;
                if (near_tie) continue;
            }
            max_err = std::max(max_err, grad_check(fn, grad, z, eps));
        }
        note(kind == ClassLossKind::cross_entropy ? "cross_entropy"
             : kind == ClassLossKind::hard        ? "hard"
                                                  : "soft",
             max_err);
    }

    for (auto kind : {DateLossKind::mse_midpoint, DateLossKind::mae_midpoint,
                      DateLossKind::eval_metric, DateLossKind::interval_huber}) {
        double max_err = 0.0;
        for (std::size_t t = 0; t < trials; ++t) {
            DateInterval iv(1400.0, 1450.0);
            double y = year(rng);
            // keep away from non-smooth loci
            if (std::abs(y - iv.a) < 0.5 || std::abs(y - iv.b) < 0.5 ||
                std::abs(y - iv.midpoint()) < 0.5)
                continue;
            auto [loss, dy] = loss_date_grad(kind, y, iv);
            if (corrupt) dy += 1.0;
            auto fn = [&](const std::vector<double>& p) { return loss_date(kind, p[0], iv); };
            max_err = std::max(max_err, grad_check(fn, {dy}, {y}, eps));
        }
        note(kind == DateLossKind::mse_midpoint   ? "mse_midpoint"
             : kind == DateLossKind::mae_midpoint ? "mae_midpoint"
             : kind == DateLossKind::eval_metric  ? "eval_metric"
                                                  : "interval_huber",
             max_err);
    }

    return worst < 1e-5 ? kExitOk : kExitGateFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pagefuse: weakly-supervised page classification pipeline"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", dataset, model_path, out_path = "preds.jsonl";
    std::string preds1, preds2, labels_path, mode = "linear", out_model = "fusion.json";
    std::string out_preds = "fused.jsonl", system = "line", approach_str = "P",
                agg_str = "mean", task = "classify", out_prefix = "report";
    std::uint64_t seed = 0;
    std::size_t trials = 100, folds = 10, val_pages = 0;
    double eps = 1e-6, alpha_step = 0.01;
    bool corrupt = false;
    std::vector<double> lambda_grid = {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
    TrainConfig tcfg;
    LossFlag loss_flag;
    AggregateOptions agg_opts;
    int min_length = -1;

    auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--config", config_path, "SynthConfig JSON file")->required();
    synth->add_option("--out", out_dir, "output directory");

    auto* train_cmd = app.add_subcommand("train", "train a linear model");
    train_cmd->add_option("--dataset", dataset, "pages.jsonl")->required();
    train_cmd->add_option("--out", out_dir, "output directory");
    train_cmd->add_option("--loss", loss_flag.name, "ce|hard|soft|mse|mae|eval|huber");
    train_cmd->add_option("--lr", tcfg.learning_rate, "learning rate");
    train_cmd->add_option("--batch", tcfg.batch_size, "batch size");
    train_cmd->add_option("--iters", tcfg.iterations, "training iterations");
    train_cmd->add_option("--seed", tcfg.seed, "RNG seed");
    train_cmd->add_flag("--class-weighting", tcfg.class_weighting, "inverse-frequency weights");
    train_cmd->add_option("--min-length", tcfg.min_length_px, "textline length filter [px]");
    train_cmd->add_option("--checkpoint-stride", tcfg.checkpoint_stride, "updates per checkpoint");
    train_cmd->add_option("--val-pages", val_pages, "held-out pages for the training log");
    std::string optimizer = "adam";
    train_cmd->add_option("--optimizer", optimizer, "sgd|adam");

    auto* predict = app.add_subcommand("predict", "score and aggregate pages");
    predict->add_option("--dataset", dataset, "pages.jsonl")->required();
    predict->add_option("--model", model_path, "model.json")->required();
    predict->add_option("--out", out_path, "predictions jsonl");
    predict->add_option("--system", system, "patch|line");
    predict->add_option("--approach", approach_str, "P|R|P+R");
    predict->add_option("--agg", agg_str, "mean|count|probs|median");
    predict->add_option("--min-length", min_length, "textline length filter [px]");
    predict->add_option("--top-k", agg_opts.top_k, "patches averaged per scale");

    auto* fuse = app.add_subcommand("fuse", "fuse two systems' predictions");
    fuse->add_option("--preds1", preds1, "system 1 predictions")->required();
    fuse->add_option("--preds2", preds2, "system 2 predictions")->required();
    fuse->add_option("--labels", labels_path, "labels.jsonl")->required();
    fuse->add_option("--mode", mode, "linear|loglinear");
    fuse->add_option("--out-model", out_model, "fusion parameters file");
    fuse->add_option("--out-preds", out_preds, "fused predictions file");
    fuse->add_option("--alpha-step", alpha_step, "alpha grid step");
    fuse->add_option("--folds", folds, "cross-validation folds");
    fuse->add_option("--lambda-grid", lambda_grid, "lambda candidates");
    fuse->add_option("--seed", seed, "fold-assignment seed");

    auto* evaluate = app.add_subcommand("evaluate", "compute task metrics");
    evaluate->add_option("--preds", preds1, "predictions jsonl")->required();
    evaluate->add_option("--labels", labels_path, "labels.jsonl")->required();
    evaluate->add_option("--task", task, "classify|date");
    evaluate->add_option("--out", out_prefix, "report file prefix");

    auto* gradcheck = app.add_subcommand("gradcheck", "verify analytic gradients");
    gradcheck->add_option("--trials", trials, "random points per loss");
    gradcheck->add_option("--seed", seed, "RNG seed");
    gradcheck->add_option("--eps", eps, "finite-difference step");
    gradcheck->add_flag("--corrupt", corrupt, "test hook: perturb gradients");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth) return cmd_synth(config_path, out_dir);
        if (*train_cmd) {
            tcfg.loss = loss_flag.parse();
            tcfg.optimizer = optimizer == "sgd" ? OptimizerKind::sgd : OptimizerKind::adam;
            return cmd_train(dataset, out_dir, tcfg, val_pages, tcfg.seed + 1);
        }
        if (*predict) {
            agg_opts.approach = parse_approach(approach_str);
            agg_opts.method = parse_agg(agg_str);
            if (min_length >= 0)
                agg_opts.min_length = min_length;
            else
                agg_opts.min_length = agg_str == "median" ? 128 : 64;
            return cmd_predict(dataset, model_path, out_path, system, agg_opts);
        }
        if (*fuse)
            return cmd_fuse(preds1, preds2, labels_path, mode, out_model, out_preds, alpha_step,
                            folds, lambda_grid, seed);
        if (*evaluate) return cmd_evaluate(preds1, labels_path, task, out_prefix);
        if (*gradcheck) return cmd_gradcheck(trials, seed, eps, corrupt);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
