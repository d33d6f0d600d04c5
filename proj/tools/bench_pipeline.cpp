// Compares the serial reference scoring/aggregation path against the
// OpenMP-parallel kernels and verifies they produce identical output.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "pagefuse/pipeline.hpp"
#include "pagefuse/synthgen.hpp"

using namespace pagefuse;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

bool same_predictions(const std::vector<PagePrediction>& a,
                      const std::vector<PagePrediction>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].page_id != b[i].page_id) return false;
        if (a[i].result.probs.has_value() != b[i].result.probs.has_value()) return false;
        if (a[i].result.probs) {
            for (std::size_t c = 0; c < a[i].result.probs->size(); ++c)
                if ((*a[i].result.probs)[c] != (*b[i].result.probs)[c]) return false;
        }
        if (a[i].result.year != b[i].result.year) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t pages = 2000, repeats = 3;
    try {
        if (argc > 1) pages = std::stoul(argv[1]);
        if (argc > 2) repeats = std::stoul(argv[2]);
    } catch (const std::exception&) {
        std::fprintf(stderr, "usage: %s [pages] [repeats]\n", argv[0]);
        return 2;
    }

    SynthConfig cfg;
    cfg.num_classes = 8;
    cfg.feature_dim = 32;
    cfg.pages = pages;
    cfg.cutouts_per_page = {16, 32};
    cfg.seed = 7;
    auto dataset = generate(cfg);

    TrainConfig tcfg;
    tcfg.iterations = 50;
    tcfg.loss = ClassLossKind::cross_entropy;
    LinearModel model = train(dataset, tcfg).model;

    AggregateOptions opts;
    opts.use_patches = true;
    opts.approach = PatchApproach::PplusR;

    double t_serial = 1e300, t_parallel = 1e300;
    std::vector<PagePrediction> ref, par;
    for (std::size_t r = 0; r < repeats; ++r) {
        auto t0 = clock_type::now();
        auto s = score_pages_serial(dataset, model);
        ref = aggregate_pages_serial(s, opts, TaskKind::classify, cfg.num_classes);
        t_serial = std::min(t_serial, seconds_since(t0));

        t0 = clock_type::now();
        auto p = score_pages_parallel(dataset, model);
        par = aggregate_pages_parallel(p, opts, TaskKind::classify, cfg.num_classes);
        t_parallel = std::min(t_parallel, seconds_since(t0));
    }

    if (!same_predictions(ref, par)) {
        std::fprintf(stderr, "FAIL: parallel output differs from serial reference\n");
        return 1;
    }
    std::printf("pages=%zu threads=%d\n", pages, worker_threads());
    std::printf("serial   %8.1f ms\n", 1e3 * t_serial);
    std::printf("parallel %8.1f ms  (speedup %.2fx)\n", 1e3 * t_parallel,
                t_serial / t_parallel);
    return 0;
}
