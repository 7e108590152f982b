// Benchmark: per-day classification throughput, serial reference vs the
// OpenMP path, plus special-function kernel rates.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pvwave/pipeline.hpp"
#include "pvwave/specfun.hpp"
#include "pvwave/synth.hpp"

using namespace pvwave;

namespace {

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best_of(int reps, F&& body) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const double t0 = now_seconds();
        body();
        best = std::min(best, now_seconds() - t0);
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    const int days = argc > 1 ? std::atoi(argv[1]) : 64;
    const int ticks = argc > 2 ? std::atoi(argv[2]) : 50000;

    CorpusSpec spec;
    spec.day_count = days;
    spec.n_ticks = ticks;
    spec.seed = 12345;
    std::printf("generating %d days x %d ticks...\n", days, ticks);
    const Corpus corpus = synth_corpus(spec);

    PipelineConfig serial_cfg;
    serial_cfg.parallel = false;
    serial_cfg.fit.df_convention = DfConvention::conventional;
    PipelineConfig parallel_cfg = serial_cfg;
    parallel_cfg.parallel = true;

    std::vector<DayClassification> serial_result, parallel_result;
    const double t_serial =
        time_best_of(3, [&] { serial_result = classify_corpus_serial(corpus.days, serial_cfg); });
    const double t_parallel =
        time_best_of(3, [&] { parallel_result = classify_corpus(corpus.days, parallel_cfg); });

    bool identical = serial_result.size() == parallel_result.size();
    for (std::size_t i = 0; identical && i < serial_result.size(); ++i) {
        identical = serial_result[i].cls == parallel_result[i].cls &&
                    serial_result[i].equilibrium_price == parallel_result[i].equilibrium_price;
        if (serial_result[i].chosen_fit && identical) {
            identical = parallel_result[i].chosen_fit.has_value();
            for (std::size_t j = 0; identical && j < serial_result[i].chosen_fit->params.size(); ++j)
                identical = serial_result[i].chosen_fit->params[j] ==
                            parallel_result[i].chosen_fit->params[j];
        }
    }

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("classify_corpus  serial:   %8.3f s  (%.2f ms/day)\n", t_serial,
                1e3 * t_serial / days);
    std::printf("classify_corpus  OpenMP:   %8.3f s  (%.2f ms/day, %d thread%s)\n", t_parallel,
                1e3 * t_parallel / days, threads, threads == 1 ? "" : "s");
    std::printf("speedup: %.2fx   results bit-identical: %s\n", t_serial / t_parallel,
                identical ? "yes" : "NO");

    // kernel rates
    volatile double sink = 0.0;
    const double t_j0 = time_best_of(3, [&] {
        double acc = 0.0;
        for (int i = 0; i < 2000000; ++i) acc += bessel_j0(i * 1e-5 * 30.0);
        sink = acc;
    });
    std::printf("bessel_j0: %.1f Meval/s\n", 2.0 / t_j0);
    (void)sink;
    return identical ? 0 : 1;
}
