#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "pvwave/analysis.hpp"
#include "pvwave/synth.hpp"
#include "pvwave/ticks.hpp"

using namespace pvwave;

namespace {

SynthDaySpec bessel_spec() {
    SynthDaySpec s;
    s.family = SynthFamily::bessel;
    s.true_params = {0.2, 50.0, 10.0};
    s.n_ticks = 100000;
    s.grid_min_milli = 9800;
    s.grid_max_milli = 10200;
    s.seed = 7;
    return s;
}

} // namespace

TEST_CASE("synth_day bessel mode sits at the center") {
    const auto ticks = synth_day(bessel_spec());
    REQUIRE(ticks.size() == 100000);
    const DailyVolumeDistribution d = bin_day(ticks, 10);
    std::int64_t best_vol = -1, best_price = 0;
    for (const auto& b : d.bins)
        if (b.volume > best_vol) {
            best_vol = b.volume;
            best_price = b.price_milli;
        }
    CHECK(best_price == 10000);
}

TEST_CASE("synth_day uniform multinomial concentration") {
    SynthDaySpec s;
    s.family = SynthFamily::uniform;
    s.n_ticks = 21000;
    s.grid_min_milli = 9900;
    s.grid_max_milli = 10100;
    s.seed = 11;
    const auto ticks = synth_day(s);
    std::map<std::int64_t, int> counts;
    for (const auto& t : ticks) ++counts[t.price_milli];
    CHECK(counts.size() == 21);
    const double sigma = std::sqrt(21000.0 * (1.0 / 21.0) * (20.0 / 21.0));
    for (const auto& [price, count] : counts) CHECK(std::fabs(count - 1000.0) <= 4.0 * sigma);
}

TEST_CASE("synth_day determinism") {
    const auto a = synth_day(bessel_spec());
    const auto b = synth_day(bessel_spec());
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].price_milli == b[i].price_milli);
        CHECK(a[i].time_s == b[i].time_s);
        CHECK(a[i].volume == b[i].volume);
    }
    SynthDaySpec other = bessel_spec();
    other.seed = 8;
    const auto c = synth_day(other);
    bool same = true;
    for (std::size_t i = 0; i < a.size() && same; ++i) same = a[i].price_milli == c[i].price_milli;
    CHECK_FALSE(same);
}

TEST_CASE("synth_day converges to the target distribution") {
    SynthDaySpec s = bessel_spec();
    s.n_ticks = 1000000;
    s.seed = 3;
    const auto ticks = synth_day(s);
    const DailyVolumeDistribution d = bin_day(ticks, 10);

    // target probabilities from the same model the generator sampled
    std::map<std::int64_t, double> target;
    double total = 0.0;
    for (std::int64_t p = 9800; p <= 10200; p += 10) {
        const double w = eval_bessel(BesselParams{0.2, 50.0, 10.0}, p / 1000.0);
        target[p] = w;
        total += w;
    }
    double l1 = 0.0;
    for (auto& [price, w] : target) {
        double observed = 0.0;
        for (const auto& b : d.bins)
            if (b.price_milli == price) observed = b.probability;
        l1 += std::fabs(observed - w / total);
    }
    CHECK(l1 < 0.01);
}

TEST_CASE("synth_day rejects an all-zero model") {
    SynthDaySpec s;
    s.family = SynthFamily::kummer1;
    s.true_params = {0.3, 5000.0, 20.0};  // decay centered far outside the grid
    s.grid_min_milli = 9900;
    s.grid_max_milli = 10100;
    s.n_ticks = 10;
    CHECK_THROWS_AS(synth_day(s), std::domain_error);
}

TEST_CASE("synth_corpus mixture bookkeeping") {
    CorpusSpec spec;
    spec.day_count = 10;
    spec.mixture[0] = 1.0;
    spec.mixture[1] = spec.mixture[2] = spec.mixture[3] = 0.0;
    spec.n_ticks = 200;
    spec.seed = 5;
    const Corpus c = synth_corpus(spec);
    REQUIRE(c.truth.size() == 10);
    REQUIRE(c.days.size() == 10);
    for (const auto& row : c.truth) CHECK(row.family == SynthFamily::bessel);
    for (std::size_t i = 1; i < c.truth.size(); ++i) CHECK(c.truth[i - 1].day < c.truth[i].day);
}

TEST_CASE("synth_corpus plants the sample correlation exactly") {
    SUBCASE("null correlation") {
        CorpusSpec spec;
        spec.day_count = 300;
        spec.rho = 0.0;
        spec.n_ticks = 120;
        spec.seed = 9;
        const Corpus c = synth_corpus(spec);
        std::vector<double> ret, dvol;
        for (std::size_t i = 1; i < c.truth.size(); ++i) {
            ret.push_back(mean_return(c.truth[i - 1].p0, c.truth[i].p0));
            dvol.push_back(volume_change(static_cast<double>(c.truth[i - 1].total_volume),
                                         static_cast<double>(c.truth[i].total_volume)));
        }
        const double r = pearson(ret, dvol);
        CHECK(std::fabs(r) < 0.01);   // integer volume rounding is the only slack
        CHECK(std::fabs(r) < 0.05);   // null-oracle envelope
    }
    SUBCASE("planted rho = 0.5 lands inside the Fisher-z envelope every run") {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            CorpusSpec spec;
            spec.day_count = 200;
            spec.rho = 0.5;
            spec.n_ticks = 120;
            spec.seed = seed;
            const Corpus c = synth_corpus(spec);
            std::vector<double> ret, dvol;
            for (std::size_t i = 1; i < c.truth.size(); ++i) {
                ret.push_back(mean_return(c.truth[i - 1].p0, c.truth[i].p0));
                dvol.push_back(volume_change(static_cast<double>(c.truth[i - 1].total_volume),
                                             static_cast<double>(c.truth[i].total_volume)));
            }
            const double r = pearson(ret, dvol);
            CHECK(std::fabs(r - 0.5) < 0.02);
            CHECK(r > 0.38);
            CHECK(r < 0.62);
        }
    }
    SUBCASE("infeasible rho is rejected") {
        CorpusSpec spec;
        spec.rho = 1.5;
        CHECK_THROWS_AS(synth_corpus(spec), std::domain_error);
    }
}

TEST_CASE("synth_corpus determinism end to end") {
    CorpusSpec spec;
    spec.day_count = 6;
    spec.n_ticks = 500;
    spec.seed = 21;
    const Corpus a = synth_corpus(spec);
    const Corpus b = synth_corpus(spec);
    std::ostringstream ta, tb, ya, yb;
    emit_ticks(ta, a.days);
    emit_ticks(tb, b.days);
    emit_truth(ya, a.truth);
    emit_truth(yb, b.truth);
    CHECK(ta.str() == tb.str());
    CHECK(ya.str() == yb.str());
}

TEST_CASE("truth rows carry valid JSON-shaped parameters") {
    CorpusSpec spec;
    spec.day_count = 8;
    spec.n_ticks = 300;
    spec.seed = 2;
    const Corpus c = synth_corpus(spec);
    for (const auto& row : c.truth) {
        CHECK(row.params_json.front() == '{');
        CHECK(row.params_json.back() == '}');
        CHECK(row.total_volume > 0);
        CHECK(row.p0 > 0.0);
    }
}

TEST_CASE("truth CSV quotes the JSON field correctly") {
    CorpusSpec spec;
    spec.day_count = 4;
    spec.n_ticks = 200;
    spec.seed = 3;
    const Corpus c = synth_corpus(spec);
    std::ostringstream out;
    emit_truth(out, c.truth);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "date,family,p0,params_json,total_volume");
    while (std::getline(in, line)) {
        // CSV with one quoted field: every interior quote must be doubled
        const auto open = line.find('"');
        const auto close = line.rfind('"');
        REQUIRE(open != std::string::npos);
        REQUIRE(close > open);
        for (std::size_t i = open + 1; i < close; ++i) {
            if (line[i] == '"') {
                REQUIRE(i + 1 <= close);
                CHECK(line[i + 1] == '"');
                ++i;
            }
        }
        // unquoting yields the original json object text
        std::string unquoted;
        for (std::size_t i = open + 1; i < close; ++i) {
            unquoted += line[i];
            if (line[i] == '"') ++i;
        }
        CHECK(unquoted.front() == '{');
        CHECK(unquoted.back() == '}');
    }
}
