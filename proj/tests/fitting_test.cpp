#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "pvwave/fitting.hpp"
#include "pvwave/rng.hpp"
#include "pvwave/specfun.hpp"

using namespace pvwave;

namespace {

const Date kDay{2007, 4, 2};

DailyVolumeDistribution dist_from_values(const std::vector<std::int64_t>& prices_milli,
                                         const std::vector<double>& values) {
    DailyVolumeDistribution d;
    d.day = kDay;
    d.tick_milli = 10;
    d.total_volume = 1000000;
    for (std::size_t i = 0; i < prices_milli.size(); ++i)
        d.bins.push_back(Bin{prices_milli[i], 1, values[i]});
    return d;
}

DailyVolumeDistribution model_dist(ModelFamily family, std::span<const double> params,
                                   std::int64_t lo_milli, std::int64_t hi_milli,
                                   std::int64_t step = 10) {
    std::vector<std::int64_t> prices;
    std::vector<double> values;
    for (std::int64_t p = lo_milli; p <= hi_milli; p += step) {
        prices.push_back(p);
        values.push_back(eval_model(family, params, static_cast<double>(p) / 1000.0));
    }
    return dist_from_values(prices, values);
}

} // namespace

TEST_CASE("goodness anchors") {
    SUBCASE("perfect predictions") {
        const std::vector<double> y = {0.1, 0.3, 0.2, 0.4, 0.05, 0.15, 0.2};
        const Goodness g = goodness(y, y, 1, 0.05);
        CHECK(g.r2 == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(g.significant);
        CHECK(std::isinf(g.f_stat));
    }
    SUBCASE("mean-only predictions") {
        const std::vector<double> y = {0.1, 0.3, 0.2, 0.4, 0.05, 0.15, 0.2};
        double mean = 0.0;
        for (double v : y) mean += v;
        mean /= y.size();
        const std::vector<double> yhat(y.size(), mean);
        const Goodness g = goodness(y, yhat, 1, 0.05);
        CHECK(g.r2 == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(g.f_stat == doctest::Approx(0.0).epsilon(1e-12));
        CHECK_FALSE(g.significant);
    }
    SUBCASE("critical R2 at n=30, k=1") {
        std::vector<double> y(30), yhat(30);
        for (int i = 0; i < 30; ++i) {
            y[i] = i;
            yhat[i] = 0.0;
        }
        const Goodness g = goodness(y, yhat, 1, 0.05);
        CHECK(g.r2_crit == doctest::Approx(4.196 / (4.196 + 28.0)).epsilon(0.001 / 0.13));
        CHECK(std::fabs(g.r2_crit - 0.1303) < 0.001);
    }
    SUBCASE("constant observations define R2 = 0") {
        const std::vector<double> y(10, 0.1);
        std::vector<double> yhat(10, 0.1);
        yhat[3] = 0.2;
        const Goodness g = goodness(y, yhat, 1, 0.05);
        CHECK(g.r2 == 0.0);
        CHECK_FALSE(g.significant);
    }
    SUBCASE("too few observations for the residual df") {
        const std::vector<double> y = {0.1, 0.2, 0.3};
        CHECK_THROWS_AS(goodness(y, y, 2, 0.05), std::invalid_argument);
    }
}

TEST_CASE("decision equivalence: R2 threshold vs F threshold") {
    Rng rng(42);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = 1 + static_cast<int>(rng.next_below(6));
        const int n = k + 3 + static_cast<int>(rng.next_below(200));
        const double r2 = rng.next_double() * 0.999;
        const double f_crit = f_critical(0.05, k, n - k - 1);
        const double r2_crit = k * f_crit / (k * f_crit + (n - k - 1));
        const double f_stat = (r2 / (1.0 - r2)) * (n - k - 1) / k;
        CHECK((r2 > r2_crit) == (f_stat > f_crit));
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("goodness-level decision equivalence on constructed data") {
    Rng rng(43);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 1 + static_cast<int>(rng.next_below(4));
        const int n = k + 4 + static_cast<int>(rng.next_below(60));
        const double a = rng.next_double();  // R2 = 1 - a^2
        std::vector<double> y(n), yhat(n);
        double mean = 0.0;
        for (int i = 0; i < n; ++i) {
            y[i] = std::sin(0.7 * i) + 0.1 * i;
            mean += y[i];
        }
        mean /= n;
        for (int i = 0; i < n; ++i) yhat[i] = mean + (1.0 - a) * (y[i] - mean);
        const Goodness g = goodness(y, yhat, k, 0.05);
        const double f_crit = f_critical(0.05, k, n - k - 1);
        CHECK(g.significant == (g.f_stat > f_crit));
        CHECK(g.r2 == doctest::Approx(1.0 - a * a).epsilon(1e-9));
    }
}

TEST_CASE("lm_fit recovers noiseless single-Bessel parameters") {
    const double truth[3] = {0.2, 50.0, 10.0};
    const DailyVolumeDistribution d = model_dist(ModelFamily::bessel, truth, 9800, 10200);
    REQUIRE(d.bins.size() == 41);
    FitOptions opt;
    const std::vector<double> init = {0.2 * 1.1, 50.0 * 0.9, 10.0 + 0.004};
    const FitResult fit = lm_fit(ModelFamily::bessel, d, init, opt);
    CHECK(fit.converged);
    CHECK_FALSE(fit.failed);
    CHECK(std::fabs(fit.params[0] - 0.2) / 0.2 < 1e-6);
    CHECK(std::fabs(fit.params[1] - 50.0) / 50.0 < 1e-6);
    CHECK(std::fabs(fit.params[2] - 10.0) / 10.0 < 1e-6);
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.significant);
}

TEST_CASE("lm_fit on constant data: degenerate TSS handling") {
    std::vector<std::int64_t> prices;
    std::vector<double> values;
    for (int i = 0; i < 21; ++i) {
        prices.push_back(9900 + 10 * i);
        values.push_back(1.0 / 21.0);
    }
    const DailyVolumeDistribution d = dist_from_values(prices, values);
    FitOptions opt;
    const FitResult fit = lm_fit(ModelFamily::bessel, d, pack_params(init_bessel(d)), opt);
    CHECK(fit.r2 == 0.0);
    CHECK_FALSE(fit.significant);
}

TEST_CASE("lm_fit precondition: bin floor") {
    const double truth[3] = {0.2, 50.0, 10.0};
    const DailyVolumeDistribution d = model_dist(ModelFamily::bessel, truth, 9990, 10010);
    REQUIRE(d.bins.size() == 3);
    FitOptions opt;
    const std::vector<double> init = {0.2, 50.0, 10.0};
    CHECK_THROWS_AS(lm_fit(ModelFamily::bessel, d, init, opt), std::invalid_argument);
}

TEST_CASE("accepted LM steps never increase the objective") {
    Rng rng(77);
    FitOptions opt;
    for (int trial = 0; trial < 20; ++trial) {
        const double truth[3] = {0.1 + 0.3 * rng.next_double(), 30.0 + 50.0 * rng.next_double(),
                                 9.9 + 0.2 * rng.next_double()};
        DailyVolumeDistribution d = model_dist(ModelFamily::bessel, truth, 9800, 10200);
        // salt with deterministic noise so the path is non-trivial
        for (auto& b : d.bins)
            b.probability = std::max(1e-6, b.probability + 0.01 * (rng.next_double() - 0.5));
        const std::vector<double> init = {truth[0] * 1.3, truth[1] * 0.7, truth[2] - 0.01};
        const FitResult fit = lm_fit(ModelFamily::bessel, d, init, opt);
        for (std::size_t i = 1; i < fit.rss_trace.size(); ++i)
            CHECK(fit.rss_trace[i] <= fit.rss_trace[i - 1]);
    }
}

TEST_CASE("noiseless recovery across families, 100 seeded trials each") {
    FitOptions opt;
    SUBCASE("bessel") {
        int good = 0;
        for (int trial = 0; trial < 100; ++trial) {
            Rng rng(1000 + trial);
            const double truth[3] = {0.1 + 0.3 * rng.next_double(), 35.0 + 30.0 * rng.next_double(),
                                     9.95 + 0.1 * rng.next_double()};
            const DailyVolumeDistribution d = model_dist(ModelFamily::bessel, truth, 9800, 10200);
            std::vector<double> init = {truth[0] * (1.0 + 0.08 * (rng.next_double() - 0.5)),
                                        truth[1] * (1.0 + 0.08 * (rng.next_double() - 0.5)),
                                        truth[2] + 0.005 * (rng.next_double() - 0.5)};
            const FitResult fit = lm_fit(ModelFamily::bessel, d, init, opt);
            bool ok = !fit.failed;
            for (int j = 0; j < 3 && ok; ++j)
                ok = std::fabs(fit.params[j] - truth[j]) / std::fabs(truth[j]) < 1e-6;
            if (ok) ++good;
        }
        CHECK(good >= 99);
    }
    SUBCASE("kummer") {
        int good = 0;
        for (int trial = 0; trial < 100; ++trial) {
            Rng rng(2000 + trial);
            const double truth[3] = {0.1 + 0.3 * rng.next_double(), 15.0 + 25.0 * rng.next_double(),
                                     9.95 + 0.1 * rng.next_double()};
            const DailyVolumeDistribution d = model_dist(ModelFamily::kummer, truth, 9800, 10200);
            std::vector<double> init = {truth[0] * (1.0 + 0.08 * (rng.next_double() - 0.5)),
                                        truth[1] * (1.0 + 0.08 * (rng.next_double() - 0.5)),
                                        truth[2] + 0.005 * (rng.next_double() - 0.5)};
            const FitResult fit = lm_fit(ModelFamily::kummer, d, init, opt);
            bool ok = !fit.failed;
            for (int j = 0; j < 3 && ok; ++j)
                ok = std::fabs(fit.params[j] - truth[j]) / std::fabs(truth[j]) < 1e-6;
            if (ok) ++good;
        }
        CHECK(good >= 99);
    }
    SUBCASE("two_bessel") {
        int good = 0;
        for (int trial = 0; trial < 100; ++trial) {
            Rng rng(3000 + trial);
            const double truth[6] = {0.15 + 0.1 * rng.next_double(), 60.0 + 30.0 * rng.next_double(),
                                     9.88 + 0.02 * rng.next_double(), 0.15 + 0.1 * rng.next_double(),
                                     60.0 + 30.0 * rng.next_double(), 10.10 + 0.02 * rng.next_double()};
            const DailyVolumeDistribution d = model_dist(ModelFamily::two_bessel, truth, 9700, 10300);
            // adjacency scales: C and omega relative, p0 within a fraction of
            // the central lobe (a relative p0 shift would cross lobes)
            std::vector<double> init(6);
            for (int j : {0, 1, 3, 4}) init[j] = truth[j] * (1.0 + 0.02 * (rng.next_double() - 0.5));
            for (int j : {2, 5}) init[j] = truth[j] + 0.004 * (rng.next_double() - 0.5);
            const FitResult fit = lm_fit(ModelFamily::two_bessel, d, init, opt);
            bool ok = !fit.failed;
            for (int j = 0; j < 6 && ok; ++j)
                ok = std::fabs(fit.params[j] - truth[j]) / std::fabs(truth[j]) < 1e-6;
            if (ok) ++good;
        }
        CHECK(good >= 99);
    }
}

TEST_CASE("fit is order-invariant over the bin set") {
    const double truth[3] = {0.2, 50.0, 10.0};
    DailyVolumeDistribution d = model_dist(ModelFamily::bessel, truth, 9800, 10200);
    for (auto& b : d.bins) b.probability += 0.001 * std::sin(0.3 * b.price_milli);
    DailyVolumeDistribution shuffled = d;
    Rng rng(4);
    for (std::size_t i = shuffled.bins.size(); i > 1; --i)
        std::swap(shuffled.bins[i - 1], shuffled.bins[rng.next_below(i)]);
    FitOptions opt;
    const std::vector<double> init = {0.21, 47.0, 10.002};
    const FitResult a = lm_fit(ModelFamily::bessel, d, init, opt);
    const FitResult b = lm_fit(ModelFamily::bessel, shuffled, init, opt);
    REQUIRE(a.params.size() == b.params.size());
    for (std::size_t j = 0; j < a.params.size(); ++j) CHECK(a.params[j] == b.params[j]);
    CHECK(a.rss == b.rss);
    CHECK(a.r2 == b.r2);
}

TEST_CASE("scaling probabilities scales C and leaves omega, p0 fixed") {
    const double truth[3] = {0.2, 50.0, 10.0};
    DailyVolumeDistribution d = model_dist(ModelFamily::bessel, truth, 9800, 10200);
    Rng rng(5);
    for (auto& b : d.bins) b.probability = std::max(1e-9, b.probability + 0.005 * (rng.next_double() - 0.5));
    DailyVolumeDistribution scaled = d;
    for (auto& b : scaled.bins) b.probability *= 2.0;  // power of two: exact scaling

    FitOptions opt;
    const std::vector<double> init = {0.22, 46.0, 10.003};
    const std::vector<double> init2 = {0.44, 46.0, 10.003};
    const FitResult a = lm_fit(ModelFamily::bessel, d, init, opt);
    const FitResult b = lm_fit(ModelFamily::bessel, scaled, init2, opt);
    CHECK(b.params[0] == doctest::Approx(2.0 * a.params[0]).epsilon(1e-9));
    CHECK(b.params[1] == doctest::Approx(a.params[1]).epsilon(1e-9));
    CHECK(b.params[2] == doctest::Approx(a.params[2]).epsilon(1e-9));
}

TEST_CASE("init_bessel follows the stated rule") {
    SUBCASE("peak, width, and center") {
        // peak 0.2 at 10.00; probability falls below 0.05*C first at distance 0.05
        std::vector<std::int64_t> prices;
        std::vector<double> values;
        for (int i = -10; i <= 10; ++i) {
            const double d = std::fabs(i) * 0.01;
            double v;
            if (d < 0.05)
                v = 0.2 * (1.0 - d * d * 150.0);  // stays above 0.01
            else
                v = 0.005;                        // below 0.05 * C
            prices.push_back(10000 + i * 10);
            values.push_back(v);
        }
        const DailyVolumeDistribution dist = dist_from_values(prices, values);
        const BesselParams p = init_bessel(dist);
        CHECK(p.p0 == doctest::Approx(10.0).epsilon(1e-12));
        CHECK(p.C == doctest::Approx(0.2).epsilon(1e-12));
        CHECK(p.omega == doctest::Approx(2.4048255577 / 0.05).epsilon(0.01));
    }
    SUBCASE("tie resolves to the volume-weighted mean of tied bins") {
        std::vector<std::int64_t> prices = {9980, 9990, 10000, 10010, 10020};
        std::vector<double> values = {0.1, 0.3, 0.2, 0.3, 0.1};
        DailyVolumeDistribution dist = dist_from_values(prices, values);
        dist.bins[1].volume = 300;
        dist.bins[3].volume = 300;
        const BesselParams p = init_bessel(dist);
        CHECK(p.p0 == doctest::Approx(10.0).epsilon(1e-12));
    }
    SUBCASE("monotone-decreasing gentle slope hits the clamp") {
        std::vector<std::int64_t> prices;
        std::vector<double> values;
        for (int i = 0; i < 30; ++i) {
            prices.push_back(5000 + i * 1000);  // spread over 29 currency units
            values.push_back(0.2 - 0.002 * i);  // never falls below 0.05 * C
        }
        const DailyVolumeDistribution dist = dist_from_values(prices, values);
        const BesselParams p = init_bessel(dist);
        CHECK(p.p0 == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(p.omega == 1.0);  // 2.4048 / 29 clamped up to the lower bound
    }
}

TEST_CASE("init_two_bessel seeding") {
    FitOptions opt;
    SUBCASE("clean two peaks seed near both") {
        const double truth[6] = {0.2, 60.0, 9.90, 0.2, 60.0, 10.10};
        const DailyVolumeDistribution d = model_dist(ModelFamily::two_bessel, truth, 9750, 10250);
        const TwoBesselParams p = init_two_bessel(d, opt);
        CHECK(std::fabs(p.a.p0 - 9.90) <= 0.0101);
        CHECK(std::fabs(p.b.p0 - 10.10) <= 0.0101);
        CHECK(p.a.p0 < p.b.p0);
    }
    SUBCASE("single-peak data takes the residual fallback") {
        const double truth[3] = {0.2, 50.0, 10.0};
        const DailyVolumeDistribution d = model_dist(ModelFamily::bessel, truth, 9800, 10200);
        const TwoBesselParams p = init_two_bessel(d, opt);
        CHECK(std::isfinite(p.a.p0));
        CHECK(std::isfinite(p.b.p0));
        CHECK(p.a.p0 >= 9.8);
        CHECK(p.b.p0 <= 10.2);
        CHECK(p.a.p0 < p.b.p0);
    }
    SUBCASE("peaks closer than 3 bins count as one") {
        std::vector<std::int64_t> prices;
        std::vector<double> values;
        for (int i = 0; i < 11; ++i) {
            prices.push_back(9950 + i * 10);
            values.push_back(0.02);
        }
        values[4] = 0.3;
        values[6] = 0.28;  // separation 2 bins: below the floor
        const DailyVolumeDistribution d = dist_from_values(prices, values);
        const TwoBesselParams p = init_two_bessel(d, opt);
        CHECK(std::isfinite(p.a.p0));
        CHECK(std::isfinite(p.b.p0));
        CHECK(p.a.p0 < p.b.p0);
    }
}

TEST_CASE("init_kummer follows the stated rule") {
    SUBCASE("exponential shape recovers the decay scale") {
        std::vector<std::int64_t> prices;
        std::vector<double> values;
        double total = 0.0;
        for (int i = -40; i <= 40; ++i) {
            const double x = i * 0.01;
            prices.push_back(10000 + i * 10);
            const double v = std::exp(-20.0 * std::fabs(x));
            values.push_back(v);
            total += v;
        }
        for (auto& v : values) v /= total;
        const DailyVolumeDistribution d = dist_from_values(prices, values);
        const KummerParams p = init_kummer(d);
        CHECK(p.n == 1);
        CHECK(p.p0 == doctest::Approx(10.0).epsilon(1e-9));
        CHECK(p.sqrtA > 10.0);
        CHECK(p.sqrtA < 40.0);
    }
    SUBCASE("single dominant bin clamps sqrtA high") {
        std::vector<std::int64_t> prices = {9980, 9990, 10000, 10010, 10020};
        std::vector<double> values = {1e-15, 1e-15, 1.0, 1e-15, 1e-15};
        const DailyVolumeDistribution d = dist_from_values(prices, values);
        const KummerParams p = init_kummer(d);
        CHECK(p.sqrtA == doctest::Approx(1e4).epsilon(1e-6));
    }
    SUBCASE("flat distribution centers p0 and rests at the low clamp") {
        std::vector<std::int64_t> prices;
        std::vector<double> values;
        for (int i = -20; i <= 20; ++i) {
            prices.push_back(10000 + i * 100);  // spread +-2.0
            values.push_back(1.0 / 41.0);
        }
        const DailyVolumeDistribution d = dist_from_values(prices, values);
        const KummerParams p = init_kummer(d);
        CHECK(p.p0 == doctest::Approx(10.0).epsilon(1e-9));
        CHECK(p.sqrtA == doctest::Approx(1.0).epsilon(0.02));  // MAD of the uniform ~ 1.0
    }
}
