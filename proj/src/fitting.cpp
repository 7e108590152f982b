#include "pvwave/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pvwave/specfun.hpp"

namespace pvwave {

namespace {

constexpr double kFirstJ0Zero = 2.4048255576957727686;

// Projection bounds: scale parameters stay strictly positive, p0 positive.
void clamp_params(ModelFamily family, std::vector<double>& theta) {
    auto clamp_pos = [](double& v, double lo, double hi) { v = std::clamp(v, lo, hi); };
    switch (family) {
        case ModelFamily::bessel:
        case ModelFamily::kummer:
            clamp_pos(theta[0], 1e-12, 1e6);
            clamp_pos(theta[1], 1e-12, 1e9);
            clamp_pos(theta[2], 1e-9, 1e12);
            break;
        case ModelFamily::two_bessel:
            clamp_pos(theta[0], 1e-12, 1e6);
            clamp_pos(theta[1], 1e-12, 1e9);
            clamp_pos(theta[2], 1e-9, 1e12);
            clamp_pos(theta[3], 1e-12, 1e6);
            clamp_pos(theta[4], 1e-12, 1e9);
            clamp_pos(theta[5], 1e-9, 1e12);
            break;
    }
}

// Solve (A + lambda*diag(A)) x = g for small symmetric systems by Gaussian
// elimination with partial pivoting. Returns false when singular.
bool solve_damped(int m, const double A[6][6], const double g[6], double lambda, double x[6]) {
    double M[6][7];
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) M[i][j] = A[i][j];
        M[i][i] = A[i][i] * (1.0 + lambda);
        if (M[i][i] == 0.0) M[i][i] = lambda * 1e-30;  // keep all-zero columns solvable
        M[i][m] = g[i];
    }
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        if (std::fabs(M[piv][col]) < 1e-300) return false;
        if (piv != col)
            for (int c = col; c <= m; ++c) std::swap(M[piv][c], M[col][c]);
        for (int r = col + 1; r < m; ++r) {
            const double f = M[r][col] / M[col][col];
            for (int c = col; c <= m; ++c) M[r][c] -= f * M[col][c];
        }
    }
    for (int row = m - 1; row >= 0; --row) {
        double s = M[row][m];
        for (int c = row + 1; c < m; ++c) s -= M[row][c] * x[c];
        x[row] = s / M[row][row];
        if (!std::isfinite(x[row])) return false;
    }
    return true;
}

double rss_of(ModelFamily family, std::span<const double> theta, std::span<const double> prices,
              std::span<const double> probs) {
    double rss = 0.0;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        const double r = probs[i] - eval_model(family, theta, prices[i]);
        rss += r * r;
    }
    return rss;
}

} // namespace

int df_k(ModelFamily family, DfConvention convention) {
    if (convention == DfConvention::paper) return family == ModelFamily::two_bessel ? 2 : 1;
    return param_count(family) - 1;
}

Goodness goodness(std::span<const double> y, std::span<const double> yhat, int k, double alpha) {
    const int n = static_cast<int>(y.size());
    if (yhat.size() != y.size()) throw std::invalid_argument("goodness: size mismatch");
    if (n <= k + 1) throw std::invalid_argument("goodness: need n > k + 1");
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double tss = 0.0, rss = 0.0;
    for (int i = 0; i < n; ++i) {
        tss += (y[i] - mean) * (y[i] - mean);
        rss += (y[i] - yhat[i]) * (y[i] - yhat[i]);
    }
    Goodness g;
    const double f_crit = f_critical(alpha, k, n - k - 1);
    g.r2_crit = k * f_crit / (k * f_crit + (n - k - 1));
    if (tss <= 1e-24) {  // constant observations carry no fittable structure
        g.r2 = 0.0;
        g.f_stat = 0.0;
        g.significant = false;
        return g;
    }
    const double ess = tss - rss;
    g.r2 = ess / tss;
    g.f_stat = rss > 0.0 ? (ess / k) / (rss / (n - k - 1))
                         : std::numeric_limits<double>::infinity();
    g.significant = g.r2 > g.r2_crit;
    return g;
}

FitResult lm_fit(ModelFamily family, const DailyVolumeDistribution& dist,
                 std::span<const double> init, const FitOptions& options) {
    const int m = param_count(family);
    const int n = static_cast<int>(dist.bins.size());
    if (static_cast<int>(init.size()) != m) throw std::invalid_argument("lm_fit: bad init size");
    if (n < m + 2)
        throw std::invalid_argument("lm_fit: need at least " + std::to_string(m + 2) + " bins, got " +
                                    std::to_string(n));

    // order-invariant over the bin set
    std::vector<const Bin*> sorted(n);
    for (int i = 0; i < n; ++i) sorted[i] = &dist.bins[i];
    std::sort(sorted.begin(), sorted.end(),
              [](const Bin* a, const Bin* b) { return a->price_milli < b->price_milli; });
    std::vector<double> prices(n), probs(n);
    for (int i = 0; i < n; ++i) {
        prices[i] = sorted[i]->price();
        probs[i] = sorted[i]->probability;
    }

    FitResult result;
    result.family = family;
    result.n_bins = n;
    result.k = df_k(family, options.df_convention);
    std::vector<double> theta(init.begin(), init.end());
    clamp_params(family, theta);

    double rss = rss_of(family, theta, prices, probs);
    result.rss_trace.push_back(rss);
    double lambda = options.lambda0;
    std::vector<double> jac(static_cast<std::size_t>(n) * m);
    std::vector<double> trial(m);

    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        for (int i = 0; i < n; ++i)
            numeric_jacobian(family, theta, prices[i], {jac.data() + static_cast<std::size_t>(i) * m, jac.data() + static_cast<std::size_t>(i + 1) * m});

        double A[6][6] = {};
        double g[6] = {};
        for (int i = 0; i < n; ++i) {
            const double* Ji = jac.data() + static_cast<std::size_t>(i) * m;
            const double r = probs[i] - eval_model(family, theta, prices[i]);
            for (int a = 0; a < m; ++a) {
                g[a] += Ji[a] * r;
                for (int b = a; b < m; ++b) A[a][b] += Ji[a] * Ji[b];
            }
        }
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < a; ++b) A[a][b] = A[b][a];

        double gmax = 0.0;
        for (int a = 0; a < m; ++a) gmax = std::max(gmax, std::fabs(g[a]));
        if (gmax < options.grad_tol) {
            result.converged = true;
            break;
        }

        // Try steps with growing damping until one decreases the objective.
        bool accepted = false;
        while (true) {
            double delta[6];
            const bool solvable = solve_damped(m, A, g, lambda, delta);
            if (solvable) {
                for (int a = 0; a < m; ++a) trial[a] = theta[a] + delta[a];
                clamp_params(family, trial);
                const double trial_rss = rss_of(family, trial, prices, probs);
                if (std::isfinite(trial_rss) && trial_rss < rss) {
                    const double rel_drop = (rss - trial_rss) / std::max(rss, 1e-300);
                    theta = trial;
                    rss = trial_rss;
                    result.rss_trace.push_back(rss);
                    lambda = std::max(lambda * options.lambda_down, 1e-12);
                    accepted = true;
                    if (rel_drop < options.rss_rel_tol) result.converged = true;
                    break;
                }
            }
            lambda *= options.lambda_up;
            if (lambda > options.lambda_max) {
                if (!solvable)
                    result.failed = true;  // normal equations singular even fully damped
                else
                    result.converged = true;  // no descent direction left: local minimum
                break;
            }
        }
        if (!accepted || result.converged) {
            if (!accepted && !result.failed) result.converged = true;
            ++iter;
            break;
        }
    }

    result.iterations = iter;
    result.params = theta;

    std::vector<double> yhat(n);
    for (int i = 0; i < n; ++i) yhat[i] = eval_model(family, theta, prices[i]);
    double mean = 0.0;
    for (double v : probs) mean += v;
    mean /= n;
    result.tss = 0.0;
    for (int i = 0; i < n; ++i) result.tss += (probs[i] - mean) * (probs[i] - mean);
    result.rss = rss;
    result.ess = result.tss - result.rss;
    const Goodness g = goodness(probs, yhat, result.k, options.alpha);
    result.r2 = g.r2;
    result.f_stat = g.f_stat;
    result.r2_crit = g.r2_crit;
    result.significant = !result.failed && g.significant;
    return result;
}

namespace {

// Modal bin price; exact probability ties resolve to the volume-weighted
// mean of the tied bins.
double modal_price(const DailyVolumeDistribution& dist, double* modal_prob) {
    double best = -1.0;
    for (const auto& b : dist.bins) best = std::max(best, b.probability);
    long double pv = 0.0L, w = 0.0L;
    for (const auto& b : dist.bins) {
        if (b.probability == best) {
            const long double weight = b.volume > 0 ? static_cast<long double>(b.volume) : 1.0L;
            pv += static_cast<long double>(b.price_milli) * weight;
            w += weight;
        }
    }
    if (modal_prob) *modal_prob = best;
    return static_cast<double>(pv / w / 1000.0L);
}

// First-lobe half-width: distance from p0 to the first bin (scanning outward)
// whose probability falls below the threshold. Sampling noise can hold the
// bin straddling the first node just above the cut, so an outward local
// minimum under 5x the threshold also qualifies as the node.
double half_width(const DailyVolumeDistribution& dist, double p0, double threshold) {
    const int n = static_cast<int>(dist.bins.size());
    double best = 0.0, max_dist = 0.0;
    bool found = false;
    for (int i = 0; i < n; ++i) {
        const Bin& b = dist.bins[i];
        const double d = std::fabs(b.price() - p0);
        max_dist = std::max(max_dist, d);
        if (d <= 0.0) continue;
        bool qualifies = b.probability < threshold;
        if (!qualifies && b.probability < 5.0 * threshold) {
            const double left = i > 0 ? dist.bins[i - 1].probability : b.probability + 1.0;
            const double right = i + 1 < n ? dist.bins[i + 1].probability : b.probability + 1.0;
            qualifies = b.probability < left && b.probability < right;
        }
        if (qualifies && (!found || d < best)) {
            best = d;
            found = true;
        }
    }
    return found ? best : max_dist;
}

BesselParams init_bessel_over(const DailyVolumeDistribution& dist) {
    BesselParams p;
    p.p0 = modal_price(dist, &p.C);
    const double hw = half_width(dist, p.p0, 0.05 * p.C);
    p.omega = hw > 0.0 ? std::clamp(kFirstJ0Zero / hw, 1.0, 1e4) : 1e4;
    return p;
}

DailyVolumeDistribution slice(const DailyVolumeDistribution& dist, std::size_t lo, std::size_t hi) {
    DailyVolumeDistribution s;
    s.day = dist.day;
    s.tick_milli = dist.tick_milli;
    s.session_seconds = dist.session_seconds;
    s.total_volume = dist.total_volume;  // keep probabilities on the day scale
    s.bins.assign(dist.bins.begin() + lo, dist.bins.begin() + hi);
    return s;
}

} // namespace

BesselParams init_bessel(const DailyVolumeDistribution& dist) {
    if (dist.bins.size() < 5) throw std::invalid_argument("init_bessel: need at least 5 bins");
    return init_bessel_over(dist);
}

int count_local_maxima(const DailyVolumeDistribution& dist) {
    const auto& bins = dist.bins;
    const int n = static_cast<int>(bins.size());
    int count = 0;
    for (int i = 0; i < n; ++i) {
        const double left = i > 0 ? bins[i - 1].probability : -1.0;
        const double right = i + 1 < n ? bins[i + 1].probability : -1.0;
        if (bins[i].probability > left && bins[i].probability > right) ++count;
    }
    return count;
}

TwoBesselParams init_two_bessel(const DailyVolumeDistribution& dist, const FitOptions& options) {
    if (dist.bins.size() < 8) throw std::invalid_argument("init_two_bessel: need at least 8 bins");
    const auto& bins = dist.bins;
    const int n = static_cast<int>(bins.size());

    std::vector<int> maxima;
    for (int i = 0; i < n; ++i) {
        const double left = i > 0 ? bins[i - 1].probability : -1.0;
        const double right = i + 1 < n ? bins[i + 1].probability : -1.0;
        if (bins[i].probability > left && bins[i].probability > right) maxima.push_back(i);
    }
    std::sort(maxima.begin(), maxima.end(),
              [&](int a, int b) { return bins[a].probability > bins[b].probability; });

    int first = -1, second = -1;
    for (std::size_t i = 0; i < maxima.size() && second < 0; ++i)
        for (std::size_t j = i + 1; j < maxima.size(); ++j)
            if (std::abs(maxima[i] - maxima[j]) >= 3) {
                first = maxima[i];
                second = maxima[j];
                break;
            }

    TwoBesselParams p;
    if (second >= 0) {
        const int lo = std::min(first, second), hi = std::max(first, second);
        const int mid = (lo + hi + 1) / 2;
        p.a = init_bessel_over(slice(dist, 0, mid));
        p.b = init_bessel_over(slice(dist, mid, n));
    } else {
        // single-peak data: pre-fit one component, seed the other at the
        // largest positive residual
        const BesselParams seed = init_bessel_over(dist);
        FitOptions pre = options;
        pre.max_iterations = std::min(options.max_iterations, 60);
        const FitResult fit = lm_fit(ModelFamily::bessel, dist, pack_params(seed), pre);
        const BesselParams comp1{fit.params[0], fit.params[1], fit.params[2]};
        int best = 0;
        double best_resid = -1.0;
        for (int i = 0; i < n; ++i) {
            const double resid = bins[i].probability - eval_bessel(comp1, bins[i].price());
            if (resid > best_resid) {
                best_resid = resid;
                best = i;
            }
        }
        p.a = comp1;
        p.b = BesselParams{std::max(best_resid, 1e-3 * comp1.C), comp1.omega, bins[best].price()};
    }
    if (p.a.p0 > p.b.p0) std::swap(p.a, p.b);
    return p;
}

KummerParams init_kummer(const DailyVolumeDistribution& dist) {
    if (dist.bins.size() < 5) throw std::invalid_argument("init_kummer: need at least 5 bins");
    KummerParams p;
    p.n = 1;
    p.p0 = modal_price(dist, &p.C);
    double mad = 0.0;
    for (const auto& b : dist.bins) mad += b.probability * std::fabs(b.price() - p.p0);
    p.sqrtA = mad > 0.0 ? std::clamp(1.0 / mad, 1.0, 1e4) : 1e4;
    return p;
}

std::vector<double> pack_params(const BesselParams& p) { return {p.C, p.omega, p.p0}; }

std::vector<double> pack_params(const TwoBesselParams& p) {
    return {p.a.C, p.a.omega, p.a.p0, p.b.C, p.b.omega, p.b.p0};
}

std::vector<double> pack_params(const KummerParams& p) { return {p.C, p.sqrtA, p.p0}; }

} // namespace pvwave
