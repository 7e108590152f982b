#include "pvwave/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "pvwave/specfun.hpp"

namespace pvwave {

namespace {

namespace fs = std::filesystem;

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path.string() + "'");
    return out;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

void write_classification_csv(std::ostream& out, std::span<const DayClassification> days) {
    out << "date,class,p0,p0_source,C,omega,sqrtA,R2,F,R2_crit,significant,model,n_bins,total_volume\n";
    for (const auto& d : days) {
        std::string c_field, omega_field, sqrta_field, r2_field, f_field, r2c_field;
        if (d.chosen_fit) {
            const FitResult& f = *d.chosen_fit;
            if (f.family == ModelFamily::bessel) {
                c_field = fmt("%.10g", f.params[0]);
                omega_field = fmt("%.10g", f.params[1]);
            } else if (f.family == ModelFamily::two_bessel) {
                c_field = fmt("%.10g", f.params[0]);
                omega_field = fmt("%.10g", f.params[1]);
            } else {
                c_field = fmt("%.10g", f.params[0]);
                sqrta_field = fmt("%.10g", f.params[1]);
            }
            r2_field = fmt("%.8g", f.r2);
            f_field = fmt("%.8g", f.f_stat);
            r2c_field = fmt("%.8g", f.r2_crit);
        }
        const bool has_price = !d.empty_day;
        out << format_date(d.day) << ',' << day_class_name(d.cls) << ','
            << (has_price ? fmt("%.6f", d.equilibrium_price) : std::string()) << ','
            << (has_price ? (d.source == EquilibriumSource::fitted ? "fitted" : "volume_weighted_mean")
                          : std::string())
            << ',' << c_field << ',' << omega_field << ',' << sqrta_field << ',' << r2_field << ','
            << f_field << ',' << r2c_field << ',' << (d.chosen_fit ? (d.chosen_fit->significant ? "true" : "false") : "false")
            << ',' << d.model_label << ',' << d.n_bins << ',' << d.total_volume << '\n';
    }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows, std::size_t total) {
    out << "class,count,percentage\n";
    for (const auto& r : rows)
        out << day_class_name(r.cls) << ',' << r.count << ',' << fmt("%.2f", r.percent) << '\n';
    out << "Total," << total << ",100.00\n";
}

void write_plotdata_csv(std::ostream& out, std::span<const DayTicks> days,
                        std::span<const DayClassification> classifications,
                        const PipelineConfig& config) {
    out << "date,price,observed,fitted\n";
    // classifications are date-sorted; match ticks by date
    for (const auto& cls : classifications) {
        if (cls.empty_day) continue;
        const DayTicks* ticks = nullptr;
        for (const auto& d : days)
            if (d.day == cls.day) {
                ticks = &d;
                break;
            }
        if (!ticks) continue;
        std::int64_t bin_width = config.coarse_milli;
        if (cls.chosen_fit && cls.model_label != fmt("bessel_%.3f", config.coarse_milli / 1000.0))
            bin_width = config.fine_milli;
        const DailyVolumeDistribution dist = bin_day(ticks->ticks, bin_width, config.session_seconds);
        for (const auto& b : dist.bins) {
            out << format_date(cls.day) << ',' << fmt("%.3f", b.price()) << ','
                << fmt("%.10g", b.probability);
            if (cls.chosen_fit)
                out << ',' << fmt("%.10g", eval_model(cls.chosen_fit->family, cls.chosen_fit->params, b.price()));
            else
                out << ',';
            out << '\n';
        }
    }
}

struct ClassificationRowLite {
    Date day;
    std::string cls;
    double p0 = 0.0;
    std::int64_t total_volume = 0;
};

std::vector<ClassificationRowLite> read_classification_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open classification CSV '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("classification CSV '" + path + "' is empty");
    std::vector<ClassificationRowLite> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field[14];
        for (int i = 0; i < 14; ++i)
            if (!std::getline(ss, field[i], ',') && i < 13)
                throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 14 fields");
        ClassificationRowLite row;
        row.day = parse_date(field[0]);
        row.cls = field[1];
        row.p0 = field[2].empty() ? 0.0 : std::stod(field[2]);
        row.total_volume = field[13].empty() ? 0 : std::stoll(field[13]);
        rows.push_back(row);
    }
    return rows;
}

} // namespace

int cmd_simulate(const RunConfig& config, std::ostream& err) {
    try {
        const CorpusSpec spec = make_corpus_spec(config);
        const Corpus corpus = synth_corpus(spec);
        fs::create_directories(config.out_dir);
        {
            auto out = open_out(fs::path(config.out_dir) / "ticks.csv");
            emit_ticks(out, corpus.days);
        }
        {
            auto out = open_out(fs::path(config.out_dir) / "truth.csv");
            emit_truth(out, corpus.truth);
        }
        return 0;
    } catch (const std::exception& e) {
        err << "simulate: " << e.what() << "\n";
        return 1;
    }
}

int cmd_classify(const RunConfig& config, std::ostream& out_stream, std::ostream& err) {
    try {
        if (config.input.empty()) throw std::runtime_error("no input path given");
        std::ifstream in(config.input, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open input '" + config.input + "'");
        ParseOptions popt;
        popt.fail_fast = config.fail_fast;
        popt.session_filter = config.session_filter;
        popt.session_open_s = parse_time_of_day(config.session_open);
        popt.session_seconds = config.session_hours * 3600.0;
        const ParseResult parsed = parse_ticks(in, popt);
        for (const auto& e : parsed.errors)
            err << "classify: skipped line " << e.line << ": " << e.message << "\n";
        if (parsed.days.empty()) throw std::runtime_error("input '" + config.input + "' holds no tick rows");

        const PipelineConfig pipeline = make_pipeline_config(config);
        const std::vector<DayClassification> days = classify_corpus(parsed.days, pipeline);
        fs::create_directories(config.out_dir);
        {
            auto out = open_out(fs::path(config.out_dir) / "classification.csv");
            write_classification_csv(out, days);
        }
        {
            auto out = open_out(fs::path(config.out_dir) / "summary.csv");
            write_summary_csv(out, summarize(days), days.size());
        }
        {
            auto out = open_out(fs::path(config.out_dir) / "plotdata.csv");
            write_plotdata_csv(out, parsed.days, days, pipeline);
        }
        for (const auto& r : summarize(days))
            out_stream << fmt("%-24s %4d  %6.2f%%\n", day_class_name(r.cls).c_str(), r.count,
                              r.percent);
        for (const auto& d : days)
            if (d.two_bessel_fit)
                out_stream << fmt("%s: two agreement prices %.4f / %.4f\n",
                                  format_date(d.day).c_str(), d.two_bessel_fit->a.p0,
                                  d.two_bessel_fit->b.p0);
        return 0;
    } catch (const std::exception& e) {
        err << "classify: " << e.what() << "\n";
        return 1;
    }
}

int cmd_correlate(const RunConfig& config, const std::string& classification_csv, std::ostream& err) {
    try {
        const auto rows = read_classification_csv(classification_csv);
        std::vector<EquilibriumPoint> series;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].cls == "Degenerate") continue;
            series.push_back(EquilibriumPoint{rows[i].day, rows[i].p0, rows[i].total_volume, i});
        }
        std::sort(series.begin(), series.end(),
                  [](const EquilibriumPoint& a, const EquilibriumPoint& b) { return a.day < b.day; });
        if (series.size() < 2) throw std::runtime_error("fewer than 2 usable days in '" + classification_csv + "'");
        const RegimeCorrelationReport report = regime_report(series, config.regimes, config.alpha);
        fs::create_directories(config.out_dir);
        auto out = open_out(fs::path(config.out_dir) / "regimes.csv");
        out << "label,start,end,n,r,t,t_crit,significant\n";
        for (const auto& row : report.rows) {
            out << row.label << ',' << format_date(row.start) << ',' << format_date(row.end) << ','
                << row.pair_count << ',';
            if (row.status == RegimeRowStatus::ok)
                out << fmt("%.6f", row.r) << ',' << fmt("%.6f", row.t) << ',' << fmt("%.6f", row.t_crit)
                    << ',' << (row.significant ? "true" : "false");
            else
                out << ",,," << (row.status == RegimeRowStatus::insufficient ? "insufficient"
                                                                             : "undefined");
            out << '\n';
        }
        return 0;
    } catch (const std::exception& e) {
        err << "correlate: " << e.what() << "\n";
        return 1;
    }
}

namespace {

// Table rows used by the verify self-test: r, n, published t and t_crit,
// and whether the published t_crit is a coarsened rounding.
struct PublishedRow {
    const char* label;
    double r;
    int n;
    double t;
    double t_crit;
    bool rounded;
};

constexpr PublishedRow kPublishedRows[] = {
    {"A", 0.1391, 494, 3.115, 1.960, true},
    {"B", -0.2567, 59, 2.006, 2.001, true},
    {"C", 0.0729, 83, 0.6583, 1.990, false},
    {"D", 0.1026, 122, 1.130, 1.980, false},
    {"E", 0.1963, 123, 2.202, 1.980, false},
    {"F", 0.4766, 107, 5.556, 1.983, false},
};

long double j0_series_ld(long double x) {
    const long double q = 0.25L * x * x;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k <= 160; ++k) {
        term *= -q / (static_cast<long double>(k) * k);
        sum += term;
        if (std::fabs(static_cast<double>(term)) < 1e-24) break;
    }
    return sum;
}

// L_n(x) via the explicit expansion sum_k C(n,k) (-x)^k / k!.
long double laguerre_explicit_ld(int n, long double x) {
    long double sum = 0.0L, coeff = 1.0L;  // C(n,0)/0! = 1
    long double pow = 1.0L;
    for (int k = 0; k <= n; ++k) {
        sum += coeff * pow;
        pow *= -x;
        coeff *= static_cast<long double>(n - k) / ((k + 1.0L) * (k + 1.0L));
    }
    return sum;
}

} // namespace

int cmd_verify(const RunConfig& config, std::ostream& out) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok, const std::string& detail) {
        out << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!detail.empty()) out << " (" << detail << ")";
        out << "\n";
        if (!ok) ++failures;
    };

    for (const auto& row : kPublishedRows) {
        const CorrTest test = corr_t_test(row.r, row.n, config.alpha);
        const double tol_crit = row.rounded ? config.verify_tcrit_tol_rounded : config.verify_tcrit_tol;
        check(fmt("row %s: t reconstruction", row.label),
              std::fabs(test.t - row.t) <= config.verify_t_tol,
              fmt("computed %.4f vs published %.4f, tol %.4g", test.t, row.t, config.verify_t_tol));
        check(fmt("row %s: critical value", row.label), std::fabs(test.t_crit - row.t_crit) <= tol_crit,
              fmt("computed %.4f vs published %.4f, tol %.4g", test.t_crit, row.t_crit, tol_crit));
        check(fmt("row %s: significance flag", row.label), test.significant == (row.t > row.t_crit),
              test.significant ? "significant" : "not significant");
    }

    {
        bool ok = true;
        double worst = 0.0;
        for (int i = 0; i <= 1200; ++i) {
            const double x = 12.0 * i / 1200.0;
            const double err = std::fabs(bessel_j0(x) - static_cast<double>(j0_series_ld(x)));
            worst = std::max(worst, err);
            if (err > 1e-10) ok = false;
        }
        check("bessel_j0 vs series oracle on [0,12]", ok, fmt("max abs err %.3g", worst));
    }
    {
        bool ok = true;
        double worst = 0.0;
        for (int n = 0; n <= 10; ++n) {
            for (int i = 0; i <= 40; ++i) {
                const double x = 20.0 * i / 40.0;
                const double value = laguerre(n, x);
                const double err = std::fabs(value - static_cast<double>(laguerre_explicit_ld(n, x))) /
                                   std::max(1.0, std::fabs(value));
                worst = std::max(worst, err);
                if (err > 1e-12) ok = false;
            }
        }
        check("laguerre vs explicit expansion, n <= 10", ok, fmt("max rel err %.3g", worst));
    }
    {
        bool ok = true;
        double worst = 0.0;
        for (int q = 1; q <= 99; ++q) {
            const double alpha = q / 100.0;
            const double t = student_t_critical(alpha, 37);
            const double tail = 2.0 * (1.0 - student_t_cdf(t, 37));
            worst = std::max(worst, std::fabs(tail - alpha));
            const double f = f_critical(alpha, 3, 24);
            const double fq = 1.0 - f_cdf(f, 3, 24);
            worst = std::max(worst, std::fabs(fq - alpha));
            if (worst > 1e-8) ok = false;
        }
        check("t/F quantile round trips", ok, fmt("max |cdf(quantile)-q| %.3g", worst));
    }
    out << (failures == 0 ? "verify: all checks passed\n"
                          : fmt("verify: %d check(s) failed\n", failures));
    return failures == 0 ? 0 : 1;
}

} // namespace pvwave
