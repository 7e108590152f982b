#include "pvwave/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pvwave {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': '" + v + "'");
    }
}

std::int64_t to_int(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return i;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer value for '" + key + "': '" + v + "'");
    }
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("config: bad boolean value for '" + key + "': '" + v + "'");
}

} // namespace

void apply_config_entry(const std::string& key, const std::string& value, RunConfig& c) {
    if (key == "input") c.input = value;
    else if (key == "out") c.out_dir = value;
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(value, key));
    else if (key == "tick_size") c.coarse_tick = to_double(value, key);
    else if (key == "fine_tick_size") c.fine_tick = to_double(value, key);
    else if (key == "alpha") c.alpha = to_double(value, key);
    else if (key == "df_convention") {
        if (value != "paper" && value != "conventional")
            throw std::invalid_argument("config: df_convention must be 'paper' or 'conventional'");
        c.df_convention = value;
    } else if (key == "degenerate_floor") c.degenerate_floor = static_cast<int>(to_int(value, key));
    else if (key == "superposition_floor") c.superposition_floor = static_cast<int>(to_int(value, key));
    else if (key == "session_hours") c.session_hours = to_double(value, key);
    else if (key == "session_open") c.session_open = value;
    else if (key == "session_filter") c.session_filter = to_bool(value, key);
    else if (key == "fail_fast") c.fail_fast = to_bool(value, key);
    else if (key == "parallel") c.parallel = to_bool(value, key);
    else if (key == "lm_max_iterations") c.lm_max_iterations = static_cast<int>(to_int(value, key));
    else if (key == "lm_lambda0") c.lm_lambda0 = to_double(value, key);
    else if (key == "lm_lambda_up") c.lm_lambda_up = to_double(value, key);
    else if (key == "lm_lambda_down") c.lm_lambda_down = to_double(value, key);
    else if (key == "regime") {
        std::stringstream ss(value);
        std::string label, start, end;
        if (!std::getline(ss, label, ',') || !std::getline(ss, start, ',') || !std::getline(ss, end))
            throw std::invalid_argument("config: regime needs 'LABEL,START,END': '" + value + "'");
        c.regimes.push_back(RegimeSpec{trim(label), parse_date(trim(start)), parse_date(trim(end))});
    } else if (key == "sim_days") c.sim_days = static_cast<int>(to_int(value, key));
    else if (key == "sim_mixture") {
        std::stringstream ss(value);
        std::string part;
        double parts[4];
        for (int i = 0; i < 4; ++i) {
            if (!std::getline(ss, part, ',')) throw std::invalid_argument("config: sim_mixture needs 4 proportions");
            parts[i] = to_double(trim(part), key);
        }
        if (std::getline(ss, part)) throw std::invalid_argument("config: sim_mixture needs exactly 4 proportions");
        for (int i = 0; i < 4; ++i) c.sim_mixture[i] = parts[i];
    } else if (key == "sim_rho") c.sim_rho = to_double(value, key);
    else if (key == "sim_ticks_per_day") c.sim_ticks_per_day = static_cast<int>(to_int(value, key));
    else if (key == "sim_base_price") c.sim_base_price = to_double(value, key);
    else if (key == "sim_base_volume") c.sim_base_volume = to_int(value, key);
    else if (key == "sim_return_sigma") c.sim_return_sigma = to_double(value, key);
    else if (key == "sim_volume_sigma") c.sim_volume_sigma = to_double(value, key);
    else if (key == "sim_start_date") {
        parse_date(value);  // validate
        c.sim_start_date = value;
    } else if (key == "verify_t_tol") c.verify_t_tol = to_double(value, key);
    else if (key == "verify_tcrit_tol") c.verify_tcrit_tol = to_double(value, key);
    else if (key == "verify_tcrit_tol_rounded") c.verify_tcrit_tol_rounded = to_double(value, key);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

void load_config_file(const std::string& path, RunConfig& config) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config " + path + ":" + std::to_string(line_no) +
                                     ": expected 'key = value'");
        try {
            apply_config_entry(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), config);
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void print_config(std::ostream& out, const RunConfig& c) {
    char buf[256];
    auto emit = [&](const char* key, const std::string& value) { out << key << " = " << value << "\n"; };
    auto emit_num = [&](const char* key, double v) {
        std::snprintf(buf, sizeof buf, "%.10g", v);
        emit(key, buf);
    };
    emit("input", c.input);
    emit("out", c.out_dir);
    emit("seed", std::to_string(c.seed));
    emit_num("tick_size", c.coarse_tick);
    emit_num("fine_tick_size", c.fine_tick);
    emit_num("alpha", c.alpha);
    emit("df_convention", c.df_convention);
    emit("degenerate_floor", std::to_string(c.degenerate_floor));
    emit("superposition_floor", std::to_string(c.superposition_floor));
    emit_num("session_hours", c.session_hours);
    emit("session_open", c.session_open);
    emit("session_filter", c.session_filter ? "true" : "false");
    emit("fail_fast", c.fail_fast ? "true" : "false");
    emit("parallel", c.parallel ? "true" : "false");
    emit("lm_max_iterations", std::to_string(c.lm_max_iterations));
    emit_num("lm_lambda0", c.lm_lambda0);
    emit_num("lm_lambda_up", c.lm_lambda_up);
    emit_num("lm_lambda_down", c.lm_lambda_down);
    for (const auto& r : c.regimes)
        emit("regime", r.label + "," + format_date(r.start) + "," + format_date(r.end));
    emit("sim_days", std::to_string(c.sim_days));
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g", c.sim_mixture[0], c.sim_mixture[1],
                  c.sim_mixture[2], c.sim_mixture[3]);
    emit("sim_mixture", buf);
    emit_num("sim_rho", c.sim_rho);
    emit("sim_ticks_per_day", std::to_string(c.sim_ticks_per_day));
    emit_num("sim_base_price", c.sim_base_price);
    emit("sim_base_volume", std::to_string(c.sim_base_volume));
    emit_num("sim_return_sigma", c.sim_return_sigma);
    emit_num("sim_volume_sigma", c.sim_volume_sigma);
    emit("sim_start_date", c.sim_start_date);
    emit_num("verify_t_tol", c.verify_t_tol);
    emit_num("verify_tcrit_tol", c.verify_tcrit_tol);
    emit_num("verify_tcrit_tol_rounded", c.verify_tcrit_tol_rounded);
}

PipelineConfig make_pipeline_config(const RunConfig& c) {
    PipelineConfig p;
    p.coarse_milli = static_cast<std::int64_t>(std::llround(c.coarse_tick * 1000.0));
    p.fine_milli = static_cast<std::int64_t>(std::llround(c.fine_tick * 1000.0));
    if (p.coarse_milli <= 0 || p.fine_milli <= 0)
        throw std::invalid_argument("config: tick sizes must be positive");
    p.degenerate_floor = c.degenerate_floor;
    p.superposition_floor = c.superposition_floor;
    p.session_seconds = c.session_hours * 3600.0;
    p.fit.alpha = c.alpha;
    p.fit.df_convention =
        c.df_convention == "conventional" ? DfConvention::conventional : DfConvention::paper;
    p.fit.max_iterations = c.lm_max_iterations;
    p.fit.lambda0 = c.lm_lambda0;
    p.fit.lambda_up = c.lm_lambda_up;
    p.fit.lambda_down = c.lm_lambda_down;
    p.parallel = c.parallel;
    return p;
}

CorpusSpec make_corpus_spec(const RunConfig& c) {
    CorpusSpec s;
    s.day_count = c.sim_days;
    for (int i = 0; i < 4; ++i) s.mixture[i] = c.sim_mixture[i];
    s.rho = c.sim_rho;
    s.sigma_return = c.sim_return_sigma;
    s.sigma_volume = c.sim_volume_sigma;
    s.base_price = c.sim_base_price;
    s.base_volume = c.sim_base_volume;
    s.n_ticks = c.sim_ticks_per_day;
    s.seed = c.seed;
    s.start_date = parse_date(c.sim_start_date);
    s.session_open_s = parse_time_of_day(c.session_open);
    s.session_seconds = c.session_hours * 3600.0;
    return s;
}

} // namespace pvwave
