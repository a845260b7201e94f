#pragma once

#include "scenario.hpp"

namespace stablesim {

// File emission + scenario dispatch for the CLI. Every run directory gets
// series.csv, summary.txt and params.txt; sweeps add one subdirectory per
// member, each with the same trio.

namespace detail {

inline std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

inline std::string summary_table(const std::vector<std::pair<std::string, Summary>>& rows) {
    std::string text = "series                    min             max            mean           final\n";
    for (auto& [name, s] : rows) {
        char line[256];
        std::snprintf(line, sizeof line, "%-18s %14.6f %15.6f %15.6f %15.6f\n", name.c_str(),
                      s.min, s.max, s.mean, s.final);
        text += line;
    }
    return text;
}

inline std::string params_text(const std::string& scenario, const ConfigMap& cfg) {
    std::string text = "scenario=" + scenario + "\n";
    for (auto& [k, v] : cfg.entries()) text += k + "=" + v + "\n";
    return text;
}

inline std::vector<double> column(const std::vector<DayStats>& days,
                                  double (*pick)(const DayStats&)) {
    std::vector<double> out;
    out.reserve(days.size());
    for (const DayStats& d : days) out.push_back(pick(d));
    return out;
}

inline double mean_last_year(const std::vector<DayStats>& days) {
    size_t n = days.size();
    size_t from = n > 365 ? n - 365 : 0;
    double sum = 0;
    for (size_t i = from; i < n; ++i) sum += days[i].price;
    return sum / static_cast<double>(n - from);
}

}  // namespace detail

struct ScenarioInfo {
    std::string name;
    std::string description;
};

inline const std::vector<ScenarioInfo>& list_scenarios() {
    static const std::vector<ScenarioInfo> scenarios = {
        {"intervals", "block inter-arrival distribution at rate multipliers 1.0/2.0/0.8"},
        {"supply", "coins in circulation across 1000 coinage eras with demand shocks"},
        {"market-btc", "agent market, fixed-supply currency with reward halvings"},
        {"market-stc", "agent market, stabilized currency (re-adjustment + depreciation)"},
        {"sweep-alpha-btc", "price ranges across impact factors, fixed-supply currency"},
        {"sweep-alpha-stc", "price ranges across impact factors, stabilized currency"},
        {"sweep-reward-stc", "stabilized currency across initial block rewards"},
        {"compare-fx", "stabilized price series scaled against an external FX series"},
    };
    return scenarios;
}

inline std::vector<DayStats> run_market(const MarketConfig& cfg, uint64_t seed) {
    Market market(cfg, seed);
    return market.run();
}

namespace detail {

inline void write_market_run(const std::filesystem::path& dir, const MarketConfig& cfg,
                             const std::vector<DayStats>& days) {
    std::filesystem::create_directories(dir);
    // hash_total = miners * hash rate; patch the column in one pass
    std::string csv =
        "day,price,demand,supply,transacted,miners,reachability,reward,hash_total,total_coins\n";
    csv.reserve(csv.size() + days.size() * 140);
    for (const DayStats& d : days) {
        char line[320];
        std::snprintf(line, sizeof line, "%d,%.6f,%.8f,%.8f,%.8f,%.6f,%.10g,%.8f,%.6f,%.8f\n",
                      d.day, d.price, to_coins(d.demand), to_coins(d.supply),
                      to_coins(d.transacted), d.miners, d.reachability, d.reward,
                      d.miners * cfg.hash_rate, to_coins(d.total_coins));
        csv += line;
    }
    write_file(dir / "series.csv", csv);
    std::vector<std::pair<std::string, Summary>> rows;
    rows.emplace_back("price", summarize(column(days, [](const DayStats& d) { return d.price; })));
    rows.emplace_back("transacted", summarize(column(days, [](const DayStats& d) {
                          return to_coins(d.transacted);
                      })));
    rows.emplace_back("miners", summarize(column(days, [](const DayStats& d) { return d.miners; })));
    rows.emplace_back("total_coins", summarize(column(days, [](const DayStats& d) {
                          return to_coins(d.total_coins);
                      })));
    write_file(dir / "summary.txt", summary_table(rows));
}

}  // namespace detail

// Runs a scenario and writes its outputs; assumes the seed is already in cfg.
inline void run_scenario(const std::string& name, ConfigMap& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::path dir(out_dir);
    fs::create_directories(dir);
    uint64_t seed = require_seed(cfg);

    if (name == "intervals") {
        IntervalsParams p;
        p.seed = seed;
        p.samples = cfg.get_int("samples", p.samples);
        p.bin_width = cfg.get_double("bin_width", p.bin_width);
        p.max_bins = cfg.get_int("max_bins", p.max_bins);
        p.theta_ref = cfg.get_double("theta_ref", p.theta_ref);
        p.multipliers = cfg.get_double_list("multipliers", p.multipliers);
        cfg.reject_unknown();
        IntervalsResult r = simulate_intervals(p);
        std::string csv = "multiplier,bin_start,frequency\n";
        for (size_t mi = 0; mi < p.multipliers.size(); ++mi)
            for (int b = 0; b < p.max_bins; ++b) {
                char line[96];
                std::snprintf(line, sizeof line, "%.10g,%.10g,%ld\n", p.multipliers[mi],
                              b * p.bin_width, r.bins[mi][b]);
                csv += line;
            }
        detail::write_file(dir / "series.csv", csv);
        std::vector<std::pair<std::string, Summary>> rows;
        for (auto& s : r.stats)
            rows.emplace_back("interval_x" + detail::fmt("%.10g", s.multiplier),
                              Summary{s.min, s.max, s.mean, s.mean});
        detail::write_file(dir / "summary.txt", detail::summary_table(rows));
    } else if (name == "supply") {
        SupplyParams p;
        p.seed = seed;
        p.policy = policy_from_config(cfg);
        p.reachability = cfg.get_double("reachability", p.reachability);
        p.reward = cfg.get_double("reward", p.reward);
        p.total_blocks = cfg.get_long("total_blocks", p.total_blocks);
        p.lifetime_eras = cfg.get_long("lifetime_eras", p.lifetime_eras);
        p.mode = cfg.get_string("interval_mode", "expected") == "sampled" ? IntervalMode::sampled
                                                                          : IntervalMode::expected;
        p.pos_shock_block = cfg.get_long("pos_shock_block", p.pos_shock_block);
        p.pos_shock_m = cfg.get_double("pos_shock_m", p.pos_shock_m);
        p.pos_recovery_block = cfg.get_long("pos_recovery_block", p.pos_recovery_block);
        p.neg_ramp_start = cfg.get_long("neg_ramp_start", p.neg_ramp_start);
        p.neg_ramp_end = cfg.get_long("neg_ramp_end", p.neg_ramp_end);
        p.neg_shock_m = cfg.get_double("neg_shock_m", p.neg_shock_m);
        p.neg_recovery_block = cfg.get_long("neg_recovery_block", p.neg_recovery_block);
        p.neg_overshoot_m = cfg.get_double("neg_overshoot_m", p.neg_overshoot_m);
        p.neg_settle_block = cfg.get_long("neg_settle_block", p.neg_settle_block);
        cfg.reject_unknown();
        SupplyResult r = simulate_supply(p);
        std::string csv = "era,end_height,minted,supply,reward,reachability\n";
        csv.reserve(csv.size() + r.eras.size() * 80);
        for (const SupplyEraRow& e : r.eras) {
            char line[192];
            std::snprintf(line, sizeof line, "%ld,%ld,%.8f,%.8f,%.8f,%.10g\n", e.era, e.end_height,
                          to_coins(e.minted), to_coins(e.supply), e.reward, e.reachability);
            csv += line;
        }
        detail::write_file(dir / "series.csv", csv);
        std::vector<double> supply_series;
        for (const SupplyEraRow& e : r.eras) supply_series.push_back(to_coins(e.supply));
        std::vector<std::pair<std::string, Summary>> rows;
        rows.emplace_back("supply", summarize(supply_series));
        std::string summary = detail::summary_table(rows);
        summary += "\nadjustments:\n";
        for (const PolicyEvent& ev : r.events) {
            char line[128];
            std::snprintf(line, sizeof line, "  height %ld  theta_obs %.4f  %s\n", ev.height,
                          ev.theta_obs,
                          ev.kind == AdjustmentKind::positive ? "speed-up: reward x2, target /2"
                                                              : "slow-down: reward x0.8, target x5/4");
            summary += line;
        }
        detail::write_file(dir / "summary.txt", summary);
    } else if (name == "market-btc" || name == "market-stc") {
        MarketConfig m = market_from_config(
            cfg, name == "market-btc" ? CurrencyMode::fixed_supply : CurrencyMode::stabilized);
        cfg.reject_unknown();
        std::vector<DayStats> days = run_market(m, seed);
        detail::write_market_run(dir, m, days);
    } else if (name == "sweep-alpha-btc" || name == "sweep-alpha-stc") {
        std::vector<double> alphas = cfg.get_double_list("alphas", {1e-5, 1e-4, 1e-3});
        MarketConfig base = market_from_config(
            cfg, name == "sweep-alpha-btc" ? CurrencyMode::fixed_supply : CurrencyMode::stabilized);
        cfg.reject_unknown();
        std::string csv = "alpha,price_min,price_max,price_range,price_mean,price_final\n";
        std::vector<std::pair<std::string, Summary>> rows;
        for (size_t i = 0; i < alphas.size(); ++i) {
            MarketConfig m = base;
            m.alpha = alphas[i];
            std::vector<DayStats> days = run_market(m, derive_seed(seed, i));
            char sub[64];
            std::snprintf(sub, sizeof sub, "alpha_%.10g", alphas[i]);
            detail::write_market_run(dir / sub, m, days);
            Summary s = summarize(detail::column(days, [](const DayStats& d) { return d.price; }));
            char line[192];
            std::snprintf(line, sizeof line, "%.10g,%.6f,%.6f,%.6f,%.6f,%.6f\n", alphas[i], s.min,
                          s.max, s.max - s.min, s.mean, s.final);
            csv += line;
            rows.emplace_back(std::string("price@") + sub, s);
        }
        detail::write_file(dir / "series.csv", csv);
        detail::write_file(dir / "summary.txt", detail::summary_table(rows));
    } else if (name == "sweep-reward-stc") {
        std::vector<double> rewards = cfg.get_double_list("rewards", {6.25, 12.5, 25.0, 50.0});
        MarketConfig base = market_from_config(cfg, CurrencyMode::stabilized);
        cfg.reject_unknown();
        std::string csv = "reward,price_min,price_max,price_mean,price_final,final_year_mean\n";
        std::vector<std::pair<std::string, Summary>> rows;
        for (size_t i = 0; i < rewards.size(); ++i) {
            MarketConfig m = base;
            m.initial_reward = rewards[i];
            std::vector<DayStats> days = run_market(m, derive_seed(seed, i));
            char sub[64];
            std::snprintf(sub, sizeof sub, "reward_%.10g", rewards[i]);
            detail::write_market_run(dir / sub, m, days);
            Summary s = summarize(detail::column(days, [](const DayStats& d) { return d.price; }));
            char line[224];
            std::snprintf(line, sizeof line, "%.10g,%.6f,%.6f,%.6f,%.6f,%.6f\n", rewards[i], s.min,
                          s.max, s.mean, s.final, detail::mean_last_year(days));
            csv += line;
            rows.emplace_back(std::string("price@") + sub, s);
        }
        detail::write_file(dir / "series.csv", csv);
        detail::write_file(dir / "summary.txt", detail::summary_table(rows));
    } else if (name == "compare-fx") {
        std::string fx_path = cfg.get_string("fx_data", "");
        if (fx_path.empty())
            throw std::invalid_argument("compare-fx requires fx_data=<csv of date,value>");
        double scale = cfg.get_double("fx_scale", 0.153);
        if (!cfg.has("alpha")) cfg.set("alpha", "0.00001");  // gentle default for this comparison
        MarketConfig m = market_from_config(cfg, CurrencyMode::stabilized);
        cfg.reject_unknown();
        auto fx = load_external_series(fx_path);
        if (fx.empty()) throw std::invalid_argument("compare-fx: empty fx series");
        std::vector<DayStats> days = run_market(m, seed);
        size_t n = std::min(days.size(), fx.size());
        std::string csv = "row,fx_date,fx_value,scaled_price\n";
        std::vector<double> fx_vals, scaled;
        for (size_t i = 0; i < n; ++i) {
            double sp = days[i].price * scale;
            char line[160];
            std::snprintf(line, sizeof line, "%zu,%s,%.6f,%.6f\n", i + 1, fx[i].first.c_str(),
                          fx[i].second, sp);
            csv += line;
            fx_vals.push_back(fx[i].second);
            scaled.push_back(sp);
        }
        detail::write_file(dir / "series.csv", csv);
        std::vector<std::pair<std::string, Summary>> rows;
        rows.emplace_back("fx", summarize(fx_vals));
        rows.emplace_back("scaled_price", summarize(scaled));
        detail::write_file(dir / "summary.txt", detail::summary_table(rows));
    } else {
        throw std::invalid_argument("unknown scenario: " + name);
    }
    detail::write_file(dir / "params.txt", detail::params_text(name, cfg));
}

}  // namespace stablesim
