#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "market.hpp"

namespace stablesim {

// Scenario runners behind the CLI. Each simulate_* function is pure given its
// parameter struct; run_scenario() wires config -> simulation -> files
// (series.csv, summary.txt, params.txt under --out).

struct Summary {
    double min = 0.0, max = 0.0, mean = 0.0, final = 0.0;
};

inline Summary summarize(const std::vector<double>& series) {
    if (series.empty()) throw std::domain_error("summarize: empty series");
    Summary s;
    s.min = s.max = series.front();
    double sum = 0.0;
    for (double v : series) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        sum += v;
    }
    s.mean = sum / static_cast<double>(series.size());
    s.final = series.back();
    return s;
}

// (date, value) rows, sorted by date. ISO dates sort correctly as strings.
inline std::vector<std::pair<std::string, double>> load_external_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open series file: " + path);
    std::vector<std::pair<std::string, double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument(path + ": line " + std::to_string(line_no) +
                                        ": expected date,value");
        std::string date = line.substr(0, comma);
        std::string value = line.substr(comma + 1);
        if (line_no == 1 && value.find_first_not_of("0123456789.,-eE+ ") != std::string::npos)
            continue;  // header row
        size_t used = 0;
        double v;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument(path + ": line " + std::to_string(line_no) +
                                        ": bad value: " + value);
        }
        rows.emplace_back(date, v);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    return rows;
}

// ---- block-interval distribution ------------------------------------------------

struct IntervalsParams {
    std::vector<double> multipliers{1.0, 2.0, 0.8};
    int samples = 10000;
    double bin_width = 1.0;  // minutes
    int max_bins = 50;
    double theta_ref = 10.0;
    uint64_t seed = 0;
};

struct IntervalsResult {
    struct Stat {
        double multiplier, mean, min, max;
    };
    std::vector<std::vector<long>> bins;  // [multiplier][bin]
    std::vector<Stat> stats;
};

inline IntervalsResult simulate_intervals(const IntervalsParams& p) {
    if (p.samples <= 0 || p.max_bins <= 0 || !(p.bin_width > 0))
        throw std::invalid_argument("intervals: bad sampling parameters");
    IntervalsResult r;
    for (size_t mi = 0; mi < p.multipliers.size(); ++mi) {
        Rng rng(derive_seed(p.seed, mi));
        std::vector<long> bins(p.max_bins, 0);
        double sum = 0, mn = 0, mx = 0;
        for (int i = 0; i < p.samples; ++i) {
            double ival = sample_block_interval(rng, p.multipliers[mi], p.theta_ref);
            sum += ival;
            if (i == 0) mn = mx = ival;
            mn = std::min(mn, ival);
            mx = std::max(mx, ival);
            int b = static_cast<int>(ival / p.bin_width);
            if (b >= p.max_bins) b = p.max_bins - 1;
            ++bins[b];
        }
        r.bins.push_back(std::move(bins));
        r.stats.push_back({p.multipliers[mi], sum / p.samples, mn, mx});
    }
    return r;
}

// ---- long-horizon supply with demand shocks --------------------------------------

struct SupplyParams {
    PolicyConfig policy;
    double reachability = 0.1;
    double reward = 12.5;
    long total_blocks = 2'016'000;
    long lifetime_eras = 100;
    IntervalMode mode = IntervalMode::expected;
    uint64_t seed = 0;
    // demand profile, as M/M0 steps and one downward ramp
    long pos_shock_block = 500'000;
    double pos_shock_m = 2.0;
    long pos_recovery_block = 506'000;
    long neg_ramp_start = 1'000'000;
    long neg_ramp_end = 1'027'000;
    double neg_shock_m = 0.45;
    long neg_recovery_block = 1'030'000;  // overshoot step lands here
    double neg_overshoot_m = 1.06;
    long neg_settle_block = 1'040'000;

    double hash_profile(long height) const {
        if (height < pos_shock_block) return 1.0;
        if (height < pos_recovery_block) return pos_shock_m;
        if (height < neg_ramp_start) return 1.0;
        if (height < neg_ramp_end) {
            double frac = static_cast<double>(height - neg_ramp_start) /
                          static_cast<double>(neg_ramp_end - neg_ramp_start);
            return 1.0 + (neg_shock_m - 1.0) * frac;
        }
        if (height < neg_recovery_block) return neg_shock_m;
        if (height < neg_settle_block) return neg_overshoot_m;
        return 1.0;
    }
};

struct SupplyEraRow {
    long era;
    long end_height;
    Amount minted;
    Amount supply;
    double reward;
    double reachability;
};

struct SupplyResult {
    std::vector<SupplyEraRow> eras;
    std::vector<PolicyEvent> events;
};

inline SupplyResult simulate_supply(const SupplyParams& p) {
    if (p.total_blocks <= 0) throw std::invalid_argument("supply: total_blocks must be positive");
    ChainState chain(p.policy, p.reachability, p.reward, p.seed, p.mode);
    EraSupplyLedger ledger(p.lifetime_eras);
    SupplyResult r;
    for (long b = 0; b < p.total_blocks; ++b) {
        const BlockHeader& h = chain.mine_block(p.hash_profile(b));
        if (h.era > ledger.current_era()) {
            const BlockHeader& prev_info = h;  // reward/g as of the boundary
            r.eras.push_back({ledger.current_era(), h.height - 1,
                              ledger.minted_in(ledger.current_era()), ledger.supply(),
                              prev_info.reward, prev_info.reachability});
            ledger.advance_era();
        }
        ledger.mint(h.era, to_units(h.reward));
    }
    r.eras.push_back({ledger.current_era(), p.total_blocks - 1,
                      ledger.minted_in(ledger.current_era()), ledger.supply(), chain.reward(),
                      chain.reachability()});
    r.events = chain.events();
    return r;
}

// ---- config -> simulation parameter assembly --------------------------------------

inline uint64_t require_seed(ConfigMap& cfg) {
    if (!cfg.has("seed"))
        throw std::invalid_argument("a seed is required (config key 'seed' or --seed)");
    long s = cfg.get_long("seed", 0);
    if (s < 0) throw std::invalid_argument("seed must be non-negative");
    return static_cast<uint64_t>(s);
}

inline PolicyConfig policy_from_config(ConfigMap& cfg) {
    PolicyConfig p;
    p.theta_ref = cfg.get_double("theta_ref", p.theta_ref);
    p.theta_min = cfg.get_double("theta_min", p.theta_min);
    p.detection_window = cfg.get_int("detection_window", p.detection_window);
    p.mtp_span = cfg.get_int("mtp_span", p.mtp_span);
    p.era_length = cfg.get_long("era_length", p.era_length);
    p.positive_ratio = cfg.get_double("positive_ratio", p.positive_ratio);
    p.negative_ratio = cfg.get_double("negative_ratio", p.negative_ratio);
    return p;
}

inline MarketConfig market_from_config(ConfigMap& cfg, CurrencyMode mode) {
    MarketConfig m;
    m.mode = mode;
    m.days = cfg.get_int("days", m.days);
    m.initial_price = cfg.get_double("price", m.initial_price);
    m.alpha = cfg.get_double("alpha", m.alpha);
    m.price_floor = cfg.get_double("price_floor", m.price_floor);
    m.buy_probability = cfg.get_double("buy_probability", m.buy_probability);
    m.trade_intensity = cfg.get_double("trade_intensity", m.trade_intensity);
    m.behavior_intensity = cfg.get_double("behavior_intensity", m.behavior_intensity);
    m.speculators = cfg.get_int("speculators", m.speculators);
    m.commons = cfg.get_int("commons", m.commons);
    m.speculator_coins = cfg.get_double("speculator_coins", m.speculator_coins);
    m.common_coins = cfg.get_double("common_coins", m.common_coins);
    m.behavioral_enabled = cfg.get_bool("behavioral", m.behavioral_enabled);
    m.initial_miners = cfg.get_double("miners", m.initial_miners);
    m.miner_floor = cfg.get_double("miner_floor", m.miner_floor);
    m.hash_rate = cfg.get_double("hash_rate", m.hash_rate);
    m.reachability = cfg.get_double("reachability", m.reachability);
    m.initial_reward = cfg.get_double("reward", m.initial_reward);
    m.unit_cost = cfg.get_double("unit_cost", m.unit_cost);
    m.blocks_per_day = cfg.get_int("blocks_per_day", m.blocks_per_day);
    m.halving_enabled = cfg.get_bool("halving", m.halving_enabled);
    m.halving_interval = cfg.get_long("halving_interval", m.halving_interval);
    m.era_days = cfg.get_int("era_days", m.era_days);
    m.lifetime_eras = cfg.get_long("lifetime_eras", m.lifetime_eras);
    m.policy = policy_from_config(cfg);
    return m;
}

}  // namespace stablesim
