// Acceptance gate: twelve checks covering the identities, the policy rules,
// the long-horizon supply behavior, and the emergent market properties.
// Each prints one line; the process exits nonzero if any fail.

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "stablesim/runner.hpp"

using namespace stablesim;
namespace fs = std::filesystem;

static int failures = 0;

static void report(int idx, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %2d %-28s %s\n", pass ? "PASS" : "FAIL", idx, name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

// ---- exact rational arithmetic for the offsetting identity ------------------------

struct Rational {
    long long n = 0, d = 1;
    Rational() = default;
    Rational(long long v) : n(v) {}
    Rational(long long n_, long long d_) : n(n_), d(d_) { norm(); }
    void norm() {
        if (d < 0) { n = -n; d = -d; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
    }
};
static Rational operator*(Rational a, Rational b) { return {a.n * b.n, a.d * b.d}; }
static Rational operator/(Rational a, Rational b) { return {a.n * b.d, a.d * b.n}; }
static bool operator>(Rational a, Rational b) { return a.n * b.d > b.n * a.d; }
static bool operator==(Rational a, Rational b) { return a.n == b.n && a.d == b.d; }

// ---- shared market runs ------------------------------------------------------------

struct RunKey {
    int mode;
    uint64_t seed;
    double alpha;
    double reward;
    bool operator<(const RunKey& o) const {
        return std::tie(mode, seed, alpha, reward) < std::tie(o.mode, o.seed, o.alpha, o.reward);
    }
};

static const std::vector<DayStats>& market_run(CurrencyMode mode, uint64_t seed, double alpha,
                                               double reward) {
    static std::map<RunKey, std::vector<DayStats>> cache;
    RunKey key{mode == CurrencyMode::stabilized ? 1 : 0, seed, alpha, reward};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    MarketConfig cfg;
    cfg.mode = mode;
    cfg.alpha = alpha;
    cfg.initial_reward = reward;
    Market m(cfg, seed);
    return cache.emplace(key, m.run()).first->second;
}

static Summary price_summary(const std::vector<DayStats>& days) {
    std::vector<double> p;
    p.reserve(days.size());
    for (const DayStats& d : days) p.push_back(d.price);
    return summarize(p);
}

static std::string fmtd(const char* format, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

// ---- criteria ----------------------------------------------------------------------

static void c1_equilibrium() {
    MiningEconomy e;
    double gap = equilibrium_gap(e, 652.0);
    report(1, "equilibrium identity", gap == 0.0, fmtd("gap at 652.00 = %.17g", gap));
}

static void c2_ledger_example() {
    CoinOutput out{to_units(23.75), 0, 5, "w"};
    Amount v = evaluate_output_value(out, 10);
    report(2, "ledger worked example", v == 2'250'000'000LL,
           "23.75 five eras in -> " + format_coins(v) + " at ten");
}

static void c3_offsetting() {
    Rational g(1, 10), v(25, 2);
    const Rational product = g * v;
    bool invariant = true;
    std::tie(g, v) = positive_reward_adjustment(g, v);
    invariant &= g * v == product;
    for (int i = 0; i < 3; ++i) {
        std::tie(g, v) = negative_reward_adjustment(g, v);
        invariant &= g * v == product;
    }
    bool scaled = v == Rational(25, 2) * Rational(128, 125);  // exactly 1.024x
    char buf[128];
    std::snprintf(buf, sizeof buf, "V = %lld/%lld (wanted 64/5), V*g %s", v.n, v.d,
                  invariant ? "invariant" : "drifted");
    report(3, "reward offsetting", invariant && scaled, buf);
}

static void c4_intervals() {
    IntervalsParams p;
    p.seed = 1001;
    IntervalsResult r = simulate_intervals(p);
    double m1 = r.stats[0].mean, m2 = r.stats[1].mean, m08 = r.stats[2].mean;
    bool means = std::abs(m1 / 10.0 - 1) < 0.05 && std::abs(m2 / 5.0 - 1) < 0.05 &&
                 std::abs(m08 / 12.5 - 1) < 0.05;
    bool ordering = r.bins[1][0] > r.bins[0][0] && r.bins[0][0] > r.bins[2][0];
    report(4, "interval statistics", means && ordering,
           fmtd("means %.3f / %.3f / %.3f", m1, m2, m08) +
               fmtd(", first-bin counts %g > %g > %g", static_cast<double>(r.bins[1][0]),
                    static_cast<double>(r.bins[0][0]), static_cast<double>(r.bins[2][0])));
}

static void c5_supply_constancy() {
    SupplyParams p;
    p.seed = 1;
    SupplyResult r = simulate_supply(p);
    double s_ref = static_cast<double>(r.eras[247].supply);
    auto dev = [&](long era) {
        return static_cast<double>(r.eras[era].supply) / s_ref - 1.0;
    };
    double worst = 0;
    bool quiet_ok = true;
    auto scan = [&](long lo, long hi) {
        for (long e = lo; e <= hi; ++e) {
            double d = dev(e);
            if (std::abs(d) > std::abs(worst)) worst = d;
            if (std::abs(d) > 0.10) quiet_ok = false;
        }
    };
    scan(110, 247);   // pre-shock steady state
    scan(254, 495);   // between the recoveries
    scan(518, 999);   // after the second recovery
    double rec1 = dev(495), rec2 = dev(999);
    bool recovered = std::abs(rec1) <= 0.05 && std::abs(rec2) <= 0.05;
    report(5, "supply constancy", quiet_ok && recovered,
           fmtd("worst quiet-zone dev %+.2f%%, post-recovery %+.2f%% / %+.2f%%", worst * 100,
                rec1 * 100, rec2 * 100));
}

static void c6_oracle_equivalence() {
    Rng rng(90210);
    long checked = 0;
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        long lifetime = 1 + static_cast<long>(uniform01(rng) * 149);
        EraSupplyLedger ledger(lifetime);
        int horizon = 40 + static_cast<int>(uniform01(rng) * 140);
        for (int era = 0; era < horizon; ++era) {
            int mints = static_cast<int>(uniform01(rng) * 3);
            for (int k = 0; k < mints; ++k)
                ledger.mint(era, static_cast<Amount>(uniform01(rng) * 1e13));
            if (ledger.supply() != ledger.supply_at(era)) {
                ok = false;
                break;
            }
            ++checked;
            ledger.advance_era();
        }
    }
    report(6, "oracle equivalence", ok, fmtd("%g era states matched exactly", (double)checked));
}

static void c7_stability_comparison() {
    bool ok = true;
    std::string detail;
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        Summary stc = price_summary(market_run(CurrencyMode::stabilized, seed, 1e-4, 12.5));
        Summary btc = price_summary(market_run(CurrencyMode::fixed_supply, seed, 1e-4, 12.5));
        double rs = stc.max / stc.min, rb = btc.max / btc.min;
        if (!(rs < rb)) ok = false;
        if (seed <= 2) detail += fmtd("s%g: %.2f vs %.2f  ", (double)seed, rs, rb);
    }
    report(7, "stability comparison", ok, detail + (ok ? "(all 5 seeds ordered)" : "(violated)"));
}

static void c8_alpha_monotonicity() {
    const double alphas[3] = {1e-5, 1e-4, 1e-3};
    bool ok = true;
    std::string detail;
    for (CurrencyMode mode : {CurrencyMode::stabilized, CurrencyMode::fixed_supply}) {
        double prev = -1;
        for (double a : alphas) {
            Summary s = price_summary(market_run(mode, 1, a, 12.5));
            double range = s.max - s.min;
            if (range <= prev) ok = false;
            prev = range;
            detail += fmtd("%.0e:%.0f ", a, range);
        }
        detail += mode == CurrencyMode::stabilized ? "(stc) " : "(btc) ";
    }
    report(8, "alpha monotonicity", ok, detail);
}

static void c9_reward_monotonicity() {
    const double rewards[4] = {6.25, 12.5, 25.0, 50.0};
    double prev = 1e300;
    bool ok = true;
    std::string detail;
    for (double v : rewards) {
        const auto& days = market_run(CurrencyMode::stabilized, 1, 1e-4, v);
        double sum = 0;
        for (size_t i = days.size() - 365; i < days.size(); ++i) sum += days[i].price;
        double mean = sum / 365.0;
        if (mean >= prev) ok = false;
        prev = mean;
        detail += fmtd("%g:%.0f ", v, mean);
    }
    report(9, "reward monotonicity", ok, detail);
}

static void c10_day1_transacted() {
    int in_band = 0;
    double lo = 1e300, hi = 0;
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        MarketConfig cfg;
        cfg.days = 1;
        Market m(cfg, seed);
        double t = to_coins(m.step().transacted);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
        if (t >= 150'000.0 && t <= 350'000.0) ++in_band;
    }
    report(10, "day-1 transacted quantity", in_band >= 18,
           fmtd("%g/20 in [150k,350k], span %.0f..%.0f", (double)in_band, lo, hi));
}

static void c11_conservation() {
    bool ok = true;
    std::string detail;
    for (CurrencyMode mode : {CurrencyMode::stabilized, CurrencyMode::fixed_supply}) {
        MarketConfig cfg;
        cfg.mode = mode;
        Market m(cfg, 77);
        Amount prev = m.total_coins();
        for (int d = 0; d < cfg.days && ok; ++d) {
            DayStats st = m.step();
            if (st.total_coins != prev + st.minted - st.depreciated) ok = false;
            if (mode == CurrencyMode::fixed_supply && st.depreciated != 0) ok = false;
            if (st.day % 365 == 0 && m.audited_total() != st.total_coins) ok = false;
            prev = st.total_coins;
        }
        if (ok && m.audited_total() != m.total_coins()) ok = false;
        detail += mode == CurrencyMode::stabilized ? "stc " : "btc ";
        detail += ok ? "exact  " : "BROKEN  ";
    }
    report(11, "conservation suite", ok, detail + "(3650 days each)");
}

static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return "<missing:" + p.string() + ">";
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

static void c12_determinism() {
    struct Case {
        const char* scenario;
        std::map<std::string, std::string> keys;
    };
    std::string fx = std::string(TEST_DATA_DIR) + "/fx_sample.csv";
    std::vector<Case> cases = {
        {"intervals", {}},
        {"supply",
         {{"total_blocks", "60480"},
          {"pos_shock_block", "999999999"},
          {"pos_recovery_block", "1000000000"},
          {"neg_ramp_start", "999999999"},
          {"neg_ramp_end", "999999999"},
          {"neg_recovery_block", "999999999"},
          {"neg_settle_block", "999999999"}}},
        {"market-stc", {{"days", "120"}}},
        {"market-btc", {{"days", "120"}}},
        {"sweep-alpha-stc", {{"days", "40"}, {"alphas", "0.0001,0.001"}}},
        {"sweep-alpha-btc", {{"days", "40"}, {"alphas", "0.0001,0.001"}}},
        {"sweep-reward-stc", {{"days", "40"}, {"rewards", "6.25,12.5"}}},
        {"compare-fx", {{"days", "30"}, {"fx_data", fx}}},
    };
    bool ok = true;
    std::string bad;
    fs::path base = fs::temp_directory_path() / "stablesim_acceptance";
    fs::remove_all(base);
    for (const Case& c : cases) {
        fs::path d1 = base / (std::string(c.scenario) + "_1");
        fs::path d2 = base / (std::string(c.scenario) + "_2");
        for (const fs::path& d : {d1, d2}) {
            ConfigMap cfg;
            cfg.set("seed", "3");
            for (auto& [k, v] : c.keys) cfg.set(k, v);
            run_scenario(c.scenario, cfg, d.string());
        }
        if (slurp(d1 / "series.csv") != slurp(d2 / "series.csv") ||
            slurp(d1 / "summary.txt") != slurp(d2 / "summary.txt")) {
            ok = false;
            bad += std::string(c.scenario) + " ";
        }
    }
    report(12, "determinism", ok,
           ok ? "all 8 scenarios byte-identical on rerun" : "diverged: " + bad);
}

int main() {
    c1_equilibrium();
    c2_ledger_example();
    c3_offsetting();
    c4_intervals();
    c5_supply_constancy();
    c6_oracle_equivalence();
    c7_stability_comparison();
    c8_alpha_monotonicity();
    c9_reward_monotonicity();
    c10_day1_transacted();
    c11_conservation();
    c12_determinism();
    std::printf("%d of 12 criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 1;
}
