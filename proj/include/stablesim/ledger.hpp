#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "amounts.hpp"

namespace stablesim {

// Coinage-era supply accounting. Coins lose 1/lifetime of their original value
// per era after the era they were minted in, hitting zero `lifetime` eras out.
// All value math is integer base units, round half down.

inline double depreciation_factor(long origin_era, long at_era, long lifetime = 100) {
    if (at_era < origin_era) throw std::domain_error("depreciation_factor: era precedes origin");
    if (lifetime <= 0) throw std::domain_error("depreciation_factor: bad lifetime");
    long age = at_era - origin_era;
    if (age >= lifetime) return 0.0;
    return 1.0 - static_cast<double>(age) / static_cast<double>(lifetime);
}

// Value written off from Z units minted in era t, as of era T.
inline Amount era_depreciation(Amount minted, long origin_era, long at_era, long lifetime = 100) {
    if (minted < 0) throw std::domain_error("era_depreciation: negative amount");
    if (at_era < origin_era) throw std::domain_error("era_depreciation: era precedes origin");
    long age = at_era - origin_era;
    if (age >= lifetime) return minted;
    Amount d = mul_div_half_down(minted, age, lifetime);
    return d > minted ? minted : d;
}

class EraSupplyLedger {
  public:
    explicit EraSupplyLedger(long lifetime = 100) : lifetime_(lifetime) {
        if (lifetime <= 0) throw std::invalid_argument("EraSupplyLedger: bad lifetime");
    }

    // Record freshly minted coins. Minting is only allowed into the live era.
    void mint(long era, Amount amount) {
        if (era != current_) throw std::invalid_argument("EraSupplyLedger: era mismatch on mint");
        if (amount < 0) throw std::invalid_argument("EraSupplyLedger: negative mint");
        if (minted_.size() <= static_cast<size_t>(current_)) minted_.resize(current_ + 1, 0);
        minted_[current_] += amount;
        supply_ += amount;
    }

    // Close the live era: apply one more era of depreciation to everything
    // still circulating, then open the next era. Incremental O(lifetime).
    // The cohort whose age reaches `lifetime` at `next` still sheds its final
    // slice here, so the range must reach back one era past the survivors.
    void advance_era() {
        long next = current_ + 1;
        long lo = next - lifetime_;
        if (lo < 0) lo = 0;
        for (long t = lo; t <= current_ && t < static_cast<long>(minted_.size()); ++t) {
            Amount z = minted_[t];
            supply_ -= era_depreciation(z, t, next, lifetime_) -
                       era_depreciation(z, t, current_, lifetime_);
        }
        current_ = next;
    }

    long current_era() const { return current_; }
    long lifetime() const { return lifetime_; }
    Amount supply() const { return supply_; }  // incrementally maintained S(current)
    Amount minted_in(long era) const {
        if (era < 0 || era >= static_cast<long>(minted_.size())) return 0;
        return minted_[era];
    }

    // Brute-force S(T) straight from the definition; the oracle the incremental
    // value is checked against.
    Amount supply_at(long era) const {
        if (era < 0 || era > current_) throw std::domain_error("supply_at: era out of range");
        Amount s = 0;
        for (long t = 0; t <= era && t < static_cast<long>(minted_.size()); ++t)
            s += minted_[t] - era_depreciation(minted_[t], t, era, lifetime_);
        return s;
    }

  private:
    long lifetime_;
    long current_ = 0;
    Amount supply_ = 0;
    std::vector<Amount> minted_;
};

// ---- depreciating-output transactions ----------------------------------------

// recorded_value is the face value as of recorded_era; the coin keeps losing
// 1/lifetime of its *original* value per era, so later evaluations divide the
// recorded factor back out before applying the current one.
struct CoinOutput {
    Amount recorded_value = 0;
    long origin_era = 0;
    long recorded_era = 0;
    std::string owner;
};

inline void check_output_well_formed(const CoinOutput& out, long lifetime = 100) {
    if (out.recorded_value < 0) throw std::domain_error("CoinOutput: negative value");
    if (out.recorded_era < out.origin_era)
        throw std::domain_error("CoinOutput: recorded before origin");
    if (out.recorded_era - out.origin_era >= lifetime)
        throw std::domain_error("CoinOutput: recorded with no value left");  // cannot exist
}

inline Amount evaluate_output_value(const CoinOutput& out, long at_era, long lifetime = 100) {
    check_output_well_formed(out, lifetime);
    if (at_era < out.recorded_era)
        throw std::domain_error("evaluate_output_value: before recorded era");
    long age = at_era - out.origin_era;
    if (age >= lifetime) return 0;
    // recorded / factor(recorded) * factor(now), one rounding step
    return div_round_half_down(
        static_cast<__int128>(out.recorded_value) * (lifetime - age),
        lifetime - (out.recorded_era - out.origin_era));
}

using OutputId = uint64_t;

enum class TxViolation {
    none,
    duplicate_input,
    unknown_input,
    expired_input,
    group_overflow,
    conservation_violation,
    malformed_output,
};

inline const char* to_string(TxViolation v) {
    switch (v) {
        case TxViolation::none: return "ok";
        case TxViolation::duplicate_input: return "duplicate-input";
        case TxViolation::unknown_input: return "unknown-input";
        case TxViolation::expired_input: return "expired-input";
        case TxViolation::group_overflow: return "group-overflow";
        case TxViolation::conservation_violation: return "conservation-violation";
        case TxViolation::malformed_output: return "malformed-output";
    }
    return "?";
}

struct DepTransaction {
    long era = 0;                     // execution era; outputs are recorded here
    std::vector<OutputId> inputs;
    std::vector<CoinOutput> outputs;
};

struct TxCheck {
    TxViolation violation = TxViolation::none;
    std::string detail;
    bool ok() const { return violation == TxViolation::none; }
};

// Live output set. Nothing fancier than the tests and golden files need.
class UtxoView {
  public:
    OutputId add(const CoinOutput& out, long lifetime = 100) {
        check_output_well_formed(out, lifetime);
        OutputId id = next_++;
        live_.emplace(id, out);
        return id;
    }
    const CoinOutput* find(OutputId id) const {
        auto it = live_.find(id);
        return it == live_.end() ? nullptr : &it->second;
    }
    void spend(OutputId id) { live_.erase(id); }
    size_t size() const { return live_.size(); }
    const std::unordered_map<OutputId, CoinOutput>& live() const { return live_; }

  private:
    OutputId next_ = 1;
    std::unordered_map<OutputId, CoinOutput> live_;
};

// Validation only; no fees, so every origin-era group must conserve value
// exactly at the transaction era. Groups are per origin era, at most 100
// (merging same-origin coins that arrived by different paths is allowed).
inline TxCheck validate_transaction(const DepTransaction& tx, const UtxoView& view,
                                    long lifetime = 100, int max_groups = 100) {
    std::set<OutputId> seen;
    for (OutputId id : tx.inputs) {
        if (!seen.insert(id).second)
            return {TxViolation::duplicate_input, "input " + std::to_string(id) + " repeated"};
        if (!view.find(id))
            return {TxViolation::unknown_input, "input " + std::to_string(id) + " not live"};
    }
    std::map<long, Amount> in_value, out_value;  // origin era -> units
    for (OutputId id : tx.inputs) {
        const CoinOutput& in = *view.find(id);
        if (tx.era - in.origin_era >= lifetime)
            return {TxViolation::expired_input,
                    "input " + std::to_string(id) + " expired (origin era " +
                        std::to_string(in.origin_era) + ")"};
        if (tx.era < in.recorded_era)
            return {TxViolation::expired_input, "transaction predates input record"};
        in_value[in.origin_era] += evaluate_output_value(in, tx.era, lifetime);
    }
    for (const CoinOutput& out : tx.outputs) {
        if (out.recorded_era != tx.era || out.recorded_value < 0 ||
            out.recorded_era - out.origin_era >= lifetime || out.origin_era > tx.era)
            return {TxViolation::malformed_output, "output not recorded at tx era"};
        out_value[out.origin_era] += out.recorded_value;
    }
    std::set<long> origins;
    for (auto& [era, v] : in_value) origins.insert(era);
    for (auto& [era, v] : out_value) origins.insert(era);
    if (origins.size() > static_cast<size_t>(max_groups))
        return {TxViolation::group_overflow,
                std::to_string(origins.size()) + " origin-era groups (max " +
                    std::to_string(max_groups) + ")"};
    for (long era : origins) {
        Amount in = in_value.count(era) ? in_value[era] : 0;
        Amount out = out_value.count(era) ? out_value[era] : 0;
        if (in != out)
            return {TxViolation::conservation_violation,
                    "origin era " + std::to_string(era) + ": in " + format_coins(in) +
                        " != out " + format_coins(out)};
    }
    return {};
}

inline std::vector<OutputId> apply_transaction(UtxoView& view, const DepTransaction& tx,
                                               long lifetime = 100, int max_groups = 100) {
    TxCheck check = validate_transaction(tx, view, lifetime, max_groups);
    if (!check.ok())
        throw std::invalid_argument(std::string("apply_transaction: ") + to_string(check.violation) +
                                    ": " + check.detail);
    for (OutputId id : tx.inputs) view.spend(id);
    std::vector<OutputId> ids;
    ids.reserve(tx.outputs.size());
    for (const CoinOutput& out : tx.outputs) ids.push_back(view.add(out, lifetime));
    return ids;
}

// ---- snapshots ----------------------------------------------------------------
// Line format, one output per line, sorted for stable golden files:
//   origin_era, recorded_era, recorded_value, owner

inline std::string serialize_snapshot(const UtxoView& view) {
    std::vector<CoinOutput> outs;
    outs.reserve(view.size());
    for (auto& [id, out] : view.live()) outs.push_back(out);
    std::sort(outs.begin(), outs.end(), [](const CoinOutput& a, const CoinOutput& b) {
        return std::tie(a.origin_era, a.recorded_era, a.owner, a.recorded_value) <
               std::tie(b.origin_era, b.recorded_era, b.owner, b.recorded_value);
    });
    std::string text;
    for (const CoinOutput& out : outs) {
        text += std::to_string(out.origin_era) + ", " + std::to_string(out.recorded_era) + ", " +
                format_coins(out.recorded_value) + ", " + out.owner + "\n";
    }
    return text;
}

inline UtxoView parse_snapshot(const std::string& text, long lifetime = 100) {
    UtxoView view;
    size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line.empty()) continue;
        CoinOutput out;
        char owner[256] = {0};
        long long origin, recorded;
        long long whole;
        unsigned long long frac;
        if (std::sscanf(line.c_str(), "%lld, %lld, %lld.%8llu, %255[^\n]", &origin, &recorded,
                        &whole, &frac, owner) != 5)
            throw std::invalid_argument("parse_snapshot: bad line " + std::to_string(line_no));
        out.origin_era = origin;
        out.recorded_era = recorded;
        out.recorded_value = whole * kCoin + static_cast<Amount>(frac);
        out.owner = owner;
        view.add(out, lifetime);
    }
    return view;
}

}  // namespace stablesim
