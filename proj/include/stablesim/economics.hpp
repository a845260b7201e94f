#pragma once

#include <stdexcept>

namespace stablesim {

// Mining economy snapshot. `miners` is real-valued: the daily 1% entry/exit steps
// compound, so forcing an integer would add drift the rules don't ask for.
struct MiningEconomy {
    double miners = 1000.0;        // M, active miner population
    double hash_rate = 1.0;        // h, hash rate per miner
    double reachability = 0.1;     // g, chance one hash attempt meets the target
    double reward = 12.5;          // V, coins per block
    double unit_cost = 815.0;      // C_m, daily cost of running one miner
    double miner_floor = 100.0;    // M never drops below this

    void validate() const {
        if (!(miners > 0) || !(hash_rate > 0) || !(reachability > 0) || reachability > 1.0 ||
            !(reward > 0) || !(unit_cost > 0) || !(miner_floor > 0))
            throw std::domain_error("MiningEconomy: fields must be positive, reachability <= 1");
    }
};

// Mean interval between blocks, in the same time unit as the hash cadence.
inline double mean_block_interval(const MiningEconomy& e) {
    double denom = e.miners * e.hash_rate * e.reachability;
    if (!(denom > 0)) throw std::domain_error("mean_block_interval: zero rate");
    return 1.0 / denom;
}

// Expected coins per unit hash rate per unit time: V*h*g. What one miner's
// single hash unit earns on average.
inline double expected_miner_benefit(const MiningEconomy& e) {
    return e.reward * e.hash_rate * e.reachability;
}

// Coins minted per unit time across the whole network: V*M*h*g = V/theta.
inline double aggregate_reward_rate(const MiningEconomy& e) {
    return e.reward * e.miners * e.hash_rate * e.reachability;
}

// Profit signal for one miner at coin price P: P*V*h*g - C_m. Zero means the
// market price exactly covers mining cost.
inline double equilibrium_gap(const MiningEconomy& e, double price) {
    return price * e.reward * e.hash_rate * e.reachability - e.unit_cost;
}

// One day of miner entry/exit: 1% toward whichever side the gap points,
// clamped at the floor. Gap exactly zero leaves M untouched.
inline double miner_entry_exit_step(const MiningEconomy& e, double price) {
    double gap = equilibrium_gap(e, price);
    if (gap > 0) return e.miners * 1.01;
    if (gap < 0) {
        double next = e.miners * 0.99;
        return next < e.miner_floor ? e.miner_floor : next;
    }
    return e.miners;
}

}  // namespace stablesim
