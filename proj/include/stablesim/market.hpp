#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "amounts.hpp"
#include "chain.hpp"
#include "economics.hpp"
#include "ledger.hpp"
#include "rng.hpp"

namespace stablesim {

// Agent market: speculators + common traders + one aggregated miner, meeting in
// a daily call auction at the posted price. Coin quantities are integer base
// units throughout so the day-by-day conservation identities hold exactly.

enum class CurrencyMode { fixed_supply, stabilized };

struct MarketConfig {
    CurrencyMode mode = CurrencyMode::stabilized;
    int days = 3650;
    double initial_price = 652.0;
    double alpha = 1e-4;             // price impact per unit of excess demand
    double price_floor = 0.01;       // one tick; price never reaches zero
    double buy_probability = 0.52;   // random-order side bias
    double trade_intensity = 0.5;    // P(random order) = this * sensitivity
    double behavior_intensity = 0.5; // P(band rules consulted) = this * sensitivity
    int speculators = 500;
    int commons = 1000;
    double speculator_coins = 10'000'000.0;  // split evenly within the set
    double common_coins = 5'750'000.0;
    bool behavioral_enabled = true;  // ablation switch used by tests

    double initial_miners = 1000.0;  // M0
    double miner_floor = 100.0;
    double hash_rate = 1.0;          // h
    double reachability = 0.1;       // g0
    double initial_reward = 12.5;    // V0
    double unit_cost = 815.0;        // C_m
    int blocks_per_day = 144;        // reference cadence at M0*h*g0

    bool halving_enabled = true;     // fixed-supply mode
    long halving_interval = 210'000; // blocks between reward halvings

    PolicyConfig policy;             // stabilized mode
    int era_days = 14;               // one depreciation era per 14 days
    long lifetime_eras = 100;        // coins die 100 eras after minting

    long lifetime_days() const { return static_cast<long>(era_days) * lifetime_eras; }

    void validate() const {
        if (days <= 0 || speculators < 0 || commons < 0)
            throw std::invalid_argument("MarketConfig: days must be positive, trader counts >= 0");
        if (!(initial_price > 0) || !(alpha > 0) || !(price_floor > 0))
            throw std::invalid_argument("MarketConfig: price/alpha fields must be positive");
        if (!(buy_probability > 0) || !(buy_probability < 1) || !(trade_intensity > 0) ||
            trade_intensity > 1 || behavior_intensity < 0 || behavior_intensity > 1)
            throw std::invalid_argument("MarketConfig: probabilities out of range");
        if (speculator_coins < 0 || common_coins < 0)
            throw std::invalid_argument("MarketConfig: negative endowment");
        if (!(initial_miners >= miner_floor) || !(miner_floor > 0))
            throw std::invalid_argument("MarketConfig: miners below floor");
        if (!(hash_rate > 0) || !(reachability > 0) || reachability > 1 ||
            !(initial_reward > 0) || !(unit_cost > 0) || blocks_per_day <= 0)
            throw std::invalid_argument("MarketConfig: bad mining economy");
        if (era_days <= 0 || lifetime_eras <= 0 || halving_interval <= 0)
            throw std::invalid_argument("MarketConfig: bad era/halving setup");
        policy.validate();
    }
};

// ---- holdings -----------------------------------------------------------------

struct Cell {
    int origin_day;   // day the coins were minted (0 for non-depreciating runs)
    Amount value;     // current effective units
};

// Per-holder balance, bucketed by origin day. Daily decay removes
// value/(lifetime - age + 1) from each cell, which lands exactly on zero at
// expiry no matter how the cell was split or merged along the way.
class Portfolio {
  public:
    Amount total() const { return total_; }
    const std::vector<Cell>& cells() const { return cells_; }

    void deposit(int origin_day, Amount value) {
        if (value < 0) throw std::domain_error("Portfolio::deposit: negative");
        if (value == 0) return;
        total_ += value;
        auto it = std::lower_bound(cells_.begin(), cells_.end(), origin_day,
                                   [](const Cell& c, int day) { return c.origin_day < day; });
        if (it != cells_.end() && it->origin_day == origin_day)
            it->value += value;
        else
            cells_.insert(it, Cell{origin_day, value});
    }

    // Oldest coins go first; sellers shed the value closest to expiry.
    void withdraw_into(Amount value, std::vector<Cell>& out) {
        if (value < 0 || value > total_) throw std::domain_error("Portfolio::withdraw: bad amount");
        total_ -= value;
        size_t used = 0;
        for (Cell& c : cells_) {
            if (value == 0) break;
            Amount take = c.value < value ? c.value : value;
            out.push_back(Cell{c.origin_day, take});
            c.value -= take;
            value -= take;
            if (c.value == 0) ++used;
        }
        if (used) cells_.erase(cells_.begin(), cells_.begin() + used);
    }

    // One day of decay as of `today`. Returns the value written off.
    Amount depreciate(int today, long lifetime_days) {
        Amount gone = 0;
        for (Cell& c : cells_) {
            long age = today - c.origin_day;
            if (age <= 0) continue;
            long remaining = lifetime_days - age + 1;  // days of value left, incl. today
            Amount dec = remaining <= 1 ? c.value
                                        : div_round_half_down(c.value, remaining);
            c.value -= dec;
            gone += dec;
        }
        total_ -= gone;
        if (gone)
            cells_.erase(std::remove_if(cells_.begin(), cells_.end(),
                                        [](const Cell& c) { return c.value == 0; }),
                         cells_.end());
        return gone;
    }

  private:
    std::vector<Cell> cells_;  // ascending origin_day
    Amount total_ = 0;
};

// ---- traders and orders ---------------------------------------------------------

inline constexpr int kMinerId = -1;

struct Trader {
    bool speculator = false;
    double sensitivity = 0.5;  // u^s in (0,1]
    double ref_price = 0.0;    // u^p
    double prev_ref = 0.0;     // u^pp, one step older reference (speculators)
    Amount order_basis = 0;    // the balance association every order is sized
                               // from; what a sell actually delivers is capped
                               // at real holdings when fills settle
    Portfolio coins;
};

struct OrderIntent {
    bool buy;
    Amount quantity;
};

struct Order {
    int trader;  // kMinerId for the aggregated miner
    bool buy;
    Amount quantity;
};

// Random daily churn. Participation scales with sensitivity; conditional on
// trading, the side leans to buys (unlimited outside fiat), and the size is a
// fifth of the trader's associated balance scaled by sensitivity. Sizing from
// the fixed association keeps the flow stationary; what a seller can actually
// deliver is capped against holdings when fills settle.
inline std::optional<OrderIntent> random_order(Trader& t, Rng& rng, double buy_probability,
                                               double trade_intensity) {
    if (uniform01(rng) >= trade_intensity * t.sensitivity) return std::nullopt;
    bool buy = uniform01(rng) < buy_probability;
    Amount q = static_cast<Amount>(
        std::llround(0.2 * t.sensitivity * static_cast<double>(t.order_basis)));
    if (q <= 0) return std::nullopt;
    return OrderIntent{buy, q};
}

// Speculators fade moves beyond their tolerance band and replace references
// afterward — except after a crash, when buying the dip leaves both references
// frozen so the band doesn't chase the falling price.
inline std::optional<OrderIntent> speculator_order(Trader& t, double price) {
    double half_band = t.sensitivity / 2.0;
    Amount q = static_cast<Amount>(
        std::llround(0.8 * t.sensitivity * static_cast<double>(t.order_basis)));
    if (q <= 0) return std::nullopt;
    if (price < t.prev_ref * (1.0 - half_band) / 2.0) {
        return std::optional<OrderIntent>{OrderIntent{true, q}};
    }
    if (price > t.ref_price * (1.0 + half_band)) {
        t.prev_ref = t.ref_price;
        t.ref_price = price;
        return std::optional<OrderIntent>{OrderIntent{false, q}};
    }
    if (price < t.ref_price * (1.0 - half_band)) {
        t.prev_ref = t.ref_price;
        t.ref_price = price;
        return std::optional<OrderIntent>{OrderIntent{true, q}};
    }
    return std::nullopt;
}

// Common traders chase the move instead of fading it.
inline std::optional<OrderIntent> common_trader_order(Trader& t, double price) {
    double half_band = t.sensitivity / 2.0;
    Amount q = static_cast<Amount>(
        std::llround(0.8 * t.sensitivity * static_cast<double>(t.order_basis)));
    if (q <= 0) return std::nullopt;
    if (price > t.ref_price * (1.0 + half_band)) {
        t.ref_price = price;
        return std::optional<OrderIntent>{OrderIntent{true, q}};
    }
    if (price < t.ref_price * (1.0 - half_band)) {
        t.ref_price = price;
        return std::optional<OrderIntent>{OrderIntent{false, q}};
    }
    return std::nullopt;
}

// The aggregated miner offers everything it holds, every day.
inline std::optional<Order> miner_order(Amount balance) {
    if (balance <= 0) return std::nullopt;
    return Order{kMinerId, false, balance};
}

// ---- matching -------------------------------------------------------------------

struct Fill {
    int trader;
    Amount quantity;
};

struct MatchResult {
    Amount demand = 0;
    Amount supply = 0;
    Amount executed = 0;            // min(demand, supply)
    std::vector<Fill> sell_fills;   // deterministic settlement order
    std::vector<Fill> buy_fills;
};

// Single-price call auction. The short side clears in full; the long side is
// rationed miner-first, then smaller orders first, ties by trader index.
inline MatchResult match_orders(const std::vector<Order>& orders) {
    MatchResult r;
    std::vector<Order> buys, sells;
    for (const Order& o : orders) {
        if (o.quantity < 0) throw std::domain_error("match_orders: negative quantity");
        if (o.quantity == 0) continue;
        (o.buy ? buys : sells).push_back(o);
        (o.buy ? r.demand : r.supply) += o.quantity;
    }
    r.executed = r.demand < r.supply ? r.demand : r.supply;
    auto priority = [](const Order& a, const Order& b) {
        bool am = a.trader == kMinerId, bm = b.trader == kMinerId;
        if (am != bm) return am;
        if (a.quantity != b.quantity) return a.quantity < b.quantity;
        return a.trader < b.trader;
    };
    std::sort(buys.begin(), buys.end(), priority);
    std::sort(sells.begin(), sells.end(), priority);
    auto fill_side = [](std::vector<Order>& side, Amount budget, std::vector<Fill>& out) {
        for (const Order& o : side) {
            Amount take = o.quantity < budget ? o.quantity : budget;
            if (take > 0) out.push_back(Fill{o.trader, take});
            budget -= take;
        }
    };
    fill_side(sells, r.executed, r.sell_fills);
    fill_side(buys, r.executed, r.buy_fills);
    return r;
}

// Linear price impact with a half-price cap per day and a one-tick floor.
inline double update_price(double price, Amount demand, Amount supply, double alpha,
                           double floor = 0.01) {
    double delta = alpha * to_coins(demand - supply);
    double cap = price / 2.0;
    if (delta > cap) delta = cap;
    if (delta < -cap) delta = -cap;
    double next = price + delta;
    return next < floor ? floor : next;
}

// ---- the daily loop ---------------------------------------------------------------

struct DayStats {
    int day = 0;             // 1-based
    double price = 0.0;      // after the day's update
    Amount demand = 0;
    Amount supply = 0;
    Amount transacted = 0;
    double miners = 0.0;     // after entry/exit
    double reachability = 0.0;
    double reward = 0.0;
    Amount total_coins = 0;  // every portfolio, incl. the miner pool
    Amount minted = 0;
    Amount depreciated = 0;
    long chain_height = -1;
};

class Market {
  public:
    Market(const MarketConfig& cfg, uint64_t seed) : cfg_(cfg), rng_(seed) {
        cfg_.validate();
        price_ = cfg_.initial_price;
        miners_m_ = cfg_.initial_miners;
        btc_reward_ = cfg_.initial_reward;
        btc_g_ = cfg_.reachability;
        init_traders();
        if (cfg_.mode == CurrencyMode::stabilized) {
            chain_.emplace(cfg_.policy, cfg_.reachability, cfg_.initial_reward,
                           derive_seed(seed, 0xC0DE), IntervalMode::expected);
            day_ledger_.emplace(cfg_.lifetime_days());
            // endowments count as day-0 coinage, so the aggregate ledger covers
            // every circulating unit, not just mined ones
            day_ledger_->mint(0, total_units_);
        }
    }

    DayStats step() {
        DayStats st;
        st.day = day_ + 1;
        // the aggregate ledger enters today before any coin moves, mirroring
        // the per-portfolio decay below
        if (day_ledger_ && day_ledger_->current_era() < day_) day_ledger_->advance_era();
        st.minted = mine_day();
        if (cfg_.mode == CurrencyMode::stabilized) {
            st.depreciated = depreciate_all();
        }
        std::vector<Order> orders = collect_orders();
        MatchResult m = match_orders(orders);
        Amount moved = settle(m);
        price_ = update_price(price_, m.demand, m.supply, cfg_.alpha, cfg_.price_floor);
        MiningEconomy econ{miners_m_, cfg_.hash_rate, current_reachability(), current_reward(),
                           cfg_.unit_cost, cfg_.miner_floor};
        miners_m_ = miner_entry_exit_step(econ, price_);
        if (cfg_.mode == CurrencyMode::fixed_supply) {
            // instant difficulty retarget: cadence stays at blocks_per_day
            btc_g_ = cfg_.reachability * cfg_.initial_miners / miners_m_;
            if (btc_g_ > 1.0) btc_g_ = 1.0;
        }
        ++day_;
        st.price = price_;
        st.demand = m.demand;
        st.supply = m.supply;
        st.transacted = moved;
        st.miners = miners_m_;
        st.reachability = current_reachability();
        st.reward = current_reward();
        st.total_coins = total_units_;
        st.chain_height = chain_ ? chain_->height() : btc_blocks_ - 1;
        return st;
    }

    std::vector<DayStats> run() {
        std::vector<DayStats> out;
        out.reserve(cfg_.days);
        for (int i = 0; i < cfg_.days; ++i) out.push_back(step());
        return out;
    }

    double price() const { return price_; }
    double miners() const { return miners_m_; }
    int day() const { return day_; }
    double current_reward() const { return chain_ ? chain_->reward() : btc_reward_; }
    double current_reachability() const { return chain_ ? chain_->reachability() : btc_g_; }
    Amount total_coins() const { return total_units_; }
    Amount miner_balance() const { return miner_.total(); }
    const std::vector<Trader>& traders() const { return traders_; }
    Trader& trader(size_t i) { return traders_[i]; }
    const ChainState* chain() const { return chain_ ? &*chain_ : nullptr; }
    const EraSupplyLedger* supply_ledger() const { return day_ledger_ ? &*day_ledger_ : nullptr; }

    // Recomputed from scratch; tests compare against the running total.
    Amount audited_total() const {
        Amount s = miner_.total();
        for (const Trader& t : traders_) s += t.coins.total();
        return s;
    }

  private:
    void init_traders() {
        traders_.reserve(cfg_.speculators + cfg_.commons);
        auto endow = [&](int count, double coins, bool speculator) {
            if (count == 0) return;
            Amount pool = to_units(coins);
            Amount each = pool / count;
            Amount extra = pool - each * count;  // front traders absorb remainders
            for (int i = 0; i < count; ++i) {
                Trader t;
                t.speculator = speculator;
                t.sensitivity = static_cast<double>(i + 1) / count;
                t.ref_price = t.prev_ref = cfg_.initial_price;
                Amount v = each + (i < extra ? 1 : 0);
                t.order_basis = v;
                t.coins.deposit(0, v);
                total_units_ += v;
                traders_.push_back(std::move(t));
            }
        };
        endow(cfg_.speculators, cfg_.speculator_coins, true);
        endow(cfg_.commons, cfg_.common_coins, false);
    }

    Amount mine_day() {
        Amount minted = 0;
        if (cfg_.mode == CurrencyMode::fixed_supply) {
            for (int b = 0; b < cfg_.blocks_per_day; ++b) {
                if (cfg_.halving_enabled && btc_blocks_ > 0 &&
                    btc_blocks_ % cfg_.halving_interval == 0)
                    btc_reward_ /= 2.0;
                minted += to_units(btc_reward_);
                ++btc_blocks_;
            }
        } else {
            double day_end = (day_ + 1) * 1440.0;
            double hpr = miners_m_ / cfg_.initial_miners;  // (M*h)/(M0*h0), h constant
            while (true) {
                double mult = hpr * (chain_->reachability() / cfg_.reachability);
                double interval = cfg_.policy.theta_ref / mult;
                if (chain_->clock_minutes() + interval > day_end) break;
                const BlockHeader& b = chain_->mine_block(hpr);
                minted += to_units(b.reward);
            }
        }
        miner_.deposit(day_ledger_ ? day_ : 0, minted);
        total_units_ += minted;
        if (day_ledger_) day_ledger_->mint(day_, minted);
        return minted;
    }

    Amount depreciate_all() {
        Amount gone = miner_.depreciate(day_, cfg_.lifetime_days());
        for (Trader& t : traders_) gone += t.coins.depreciate(day_, cfg_.lifetime_days());
        total_units_ -= gone;
        return gone;
    }

    std::vector<Order> collect_orders() {
        std::vector<Order> orders;
        orders.reserve(traders_.size() + 1);
        if (auto mo = miner_order(miner_.total())) orders.push_back(*mo);
        for (int i = 0; i < static_cast<int>(traders_.size()); ++i) {
            Trader& t = traders_[i];
            Amount buy = 0, sell = 0;
            if (auto r = random_order(t, rng_, cfg_.buy_probability, cfg_.trade_intensity))
                (r->buy ? buy : sell) += r->quantity;
            if (cfg_.behavioral_enabled &&
                uniform01(rng_) < cfg_.behavior_intensity * t.sensitivity) {
                auto b = t.speculator ? speculator_order(t, price_) : common_trader_order(t, price_);
                if (b) (b->buy ? buy : sell) += b->quantity;
            }
            if (buy > 0) orders.push_back(Order{i, true, buy});
            if (sell > 0) orders.push_back(Order{i, false, sell});
        }
        return orders;
    }

    // Orders are intentions and only the price listens to them in full;
    // settlement moves real coins. Each filled seller delivers up to its
    // holdings, and buyers receive (in rationing order) what actually arrived.
    // Returns the amount that changed hands.
    Amount settle(const MatchResult& m) {
        pool_.clear();
        Amount delivered = 0;
        for (const Fill& f : m.sell_fills) {
            Portfolio& p = f.trader == kMinerId ? miner_ : traders_[f.trader].coins;
            Amount have = p.total();
            Amount q = f.quantity < have ? f.quantity : have;
            p.withdraw_into(q, pool_);
            delivered += q;
        }
        size_t pi = 0;
        for (const Fill& f : m.buy_fills) {
            Amount need = f.quantity;
            Portfolio& p = traders_[f.trader].coins;
            while (need > 0 && pi < pool_.size()) {
                Cell& c = pool_[pi];
                Amount take = c.value < need ? c.value : need;
                p.deposit(c.origin_day, take);
                c.value -= take;
                need -= take;
                if (c.value == 0) ++pi;
            }
        }
        return delivered;
    }

    MarketConfig cfg_;
    Rng rng_;
    std::vector<Trader> traders_;
    Portfolio miner_;
    std::vector<Cell> pool_;  // scratch for settlement
    double price_ = 0.0;
    double miners_m_ = 0.0;
    double btc_reward_ = 0.0;
    double btc_g_ = 0.0;
    long btc_blocks_ = 0;
    int day_ = 0;
    Amount total_units_ = 0;
    std::optional<ChainState> chain_;
    std::optional<EraSupplyLedger> day_ledger_;
};

}  // namespace stablesim
