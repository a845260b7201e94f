#pragma once

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rng.hpp"

namespace stablesim {

// Block production + the two reward re-adjustment rules. Intervals are in
// minutes; a rate multiplier of 1 means blocks arrive at theta_ref on average.

struct PolicyConfig {
    double theta_ref = 10.0;        // reference mean interval, minutes
    double theta_min = 1.0;         // advisory floor; breach is a warning, not an error
    int detection_window = 100;     // tumbling window length, blocks
    int mtp_span = 11;              // timestamps per median-time-past
    long era_length = 2016;         // blocks per coinage era
    double positive_ratio = 0.5;    // speed-up response fires at theta_obs <= theta_ref * this
    double negative_ratio = 1.25;   // slow-down response fires at theta_obs >= theta_ref * this

    void validate() const {
        if (!(theta_ref > 0) || detection_window <= 0 || mtp_span <= 0 || era_length <= 0)
            throw std::invalid_argument("PolicyConfig: non-positive field");
        // ratios must leave a dead band between the two triggers; with that in
        // place a single theta_obs can never cross both thresholds at once.
        if (!(positive_ratio > 0) || !(positive_ratio < 1) || !(negative_ratio > 1))
            throw std::invalid_argument("PolicyConfig: need 0 < positive_ratio < 1 < negative_ratio");
    }
    // theta_min is advisory: callers may warn when the positive trigger sits below it.
    bool positive_trigger_above_theta_min() const {
        return theta_ref * positive_ratio > theta_min;
    }
};

inline long era_index(long height, long era_length) {
    if (height < 0 || era_length <= 0) throw std::domain_error("era_index: bad arguments");
    return height / era_length;
}

// One exponential inter-arrival at theta_ref / multiplier mean.
inline double sample_block_interval(Rng& rng, double rate_multiplier, double theta_ref = 10.0) {
    if (!(rate_multiplier > 0)) throw std::domain_error("sample_block_interval: multiplier must be > 0");
    return exponential(rng, theta_ref / rate_multiplier);
}

// Median of the last `span` timestamps. Upper middle for even spans, matching
// the usual median-time-past convention.
inline double median_time_past(const std::vector<double>& timestamps, int span = 11) {
    if (span <= 0) throw std::domain_error("median_time_past: span must be positive");
    if (timestamps.size() < static_cast<size_t>(span))
        throw std::domain_error("median_time_past: insufficient history");
    std::vector<double> last(timestamps.end() - span, timestamps.end());
    std::sort(last.begin(), last.end());
    return last[last.size() / 2];
}

// The re-adjustment rules, templated so tests can run them over exact rationals.
// Both scale reward and reachability by reciprocal factors, preserving V*g
// (the slow-down rule only breaks that once reachability hits its cap of 1).
template <typename S>
std::pair<S, S> positive_reward_adjustment(S reachability, S reward) {
    return {reachability / S(2), reward * S(2)};
}

template <typename S>
std::pair<S, S> negative_reward_adjustment(S reachability, S reward) {
    S g = reachability * S(5) / S(4);
    if (g > S(1)) g = S(1);
    return {g, reward * S(4) / S(5)};
}

enum class AdjustmentKind { none, positive, negative };

struct PolicyEvent {
    long height = -1;
    double theta_obs = 0.0;
    AdjustmentKind kind = AdjustmentKind::none;
};

struct BlockHeader {
    long height;
    double timestamp;
    double interval;
    double reachability;
    double reward;
    long era;
};

enum class IntervalMode { sampled, expected };

// Chain simulation. Holds just enough timestamp history for the tumbling
// detection window; callers wanting every header opt in via keep_headers.
class ChainState {
  public:
    ChainState(const PolicyConfig& cfg, double reachability, double reward, uint64_t seed,
               IntervalMode mode = IntervalMode::sampled, bool keep_headers = false)
        : cfg_(cfg), mode_(mode), rng_(seed), g_(reachability), v_(reward), g0_(reachability),
          keep_headers_(keep_headers) {
        cfg_.validate();
        if (!(g_ > 0) || g_ > 1.0 || !(v_ > 0))
            throw std::invalid_argument("ChainState: need 0 < reachability <= 1 and reward > 0");
    }

    // Mine one block. hash_power_ratio = (M*h) / (M0*h0): the demand-side rate
    // factor; reachability changes fold in on top of it automatically.
    const BlockHeader& mine_block(double hash_power_ratio = 1.0) {
        double mult = hash_power_ratio * (g_ / g0_);
        double interval = mode_ == IntervalMode::expected
                              ? cfg_.theta_ref / mult
                              : sample_block_interval(rng_, mult, cfg_.theta_ref);
        clock_ += interval;
        ++height_;
        times_.push_back(clock_);
        size_t need = static_cast<size_t>(cfg_.detection_window + cfg_.mtp_span);
        while (times_.size() > need) {
            times_.pop_front();
            ++first_kept_;
        }
        last_ = BlockHeader{height_, clock_, interval, g_, v_,
                            era_index(height_, cfg_.era_length)};
        if (keep_headers_) headers_.push_back(last_);
        if (++since_check_ >= cfg_.detection_window) {
            since_check_ = 0;
            if (history_spans_window()) run_check();
        }
        return last_;
    }

    double reachability() const { return g_; }
    double reward() const { return v_; }
    long height() const { return height_; }
    double clock_minutes() const { return clock_; }
    long blocks_since_check() const { return since_check_; }
    const std::vector<PolicyEvent>& events() const { return events_; }
    const std::vector<BlockHeader>& headers() const { return headers_; }
    const PolicyConfig& config() const { return cfg_; }

    bool history_spans_window() const {
        return height_ - first_kept_ + 1 >=
               static_cast<long>(cfg_.detection_window + cfg_.mtp_span);
    }

    // Mean interval over the last detection window: the median-time-past drift
    // across the window divided by its block count.
    double windowed_mean_interval() const {
        if (!history_spans_window())
            throw std::domain_error("windowed_mean_interval: insufficient history");
        return (mtp_at(height_) - mtp_at(height_ - cfg_.detection_window)) /
               static_cast<double>(cfg_.detection_window);
    }

    // Run the detection check now: at most one adjustment, counter reset either
    // way so windows tumble and never straddle an adjustment.
    PolicyEvent run_check() {
        double theta = windowed_mean_interval();  // throws when history is short
        since_check_ = 0;
        PolicyEvent ev{height_, theta, AdjustmentKind::none};
        if (theta <= cfg_.theta_ref * cfg_.positive_ratio) {
            std::tie(g_, v_) = positive_reward_adjustment(g_, v_);
            ev.kind = AdjustmentKind::positive;
        } else if (theta >= cfg_.theta_ref * cfg_.negative_ratio) {
            std::tie(g_, v_) = negative_reward_adjustment(g_, v_);
            ev.kind = AdjustmentKind::negative;
        }
        if (ev.kind != AdjustmentKind::none) events_.push_back(ev);
        return ev;
    }

  private:
    double mtp_at(long height) const {
        long lo = height - cfg_.mtp_span + 1;
        if (lo < first_kept_) throw std::domain_error("mtp_at: history trimmed");
        std::vector<double> span(times_.begin() + (lo - first_kept_),
                                 times_.begin() + (height - first_kept_ + 1));
        std::sort(span.begin(), span.end());
        return span[span.size() / 2];
    }

    PolicyConfig cfg_;
    IntervalMode mode_;
    Rng rng_;
    double g_, v_, g0_;
    long height_ = -1;
    double clock_ = 0.0;
    std::deque<double> times_;
    long first_kept_ = 0;
    long since_check_ = 0;
    std::vector<PolicyEvent> events_;
    bool keep_headers_;
    std::vector<BlockHeader> headers_;
    BlockHeader last_{};
};

// Convenience entry point for the tumbling check; propagates insufficient history.
inline PolicyEvent policy_tick(ChainState& chain) { return chain.run_check(); }

}  // namespace stablesim
