#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "tickvol/marketdata.hpp"

namespace tickvol::sim {

/// Synthetic market parameters. The mid price performs a binary random
/// walk on the tick grid (one +-1 tick step every step_seconds), quotes
/// keep a constant spread of spread_ticks with sizes resampled around
/// book_depth_per_level, and trades arrive as a Poisson stream split
/// evenly between the bid and ask sides.
struct SimConfig {
    std::uint64_t seed = 1;
    double session_length = 23'400.0;   // seconds
    double tick_size = 0.01;
    double initial_price = 100.0;
    double true_sigma = 0.05;           // price std per sqrt(window_seconds)
    double trade_rate = 0.5;            // trades per second
    double mean_trade_size = 10.0;      // shares, geometric
    double book_depth_per_level = 100.0;
    int spread_ticks = 1;
    int n_days = 1;
    double window_seconds = 300.0;      // reference window for true_sigma
    /// Scale of the exponential decay of print distance from the touch,
    /// in units of sqrt(spread_ticks); 0 pins every print to the touch.
    double inside_print_decay = 0.5;
    std::string symbol = "SIM";
    std::string session_open = "08:00:00";
    int price_decimals = 2;

    /// Seconds between walk steps so the mid's std over window_seconds
    /// equals true_sigma: step = tick_size^2 * window / sigma^2.
    double step_seconds() const;
    void validate() const;  // throws ConfigError
};

SimConfig load_sim_config(const std::string& path);
void save_sim_config(const SimConfig& cfg, const std::string& path);

struct MarketData {
    std::vector<md::QuoteEvent> quotes;
    std::vector<md::TradeEvent> trades;
    md::InstrumentSpec spec;
};

/// Generate n_days sessions of quotes and trades. Deterministic per seed;
/// all prices lie on the tick grid and trade timestamps strictly increase.
MarketData generate_market(const SimConfig& config);

/// Write a generated market to `<dir>/quotes.csv`, `<dir>/trades.csv`,
/// `<dir>/instrument.json`.
void write_market(const MarketData& market, const std::string& dir);

/// Adjust trade_rate so that the analytic T_Price equals the analytic
/// corrected T_Volume, i.e. the generated market satisfies gamma = 1 by
/// construction. Throws ConfigError when the required rate is not positive.
SimConfig calibrate_equilibrium(const SimConfig& config);

/// Per-run outcome of the passive-fill measurement.
struct FillSimResult {
    double spread_ticks = 0.0;       // average spread in ticks over the run
    double measured_fraction = 0.0;  // at-or-below-touch volume / one-sided volume
    std::int64_t n_orders = 0;
    double fill_rate = 0.0;
};

struct HorizonPolicy {
    enum class Kind : std::uint8_t {
        eq6_t_volume,    // corrected characteristic time measured from the data
        eq4_uncorrected, // same without the P(n) correction
        fixed_seconds,
    };
    Kind kind = Kind::eq6_t_volume;
    double fixed_seconds = 60.0;
    /// Idle gap between one order resolving and the next being placed.
    double refresh_gap_seconds = 0.0;  // <=0: one measurement horizon
};

/// Repeatedly place a zero-impact virtual buy order at the prevailing
/// best bid and count the volume trading at or below its initial touch
/// within the policy horizon. The queue starts at the displayed bid size
/// and is depleted by at-or-below trades and by observed size reductions
/// (attributed to trades first, then pro-rata as cancellations).
FillSimResult simulate_passive_fills(std::span<const md::QuoteEvent> quotes,
                                     std::span<const md::TradeEvent> trades,
                                     const md::InstrumentSpec& spec,
                                     const HorizonPolicy& policy = {});

}  // namespace tickvol::sim
