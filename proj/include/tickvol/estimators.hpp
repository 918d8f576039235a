#pragma once

#include <optional>

#include "tickvol/marketdata.hpp"

namespace tickvol::est {

/// Square-root-of-time scaling of a standard deviation measured over dT
/// seconds to an arbitrary horizon t.
double scale_sigma(double sigma_dT, double dT_seconds, double t_seconds);

/// Characteristic time (seconds) for the price to diffuse across one
/// average spread: dT * (avg_spread / price_std)^2.
double t_price(const md::WindowAggregate& agg);

/// Probability that traded volume participates in depleting the queue at
/// or below the initial touch, as a function of the spread in ticks:
/// P(n) = (1 + exp(-(n-1)/sqrt(n))) / 2. Strictly decreasing, P(1) = 1,
/// P(inf) = 1/2.
double correction_coefficient(double spread_ticks);

/// avg_spread / tick_size, clamped to >= 1 by default (sub-tick averages
/// can arise from time-weighted averaging).
double spread_in_ticks(const md::WindowAggregate& agg, const md::InstrumentSpec& spec,
                       bool clamp = true);

/// Characteristic time (seconds) for one-sided trading to work through
/// the average displayed queue, corrected for wide spreads:
/// dT * (avg_bid_vol + avg_ask_vol) / traded_volume / P(n).
double t_volume(const md::WindowAggregate& agg, const md::InstrumentSpec& spec);

/// Volume traded on one side of the market during t seconds assuming the
/// window's trading rate: (t/2) * traded_volume / dT.
double one_sided_volume(double t_seconds, const md::WindowAggregate& agg);

/// Market invariant gamma = sqrt(T_Volume / T_Price), computed in its
/// directly measurable form:
/// (price_std/avg_spread) * sqrt((V_bid+V_ask)/V_traded) * sqrt(1/P(n)).
double gamma(const md::WindowAggregate& agg, const md::InstrumentSpec& spec);

struct EstimatorConfig {
    bool clamp_spread_ticks = true;
    /// Use the window's last trade price instead of the average price in
    /// the instantaneous-volatility denominator (snapshot variant).
    bool use_last_trade_price = false;
};

/// Instantaneous volatility over the aggregate's window, as a fractional
/// return: (spread/price) * sqrt(V_traded/(V_bid+V_ask)) * sqrt(P(n)).
/// Zero when the window printed no trades.
double instantaneous_volatility(const md::WindowAggregate& agg,
                                const md::InstrumentSpec& spec,
                                const EstimatorConfig& cfg = {});

struct AnnualizationConfig {
    double sessions_per_year = 252.0;
    double session_seconds = 23'400.0;  // 6.5 h
};

/// Scale a per-window fractional volatility to annualized terms.
double annualize(double sigma_window, double dT_seconds, const AnnualizationConfig& cal);

/// Probability that a touch-level limit order fills within T_Price on a
/// binary random walk: 1 - erf(1/sqrt(2)) ~ 0.3173.
double passive_fill_probability();

/// Derived quantities for one window. Fields are empty where the paper's
/// formulas are undefined (no trades, static price, empty book).
struct EstimateSet {
    std::optional<double> t_price;
    std::optional<double> t_volume;
    double spread_ticks = 0.0;
    double correction = 1.0;
    std::optional<double> gamma;
    std::optional<double> sigma_inst;
    std::size_t source_window = 0;  // index into the aggregate sequence
};

/// Evaluate every estimator on one aggregate, mapping precondition
/// violations to empty fields instead of errors.
EstimateSet estimate(const md::WindowAggregate& agg, const md::InstrumentSpec& spec,
                     std::size_t source_window = 0, const EstimatorConfig& cfg = {});

}  // namespace tickvol::est
