#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "tickvol/marketdata.hpp"

namespace tickvol::fcast {

/// Fixed-interval log returns with overnight gaps excised: no return in
/// `returns` spans a day boundary. day_starts[i] is the index of day i's
/// first return.
struct ReturnSeries {
    double interval_seconds = 0.0;
    std::vector<double> returns;
    std::vector<std::size_t> day_starts;  // one entry per day, ascending

    std::size_t n_days() const { return day_starts.size(); }
};

/// Sample the prevailing mid quote on an interval grid inside each
/// session and difference the logs. Intervals with no prevailing quote
/// yet (session warm-up) are skipped.
ReturnSeries build_return_series(std::span<const md::QuoteEvent> quotes,
                                 const md::InstrumentSpec& spec,
                                 double interval_seconds);

enum class Per : std::uint8_t { day, window };

/// Realized volatility sqrt(sum r^2): one value per day (Per::day) or
/// |r| per interval (Per::window). Sums never cross day boundaries.
std::vector<double> realized_volatility(const ReturnSeries& series, Per per);

/// Daily close-to-close log returns from the last in-session trade of
/// each day. Days without trades are skipped.
std::vector<double> daily_close_returns(std::span<const md::TradeEvent> trades,
                                        const md::InstrumentSpec& spec);

struct GarchModel {
    double omega = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double loglik = 0.0;
    double h0 = 0.0;  // initial conditional variance

    double unconditional_variance() const { return omega / (1.0 - alpha - beta); }
};

/// Thrown when the optimizer hits its iteration cap; carries the best
/// parameters seen so far.
struct GarchFitError : std::runtime_error {
    GarchModel best;
    explicit GarchFitError(const std::string& msg, GarchModel m)
        : std::runtime_error(msg), best(m) {}
};

struct GarchFitOptions {
    int max_iterations = 4000;
    double loglik_tolerance = 1e-8;
};

/// Gaussian quasi-maximum-likelihood fit of GARCH(1,1) under
/// omega > 0, alpha, beta >= 0, alpha + beta < 1. Initialized by variance
/// targeting (alpha 0.05, beta 0.90). Requires at least 100 returns.
GarchModel fit_garch11(std::span<const double> returns, const GarchFitOptions& opts = {});

/// One-step-ahead conditional variance: omega + alpha r^2 + beta h.
double garch_forecast_one_step(const GarchModel& model, double r, double h);

/// Conditional variance path h_t for a return series under the model
/// (h[0] = model.h0, h[t+1] = forecast(r[t], h[t])); size = n+1.
std::vector<double> garch_variance_path(const GarchModel& model,
                                        std::span<const double> returns);

/// Mean squared error between two volatility series over the
/// non-excluded indices. Throws DomainError on length mismatch.
double mse_compare(std::span<const double> realized, std::span<const double> candidate,
                   const std::set<std::size_t>& exclusions = {});

/// One Table-3-style grid cell: sigma_xi of normalized returns
/// xi = r_forecast / (sigma_I over trailing history, sqrt-time scaled).
struct XiCell {
    double history_seconds = 0.0;
    double forecast_seconds = 0.0;
    std::vector<double> xi;
    double sigma_xi = 0.0;
    std::size_t n_obs = 0;
    std::size_t n_skipped = 0;  // zero-forecast observations
};

/// Evaluate one (history, forecast) cell on a base-interval grid.
/// sigma_inst must hold the instantaneous volatility of each base
/// interval, aligned with series.returns. Durations must be multiples of
/// the base interval with history <= forecast.
XiCell xi_evaluation(const ReturnSeries& series, std::span<const double> sigma_inst,
                     double history_seconds, double forecast_seconds);

}  // namespace tickvol::fcast
