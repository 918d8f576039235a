#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tickvol::stats {

double mean(std::span<const double> xs);
double sample_std(std::span<const double> xs);  // n-1 denominator

/// Standard normal CDF / inverse CDF (Wichura's AS 241, double precision).
double normal_cdf(double z);
double normal_quantile(double p);

/// Survival function of the asymptotic Kolmogorov distribution.
double kolmogorov_survival(double t);

enum class Method : std::uint8_t { shapiro_wilk, kolmogorov_smirnov, lilliefors_mc };

struct TestReport {
    double statistic = 0.0;
    double p_value = 1.0;
    Method method = Method::shapiro_wilk;
    bool reject_at_005 = false;
};

/// Shapiro-Wilk W test (Royston's AS R94 approximation), 3 <= n <= 5000.
/// Throws DomainError on out-of-range n or a zero-variance sample.
TestReport shapiro_wilk(std::span<const double> sample);

enum class KsMode : std::uint8_t {
    fixed_params,        // compare against N(mean, std) given or estimated, classical p
    estimated_params_mc  // Lilliefors: p corrected for estimation by Monte Carlo
};

struct KsOptions {
    KsMode mode = KsMode::estimated_params_mc;
    /// Reference parameters for fixed_params mode; NaN = estimate from sample.
    double mean = std::numeric_limits<double>::quiet_NaN();
    double stddev = std::numeric_limits<double>::quiet_NaN();
    int mc_resamples = 2000;
    std::uint64_t seed = 1;
};

/// One-sample Kolmogorov-Smirnov D against a normal distribution.
TestReport ks_normality(std::span<const double> sample, const KsOptions& opts = {});

/// Pearson correlation coefficient; throws DomainError on zero variance.
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

/// Two-sided one-sample t-test p-value for mean == mu0.
double t_test_mean_p(std::span<const double> sample, double mu0);

/// One gamma sample (typically one value per day, or one per instrument).
struct GammaSample {
    std::vector<double> values;
    double mean = 0.0;
    double std = 0.0;
    std::size_t n = 0;
};

GammaSample make_gamma_sample(std::span<const double> values);

/// Per-instrument daily series, aligned by day.
struct InstrumentDays {
    std::string name;
    std::vector<double> gamma;
    std::vector<double> t_price;   // seconds
    std::vector<double> t_volume;  // seconds
    std::vector<double> volume;    // traded volume, for the activity filter
};

struct ReportFilters {
    /// Keep instruments whose mean T_Price is below this bound (liquidity
    /// filter; 900 s = 15 min). <= 0 disables.
    double max_t_price_seconds = 900.0;
    /// Keep only days with traded volume above this fraction of the
    /// instrument's maximum day (derivatives activity filter). 0 disables.
    double min_volume_fraction = 0.0;
};

struct ReportOptions {
    ReportFilters filters;
    KsMode ks_mode = KsMode::estimated_params_mc;
    int mc_resamples = 2000;
    std::uint64_t seed = 1;
};

struct ReportRow {
    std::string group;
    std::size_t count = 0;          // days (per-instrument) or instruments (cross-section)
    double mean_t_price = 0.0;      // seconds
    double mean_gamma = 0.0;
    double std_gamma = 0.0;
    double correlation = 0.0;       // corr(T_Price, T_Volume) over the sample
    double sw_p = 0.0;
    double ks_p = 0.0;
    double t_p = 0.0;               // strong-null test of mean gamma == 1
};

/// One row per instrument; the sample is the instrument's filtered days.
/// Throws DomainError when every instrument is filtered out.
std::vector<ReportRow> invariant_report(std::span<const InstrumentDays> instruments,
                                        const ReportOptions& opts = {});

/// One row for a group of instruments; the sample is per-instrument mean
/// gammas and the correlation runs across instruments (index style).
ReportRow cross_section_report(std::span<const InstrumentDays> instruments,
                               const std::string& group_name,
                               const ReportOptions& opts = {});

void write_report_csv(std::span<const ReportRow> rows, const std::string& path);
void write_report_json(std::span<const ReportRow> rows, const std::string& path);

}  // namespace tickvol::stats
