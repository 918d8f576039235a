#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tickvol::md {

constexpr std::int64_t kNsPerSec = 1'000'000'000;
constexpr std::int64_t kNsPerDay = 86'400 * kNsPerSec;

/// Static instrument metadata. Session bounds are times of day in
/// nanoseconds since midnight; timestamps in the streams are UTC
/// nanoseconds since epoch and map onto sessions by calendar day.
struct InstrumentSpec {
    std::string symbol;
    double tick_size = 0.01;
    std::int64_t session_open_ns = 0;    // time of day
    std::int64_t session_close_ns = 0;   // time of day, > session_open_ns
    int price_decimals = 2;

    double session_seconds() const {
        return static_cast<double>(session_close_ns - session_open_ns) /
               static_cast<double>(kNsPerSec);
    }
    /// Throws ConfigError if tick_size <= 0 or the session is empty.
    void validate() const;
};

/// Parse "HH:MM:SS" into nanoseconds since midnight.
std::int64_t parse_time_of_day(const std::string& hms);
std::string format_time_of_day(std::int64_t ns_since_midnight);

InstrumentSpec load_instrument_spec(const std::string& path);
void save_instrument_spec(const InstrumentSpec& spec, const std::string& path);

struct BookLevel {
    double px = 0.0;
    double sz = 0.0;
};

/// Top-of-book update. Depth levels 2-5 are optional and usually absent.
struct QuoteEvent {
    std::int64_t ts = 0;  // ns since epoch
    double bid_px = 0.0;
    double ask_px = 0.0;
    double bid_sz = 0.0;
    double ask_sz = 0.0;
    std::vector<BookLevel> bid_depth;  // levels 2..5, best first
    std::vector<BookLevel> ask_depth;

    double spread() const { return ask_px - bid_px; }
    double mid() const { return 0.5 * (bid_px + ask_px); }
};

enum class Side : std::uint8_t { buy, sell, unknown };

struct TradeEvent {
    std::int64_t ts = 0;
    double px = 0.0;
    double sz = 0.0;
    Side side = Side::unknown;
};

/// Per-window aggregate of the quote/trade state. Averages are
/// time-weighted over the prevailing quote state unless the aggregation
/// was configured otherwise. price_std is the realized-volatility-based
/// standard deviation of the window's price displacement, in price units.
struct WindowAggregate {
    std::int64_t window_start = 0;
    std::int64_t window_end = 0;
    double avg_spread = 0.0;
    double avg_bid_vol = 0.0;
    double avg_ask_vol = 0.0;
    double avg_price = 0.0;
    double traded_volume = 0.0;
    double price_std = 0.0;
    double last_trade_px = 0.0;  // 0 when the window printed no trade
    std::int64_t n_quotes = 0;   // quote states contributing time to the window
    std::int64_t n_trades = 0;
    bool valid = false;
    bool truncated = false;  // clipped against a session boundary

    double duration_seconds() const {
        return static_cast<double>(window_end - window_start) /
               static_cast<double>(kNsPerSec);
    }
};

struct QuoteIngestResult {
    std::vector<QuoteEvent> events;
    std::size_t dropped_locked_crossed = 0;
};

/// Read a quotes CSV (header `ts_ns,bid_px,bid_sz,ask_px,ask_sz[,...]`).
/// Rows with spread <= 0 are dropped and counted. Throws ParseError with
/// a line number on malformed rows, OrderingError on timestamp regression.
QuoteIngestResult ingest_quotes(const std::string& path, const InstrumentSpec& spec);

/// Read a trades CSV (header `ts_ns,px,sz[,side]`, side in {B,S,U}).
std::vector<TradeEvent> ingest_trades(const std::string& path, const InstrumentSpec& spec);

enum class BookAveraging : std::uint8_t {
    time_weighted,   // weight each prevailing state by its holding time
    event_sampled,   // every quote event weighted equally
};

struct AggregationConfig {
    int sub_intervals = 5;  // price_std sampling points per window
    BookAveraging averaging = BookAveraging::time_weighted;
    int depth_levels = 1;   // 1 = top of book; 2..5 average over available depth
};

/// Partition each session into contiguous windows of `window_seconds`
/// and aggregate the streams. Windows never straddle session or day
/// boundaries; a final short window is flagged truncated.
std::vector<WindowAggregate> aggregate_windows(std::span<const QuoteEvent> quotes,
                                               std::span<const TradeEvent> trades,
                                               const InstrumentSpec& spec,
                                               double window_seconds,
                                               const AggregationConfig& cfg = {});

/// Merge consecutive windows into one aggregate: averages are weighted by
/// window duration over the valid inputs, traded volume and counts are
/// summed, and squared relative price displacements add.
WindowAggregate combine_windows(std::span<const WindowAggregate> windows);

/// Roll intraday windows up into one aggregate per session day.
std::vector<WindowAggregate> daily_aggregates(std::span<const WindowAggregate> windows);

void write_quotes_csv(std::span<const QuoteEvent> quotes, const InstrumentSpec& spec,
                      const std::string& path);
void write_trades_csv(std::span<const TradeEvent> trades, const InstrumentSpec& spec,
                      const std::string& path);
void write_aggregates_csv(std::span<const WindowAggregate> windows, const std::string& path);

}  // namespace tickvol::md
