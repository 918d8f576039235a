#include "tickvol/marketdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tickvol/errors.hpp"

namespace tickvol::md {

namespace {

using json = nlohmann::json;

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

double to_double(std::string_view tok, const std::string& path, std::size_t line) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        parse_fail(path, line, "bad number '" + std::string(tok) + "'");
    if (!std::isfinite(v)) parse_fail(path, line, "non-finite number");
    return v;
}

std::int64_t to_i64(std::string_view tok, const std::string& path, std::size_t line) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        parse_fail(path, line, "bad integer '" + std::string(tok) + "'");
    return v;
}

void split_csv(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view chomp(std::string_view s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
    return s;
}

std::string fmt_price(double px, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, px);
    return buf;
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void InstrumentSpec::validate() const {
    if (tick_size <= 0.0) throw ConfigError("instrument " + symbol + ": tick_size must be > 0");
    if (session_open_ns >= session_close_ns)
        throw ConfigError("instrument " + symbol + ": session_open must precede session_close");
    if (session_open_ns < 0 || session_close_ns > kNsPerDay)
        throw ConfigError("instrument " + symbol + ": session bounds outside the day");
}

std::int64_t parse_time_of_day(const std::string& hms) {
    int h = 0, m = 0, s = 0;
    if (std::sscanf(hms.c_str(), "%d:%d:%d", &h, &m, &s) != 3 || h < 0 || h > 24 ||
        m < 0 || m > 59 || s < 0 || s > 59)
        throw ConfigError("bad time of day '" + hms + "' (expected HH:MM:SS)");
    return (static_cast<std::int64_t>(h) * 3600 + m * 60 + s) * kNsPerSec;
}

std::string format_time_of_day(std::int64_t ns) {
    const std::int64_t sec = ns / kNsPerSec;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d:%02d:%02d", static_cast<int>(sec / 3600),
                  static_cast<int>(sec / 60 % 60), static_cast<int>(sec % 60));
    return buf;
}

InstrumentSpec load_instrument_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open instrument spec '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    InstrumentSpec spec;
    try {
        spec.symbol = j.at("symbol").get<std::string>();
        spec.tick_size = j.at("tick_size").get<double>();
        spec.session_open_ns = parse_time_of_day(j.at("session_open").get<std::string>());
        spec.session_close_ns = parse_time_of_day(j.at("session_close").get<std::string>());
        spec.price_decimals = j.at("price_decimals").get<int>();
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    spec.validate();
    return spec;
}

void save_instrument_spec(const InstrumentSpec& spec, const std::string& path) {
    json j{{"symbol", spec.symbol},
           {"tick_size", spec.tick_size},
           {"session_open", format_time_of_day(spec.session_open_ns)},
           {"session_close", format_time_of_day(spec.session_close_ns)},
           {"price_decimals", spec.price_decimals}};
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

QuoteIngestResult ingest_quotes(const std::string& path, const InstrumentSpec& spec) {
    spec.validate();
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");

    QuoteIngestResult result;
    std::string line;
    std::vector<std::string_view> tok;
    std::size_t lineno = 0;
    int depth = 1;

    if (!std::getline(in, line)) return result;  // empty file: empty sequence
    ++lineno;
    split_csv(chomp(line), tok);
    if (tok.size() < 5 || tok[0] != "ts_ns" || tok[1] != "bid_px" || tok[2] != "bid_sz" ||
        tok[3] != "ask_px" || tok[4] != "ask_sz")
        parse_fail(path, lineno, "unexpected quotes header");
    if ((tok.size() - 5) % 4 != 0 || tok.size() > 5 + 4 * 4)
        parse_fail(path, lineno, "depth columns must come in (px,sz) pairs per side, levels 2-5");
    depth = 1 + static_cast<int>((tok.size() - 5) / 4);

    std::int64_t prev_ts = std::numeric_limits<std::int64_t>::min();
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view body = chomp(line);
        if (body.empty()) continue;
        split_csv(body, tok);
        if (tok.size() != 5 + 4 * static_cast<std::size_t>(depth - 1))
            parse_fail(path, lineno, "wrong field count");
        QuoteEvent ev;
        ev.ts = to_i64(tok[0], path, lineno);
        ev.bid_px = to_double(tok[1], path, lineno);
        ev.bid_sz = to_double(tok[2], path, lineno);
        ev.ask_px = to_double(tok[3], path, lineno);
        ev.ask_sz = to_double(tok[4], path, lineno);
        if (ev.bid_sz < 0.0 || ev.ask_sz < 0.0) parse_fail(path, lineno, "negative size");
        if (ev.bid_px <= 0.0 || ev.ask_px <= 0.0) parse_fail(path, lineno, "non-positive price");
        if (ev.ts < prev_ts)
            throw OrderingError(path + ":" + std::to_string(lineno) + ": timestamp regression");
        prev_ts = ev.ts;
        for (int lvl = 0; lvl < depth - 1; ++lvl) {
            const std::size_t base = 5 + 4 * static_cast<std::size_t>(lvl);
            ev.bid_depth.push_back({to_double(tok[base], path, lineno),
                                    to_double(tok[base + 1], path, lineno)});
            ev.ask_depth.push_back({to_double(tok[base + 2], path, lineno),
                                    to_double(tok[base + 3], path, lineno)});
        }
        if (ev.spread() <= 0.0) {  // locked/crossed book
            ++result.dropped_locked_crossed;
            continue;
        }
        result.events.push_back(std::move(ev));
    }
    return result;
}

std::vector<TradeEvent> ingest_trades(const std::string& path, const InstrumentSpec& spec) {
    spec.validate();
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open file");

    std::vector<TradeEvent> trades;
    std::string line;
    std::vector<std::string_view> tok;
    std::size_t lineno = 0;

    if (!std::getline(in, line)) return trades;
    ++lineno;
    split_csv(chomp(line), tok);
    const bool has_side = tok.size() == 4 && tok[3] == "side";
    if (!(tok.size() == 3 || has_side) || tok[0] != "ts_ns" || tok[1] != "px" || tok[2] != "sz")
        parse_fail(path, lineno, "unexpected trades header");

    std::int64_t prev_ts = std::numeric_limits<std::int64_t>::min();
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view body = chomp(line);
        if (body.empty()) continue;
        split_csv(body, tok);
        if (tok.size() != (has_side ? 4u : 3u)) parse_fail(path, lineno, "wrong field count");
        TradeEvent ev;
        ev.ts = to_i64(tok[0], path, lineno);
        ev.px = to_double(tok[1], path, lineno);
        ev.sz = to_double(tok[2], path, lineno);
        if (ev.px <= 0.0) parse_fail(path, lineno, "non-positive price");
        if (ev.sz <= 0.0) parse_fail(path, lineno, "non-positive size");
        if (ev.ts < prev_ts)
            throw OrderingError(path + ":" + std::to_string(lineno) + ": timestamp regression");
        prev_ts = ev.ts;
        if (has_side) {
            if (tok[3] == "B") ev.side = Side::buy;
            else if (tok[3] == "S") ev.side = Side::sell;
            else if (tok[3] == "U") ev.side = Side::unknown;
            else parse_fail(path, lineno, "bad side '" + std::string(tok[3]) + "'");
        }
        trades.push_back(ev);
    }
    return trades;
}

namespace {

// Book volume per side for one quote state, honoring the depth-average config.
double side_volume(double top_sz, const std::vector<BookLevel>& depth, int levels) {
    if (levels <= 1 || depth.empty()) return top_sz;
    double sum = top_sz;
    int used = 1;
    for (const auto& lvl : depth) {
        if (used >= levels) break;
        sum += lvl.sz;
        ++used;
    }
    return sum / used;
}

struct SessionBounds {
    std::int64_t begin;
    std::int64_t end;
};

}  // namespace

std::vector<WindowAggregate> aggregate_windows(std::span<const QuoteEvent> quotes,
                                               std::span<const TradeEvent> trades,
                                               const InstrumentSpec& spec,
                                               double window_seconds,
                                               const AggregationConfig& cfg) {
    spec.validate();
    if (window_seconds <= 0.0) throw ConfigError("window must be positive");
    if (window_seconds > spec.session_seconds())
        throw ConfigError("window longer than the trading session");
    if (cfg.sub_intervals < 1) throw ConfigError("sub_intervals must be >= 1");

    const auto window_ns = static_cast<std::int64_t>(window_seconds * kNsPerSec);

    // Days that carry any in-session event.
    std::vector<std::int64_t> days;
    auto note_day = [&](std::int64_t ts) {
        const std::int64_t day = ts / kNsPerDay;
        const std::int64_t tod = ts - day * kNsPerDay;
        if (tod < spec.session_open_ns || tod >= spec.session_close_ns) return;
        if (days.empty() || days.back() != day) {
            if (!days.empty() && day < days.back())
                throw OrderingError("streams are not time-sorted across days");
            days.push_back(day);
        }
    };
    {
        std::size_t qi = 0, ti = 0;
        while (qi < quotes.size() || ti < trades.size()) {
            if (ti >= trades.size() || (qi < quotes.size() && quotes[qi].ts <= trades[ti].ts))
                note_day(quotes[qi++].ts);
            else
                note_day(trades[ti++].ts);
        }
    }

    std::vector<WindowAggregate> out;
    std::size_t qi = 0, ti = 0;

    for (const std::int64_t day : days) {
        const SessionBounds session{day * kNsPerDay + spec.session_open_ns,
                                    day * kNsPerDay + spec.session_close_ns};
        while (qi < quotes.size() && quotes[qi].ts < session.begin) ++qi;
        while (ti < trades.size() && trades[ti].ts < session.begin) ++ti;

        // Prevailing in-session quote state; resets every session.
        bool have_state = false;
        QuoteEvent state;

        for (std::int64_t wstart = session.begin; wstart < session.end; wstart += window_ns) {
            const std::int64_t wend = std::min(wstart + window_ns, session.end);
            WindowAggregate agg;
            agg.window_start = wstart;
            agg.window_end = wend;
            agg.truncated = (wend - wstart) < window_ns;

            // ---- quote sweep: time-weighted (or event-weighted) averages ----
            double w_sum = 0.0, spread_acc = 0.0, bid_acc = 0.0, ask_acc = 0.0, px_acc = 0.0;
            // Sub-boundary mid samples for the price displacement estimate.
            const int k = cfg.sub_intervals;
            std::vector<double> boundary_mid(static_cast<std::size_t>(k) + 1, 0.0);
            int bidx = 0;
            auto sample_boundaries_until = [&](std::int64_t t, double mid) {
                while (bidx <= k) {
                    const std::int64_t bt =
                        wstart + (wend - wstart) * bidx / k;
                    if (bt >= t && !(bidx == k && t == wend)) break;
                    boundary_mid[static_cast<std::size_t>(bidx)] = mid;  // 0 if undefined
                    ++bidx;
                }
            };
            auto accumulate = [&](const QuoteEvent& q, std::int64_t from, std::int64_t to) {
                const double w = cfg.averaging == BookAveraging::time_weighted
                                     ? static_cast<double>(to - from)
                                     : 1.0;
                if (w <= 0.0 && cfg.averaging == BookAveraging::time_weighted) return;
                w_sum += w;
                spread_acc += w * q.spread();
                bid_acc += w * side_volume(q.bid_sz, q.bid_depth, cfg.depth_levels);
                ask_acc += w * side_volume(q.ask_sz, q.ask_depth, cfg.depth_levels);
                px_acc += w * q.mid();
            };

            std::int64_t cursor = wstart;
            if (have_state) ++agg.n_quotes;  // carried-in prevailing state
            while (qi < quotes.size() && quotes[qi].ts < wend) {
                const QuoteEvent& q = quotes[qi];
                if (have_state) {
                    sample_boundaries_until(q.ts, state.mid());
                    accumulate(state, cursor, q.ts);
                } else {
                    sample_boundaries_until(q.ts, 0.0);
                }
                state = q;
                have_state = true;
                cursor = std::max(cursor, q.ts);
                ++agg.n_quotes;
                ++qi;
            }
            if (have_state) {
                sample_boundaries_until(wend, state.mid());
                accumulate(state, cursor, wend);
                // Event-sampled mode counts the closing state once via the
                // carried/in-window increments already made.
            } else {
                sample_boundaries_until(wend, 0.0);
            }
            while (bidx <= k) boundary_mid[static_cast<std::size_t>(bidx++)] =
                have_state ? state.mid() : 0.0;

            if (w_sum > 0.0) {
                agg.avg_spread = spread_acc / w_sum;
                agg.avg_bid_vol = bid_acc / w_sum;
                agg.avg_ask_vol = ask_acc / w_sum;
                agg.avg_price = px_acc / w_sum;
            } else {
                agg.n_quotes = 0;
            }

            // ---- trades ----
            while (ti < trades.size() && trades[ti].ts < wend) {
                if (trades[ti].ts >= wstart) {
                    agg.traded_volume += trades[ti].sz;
                    agg.last_trade_px = trades[ti].px;
                    ++agg.n_trades;
                }
                ++ti;
            }

            // ---- price displacement over sub-intervals ----
            double sumsq = 0.0;
            double prev_mid = 0.0;
            for (int j = 0; j <= k; ++j) {
                const double m = boundary_mid[static_cast<std::size_t>(j)];
                if (m <= 0.0) continue;
                if (prev_mid > 0.0) {
                    const double r = std::log(m / prev_mid);
                    sumsq += r * r;
                }
                prev_mid = m;
            }
            agg.price_std = agg.avg_price * std::sqrt(sumsq);

            agg.valid = agg.n_trades > 0 && agg.n_quotes > 0 && agg.avg_spread > 0.0;
            out.push_back(std::move(agg));
        }
        // Consume any in-session leftovers (possible only via duplicate close ts).
        while (qi < quotes.size() && quotes[qi].ts < session.end) ++qi;
        while (ti < trades.size() && trades[ti].ts < session.end) ++ti;
    }
    return out;
}

WindowAggregate combine_windows(std::span<const WindowAggregate> windows) {
    WindowAggregate out;
    double w_sum = 0.0, spread_acc = 0.0, bid_acc = 0.0, ask_acc = 0.0, px_acc = 0.0;
    double sumsq = 0.0;
    bool first = true;
    for (const auto& w : windows) {
        if (!w.valid) continue;
        const double dur = static_cast<double>(w.window_end - w.window_start);
        if (first) {
            out.window_start = w.window_start;
            first = false;
        }
        out.window_end = w.window_end;
        w_sum += dur;
        spread_acc += dur * w.avg_spread;
        bid_acc += dur * w.avg_bid_vol;
        ask_acc += dur * w.avg_ask_vol;
        px_acc += dur * w.avg_price;
        out.traded_volume += w.traded_volume;
        out.n_quotes += w.n_quotes;
        out.n_trades += w.n_trades;
        out.truncated = out.truncated || w.truncated;
        if (w.avg_price > 0.0) {
            const double rel = w.price_std / w.avg_price;
            sumsq += rel * rel;
        }
        if (w.last_trade_px > 0.0) out.last_trade_px = w.last_trade_px;
    }
    if (w_sum > 0.0) {
        out.avg_spread = spread_acc / w_sum;
        out.avg_bid_vol = bid_acc / w_sum;
        out.avg_ask_vol = ask_acc / w_sum;
        out.avg_price = px_acc / w_sum;
        out.price_std = out.avg_price * std::sqrt(sumsq);
        out.valid = out.n_trades > 0 && out.n_quotes > 0 && out.avg_spread > 0.0;
    }
    return out;
}

std::vector<WindowAggregate> daily_aggregates(std::span<const WindowAggregate> windows) {
    std::vector<WindowAggregate> out;
    std::size_t i = 0;
    while (i < windows.size()) {
        const std::int64_t day = windows[i].window_start / kNsPerDay;
        std::size_t j = i;
        while (j < windows.size() && windows[j].window_start / kNsPerDay == day) ++j;
        out.push_back(combine_windows(windows.subspan(i, j - i)));
        i = j;
    }
    return out;
}

void write_quotes_csv(std::span<const QuoteEvent> quotes, const InstrumentSpec& spec,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << "ts_ns,bid_px,bid_sz,ask_px,ask_sz\n";
    for (const auto& q : quotes) {
        out << q.ts << ',' << fmt_price(q.bid_px, spec.price_decimals) << ',' << fmt_g(q.bid_sz)
            << ',' << fmt_price(q.ask_px, spec.price_decimals) << ',' << fmt_g(q.ask_sz) << '\n';
    }
}

void write_trades_csv(std::span<const TradeEvent> trades, const InstrumentSpec& spec,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << "ts_ns,px,sz,side\n";
    for (const auto& t : trades) {
        const char side = t.side == Side::buy ? 'B' : t.side == Side::sell ? 'S' : 'U';
        out << t.ts << ',' << fmt_price(t.px, spec.price_decimals) << ',' << fmt_g(t.sz) << ','
            << side << '\n';
    }
}

void write_aggregates_csv(std::span<const WindowAggregate> windows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << "window_start,window_end,avg_spread,avg_bid_vol,avg_ask_vol,avg_price,"
           "traded_volume,price_std,last_trade_px,n_quotes,n_trades,valid,truncated\n";
    for (const auto& w : windows) {
        out << w.window_start << ',' << w.window_end << ',' << fmt_g(w.avg_spread) << ','
            << fmt_g(w.avg_bid_vol) << ',' << fmt_g(w.avg_ask_vol) << ',' << fmt_g(w.avg_price)
            << ',' << fmt_g(w.traded_volume) << ',' << fmt_g(w.price_std) << ','
            << fmt_g(w.last_trade_px) << ',' << w.n_quotes << ',' << w.n_trades << ','
            << (w.valid ? 1 : 0) << ',' << (w.truncated ? 1 : 0) << '\n';
    }
}

}  // namespace tickvol::md
