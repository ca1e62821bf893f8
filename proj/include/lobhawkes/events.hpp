#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lobhawkes {

enum class Side { Buy, Sell };

inline constexpr int side_index(Side s) { return s == Side::Buy ? 0 : 1; }
inline constexpr Side side_from_index(int i) { return i == 0 ? Side::Buy : Side::Sell; }

struct Event {
    double time{0.0}; // seconds, relative to window start
    Side side{Side::Buy};
    std::optional<double> price{};
    std::optional<double> size{};
};

// Time-ordered buy/sell arrivals over an observation window [0, horizon].
struct EventStream {
    std::vector<Event> events;
    double horizon{0.0};

    [[nodiscard]] std::size_t size() const { return events.size(); }
    [[nodiscard]] bool empty() const { return events.empty(); }
    [[nodiscard]] std::size_t count(Side s) const;
};

struct IngestConfig {
    // Reject unsorted rows and same-side duplicate timestamps when true;
    // otherwise sort and perturb same-side ties by +1e-9 s.
    bool strict{true};
    // Overrides any `# horizon=` comment in the file.
    std::optional<double> horizon_override{};
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Throws std::invalid_argument if any EventStream invariant is violated:
// times non-negative, finite, sorted, within horizon; positive sizes;
// no same-side duplicate timestamps; horizon > 0.
void validate_stream(const EventStream& stream);

// CSV format: header `time,side,price,size`, `#` comment lines, and an
// optional `# horizon=<seconds>` comment before the data declaring the
// window length. Without a declared window, times are rebased so the
// first event maps to 0 and the horizon becomes the last event time.
[[nodiscard]] EventStream parse_csv(const std::string& path, const IngestConfig& config = {});

// Writes the stream in the same format, times at 9-decimal fixed
// precision so a write/parse round trip is exact. An optional seed is
// recorded as a `# seed=` comment.
void write_csv(const EventStream& stream, const std::string& path,
               std::optional<std::uint64_t> seed = {});

[[nodiscard]] std::pair<std::vector<double>, std::vector<double>>
split_by_side(const EventStream& stream);

// Shifts all times and the horizon by -origin. origin must not exceed
// the first event time.
[[nodiscard]] EventStream normalize_time(const EventStream& stream, double origin);

} // namespace lobhawkes
