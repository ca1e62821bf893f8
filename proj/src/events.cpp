#include "lobhawkes/events.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>

namespace lobhawkes {

namespace {

constexpr double kTiePerturbation = 1e-9;

std::string trim(const std::string& s) {
    std::size_t begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    std::size_t end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(trim(current));
    return fields;
}

double parse_double(const std::string& token, int line_number, const char* what) {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &consumed);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_number) + ": malformed " + what + " '" +
                         token + "'");
    }
    if (consumed != token.size() || !std::isfinite(value)) {
        throw ParseError("line " + std::to_string(line_number) + ": malformed " + what + " '" +
                         token + "'");
    }
    return value;
}

std::string format_seconds(double t) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.9f", t);
    return buffer;
}

} // namespace

std::size_t EventStream::count(Side s) const {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [s](const Event& e) { return e.side == s; }));
}

void validate_stream(const EventStream& stream) {
    if (!(stream.horizon > 0.0) || !std::isfinite(stream.horizon)) {
        throw std::invalid_argument("horizon must be positive and finite");
    }
    const Event* prev = nullptr;
    for (const Event& e : stream.events) {
        if (!(e.time >= 0.0) || !std::isfinite(e.time)) {
            throw std::invalid_argument("event time must be non-negative and finite");
        }
        if (e.time > stream.horizon) {
            throw std::invalid_argument("event time exceeds horizon");
        }
        if (e.size.has_value() && !(*e.size > 0.0)) {
            throw std::invalid_argument("event size must be positive");
        }
        if (prev != nullptr) {
            if (e.time < prev->time) {
                throw std::invalid_argument("events must be sorted by time");
            }
            if (e.time == prev->time && e.side == prev->side) {
                throw std::invalid_argument("same-side duplicate timestamps are not allowed");
            }
        }
        prev = &e;
    }
}

EventStream parse_csv(const std::string& path, const IngestConfig& config) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }

    std::optional<double> declared_horizon;
    bool saw_header = false;
    std::vector<Event> events;
    std::string line;
    int line_number = 0;

    while (std::getline(in, line)) {
        ++line_number;
        std::string text = trim(line);
        if (text.empty()) continue;
        if (text[0] == '#') {
            std::string body = trim(text.substr(1));
            if (body.rfind("horizon=", 0) == 0 && !saw_header) {
                declared_horizon = parse_double(body.substr(8), line_number, "horizon");
            }
            continue;
        }
        if (!saw_header) {
            if (text != "time,side,price,size") {
                throw ParseError("line " + std::to_string(line_number) +
                                 ": expected header 'time,side,price,size'");
            }
            saw_header = true;
            continue;
        }

        std::vector<std::string> fields = split_fields(text);
        if (fields.size() < 2 || fields.size() > 4) {
            throw ParseError("line " + std::to_string(line_number) + ": expected 2-4 fields, got " +
                             std::to_string(fields.size()));
        }
        Event event;
        event.time = parse_double(fields[0], line_number, "time");
        if (event.time < 0.0) {
            throw ParseError("line " + std::to_string(line_number) + ": negative time");
        }
        if (fields[1] == "B") {
            event.side = Side::Buy;
        } else if (fields[1] == "S") {
            event.side = Side::Sell;
        } else {
            throw ParseError("line " + std::to_string(line_number) + ": unknown side token '" +
                             fields[1] + "'");
        }
        if (fields.size() >= 3 && !fields[2].empty()) {
            event.price = parse_double(fields[2], line_number, "price");
        }
        if (fields.size() >= 4 && !fields[3].empty()) {
            double size = parse_double(fields[3], line_number, "size");
            if (!(size > 0.0)) {
                throw ParseError("line " + std::to_string(line_number) + ": size must be positive");
            }
            event.size = size;
        }
        if (!events.empty() && event.time < events.back().time && config.strict) {
            throw ParseError("line " + std::to_string(line_number) +
                             ": unsorted timestamp in strict mode");
        }
        events.push_back(event);
    }

    if (!saw_header) {
        throw ParseError("'" + path + "': empty file (no header)");
    }

    if (config.horizon_override.has_value()) {
        declared_horizon = config.horizon_override;
    }

    if (!config.strict) {
        std::stable_sort(events.begin(), events.end(),
                         [](const Event& a, const Event& b) { return a.time < b.time; });
        // Perturb same-side ties forward until strictly increasing within a side.
        for (std::size_t i = 1; i < events.size(); ++i) {
            for (std::size_t j = i; j-- > 0;) {
                if (events[j].time < events[i].time) break;
                if (events[j].side == events[i].side) {
                    events[i].time = std::nextafter(
                        events[j].time + kTiePerturbation,
                        std::numeric_limits<double>::infinity());
                    break;
                }
            }
        }
        std::stable_sort(events.begin(), events.end(),
                         [](const Event& a, const Event& b) { return a.time < b.time; });
    }

    EventStream stream;
    if (declared_horizon.has_value()) {
        stream.events = std::move(events);
        stream.horizon = *declared_horizon;
    } else {
        // No declared window: rebase to the first event, horizon = last event time.
        if (events.empty()) {
            throw ParseError("'" + path + "': no events and no declared horizon");
        }
        double origin = events.front().time;
        for (Event& e : events) e.time -= origin;
        stream.events = std::move(events);
        stream.horizon = stream.events.back().time;
    }
    validate_stream(stream);
    return stream;
}

void write_csv(const EventStream& stream, const std::string& path,
               std::optional<std::uint64_t> seed) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << "# horizon=" << format_seconds(stream.horizon) << "\n";
    if (seed.has_value()) {
        out << "# seed=" << *seed << "\n";
    }
    out << "time,side,price,size\n";
    for (const Event& e : stream.events) {
        out << format_seconds(e.time) << ',' << (e.side == Side::Buy ? 'B' : 'S') << ',';
        if (e.price.has_value()) out << format_seconds(*e.price);
        out << ',';
        if (e.size.has_value()) out << format_seconds(*e.size);
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

std::pair<std::vector<double>, std::vector<double>> split_by_side(const EventStream& stream) {
    std::vector<double> buys;
    std::vector<double> sells;
    for (const Event& e : stream.events) {
        (e.side == Side::Buy ? buys : sells).push_back(e.time);
    }
    return {std::move(buys), std::move(sells)};
}

EventStream normalize_time(const EventStream& stream, double origin) {
    if (!stream.events.empty() && origin > stream.events.front().time) {
        throw std::invalid_argument("origin is after the first event");
    }
    EventStream shifted = stream;
    for (Event& e : shifted.events) e.time -= origin;
    shifted.horizon -= origin;
    validate_stream(shifted);
    return shifted;
}

} // namespace lobhawkes
