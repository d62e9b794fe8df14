#pragma once

// Flat text records for simulation results and round transcripts: CSV with a
// header row, or one JSON object per line. Number formatting never consults
// the locale.

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "montecarlo.hpp"

namespace qgamble {

enum class RecordFormat { Csv, Jsonl };

inline RecordFormat parse_format(const std::string &s) {
    if (s == "csv") {
        return RecordFormat::Csv;
    }
    if (s == "jsonl") {
        return RecordFormat::Jsonl;
    }
    throw ValidationError("format must be csv or jsonl");
}

/// Shortest round-trip decimal, '.' separator.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

inline nlohmann::ordered_json to_json(const SimResult &r) {
    return {{"rounds", r.rounds},
            {"mean_gain_alice", r.mean_gain_alice},
            {"mean_gain_bob", r.mean_gain_bob},
            {"stderr", r.standard_error},
            {"win_count", r.win_count},
            {"lose_count", r.lose_count},
            {"check_count", r.check_count},
            {"accuse_count", r.accuse_count},
            {"match_count", r.match_count},
            {"match_check_count", r.match_check_count},
            {"aborted", r.aborted}};
}

inline nlohmann::ordered_json to_json(std::uint64_t index, const RoundTranscript &t) {
    nlohmann::ordered_json j{{"round", index},
                             {"kind", to_string(t.kind)},
                             {"sent", to_string(t.sent)},
                             {"bob_guess", to_string(t.bob_guess)},
                             {"result", to_string(t.verdict.result)},
                             {"claimed", to_string(t.verdict.claimed)},
                             {"check", nullptr},
                             {"alice_delta", t.alice_delta},
                             {"bob_delta", t.bob_delta}};
    if (t.check) {
        j["check"] = to_string(*t.check);
    }
    return j;
}

/// Writes a flat JSON object as CSV; `header` prints the key row first.
inline void write_csv_row(std::ostream &os, const nlohmann::ordered_json &flat, bool header) {
    if (header) {
        bool first = true;
        for (const auto &[key, value] : flat.items()) {
            os << (first ? "" : ",") << key;
            first = false;
        }
        os << '\n';
    }
    bool first = true;
    for (const auto &[key, value] : flat.items()) {
        os << (first ? "" : ",");
        first = false;
        if (value.is_number_float()) {
            os << format_double(value.get<double>());
        } else if (value.is_string()) {
            os << value.get<std::string>();
        } else if (value.is_null()) {
            // empty cell
        } else {
            os << value.dump();
        }
    }
    os << '\n';
}

inline void write_record(std::ostream &os, const nlohmann::ordered_json &flat, RecordFormat fmt,
                         bool header) {
    if (fmt == RecordFormat::Jsonl) {
        os << flat.dump() << '\n';
    } else {
        write_csv_row(os, flat, header);
    }
}

} // namespace qgamble
