#include "vitalcast/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "vitalcast/errors.hpp"

namespace vitalcast {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

/// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

double parse_double_field(const std::string& text, std::size_t line_no, const char* column) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw Error("line " + std::to_string(line_no) + ": malformed " + column + " value '" +
                    text + "'");
    }
    return value;
}

struct RawRow {
    std::int64_t epoch;
    std::size_t line_no;
    double age;
    double gender;
    std::array<double, kNumVitals> vitals;
};

}  // namespace

std::int64_t parse_timestamp(const std::string& text) {
    int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    char sep = 0;
    const int got = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &year, &month, &day, &sep,
                                &hour, &minute, &second);
    bool ok = got == 7 && (sep == 'T' || sep == ' ');
    if (ok) {
        // Round-trip check enforces zero padding and rejects trailing garbage
        // beyond an optional 'Z'.
        char rebuilt[32];
        std::snprintf(rebuilt, sizeof(rebuilt), "%04d-%02d-%02d%c%02d:%02d:%02d", year, month, day,
                      sep, hour, minute, second);
        std::string expect(rebuilt);
        ok = text == expect || text == expect + "Z";
    }
    ok = ok && month >= 1 && month <= 12 && day >= 1 && day <= 31 && hour >= 0 && hour <= 23 &&
         minute >= 0 && minute <= 59 && second >= 0 && second <= 59;
    if (!ok) throw Error("malformed timestamp '" + text + "' (expected YYYY-MM-DDTHH:MM:SS)");
    return days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) *
               kSecondsPerDay +
           hour * 3600 + minute * 60 + second;
}

std::string format_timestamp(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / kSecondsPerDay;
    std::int64_t rem = epoch_seconds % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        days -= 1;
    }
    std::int64_t y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lld",
                  static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                  static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
    return buf;
}

std::string format_double(double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    require(ec == std::errc(), "format_double: conversion failed");
    return std::string(buf, ptr);
}

Cohort ingest_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open CSV file '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw Error("CSV file '" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) {
        throw Error("line 1: unexpected CSV header '" + line + "' (expected '" + kCsvHeader +
                    "')");
    }

    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<RawRow>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != 9) {
            throw Error("line " + std::to_string(line_no) + ": expected 9 fields, got " +
                        std::to_string(fields.size()));
        }
        const std::string& pid = fields[0];
        if (pid.empty()) throw Error("line " + std::to_string(line_no) + ": empty patient_id");

        RawRow row;
        row.line_no = line_no;
        try {
            row.epoch = parse_timestamp(fields[1]);
        } catch (const Error& e) {
            throw Error("line " + std::to_string(line_no) + ": " + e.what());
        }
        row.age = parse_double_field(fields[2], line_no, "age");
        row.gender = parse_double_field(fields[3], line_no, "gender");
        if (row.gender != 0.0 && row.gender != 1.0) {
            throw Error("line " + std::to_string(line_no) + ": gender must be 0 or 1, got '" +
                        fields[3] + "'");
        }
        for (std::size_t v = 0; v < kNumVitals; ++v) {
            const std::string& cell = fields[4 + v];
            row.vitals[v] = cell.empty()
                                ? std::numeric_limits<double>::quiet_NaN()
                                : parse_double_field(cell, line_no, kVitalNames[v]);
        }

        auto [it, inserted] = rows.try_emplace(pid);
        if (inserted) order.push_back(pid);
        it->second.push_back(row);
    }

    Cohort cohort;
    cohort.records.reserve(order.size());
    for (const auto& pid : order) {
        auto& patient_rows = rows[pid];
        std::sort(patient_rows.begin(), patient_rows.end(),
                  [](const RawRow& a, const RawRow& b) { return a.epoch < b.epoch; });
        for (std::size_t i = 1; i < patient_rows.size(); ++i) {
            if (patient_rows[i].epoch == patient_rows[i - 1].epoch) {
                throw Error("line " + std::to_string(patient_rows[i].line_no) +
                            ": duplicate timestamp for patient '" + pid + "'");
            }
            if (patient_rows[i].age != patient_rows[0].age ||
                patient_rows[i].gender != patient_rows[0].gender) {
                throw Error("line " + std::to_string(patient_rows[i].line_no) +
                            ": inconsistent age/gender for patient '" + pid + "'");
            }
        }
        const std::int64_t start = patient_rows.front().epoch;
        const std::int64_t span = patient_rows.back().epoch - start;
        if (span % kGridSeconds != 0) {
            throw Error("patient '" + pid + "': timestamps not on the 5-minute grid");
        }
        for (const auto& row : patient_rows) {
            if ((row.epoch - start) % kGridSeconds != 0) {
                throw Error("line " + std::to_string(row.line_no) + ": timestamp for patient '" +
                            pid + "' is off the 5-minute grid");
            }
        }
        const std::size_t steps = static_cast<std::size_t>(span / kGridSeconds) + 1;

        PatientRecord rec;
        rec.patient_id = pid;
        rec.age = patient_rows.front().age;
        rec.gender = patient_rows.front().gender;
        rec.start_epoch = start;
        rec.vitals = Matrix(steps, kNumVitals, std::numeric_limits<double>::quiet_NaN());
        for (const auto& row : patient_rows) {
            const std::size_t t = static_cast<std::size_t>((row.epoch - start) / kGridSeconds);
            for (std::size_t v = 0; v < kNumVitals; ++v) rec.vitals(t, v) = row.vitals[v];
        }
        cohort.records.push_back(std::move(rec));
    }
    return cohort;
}

void write_cohort_csv(const Cohort& cohort, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << kCsvHeader << "\n";
    for (const auto& rec : cohort.records) {
        for (std::size_t t = 0; t < rec.steps(); ++t) {
            out << rec.patient_id << ','
                << format_timestamp(rec.start_epoch +
                                    static_cast<std::int64_t>(t) * kGridSeconds)
                << ',' << format_double(rec.age) << ',' << format_double(rec.gender);
            for (std::size_t v = 0; v < kNumVitals; ++v) {
                out << ',';
                if (!rec.is_missing(t, v)) out << format_double(rec.vitals(t, v));
            }
            out << '\n';
        }
    }
    if (!out) throw Error("failed while writing '" + path + "'");
}

}  // namespace vitalcast
