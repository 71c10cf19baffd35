#ifndef VITALCAST_CSV_IO_HPP
#define VITALCAST_CSV_IO_HPP

#include <string>

#include "vitalcast/patient.hpp"

namespace vitalcast {

/// Expected CSV header, in order.
inline constexpr const char* kCsvHeader =
    "patient_id,timestamp,age,gender,heart_rate,resp_rate,spo2,temp,sbp";

/// Reads a patient CSV (UTF-8, header above, ISO-8601 timestamps, empty cell
/// = missing vital). Rows are grouped by patient_id (records keep first-seen
/// order) and sorted by timestamp; gaps in each patient's 5-minute grid are
/// materialized as all-missing rows. Throws Error with the 1-based line
/// number for malformed rows, duplicate (patient_id, timestamp) pairs,
/// off-grid timestamps, inconsistent statics, or a wrong header.
Cohort ingest_csv(const std::string& path);

/// Writes a cohort in the same contract; missing cells become empty fields.
void write_cohort_csv(const Cohort& cohort, const std::string& path);

/// Shortest round-trip decimal rendering of a double ("nan" never appears in
/// CSV output; missing cells are written as empty strings).
std::string format_double(double value);

/// Epoch seconds → "YYYY-MM-DDTHH:MM:SS" (UTC); inverse of parse_timestamp.
std::string format_timestamp(std::int64_t epoch_seconds);

/// Parses "YYYY-MM-DDTHH:MM:SS" with optional trailing 'Z' or " " instead of
/// 'T'. Returns epoch seconds; throws Error on malformed input.
std::int64_t parse_timestamp(const std::string& text);

}  // namespace vitalcast

#endif
