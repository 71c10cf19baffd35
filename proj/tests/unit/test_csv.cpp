#include <doctest.h>

#include <cmath>
#include <string>

#include "test_util.hpp"
#include "vitalcast/csv_io.hpp"
#include "vitalcast/errors.hpp"
#include "vitalcast/patient.hpp"

using testutil::TempDir;
using testutil::contains;
using testutil::message_of;
using testutil::read_file;
using testutil::write_file;
using vitalcast::Cohort;
using vitalcast::ingest_csv;

namespace {

const char* kHeader = "patient_id,timestamp,age,gender,heart_rate,resp_rate,spo2,temp,sbp\n";

std::string with_header(const std::string& rows) { return std::string(kHeader) + rows; }

}  // namespace

TEST_CASE("ingest groups by patient, sorts rows, and fills grid gaps") {
    TempDir dir;
    auto path = dir.file("cohort.csv");
    // P1's 00:15 row arrives before its 00:00 row; the 00:10 slot is absent.
    write_file(path, with_header("P1,2025-01-06T00:15:00,72,1,82,17,96,36.9,119\n"
                                 "P1,2025-01-06T00:00:00,72,1,80,18,97,36.8,120\n"
                                 "P2,2025-01-06T00:00:00,55,0,70,14,99,36.5,110\n"
                                 "P1,2025-01-06T00:05:00,72,1,,18,97,36.8,121\n"));
    Cohort c = ingest_csv(path.string());
    REQUIRE(c.size() == 2);
    CHECK(c.records[0].patient_id == "P1");  // first-seen order
    CHECK(c.records[1].patient_id == "P2");

    const auto& p1 = c.records[0];
    CHECK(p1.age == 72.0);
    CHECK(p1.gender == 1.0);
    CHECK(p1.start_epoch == 1736121600);
    REQUIRE(p1.steps() == 4);  // 00:00, 00:05, 00:10 (materialized), 00:15
    CHECK(p1.vitals(0, 0) == 80.0);
    CHECK(p1.is_missing(1, 0));       // empty heart_rate cell
    CHECK(p1.vitals(1, 4) == 121.0);  // sorted into slot 1
    for (std::size_t v = 0; v < vitalcast::kNumVitals; ++v) CHECK(p1.is_missing(2, v));
    CHECK(p1.vitals(3, 0) == 82.0);
    CHECK(p1.missing_count() == 6);

    CHECK(c.records[1].steps() == 1);
    CHECK(c.find("P2") != nullptr);
    CHECK(c.find("nope") == nullptr);
}

TEST_CASE("ingest rejects malformed files with 1-based line numbers") {
    TempDir dir;

    auto bad_header = dir.file("h.csv");
    write_file(bad_header, "patient,ts\nP1,2025-01-06T00:00:00,72,1,80,18,97,36.8,120\n");
    CHECK(contains(message_of<vitalcast::Error>([&] { ingest_csv(bad_header.string()); }),
                   "header"));

    auto dup = dir.file("dup.csv");
    write_file(dup, with_header("P1,2025-01-06T00:00:00,72,1,80,18,97,36.8,120\n"
                                "P1,2025-01-06T00:00:00,72,1,81,18,97,36.8,120\n"));
    CHECK(contains(message_of<vitalcast::Error>([&] { ingest_csv(dup.string()); }), "line 3"));

    // Interior row off the grid while the overall span stays on it: the
    // error must carry the offending row's 1-based line number.
    auto off_grid = dir.file("grid.csv");
    write_file(off_grid, with_header("P1,2025-01-06T00:00:00,72,1,80,18,97,36.8,120\n"
                                     "P1,2025-01-06T00:07:13,72,1,80,18,97,36.8,120\n"
                                     "P1,2025-01-06T00:10:00,72,1,80,18,97,36.8,120\n"));
    CHECK(contains(message_of<vitalcast::Error>([&] { ingest_csv(off_grid.string()); }),
                   "line 3"));

    // Span itself off the grid: rejected at the patient level.
    auto off_span = dir.file("span.csv");
    write_file(off_span, with_header("P1,2025-01-06T00:00:00,72,1,80,18,97,36.8,120\n"
                                     "P1,2025-01-06T00:07:13,72,1,80,18,97,36.8,120\n"));
    CHECK(contains(message_of<vitalcast::Error>([&] { ingest_csv(off_span.string()); }),
                   "5-minute grid"));

    auto bad_gender = dir.file("gender.csv");
    write_file(bad_gender, with_header("P1,2025-01-06T00:00:00,72,2,80,18,97,36.8,120\n"));
    CHECK(contains(message_of<vitalcast::Error>([&] { ingest_csv(bad_gender.string()); }),
                   "line 2"));

    auto inconsistent = dir.file("age.csv");
    write_file(inconsistent, with_header("P1,2025-01-06T00:00:00,72,1,80,18,97,36.8,120\n"
                                         "P1,2025-01-06T00:05:00,73,1,80,18,97,36.8,120\n"));
    CHECK(contains(message_of<vitalcast::Error>([&] { ingest_csv(inconsistent.string()); }),
                   "line 3"));

    auto bad_number = dir.file("num.csv");
    write_file(bad_number, with_header("P1,2025-01-06T00:00:00,72,1,8x0,18,97,36.8,120\n"));
    CHECK(contains(message_of<vitalcast::Error>([&] { ingest_csv(bad_number.string()); }),
                   "line 2"));

    auto short_row = dir.file("short.csv");
    write_file(short_row, with_header("P1,2025-01-06T00:00:00,72,1,80,18,97,36.8\n"));
    CHECK(contains(message_of<vitalcast::Error>([&] { ingest_csv(short_row.string()); }),
                   "line 2"));

    CHECK_THROWS_AS(ingest_csv((dir.path() / "missing.csv").string()), vitalcast::Error);
}

TEST_CASE("write then read round-trips bytes exactly") {
    TempDir dir;
    auto first = dir.file("a.csv");
    write_file(first, with_header("P1,2025-01-06T00:00:00,72,1,80,18,97,36.8,120\n"
                                  "P1,2025-01-06T00:05:00,72,1,,18.5,97,36.8,121\n"
                                  "P2,2025-01-06T00:00:00,55,0,70,14,99,36.5,110\n"));
    Cohort c = ingest_csv(first.string());

    auto second = dir.file("b.csv");
    vitalcast::write_cohort_csv(c, second.string());
    Cohort again = ingest_csv(second.string());

    auto third = dir.file("c.csv");
    vitalcast::write_cohort_csv(again, third.string());
    CHECK(read_file(second) == read_file(third));
    CHECK(read_file(second) == read_file(first));
}

TEST_CASE("format_double renders shortest round-trip decimals") {
    CHECK(vitalcast::format_double(5.0) == "5");
    CHECK(vitalcast::format_double(0.1) == "0.1");
    CHECK(vitalcast::format_double(36.8) == "36.8");
    CHECK(vitalcast::format_double(-2.25) == "-2.25");
}

TEST_CASE("timestamp parsing and formatting") {
    CHECK(vitalcast::parse_timestamp("2025-01-06T00:00:00") == 1736121600);
    CHECK(vitalcast::parse_timestamp("1970-01-02T03:04:05") == 97445);
    CHECK(vitalcast::parse_timestamp("1970-01-02 03:04:05") == 97445);
    CHECK(vitalcast::parse_timestamp("2025-01-06T00:00:00Z") == 1736121600);
    CHECK(vitalcast::format_timestamp(1736121600) == "2025-01-06T00:00:00");
    CHECK(vitalcast::format_timestamp(97445) == "1970-01-02T03:04:05");

    for (std::int64_t t : {0L, 1736121600L, 97445L, 4102444800L}) {
        CHECK(vitalcast::parse_timestamp(vitalcast::format_timestamp(t)) == t);
    }

    CHECK_THROWS_AS(vitalcast::parse_timestamp("2025-13-01T00:00:00"), vitalcast::Error);
    CHECK_THROWS_AS(vitalcast::parse_timestamp("2025-01-06T00:00"), vitalcast::Error);
    CHECK_THROWS_AS(vitalcast::parse_timestamp("not a time"), vitalcast::Error);
}
