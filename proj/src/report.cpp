#include "vitalcast/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <nlohmann/json.hpp>

#include "vitalcast/csv_io.hpp"  // format_double
#include "vitalcast/errors.hpp"

namespace vitalcast {

namespace {

double mean_of(const std::vector<double>& values) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return values.empty() ? 0.0 : acc / static_cast<double>(values.size());
}

double std_of(const std::vector<double>& values, double mean) {
    if (values.size() < 2) return 0.0;
    double acc = 0.0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(acc / static_cast<double>(values.size()));
}

/// Four significant digits, plain decimal where reasonable (table display).
std::string table_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4g", value);
    return buf;
}

void check_shape(const MetricsReport& r) {
    require(r.cells.size() == r.methods.size(), "report: one cell row per method required");
    for (const auto& row : r.cells) {
        require(row.size() == r.horizons.size(), "report: one cell per horizon required");
    }
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "markdown" || name == "md") return ReportFormat::markdown;
    if (name == "json") return ReportFormat::json;
    throw Error("unknown report format '" + name + "' (expected csv, markdown, or json)");
}

const char* report_format_extension(ReportFormat format) {
    switch (format) {
        case ReportFormat::csv: return "csv";
        case ReportFormat::markdown: return "md";
        case ReportFormat::json: return "json";
    }
    return "txt";
}

void MetricsReport::finalize() {
    check_shape(*this);
    for (auto& row : cells) {
        for (auto& cell : row) {
            cell.mse = mean_of(cell.mse_runs);
            cell.mape = mean_of(cell.mape_runs);
            cell.mse_std = std_of(cell.mse_runs, cell.mse);
            cell.mape_std = std_of(cell.mape_runs, cell.mape);
            cell.best_mse = false;
            cell.best_mape = false;
        }
    }
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        double best_mse = std::numeric_limits<double>::infinity();
        double best_mape = std::numeric_limits<double>::infinity();
        for (const auto& row : cells) {
            if (row[h].masked || row[h].mse_runs.empty()) continue;
            best_mse = std::min(best_mse, row[h].mse);
            best_mape = std::min(best_mape, row[h].mape);
        }
        for (auto& row : cells) {
            if (row[h].masked || row[h].mse_runs.empty()) continue;
            row[h].best_mse = row[h].mse == best_mse;
            row[h].best_mape = row[h].mape == best_mape;
        }
    }
}

std::string emit_report(const MetricsReport& report, ReportFormat format) {
    check_shape(report);
    std::string out;

    switch (format) {
        case ReportFormat::csv: {
            out += "method,horizon,mse,mape,n_runs\n";
            for (std::size_t m = 0; m < report.methods.size(); ++m) {
                for (std::size_t h = 0; h < report.horizons.size(); ++h) {
                    const ReportCell& cell = report.cells[m][h];
                    out += report.methods[m];
                    out += ',';
                    out += std::to_string(report.horizons[h]);
                    out += ',';
                    if (!cell.masked && !cell.mse_runs.empty()) {
                        out += format_double(cell.mse);
                        out += ',';
                        out += format_double(cell.mape);
                    } else {
                        out += ',';
                    }
                    out += ',';
                    out += std::to_string(cell.masked ? 0 : cell.mse_runs.size());
                    out += '\n';
                }
            }
            return out;
        }

        case ReportFormat::markdown: {
            out += "Target vital: " + report.target_vital + " | runs: " +
                   std::to_string(report.seeds.size()) + "\n\n";
            out += "| Method |";
            for (int h : report.horizons) {
                out += " MSE t+" + std::to_string(h) + " | MAPE t+" + std::to_string(h) + " |";
            }
            out += "\n|---|";
            for (std::size_t h = 0; h < report.horizons.size(); ++h) out += "---|---|";
            out += "\n";
            for (std::size_t m = 0; m < report.methods.size(); ++m) {
                out += "| " + report.methods[m] + " |";
                for (std::size_t h = 0; h < report.horizons.size(); ++h) {
                    const ReportCell& cell = report.cells[m][h];
                    if (cell.masked || cell.mse_runs.empty()) {
                        out += " -- | -- |";
                        continue;
                    }
                    const std::string mse_text = table_number(cell.mse);
                    const std::string mape_text = table_number(cell.mape);
                    out += cell.best_mse ? " **" + mse_text + "** |" : " " + mse_text + " |";
                    out += cell.best_mape ? " **" + mape_text + "** |" : " " + mape_text + " |";
                }
                out += "\n";
            }
            return out;
        }

        case ReportFormat::json: {
            nlohmann::ordered_json doc;
            doc["target_vital"] = report.target_vital;
            doc["seeds"] = report.seeds;
            doc["horizons"] = report.horizons;
            doc["methods"] = report.methods;
            nlohmann::ordered_json rows = nlohmann::ordered_json::object();
            for (std::size_t m = 0; m < report.methods.size(); ++m) {
                nlohmann::ordered_json row = nlohmann::ordered_json::object();
                for (std::size_t h = 0; h < report.horizons.size(); ++h) {
                    const ReportCell& cell = report.cells[m][h];
                    nlohmann::ordered_json entry = nlohmann::ordered_json::object();
                    if (cell.masked) {
                        entry["masked"] = true;
                    } else {
                        entry["mse"] = cell.mse;
                        entry["mape"] = cell.mape;
                        entry["mse_std"] = cell.mse_std;
                        entry["mape_std"] = cell.mape_std;
                        entry["mse_runs"] = cell.mse_runs;
                        entry["mape_runs"] = cell.mape_runs;
                        entry["best_mse"] = cell.best_mse;
                        entry["best_mape"] = cell.best_mape;
                    }
                    row["t+" + std::to_string(report.horizons[h])] = std::move(entry);
                }
                rows[report.methods[m]] = std::move(row);
            }
            doc["cells"] = std::move(rows);
            return doc.dump(2) + "\n";
        }
    }
    throw Error("emit_report: unknown format");
}

}  // namespace vitalcast
