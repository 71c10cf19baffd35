#ifndef VITALCAST_REPORT_HPP
#define VITALCAST_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace vitalcast {

enum class ReportFormat { csv, markdown, json };

/// Parses "csv" / "markdown" / "json"; anything else raises Error.
ReportFormat parse_report_format(const std::string& name);
const char* report_format_extension(ReportFormat format);

struct ReportCell {
    bool masked = false;  // horizon covered by generation: reported as "--"
    std::vector<double> mse_runs;
    std::vector<double> mape_runs;
    double mse = 0.0;       // mean over runs
    double mape = 0.0;      // mean over runs
    double mse_std = 0.0;   // population std over runs
    double mape_std = 0.0;  // population std over runs
    bool best_mse = false;
    bool best_mape = false;
};

/// Table-shaped result grid: one row per method, one column pair
/// (MSE, MAPE) per horizon. Cell means/stds/best markers are derived from
/// the per-run values by finalize().
struct MetricsReport {
    std::string target_vital;
    std::vector<std::uint64_t> seeds;
    std::vector<int> horizons;
    std::vector<std::string> methods;
    std::vector<std::vector<ReportCell>> cells;  // [method][horizon]

    /// Computes per-cell means and stds and marks the per-column minimum
    /// among unmasked cells (ties all marked).
    void finalize();
};

/// Renders the report; bytes are a pure function of the report. Every format
/// ends with a trailing newline and uses '\n' separators.
///   csv:      header `method,horizon,mse,mape,n_runs`, masked cells empty
///   markdown: one table, MSE/MAPE column pair per horizon, masked cells
///             "--", per-column best values in bold
///   json:     full detail including per-run values and stds
std::string emit_report(const MetricsReport& report, ReportFormat format);

}  // namespace vitalcast

#endif
