// pybind11 surface: the toolkit's main operations for scripting and smoke
// tests — synthetic cohorts, CSV round trips, metrics, the KSG estimator,
// ARIMA fitting, and the full experiment suite.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "vitalcast/arima.hpp"
#include "vitalcast/config.hpp"
#include "vitalcast/csv_io.hpp"
#include "vitalcast/errors.hpp"
#include "vitalcast/impute.hpp"
#include "vitalcast/matrix.hpp"
#include "vitalcast/metrics.hpp"
#include "vitalcast/micluster.hpp"
#include "vitalcast/report.hpp"
#include "vitalcast/rng.hpp"
#include "vitalcast/suite.hpp"
#include "vitalcast/synthgen.hpp"

namespace py = pybind11;
namespace vc = vitalcast;

namespace {

vc::Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw vc::Error("matrix argument must be non-empty");
    vc::Matrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) {
            throw vc::Error("matrix argument rows must have equal length");
        }
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    }
    return m;
}

py::dict cohort_summary(const vc::Cohort& cohort) {
    py::dict out;
    out["patients"] = cohort.size();
    std::size_t missing = 0;
    py::list steps;
    for (const auto& r : cohort.records) {
        missing += r.missing_count();
        steps.append(r.steps());
    }
    out["missing_cells"] = missing;
    out["steps"] = steps;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "vitalcast: vital-sign forecasting toolkit (C++ core)";
    m.attr("__version__") = "0.1.0";
    m.attr("vital_names") = std::vector<std::string>(vc::kVitalNames.begin(),
                                                     vc::kVitalNames.end());

    py::register_exception<vc::ConfigError>(m, "ConfigError");
    py::register_exception<vc::Error>(m, "VitalcastError");

    m.def(
        "rng_uniforms",
        [](std::uint64_t seed, std::size_t n) {
            vc::Rng rng(seed);
            std::vector<double> out(n);
            for (double& x : out) x = rng.uniform();
            return out;
        },
        py::arg("seed"), py::arg("n"), "Deterministic uniform stream for a seed.");

    m.def("mse", &vc::mse, py::arg("predictions"), py::arg("actuals"));
    m.def(
        "mape",
        [](const std::vector<double>& p, const std::vector<double>& a) {
            vc::MapeResult r = vc::mape(p, a);
            return py::make_tuple(r.value, r.excluded);
        },
        py::arg("predictions"), py::arg("actuals"),
        "Returns (mape_percent, n_excluded_near_zero_actuals).");

    m.def(
        "ksg_mi",
        [](const std::vector<std::vector<double>>& x, const std::vector<std::vector<double>>& y,
           std::size_t k, std::uint64_t seed) {
            return vc::ksg_mi(to_matrix(x), to_matrix(y), k, vc::Rng(seed));
        },
        py::arg("x"), py::arg("y"), py::arg("k") = 3, py::arg("seed") = 0,
        "Kraskov mutual information (estimator 1, nats) between row samples.");

    m.def(
        "arima_fit",
        [](const std::vector<double>& series) {
            vc::ArimaCoeffs c = vc::arima_fit(series);
            py::dict out;
            out["mu"] = c.mu;
            out["phi1"] = c.phi1;
            out["phi2"] = c.phi2;
            out["theta1"] = c.theta1;
            out["projected"] = c.projected;
            return out;
        },
        py::arg("series"), "Fit ARIMA(2,0,1) coefficients.");
    m.def(
        "arima_forecast",
        [](const std::vector<double>& series, int h_max) {
            vc::ArimaCoeffs c = vc::arima_fit(series);
            return vc::arima_forecast_path(c, series, h_max);
        },
        py::arg("series"), py::arg("h_max"), "Fit and forecast horizons 1..h_max.");

    m.def(
        "generate_csv",
        [](const std::string& path, std::size_t patients, std::size_t steps,
           std::size_t archetypes, double missing_rate, std::uint64_t seed) {
            vc::CohortSpec spec;
            spec.n_patients = patients;
            spec.steps_per_patient = steps;
            spec.n_archetypes = archetypes;
            spec.missing_rate = missing_rate;
            spec.seed = seed;
            spec.validate();
            vc::Cohort cohort = vc::generate_cohort(spec);
            vc::write_cohort_csv(cohort, path);
            return cohort_summary(cohort);
        },
        py::arg("path"), py::arg("patients") = 40, py::arg("steps") = 288,
        py::arg("archetypes") = 3, py::arg("missing_rate") = 0.02, py::arg("seed") = 0,
        "Write a synthetic cohort CSV; returns a summary dict.");

    m.def(
        "validate_csv",
        [](const std::string& path) {
            vc::Cohort cohort = vc::ingest_csv(path);
            vc::impute_locf(cohort);  // dry run: surfaces imputation failures
            return cohort_summary(cohort);
        },
        py::arg("path"), "Ingest a cohort CSV and return a summary dict.");

    m.def(
        "experiment_reports",
        [](const std::string& config_json) {
            vc::ExperimentConfig config = vc::ExperimentConfig::from_json_text(config_json);
            vc::Cohort cohort = config.use_synthetic ? vc::generate_cohort(config.synthetic)
                                                     : vc::ingest_csv(config.csv_path);
            vc::MetricsReport report = vc::run_suite(config, cohort);
            py::dict out;
            out["csv"] = vc::emit_report(report, vc::ReportFormat::csv);
            out["markdown"] = vc::emit_report(report, vc::ReportFormat::markdown);
            out["json"] = vc::emit_report(report, vc::ReportFormat::json);
            return out;
        },
        py::arg("config_json"),
        "Run the full benchmark suite from a JSON config string; returns all "
        "three report renderings.");
}
