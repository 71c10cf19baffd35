// vitalcast command-line driver: synthetic data generation, CSV validation,
// the benchmark experiment suite, mutual-information reports, and
// single-model train/predict round trips.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vitalcast/arima.hpp"
#include "vitalcast/checkpoint.hpp"
#include "vitalcast/config.hpp"
#include "vitalcast/csv_io.hpp"
#include "vitalcast/errors.hpp"
#include "vitalcast/gpr.hpp"
#include "vitalcast/impute.hpp"
#include "vitalcast/krr.hpp"
#include "vitalcast/lstm.hpp"
#include "vitalcast/metrics.hpp"
#include "vitalcast/micluster.hpp"
#include "vitalcast/mlp.hpp"
#include "vitalcast/report.hpp"
#include "vitalcast/scaler.hpp"
#include "vitalcast/suite.hpp"
#include "vitalcast/synthgen.hpp"
#include "vitalcast/windows.hpp"

namespace vc = vitalcast;

namespace {

void write_text_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw vc::Error("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw vc::Error("short write to '" + path + "'");
}

vc::Cohort load_config_cohort(const vc::ExperimentConfig& config) {
    if (config.use_synthetic) return vc::generate_cohort(config.synthetic);
    return vc::ingest_csv(config.csv_path);
}

// ---------------------------------------------------------------- gen-data
int cmd_gen_data(const vc::CohortSpec& spec, const std::string& out_path) {
    spec.validate();
    vc::Cohort cohort = vc::generate_cohort(spec);
    vc::write_cohort_csv(cohort, out_path);
    std::size_t missing = 0;
    for (const auto& r : cohort.records) missing += r.missing_count();
    std::cout << "wrote " << out_path << ": " << cohort.size() << " patients, "
              << spec.steps_per_patient << " steps each, " << missing << " missing cells\n";
    return 0;
}

// ---------------------------------------------------------------- validate
int cmd_validate(const std::string& csv_path) {
    vc::Cohort cohort = vc::ingest_csv(csv_path);
    std::size_t total_missing = 0;
    std::vector<std::string> warnings;
    for (const auto& r : cohort.records) {
        total_missing += r.missing_count();
        for (std::size_t t = 0; t < r.steps(); ++t) {
            for (std::size_t v = 0; v < vc::kNumVitals; ++v) {
                if (r.is_missing(t, v)) continue;
                double x = r.vitals(t, v);
                const vc::VitalRange& range = vc::kVitalRanges[v];
                if (x < range.lo || x > range.hi) {
                    warnings.push_back(r.patient_id + " " + vc::kVitalNames[v] + " step " +
                                       std::to_string(t) + ": " + vc::format_double(x) +
                                       " outside [" + vc::format_double(range.lo) + ", " +
                                       vc::format_double(range.hi) + "]");
                }
            }
        }
    }
    // Imputation dry run: proves every series is recoverable downstream.
    vc::impute_locf(cohort);

    std::cout << "patients: " << cohort.size() << "\n";
    for (const auto& r : cohort.records) {
        std::cout << "  " << r.patient_id << ": " << r.steps() << " steps, "
                  << r.missing_count() << " missing cells\n";
    }
    std::cout << "missing cells total: " << total_missing << "\n";
    std::cout << "range warnings: " << warnings.size() << "\n";
    for (const auto& w : warnings) std::cout << "  warning: " << w << "\n";
    std::cout << "ok\n";
    return 0;
}

// -------------------------------------------------------------- experiment
struct ExperimentOverrides {
    std::optional<std::uint64_t> seed;
    std::vector<std::string> methods;
    std::vector<int> horizons;
    std::string out_dir;
};

int cmd_experiment(const std::string& config_path, const ExperimentOverrides& overrides) {
    vc::ExperimentConfig config = vc::ExperimentConfig::load(config_path);
    if (overrides.seed) config.seeds = {*overrides.seed};
    if (!overrides.methods.empty()) config.methods = overrides.methods;
    if (!overrides.horizons.empty()) config.horizons = overrides.horizons;
    if (!overrides.out_dir.empty()) config.output.directory = overrides.out_dir;
    config.validate();

    vc::Cohort cohort = load_config_cohort(config);
    vc::MetricsReport report =
        vc::run_suite(config, cohort, [](const std::string& line) { std::cerr << line << "\n"; });

    std::filesystem::create_directories(config.output.directory);
    for (vc::ReportFormat format : config.output.formats) {
        std::filesystem::path path = std::filesystem::path(config.output.directory) /
                                     (config.output.basename + "." +
                                      vc::report_format_extension(format));
        write_text_file(path.string(), vc::emit_report(report, format));
        std::cerr << "wrote " << path.string() << "\n";
    }
    std::cout << vc::emit_report(report, vc::ReportFormat::markdown);
    return 0;
}

// --------------------------------------------------------------- mi-report
int cmd_mi_report(const std::string& config_path, const std::string& out_path,
                  std::optional<std::uint64_t> seed_override) {
    vc::ExperimentConfig config = vc::ExperimentConfig::load(config_path);
    std::uint64_t seed = seed_override ? *seed_override : config.seeds.front();

    vc::Cohort cohort = load_config_cohort(config);
    vc::Cohort imputed = vc::impute_locf(cohort);
    vc::MinMaxScaler scaler = vc::MinMaxScaler::fit(imputed, "full-cohort");
    vc::Cohort scaled = scaler.apply(imputed);

    vc::Rng rng(seed);
    vc::MiScoreTable table = vc::score_cohort(scaled, config.mi.k, rng.derive("mi-scores"));
    vc::Rng sample_rng = rng.derive("mi-sample");
    vc::GroupAssignment groups =
        vc::group_and_sample(table, config.mi.groups, config.mi.g_fraction, sample_rng);

    std::map<std::string, std::size_t> group_of;
    std::map<std::string, bool> in_g;
    for (std::size_t g = 0; g < groups.groups.size(); ++g) {
        for (const std::string& id : groups.groups[g]) group_of[id] = g;
    }
    for (const std::string& id : groups.g_ids) in_g[id] = true;

    // Rows in descending-J order (matching the grouping order).
    std::vector<std::size_t> order(table.patient_ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (table.j_scores[a] != table.j_scores[b]) return table.j_scores[a] > table.j_scores[b];
        return table.patient_ids[a] < table.patient_ids[b];
    });

    std::string csv = "patient_id,j_nats,group,subset\n";
    for (std::size_t i : order) {
        const std::string& id = table.patient_ids[i];
        csv += id + "," + vc::format_double(table.j_scores[i]) + "," +
               std::to_string(group_of.at(id)) + "," + (in_g[id] ? "G'" : "P'") + "\n";
    }
    write_text_file(out_path, csv);
    std::cout << "wrote " << out_path << ": " << table.patient_ids.size() << " patients, "
              << groups.groups.size() << " groups, |G'|=" << groups.g_ids.size()
              << " |P'|=" << groups.p_ids.size() << "\n";
    return 0;
}

// ------------------------------------------------------------------- train
struct TrainArgs {
    std::string csv_path;
    std::string model = "lstm";
    std::string target = "heart_rate";
    int horizon = 1;
    std::size_t window_m = 20;
    std::string out_path;
    std::uint64_t seed = 0;
    std::size_t epochs = 100;
    double learning_rate = 0.001;
    std::size_t hidden = 1;
    std::size_t batch = 20;
    double length = 4.0;
    double lambda = 1e-4;
    double sigma = 1.0;
    std::size_t train_cap = 1000;
};

int cmd_train(const TrainArgs& args) {
    if (args.horizon < 1) throw vc::ConfigError("train: --horizon must be >= 1");
    std::size_t target_vital = vc::vital_index(args.target);

    vc::Cohort cohort = vc::ingest_csv(args.csv_path);
    vc::Cohort imputed = vc::impute_locf(cohort);
    vc::MinMaxScaler scaler = vc::MinMaxScaler::fit(imputed, "train-command");
    vc::Cohort scaled = scaler.apply(imputed);
    vc::WindowedDataset train_w =
        vc::make_windows(scaled, args.window_m, {args.horizon}, target_vital);
    if (train_w.size() == 0) {
        throw vc::Error("train: no usable windows (series shorter than window + horizon)");
    }

    vc::Checkpoint ckpt;
    ckpt.target_vital = static_cast<std::uint32_t>(target_vital);
    ckpt.horizon = args.horizon;
    ckpt.window_m = static_cast<std::uint32_t>(args.window_m);
    ckpt.scaler = scaler;

    vc::TrainConfig tc;
    tc.epochs = args.epochs;
    tc.batch_size = args.batch;
    tc.learning_rate = args.learning_rate;

    vc::Matrix targets(train_w.size(), 1);
    for (std::size_t s = 0; s < train_w.size(); ++s) targets(s, 0) = train_w.target(args.horizon, s);
    vc::SupervisedSet data{&train_w.windows, targets};
    vc::Rng rng(args.seed);

    if (args.model == "lstm") {
        ckpt.kind = vc::ModelKind::lstm;
        vc::LstmFitResult fit = vc::lstm_fit(
            data, vc::LstmShape{train_w.k, args.hidden, 1}, tc, rng);
        ckpt.lstm = fit.model.params();
        std::cout << "final training mse (scaled): " << fit.epoch_loss.back() << "\n";
    } else if (args.model == "mlp") {
        ckpt.kind = vc::ModelKind::mlp;
        vc::MlpShape shape;
        shape.input = args.window_m * train_w.k;
        vc::MlpFitResult fit = vc::mlp_fit(data, shape, tc, rng);
        ckpt.mlp = fit.model.params();
        std::cout << "final training mse (scaled): " << fit.epoch_loss.back() << "\n";
    } else if (args.model == "gpr" || args.model == "krr") {
        std::size_t n = std::min(train_w.size(), args.train_cap);
        vc::Matrix x(n, args.window_m * train_w.k);
        std::vector<double> y(n);
        for (std::size_t r = 0; r < n; ++r) {
            std::size_t s = r * train_w.size() / n;
            const std::vector<double>& flat = train_w.windows[s].storage();
            for (std::size_t c = 0; c < x.cols(); ++c) x(r, c) = flat[c];
            y[r] = train_w.target(args.horizon, s);
        }
        vc::KernelHyper hyper{args.sigma, args.length, args.lambda};
        vc::KernelCheckpoint kc;
        if (args.model == "gpr") {
            ckpt.kind = vc::ModelKind::gpr;
            vc::GprModel model = vc::gpr_fit(x, y, hyper);
            kc = vc::KernelCheckpoint{hyper, model.factorization().lambda_used, model.y_mean(),
                                      model.factorization().train_x, model.alpha()};
        } else {
            ckpt.kind = vc::ModelKind::krr;
            vc::KrrModel model = vc::krr_fit(x, y, hyper);
            kc = vc::KernelCheckpoint{hyper, model.factorization().lambda_used, model.y_mean(),
                                      model.factorization().train_x, model.alpha()};
        }
        ckpt.kernel = std::move(kc);
        std::cout << "fitted on " << n << " windows\n";
    } else if (args.model == "arima") {
        // Coefficients are re-estimated per window at predict time; the
        // checkpoint records the recipe (window, horizon, target, scaler).
        ckpt.kind = vc::ModelKind::arima;
        std::cout << "arima checkpoints store the forecasting recipe only\n";
    } else {
        throw vc::ConfigError("train: unknown --model '" + args.model +
                              "' (expected lstm, mlp, gpr, krr, or arima)");
    }

    vc::save_checkpoint(ckpt, args.out_path);
    std::cout << "wrote " << args.out_path << " (" << vc::model_kind_name(ckpt.kind)
              << ", horizon " << args.horizon << ", target " << args.target << ")\n";
    return 0;
}

// ----------------------------------------------------------------- predict
int cmd_predict(const std::string& ckpt_path, const std::string& csv_path,
                const std::string& out_path) {
    vc::Checkpoint ckpt = vc::load_checkpoint(ckpt_path);
    if (!ckpt.scaler) throw vc::Error("predict: checkpoint has no scaler");

    vc::Cohort cohort = vc::ingest_csv(csv_path);
    vc::Cohort scaled = ckpt.scaler->apply(vc::impute_locf(cohort));

    std::unique_ptr<vc::Predictor> model;
    switch (ckpt.kind) {
        case vc::ModelKind::lstm:
            model = std::make_unique<vc::LstmModel>(*ckpt.lstm);
            break;
        case vc::ModelKind::mlp:
            model = std::make_unique<vc::MlpModel>(*ckpt.mlp);
            break;
        case vc::ModelKind::arima:
            model = std::make_unique<vc::ArimaPredictor>(ckpt.target_vital, ckpt.horizon);
            break;
        case vc::ModelKind::gpr:
        case vc::ModelKind::krr: {
            const vc::KernelCheckpoint& kc = *ckpt.kernel;
            auto fact = std::make_shared<vc::KernelFactorization>();
            fact->train_x = kc.train_x;
            fact->hyper = kc.hyper;
            fact->lambda_used = kc.lambda_used;
            if (ckpt.kind == vc::ModelKind::gpr) {
                model = std::make_unique<vc::GprModel>(fact, kc.alpha, kc.y_mean);
            } else {
                model = std::make_unique<vc::KrrModel>(fact, kc.alpha, kc.y_mean);
            }
            break;
        }
    }
    if (!model) throw vc::Error("predict: unsupported checkpoint kind");

    // One forecast per patient from the last `window_m` observed steps.
    std::string csv = "patient_id,prediction\n";
    for (const auto& r : scaled.records) {
        if (r.steps() < ckpt.window_m) {
            throw vc::Error("predict: patient " + r.patient_id + " has " +
                            std::to_string(r.steps()) + " steps, needs at least " +
                            std::to_string(ckpt.window_m));
        }
        std::size_t start = r.steps() - ckpt.window_m;
        vc::Matrix window(ckpt.window_m, vc::kNumFeatures);
        for (std::size_t t = 0; t < ckpt.window_m; ++t) {
            for (std::size_t v = 0; v < vc::kNumVitals; ++v) window(t, v) = r.vitals(start + t, v);
            window(t, vc::kNumVitals) = r.age;
            window(t, vc::kNumVitals + 1) = r.gender;
        }
        double pred = model->predict(window)[0];
        csv += r.patient_id + "," +
               vc::format_double(ckpt.scaler->invert_feature(ckpt.target_vital, pred)) + "\n";
    }
    write_text_file(out_path, csv);
    std::cout << "wrote " << out_path << ": " << scaled.size() << " forecasts at horizon "
              << ckpt.horizon << " (" << vc::kVitalNames[ckpt.target_vital] << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vitalcast: vital-sign forecasting toolkit"};
    app.require_subcommand(1);

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "Generate a synthetic cohort CSV");
    vc::CohortSpec spec;
    spec.missing_rate = 0.02;
    std::string gen_out;
    gen->add_option("--patients", spec.n_patients, "Number of patients");
    gen->add_option("--steps", spec.steps_per_patient, "Time steps per patient");
    gen->add_option("--archetypes", spec.n_archetypes, "Number of archetypes (1-3)");
    gen->add_option("--missing-rate", spec.missing_rate, "Missing-cell rate [0, 0.1)");
    gen->add_option("--seed", spec.seed, "Generator seed");
    gen->add_option("-o,--out", gen_out, "Output CSV path")->required();

    // validate
    auto* val = app.add_subcommand("validate", "Check a patient CSV against the data contract");
    std::string val_path;
    val->add_option("csv", val_path, "CSV file to validate")->required();

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run the benchmark suite from a JSON config");
    std::string exp_config;
    ExperimentOverrides overrides;
    std::int64_t exp_seed = -1;
    exp->add_option("-c,--config", exp_config, "Experiment config (JSON)")->required();
    exp->add_option("--seed", exp_seed, "Override the config seed list with one seed");
    exp->add_option("--methods", overrides.methods, "Override methods")->delimiter(',');
    exp->add_option("--horizons", overrides.horizons, "Override horizons")->delimiter(',');
    exp->add_option("-o,--out-dir", overrides.out_dir, "Override the report directory");

    // mi-report
    auto* mir = app.add_subcommand("mi-report", "Write patient MI scores and G'/P' membership");
    std::string mir_config;
    std::string mir_out = "mi-report.csv";
    std::int64_t mir_seed = -1;
    mir->add_option("-c,--config", mir_config, "Experiment config (JSON)")->required();
    mir->add_option("-o,--out", mir_out, "Output CSV path");
    mir->add_option("--seed", mir_seed, "Override the config seed");

    // train
    auto* trn = app.add_subcommand("train", "Fit one model and write a checkpoint");
    TrainArgs targs;
    trn->add_option("--csv", targs.csv_path, "Training cohort CSV")->required();
    trn->add_option("--model", targs.model, "lstm, mlp, gpr, krr, or arima");
    trn->add_option("--target", targs.target, "Target vital name");
    trn->add_option("--horizon", targs.horizon, "Forecast horizon (steps ahead)");
    trn->add_option("--window", targs.window_m, "Window length M");
    trn->add_option("-o,--out", targs.out_path, "Checkpoint output path")->required();
    trn->add_option("--seed", targs.seed, "Training seed");
    trn->add_option("--epochs", targs.epochs, "Training epochs (lstm/mlp)");
    trn->add_option("--lr", targs.learning_rate, "Learning rate (lstm/mlp)");
    trn->add_option("--hidden", targs.hidden, "LSTM hidden size");
    trn->add_option("--batch", targs.batch, "Mini-batch size (lstm/mlp)");
    trn->add_option("--length", targs.length, "RBF length scale (gpr/krr)");
    trn->add_option("--lambda", targs.lambda, "Ridge/noise term (gpr/krr)");
    trn->add_option("--sigma", targs.sigma, "RBF signal scale (gpr/krr)");
    trn->add_option("--train-cap", targs.train_cap, "Max kernel training rows");

    // predict
    auto* prd = app.add_subcommand("predict", "Forecast from a checkpoint");
    std::string prd_model, prd_csv, prd_out;
    prd->add_option("--model", prd_model, "Checkpoint path")->required();
    prd->add_option("--csv", prd_csv, "Input cohort CSV")->required();
    prd->add_option("-o,--out", prd_out, "Output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // parse/usage problems are exit 2
    }

    try {
        if (gen->parsed()) return cmd_gen_data(spec, gen_out);
        if (val->parsed()) return cmd_validate(val_path);
        if (exp->parsed()) {
            if (exp->count("--seed") > 0) {
                if (exp_seed < 0) throw vc::ConfigError("--seed must be non-negative");
                overrides.seed = static_cast<std::uint64_t>(exp_seed);
            }
            return cmd_experiment(exp_config, overrides);
        }
        if (mir->parsed()) {
            std::optional<std::uint64_t> seed;
            if (mir->count("--seed") > 0) {
                if (mir_seed < 0) throw vc::ConfigError("--seed must be non-negative");
                seed = static_cast<std::uint64_t>(mir_seed);
            }
            return cmd_mi_report(mir_config, mir_out, seed);
        }
        if (trn->parsed()) return cmd_train(targs);
        if (prd->parsed()) return cmd_predict(prd_model, prd_csv, prd_out);
    } catch (const vc::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;  // no subcommand matched (require_subcommand should prevent this)
}
