#include <doctest.h>

#include <fstream>
#include <vector>

#include "test_util.hpp"
#include "vitalcast/checkpoint.hpp"
#include "vitalcast/errors.hpp"
#include "vitalcast/rng.hpp"

using vitalcast::Checkpoint;
using vitalcast::Matrix;
using vitalcast::ModelKind;
using vitalcast::Rng;

namespace {

vitalcast::MinMaxScaler demo_scaler() {
    std::array<double, 2 * vitalcast::kNumFeatures> flat{};
    for (std::size_t f = 0; f < vitalcast::kNumFeatures; ++f) {
        flat[f] = static_cast<double>(f);
        flat[vitalcast::kNumFeatures + f] = static_cast<double>(f) + 10.0;
    }
    return vitalcast::MinMaxScaler::from_flat(flat, "unit-test");
}

}  // namespace

TEST_CASE("lstm checkpoints round-trip") {
    testutil::TempDir dir;
    Rng rng(1);
    Checkpoint cp;
    cp.kind = ModelKind::lstm;
    cp.target_vital = 3;
    cp.horizon = 4;
    cp.window_m = 12;
    cp.scaler = demo_scaler();
    cp.lstm = vitalcast::LstmParams::init({7, 3, 5}, rng);

    auto path = dir.file("model.vckp");
    vitalcast::save_checkpoint(cp, path.string());
    Checkpoint back = vitalcast::load_checkpoint(path.string());

    CHECK(back.kind == ModelKind::lstm);
    CHECK(back.target_vital == 3);
    CHECK(back.horizon == 4);
    CHECK(back.window_m == 12);
    REQUIRE(back.scaler.has_value());
    for (std::size_t f = 0; f < vitalcast::kNumFeatures; ++f) {
        CHECK(back.scaler->feature_min(f) == cp.scaler->feature_min(f));
        CHECK(back.scaler->feature_max(f) == cp.scaler->feature_max(f));
    }
    REQUIRE(back.lstm.has_value());
    CHECK(back.lstm->shape == cp.lstm->shape);
    CHECK(back.lstm->flat == cp.lstm->flat);
    CHECK_FALSE(back.mlp.has_value());
    CHECK_FALSE(back.kernel.has_value());
}

TEST_CASE("mlp checkpoints round-trip") {
    testutil::TempDir dir;
    Rng rng(2);
    Checkpoint cp;
    cp.kind = ModelKind::mlp;
    cp.mlp = vitalcast::MlpParams::init({14, {6, 4}, 1}, rng);

    auto path = dir.file("mlp.vckp");
    vitalcast::save_checkpoint(cp, path.string());
    Checkpoint back = vitalcast::load_checkpoint(path.string());
    REQUIRE(back.mlp.has_value());
    CHECK(back.mlp->shape == cp.mlp->shape);
    CHECK(back.mlp->flat == cp.mlp->flat);
    CHECK_FALSE(back.scaler.has_value());
}

TEST_CASE("kernel checkpoints round-trip") {
    testutil::TempDir dir;
    Checkpoint cp;
    cp.kind = ModelKind::gpr;
    vitalcast::KernelCheckpoint k;
    k.hyper = vitalcast::KernelHyper{1.0, 4.0, 1e-2};
    k.lambda_used = 1e-2;
    k.y_mean = 0.37;
    k.train_x = Matrix::from_rows({{0.1, 0.2}, {0.3, 0.4}, {0.5, 0.6}});
    k.alpha = {1.5, -2.5, 1.0};
    cp.kernel = k;

    auto path = dir.file("gpr.vckp");
    vitalcast::save_checkpoint(cp, path.string());
    Checkpoint back = vitalcast::load_checkpoint(path.string());
    REQUIRE(back.kernel.has_value());
    CHECK(back.kernel->hyper.length == 4.0);
    CHECK(back.kernel->hyper.lambda == 1e-2);
    CHECK(back.kernel->lambda_used == 1e-2);
    CHECK(back.kernel->y_mean == 0.37);
    CHECK(back.kernel->train_x == k.train_x);
    CHECK(back.kernel->alpha == k.alpha);
}

TEST_CASE("arima checkpoints carry only the recipe") {
    testutil::TempDir dir;
    Checkpoint cp;
    cp.kind = ModelKind::arima;
    cp.target_vital = 1;
    cp.horizon = 2;
    cp.window_m = 30;
    auto path = dir.file("arima.vckp");
    vitalcast::save_checkpoint(cp, path.string());
    Checkpoint back = vitalcast::load_checkpoint(path.string());
    CHECK(back.kind == ModelKind::arima);
    CHECK(back.window_m == 30);
    CHECK_FALSE(back.lstm.has_value());
}

TEST_CASE("model kind names are stable") {
    CHECK(std::string(vitalcast::model_kind_name(ModelKind::lstm)) == "lstm");
    CHECK(std::string(vitalcast::model_kind_name(ModelKind::mlp)) == "mlp");
    CHECK(std::string(vitalcast::model_kind_name(ModelKind::arima)) == "arima");
    CHECK(std::string(vitalcast::model_kind_name(ModelKind::gpr)) == "gpr");
    CHECK(std::string(vitalcast::model_kind_name(ModelKind::krr)) == "krr");
}

TEST_CASE("corrupt checkpoints are rejected with useful messages") {
    testutil::TempDir dir;

    auto garbage = dir.file("junk.vckp");
    testutil::write_file(garbage, "XXXXnot a checkpoint at all");
    auto msg = testutil::message_of<vitalcast::Error>(
        [&] { vitalcast::load_checkpoint(garbage.string()); });
    CHECK(testutil::contains(msg, "magic"));

    // A valid file truncated mid-payload.
    Checkpoint cp;
    cp.kind = ModelKind::lstm;
    Rng rng(3);
    cp.lstm = vitalcast::LstmParams::init({4, 2, 1}, rng);
    auto good = dir.file("good.vckp");
    vitalcast::save_checkpoint(cp, good.string());
    std::string bytes = testutil::read_file(good);
    auto cut = dir.file("cut.vckp");
    testutil::write_file(cut, bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(vitalcast::load_checkpoint(cut.string()), vitalcast::Error);

    // Unsupported version: byte 4 holds the little-endian version word.
    std::string versioned = bytes;
    versioned[4] = 99;
    auto bad_version = dir.file("version.vckp");
    testutil::write_file(bad_version, versioned);
    auto vmsg = testutil::message_of<vitalcast::Error>(
        [&] { vitalcast::load_checkpoint(bad_version.string()); });
    CHECK(testutil::contains(vmsg, "version"));

    // Unknown model kind: byte 8 holds the kind word.
    std::string rekinded = bytes;
    rekinded[8] = 77;
    auto bad_kind = dir.file("kind.vckp");
    testutil::write_file(bad_kind, rekinded);
    CHECK_THROWS_AS(vitalcast::load_checkpoint(bad_kind.string()), vitalcast::Error);

    CHECK_THROWS_AS(vitalcast::load_checkpoint((dir.path() / "absent.vckp").string()),
                    vitalcast::Error);
}
