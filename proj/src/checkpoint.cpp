#include "vitalcast/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "vitalcast/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace vitalcast {

namespace {

constexpr char kMagic[4] = {'V', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;
// Caps protect load_checkpoint from allocating absurd buffers on corrupt
// headers; real artifacts are far smaller.
constexpr std::uint64_t kMaxElements = 1ull << 28;

struct Writer {
    std::ofstream out;
    explicit Writer(const std::string& path) : out(path, std::ios::binary) {
        if (!out) throw Error("cannot open '" + path + "' for writing");
    }
    void u32(std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); }
    void i32(std::int32_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); }
    void f64(double v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); }
    void doubles(const double* data, std::size_t count) {
        out.write(reinterpret_cast<const char*>(data),
                  static_cast<std::streamsize>(count * sizeof(double)));
    }
};

struct Reader {
    std::ifstream in;
    std::string path;
    explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
        if (!in) throw Error("cannot open checkpoint '" + p + "'");
    }
    void raw(void* dst, std::size_t count) {
        in.read(static_cast<char*>(dst), static_cast<std::streamsize>(count));
        if (!in) throw Error("corrupt checkpoint '" + path + "': truncated");
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, sizeof(v));
        return v;
    }
    std::int32_t i32() {
        std::int32_t v;
        raw(&v, sizeof(v));
        return v;
    }
    double f64() {
        double v;
        raw(&v, sizeof(v));
        return v;
    }
    void doubles(double* dst, std::uint64_t count) {
        if (count > kMaxElements) {
            throw Error("corrupt checkpoint '" + path + "': implausible element count");
        }
        raw(dst, count * sizeof(double));
    }
    void expect_eof() {
        char extra;
        in.read(&extra, 1);
        if (!in.eof()) throw Error("corrupt checkpoint '" + path + "': trailing bytes");
    }
};

}  // namespace

const char* model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::lstm: return "lstm";
        case ModelKind::mlp: return "mlp";
        case ModelKind::arima: return "arima";
        case ModelKind::gpr: return "gpr";
        case ModelKind::krr: return "krr";
    }
    return "unknown";
}

void save_checkpoint(const Checkpoint& cp, const std::string& path) {
    Writer w(path);
    w.out.write(kMagic, sizeof(kMagic));
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(cp.kind));
    w.u32(cp.target_vital);
    w.i32(cp.horizon);
    w.u32(cp.window_m);
    w.u32(cp.scaler.has_value() ? 1 : 0);
    if (cp.scaler) {
        const auto flat = cp.scaler->to_flat();
        w.doubles(flat.data(), flat.size());
    }
    switch (cp.kind) {
        case ModelKind::lstm: {
            require(cp.lstm.has_value(), "save_checkpoint: lstm payload missing");
            w.u32(static_cast<std::uint32_t>(cp.lstm->shape.input));
            w.u32(static_cast<std::uint32_t>(cp.lstm->shape.hidden));
            w.u32(static_cast<std::uint32_t>(cp.lstm->shape.output));
            w.doubles(cp.lstm->flat.data(), cp.lstm->flat.size());
            break;
        }
        case ModelKind::mlp: {
            require(cp.mlp.has_value(), "save_checkpoint: mlp payload missing");
            w.u32(static_cast<std::uint32_t>(cp.mlp->shape.input));
            w.u32(static_cast<std::uint32_t>(cp.mlp->shape.hidden.size()));
            for (std::size_t width : cp.mlp->shape.hidden)
                w.u32(static_cast<std::uint32_t>(width));
            w.u32(static_cast<std::uint32_t>(cp.mlp->shape.output));
            w.doubles(cp.mlp->flat.data(), cp.mlp->flat.size());
            break;
        }
        case ModelKind::arima:
            break;
        case ModelKind::gpr:
        case ModelKind::krr: {
            require(cp.kernel.has_value(), "save_checkpoint: kernel payload missing");
            const auto& k = *cp.kernel;
            w.u32(static_cast<std::uint32_t>(k.train_x.rows()));
            w.u32(static_cast<std::uint32_t>(k.train_x.cols()));
            w.f64(k.hyper.sigma);
            w.f64(k.hyper.length);
            w.f64(k.hyper.lambda);
            w.f64(k.lambda_used);
            w.f64(k.y_mean);
            w.doubles(k.train_x.data(), k.train_x.size());
            w.doubles(k.alpha.data(), k.alpha.size());
            break;
        }
    }
    if (!w.out) throw Error("failed while writing checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    Reader r(path);
    char magic[4];
    r.raw(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw Error("'" + path + "' is not a model checkpoint (bad magic bytes)");
    }
    const std::uint32_t version = r.u32();
    if (version != kVersion) {
        throw Error("checkpoint '" + path + "' has unsupported version " +
                    std::to_string(version));
    }
    Checkpoint cp;
    const std::uint32_t kind_tag = r.u32();
    if (kind_tag < 1 || kind_tag > 5) {
        throw Error("checkpoint '" + path + "' has unknown model kind " +
                    std::to_string(kind_tag));
    }
    cp.kind = static_cast<ModelKind>(kind_tag);
    cp.target_vital = r.u32();
    cp.horizon = r.i32();
    cp.window_m = r.u32();
    const std::uint32_t has_scaler = r.u32();
    if (has_scaler) {
        std::array<double, 2 * kNumFeatures> flat;
        r.doubles(flat.data(), flat.size());
        cp.scaler = MinMaxScaler::from_flat(flat, "checkpoint");
    }
    switch (cp.kind) {
        case ModelKind::lstm: {
            LstmShape shape;
            shape.input = r.u32();
            shape.hidden = r.u32();
            shape.output = r.u32();
            if (shape.input == 0 || shape.hidden == 0 || shape.output == 0 ||
                shape.param_count() > kMaxElements) {
                throw Error("corrupt checkpoint '" + path + "': bad lstm shape");
            }
            LstmParams params = LstmParams::zeros(shape);
            r.doubles(params.flat.data(), params.flat.size());
            cp.lstm = std::move(params);
            break;
        }
        case ModelKind::mlp: {
            MlpShape shape;
            shape.input = r.u32();
            const std::uint32_t n_hidden = r.u32();
            if (n_hidden > 64) throw Error("corrupt checkpoint '" + path + "': bad mlp depth");
            shape.hidden.resize(n_hidden);
            for (auto& width : shape.hidden) width = r.u32();
            shape.output = r.u32();
            bool sane = shape.input >= 1 && shape.output >= 1;
            for (std::size_t width : shape.hidden) sane = sane && width >= 1;
            if (!sane || shape.param_count() > kMaxElements) {
                throw Error("corrupt checkpoint '" + path + "': bad mlp shape");
            }
            MlpParams params = MlpParams::zeros(shape);
            r.doubles(params.flat.data(), params.flat.size());
            cp.mlp = std::move(params);
            break;
        }
        case ModelKind::arima:
            break;
        case ModelKind::gpr:
        case ModelKind::krr: {
            const std::uint64_t n = r.u32();
            const std::uint64_t d = r.u32();
            if (n == 0 || d == 0 || n * d > kMaxElements) {
                throw Error("corrupt checkpoint '" + path + "': bad kernel shape");
            }
            KernelCheckpoint k;
            k.hyper.sigma = r.f64();
            k.hyper.length = r.f64();
            k.hyper.lambda = r.f64();
            k.lambda_used = r.f64();
            k.y_mean = r.f64();
            k.train_x = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
            r.doubles(k.train_x.data(), n * d);
            k.alpha.resize(static_cast<std::size_t>(n));
            r.doubles(k.alpha.data(), n);
            cp.kernel = std::move(k);
            break;
        }
    }
    r.expect_eof();
    return cp;
}

}  // namespace vitalcast
