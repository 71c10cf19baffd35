#ifndef VITALCAST_ARIMA_HPP
#define VITALCAST_ARIMA_HPP

#include <vector>

#include "vitalcast/predictor.hpp"

namespace vitalcast {

/// ARIMA(2,0,1) around a fitted mean:
///   (x_t − μ) = φ1(x_{t−1} − μ) + φ2(x_{t−2} − μ) + θ1·e_{t−1} + e_t.
struct ArimaCoeffs {
    double mu = 0.0;
    double phi1 = 0.0;
    double phi2 = 0.0;
    double theta1 = 0.0;
    /// True when the fitted AR polynomial had to be projected into the
    /// stationary region or θ1 clamped to [-0.99, 0.99].
    bool projected = false;
};

/// Fits by Hannan–Rissanen (long-AR residual regression) followed by
/// conditional-sum-of-squares refinement (Gauss–Newton with Levenberg
/// damping, innovations conditioned to zero before the first usable step).
/// A constant series yields all-zero φ/θ with μ equal to that constant.
/// Requires series length ≥ 20.
ArimaCoeffs arima_fit(const std::vector<double>& series);

/// Forecast at t+h: in-sample innovations are reconstructed over `series`,
/// then the recursion runs forward with future innovations set to zero.
double arima_forecast(const ArimaCoeffs& coeffs, const std::vector<double>& series, int h);

/// Forecasts for every horizon 1..h_max from one innovation reconstruction.
std::vector<double> arima_forecast_path(const ArimaCoeffs& coeffs,
                                        const std::vector<double>& series, int h_max);

/// Predictor adapter: fits on the window's target-vital column at every
/// predict call (the model is estimated per window, from its M values).
class ArimaPredictor : public Predictor {
public:
    ArimaPredictor(std::size_t target_vital, int horizon)
        : target_vital_(target_vital), horizon_(horizon) {}

    std::vector<double> predict(const Matrix& window) const override;
    std::size_t output_dim() const override { return 1; }

    std::size_t target_vital() const { return target_vital_; }
    int horizon() const { return horizon_; }

private:
    std::size_t target_vital_;
    int horizon_;
};

}  // namespace vitalcast

#endif
