#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace stagdd {

enum class FitModel { ExpDecay, DampedCosine };

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ExpDecay:     y = A exp(-rate t) + B              (rate_or_freq = rate)
// DampedCosine: y = A exp(-t/T) cos(2 pi f t + phi) + B   (rate_or_freq = f)
// Units follow the caller's t axis; pass t in ms to obtain f in kHz.
struct FitResult {
    FitModel model = FitModel::ExpDecay;
    double amplitude = 0.0;
    double rate_or_freq = 0.0;
    double phase = 0.0;
    double offset = 0.0;
    double residual_rms = 0.0;
    // amplitude indistinguishable from zero; frequency is meaningless
    bool degenerate = false;
};

// Nonlinear least squares (Levenberg-Marquardt) with a spectral-scan initial
// frequency guess. Requires >= 5 points for ExpDecay, >= 8 for DampedCosine.
// Throws FitError on non-convergence.
FitResult fit_curve(const std::vector<double>& t, const std::vector<double>& y, FitModel model);

}  // namespace stagdd
