#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stagdd/fit.hpp"
#include "stagdd/rng.hpp"
#include "stagdd/types.hpp"

using namespace stagdd;

TEST_CASE("damped cosine recovers a 100 kHz oscillation") {
    // t in ms, so the fitted frequency reads in kHz
    std::vector<double> t, y;
    Rng rng(4);
    for (int k = 0; k < 60; ++k) {
        const double tk = k * 0.002;
        t.push_back(tk);
        y.push_back(0.4 * std::exp(-tk * 3.0) * std::cos(2 * kPi * 100.0 * tk + 0.7) + 0.5 + 0.002 * rng.gauss());
    }
    const FitResult fit = fit_curve(t, y, FitModel::DampedCosine);
    CHECK_FALSE(fit.degenerate);
    CHECK(fit.rate_or_freq == doctest::Approx(100.0).epsilon(0.001));
    CHECK(std::abs(fit.rate_or_freq - 100.0) < 0.1);
    CHECK(fit.amplitude == doctest::Approx(0.4).epsilon(0.05));
    CHECK(fit.offset == doctest::Approx(0.5).epsilon(0.02));
    CHECK(fit.phase == doctest::Approx(0.7).epsilon(0.1));
    CHECK(fit.residual_rms < 0.01);
}

TEST_CASE("damped cosine canonicalizes negative amplitudes and frequencies") {
    std::vector<double> t, y;
    for (int k = 0; k < 50; ++k) {
        const double tk = k * 0.003;
        t.push_back(tk);
        y.push_back(-0.3 * std::cos(2 * kPi * 55.0 * tk - 0.4) + 0.2);
    }
    const FitResult fit = fit_curve(t, y, FitModel::DampedCosine);
    CHECK(fit.amplitude > 0);
    CHECK(fit.rate_or_freq == doctest::Approx(55.0).epsilon(0.001));
    CHECK(fit.phase > -kPi - 1e-12);
    CHECK(fit.phase <= kPi + 1e-12);
    // -0.3 cos(x - 0.4) = 0.3 cos(x - 0.4 + pi)
    CHECK(std::abs(std::remainder(fit.phase - (kPi - 0.4), 2 * kPi)) < 1e-3);
}

TEST_CASE("exponential decay recovers rate within one percent") {
    std::vector<double> t, y;
    for (int k = 0; k < 25; ++k) {
        const double tk = k * 0.05;
        t.push_back(tk);
        y.push_back(0.6 * std::exp(-2.5 * tk) + 0.35);
    }
    const FitResult fit = fit_curve(t, y, FitModel::ExpDecay);
    CHECK(std::abs(fit.rate_or_freq - 2.5) / 2.5 < 0.01);
    CHECK(fit.amplitude == doctest::Approx(0.6).epsilon(1e-4));
    CHECK(fit.offset == doctest::Approx(0.35).epsilon(1e-4));
    CHECK(fit.residual_rms < 1e-8);
}

TEST_CASE("constant data yields a degenerate fit with zero frequency") {
    std::vector<double> t, y;
    for (int k = 0; k < 30; ++k) {
        t.push_back(k * 0.01);
        y.push_back(0.75);
    }
    const FitResult fit = fit_curve(t, y, FitModel::DampedCosine);
    CHECK(fit.degenerate);
    CHECK(fit.rate_or_freq == 0.0);
    CHECK(fit.offset == doctest::Approx(0.75).epsilon(1e-6));

    const FitResult exp_fit = fit_curve(t, y, FitModel::ExpDecay);
    CHECK(exp_fit.degenerate);
    CHECK(exp_fit.residual_rms < 1e-9);
}

TEST_CASE("fit input validation") {
    CHECK_THROWS_AS(fit_curve({0, 1, 2}, {1, 2, 3}, FitModel::ExpDecay), FitError);
    CHECK_THROWS_AS(fit_curve({0, 1, 2, 3, 4, 5, 6}, {1, 1, 1, 1, 1, 1, 1}, FitModel::DampedCosine), FitError);
    CHECK_THROWS_AS(fit_curve({0, 1}, {1, 2, 3}, FitModel::ExpDecay), FitError);
    CHECK_THROWS_AS(fit_curve({1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, FitModel::ExpDecay), FitError);  // flat time axis
}
