#include "stagdd/fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Dense>

namespace stagdd {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

using ModelFn = std::function<double(const Eigen::VectorXd&, double)>;

double cost(const ModelFn& f, const Eigen::VectorXd& p, const std::vector<double>& t, const std::vector<double>& y) {
    double c = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        const double r = f(p, t[i]) - y[i];
        c += r * r;
    }
    return c;
}

// plain Levenberg-Marquardt with a forward-difference Jacobian
Eigen::VectorXd levenberg_marquardt(const ModelFn& f, Eigen::VectorXd p, const std::vector<double>& t,
                                    const std::vector<double>& y) {
    const int m = static_cast<int>(t.size());
    const int np = static_cast<int>(p.size());
    double mu = 1e-3;
    double c = cost(f, p, t, y);

    for (int iter = 0; iter < 400; ++iter) {
        Eigen::MatrixXd jac(m, np);
        Eigen::VectorXd res(m);
        for (int i = 0; i < m; ++i) res(i) = f(p, t[i]) - y[i];
        for (int j = 0; j < np; ++j) {
            const double h = 1e-7 * std::max(1.0, std::abs(p(j)));
            Eigen::VectorXd ph = p;
            ph(j) += h;
            for (int i = 0; i < m; ++i) jac(i, j) = (f(ph, t[i]) - (res(i) + y[i])) / h;
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * res;
        if (g.cwiseAbs().maxCoeff() < 1e-14) return p;

        bool stepped = false;
        for (int tries = 0; tries < 30; ++tries) {
            Eigen::MatrixXd a = jtj;
            for (int j = 0; j < np; ++j) a(j, j) += mu * std::max(jtj(j, j), 1e-12);
            const Eigen::VectorXd delta = a.ldlt().solve(-g);
            const Eigen::VectorXd cand = p + delta;
            const double cc = cost(f, cand, t, y);
            if (cc < c) {
                const double rel = (c - cc) / std::max(c, 1e-300);
                p = cand;
                c = cc;
                mu = std::max(mu * 0.3, 1e-12);
                stepped = true;
                if (rel < 1e-12 || delta.cwiseAbs().maxCoeff() < 1e-12) return p;
                break;
            }
            mu *= 3.0;
        }
        if (!stepped) return p;  // stuck in a flat region; caller judges the residual
    }
    throw FitError("fit did not converge within the iteration budget");
}

}  // namespace

FitResult fit_curve(const std::vector<double>& t, const std::vector<double>& y, FitModel model) {
    if (t.size() != y.size()) throw FitError("t/y length mismatch");
    const size_t need = (model == FitModel::ExpDecay) ? 5 : 8;
    if (t.size() < need) throw FitError("not enough points for this model");

    FitResult out;
    out.model = model;
    const double ymin = *std::min_element(y.begin(), y.end());
    const double ymax = *std::max_element(y.begin(), y.end());
    const double tspan = t.back() - t.front();
    if (tspan <= 0) throw FitError("time axis must be increasing");

    if (model == FitModel::ExpDecay) {
        const ModelFn f = [](const Eigen::VectorXd& p, double x) { return p(0) * std::exp(-p(1) * x) + p(2); };
        Eigen::VectorXd p(3);
        p << y.front() - y.back(), 3.0 / tspan, y.back();
        p = levenberg_marquardt(f, p, t, y);
        double c = cost(f, p, t, y);
        out.amplitude = p(0);
        out.rate_or_freq = p(1);
        out.offset = p(2);
        out.residual_rms = std::sqrt(c / static_cast<double>(t.size()));
        out.degenerate = std::abs(p(0)) < 1e-9 + 1e-6 * std::max(std::abs(ymin), std::abs(ymax));
        return out;
    }

    // frequency scan: for each candidate, the best a cos + b sin + c is linear
    double min_gap = tspan;
    for (size_t i = 1; i < t.size(); ++i) min_gap = std::min(min_gap, t[i] - t[i - 1]);
    const double f_nyquist = 0.5 / std::max(min_gap, 1e-12);
    double best_f = 0, best_a = 0, best_b = 0, best_c = 0, best_cost = 1e300;
    const int scan = 800;
    for (int k = 1; k <= scan; ++k) {
        const double fc = f_nyquist * k / scan;
        Eigen::MatrixXd m(t.size(), 3);
        Eigen::VectorXd rhs(t.size());
        for (size_t i = 0; i < t.size(); ++i) {
            m(i, 0) = std::cos(kTwoPi * fc * t[i]);
            m(i, 1) = std::sin(kTwoPi * fc * t[i]);
            m(i, 2) = 1.0;
            rhs(i) = y[i];
        }
        const Eigen::VectorXd sol = (m.transpose() * m).ldlt().solve(m.transpose() * rhs);
        const double cc = (m * sol - rhs).squaredNorm();
        if (cc < best_cost) {
            best_cost = cc;
            best_f = fc;
            best_a = sol(0);
            best_b = sol(1);
            best_c = sol(2);
        }
    }

    const ModelFn f = [](const Eigen::VectorXd& p, double x) {
        return p(0) * std::exp(-std::abs(p(4)) * x) * std::cos(kTwoPi * p(1) * x + p(2)) + p(3);
    };
    Eigen::VectorXd p(5);
    p << std::hypot(best_a, best_b), best_f, std::atan2(-best_b, best_a), best_c, 0.1 / tspan;
    p = levenberg_marquardt(f, p, t, y);
    const double c = cost(f, p, t, y);

    // canonical form: positive amplitude and frequency, phase in (-pi, pi]
    double amp = p(0), freq = p(1), phase = p(2);
    if (amp < 0) {
        amp = -amp;
        phase += kTwoPi / 2;
    }
    if (freq < 0) {
        freq = -freq;
        phase = -phase;
    }
    phase = std::remainder(phase, kTwoPi);
    out.amplitude = amp;
    out.rate_or_freq = freq;
    out.phase = phase;
    out.offset = p(3);
    out.residual_rms = std::sqrt(c / static_cast<double>(t.size()));
    out.degenerate = amp < 1e-9 + 1e-6 * std::max(std::abs(ymin), std::abs(ymax));
    if (out.degenerate) out.rate_or_freq = 0.0;
    return out;
}

}  // namespace stagdd
