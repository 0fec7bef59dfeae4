// Acceptance gate: one PASS/FAIL line per criterion, exit 0 iff all pass.
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "stagdd/experiments.hpp"
#include "stagdd/verify.hpp"

using namespace stagdd;

namespace {

int failures = 0;

void report(int num, const char* name, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", num, name, detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void criterion_1_zz_formula() {
    const double nu_a = compute_zz_khz(1.93e-3, 0.34, 0.34, 5.13 - 5.04);
    const double nu_b = compute_zz_khz(2.11e-3, 0.34, 0.34, 5.28 - 5.04);
    const double rel_a = std::abs(nu_a - 46.79) / 46.79;
    const double rel_b = std::abs(nu_b - 103.04) / 103.04;
    report(1, "perturbative zz reproduces measured pair strengths within 10%", rel_a < 0.10 && rel_b < 0.10,
           "11-14: " + fmt(nu_a) + " kHz vs 46.79, 13-14: " + fmt(nu_b) + " kHz vs 103.04");
}

void criterion_2_unitary_algebra() {
    std::ostringstream os;
    const bool ok = run_verification(os, 1000, 12345);
    report(2, "zz/dd unitary identities hold over 1000 draws at 1e-10", ok,
           ok ? "all sub-checks passed" : "sub-check failed:\n" + os.str());
}

void criterion_3_exact_cancellation() {
    DeviceModel dev = bundled_device();
    for (auto& q : dev.qubits) q.x_duration = 0;  // zero-duration pulses
    const double nu = 46.79;
    const long long T = 14080;
    NoiseConfig noise;
    noise.add_zz(11, 14, nu);
    Vec pp(4);
    pp << 0.5, 0.5, 0.5, 0.5;
    const DensityMatrix start = DensityMatrix::pure(pp);
    const auto base = schedule_asap({Instruction::barrier({11, 14}), Instruction::delay(11, T),
                                     Instruction::delay(14, T), Instruction::barrier({11, 14})},
                                    dev);
    const auto run = [&](DDMode mode) {
        const auto dressed = insert_dd(base, make_plan(DDSequenceName::X2, mode, {{11, 14}}), dev, nullptr);
        return simulate(dressed, dev, noise, start);
    };

    const DensityMatrix stag = run(DDMode::Staggered);
    const double fidelity = std::real((start.rho * stag.rho).trace());

    const DensityMatrix stnd = run(DDMode::Standard);
    const double theta_expect = 2.0 * kPi * nu * dev.dt_to_ns(T) * 1e-6;
    const double theta_got = -std::arg(stnd.rho(0, 1) / 0.25);
    const double angle_err = std::abs(std::remainder(theta_got - theta_expect, 2.0 * kPi));

    report(3, "staggered x2 cancels pure zz exactly, standard accumulates 2*pi*nu*2tau",
           std::abs(fidelity - 1.0) < 1e-9 && angle_err < 1e-9,
           "staggered fidelity " + fmt(fidelity) + ", standard angle " + fmt(theta_got) + " rad vs " +
               fmt(theta_expect) + " (err " + fmt(angle_err) + ")");
}

double ramsey_fit_khz(double zz_khz, DDMode mode) {
    const auto& dev = bundled_device();
    RamseyConfig cfg;
    cfg.qubit = 11;
    cfg.spectator = 14;
    cfg.detuning_khz = 100.0;
    for (long long k = 1; k <= 40; ++k) cfg.delays.push_back(k * 2250);
    NoiseConfig noise;
    if (zz_khz != 0.0) noise.add_zz(11, 14, zz_khz);
    const auto plan = make_plan(DDSequenceName::X2pm, mode, {{11, 14}});
    return fit_experiment(run_ramsey(cfg, plan, dev, noise), FitModel::DampedCosine).rate_or_freq;
}

void criterion_4_ramsey_shift() {
    const double clean_std = ramsey_fit_khz(0.0, DDMode::Standard);
    const double clean_stag = ramsey_fit_khz(0.0, DDMode::Staggered);
    const bool a_ok = std::abs(clean_std - 100.0) < 0.5 && std::abs(clean_stag - 100.0) < 0.5;

    // tune the crosstalk sign so standard x2pm reads 91.7 kHz, then compare
    double std_fit = 0, stag_fit = 0;
    bool b_ok = false;
    for (double nu : {8.3, -8.3}) {
        const double f = ramsey_fit_khz(nu, DDMode::Standard);
        if (std::abs(f - 91.7) < 0.5) {
            std_fit = f;
            stag_fit = ramsey_fit_khz(nu, DDMode::Staggered);
            b_ok = stag_fit >= 99.0;
            break;
        }
    }
    report(4, "ramsey: no-zz fits 100 kHz; standard shifts to 91.7, staggered recovers >= 99", a_ok && b_ok,
           "clean std " + fmt(clean_std) + ", clean stag " + fmt(clean_stag) + ", zz std " + fmt(std_fit) +
               ", zz stag " + fmt(stag_fit));
}

void criterion_5_ordering() {
    const auto& dev = bundled_device();
    NoiseConfig noise;
    noise.add_zz(11, 14, 46.79);
    noise.add_zz(12, 13, 66.12);
    noise.add_zz(13, 14, 103.04);
    noise.rotary_echo = true;

    const std::vector<std::pair<int, int>> coupled = {{11, 14}, {12, 13}, {13, 14}};
    const auto favg_idle = [&](DDMode mode) {
        RBConfig a, b;
        a.qubit_pair = {11, 14};
        b.qubit_pair = {12, 13};
        a.seed = 7;
        b.seed = 8;
        const auto plan = make_plan(DDSequenceName::X2pm, mode, coupled);
        const auto [ra, rb] = run_idle_idle(a, b, plan, dev, noise);
        return std::make_pair(time_avg_fidelity(ra), time_avg_fidelity(rb));
    };
    const auto [stag_a, stag_b] = favg_idle(DDMode::Staggered);
    const auto [std_a, std_b] = favg_idle(DDMode::Standard);
    const auto [free_a, free_b] = favg_idle(DDMode::None);
    const bool idle_ok = stag_a > std_a && stag_b > std_b && std_a >= free_a && std_b >= free_b;

    const auto favg_driven = [&](DDMode mode) {
        RBConfig rb;
        rb.qubit_pair = {11, 14};
        rb.seed = 7;
        const auto plan = make_plan(DDSequenceName::X2pm, mode, coupled);
        return time_avg_fidelity(run_driven_idle(rb, {12, 13}, plan, dev, noise));
    };
    const double dr_stag = favg_driven(DDMode::Staggered);
    const double dr_std = favg_driven(DDMode::Standard);
    const double dr_free = favg_driven(DDMode::None);
    const bool driven_ok = dr_stag > dr_std && dr_std >= dr_free;

    report(5, "F_avg ordering staggered > standard >= free on idle-idle and driven-idle", idle_ok && driven_ok,
           "idle 11-14: " + fmt(stag_a) + "/" + fmt(std_a) + "/" + fmt(free_a) + ", idle 12-13: " + fmt(stag_b) +
               "/" + fmt(std_b) + "/" + fmt(free_b) + ", driven: " + fmt(dr_stag) + "/" + fmt(dr_std) + "/" +
               fmt(dr_free));
}

void criterion_6_rb() {
    const auto& dev = bundled_device();
    NoiseConfig noiseless;
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RBConfig cfg;
        cfg.qubit_pair = (seed % 2) ? std::make_pair(12, 13) : std::make_pair(11, 14);
        cfg.seed = seed;
        const auto circuit = gen_rb_circuit(cfg, 1280 + 128 * (seed % 11), dev);
        const double p00 = prob_all_zero(simulate(circuit, dev, noiseless), {0, 1});
        worst = std::max(worst, std::abs(p00 - 1.0));
    }
    const bool circuits_ok = worst < 1e-9;

    const auto& table = CliffordTable::instance();
    Rng rng(314159);
    bool inverses_ok = true;
    for (int i = 0; i < 10000 && inverses_ok; ++i) {
        const CliffordTableau t = CliffordTableau::from_unitary(table.unitary(table.sample(rng)));
        inverses_ok = t.compose(t.inverse()).is_identity();
    }
    report(6, "noiseless rb returns |00> for 100 seeds; 10^4 tableau inverse draws", circuits_ok && inverses_ok,
           "worst |P(00)-1| = " + fmt(worst) + (inverses_ok ? ", all inverses identity" : ", inverse check failed"));
}

void criterion_7_sign_alternation() {
    const auto& dev = bundled_device();
    NoiseConfig clean;
    bool ok = true;
    double min_gap = 1e300;
    for (double nu : {20.0, 40.0, 60.0, 80.0, 100.0}) {
        NoiseConfig noise;
        noise.add_zz(11, 14, nu);
        noise.overrotation_epsilon = 0.02;

        const auto base = schedule_asap({Instruction::gate(GateKind::SX, {11}), Instruction::barrier({11, 14}),
                                         Instruction::delay(11, 14080), Instruction::delay(14, 14080),
                                         Instruction::barrier({11, 14}), Instruction::gate(GateKind::SX, {11})},
                                        dev);
        DDPlan plan;
        plan.mode = DDMode::Standard;
        plan.roles[11] = StaggerRole::Symmetric;  // spectator 14 stays idle in |0>
        const DensityMatrix ideal = simulate(base, dev, clean);
        const auto dist = [&](DDSequenceName seq) {
            plan.sequence = seq;
            return trace_distance(simulate(insert_dd(base, plan, dev, nullptr), dev, noise), ideal);
        };
        const double d_x2 = dist(DDSequenceName::X2);
        const double d_pm = dist(DDSequenceName::X2pm);
        if (!(d_pm < d_x2 && d_x2 - d_pm > 1e-6)) ok = false;
        min_gap = std::min(min_gap, d_x2 - d_pm);
    }
    report(7, "sign-alternating x2pm beats plain x2 under over-rotation across a zz sweep", ok,
           "min trace-distance gap " + fmt(min_gap));
}

void criterion_8_determinism() {
    const auto& dev = bundled_device();
    NoiseConfig noise;
    noise.add_zz(11, 14, 46.79);
    noise.add_zz(12, 13, 66.12);
    noise.add_zz(13, 14, 103.04);
    const auto plan = make_plan(DDSequenceName::X2pm, DDMode::Staggered, {{11, 14}, {12, 13}, {13, 14}});
    const auto run_once = [&] {
        RBConfig a, b;
        a.qubit_pair = {11, 14};
        b.qubit_pair = {12, 13};
        a.seed = 99;
        b.seed = 100;
        a.delays_2tau = b.delays_2tau = {1280, 5120, 8960};
        const auto [ra, rb] = run_idle_idle(a, b, plan, dev, noise, 400);
        std::ostringstream os;
        write_results_csv(os, {ra, rb});
        return os.str();
    };
    const std::string first = run_once();
    const std::string second = run_once();
    report(8, "repeated runs with identical config and seed produce byte-identical csv", first == second,
           first == second ? "outputs match byte for byte" : "outputs differ");
}

}  // namespace

int main() {
    criterion_1_zz_formula();
    criterion_2_unitary_algebra();
    criterion_3_exact_cancellation();
    criterion_4_ramsey_shift();
    criterion_5_ordering();
    criterion_6_rb();
    criterion_7_sign_alternation();
    criterion_8_determinism();
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
