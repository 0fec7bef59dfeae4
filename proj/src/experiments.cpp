#include "stagdd/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <set>
#include <sstream>
#include <stdexcept>

namespace stagdd {

namespace {

std::string pair_label(std::pair<int, int> p) { return std::to_string(p.first) + "-" + std::to_string(p.second); }

void append(std::vector<Instruction>& dst, std::vector<Instruction> src) {
    dst.insert(dst.end(), std::make_move_iterator(src.begin()), std::make_move_iterator(src.end()));
}

double fidelity_for(const ScheduledCircuit& circuit, const DensityMatrix& rho, const std::vector<int>& device_qubits,
                    std::optional<long long> shots, Rng* shot_rng) {
    const std::vector<int> ids = circuit.qubit_ids();
    std::vector<int> locals;
    for (int q : device_qubits) {
        const auto it = std::find(ids.begin(), ids.end(), q);
        if (it == ids.end()) throw std::invalid_argument("qubit not present in circuit");
        locals.push_back(static_cast<int>(it - ids.begin()));
    }
    const double p = prob_all_zero(rho, locals);
    if (!shots) return p;
    if (*shots <= 0) throw std::invalid_argument("shots must be positive");
    long long hits = 0;
    for (long long s = 0; s < *shots; ++s)
        if (shot_rng->uniform() < p) ++hits;
    return static_cast<double>(hits) / static_cast<double>(*shots);
}

// deterministic fan-out over delay points, results gathered in input order
template <typename Fn>
std::vector<double> map_delays(const std::vector<long long>& delays, Fn&& fn) {
    std::vector<std::future<double>> futs;
    futs.reserve(delays.size());
    for (long long d : delays) futs.push_back(std::async(std::launch::async, fn, d));
    std::vector<double> out;
    out.reserve(delays.size());
    for (auto& f : futs) out.push_back(f.get());
    return out;
}

void fill_axes(ExperimentResult& r, const std::vector<long long>& delays, const DeviceModel& device) {
    r.delays_dt = delays;
    for (long long d : delays) r.delays_ns.push_back(device.dt_to_ns(d));
}

std::vector<Instruction> rb_body(const std::pair<int, int>& pair, const std::vector<int>& cliffords,
                                 long long delay_2tau) {
    const auto& table = CliffordTable::instance();
    const int a = pair.first, b = pair.second;
    std::vector<Instruction> prog;
    Mat4 composite = Mat4::Identity();
    for (int idx : cliffords) {
        append(prog, table.circuit(idx, a, b));
        composite = table.unitary(idx) * composite;
        prog.push_back(Instruction::barrier({a, b}));
        prog.push_back(Instruction::delay(a, delay_2tau));
        prog.push_back(Instruction::delay(b, delay_2tau));
        prog.push_back(Instruction::barrier({a, b}));
    }
    const int inv = table.index_of(Mat4(composite.adjoint()));
    if (inv < 0) throw std::runtime_error("composite Clifford inversion failed");
    append(prog, table.circuit(inv, a, b));
    prog.push_back(Instruction::barrier({a, b}));
    prog.push_back(Instruction::gate(GateKind::Measure, {a}));
    prog.push_back(Instruction::gate(GateKind::Measure, {b}));
    return prog;
}

NoiseConfig with_zz_mode(NoiseConfig noise, ZZMode mode) {
    noise.zz_discrete = (mode == ZZMode::PreDelayGate);
    return noise;
}

}  // namespace

std::vector<long long> default_delays() {
    std::vector<long long> out;
    for (int k = 0; k <= 10; ++k) out.push_back(1280 + k * 1280);
    return out;
}

std::vector<int> sample_rb_cliffords(const RBConfig& config) {
    if (config.n_cliffords < 1) throw std::invalid_argument("n_cliffords must be >= 1");
    Rng rng(config.seed);
    const auto& table = CliffordTable::instance();
    std::vector<int> out;
    out.reserve(config.n_cliffords);
    for (int i = 0; i < config.n_cliffords; ++i) out.push_back(table.sample(rng));
    return out;
}

ScheduledCircuit gen_rb_circuit(const RBConfig& config, long long delay_2tau, const DeviceModel& device) {
    if (!device.coupling(config.qubit_pair.first, config.qubit_pair.second))
        throw std::invalid_argument("RB pair is not coupled on this device");
    return schedule_alap(rb_body(config.qubit_pair, sample_rb_cliffords(config), delay_2tau), device);
}

ExperimentResult run_rb_isolated(const RBConfig& config, const DDPlan& plan, const DeviceModel& device,
                                 const NoiseConfig& noise, std::optional<long long> shots) {
    const std::vector<int> cliffords = sample_rb_cliffords(config);
    const std::vector<long long>& delays = config.delays_2tau.empty() ? default_delays() : config.delays_2tau;

    ExperimentResult res;
    res.experiment = "rb";
    res.sequence = sequence_name(plan.sequence);
    res.mode = mode_name(plan.mode);
    res.pair_label = pair_label(config.qubit_pair);
    res.seed = config.seed;
    fill_axes(res, delays, device);

    Rng shot_rng(config.seed ^ 0x5bf03635);
    res.fidelity = map_delays(delays, [&](long long d) {
        ScheduledCircuit c = schedule_alap(rb_body(config.qubit_pair, cliffords, d), device);
        c = insert_dd(c, plan, device);
        const DensityMatrix rho = simulate(c, device, noise);
        return fidelity_for(c, rho, {config.qubit_pair.first, config.qubit_pair.second}, std::nullopt, nullptr);
    });
    if (shots) {
        for (double& f : res.fidelity) {
            long long hits = 0;
            for (long long s = 0; s < *shots; ++s)
                if (shot_rng.uniform() < f) ++hits;
            f = static_cast<double>(hits) / static_cast<double>(*shots);
        }
    }
    return res;
}

std::pair<ExperimentResult, ExperimentResult> run_idle_idle(const RBConfig& rb_a, const RBConfig& rb_b,
                                                            const DDPlan& plan, const DeviceModel& device,
                                                            const NoiseConfig& noise,
                                                            std::optional<long long> shots) {
    const std::set<int> qa = {rb_a.qubit_pair.first, rb_a.qubit_pair.second};
    for (int q : {rb_b.qubit_pair.first, rb_b.qubit_pair.second})
        if (qa.count(q)) throw std::invalid_argument("idle-idle pairs overlap");

    const std::vector<int> cliff_a = sample_rb_cliffords(rb_a);
    const std::vector<int> cliff_b = sample_rb_cliffords(rb_b);
    const std::vector<long long>& delays = rb_a.delays_2tau.empty() ? default_delays() : rb_a.delays_2tau;

    ExperimentResult res_a, res_b;
    for (auto* r : {&res_a, &res_b}) {
        r->experiment = "idle-idle";
        r->sequence = sequence_name(plan.sequence);
        r->mode = mode_name(plan.mode);
        fill_axes(*r, delays, device);
    }
    res_a.pair_label = pair_label(rb_a.qubit_pair);
    res_b.pair_label = pair_label(rb_b.qubit_pair);
    res_a.seed = rb_a.seed;
    res_b.seed = rb_b.seed;

    std::vector<std::pair<double, double>> fids(delays.size());
    std::vector<std::future<std::pair<double, double>>> futs;
    for (long long d : delays) {
        futs.push_back(std::async(std::launch::async, [&, d] {
            std::vector<Instruction> prog = rb_body(rb_a.qubit_pair, cliff_a, d);
            append(prog, rb_body(rb_b.qubit_pair, cliff_b, d));
            ScheduledCircuit c = schedule_alap(prog, device);
            c = insert_dd(c, plan, device);
            const DensityMatrix rho = simulate(c, device, noise);
            return std::make_pair(
                fidelity_for(c, rho, {rb_a.qubit_pair.first, rb_a.qubit_pair.second}, std::nullopt, nullptr),
                fidelity_for(c, rho, {rb_b.qubit_pair.first, rb_b.qubit_pair.second}, std::nullopt, nullptr));
        }));
    }
    Rng shot_rng(rb_a.seed ^ 0x9e3779b97f4a7c15ULL);
    for (auto& f : futs) {
        auto [fa, fb] = f.get();
        if (shots) {
            long long ha = 0, hb = 0;
            for (long long s = 0; s < *shots; ++s) {
                if (shot_rng.uniform() < fa) ++ha;
                if (shot_rng.uniform() < fb) ++hb;
            }
            fa = static_cast<double>(ha) / static_cast<double>(*shots);
            fb = static_cast<double>(hb) / static_cast<double>(*shots);
        }
        res_a.fidelity.push_back(fa);
        res_b.fidelity.push_back(fb);
    }
    return {res_a, res_b};
}

ExperimentResult run_driven_idle(const RBConfig& rb, std::pair<int, int> driven_pair, const DDPlan& plan,
                                 const DeviceModel& device, const NoiseConfig& noise,
                                 std::optional<long long> shots) {
    const std::set<int> qa = {rb.qubit_pair.first, rb.qubit_pair.second};
    if (qa.count(driven_pair.first) || qa.count(driven_pair.second))
        throw std::invalid_argument("driven pair overlaps the RB pair");
    const CouplingProps* dc = device.coupling(driven_pair.first, driven_pair.second);
    if (!dc) throw std::invalid_argument("driven pair is not coupled on this device");

    const std::vector<int> cliffords = sample_rb_cliffords(rb);
    const std::vector<long long>& delays = rb.delays_2tau.empty() ? default_delays() : rb.delays_2tau;
    const long long block_dur = 3 * dc->cx_duration + 4 * device.qubit(driven_pair.first).sx_duration;
    if (block_dur <= 0) throw std::invalid_argument("SU(4) block duration is zero");

    ExperimentResult res;
    res.experiment = "driven-idle";
    res.sequence = sequence_name(plan.sequence);
    res.mode = mode_name(plan.mode);
    res.pair_label = pair_label(rb.qubit_pair);
    res.seed = rb.seed;
    fill_axes(res, delays, device);

    res.fidelity = map_delays(delays, [&](long long d) {
        std::vector<Instruction> prog = rb_body(rb.qubit_pair, cliffords, d);
        const long long rb_total = schedule_alap(prog, device).total_duration;

        const long long blocks = rb_total / block_dur;
        const long long pad = rb_total - blocks * block_dur;
        Rng su4_rng(rb.seed ^ 0xd1b54a32d192ed03ULL);
        if (pad > 0) {
            prog.push_back(Instruction::delay(driven_pair.first, pad));
            prog.push_back(Instruction::delay(driven_pair.second, pad));
        }
        for (long long k = 0; k < blocks; ++k)
            prog.push_back(
                Instruction::unitary({driven_pair.first, driven_pair.second}, haar_su4(su4_rng), block_dur));
        prog.push_back(Instruction::gate(GateKind::Measure, {driven_pair.first}));
        prog.push_back(Instruction::gate(GateKind::Measure, {driven_pair.second}));

        ScheduledCircuit c = schedule_alap(prog, device);
        c = insert_dd(c, plan, device);
        const DensityMatrix rho = simulate(c, device, noise);
        return fidelity_for(c, rho, {rb.qubit_pair.first, rb.qubit_pair.second}, std::nullopt, nullptr);
    });
    if (shots) {
        Rng shot_rng(rb.seed ^ 0x2545f4914f6cdd1dULL);
        for (double& f : res.fidelity) {
            long long hits = 0;
            for (long long s = 0; s < *shots; ++s)
                if (shot_rng.uniform() < f) ++hits;
            f = static_cast<double>(hits) / static_cast<double>(*shots);
        }
    }
    return res;
}

ExperimentResult run_ramsey(const RamseyConfig& config, const DDPlan& plan, const DeviceModel& device,
                            const NoiseConfig& noise, std::optional<long long> shots) {
    if (config.detuning_khz <= 0) throw std::invalid_argument("detuning must be positive");
    if (config.delays.empty()) throw std::invalid_argument("ramsey: empty delay list");
    if (!std::is_sorted(config.delays.begin(), config.delays.end()))
        throw std::invalid_argument("ramsey: delays must be ascending");

    const NoiseConfig eff_noise = with_zz_mode(noise, config.zz_mode);
    const int q = config.qubit, s = config.spectator;

    ExperimentResult res;
    res.experiment = "ramsey";
    res.sequence = sequence_name(plan.sequence);
    res.mode = mode_name(plan.mode);
    res.pair_label = pair_label({q, s});
    fill_axes(res, config.delays, device);

    res.fidelity = map_delays(config.delays, [&](long long d) {
        const double phi = 2.0 * kPi * config.detuning_khz * device.dt_to_ns(d) * 1e-6;
        std::vector<Instruction> prog;
        prog.push_back(Instruction::gate(GateKind::SX, {q}));
        prog.push_back(Instruction::barrier({q, s}));
        prog.push_back(Instruction::delay(q, d));
        prog.push_back(Instruction::delay(s, d));
        prog.push_back(Instruction::barrier({q, s}));
        prog.push_back(Instruction::rz(q, phi));  // virtual detuning, not echoed by DD
        prog.push_back(Instruction::gate(GateKind::SX, {q}));
        prog.push_back(Instruction::gate(GateKind::Measure, {q}));
        prog.push_back(Instruction::gate(GateKind::Measure, {s}));

        ScheduledCircuit c = schedule_alap(prog, device);
        c = insert_dd(c, plan, device);
        const DensityMatrix rho = simulate(c, device, eff_noise);
        return fidelity_for(c, rho, {q}, std::nullopt, nullptr);
    });
    if (shots) {
        Rng shot_rng(0x243f6a8885a308d3ULL ^ static_cast<std::uint64_t>(config.delays.size()));
        for (double& f : res.fidelity) {
            long long hits = 0;
            for (long long k = 0; k < *shots; ++k)
                if (shot_rng.uniform() < f) ++hits;
            f = static_cast<double>(hits) / static_cast<double>(*shots);
        }
    }
    return res;
}

FitResult fit_experiment(const ExperimentResult& result, FitModel model) {
    std::vector<double> t_ms;
    t_ms.reserve(result.delays_ns.size());
    for (double ns : result.delays_ns) t_ms.push_back(ns * 1e-6);
    return fit_curve(t_ms, result.fidelity, model);
}

double time_avg_fidelity(const ExperimentResult& result) {
    if (result.fidelity.size() < 2) throw std::invalid_argument("time_avg_fidelity: need at least 2 points");
    const double f0 = result.fidelity.front();
    if (f0 <= 0) throw std::invalid_argument("time_avg_fidelity: F(0) is zero");
    double integral = 0;
    for (size_t i = 1; i < result.fidelity.size(); ++i) {
        const double dt = result.delays_ns[i] - result.delays_ns[i - 1];
        integral += 0.5 * (result.fidelity[i] + result.fidelity[i - 1]) / f0 * dt;
    }
    const double span = result.delays_ns.back() - result.delays_ns.front();
    return integral / span;
}

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}
}  // namespace

void write_results_csv(std::ostream& os, const std::vector<ExperimentResult>& results) {
    os << "experiment,sequence,mode,pair,delay_dt,delay_ns,fidelity,seed\n";
    for (const auto& r : results)
        for (size_t i = 0; i < r.delays_dt.size(); ++i)
            os << r.experiment << "," << r.sequence << "," << r.mode << "," << r.pair_label << "," << r.delays_dt[i]
               << "," << fmt(r.delays_ns[i]) << "," << fmt(r.fidelity[i]) << "," << r.seed << "\n";
}

void write_fit_csv(std::ostream& os, const std::vector<std::pair<std::string, FitResult>>& fits) {
    os << "experiment,model,amplitude,rate_or_freq,phase,offset,residual_rms\n";
    for (const auto& [name, f] : fits)
        os << name << "," << (f.model == FitModel::ExpDecay ? "exp_decay" : "damped_cosine") << ","
           << fmt(f.amplitude) << "," << fmt(f.rate_or_freq) << "," << fmt(f.phase) << "," << fmt(f.offset) << ","
           << fmt(f.residual_rms) << "\n";
}

}  // namespace stagdd
