#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "stagdd/clifford.hpp"
#include "stagdd/dd.hpp"
#include "stagdd/device.hpp"
#include "stagdd/fit.hpp"
#include "stagdd/sim.hpp"

namespace stagdd {

struct RBConfig {
    std::pair<int, int> qubit_pair{0, 1};
    int n_cliffords = 8;
    std::vector<long long> delays_2tau;  // dt, ascending
    std::uint64_t seed = 0;
};

// 1280..14080 dt (284.4..3128.9 ns) in 11 even steps
std::vector<long long> default_delays();

struct ExperimentResult {
    std::string experiment;
    std::string sequence;
    std::string mode;
    std::string pair_label;
    std::uint64_t seed = 0;
    std::vector<long long> delays_dt;
    std::vector<double> delays_ns;
    std::vector<double> fidelity;  // return probability to |0...0>
};

enum class ZZMode { Continuous, PreDelayGate };

struct RamseyConfig {
    int qubit = 0;
    int spectator = 1;
    double detuning_khz = 100.0;  // applied virtually at readout
    std::vector<long long> delays;
    ZZMode zz_mode = ZZMode::Continuous;
};

// Clifford indices for the sequence are a pure function of the seed; the same
// sequence is reused across all delay points.
std::vector<int> sample_rb_cliffords(const RBConfig& config);

// n sampled Cliffords, each followed by Delay(2tau) on both qubits, then the
// composed inverse Clifford and measurement. ALAP-scheduled.
ScheduledCircuit gen_rb_circuit(const RBConfig& config, long long delay_2tau, const DeviceModel& device);

// Per-delay simulation of a lone RB pair.
ExperimentResult run_rb_isolated(const RBConfig& config, const DDPlan& plan, const DeviceModel& device,
                                 const NoiseConfig& noise, std::optional<long long> shots = std::nullopt);

// Two simultaneous RB circuits merged into one 4-qubit schedule; DD inserted
// per plan on both pairs. Pairs must be disjoint.
std::pair<ExperimentResult, ExperimentResult> run_idle_idle(const RBConfig& rb_a, const RBConfig& rb_b,
                                                            const DDPlan& plan, const DeviceModel& device,
                                                            const NoiseConfig& noise,
                                                            std::optional<long long> shots = std::nullopt);

// RB on one pair while the adjacent pair runs back-to-back Haar SU(4) blocks
// of matched total duration; DD only on the RB pair.
ExperimentResult run_driven_idle(const RBConfig& rb, std::pair<int, int> driven_pair, const DDPlan& plan,
                                 const DeviceModel& device, const NoiseConfig& noise,
                                 std::optional<long long> shots = std::nullopt);

// Ramsey with virtual detuning and DD spanning qubit and spectator.
ExperimentResult run_ramsey(const RamseyConfig& config, const DDPlan& plan, const DeviceModel& device,
                            const NoiseConfig& noise, std::optional<long long> shots = std::nullopt);

// Fit on the result's own axes with t in ms, so frequencies/rates come out in
// kHz / 1/ms.
FitResult fit_experiment(const ExperimentResult& result, FitModel model);

// (1/T) integral of F(t)/F(0) over [first, last] delay, trapezoidal.
double time_avg_fidelity(const ExperimentResult& result);

void write_results_csv(std::ostream& os, const std::vector<ExperimentResult>& results);
void write_fit_csv(std::ostream& os, const std::vector<std::pair<std::string, FitResult>>& fits);

}  // namespace stagdd
