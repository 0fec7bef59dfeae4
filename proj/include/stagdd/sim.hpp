#pragma once

#include <map>
#include <optional>
#include <string>

#include "stagdd/circuit.hpp"
#include "stagdd/gates.hpp"

namespace stagdd {

// 2^n x 2^n density operator. Local qubit k is bit (n-1-k) of the basis
// index, so bitstrings read left to right as local qubits 0..n-1.
struct DensityMatrix {
    int num_qubits = 0;
    Mat rho;

    static DensityMatrix ground(int n);
    static DensityMatrix pure(const Vec& psi);
    Eigen::Index dim() const { return rho.rows(); }
    // Hermiticity / unit trace / positivity up to tolerance
    void check(double tol = 1e-8) const;
};

struct NoiseConfig {
    // always-on ZZ per unordered device-qubit pair, kHz
    std::map<std::pair<int, int>, double> zz_khz;
    bool relaxation = false;
    // physical Z drift per device qubit, kHz (virtual detuning is applied by
    // the experiment as an RZ instead)
    std::map<int, double> detuning_khz;
    double overrotation_epsilon = 0.0;  // radians added to every pi pulse
    // mirror of the discrete ZZ(theta)-before-delay construction; within the
    // sliced evolution it produces the same per-slice rotation
    bool zz_discrete = false;
    // zero a pair's ZZ during slices covered by that pair's own CX
    bool rotary_echo = false;

    void add_zz(int a, int b, double nu_khz) {
        if (a == b) throw std::invalid_argument("zz pair must be distinct qubits");
        zz_khz[{std::min(a, b), std::max(a, b)}] = nu_khz;
    }
};

// Single-qubit operator embedded at local qubit q of an n-qubit space.
Mat embed_1q(int n, int q, const Mat2& u);
// Two-qubit operator; local qubit a is the most significant bit of u's index.
Mat embed_2q(int n, int a, int b, const Mat4& u);

// Amplitude damping with p = 1 - exp(-dt/t1) composed with pure dephasing at
// rate 1/t2 - 1/(2 t1). All three times share a unit. Throws when t2 > 2 t1.
DensityMatrix relaxation_channel(const DensityMatrix& rho, int qubit, double dt_elapsed, double t1, double t2);

// Exact sliced evolution: instantaneous gate unitaries at their start times,
// ZZ / detuning / relaxation acting per slice on all qubits.
DensityMatrix simulate(const ScheduledCircuit& circuit, const DeviceModel& device, const NoiseConfig& noise,
                       const DensityMatrix& initial);
DensityMatrix simulate(const ScheduledCircuit& circuit, const DeviceModel& device, const NoiseConfig& noise);

// <bits|rho|bits>; bitstring indexes local qubits left to right
double expectation_population(const DensityMatrix& rho, const std::string& bitstring);

// marginal probability that every listed local qubit reads 0
double prob_all_zero(const DensityMatrix& rho, const std::vector<int>& local_qubits);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace stagdd
