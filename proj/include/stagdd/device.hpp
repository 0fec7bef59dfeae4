#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stagdd {

struct QubitProps {
    int index = 0;
    double t1_us = 0.0;
    double t2_us = 0.0;
    double frequency_ghz = 0.0;
    // stored as a positive magnitude
    double anharmonicity_ghz = 0.0;
    long long sx_duration = 0;  // dt
    long long x_duration = 0;   // dt
};

enum class CxType { ECR, DCX };

struct CouplingProps {
    int control = 0;
    int target = 0;
    double j_mhz = 0.0;
    // measured value; when absent the perturbative formula is used instead
    std::optional<double> zz_khz;
    long long cx_duration = 0;  // dt
    CxType cx_type = CxType::ECR;
    std::string amplitude_meta;  // opaque calibration metadata
};

// Immutable after load; shared read-only across simulation workers.
struct DeviceModel {
    // sample period as an exact rational, dt = dt_num/dt_den ns
    long long dt_num = 2;
    long long dt_den = 9;
    std::vector<QubitProps> qubits;
    std::vector<CouplingProps> couplings;

    double dt_ns() const { return static_cast<double>(dt_num) / static_cast<double>(dt_den); }

    const QubitProps& qubit(int id) const;
    bool has_qubit(int id) const;
    // either orientation; nullptr when the pair is not coupled
    const CouplingProps* coupling(int a, int b) const;
    // measured zz_strength when present, otherwise derived via compute_zz_khz
    double zz_khz(int a, int b) const;

    // exact conversion; throws std::invalid_argument when ns is not an
    // integer number of dt
    long long ns_to_dt(double ns) const;
    double dt_to_ns(long long dt) const { return static_cast<double>(dt) * dt_ns(); }

    void validate() const;
};

// Perturbative static ZZ strength. Inputs in GHz, result in kHz.
// Throws std::domain_error when a denominator factor is <= 0.
double compute_zz_khz(double j_ghz, double delta0_ghz, double delta1_ghz, double detuning_ghz);

// Parse + validate a device description (JSON text / file). Errors carry the
// offending field name.
DeviceModel load_device(const std::string& json_text);
DeviceModel load_device_file(const std::string& path);

// Ten-qubit fixture with measured couplings.
const DeviceModel& bundled_device();

}  // namespace stagdd
