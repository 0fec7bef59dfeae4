#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "stagdd/circuit.hpp"

namespace stagdd {

enum class DDSequenceName { X2, X2pm, XY4, XY4pm, XY8, XY8pm };
enum class StaggerRole { Symmetric, Staggered };
enum class DDMode { None, Standard, Staggered, StaggeredInverse };

const char* sequence_name(DDSequenceName s);
const char* mode_name(DDMode m);
DDSequenceName parse_sequence(const std::string& s);
DDMode parse_mode(const std::string& s);

// Pulse list of the sequence; pm variants alternate rotation sign per axis.
std::vector<GateKind> dd_gates(DDSequenceName name);

struct DDPlan {
    DDSequenceName sequence = DDSequenceName::X2pm;
    DDMode mode = DDMode::Standard;
    // Only qubits present here receive pulses. Standard mode treats every
    // role as Symmetric.
    std::map<int, StaggerRole> roles;
};

// Assigns roles by two-coloring the coupled pairs, the lowest index in each
// connected component being Symmetric. StaggeredInverse swaps the colors.
DDPlan make_plan(DDSequenceName sequence, DDMode mode, const std::vector<std::pair<int, int>>& pairs);

struct WindowTooShort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pulse start offsets inside a window of the given duration. Centers sit at
// (2k-1)T/(2N) for Symmetric and kT/N for Staggered, k = 1..N; starts are
// floor(center - gate/2) clamped into the window, strictly increasing.
std::vector<long long> pulse_times(long long window_duration, int n_pulses, StaggerRole role, long long gate_duration);

struct InsertionReport {
    int windows_filled = 0;
    int windows_skipped = 0;
    // worst |realized center - ideal center| in dt over all placed pulses
    double max_center_error_dt = 0.0;
};

// Fills every idle window that overlaps an explicit Delay on a planned qubit
// with delay/pulse/delay segments. Too-short windows are skipped silently
// (counted in the report). Total duration and noiseless semantics are
// unchanged.
ScheduledCircuit insert_dd(const ScheduledCircuit& circuit, const DDPlan& plan, const DeviceModel& device,
                           InsertionReport* report = nullptr);

// true iff the product of the sequence's gates is the identity up to global
// phase within 1e-12
bool verify_identity(DDSequenceName name);

}  // namespace stagdd
