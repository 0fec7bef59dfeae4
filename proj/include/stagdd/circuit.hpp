#pragma once

#include <string>
#include <vector>

#include "stagdd/device.hpp"
#include "stagdd/types.hpp"

namespace stagdd {

enum class GateKind { Xp, Xm, Yp, Ym, SX, RZ, H, CX, Barrier, Delay, Unitary, Measure };

const char* gate_name(GateKind kind);

// One circuit element. `qubits` hold device qubit ids. start == -1 means
// unscheduled. For Unitary the matrix is 2^k x 2^k with k in {1, 2} and the
// duration is supplied by the caller.
struct Instruction {
    GateKind kind = GateKind::Barrier;
    std::vector<int> qubits;
    double angle = 0.0;      // RZ only
    long long start = -1;    // dt
    long long duration = 0;  // dt; Delay and Unitary carry their own
    Mat matrix;              // Unitary only

    static Instruction gate(GateKind k, std::vector<int> qs) {
        Instruction i;
        i.kind = k;
        i.qubits = std::move(qs);
        return i;
    }
    static Instruction rz(int q, double angle) {
        Instruction i = gate(GateKind::RZ, {q});
        i.angle = angle;
        return i;
    }
    static Instruction delay(int q, long long dur) {
        Instruction i = gate(GateKind::Delay, {q});
        i.duration = dur;
        return i;
    }
    // empty qubit list means "all qubits"
    static Instruction barrier(std::vector<int> qs = {}) { return gate(GateKind::Barrier, std::move(qs)); }
    static Instruction unitary(std::vector<int> qs, Mat u, long long dur);
};

struct ScheduledCircuit {
    std::vector<Instruction> instructions;  // program order, all starts set
    long long total_duration = 0;

    // distinct qubit ids, ascending; defines the simulator's local ordering
    std::vector<int> qubit_ids() const;
};

struct IdleWindow {
    int qubit = 0;
    long long start = 0;
    long long duration = 0;
};

// Duration of an instruction on the given device. Throws when a physical
// gate's duration cannot be resolved (e.g. CX on an uncoupled pair).
long long resolve_duration(const Instruction& instr, const DeviceModel& device);

ScheduledCircuit schedule_asap(const std::vector<Instruction>& circuit, const DeviceModel& device);
// Every instruction starts as late as its dependents allow; program-order
// semantics per qubit are preserved. Idempotent.
ScheduledCircuit schedule_alap(const std::vector<Instruction>& circuit, const DeviceModel& device);

// Maximal interior gaps per qubit between consecutive anchor instructions.
// Delay spans count as idle; every other instruction (including zero-duration
// RZ/Barrier/Measure) is an anchor. Gaps before the first and after the last
// anchor are excluded. Sorted by (qubit, start).
std::vector<IdleWindow> find_idle_windows(const ScheduledCircuit& circuit);

// Line-oriented interchange format: `GATE q0[,q1] [@start] [#duration]`,
// RZ angle in radians as `RZ(angle)`. Unitary matrices are not serialized.
std::string emit_text(const ScheduledCircuit& circuit);
std::vector<Instruction> parse_text(const std::string& text);

}  // namespace stagdd
