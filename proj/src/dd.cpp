#include "stagdd/dd.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "stagdd/gates.hpp"

namespace stagdd {

const char* sequence_name(DDSequenceName s) {
    switch (s) {
        case DDSequenceName::X2: return "x2";
        case DDSequenceName::X2pm: return "x2pm";
        case DDSequenceName::XY4: return "xy4";
        case DDSequenceName::XY4pm: return "xy4pm";
        case DDSequenceName::XY8: return "xy8";
        case DDSequenceName::XY8pm: return "xy8pm";
    }
    return "?";
}

const char* mode_name(DDMode m) {
    switch (m) {
        case DDMode::None: return "none";
        case DDMode::Standard: return "standard";
        case DDMode::Staggered: return "staggered";
        case DDMode::StaggeredInverse: return "staggered-inv";
    }
    return "?";
}

DDSequenceName parse_sequence(const std::string& s) {
    for (auto v : {DDSequenceName::X2, DDSequenceName::X2pm, DDSequenceName::XY4, DDSequenceName::XY4pm,
                   DDSequenceName::XY8, DDSequenceName::XY8pm})
        if (s == sequence_name(v)) return v;
    throw std::invalid_argument("unknown DD sequence '" + s + "'");
}

DDMode parse_mode(const std::string& s) {
    for (auto v : {DDMode::None, DDMode::Standard, DDMode::Staggered, DDMode::StaggeredInverse})
        if (s == mode_name(v)) return v;
    throw std::invalid_argument("unknown DD mode '" + s + "'");
}

std::vector<GateKind> dd_gates(DDSequenceName name) {
    using G = GateKind;
    switch (name) {
        case DDSequenceName::X2: return {G::Xp, G::Xp};
        case DDSequenceName::X2pm: return {G::Xp, G::Xm};
        case DDSequenceName::XY4: return {G::Xp, G::Yp, G::Xp, G::Yp};
        case DDSequenceName::XY4pm: return {G::Xp, G::Yp, G::Xm, G::Ym};
        case DDSequenceName::XY8: return {G::Xp, G::Yp, G::Xp, G::Yp, G::Yp, G::Xp, G::Yp, G::Xp};
        // sign alternation is per axis, in order of appearance
        case DDSequenceName::XY8pm: return {G::Xp, G::Yp, G::Xm, G::Ym, G::Yp, G::Xp, G::Ym, G::Xm};
    }
    throw std::invalid_argument("unknown DD sequence");
}

DDPlan make_plan(DDSequenceName sequence, DDMode mode, const std::vector<std::pair<int, int>>& pairs) {
    DDPlan plan;
    plan.sequence = sequence;
    plan.mode = mode;

    std::map<int, std::vector<int>> adj;
    std::set<int> nodes;
    for (const auto& [a, b] : pairs) {
        adj[a].push_back(b);
        adj[b].push_back(a);
        nodes.insert(a);
        nodes.insert(b);
    }
    // two-color each component, lowest index Symmetric
    std::map<int, int> color;
    for (int seed : nodes) {
        if (color.count(seed)) continue;
        color[seed] = 0;
        std::queue<int> bfs;
        bfs.push(seed);
        while (!bfs.empty()) {
            int u = bfs.front();
            bfs.pop();
            for (int v : adj[u]) {
                if (!color.count(v)) {
                    color[v] = 1 - color[u];
                    bfs.push(v);
                } else if (color[v] == color[u]) {
                    throw std::invalid_argument("coupling graph is not two-colorable; cannot stagger consistently");
                }
            }
        }
    }
    const bool invert = (mode == DDMode::StaggeredInverse);
    for (const auto& [q, c] : color) {
        StaggerRole role = (c == 0) ? StaggerRole::Symmetric : StaggerRole::Staggered;
        if (invert) role = (role == StaggerRole::Symmetric) ? StaggerRole::Staggered : StaggerRole::Symmetric;
        if (mode == DDMode::Standard || mode == DDMode::None) role = StaggerRole::Symmetric;
        plan.roles[q] = role;
    }
    return plan;
}

std::vector<long long> pulse_times(long long window_duration, int n_pulses, StaggerRole role, long long gate_duration) {
    if (n_pulses < 1) throw std::invalid_argument("pulse_times: need at least one pulse");
    const long long T = window_duration;
    const long long g = gate_duration;
    const long long n = n_pulses;
    if (T < n * g) throw WindowTooShort("window of " + std::to_string(T) + " dt cannot fit " + std::to_string(n) +
                                        " pulses of " + std::to_string(g) + " dt");
    std::vector<long long> starts;
    starts.reserve(n_pulses);
    long long prev_end = 0;
    for (long long k = 1; k <= n; ++k) {
        // center numerator over 2N: symmetric (2k-1)T, staggered 2kT
        const long long num = (role == StaggerRole::Symmetric ? (2 * k - 1) * T : 2 * k * T) - n * g;
        long long s = num / (2 * n);  // floor; numerator is non-negative
        s = std::min(s, T - g);
        s = std::max(s, prev_end);
        if (s + g > T) throw WindowTooShort("pulses do not fit without overlap");
        starts.push_back(s);
        prev_end = s + g;
    }
    return starts;
}

namespace {

Mat2 gate_matrix_1q(GateKind kind) {
    switch (kind) {
        case GateKind::Xp: return rx(kPi);
        case GateKind::Xm: return rx(-kPi);
        case GateKind::Yp: return ry(kPi);
        case GateKind::Ym: return ry(-kPi);
        default: throw std::invalid_argument("not a DD pulse");
    }
}

}  // namespace

bool verify_identity(DDSequenceName name) {
    Mat2 u = Mat2::Identity();
    for (GateKind g : dd_gates(name)) u = gate_matrix_1q(g) * u;
    return equal_up_to_phase(u, Mat2::Identity(), 1e-12);
}

ScheduledCircuit insert_dd(const ScheduledCircuit& circuit, const DDPlan& plan, const DeviceModel& device,
                           InsertionReport* report) {
    InsertionReport rep;
    const std::vector<GateKind> gates = dd_gates(plan.sequence);
    const int n_pulses = static_cast<int>(gates.size());

    struct Fill {
        IdleWindow window;
        std::vector<long long> starts;  // absolute
        long long gate_dur = 0;
        bool emitted = false;
    };
    // per qubit, filled windows sorted by start
    std::map<int, std::vector<Fill>> fills;

    if (plan.mode != DDMode::None) {
        for (const IdleWindow& w : find_idle_windows(circuit)) {
            auto role_it = plan.roles.find(w.qubit);
            if (role_it == plan.roles.end()) continue;
            // DD targets explicit delays only; leave incidental schedule gaps alone
            bool has_delay = false;
            for (const auto& in : circuit.instructions) {
                if (in.kind != GateKind::Delay || in.qubits.at(0) != w.qubit) continue;
                if (in.start < w.start + w.duration && in.start + in.duration > w.start) {
                    has_delay = true;
                    break;
                }
            }
            if (!has_delay) continue;

            const StaggerRole role = (plan.mode == DDMode::Standard) ? StaggerRole::Symmetric : role_it->second;
            const long long g = device.qubit(w.qubit).x_duration;
            std::vector<long long> offsets;
            try {
                offsets = pulse_times(w.duration, n_pulses, role, g);
            } catch (const WindowTooShort&) {
                ++rep.windows_skipped;
                continue;
            }
            Fill f;
            f.window = w;
            f.gate_dur = g;
            for (int k = 0; k < n_pulses; ++k) {
                f.starts.push_back(w.start + offsets[k]);
                const double ideal_center =
                    w.start + (role == StaggerRole::Symmetric ? (2.0 * (k + 1) - 1.0) * w.duration / (2.0 * n_pulses)
                                                              : (k + 1.0) * w.duration / n_pulses);
                const double realized_center = static_cast<double>(f.starts.back()) + g / 2.0;
                rep.max_center_error_dt = std::max(rep.max_center_error_dt, std::abs(realized_center - ideal_center));
            }
            fills[w.qubit].push_back(std::move(f));
            ++rep.windows_filled;
        }
    }

    ScheduledCircuit out;
    out.total_duration = circuit.total_duration;
    for (const auto& in : circuit.instructions) {
        if (in.kind == GateKind::Delay) {
            const int q = in.qubits.at(0);
            auto it = fills.find(q);
            Fill* owner = nullptr;
            if (it != fills.end()) {
                for (Fill& f : it->second) {
                    if (in.start < f.window.start + f.window.duration && in.start + in.duration > f.window.start) {
                        owner = &f;
                        break;
                    }
                }
            }
            if (owner) {
                if (!owner->emitted) {
                    owner->emitted = true;
                    long long cursor = owner->window.start;
                    const long long wend = owner->window.start + owner->window.duration;
                    for (size_t k = 0; k < owner->starts.size(); ++k) {
                        const long long s = owner->starts[k];
                        if (s > cursor) {
                            Instruction d = Instruction::delay(q, s - cursor);
                            d.start = cursor;
                            out.instructions.push_back(std::move(d));
                        }
                        Instruction p = Instruction::gate(gates[k], {q});
                        p.start = s;
                        p.duration = owner->gate_dur;
                        out.instructions.push_back(std::move(p));
                        cursor = s + owner->gate_dur;
                    }
                    if (wend > cursor) {
                        Instruction d = Instruction::delay(q, wend - cursor);
                        d.start = cursor;
                        out.instructions.push_back(std::move(d));
                    }
                }
                continue;  // original delay replaced
            }
        }
        out.instructions.push_back(in);
    }
    if (report) *report = rep;
    return out;
}

}  // namespace stagdd
