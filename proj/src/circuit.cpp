#include "stagdd/circuit.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace stagdd {

const char* gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::Xp: return "XP";
        case GateKind::Xm: return "XM";
        case GateKind::Yp: return "YP";
        case GateKind::Ym: return "YM";
        case GateKind::SX: return "SX";
        case GateKind::RZ: return "RZ";
        case GateKind::H: return "H";
        case GateKind::CX: return "CX";
        case GateKind::Barrier: return "BARRIER";
        case GateKind::Delay: return "DELAY";
        case GateKind::Unitary: return "UNITARY";
        case GateKind::Measure: return "MEASURE";
    }
    return "?";
}

Instruction Instruction::unitary(std::vector<int> qs, Mat u, long long dur) {
    if (qs.size() != 1 && qs.size() != 2) throw std::invalid_argument("unitary: expected 1 or 2 qubits");
    const Eigen::Index dim = static_cast<Eigen::Index>(1) << qs.size();
    if (u.rows() != dim || u.cols() != dim) throw std::invalid_argument("unitary: matrix dimension mismatch");
    if ((u * u.adjoint() - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10)
        throw std::invalid_argument("unitary: matrix is not unitary");
    if (dur < 0) throw std::invalid_argument("unitary: negative duration");
    Instruction i = gate(GateKind::Unitary, std::move(qs));
    i.matrix = std::move(u);
    i.duration = dur;
    return i;
}

std::vector<int> ScheduledCircuit::qubit_ids() const {
    std::set<int> ids;
    for (const auto& in : instructions)
        for (int q : in.qubits) ids.insert(q);
    return {ids.begin(), ids.end()};
}

long long resolve_duration(const Instruction& instr, const DeviceModel& device) {
    switch (instr.kind) {
        case GateKind::Xp:
        case GateKind::Xm:
        case GateKind::Yp:
        case GateKind::Ym:
            return device.qubit(instr.qubits.at(0)).x_duration;
        case GateKind::SX:
        case GateKind::H:
            return device.qubit(instr.qubits.at(0)).sx_duration;
        case GateKind::RZ:
        case GateKind::Barrier:
        case GateKind::Measure:
            return 0;
        case GateKind::Delay:
            if (instr.duration < 0) throw std::invalid_argument("delay: negative duration");
            return instr.duration;
        case GateKind::Unitary:
            return instr.duration;
        case GateKind::CX: {
            const CouplingProps* c = device.coupling(instr.qubits.at(0), instr.qubits.at(1));
            if (!c)
                throw std::invalid_argument("CX duration unknown: qubits " + std::to_string(instr.qubits[0]) + "," +
                                            std::to_string(instr.qubits[1]) + " are not coupled");
            return c->cx_duration;
        }
    }
    throw std::invalid_argument("unknown gate kind");
}

namespace {

std::vector<int> all_qubits(const std::vector<Instruction>& circuit) {
    std::set<int> ids;
    for (const auto& in : circuit)
        for (int q : in.qubits) ids.insert(q);
    return {ids.begin(), ids.end()};
}

void check_instruction(const Instruction& in) {
    std::set<int> qs(in.qubits.begin(), in.qubits.end());
    if (qs.size() != in.qubits.size()) throw std::invalid_argument("instruction qubits must be distinct");
    if (in.kind != GateKind::Barrier && in.qubits.empty()) throw std::invalid_argument("instruction has no qubits");
}

void check_measure_terminal(const std::vector<Instruction>& circuit) {
    std::set<int> measured;
    for (const auto& in : circuit) {
        if (in.kind == GateKind::Barrier) continue;
        for (int q : in.qubits) {
            if (measured.count(q)) throw std::invalid_argument("mid-circuit measurement is not supported");
        }
        if (in.kind == GateKind::Measure)
            for (int q : in.qubits) measured.insert(q);
    }
}

}  // namespace

ScheduledCircuit schedule_asap(const std::vector<Instruction>& circuit, const DeviceModel& device) {
    check_measure_terminal(circuit);
    const std::vector<int> qubits = all_qubits(circuit);
    std::map<int, long long> avail;
    for (int q : qubits) avail[q] = 0;

    ScheduledCircuit out;
    out.instructions = circuit;
    for (auto& in : out.instructions) {
        check_instruction(in);
        const std::vector<int>& qs = in.qubits.empty() ? qubits : in.qubits;
        long long s = 0;
        for (int q : qs) s = std::max(s, avail.at(q));
        const long long dur = resolve_duration(in, device);
        in.start = s;
        in.duration = dur;
        for (int q : qs) avail[q] = s + dur;
        out.total_duration = std::max(out.total_duration, s + dur);
    }
    return out;
}

ScheduledCircuit schedule_alap(const std::vector<Instruction>& circuit, const DeviceModel& device) {
    check_measure_terminal(circuit);
    const std::vector<int> qubits = all_qubits(circuit);
    std::map<int, long long> deadline;
    for (int q : qubits) deadline[q] = 0;

    ScheduledCircuit out;
    out.instructions = circuit;
    // walk backwards, packing toward time 0 from above; negative starts are
    // shifted afterwards so the earliest instruction lands at 0
    for (auto it = out.instructions.rbegin(); it != out.instructions.rend(); ++it) {
        check_instruction(*it);
        const std::vector<int>& qs = it->qubits.empty() ? qubits : it->qubits;
        long long end = std::numeric_limits<long long>::max();
        for (int q : qs) end = std::min(end, deadline.at(q));
        const long long dur = resolve_duration(*it, device);
        it->start = end - dur;
        it->duration = dur;
        for (int q : qs) deadline[q] = it->start;
    }
    long long min_start = 0;
    bool any = false;
    for (const auto& in : out.instructions) {
        min_start = any ? std::min(min_start, in.start) : in.start;
        any = true;
    }
    if (!any) return out;
    for (auto& in : out.instructions) {
        in.start -= min_start;
        out.total_duration = std::max(out.total_duration, in.start + in.duration);
    }
    return out;
}

std::vector<IdleWindow> find_idle_windows(const ScheduledCircuit& circuit) {
    // anchor events per qubit: every non-delay instruction as [start, end)
    std::map<int, std::vector<std::pair<long long, long long>>> anchors;
    for (const auto& in : circuit.instructions) {
        if (in.kind == GateKind::Delay) continue;
        if (in.start < 0) throw std::invalid_argument("find_idle_windows: circuit is not scheduled");
        for (int q : in.qubits) anchors[q].push_back({in.start, in.start + in.duration});
    }
    std::vector<IdleWindow> windows;
    for (auto& [q, spans] : anchors) {
        std::sort(spans.begin(), spans.end());
        long long cursor = -1;
        for (const auto& [s, e] : spans) {
            if (cursor >= 0 && s > cursor) windows.push_back({q, cursor, s - cursor});
            cursor = std::max(cursor, e);
        }
    }
    std::sort(windows.begin(), windows.end(),
              [](const IdleWindow& a, const IdleWindow& b) { return std::tie(a.qubit, a.start) < std::tie(b.qubit, b.start); });
    return windows;
}

std::string emit_text(const ScheduledCircuit& circuit) {
    std::ostringstream os;
    for (const auto& in : circuit.instructions) {
        if (in.kind == GateKind::RZ)
            os << "RZ(" << in.angle << ")";
        else
            os << gate_name(in.kind);
        for (size_t i = 0; i < in.qubits.size(); ++i) os << (i == 0 ? " q" : ",q") << in.qubits[i];
        if (in.start >= 0) os << " @" << in.start;
        if (in.duration > 0) os << " #" << in.duration;
        os << "\n";
    }
    return os.str();
}

std::vector<Instruction> parse_text(const std::string& text) {
    std::vector<Instruction> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto fail = [&](const std::string& msg) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": " + msg);
        };
        // strip comments and whitespace
        const auto hash_comment = line.find("//");
        if (hash_comment != std::string::npos) line = line.substr(0, hash_comment);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;

        Instruction in;
        if (head.rfind("RZ(", 0) == 0) {
            if (head.back() != ')') fail("malformed RZ angle");
            in.kind = GateKind::RZ;
            try {
                in.angle = std::stod(head.substr(3, head.size() - 4));
            } catch (const std::exception&) {
                fail("malformed RZ angle");
            }
        } else {
            static const std::map<std::string, GateKind> names = {
                {"XP", GateKind::Xp},          {"XM", GateKind::Xm},     {"YP", GateKind::Yp},
                {"YM", GateKind::Ym},          {"SX", GateKind::SX},     {"H", GateKind::H},
                {"CX", GateKind::CX},          {"BARRIER", GateKind::Barrier}, {"DELAY", GateKind::Delay},
                {"MEASURE", GateKind::Measure}};
            auto it = names.find(head);
            if (it == names.end()) fail("unknown gate '" + head + "'");
            in.kind = it->second;
        }
        std::string tok;
        while (ls >> tok) {
            try {
                if (tok[0] == 'q') {
                    std::istringstream qs(tok);
                    std::string part;
                    while (std::getline(qs, part, ',')) {
                        if (part.empty() || part[0] != 'q') fail("malformed qubit list '" + tok + "'");
                        in.qubits.push_back(std::stoi(part.substr(1)));
                    }
                } else if (tok[0] == '@') {
                    in.start = std::stoll(tok.substr(1));
                } else if (tok[0] == '#') {
                    in.duration = std::stoll(tok.substr(1));
                } else {
                    fail("unexpected token '" + tok + "'");
                }
            } catch (const std::invalid_argument&) {
                throw;
            } catch (const std::exception&) {
                fail("malformed token '" + tok + "'");
            }
        }
        check_instruction(in);
        out.push_back(std::move(in));
    }
    return out;
}

}  // namespace stagdd
