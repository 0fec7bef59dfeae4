#include "stagdd/sim.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace stagdd {

DensityMatrix DensityMatrix::ground(int n) {
    DensityMatrix d;
    d.num_qubits = n;
    const Eigen::Index dim = static_cast<Eigen::Index>(1) << n;
    d.rho = Mat::Zero(dim, dim);
    d.rho(0, 0) = 1.0;
    return d;
}

DensityMatrix DensityMatrix::pure(const Vec& psi) {
    DensityMatrix d;
    Eigen::Index dim = psi.size();
    int n = 0;
    while ((Eigen::Index(1) << n) < dim) ++n;
    if ((Eigen::Index(1) << n) != dim) throw std::invalid_argument("state dimension is not a power of two");
    d.num_qubits = n;
    const double norm = psi.norm();
    if (norm < 1e-12) throw std::invalid_argument("zero state vector");
    d.rho = (psi / norm) * (psi / norm).adjoint();
    return d;
}

void DensityMatrix::check(double tol) const {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw std::runtime_error("density matrix not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
        throw std::runtime_error("density matrix trace is not 1");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-8) throw std::runtime_error("density matrix not positive semidefinite");
}

Mat embed_1q(int n, int q, const Mat2& u) {
    Mat out = Mat::Identity(1, 1);
    for (int k = 0; k < n; ++k) out = kron(out, k == q ? Mat(u) : Mat(Mat2::Identity()));
    return out;
}

Mat embed_2q(int n, int a, int b, const Mat4& u) {
    if (a == b) throw std::invalid_argument("embed_2q: qubits must differ");
    const Eigen::Index dim = static_cast<Eigen::Index>(1) << n;
    Mat out = Mat::Zero(dim, dim);
    const int sa = n - 1 - a, sb = n - 1 - b;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const Eigen::Index rest_i = i & ~((Eigen::Index(1) << sa) | (Eigen::Index(1) << sb));
        const int ra = static_cast<int>((i >> sa) & 1), rb = static_cast<int>((i >> sb) & 1);
        for (int ca = 0; ca < 2; ++ca) {
            for (int cb = 0; cb < 2; ++cb) {
                const Eigen::Index j = rest_i | (Eigen::Index(ca) << sa) | (Eigen::Index(cb) << sb);
                out(i, j) = u(ra * 2 + rb, ca * 2 + cb);
            }
        }
    }
    return out;
}

DensityMatrix relaxation_channel(const DensityMatrix& rho, int qubit, double dt_elapsed, double t1, double t2) {
    if (dt_elapsed < 0) throw std::invalid_argument("negative elapsed time");
    if (t2 > 2.0 * t1) throw std::invalid_argument("invalid coherence: t2 > 2*t1");
    if (dt_elapsed == 0) return rho;

    const double p = 1.0 - std::exp(-dt_elapsed / t1);
    Mat2 k0 = Mat2::Identity();
    k0(1, 1) = std::sqrt(1.0 - p);
    Mat2 k1 = Mat2::Zero();
    k1(0, 1) = std::sqrt(p);

    // residual pure dephasing beyond the amplitude-damping contribution
    const double phi_rate = 1.0 / t2 - 1.0 / (2.0 * t1);
    const double d = std::exp(-dt_elapsed * phi_rate);
    const Mat2 kd0 = std::sqrt((1.0 + d) / 2.0) * Mat2::Identity();
    const Mat2 kd1 = std::sqrt((1.0 - d) / 2.0) * pauli_z();

    const int n = rho.num_qubits;
    DensityMatrix out = rho;
    {
        const Mat a = embed_1q(n, qubit, k0), b = embed_1q(n, qubit, k1);
        out.rho = a * out.rho * a.adjoint() + b * out.rho * b.adjoint();
    }
    {
        const Mat a = embed_1q(n, qubit, kd0), b = embed_1q(n, qubit, kd1);
        out.rho = a * out.rho * a.adjoint() + b * out.rho * b.adjoint();
    }
    return out;
}

namespace {

Mat instruction_unitary(const Instruction& in, int n, const std::map<int, int>& local, double eps) {
    switch (in.kind) {
        case GateKind::Xp: return embed_1q(n, local.at(in.qubits[0]), rx(kPi + eps));
        case GateKind::Xm: return embed_1q(n, local.at(in.qubits[0]), rx(-kPi - eps));
        case GateKind::Yp: return embed_1q(n, local.at(in.qubits[0]), ry(kPi + eps));
        case GateKind::Ym: return embed_1q(n, local.at(in.qubits[0]), ry(-kPi - eps));
        case GateKind::SX: return embed_1q(n, local.at(in.qubits[0]), sx_gate());
        case GateKind::H: return embed_1q(n, local.at(in.qubits[0]), h_gate());
        case GateKind::RZ: return embed_1q(n, local.at(in.qubits[0]), rz(in.angle));
        case GateKind::CX: return embed_2q(n, local.at(in.qubits[0]), local.at(in.qubits[1]), cx_gate());
        case GateKind::Unitary:
            if (in.qubits.size() == 1) return embed_1q(n, local.at(in.qubits[0]), Mat2(in.matrix));
            return embed_2q(n, local.at(in.qubits[0]), local.at(in.qubits[1]), Mat4(in.matrix));
        default: throw std::invalid_argument("no unitary for this instruction");
    }
}

bool is_unitary_kind(GateKind k) {
    switch (k) {
        case GateKind::Delay:
        case GateKind::Barrier:
        case GateKind::Measure: return false;
        default: return true;
    }
}

}  // namespace

DensityMatrix simulate(const ScheduledCircuit& circuit, const DeviceModel& device, const NoiseConfig& noise,
                       const DensityMatrix& initial) {
    const std::vector<int> ids = circuit.qubit_ids();
    const int n = static_cast<int>(ids.size());
    if (n > 4) throw std::invalid_argument("simulate: more than 4 qubits");
    if (initial.num_qubits != n) throw std::invalid_argument("simulate: initial state dimension mismatch");
    std::map<int, int> local;
    for (int k = 0; k < n; ++k) local[ids[k]] = k;

    // slice boundaries at every instruction start and end
    std::set<long long> cuts = {0, circuit.total_duration};
    for (const auto& in : circuit.instructions) {
        if (in.start < 0) throw std::invalid_argument("simulate: circuit is not scheduled");
        cuts.insert(in.start);
        cuts.insert(in.start + in.duration);
    }
    const std::vector<long long> times(cuts.begin(), cuts.end());

    // ZZ pairs present in this circuit, with CX spans for the rotary flag
    struct ZZPair {
        int la, lb;  // local, la < lb
        double nu_khz;
        std::vector<std::pair<long long, long long>> cx_spans;
    };
    std::vector<ZZPair> zz;
    for (const auto& [pair, nu] : noise.zz_khz) {
        auto ita = local.find(pair.first);
        auto itb = local.find(pair.second);
        if (ita == local.end() || itb == local.end()) continue;
        ZZPair p{std::min(ita->second, itb->second), std::max(ita->second, itb->second), nu, {}};
        if (noise.rotary_echo) {
            for (const auto& in : circuit.instructions) {
                if (in.kind != GateKind::CX) continue;
                const int a = local.at(in.qubits[0]), b = local.at(in.qubits[1]);
                if (std::minmax(a, b) == std::minmax(p.la, p.lb)) p.cx_spans.push_back({in.start, in.start + in.duration});
            }
        }
        zz.push_back(std::move(p));
    }

    DensityMatrix state = initial;
    const double dt_ns = device.dt_ns();

    for (size_t ti = 0; ti < times.size(); ++ti) {
        const long long t = times[ti];
        // gates scheduled here, in program order
        for (const auto& in : circuit.instructions) {
            if (in.start != t || !is_unitary_kind(in.kind)) continue;
            const Mat u = instruction_unitary(in, n, local, noise.overrotation_epsilon);
            state.rho = u * state.rho * u.adjoint();
        }
        if (ti + 1 >= times.size()) break;
        const long long span = times[ti + 1] - t;
        if (span <= 0) continue;
        const double span_ns = static_cast<double>(span) * dt_ns;

        for (const auto& p : zz) {
            bool covered = false;
            for (const auto& [s, e] : p.cx_spans)
                if (s <= t && times[ti + 1] <= e) covered = true;
            if (covered) continue;
            const double theta = 2.0 * kPi * p.nu_khz * span_ns * 1e-6;
            const Mat u = embed_2q(n, p.la, p.lb, zz_unitary(theta));
            state.rho = u * state.rho * u.adjoint();
        }
        for (const auto& [q, f_khz] : noise.detuning_khz) {
            auto it = local.find(q);
            if (it == local.end()) continue;
            const double phi = 2.0 * kPi * f_khz * span_ns * 1e-6;
            const Mat u = embed_1q(n, it->second, rz(phi));
            state.rho = u * state.rho * u.adjoint();
        }
        if (noise.relaxation) {
            for (int k = 0; k < n; ++k) {
                const QubitProps& q = device.qubit(ids[k]);
                state = relaxation_channel(state, k, span_ns, q.t1_us * 1e3, q.t2_us * 1e3);
            }
        }
    }
    return state;
}

DensityMatrix simulate(const ScheduledCircuit& circuit, const DeviceModel& device, const NoiseConfig& noise) {
    return simulate(circuit, device, noise, DensityMatrix::ground(static_cast<int>(circuit.qubit_ids().size())));
}

double expectation_population(const DensityMatrix& rho, const std::string& bitstring) {
    if (static_cast<int>(bitstring.size()) != rho.num_qubits)
        throw std::invalid_argument("bitstring length must equal qubit count");
    Eigen::Index idx = 0;
    for (char c : bitstring) {
        if (c != '0' && c != '1') throw std::invalid_argument("bitstring must be binary");
        idx = (idx << 1) | (c == '1' ? 1 : 0);
    }
    return rho.rho(idx, idx).real();
}

double prob_all_zero(const DensityMatrix& rho, const std::vector<int>& local_qubits) {
    double p = 0.0;
    const int n = rho.num_qubits;
    for (Eigen::Index i = 0; i < rho.dim(); ++i) {
        bool keep = true;
        for (int q : local_qubits)
            if ((i >> (n - 1 - q)) & 1) keep = false;
        if (keep) p += rho.rho(i, i).real();
    }
    return p;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(a.rho - b.rho));
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace stagdd
