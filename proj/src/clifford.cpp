#include "stagdd/clifford.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "stagdd/gates.hpp"

namespace stagdd {

namespace {

Mat2 pauli_1q(int x, int z) {
    if (x && z) return pauli_y();
    if (x) return pauli_x();
    if (z) return pauli_z();
    return pauli_i();
}

Pauli2 decompose_pauli(const Mat4& m) {
    for (int x0 = 0; x0 < 2; ++x0)
        for (int z0 = 0; z0 < 2; ++z0)
            for (int x1 = 0; x1 < 2; ++x1)
                for (int z1 = 0; z1 < 2; ++z1) {
                    Pauli2 p{{x0, z0, x1, z1}, 1};
                    const Mat4 cand = p.to_matrix();
                    if ((m - cand).cwiseAbs().maxCoeff() < 1e-8) return p;
                    if ((m + cand).cwiseAbs().maxCoeff() < 1e-8) {
                        p.sign = -1;
                        return p;
                    }
                }
    throw std::runtime_error("matrix is not a signed Pauli; not a Clifford conjugation");
}

// generator matrices X0, Z0, X1, Z1 (qubit 0 is the most significant bit)
const Mat4& generator_matrix(int g) {
    static const std::array<Mat4, 4> gens = [] {
        std::array<Mat4, 4> out;
        out[0] = kron(pauli_x(), Mat2::Identity());
        out[1] = kron(pauli_z(), Mat2::Identity());
        out[2] = kron(Mat2::Identity(), pauli_x());
        out[3] = kron(Mat2::Identity(), pauli_z());
        return out;
    }();
    return gens[g];
}

}  // namespace

Mat4 Pauli2::to_matrix() const {
    Mat2 a = pauli_1q(bits[0], bits[1]);
    Mat2 b = pauli_1q(bits[2], bits[3]);
    return static_cast<double>(sign) * Mat4(kron(a, b));
}

CliffordTableau CliffordTableau::identity() {
    CliffordTableau t;
    for (int g = 0; g < 4; ++g) {
        t.img[g].bits = {0, 0, 0, 0};
        t.img[g].bits[g] = 1;
        t.img[g].sign = 1;
    }
    return t;
}

CliffordTableau CliffordTableau::from_unitary(const Mat4& u) {
    CliffordTableau t;
    for (int g = 0; g < 4; ++g) t.img[g] = decompose_pauli(Mat4(u * generator_matrix(g) * u.adjoint()));
    return t;
}

Pauli2 CliffordTableau::apply(const Pauli2& p) const {
    // P = pref * X0^x0 Z0^z0 X1^x1 Z1^z1 with pref = sign * i^{#Y}; the image
    // substitutes each generator by its tableau image
    Mat4 prod = Mat4::Identity();
    for (int g = 0; g < 4; ++g)
        if (p.bits[g]) prod = prod * img[g].to_matrix();
    const int ycount = (p.bits[0] & p.bits[1]) + (p.bits[2] & p.bits[3]);
    cplx pref = static_cast<double>(p.sign);
    for (int k = 0; k < ycount; ++k) pref *= cplx(0, 1);
    return decompose_pauli(Mat4(pref * prod));
}

CliffordTableau CliffordTableau::compose(const CliffordTableau& other) const {
    CliffordTableau out;
    for (int g = 0; g < 4; ++g) out.img[g] = apply(other.img[g]);
    return out;
}

CliffordTableau CliffordTableau::inverse() const {
    // invert the symplectic bit matrix over GF(2); columns are generator images
    std::array<std::array<int, 8>, 4> aug{};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) aug[r][c] = img[c].bits[r];
        aug[r][4 + r] = 1;
    }
    for (int col = 0; col < 4; ++col) {
        int pivot = -1;
        for (int r = col; r < 4; ++r)
            if (aug[r][col]) {
                pivot = r;
                break;
            }
        if (pivot < 0) throw std::runtime_error("singular tableau");
        std::swap(aug[col], aug[pivot]);
        for (int r = 0; r < 4; ++r) {
            if (r == col || !aug[r][col]) continue;
            for (int c = 0; c < 8; ++c) aug[r][c] ^= aug[col][c];
        }
    }
    CliffordTableau out;
    for (int g = 0; g < 4; ++g) {
        Pauli2 pre;
        for (int r = 0; r < 4; ++r) pre.bits[r] = aug[r][4 + g];
        pre.sign = 1;
        // forward image of the sign-free preimage fixes the sign:
        // U P U† = s G  =>  U† G U = s P
        const Pauli2 fwd = apply(pre);
        pre.sign = fwd.sign;
        out.img[g] = pre;
    }
    return out;
}

bool CliffordTableau::is_identity() const { return *this == identity(); }

namespace {

struct OneQubitClifford {
    std::vector<Instruction> gates;  // on template qubit 0
    Mat2 u;
};

std::string canonical_key(const Mat& u) {
    const double maxabs = u.cwiseAbs().maxCoeff();
    cplx phase(1, 0);
    bool found = false;
    for (Eigen::Index i = 0; i < u.rows() && !found; ++i)
        for (Eigen::Index j = 0; j < u.cols(); ++j)
            if (std::abs(u(i, j)) > maxabs * (1.0 - 1e-6)) {
                phase = u(i, j) / std::abs(u(i, j));
                found = true;
                break;
            }
    std::ostringstream key;
    for (Eigen::Index i = 0; i < u.rows(); ++i)
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            const cplx v = u(i, j) / phase;
            key << std::llround(v.real() * 1e6) << "," << std::llround(v.imag() * 1e6) << ";";
        }
    return key.str();
}

std::vector<OneQubitClifford> build_c1() {
    const std::array<double, 4> angles = {0.0, kPi / 2, kPi, 3 * kPi / 2};
    std::vector<OneQubitClifford> out;
    std::unordered_map<std::string, int> seen;

    auto try_add = [&](const std::vector<double>& rz_angles) {
        // circuit: RZ(a0) [SX RZ(a1) [SX RZ(a2)]], first gate applied first
        std::vector<Instruction> gates;
        Mat2 u = Mat2::Identity();
        for (size_t k = 0; k < rz_angles.size(); ++k) {
            if (k > 0) {
                gates.push_back(Instruction::gate(GateKind::SX, {0}));
                u = sx_gate() * u;
            }
            if (rz_angles[k] != 0.0) {
                gates.push_back(Instruction::rz(0, rz_angles[k]));
                u = rz(rz_angles[k]) * u;
            }
        }
        const std::string key = canonical_key(u);
        if (seen.count(key)) return;
        seen[key] = static_cast<int>(out.size());
        out.push_back({std::move(gates), u});
    };

    for (double a : angles) try_add({a});
    for (double a : angles)
        for (double b : angles) try_add({a, b});
    for (double a : angles)
        for (double b : angles)
            for (double c : angles) try_add({a, b, c});
    if (out.size() != 24) throw std::runtime_error("single-qubit Clifford enumeration failed");
    return out;
}

std::vector<Instruction> on_qubit(const std::vector<Instruction>& tmpl, int q) {
    std::vector<Instruction> out = tmpl;
    for (auto& in : out) in.qubits = {q};
    return out;
}

Mat4 iswap_matrix() {
    Mat4 m = Mat4::Zero();
    m(0, 0) = 1;
    m(1, 2) = cplx(0, 1);
    m(2, 1) = cplx(0, 1);
    m(3, 3) = 1;
    return m;
}

}  // namespace

CliffordTable::CliffordTable() {
    const std::vector<OneQubitClifford> c1 = build_c1();

    // axis-cycling element V: X -> Y -> Z -> X; S1 = {I, V, V^2}
    int v_idx = -1;
    for (int i = 0; i < 24; ++i) {
        const Mat2& u = c1[i].u;
        if (equal_up_to_phase(Mat2(u * pauli_x() * u.adjoint()), pauli_y(), 1e-9) &&
            equal_up_to_phase(Mat2(u * pauli_y() * u.adjoint()), pauli_z(), 1e-9)) {
            v_idx = i;
            break;
        }
    }
    if (v_idx < 0) throw std::runtime_error("axis-cycling Clifford not found");
    int v2_idx = -1, id_idx = -1;
    for (int i = 0; i < 24; ++i) {
        if (equal_up_to_phase(c1[i].u, Mat2(c1[v_idx].u * c1[v_idx].u), 1e-9)) v2_idx = i;
        if (equal_up_to_phase(c1[i].u, Mat2::Identity(), 1e-9)) id_idx = i;
    }
    const std::array<int, 3> s1 = {id_idx, v_idx, v2_idx};

    // entangling-layer circuits on template qubits (0 = control of CX(0,1))
    const std::vector<Instruction> cx01 = {Instruction::gate(GateKind::CX, {0, 1})};
    const std::vector<Instruction> cx10 = {Instruction::gate(GateKind::CX, {1, 0})};
    auto concat = [](std::initializer_list<std::vector<Instruction>> parts) {
        std::vector<Instruction> out;
        for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
        return out;
    };
    const std::vector<Instruction> swap_circ = concat({cx01, cx10, cx01});
    // iSWAP = (S⊗S)·(H⊗I)·CX01·CX10·(I⊗H)
    const std::vector<Instruction> iswap_circ = concat({{Instruction::rz(0, kPi / 2), Instruction::rz(1, kPi / 2),
                                                         Instruction::gate(GateKind::H, {0})},
                                                        cx01,
                                                        cx10,
                                                        {Instruction::gate(GateKind::H, {1})}});

    auto circuit_unitary = [](const std::vector<Instruction>& gates) {
        Mat4 u = Mat4::Identity();
        for (const auto& in : gates) {
            Mat4 g;
            const bool on0 = (in.qubits[0] == 0);
            switch (in.kind) {
                case GateKind::SX: g = on0 ? kron(sx_gate(), Mat2::Identity()) : kron(Mat2::Identity(), sx_gate()); break;
                case GateKind::H: g = on0 ? kron(h_gate(), Mat2::Identity()) : kron(Mat2::Identity(), h_gate()); break;
                case GateKind::RZ:
                    g = on0 ? kron(rz(in.angle), Mat2::Identity()) : kron(Mat2::Identity(), rz(in.angle));
                    break;
                case GateKind::CX: {
                    Mat4 cx = cx_gate();
                    if (in.qubits[0] == 0) {
                        g = cx;
                    } else {
                        // control on template qubit 1: conjugate by SWAP
                        Mat4 sw = Mat4::Zero();
                        sw(0, 0) = sw(3, 3) = 1;
                        sw(1, 2) = sw(2, 1) = 1;
                        g = sw * cx * sw;
                    }
                    break;
                }
                default: throw std::runtime_error("unexpected gate in Clifford circuit");
            }
            u = g * u;
        }
        return u;
    };

    if (!equal_up_to_phase(circuit_unitary(iswap_circ), iswap_matrix(), 1e-9))
        throw std::runtime_error("iSWAP realization incorrect");

    circuits_.reserve(kGroupOrder);
    unitaries_.reserve(kGroupOrder);
    auto add = [&](std::vector<Instruction> gates) {
        Mat4 u = circuit_unitary(gates);
        const std::string key = canonical_key(u);
        if (!by_key_.emplace(key, static_cast<int>(circuits_.size())).second)
            throw std::runtime_error("duplicate Clifford in class enumeration");
        circuits_.push_back(std::move(gates));
        unitaries_.push_back(std::move(u));
    };

    for (int i = 0; i < 24; ++i) {
        for (int j = 0; j < 24; ++j) {
            const auto layer = concat({on_qubit(c1[i].gates, 0), on_qubit(c1[j].gates, 1)});
            // single-qubit class
            add(layer);
            // CX and iSWAP classes with trailing S1 corrections
            for (int a : s1)
                for (int b : s1) {
                    add(concat({layer, cx01, on_qubit(c1[a].gates, 0), on_qubit(c1[b].gates, 1)}));
                    add(concat({layer, iswap_circ, on_qubit(c1[a].gates, 0), on_qubit(c1[b].gates, 1)}));
                }
            // SWAP class
            add(concat({layer, swap_circ}));
        }
    }
    if (static_cast<int>(circuits_.size()) != kGroupOrder)
        throw std::runtime_error("two-qubit Clifford enumeration incomplete");
}

const CliffordTable& CliffordTable::instance() {
    static const CliffordTable table;
    return table;
}

std::vector<Instruction> CliffordTable::circuit(int idx, int qa, int qb) const {
    std::vector<Instruction> out = circuits_.at(idx);
    for (auto& in : out)
        for (auto& q : in.qubits) q = (q == 0) ? qa : qb;
    return out;
}

int CliffordTable::index_of(const Mat4& u) const {
    auto it = by_key_.find(canonical_key(u));
    return it == by_key_.end() ? -1 : it->second;
}

int CliffordTable::inverse_index(int idx) const {
    const int inv = index_of(Mat4(unitaries_.at(idx).adjoint()));
    if (inv < 0) throw std::runtime_error("inverse lookup failed");
    return inv;
}

Mat4 haar_su4(Rng& rng) {
    Mat4 g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = cplx(rng.gauss(), rng.gauss());
    Eigen::HouseholderQR<Mat4> qr(g);
    Mat4 q = qr.householderQ();
    const Mat4 r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < 4; ++j) {
        cplx d = r(j, j);
        d /= std::abs(d);
        q.col(j) *= d;
    }
    // remove the residual determinant phase
    const cplx det = q.determinant();
    q *= std::pow(det, -0.25);
    return q;
}

}  // namespace stagdd
