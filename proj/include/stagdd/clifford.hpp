#pragma once

#include <array>
#include <unordered_map>
#include <vector>

#include "stagdd/circuit.hpp"
#include "stagdd/rng.hpp"
#include "stagdd/types.hpp"

namespace stagdd {

// Hermitian two-qubit Pauli with sign, bits ordered [x0, z0, x1, z1].
struct Pauli2 {
    std::array<int, 4> bits{0, 0, 0, 0};
    int sign = 1;

    Mat4 to_matrix() const;
    bool operator==(const Pauli2& o) const { return bits == o.bits && sign == o.sign; }
};

// Conjugation action on the generators X0, Z0, X1, Z1.
struct CliffordTableau {
    std::array<Pauli2, 4> img;

    static CliffordTableau identity();
    static CliffordTableau from_unitary(const Mat4& u);

    // image of an arbitrary signed Pauli under this Clifford
    Pauli2 apply(const Pauli2& p) const;
    // tableau of (this ∘ other): this applied after other
    CliffordTableau compose(const CliffordTableau& other) const;
    CliffordTableau inverse() const;
    bool is_identity() const;
    bool operator==(const CliffordTableau& o) const { return img == o.img; }
};

// The full 11520-element two-qubit Clifford group, enumerated through the
// class decomposition (single-qubit layers x {1, CX, iSWAP, SWAP} cosets).
// Each element carries a gate realization over {RZ, SX, H, CX} on template
// qubits 0/1 and its 4x4 unitary. Uniform sampling is uniform over indices.
class CliffordTable {
public:
    static constexpr int kGroupOrder = 11520;

    static const CliffordTable& instance();

    const Mat4& unitary(int idx) const { return unitaries_[idx]; }
    // gate list instantiated on device qubits (qa, qb)
    std::vector<Instruction> circuit(int idx, int qa, int qb) const;
    // up-to-global-phase lookup; -1 when u is not a Clifford in the table
    int index_of(const Mat4& u) const;
    int inverse_index(int idx) const;
    int sample(Rng& rng) const { return static_cast<int>(rng.below(kGroupOrder)); }

private:
    CliffordTable();
    std::vector<std::vector<Instruction>> circuits_;  // on template qubits 0,1
    std::vector<Mat4> unitaries_;
    std::unordered_map<std::string, int> by_key_;
};

// Haar-random SU(4) via QR of a complex Gaussian matrix with phase correction.
Mat4 haar_su4(Rng& rng);

}  // namespace stagdd
