#pragma once

#include "stagdd/types.hpp"

namespace stagdd {

inline Mat2 pauli_i() { return Mat2::Identity(); }

inline Mat2 pauli_x() {
    Mat2 m;
    m << 0, 1, 1, 0;
    return m;
}

inline Mat2 pauli_y() {
    Mat2 m;
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

inline Mat2 pauli_z() {
    Mat2 m;
    m << 1, 0, 0, -1;
    return m;
}

inline Mat2 rx(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Mat2 m;
    m << c, cplx(0, -s), cplx(0, -s), c;
    return m;
}

inline Mat2 ry(double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Mat2 m;
    m << c, -s, s, c;
    return m;
}

inline Mat2 rz(double theta) {
    Mat2 m = Mat2::Zero();
    m(0, 0) = std::exp(cplx(0, -theta / 2));
    m(1, 1) = std::exp(cplx(0, theta / 2));
    return m;
}

// sqrt(X) with SX^2 = X exactly
inline Mat2 sx_gate() {
    Mat2 m;
    m << cplx(0.5, 0.5), cplx(0.5, -0.5), cplx(0.5, -0.5), cplx(0.5, 0.5);
    return m;
}

inline Mat2 h_gate() {
    const double s = 1.0 / std::sqrt(2.0);
    Mat2 m;
    m << s, s, s, -s;
    return m;
}

// control is the first (most significant) qubit of the 2-bit index
inline Mat4 cx_gate() {
    Mat4 m = Mat4::Zero();
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return m;
}

// exp(-i theta/2 Z (x) Z)
inline Mat4 zz_unitary(double theta) {
    Mat4 m = Mat4::Zero();
    const cplx minus = std::exp(cplx(0, -theta / 2));
    const cplx plus = std::exp(cplx(0, theta / 2));
    m(0, 0) = minus;
    m(1, 1) = plus;
    m(2, 2) = plus;
    m(3, 3) = minus;
    return m;
}

}  // namespace stagdd
