#pragma once

#include <Eigen/Dense>
#include <complex>

namespace stagdd {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

// Kronecker product, row-major qubit ordering is handled by the caller.
inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// true iff a == e^{i phi} b for some phase, within tol
inline bool equal_up_to_phase(const Mat& a, const Mat& b, double tol = 1e-10) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    // find largest element of b to extract the relative phase
    Eigen::Index bi = 0, bj = 0;
    b.cwiseAbs().maxCoeff(&bi, &bj);
    if (std::abs(b(bi, bj)) < tol) return a.cwiseAbs().maxCoeff() < tol;
    if (std::abs(a(bi, bj)) < tol) return false;
    cplx phase = a(bi, bj) / b(bi, bj);
    phase /= std::abs(phase);
    return (a - phase * b).cwiseAbs().maxCoeff() < tol;
}

}  // namespace stagdd
