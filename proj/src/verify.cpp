#include "stagdd/verify.hpp"

#include <cmath>

#include "stagdd/dd.hpp"
#include "stagdd/gates.hpp"
#include "stagdd/rng.hpp"

namespace stagdd {

namespace {

Mat4 xx() { return kron(pauli_x(), pauli_x()); }
Mat4 xi() { return kron(pauli_x(), Mat2::Identity()); }
Mat4 ix() { return kron(Mat2::Identity(), pauli_x()); }

}  // namespace

bool run_verification(std::ostream& os, int draws, std::uint64_t seed) {
    Rng rng(seed);
    bool ok = true;
    auto report = [&](const char* name, double dev, double tol) {
        const bool pass = dev < tol;
        ok = ok && pass;
        os << (pass ? "PASS" : "FAIL") << " " << name << " (max deviation " << dev << ")\n";
    };

    double dev_commute = 0, dev_invert = 0, dev_accumulate = 0, dev_cancel = 0;
    for (int i = 0; i < draws; ++i) {
        const double theta = (rng.uniform() - 0.5) * 8.0 * kPi;
        dev_commute = std::max(dev_commute, (xx() * zz_unitary(theta) * xx() - zz_unitary(theta)).cwiseAbs().maxCoeff());
        dev_invert = std::max(dev_invert, (xi() * zz_unitary(theta) * xi() - zz_unitary(-theta)).cwiseAbs().maxCoeff());
        dev_invert = std::max(dev_invert, (ix() * zz_unitary(theta) * ix() - zz_unitary(-theta)).cwiseAbs().maxCoeff());

        double th[4];
        for (double& v : th) v = (rng.uniform() - 0.5) * 8.0 * kPi;
        // standard simultaneous pulses: phases accumulate
        const Mat4 standard = zz_unitary(th[3]) * xx() * zz_unitary(th[1] + th[2]) * xx() * zz_unitary(th[0]);
        dev_accumulate = std::max(
            dev_accumulate, (standard - zz_unitary(th[0] + th[1] + th[2] + th[3])).cwiseAbs().maxCoeff());
        // staggered single-qubit pulses with equal sub-interval angles: cancel
        const Mat4 staggered = ix() * zz_unitary(theta) * xi() * zz_unitary(theta) * ix() * zz_unitary(theta) * xi() *
                               zz_unitary(theta);
        dev_cancel = std::max(dev_cancel, (staggered - Mat4::Identity()).cwiseAbs().maxCoeff());
    }
    report("zz-commutes-with-xx", dev_commute, 1e-10);
    report("zz-inverted-by-single-x", dev_invert, 1e-10);
    report("zz-accumulates-standard", dev_accumulate, 1e-10);
    report("zz-cancels-staggered", dev_cancel, 1e-10);

    for (auto s : {DDSequenceName::X2, DDSequenceName::X2pm, DDSequenceName::XY4, DDSequenceName::XY4pm,
                   DDSequenceName::XY8, DDSequenceName::XY8pm}) {
        const bool pass = verify_identity(s);
        ok = ok && pass;
        os << (pass ? "PASS" : "FAIL") << " identity-composition " << sequence_name(s) << "\n";
    }
    return ok;
}

}  // namespace stagdd
