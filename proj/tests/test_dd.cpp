#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "stagdd/dd.hpp"
#include "stagdd/gates.hpp"
#include "stagdd/rng.hpp"
#include "stagdd/sim.hpp"

using namespace stagdd;

namespace {

const DeviceModel& test_device() {
    static const DeviceModel dev = load_device(R"({
      "dt_ns": "1",
      "qubits": [
        {"index":0,"t1":50,"t2":60,"frequency":5.10,"anharmonicity":0.30,"sx_duration":4,"x_duration":8},
        {"index":1,"t1":50,"t2":60,"frequency":5.20,"anharmonicity":0.30,"sx_duration":4,"x_duration":8}],
      "couplings": [
        {"control":0,"target":1,"j_coupling":2.0,"zz_strength":50.0,"cx_duration":16,"cx_type":"ECR"}]})");
    return dev;
}

Mat2 pulse_matrix(GateKind g) {
    switch (g) {
        case GateKind::Xp: return rx(kPi);
        case GateKind::Xm: return rx(-kPi);
        case GateKind::Yp: return ry(kPi);
        case GateKind::Ym: return ry(-kPi);
        default: throw std::logic_error("not a pulse");
    }
}

}  // namespace

TEST_CASE("every sequence composes to the identity, unlike a mixed-axis pair") {
    const std::map<DDSequenceName, size_t> lengths = {
        {DDSequenceName::X2, 2},  {DDSequenceName::X2pm, 2},  {DDSequenceName::XY4, 4},
        {DDSequenceName::XY4pm, 4}, {DDSequenceName::XY8, 8}, {DDSequenceName::XY8pm, 8}};
    for (const auto& [seq, len] : lengths) {
        const auto gates = dd_gates(seq);
        CHECK(gates.size() == len);
        CHECK(verify_identity(seq));
        // independent product check
        Mat2 u = Mat2::Identity();
        for (GateKind g : gates) u = pulse_matrix(g) * u;
        CHECK(equal_up_to_phase(u, Mat2::Identity(), 1e-12));
    }
    // sanity: the check is not vacuous
    CHECK_FALSE(equal_up_to_phase(ry(kPi) * rx(kPi), Mat2::Identity(), 1e-6));
}

TEST_CASE("pulse centers: symmetric at odd half-intervals, staggered at interval ends") {
    CHECK(pulse_times(1280, 2, StaggerRole::Symmetric, 0) == std::vector<long long>{320, 960});
    CHECK(pulse_times(1280, 2, StaggerRole::Staggered, 0) == std::vector<long long>{640, 1280});
    // finite pulses: starts shift by half the gate, last staggered pulse clamps inside
    CHECK(pulse_times(1280, 2, StaggerRole::Symmetric, 160) == std::vector<long long>{240, 880});
    CHECK(pulse_times(1280, 2, StaggerRole::Staggered, 160) == std::vector<long long>{560, 1120});
    CHECK_THROWS_AS(pulse_times(100, 8, StaggerRole::Symmetric, 20), WindowTooShort);
    CHECK_THROWS_AS(pulse_times(10, 0, StaggerRole::Symmetric, 0), std::invalid_argument);
}

TEST_CASE("pulse placement properties over random windows") {
    Rng rng(17);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 << rng.below(4);
        const long long g = 2 * static_cast<long long>(rng.below(40));
        // staggered placement wants its last pulse flush with the window end,
        // so leave it more headroom than the bare n*g lower bound
        for (auto [role, T] : {std::pair{StaggerRole::Symmetric, n * g + static_cast<long long>(rng.below(4000))},
                               std::pair{StaggerRole::Staggered, 2 * n * g + static_cast<long long>(rng.below(4000))}}) {
            const auto starts = pulse_times(T, n, role, g);
            REQUIRE(static_cast<int>(starts.size()) == n);
            long long prev_end = 0;
            for (long long s : starts) {
                CHECK(s >= prev_end);
                CHECK(s + g <= T);
                prev_end = s + g;
            }
        }
        // a window with no slack rejects the staggered pattern as too short
        if (g > 0 && n > 1) CHECK_THROWS_AS(pulse_times(n * g, n, StaggerRole::Staggered, g), WindowTooShort);
        // zero-width pulses on an exactly divisible grid sit on the ideal centers
        const long long Td = 2LL * n * (1 + rng.below(100));
        const auto sym = pulse_times(Td, n, StaggerRole::Symmetric, 0);
        for (int k = 1; k <= n; ++k) CHECK(sym[k - 1] == (2 * k - 1) * Td / (2 * n));
    }
}

TEST_CASE("role assignment two-colors the coupling graph") {
    const auto plan = make_plan(DDSequenceName::X2pm, DDMode::Staggered, {{11, 14}, {13, 14}, {12, 13}});
    CHECK(plan.roles.at(11) == StaggerRole::Symmetric);
    CHECK(plan.roles.at(14) == StaggerRole::Staggered);
    CHECK(plan.roles.at(13) == StaggerRole::Symmetric);
    CHECK(plan.roles.at(12) == StaggerRole::Staggered);

    const auto inv = make_plan(DDSequenceName::X2pm, DDMode::StaggeredInverse, {{11, 14}, {13, 14}, {12, 13}});
    CHECK(inv.roles.at(11) == StaggerRole::Staggered);
    CHECK(inv.roles.at(14) == StaggerRole::Symmetric);

    const auto std_plan = make_plan(DDSequenceName::X2pm, DDMode::Standard, {{11, 14}, {13, 14}});
    for (const auto& [q, role] : std_plan.roles) CHECK(role == StaggerRole::Symmetric);

    CHECK_THROWS_AS(make_plan(DDSequenceName::X2pm, DDMode::Staggered, {{0, 1}, {1, 2}, {0, 2}}),
                    std::invalid_argument);
}

namespace {

ScheduledCircuit delay_sandwich(long long delay, const DeviceModel& dev) {
    return schedule_asap({Instruction::gate(GateKind::SX, {0}), Instruction::gate(GateKind::SX, {1}),
                          Instruction::barrier(), Instruction::delay(0, delay), Instruction::delay(1, delay),
                          Instruction::barrier(), Instruction::gate(GateKind::SX, {0}),
                          Instruction::gate(GateKind::SX, {1})},
                         dev);
}

}  // namespace

TEST_CASE("insertion fills delay windows and preserves timing and occupancy") {
    const auto& dev = test_device();
    const auto base = delay_sandwich(800, dev);
    const auto plan = make_plan(DDSequenceName::X2pm, DDMode::Staggered, {{0, 1}});
    InsertionReport rep;
    const auto dressed = insert_dd(base, plan, dev, &rep);

    CHECK(rep.windows_filled == 2);
    CHECK(rep.windows_skipped == 0);
    CHECK(dressed.total_duration == base.total_duration);

    // each qubit's window [4, 804) is exactly tiled by delays and two pulses
    for (int q : {0, 1}) {
        long long cursor = 4;
        int pulses = 0;
        for (const auto& in : dressed.instructions) {
            if (in.qubits != std::vector<int>{q} || in.start < 4 || in.start >= 804) continue;
            CHECK(in.start == cursor);
            cursor = in.start + in.duration;
            if (in.kind != GateKind::Delay) {
                ++pulses;
                CHECK(in.duration == 8);
                CHECK((in.kind == GateKind::Xp || in.kind == GateKind::Xm));
            }
        }
        CHECK(cursor == 804);
        CHECK(pulses == 2);
    }

    // symmetric pulses centered at T/4, 3T/4; staggered at T/2, T
    std::map<int, std::vector<long long>> centers;
    for (const auto& in : dressed.instructions)
        if (in.kind == GateKind::Xp || in.kind == GateKind::Xm)
            centers[in.qubits[0]].push_back(in.start + in.duration / 2);
    CHECK(centers[0] == std::vector<long long>{4 + 200, 4 + 600});
    CHECK(centers[1] == std::vector<long long>{4 + 400, 4 + 800 - 4});  // clamped flush to the window end
    CHECK(rep.max_center_error_dt == doctest::Approx(4.0));
}

TEST_CASE("insertion is a noiseless no-op for every sequence") {
    const auto& dev = test_device();
    const auto base = delay_sandwich(640, dev);
    NoiseConfig noiseless;
    const auto ref = simulate(base, dev, noiseless);
    for (auto seq : {DDSequenceName::X2, DDSequenceName::X2pm, DDSequenceName::XY4, DDSequenceName::XY4pm,
                     DDSequenceName::XY8, DDSequenceName::XY8pm}) {
        for (auto mode : {DDMode::Standard, DDMode::Staggered, DDMode::StaggeredInverse}) {
            const auto dressed = insert_dd(base, make_plan(seq, mode, {{0, 1}}), dev, nullptr);
            CHECK(trace_distance(simulate(dressed, dev, noiseless), ref) < 1e-10);
        }
    }
}

TEST_CASE("too-short windows are skipped and reported") {
    const auto& dev = test_device();
    const auto base = delay_sandwich(40, dev);  // XY8 needs 8 * 8 = 64 dt
    InsertionReport rep;
    const auto dressed = insert_dd(base, make_plan(DDSequenceName::XY8, DDMode::Staggered, {{0, 1}}), dev, &rep);
    CHECK(rep.windows_filled == 0);
    CHECK(rep.windows_skipped == 2);
    CHECK(dressed.instructions.size() == base.instructions.size());
}

TEST_CASE("gaps without an explicit delay are left alone") {
    const auto& dev = test_device();
    // q0 idles 4..8 between SX and CX, but no Delay instruction spans it
    const auto base = schedule_asap({Instruction::gate(GateKind::SX, {0}), Instruction::gate(GateKind::Xp, {1}),
                                     Instruction::gate(GateKind::CX, {0, 1}), Instruction::gate(GateKind::SX, {0})},
                                    dev);
    REQUIRE(find_idle_windows(base).size() == 1);
    InsertionReport rep;
    const auto dressed = insert_dd(base, make_plan(DDSequenceName::X2pm, DDMode::Standard, {{0, 1}}), dev, &rep);
    CHECK(rep.windows_filled == 0);
    CHECK(dressed.instructions.size() == base.instructions.size());
}

TEST_CASE("mode none and unplanned qubits insert nothing") {
    const auto& dev = test_device();
    const auto base = delay_sandwich(800, dev);
    const auto none = insert_dd(base, make_plan(DDSequenceName::X2pm, DDMode::None, {{0, 1}}), dev, nullptr);
    CHECK(none.instructions.size() == base.instructions.size());

    DDPlan only_q1;
    only_q1.sequence = DDSequenceName::X2pm;
    only_q1.mode = DDMode::Standard;
    only_q1.roles[1] = StaggerRole::Symmetric;
    InsertionReport rep;
    insert_dd(base, only_q1, dev, &rep);
    CHECK(rep.windows_filled == 1);
}
