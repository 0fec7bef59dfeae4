#include "stagdd/device.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace stagdd {

using nlohmann::json;

const QubitProps& DeviceModel::qubit(int id) const {
    for (const auto& q : qubits)
        if (q.index == id) return q;
    throw std::invalid_argument("unknown qubit " + std::to_string(id));
}

bool DeviceModel::has_qubit(int id) const {
    for (const auto& q : qubits)
        if (q.index == id) return true;
    return false;
}

const CouplingProps* DeviceModel::coupling(int a, int b) const {
    for (const auto& c : couplings) {
        if ((c.control == a && c.target == b) || (c.control == b && c.target == a)) return &c;
    }
    return nullptr;
}

double DeviceModel::zz_khz(int a, int b) const {
    const CouplingProps* c = coupling(a, b);
    if (!c) throw std::invalid_argument("qubits " + std::to_string(a) + "," + std::to_string(b) + " are not coupled");
    if (c->zz_khz) return *c->zz_khz;
    const QubitProps& qc = qubit(c->control);
    const QubitProps& qt = qubit(c->target);
    const double detuning = qc.frequency_ghz - qt.frequency_ghz;
    return compute_zz_khz(c->j_mhz * 1e-3, qc.anharmonicity_ghz, qt.anharmonicity_ghz, detuning);
}

long long DeviceModel::ns_to_dt(double ns) const {
    const double counts = ns * static_cast<double>(dt_den) / static_cast<double>(dt_num);
    const double rounded = std::round(counts);
    if (std::abs(counts - rounded) > 1e-6) {
        throw std::invalid_argument("time " + std::to_string(ns) + " ns is not an integer multiple of dt");
    }
    return static_cast<long long>(rounded);
}

void DeviceModel::validate() const {
    if (dt_num <= 0 || dt_den <= 0) throw std::invalid_argument("dt_ns must be positive");
    if (qubits.empty()) throw std::invalid_argument("qubits: empty qubit list");
    std::set<int> ids;
    for (const auto& q : qubits) {
        const std::string tag = "qubit " + std::to_string(q.index) + ": ";
        if (!ids.insert(q.index).second) throw std::invalid_argument(tag + "duplicate index");
        if (q.t1_us <= 0) throw std::invalid_argument(tag + "t1 must be > 0");
        if (q.t2_us <= 0 || q.t2_us > 2.0 * q.t1_us) throw std::invalid_argument(tag + "t2 must satisfy 0 < t2 <= 2*t1");
        if (q.frequency_ghz <= 0) throw std::invalid_argument(tag + "frequency must be > 0");
        if (q.anharmonicity_ghz <= 0) throw std::invalid_argument(tag + "anharmonicity must be > 0");
        if (q.sx_duration < 0 || q.x_duration < 0) throw std::invalid_argument(tag + "durations must be >= 0");
    }
    std::set<std::pair<int, int>> pairs;
    for (const auto& c : couplings) {
        const std::string tag = "coupling (" + std::to_string(c.control) + "," + std::to_string(c.target) + "): ";
        if (c.control == c.target) throw std::invalid_argument(tag + "control equals target");
        if (!ids.count(c.control)) throw std::invalid_argument(tag + "unknown control qubit");
        if (!ids.count(c.target)) throw std::invalid_argument(tag + "unknown target qubit");
        if (c.cx_duration <= 0) throw std::invalid_argument(tag + "cx_duration must be > 0");
        auto key = std::minmax(c.control, c.target);
        if (!pairs.insert({key.first, key.second}).second) throw std::invalid_argument(tag + "duplicate unordered pair");
    }
}

double compute_zz_khz(double j_ghz, double delta0_ghz, double delta1_ghz, double detuning_ghz) {
    if (delta0_ghz <= 0 || delta1_ghz <= 0) throw std::domain_error("anharmonicities must be > 0");
    const double f0 = delta1_ghz - detuning_ghz;
    const double f1 = delta0_ghz + detuning_ghz;
    if (f0 <= 0 || f1 <= 0) throw std::domain_error("perturbative expansion invalid: denominator factor <= 0");
    const double nu_ghz = 2.0 * j_ghz * j_ghz * (delta0_ghz + delta1_ghz) / (f0 * f1);
    return nu_ghz * 1e6;  // GHz -> kHz
}

namespace {

void parse_dt(const json& j, DeviceModel& dev) {
    if (!j.contains("dt_ns")) return;
    const auto& v = j.at("dt_ns");
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        const auto slash = s.find('/');
        try {
            if (slash == std::string::npos) {
                dev.dt_num = std::stoll(s);
                dev.dt_den = 1;
            } else {
                dev.dt_num = std::stoll(s.substr(0, slash));
                dev.dt_den = std::stoll(s.substr(slash + 1));
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("dt_ns: cannot parse rational '" + s + "'");
        }
    } else if (v.is_number()) {
        // accept a plain number; represent as value/1e9 reduced is overkill,
        // snap common periods instead
        const double x = v.get<double>();
        if (x <= 0) throw std::invalid_argument("dt_ns must be positive");
        if (std::abs(x - 2.0 / 9.0) < 1e-9) {
            dev.dt_num = 2;
            dev.dt_den = 9;
        } else {
            dev.dt_num = static_cast<long long>(std::llround(x * 1e6));
            dev.dt_den = 1000000;
        }
    } else {
        throw std::invalid_argument("dt_ns: expected number or rational string");
    }
}

template <typename T>
T require(const json& j, const char* field, const std::string& ctx) {
    if (!j.contains(field)) throw std::invalid_argument(ctx + ": missing field '" + field + "'");
    try {
        return j.at(field).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument(ctx + ": bad value for field '" + field + "'");
    }
}

}  // namespace

DeviceModel load_device(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("device file parse error: ") + e.what());
    }
    DeviceModel dev;
    parse_dt(j, dev);
    if (!j.contains("qubits")) throw std::invalid_argument("device file: missing 'qubits'");
    for (const auto& q : j.at("qubits")) {
        QubitProps p;
        const std::string ctx = "qubits entry";
        p.index = require<int>(q, "index", ctx);
        p.t1_us = require<double>(q, "t1", ctx);
        p.t2_us = require<double>(q, "t2", ctx);
        p.frequency_ghz = require<double>(q, "frequency", ctx);
        p.anharmonicity_ghz = require<double>(q, "anharmonicity", ctx);
        p.sx_duration = require<long long>(q, "sx_duration", ctx);
        p.x_duration = require<long long>(q, "x_duration", ctx);
        dev.qubits.push_back(p);
    }
    for (const auto& c : j.value("couplings", json::array())) {
        CouplingProps p;
        const std::string ctx = "couplings entry";
        p.control = require<int>(c, "control", ctx);
        p.target = require<int>(c, "target", ctx);
        p.j_mhz = require<double>(c, "j_coupling", ctx);
        if (c.contains("zz_strength")) p.zz_khz = c.at("zz_strength").get<double>();
        p.cx_duration = require<long long>(c, "cx_duration", ctx);
        const std::string type = require<std::string>(c, "cx_type", ctx);
        if (type == "ECR")
            p.cx_type = CxType::ECR;
        else if (type == "DCX")
            p.cx_type = CxType::DCX;
        else
            throw std::invalid_argument(ctx + ": cx_type must be ECR or DCX");
        if (c.contains("amplitude")) p.amplitude_meta = c.at("amplitude").dump();
        dev.couplings.push_back(p);
    }
    dev.validate();
    return dev;
}

DeviceModel load_device_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open device file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_device(ss.str());
}

// Ten qubits of ibm_cairo with their seven native couplings. sx/x durations
// are the backend's 160 dt (35.6 ns) defaults.
static const char* kBundledDevice = R"JSON({
  "dt_ns": "2/9",
  "qubits": [
    {"index": 0,  "t1": 73.69,  "t2": 144.16, "frequency": 5.26, "anharmonicity": 0.32, "sx_duration": 160, "x_duration": 160},
    {"index": 1,  "t1": 149.91, "t2": 137.63, "frequency": 5.40, "anharmonicity": 0.34, "sx_duration": 160, "x_duration": 160},
    {"index": 4,  "t1": 71.49,  "t2": 29.85,  "frequency": 5.19, "anharmonicity": 0.34, "sx_duration": 160, "x_duration": 160},
    {"index": 7,  "t1": 104.08, "t2": 68.32,  "frequency": 5.05, "anharmonicity": 0.34, "sx_duration": 160, "x_duration": 160},
    {"index": 10, "t1": 102.86, "t2": 26.56,  "frequency": 5.23, "anharmonicity": 0.34, "sx_duration": 160, "x_duration": 160},
    {"index": 11, "t1": 78.89,  "t2": 9.8,    "frequency": 5.13, "anharmonicity": 0.34, "sx_duration": 160, "x_duration": 160},
    {"index": 12, "t1": 126.13, "t2": 214.87, "frequency": 5.11, "anharmonicity": 0.34, "sx_duration": 160, "x_duration": 160},
    {"index": 13, "t1": 115.74, "t2": 148.44, "frequency": 5.28, "anharmonicity": 0.34, "sx_duration": 160, "x_duration": 160},
    {"index": 14, "t1": 105.07, "t2": 209.43, "frequency": 5.04, "anharmonicity": 0.34, "sx_duration": 160, "x_duration": 160},
    {"index": 15, "t1": 124.46, "t2": 164.34, "frequency": 4.96, "anharmonicity": 0.34, "sx_duration": 160, "x_duration": 160}
  ],
  "couplings": [
    {"control": 1,  "target": 0,  "j_coupling": 1.54, "zz_strength": 40.97,  "cx_duration": 2400, "cx_type": "ECR", "amplitude": 0.91},
    {"control": 4,  "target": 7,  "j_coupling": 2.05, "zz_strength": 59.04,  "cx_duration": 1184, "cx_type": "ECR", "amplitude": 0.58},
    {"control": 10, "target": 12, "j_coupling": 2.06, "zz_strength": 56.83,  "cx_duration": 1008, "cx_type": "DCX", "amplitude": 0.42},
    {"control": 11, "target": 14, "j_coupling": 1.93, "zz_strength": 46.79,  "cx_duration": 848,  "cx_type": "DCX", "amplitude": 0.49},
    {"control": 12, "target": 13, "j_coupling": 2.06, "zz_strength": 66.12,  "cx_duration": 1760, "cx_type": "ECR", "amplitude": 0.92},
    {"control": 13, "target": 14, "j_coupling": 2.11, "zz_strength": 103.04, "cx_duration": 992,  "cx_type": "DCX", "amplitude": 0.33},
    {"control": 15, "target": 12, "j_coupling": 1.87, "zz_strength": 51.19,  "cx_duration": 2208, "cx_type": "ECR", "amplitude": 0.52}
  ]
})JSON";

const DeviceModel& bundled_device() {
    static const DeviceModel dev = load_device(kBundledDevice);
    return dev;
}

}  // namespace stagdd
