#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stagdd/experiments.hpp"
#include "stagdd/verify.hpp"

namespace fs = std::filesystem;
using namespace stagdd;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunOptions {
    std::string device_path;
    std::string sequence = "x2pm";
    std::string mode = "standard";
    std::string pairs;
    std::string delays;  // start:stop:step in dt
    std::uint64_t seed = 0;
    long long shots = 0;
    double epsilon = 0.0;
    std::string relaxation = "off";
    std::string zz_mode = "continuous";
    double detuning_khz = 0.0;
    std::string output_dir;
    bool force = false;
};

DeviceModel load_selected_device(const std::string& flag_path) {
    if (!flag_path.empty()) return load_device_file(flag_path);
    if (const char* env = std::getenv("STAGDD_DEVICE")) return load_device_file(env);
    return bundled_device();
}

std::pair<int, int> parse_pair(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("expected pair 'a,b', got '" + s + "'");
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& s) {
    std::vector<std::pair<int, int>> out;
    std::istringstream is(s);
    std::string part;
    while (std::getline(is, part, '/')) out.push_back(parse_pair(part));
    return out;
}

std::vector<long long> parse_delays(const std::string& s) {
    if (s.empty()) return default_delays();
    std::vector<long long> out;
    const auto c1 = s.find(':'), c2 = s.rfind(':');
    if (c1 == std::string::npos || c2 == c1) throw std::invalid_argument("expected --delays start:stop:step");
    const long long start = std::stoll(s.substr(0, c1));
    const long long stop = std::stoll(s.substr(c1 + 1, c2 - c1 - 1));
    const long long step = std::stoll(s.substr(c2 + 1));
    if (step <= 0 || stop < start) throw std::invalid_argument("bad --delays range");
    for (long long d = start; d <= stop; d += step) out.push_back(d);
    return out;
}

NoiseConfig noise_from_device(const DeviceModel& device, const std::vector<int>& qubits, const RunOptions& opt) {
    NoiseConfig noise;
    noise.relaxation = (opt.relaxation == "on");
    noise.overrotation_epsilon = opt.epsilon;
    noise.rotary_echo = true;
    for (const auto& c : device.couplings) {
        const bool in_a = std::count(qubits.begin(), qubits.end(), c.control);
        const bool in_b = std::count(qubits.begin(), qubits.end(), c.target);
        if (in_a && in_b) noise.add_zz(c.control, c.target, device.zz_khz(c.control, c.target));
    }
    return noise;
}

void prepare_output(const RunOptions& opt) {
    if (opt.output_dir.empty()) throw std::invalid_argument("--output is required");
    fs::create_directories(opt.output_dir);
    for (const char* f : {"results.csv", "fits.csv", "manifest.json"}) {
        const fs::path p = fs::path(opt.output_dir) / f;
        if (fs::exists(p) && !opt.force)
            throw std::invalid_argument("refusing to overwrite " + p.string() + " (use --force)");
    }
}

void write_manifest(const RunOptions& opt, const std::string& experiment) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["experiment"] = experiment;
    j["device"] = opt.device_path.empty() ? "<bundled>" : opt.device_path;
    j["sequence"] = opt.sequence;
    j["mode"] = opt.mode;
    j["pairs"] = opt.pairs;
    j["delays"] = opt.delays.empty() ? "<default>" : opt.delays;
    j["seed"] = opt.seed;
    j["shots"] = opt.shots;
    j["epsilon"] = opt.epsilon;
    j["relaxation"] = opt.relaxation;
    j["zz_mode"] = opt.zz_mode;
    j["detuning_khz"] = opt.detuning_khz;
    std::ofstream out(fs::path(opt.output_dir) / "manifest.json");
    out << j.dump(2) << "\n";
}

void write_outputs(const RunOptions& opt, const std::string& experiment, const std::vector<ExperimentResult>& results,
                   const std::vector<std::pair<std::string, FitResult>>& fits) {
    std::ofstream res_out(fs::path(opt.output_dir) / "results.csv");
    write_results_csv(res_out, results);
    std::ofstream fit_out(fs::path(opt.output_dir) / "fits.csv");
    write_fit_csv(fit_out, fits);
    write_manifest(opt, experiment);
}

int cmd_idle_idle(const RunOptions& opt, const DeviceModel& device) {
    const auto pairs = parse_pairs(opt.pairs);
    if (pairs.size() != 2) throw std::invalid_argument("idle-idle needs --pairs a,b/c,d");
    RBConfig rb_a, rb_b;
    rb_a.qubit_pair = pairs[0];
    rb_b.qubit_pair = pairs[1];
    rb_a.seed = opt.seed;
    rb_b.seed = opt.seed + 1;
    rb_a.delays_2tau = rb_b.delays_2tau = parse_delays(opt.delays);

    const std::vector<int> qubits = {pairs[0].first, pairs[0].second, pairs[1].first, pairs[1].second};
    const NoiseConfig noise = noise_from_device(device, qubits, opt);
    std::vector<std::pair<int, int>> coupled;
    for (const auto& [pq, nu] : noise.zz_khz) coupled.push_back(pq);
    const DDPlan plan = make_plan(parse_sequence(opt.sequence), parse_mode(opt.mode), coupled);

    auto [res_a, res_b] = run_idle_idle(rb_a, rb_b, plan, device, noise,
                                        opt.shots > 0 ? std::optional<long long>(opt.shots) : std::nullopt);
    std::vector<std::pair<std::string, FitResult>> fits;
    bool fit_failed = false;
    for (const auto& r : {res_a, res_b}) {
        try {
            fits.push_back({"idle-idle:" + r.pair_label, fit_experiment(r, FitModel::ExpDecay)});
        } catch (const FitError& e) {
            std::cerr << "fit failed for pair " << r.pair_label << ": " << e.what() << "\n";
            fit_failed = true;
        }
        std::cout << "pair " << r.pair_label << " F_avg = " << time_avg_fidelity(r) << "\n";
    }
    write_outputs(opt, "idle-idle", {res_a, res_b}, fits);
    return fit_failed ? 2 : 0;
}

int cmd_driven_idle(const RunOptions& opt, const DeviceModel& device) {
    const auto pairs = parse_pairs(opt.pairs);
    if (pairs.size() != 2) throw std::invalid_argument("driven-idle needs --pairs rbA,rbB/drivenA,drivenB");
    RBConfig rb;
    rb.qubit_pair = pairs[0];
    rb.seed = opt.seed;
    rb.delays_2tau = parse_delays(opt.delays);

    const std::vector<int> qubits = {pairs[0].first, pairs[0].second, pairs[1].first, pairs[1].second};
    const NoiseConfig noise = noise_from_device(device, qubits, opt);
    const DDPlan plan = make_plan(parse_sequence(opt.sequence), parse_mode(opt.mode), {pairs[0]});

    const ExperimentResult res = run_driven_idle(rb, pairs[1], plan, device, noise,
                                                 opt.shots > 0 ? std::optional<long long>(opt.shots) : std::nullopt);
    std::vector<std::pair<std::string, FitResult>> fits;
    bool fit_failed = false;
    try {
        fits.push_back({"driven-idle:" + res.pair_label, fit_experiment(res, FitModel::ExpDecay)});
    } catch (const FitError& e) {
        std::cerr << "fit failed: " << e.what() << "\n";
        fit_failed = true;
    }
    std::cout << "pair " << res.pair_label << " F_avg = " << time_avg_fidelity(res) << "\n";
    write_outputs(opt, "driven-idle", {res}, fits);
    return fit_failed ? 2 : 0;
}

int cmd_ramsey(const RunOptions& opt, const DeviceModel& device) {
    if (opt.detuning_khz <= 0) throw std::invalid_argument("ramsey requires --detuning (kHz, > 0)");
    const auto pair = parse_pair(opt.pairs);
    RamseyConfig cfg;
    cfg.qubit = pair.first;
    cfg.spectator = pair.second;
    cfg.detuning_khz = opt.detuning_khz;
    cfg.zz_mode = (opt.zz_mode == "pre-delay") ? ZZMode::PreDelayGate : ZZMode::Continuous;
    if (opt.delays.empty()) {
        for (long long d = 2250; d <= 180000; d += 2250) cfg.delays.push_back(d);
    } else {
        cfg.delays = parse_delays(opt.delays);
    }

    const NoiseConfig noise = noise_from_device(device, {pair.first, pair.second}, opt);
    const DDPlan plan = make_plan(parse_sequence(opt.sequence), parse_mode(opt.mode), {pair});

    const ExperimentResult res = run_ramsey(cfg, plan, device, noise,
                                            opt.shots > 0 ? std::optional<long long>(opt.shots) : std::nullopt);
    const FitResult fit = fit_experiment(res, FitModel::DampedCosine);
    std::cout << "fitted frequency: " << fit.rate_or_freq << " kHz (detuning " << cfg.detuning_khz << " kHz)\n";
    write_outputs(opt, "ramsey", {res}, {{"ramsey:" + res.pair_label, fit}});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"staggered dynamical-decoupling scheduling and simulation toolkit"};
    app.set_config("--config");
    app.require_subcommand(1);

    // zz-calc
    double j_ghz = 0, d0 = 0, d1 = 0, detuning = 0;
    auto* zzcalc = app.add_subcommand("zz-calc", "perturbative static ZZ strength (kHz)");
    zzcalc->add_option("--j", j_ghz, "coupling J (GHz)")->required();
    zzcalc->add_option("--d0", d0, "anharmonicity of control (GHz)")->required();
    zzcalc->add_option("--d1", d1, "anharmonicity of target (GHz)")->required();
    zzcalc->add_option("--detuning", detuning, "frequency detuning control-target (GHz)")->required();

    // run
    RunOptions opt;
    auto* run = app.add_subcommand("run", "run an experiment and write CSV results");
    run->add_option("--device", opt.device_path, "device file (default: $STAGDD_DEVICE or bundled)");
    run->add_option("--sequence", opt.sequence, "x2|x2pm|xy4|xy4pm|xy8|xy8pm");
    run->add_option("--mode", opt.mode, "standard|staggered|staggered-inv|none");
    run->add_option("--pairs", opt.pairs, "qubit pairs, e.g. 11,14/12,13");
    run->add_option("--delays", opt.delays, "delay sweep start:stop:step in dt");
    run->add_option("--shots", opt.shots, "sample readout instead of exact probabilities");
    run->add_option("--epsilon", opt.epsilon, "pi-pulse over-rotation (radians)");
    run->add_option("--relaxation", opt.relaxation, "on|off (default off)");
    run->add_option("--zz-mode", opt.zz_mode, "continuous|pre-delay");
    run->add_option("--detuning", opt.detuning_khz, "ramsey detuning (kHz)");
    run->add_option("--output,-o", opt.output_dir, "output directory")->required();
    run->add_flag("--force", opt.force, "overwrite existing outputs");
    run->require_subcommand(1);
    auto* idle_idle = run->add_subcommand("idle-idle", "simultaneous RB on two coupled pairs");
    auto* driven_idle = run->add_subcommand("driven-idle", "RB on one pair, SU(4) drive on the neighbor");
    auto* ramsey = run->add_subcommand("ramsey", "detuned Ramsey with DD on qubit and spectator");
    CLI::Option* seed_opt = run->add_option("--seed", opt.seed, "RNG seed (required for RB experiments)");

    auto* verify = app.add_subcommand("verify", "run the unitary-algebra and DD identity suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*zzcalc) {
            std::cout << compute_zz_khz(j_ghz, d0, d1, detuning) << " kHz\n";
            return 0;
        }
        if (*verify) return run_verification(std::cout) ? 0 : 2;
        if (*run) {
            if ((*idle_idle || *driven_idle) && seed_opt->count() == 0)
                throw std::invalid_argument("--seed is required for RB experiments");
            const DeviceModel device = load_selected_device(opt.device_path);
            prepare_output(opt);
            if (*idle_idle) return cmd_idle_idle(opt, device);
            if (*driven_idle) return cmd_driven_idle(opt, device);
            if (*ramsey) return cmd_ramsey(opt, device);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
