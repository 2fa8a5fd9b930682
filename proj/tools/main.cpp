#include <complex>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stringstab/experiment.hpp"
#include "stringstab/freqdomain.hpp"
#include "stringstab/protocol.hpp"
#include "stringstab/timedomain.hpp"
#include "stringstab/topology.hpp"

namespace {

using nlohmann::json;
using namespace stringstab;

struct GlobalArgs {
    std::string config_path;
    std::string out_dir;
    int order = 0;      // 0 = first configured order
    int richness = 0;   // 0 = first configured richness
    int followers = 0;  // 0 = configured n
};

ExperimentConfig load_config(const GlobalArgs& args) {
    ExperimentConfig cfg =
        args.config_path.empty() ? ExperimentConfig{} : ExperimentConfig::from_file(args.config_path);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.followers > 0) cfg.n = args.followers;
    cfg.validate();
    return cfg;
}

int pick_order(const ExperimentConfig& cfg, const GlobalArgs& args) {
    return args.order > 0 ? args.order : cfg.orders.front();
}

int pick_richness(const ExperimentConfig& cfg, const GlobalArgs& args) {
    return args.richness > 0 ? args.richness : cfg.richness.front();
}

json mode_json(const ModeAnalysis& mode) {
    json roots = json::array();
    for (const auto& root : mode.roots) {
        roots.push_back({root.real(), root.imag()});
    }
    return {{"mu", mode.mu},
            {"roots", std::move(roots)},
            {"routh", to_string(mode.routh)},
            {"margin", mode.margin}};
}

json report_json(const StringStabilityReport& report) {
    return {{"dc_gain", report.dc_gain},
            {"hinf", report.hinf},
            {"omega_peak", report.omega_peak},
            {"verdict", to_string(report.verdict)},
            {"tolerance", report.tolerance}};
}

int run_topology(const ExperimentConfig& cfg, const GlobalArgs& args) {
    const Topology topo =
        Topology::r_predecessor(cfg.n, pick_richness(cfg, args), cfg.boundary);
    write_laplacian_csv(std::cout, topo);
    std::cout << json(topo.degrees()).dump() << '\n';
    return 0;
}

int run_check(const ExperimentConfig& cfg, const GlobalArgs& args) {
    const int r = pick_richness(cfg, args);
    const Topology topo = Topology::r_predecessor(cfg.n, r, cfg.boundary);
    const ProtocolConfig protocol = cfg.protocol_for(pick_order(cfg, args));
    const StabilityAssessment assessment = internal_stability_check(topo, protocol);
    json doc;
    doc["overall"] = assessment.overall;
    json modes = json::array();
    for (const auto& mode : assessment.modes) modes.push_back(mode_json(mode));
    doc["modes"] = std::move(modes);
    std::cout << doc.dump(2) << '\n';
    return 0;
}

int run_freq(const ExperimentConfig& cfg, const GlobalArgs& args, const std::string& transfer,
             int follower, bool with_report) {
    const int r = pick_richness(cfg, args);
    const int m = pick_order(cfg, args);
    const ProtocolConfig protocol = cfg.protocol_for(m);
    const FrequencyGrid grid =
        FrequencyGrid::log_spaced(cfg.sweep.omega_min, cfg.sweep.omega_max, cfg.sweep.points, true);

    FrequencyResponse response = [&] {
        if (transfer == "phi") return sweep(protocol, r, grid, TransferSelect::Propagation);
        if (transfer == "g") return sweep(protocol, r, grid, TransferSelect::Disturbance);
        const Topology topo = Topology::r_predecessor(cfg.n, r, cfg.boundary);
        return follower_chain_response(protocol, topo, follower, grid);
    }();
    write_frequency_csv(std::cout, response);

    if (with_report) {
        std::cout << report_json(hinf_estimate(protocol, r, cfg.sweep)).dump(2) << '\n';
    }
    return 0;
}

int run_sim(const ExperimentConfig& cfg, const GlobalArgs& args) {
    const int r = pick_richness(cfg, args);
    const Topology topo = Topology::r_predecessor(cfg.n, r, cfg.boundary);
    const ProtocolConfig protocol = cfg.protocol_for(pick_order(cfg, args));
    const SimulationTrace trace =
        simulate(topo, protocol, cfg.sim.disturbance, cfg.sim.dt, cfg.sim.horizon);
    write_simulation_csv(std::cout, trace, cfg.sim.output_stride);
    const PropagationMetrics metrics = propagation_metrics(trace);
    json doc;
    doc["peaks"] = metrics.peaks;
    json ratios = json::array();
    for (const auto& ratio : metrics.ratios) {
        if (ratio) ratios.push_back(*ratio); else ratios.push_back(nullptr);
    }
    doc["ratios"] = std::move(ratios);
    json settling = json::array();
    for (const auto& s : metrics.settling) {
        if (s) settling.push_back(*s); else settling.push_back(nullptr);
    }
    doc["settling"] = std::move(settling);
    std::cout << doc.dump(2) << '\n';
    return 0;
}

int run_grid_command(const ExperimentConfig& cfg) {
    const std::vector<GridCellResult> results = run_grid(cfg);
    bool any_error = false;
    for (const auto& cell : results) {
        std::cout << "m=" << cell.order << " r=" << cell.richness << ": ";
        if (!cell.ok) {
            any_error = true;
            std::cout << "ERROR " << cell.error << '\n';
            continue;
        }
        std::cout << "dc_gain=" << cell.dc;
        if (cell.report) {
            std::cout << " hinf=" << cell.report->hinf << " verdict="
                      << to_string(cell.report->verdict);
        } else {
            std::cout << " internally unstable";
        }
        std::cout << '\n';
    }
    std::cout << "wrote " << cfg.out_dir << "/summary.json\n";
    return any_error ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"String-stability analysis of r-predecessor consensus formations"};
    app.require_subcommand(1);

    GlobalArgs args;
    bool seedless = false;
    app.add_option("--config", args.config_path, "JSON experiment configuration file");
    app.add_option("--out", args.out_dir, "Output directory (overrides config out_dir)");
    app.add_flag("--seedless", seedless,
                 "Reserved: every command is already deterministic, there is no randomness to "
                 "disable");

    auto* topology_cmd = app.add_subcommand(
        "topology", "Print the follower Laplacian as CSV and the degree vector as JSON");
    topology_cmd->add_option("-n,--followers", args.followers, "Number of followers");
    topology_cmd->add_option("-r,--richness", args.richness, "Predecessor count");

    auto* check_cmd =
        app.add_subcommand("check", "Internal-stability report (per-mode roots and Routh verdicts)");
    check_cmd->add_option("-n,--followers", args.followers, "Number of followers");
    check_cmd->add_option("-m,--order", args.order, "Consensus order");
    check_cmd->add_option("-r,--richness", args.richness, "Predecessor count");

    auto* freq_cmd = app.add_subcommand("freq", "Frequency response CSV (omega,re,im,mag)");
    std::string transfer = "phi";
    int follower = 1;
    bool with_report = false;
    freq_cmd->add_option("-m,--order", args.order, "Consensus order");
    freq_cmd->add_option("-r,--richness", args.richness, "Predecessor count");
    freq_cmd->add_option("-n,--followers", args.followers, "Number of followers");
    freq_cmd->add_option("--transfer", transfer, "Transfer to evaluate: phi, g, or follower")
        ->check(CLI::IsMember({"phi", "g", "follower"}));
    freq_cmd->add_option("--follower", follower, "Follower index for --transfer follower");
    freq_cmd->add_flag("--report", with_report, "Append a JSON string-stability report");

    auto* sim_cmd =
        app.add_subcommand("sim", "Simulate the error dynamics; CSV t,follower,eps,spacing");
    sim_cmd->add_option("-n,--followers", args.followers, "Number of followers");
    sim_cmd->add_option("-m,--order", args.order, "Consensus order");
    sim_cmd->add_option("-r,--richness", args.richness, "Predecessor count");

    auto* grid_cmd = app.add_subcommand(
        "grid", "Run the full (order, richness) grid and emit per-cell artifacts");

    CLI11_PARSE(app, argc, argv);

    if (seedless) {
        std::cerr << "--seedless is reserved: runs are deterministic by construction and accept "
                     "no seed\n";
        return 1;
    }

    try {
        const ExperimentConfig cfg = load_config(args);
        if (topology_cmd->parsed()) return run_topology(cfg, args);
        if (check_cmd->parsed()) return run_check(cfg, args);
        if (freq_cmd->parsed()) return run_freq(cfg, args, transfer, follower, with_report);
        if (sim_cmd->parsed()) return run_sim(cfg, args);
        if (grid_cmd->parsed()) return run_grid_command(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
