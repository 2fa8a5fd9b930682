#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stringstab/freqdomain.hpp"
#include "stringstab/timedomain.hpp"
#include "stringstab/topology.hpp"

namespace stringstab {

struct SimulationSettings {
    double dt = 1e-3;
    double horizon = 100.0;
    int output_stride = 100;  ///< row decimation applied when emitting CSV/SVG
    DisturbanceProfile disturbance = DisturbanceProfile::impulse();
};

/// Full description of one experiment run over the (order, richness) grid.
/// Defaults reproduce the reference study: 20 followers, orders 1..3,
/// richness 1..3, gains 0.2/1.5/1.0, unit coupling, leader-padded boundary.
struct ExperimentConfig {
    int n = 20;
    std::vector<int> orders = {1, 2, 3};
    std::vector<int> richness = {1, 2, 3};
    std::map<int, double> gains = {{0, 0.2}, {1, 1.5}, {2, 1.0}};
    double coupling = 1.0;
    BoundaryConvention boundary = BoundaryConvention::LeaderPadded;
    SweepParams sweep{};
    SimulationSettings sim{};
    std::string out_dir = "out";

    /// Parses the JSON document, filling defaults for absent keys. Unknown
    /// keys are a hard error; every message carries the offending key path.
    static ExperimentConfig from_json(const nlohmann::json& doc);
    static ExperimentConfig from_file(const std::string& path);

    [[nodiscard]] nlohmann::json to_json() const;

    /// Checks invariants: nonempty lists, n >= 1, positive coupling, and a
    /// positive gain gamma_k for every k below every requested order.
    void validate() const;

    /// Protocol of the given order assembled from the gain map.
    [[nodiscard]] ProtocolConfig protocol_for(int order) const;
};

struct GridCellResult {
    int order = 0;
    int richness = 0;
    bool ok = false;
    std::string error;
    bool internal_stable = false;
    double dc = 0.0;
    std::optional<StringStabilityReport> report;  ///< absent when internally unstable
    std::optional<PropagationMetrics> metrics;    ///< absent when internally unstable
    std::vector<std::string> files;
};

/// Runs every (order, richness) cell: stability check, frequency report,
/// time simulation, artifact emission into <out_dir>/m{order}_r{richness}/.
/// Amplifying cells are findings, not failures; cells that throw are
/// recorded with ok = false and the run continues. A summary.json is written
/// after all cells complete. Deterministic.
std::vector<GridCellResult> run_grid(const ExperimentConfig& config);

/// report.json payload for one cell: {m, r, dc_gain, hinf, omega_peak,
/// verdict, internal_stable, peaks, ratios} with nulls where undefined.
nlohmann::json cell_report_json(const GridCellResult& cell);

/// CSV with header omega,re,im,mag.
void write_frequency_csv(std::ostream& out, const FrequencyResponse& response);

/// Long-format CSV t,follower,eps,spacing; rows decimated by `stride`
/// (first and last recorded rows always kept).
void write_simulation_csv(std::ostream& out, const SimulationTrace& trace, int stride = 1);

/// Laplacian as bare CSV rows (no header).
void write_laplacian_csv(std::ostream& out, const Topology& t);

}  // namespace stringstab
