#include "stringstab/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>

#include "stringstab/svg.hpp"

namespace stringstab {

namespace {

using nlohmann::json;

std::string fmt12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw std::invalid_argument("config: " + path + ": " + message);
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
}

double require_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

int require_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
}

std::vector<int> require_int_list(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array of integers");
    std::vector<int> out;
    out.reserve(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        out.push_back(require_int(v[k], path + "[" + std::to_string(k) + "]"));
    }
    return out;
}

DisturbanceProfile parse_disturbance(const json& obj, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    reject_unknown(obj, path, {"kind", "height", "t_on", "t_off", "ramp"});
    const std::string kind = obj.contains("kind") ? obj["kind"].get<std::string>() : "impulse";
    const double height =
        obj.contains("height") ? require_number(obj["height"], path + ".height") : 1.0;
    if (kind == "impulse") {
        return DisturbanceProfile::impulse(height);
    }
    if (kind == "step") {
        return DisturbanceProfile::step(height);
    }
    if (kind == "smooth_pulse") {
        for (const char* key : {"t_on", "t_off", "ramp"}) {
            if (!obj.contains(key)) fail(path + "." + key, "required for smooth_pulse");
        }
        return DisturbanceProfile::smooth_pulse(height, require_number(obj["t_on"], path + ".t_on"),
                                                require_number(obj["t_off"], path + ".t_off"),
                                                require_number(obj["ramp"], path + ".ramp"));
    }
    fail(path + ".kind", "expected one of impulse, step, smooth_pulse");
}

json disturbance_json(const DisturbanceProfile& d) {
    json out;
    switch (d.kind()) {
        case DisturbanceProfile::Kind::Impulse: out["kind"] = "impulse"; break;
        case DisturbanceProfile::Kind::Step: out["kind"] = "step"; break;
        case DisturbanceProfile::Kind::SmoothPulse: out["kind"] = "smooth_pulse"; break;
    }
    out["height"] = d.height();
    if (d.kind() == DisturbanceProfile::Kind::SmoothPulse) {
        out["t_on"] = d.t_on();
        out["t_off"] = d.t_off();
        out["ramp"] = d.ramp();
    }
    return out;
}

json metrics_json(const PropagationMetrics& metrics) {
    json out;
    out["peaks"] = metrics.peaks;
    json ratios = json::array();
    for (const auto& r : metrics.ratios) {
        if (r) {
            ratios.push_back(*r);
        } else {
            ratios.push_back(nullptr);
        }
    }
    out["ratios"] = std::move(ratios);
    json settling = json::array();
    for (const auto& s : metrics.settling) {
        if (s) {
            settling.push_back(*s);
        } else {
            settling.push_back(nullptr);
        }
    }
    out["settling"] = std::move(settling);
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
    reject_unknown(doc, "", {"n", "orders", "richness", "gains", "coupling", "boundary", "sweep",
                             "sim", "out_dir"});

    ExperimentConfig cfg;
    if (doc.contains("n")) cfg.n = require_int(doc["n"], "n");
    if (doc.contains("orders")) cfg.orders = require_int_list(doc["orders"], "orders");
    if (doc.contains("richness")) cfg.richness = require_int_list(doc["richness"], "richness");
    if (doc.contains("gains")) {
        const json& gains = doc["gains"];
        if (!gains.is_object()) fail("gains", "expected an object mapping k to gamma_k");
        cfg.gains.clear();
        for (auto it = gains.begin(); it != gains.end(); ++it) {
            int k = 0;
            try {
                std::size_t consumed = 0;
                k = std::stoi(it.key(), &consumed);
                if (consumed != it.key().size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                fail("gains." + it.key(), "key must be a derivative order (integer)");
            }
            if (k < 0) fail("gains." + it.key(), "derivative order must be nonnegative");
            cfg.gains[k] = require_number(*it, "gains." + it.key());
        }
    }
    if (doc.contains("coupling")) cfg.coupling = require_number(doc["coupling"], "coupling");
    if (doc.contains("boundary")) {
        const std::string b = doc["boundary"].get<std::string>();
        if (b == "leader_padded") {
            cfg.boundary = BoundaryConvention::LeaderPadded;
        } else if (b == "truncated") {
            cfg.boundary = BoundaryConvention::Truncated;
        } else {
            fail("boundary", "expected leader_padded or truncated");
        }
    }
    if (doc.contains("sweep")) {
        const json& sweep = doc["sweep"];
        if (!sweep.is_object()) fail("sweep", "expected an object");
        reject_unknown(sweep, "sweep", {"omega_min", "omega_max", "points", "tolerance"});
        if (sweep.contains("omega_min"))
            cfg.sweep.omega_min = require_number(sweep["omega_min"], "sweep.omega_min");
        if (sweep.contains("omega_max"))
            cfg.sweep.omega_max = require_number(sweep["omega_max"], "sweep.omega_max");
        if (sweep.contains("points")) cfg.sweep.points = require_int(sweep["points"], "sweep.points");
        if (sweep.contains("tolerance"))
            cfg.sweep.tolerance = require_number(sweep["tolerance"], "sweep.tolerance");
    }
    if (doc.contains("sim")) {
        const json& sim = doc["sim"];
        if (!sim.is_object()) fail("sim", "expected an object");
        reject_unknown(sim, "sim", {"dt", "horizon", "output_stride", "disturbance"});
        if (sim.contains("dt")) cfg.sim.dt = require_number(sim["dt"], "sim.dt");
        if (sim.contains("horizon")) cfg.sim.horizon = require_number(sim["horizon"], "sim.horizon");
        if (sim.contains("output_stride"))
            cfg.sim.output_stride = require_int(sim["output_stride"], "sim.output_stride");
        if (sim.contains("disturbance"))
            cfg.sim.disturbance = parse_disturbance(sim["disturbance"], "sim.disturbance");
    }
    if (doc.contains("out_dir")) cfg.out_dir = doc["out_dir"].get<std::string>();

    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: " + path + ": " + e.what());
    }
    return from_json(doc);
}

json ExperimentConfig::to_json() const {
    json doc;
    doc["n"] = n;
    doc["orders"] = orders;
    doc["richness"] = richness;
    json gains_obj = json::object();
    for (const auto& [k, gamma] : gains) {
        gains_obj[std::to_string(k)] = gamma;
    }
    doc["gains"] = std::move(gains_obj);
    doc["coupling"] = coupling;
    doc["boundary"] = boundary == BoundaryConvention::LeaderPadded ? "leader_padded" : "truncated";
    doc["sweep"] = {{"omega_min", sweep.omega_min},
                    {"omega_max", sweep.omega_max},
                    {"points", sweep.points},
                    {"tolerance", sweep.tolerance}};
    doc["sim"] = {{"dt", sim.dt},
                  {"horizon", sim.horizon},
                  {"output_stride", sim.output_stride},
                  {"disturbance", disturbance_json(sim.disturbance)}};
    doc["out_dir"] = out_dir;
    return doc;
}

void ExperimentConfig::validate() const {
    if (n < 1) fail("n", "must be >= 1");
    if (orders.empty()) fail("orders", "must be nonempty");
    if (richness.empty()) fail("richness", "must be nonempty");
    for (int m : orders) {
        if (m < 1 || m > 8) fail("orders", "order " + std::to_string(m) + " outside 1..8");
    }
    for (int r : richness) {
        if (r < 1) fail("richness", "richness " + std::to_string(r) + " must be >= 1");
    }
    for (const auto& [k, gamma] : gains) {
        if (!(gamma > 0.0) || !std::isfinite(gamma)) {
            fail("gains." + std::to_string(k), "gain must be strictly positive");
        }
    }
    for (int m : orders) {
        for (int k = 0; k < m; ++k) {
            if (gains.find(k) == gains.end()) {
                fail("gains." + std::to_string(k),
                     "missing gain required by order " + std::to_string(m));
            }
        }
    }
    if (!(coupling > 0.0) || !std::isfinite(coupling)) fail("coupling", "must be strictly positive");
    if (!(sweep.omega_min > 0.0) || !(sweep.omega_max > sweep.omega_min)) {
        fail("sweep", "need 0 < omega_min < omega_max");
    }
    if (sweep.points < 2) fail("sweep.points", "need at least 2");
    if (!(sweep.tolerance > 0.0)) fail("sweep.tolerance", "must be positive");
    if (!(sim.dt > 0.0)) fail("sim.dt", "must be positive");
    if (!(sim.horizon >= 10.0 * sim.dt)) fail("sim.horizon", "must be at least 10*dt");
    if (sim.output_stride < 1) fail("sim.output_stride", "must be >= 1");
}

ProtocolConfig ExperimentConfig::protocol_for(int order) const {
    std::vector<double> protocol_gains;
    protocol_gains.reserve(static_cast<std::size_t>(order));
    for (int k = 0; k < order; ++k) {
        auto it = gains.find(k);
        if (it == gains.end()) {
            fail("gains." + std::to_string(k), "missing gain required by order " + std::to_string(order));
        }
        protocol_gains.push_back(it->second);
    }
    return {order, std::move(protocol_gains), coupling};
}

void write_frequency_csv(std::ostream& out, const FrequencyResponse& response) {
    out << "omega,re,im,mag\n";
    for (std::size_t k = 0; k < response.grid.size(); ++k) {
        out << fmt12(response.grid.omegas()[k]) << ',' << fmt12(response.values[k].real()) << ','
            << fmt12(response.values[k].imag()) << ',' << fmt12(response.magnitudes[k]) << '\n';
    }
}

void write_simulation_csv(std::ostream& out, const SimulationTrace& trace, int stride) {
    if (stride < 1) throw std::invalid_argument("write_simulation_csv: stride must be >= 1");
    out << "t,follower,eps,spacing\n";
    const std::size_t samples = trace.times.size();
    for (std::size_t s = 0; s < samples; s += static_cast<std::size_t>(stride)) {
        const std::size_t row = s;
        for (int i = 1; i <= trace.n; ++i) {
            out << fmt12(trace.times[row]) << ',' << i << ','
                << fmt12(trace.error_series(i, 0)[row]) << ','
                << fmt12(trace.spacing_series(i)[row]) << '\n';
        }
        // keep the final sample even when the stride would skip it
        if (row + stride >= samples && row + 1 < samples) {
            const std::size_t last = samples - 1;
            for (int i = 1; i <= trace.n; ++i) {
                out << fmt12(trace.times[last]) << ',' << i << ','
                    << fmt12(trace.error_series(i, 0)[last]) << ','
                    << fmt12(trace.spacing_series(i)[last]) << '\n';
            }
            break;
        }
    }
}

void write_laplacian_csv(std::ostream& out, const Topology& t) {
    for (int i = 0; i < t.n(); ++i) {
        for (int j = 0; j < t.n(); ++j) {
            if (j > 0) out << ',';
            out << fmt12(t.laplacian(i, j));
        }
        out << '\n';
    }
}

json cell_report_json(const GridCellResult& cell) {
    json report;
    report["m"] = cell.order;
    report["r"] = cell.richness;
    report["dc_gain"] = cell.dc;
    report["internal_stable"] = cell.internal_stable;
    if (cell.report) {
        report["hinf"] = cell.report->hinf;
        report["omega_peak"] = cell.report->omega_peak;
        report["verdict"] = to_string(cell.report->verdict);
    } else {
        report["hinf"] = nullptr;
        report["omega_peak"] = nullptr;
        report["verdict"] = "undefined";
    }
    if (cell.metrics) {
        const json metrics = metrics_json(*cell.metrics);
        report["peaks"] = metrics["peaks"];
        report["ratios"] = metrics["ratios"];
    } else {
        report["peaks"] = nullptr;
        report["ratios"] = nullptr;
    }
    return report;
}

std::vector<GridCellResult> run_grid(const ExperimentConfig& config) {
    config.validate();
    namespace fs = std::filesystem;
    const fs::path out_root(config.out_dir);
    fs::create_directories(out_root);

    std::vector<GridCellResult> results;
    for (int m : config.orders) {
        for (int r : config.richness) {
            GridCellResult cell;
            cell.order = m;
            cell.richness = r;
            const fs::path dir = out_root / ("m" + std::to_string(m) + "_r" + std::to_string(r));
            try {
                fs::create_directories(dir);
                const Topology topo = Topology::r_predecessor(config.n, r, config.boundary);
                const ProtocolConfig protocol = config.protocol_for(m);
                cell.internal_stable = internal_stability_check(topo, protocol).overall;
                cell.dc = dc_gain(protocol, r);

                const FrequencyGrid grid = FrequencyGrid::log_spaced(
                    config.sweep.omega_min, config.sweep.omega_max, config.sweep.points, true);
                const FrequencyResponse phi = sweep(protocol, r, grid, TransferSelect::Propagation);
                {
                    std::ofstream out(dir / "freq.csv", std::ios::binary);
                    if (!out) throw std::runtime_error("cannot open " + (dir / "freq.csv").string());
                    write_frequency_csv(out, phi);
                }
                cell.files.push_back((dir / "freq.csv").string());

                SvgOptions freq_options;
                freq_options.log_x = true;
                freq_options.title =
                    "Propagation magnitude, m=" + std::to_string(m) + ", r=" + std::to_string(r);
                freq_options.x_label = "omega (rad/s)";
                freq_options.y_label = "magnitude";
                write_svg_lines((dir / "freq.svg").string(),
                                {{"m" + std::to_string(m) + " r" + std::to_string(r),
                                  phi.grid.omegas(), phi.magnitudes}},
                                freq_options);
                cell.files.push_back((dir / "freq.svg").string());

                if (cell.internal_stable) {
                    cell.report = hinf_estimate(protocol, r, config.sweep);

                    const SimulationTrace trace = simulate(topo, protocol, config.sim.disturbance,
                                                           config.sim.dt, config.sim.horizon);
                    cell.metrics = propagation_metrics(trace);
                    {
                        std::ofstream out(dir / "sim.csv", std::ios::binary);
                        if (!out) throw std::runtime_error("cannot open " + (dir / "sim.csv").string());
                        write_simulation_csv(out, trace, config.sim.output_stride);
                    }
                    cell.files.push_back((dir / "sim.csv").string());

                    std::vector<SvgSeries> spacing_series(static_cast<std::size_t>(trace.n));
                    std::vector<double> decimated_times;
                    for (std::size_t s = 0; s < trace.times.size();
                         s += static_cast<std::size_t>(config.sim.output_stride)) {
                        decimated_times.push_back(trace.times[s]);
                    }
                    for (int i = 1; i <= trace.n; ++i) {
                        auto& series = spacing_series[static_cast<std::size_t>(i - 1)];
                        series.name = "e" + std::to_string(i);
                        series.x = decimated_times;
                        const auto& full = trace.spacing_series(i);
                        for (std::size_t s = 0; s < full.size();
                             s += static_cast<std::size_t>(config.sim.output_stride)) {
                            series.y.push_back(full[s]);
                        }
                    }
                    SvgOptions spacing_options;
                    spacing_options.title =
                        "Spacing errors, m=" + std::to_string(m) + ", r=" + std::to_string(r);
                    spacing_options.x_label = "t (s)";
                    spacing_options.y_label = "e_i(t)";
                    write_svg_lines((dir / "spacing.svg").string(), spacing_series, spacing_options);
                    cell.files.push_back((dir / "spacing.svg").string());
                }

                write_text_file(dir / "report.json", cell_report_json(cell).dump(2) + "\n");
                cell.files.push_back((dir / "report.json").string());
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.ok = false;
                cell.error = e.what();
            }
            results.push_back(std::move(cell));
        }
    }

    json summary;
    summary["config"] = config.to_json();
    json cells = json::array();
    for (const auto& cell : results) {
        json entry;
        entry["m"] = cell.order;
        entry["r"] = cell.richness;
        entry["ok"] = cell.ok;
        entry["internal_stable"] = cell.internal_stable;
        entry["dc_gain"] = cell.dc;
        if (cell.report) {
            entry["hinf"] = cell.report->hinf;
            entry["verdict"] = to_string(cell.report->verdict);
        } else {
            entry["hinf"] = nullptr;
            entry["verdict"] = cell.ok ? "undefined" : "error";
        }
        if (!cell.ok) entry["error"] = cell.error;
        cells.push_back(std::move(entry));
    }
    summary["cells"] = std::move(cells);
    write_text_file(out_root / "summary.json", summary.dump(2) + "\n");

    return results;
}

}  // namespace stringstab
