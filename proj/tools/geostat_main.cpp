// geostat command-line tool: geodesic runs, phase portraits, potential
// profiles, pull-back verification, orbit bounds and entropy series for the
// classical/quantum statistical manifold catalog.
//
// Exit codes: 0 success, 2 input or domain error, 3 integrator failure,
// 4 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geostat/geostat.hpp"

namespace {

using namespace geostat;

void write_output(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open output file '" + out_path + "'");
    f << content;
}

json load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidArgument("cannot read config file '" + path + "'");
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw InvalidArgument("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw InvalidArgument("config root must be a JSON object");
    return j;
}

// "A=0.5,B=1,C=2" -> ConservedSet
ConservedSet parse_constants(const std::string& text, bool require_c) {
    ConservedSet cs;
    bool has_c = false;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("bad constants item '" + item + "' (expected K=value)");
        const std::string key = item.substr(0, eq);
        char* end = nullptr;
        const double value = std::strtod(item.c_str() + eq + 1, &end);
        if (end == item.c_str() + eq + 1)
            throw InvalidArgument("bad numeric value in constants item '" + item + "'");
        if (key == "A") cs.A = value;
        else if (key == "B") cs.B = value;
        else if (key == "C") { cs.C = value; has_c = true; }
        else throw InvalidArgument("unknown constant '" + key + "' (expected A, B or C)");
    }
    if (require_c && !has_c) throw InvalidArgument("constants must include C");
    return cs;
}

ConservedSet constants_from_json(const json& j) {
    ConservedSet cs;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "A") cs.A = it.value().get<double>();
        else if (it.key() == "B") cs.B = it.value().get<double>();
        else if (it.key() == "C") cs.C = it.value().get<double>();
        else throw InvalidArgument("unknown constant key '" + it.key() + "'");
    }
    return cs;
}

// All coordinate flags exist on every subcommand; flags that do not belong to
// the selected model's chart are rejected after parsing.
struct InitialFlags {
    std::map<std::string, double> values;
    std::map<std::string, CLI::Option*> options;

    void add_to(CLI::App* cmd) {
        static const char* names[] = {"p", "phi", "mu", "sigma", "alpha"};
        for (const char* n : names) {
            const std::string coord = n;
            options[coord] = cmd->add_option("--" + coord + "0", values[coord],
                                             "initial " + coord);
            options[coord + "dot"] = cmd->add_option("--" + coord + "dot0", values[coord + "dot"],
                                                     "initial d" + coord + "/dt");
        }
    }

    void apply(RunConfig& cfg) const {
        const auto& names = coordinate_names(cfg.model);
        for (const auto& [key, opt] : options) {
            if (opt->count() == 0) continue;
            bool matched = false;
            for (std::size_t i = 0; i < names.size(); ++i) {
                if (key == names[i]) {
                    cfg.coords[i] = values.at(key);
                    matched = true;
                } else if (key == names[i] + "dot") {
                    cfg.velocity[i] = values.at(key);
                    matched = true;
                }
            }
            if (!matched)
                throw InvalidArgument("flag --" + key + "0 does not apply to model " +
                                      std::string(model_name(cfg.model)));
        }
    }
};

struct CommonOpts {
    std::string model;
    std::string config_path;
    std::string format;
    std::string out;
    double dt = 0, horizon = 0, margin = 0, drift_tol = 0;
    long long max_steps = 0;
    CLI::Option *opt_model = nullptr, *opt_format = nullptr, *opt_dt = nullptr,
                *opt_horizon = nullptr, *opt_margin = nullptr, *opt_drift = nullptr,
                *opt_max_steps = nullptr;

    void add_to(CLI::App* cmd, const std::string& default_format) {
        format = default_format;
        opt_model = cmd->add_option("--model", model,
                                    "model: bernoulli, qubit, gaussian or gaussian-quantum");
        cmd->add_option("--config", config_path, "JSON config file (flags override it)");
        opt_format = cmd->add_option("--format", format, "output format: csv, json or svg");
        cmd->add_option("--out", out, "output path (default: stdout)");
        opt_dt = cmd->add_option("--dt", dt, "integrator step size");
        opt_max_steps = cmd->add_option("--max-steps", max_steps, "maximum accepted steps");
        opt_horizon = cmd->add_option("--horizon", horizon, "affine-parameter horizon");
        opt_margin = cmd->add_option("--boundary-margin", margin, "boundary stop margin");
        opt_drift = cmd->add_option("--drift-tolerance", drift_tol,
                                    "relative conserved-drift tolerance");
    }

    json config() const {
        return config_path.empty() ? json::object() : load_config_file(config_path);
    }

    ModelId resolve_model(const json& cfg_json) const {
        if (opt_model->count() > 0) return model_from_name(model);
        if (cfg_json.contains("model"))
            return model_from_name(cfg_json.at("model").get<std::string>());
        throw InvalidArgument("no model given (use --model or a config file)");
    }

    void apply_overrides(RunConfig& cfg) const {
        if (opt_dt->count()) cfg.integrator.step_size = dt;
        if (opt_max_steps->count()) cfg.integrator.max_steps = max_steps;
        if (opt_horizon->count()) cfg.integrator.horizon = horizon;
        if (opt_margin->count()) cfg.integrator.boundary_margin = margin;
        if (opt_drift->count()) cfg.integrator.drift_tolerance = drift_tol;
        if (opt_format->count()) cfg.format = format;
        if (!out.empty()) cfg.out = out;
        if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "svg")
            throw InvalidArgument("unknown format '" + cfg.format + "'");
    }
};

// Shared JSON-config keys for the run-style commands.
RunConfig build_run_config(const CommonOpts& common, const InitialFlags& initial,
                           const std::vector<std::string>& extra_keys, json& cfg_json) {
    cfg_json = common.config();
    const ModelId m = common.resolve_model(cfg_json);
    RunConfig cfg = default_run_config(m);
    for (auto it = cfg_json.begin(); it != cfg_json.end(); ++it) {
        const std::string& key = it.key();
        if (key == "model") continue;
        if (key == "initial") { apply_initial_json(cfg, it.value()); continue; }
        if (key == "integrator") { apply_integrator_json(cfg.integrator, it.value()); continue; }
        if (key == "format") { cfg.format = it.value().get<std::string>(); continue; }
        if (key == "out") { cfg.out = it.value().get<std::string>(); continue; }
        if (std::find(extra_keys.begin(), extra_keys.end(), key) != extra_keys.end()) continue;
        throw InvalidArgument("unknown config key '" + key + "'");
    }
    initial.apply(cfg);
    common.apply_overrides(cfg);
    return cfg;
}

int run_geodesic_like(const CommonOpts& common, const InitialFlags& initial, bool entropy_mode) {
    json cfg_json;
    RunConfig cfg = build_run_config(common, initial, {}, cfg_json);
    const Trajectory traj = integrate(cfg.model, initial_state(cfg), cfg.integrator);
    std::string content;
    if (entropy_mode) {
        if (cfg.format == "csv") content = entropy_series_to_csv(traj);
        else if (cfg.format == "json") content = entropy_series_to_json(traj).dump(2) + "\n";
        else content = entropy_series_to_svg(traj);
    } else {
        if (cfg.format == "csv") content = trajectory_to_csv(traj);
        else if (cfg.format == "json") content = trajectory_to_json(traj, cfg.integrator).dump(2) + "\n";
        else content = trajectory_to_svg(traj);
    }
    write_output(content, cfg.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"geodesic laboratory for classical and quantum statistical manifolds"};
    app.require_subcommand(1);

    // --- geodesic ---
    CLI::App* geodesic = app.add_subcommand("geodesic", "integrate a single geodesic");
    CommonOpts geo_common;
    InitialFlags geo_initial;
    geo_common.add_to(geodesic, "csv");
    geo_initial.add_to(geodesic);

    // --- entropy ---
    CLI::App* entropy = app.add_subcommand("entropy", "entropy series along a geodesic");
    CommonOpts ent_common;
    InitialFlags ent_initial;
    ent_common.add_to(entropy, "csv");
    ent_initial.add_to(entropy);

    // --- portrait ---
    CLI::App* portrait = app.add_subcommand("portrait", "phase portrait of a geodesic family");
    CommonOpts por_common;
    InitialFlags por_initial;
    por_common.add_to(portrait, "svg");
    por_initial.add_to(portrait);
    std::vector<std::string> por_constants;
    portrait->add_option("--constants", por_constants,
                         "constants of the motion per curve, e.g. A=0.5,C=1 (repeatable)");
    int por_sign = 1;
    portrait->add_option("--sign", por_sign, "initial radial direction for --constants curves");
    std::string por_vary;
    double por_from = 0, por_to = 0;
    int por_curves = 0;
    CLI::Option* opt_vary =
        portrait->add_option("--vary", por_vary, "coordinate or velocity to vary (e.g. p, pdot)");
    CLI::Option* opt_from = portrait->add_option("--from", por_from, "first varied value");
    CLI::Option* opt_to = portrait->add_option("--to", por_to, "last varied value");
    CLI::Option* opt_curves = portrait->add_option("--curves", por_curves, "number of curves");

    // --- potential ---
    CLI::App* potential = app.add_subcommand("potential", "effective potential profiles");
    CommonOpts pot_common;
    pot_common.add_to(potential, "csv");
    std::vector<std::string> pot_constants;
    potential->add_option("--constants", pot_constants,
                          "constants per profile, e.g. A=1,B=1 (repeatable)");
    double pot_ylo = 0, pot_yhi = 0;
    int pot_points = 400;
    CLI::Option* opt_ylo = potential->add_option("--y-min", pot_ylo, "lower y bound");
    CLI::Option* opt_yhi = potential->add_option("--y-max", pot_yhi, "upper y bound");
    potential->add_option("--points", pot_points, "grid points per profile");
    std::string pot_norm = "raw";
    potential->add_option("--normalization", pot_norm, "potential normalization: raw or figure");
    bool pot_log = false;
    potential->add_flag("--log-axis", pot_log, "logarithmic value axis (svg)");

    // --- verify ---
    CLI::App* verify = app.add_subcommand(
        "verify", "numeric pull-back vs closed-form metrics on built-in grids");
    std::vector<std::string> ver_models;
    verify->add_option("--models", ver_models, "models to verify (default: all)");
    int ver_nodes = 64;
    verify->add_option("--nodes", ver_nodes, "gauss-hermite node count");
    std::string ver_out;
    verify->add_option("--out", ver_out, "also write a JSON report to this path");

    // --- bounds ---
    CLI::App* bounds = app.add_subcommand("bounds", "orbit bounds and equilibria from constants");
    std::string bnd_model, bnd_constants;
    bounds->add_option("--model", bnd_model, "model name")->required();
    bounds->add_option("--constants", bnd_constants, "constants, e.g. A=0.5,C=1")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (geodesic->parsed()) return run_geodesic_like(geo_common, geo_initial, false);
        if (entropy->parsed()) return run_geodesic_like(ent_common, ent_initial, true);

        if (portrait->parsed()) {
            json cfg_json;
            RunConfig cfg = build_run_config(por_common, por_initial,
                                             {"family", "constants", "sign"}, cfg_json);
            if (cfg_json.contains("sign") && por_sign == 1)
                por_sign = cfg_json.at("sign").get<int>();

            std::vector<GeodesicState> family;
            if (cfg_json.contains("family")) {
                for (const json& entry : cfg_json.at("family")) {
                    RunConfig one = cfg;
                    apply_initial_json(one, entry);
                    family.push_back(initial_state(one));
                }
            }
            if (cfg_json.contains("constants")) {
                for (const json& entry : cfg_json.at("constants"))
                    family.push_back(
                        state_from_constants(cfg.model, constants_from_json(entry), por_sign));
            }
            for (const std::string& text : por_constants)
                family.push_back(
                    state_from_constants(cfg.model, parse_constants(text, true), por_sign));
            if (opt_vary->count()) {
                if (!opt_from->count() || !opt_to->count() || !opt_curves->count() ||
                    por_curves < 1)
                    throw InvalidArgument("--vary needs --from, --to and --curves >= 1");
                const auto& names = coordinate_names(cfg.model);
                int coord_idx = -1;
                bool is_velocity = false;
                for (std::size_t i = 0; i < names.size(); ++i) {
                    if (por_vary == names[i]) coord_idx = static_cast<int>(i);
                    if (por_vary == names[i] + "dot") {
                        coord_idx = static_cast<int>(i);
                        is_velocity = true;
                    }
                }
                if (coord_idx < 0)
                    throw InvalidArgument("--vary '" + por_vary + "' is not a coordinate of " +
                                          std::string(model_name(cfg.model)));
                for (int k = 0; k < por_curves; ++k) {
                    const double v = por_curves == 1
                                         ? por_from
                                         : por_from + (por_to - por_from) * k / (por_curves - 1);
                    RunConfig one = cfg;
                    if (is_velocity) one.velocity[static_cast<std::size_t>(coord_idx)] = v;
                    else one.coords[static_cast<std::size_t>(coord_idx)] = v;
                    family.push_back(initial_state(one));
                }
            }
            if (family.empty())
                throw InvalidArgument(
                    "no curves requested (use --constants, --vary or a config family)");

            const PhasePortrait p = phase_portrait(cfg.model, family, cfg.integrator);
            std::string content;
            if (cfg.format == "csv") content = portrait_to_csv(p);
            else if (cfg.format == "json") content = portrait_to_json(p).dump(2) + "\n";
            else content = portrait_to_svg(p);
            write_output(content, cfg.out);
            return 0;
        }

        if (potential->parsed()) {
            json cfg_json = pot_common.config();
            const ModelId m = pot_common.resolve_model(cfg_json);
            RunConfig cfg = default_run_config(m);
            for (auto it = cfg_json.begin(); it != cfg_json.end(); ++it) {
                const std::string& key = it.key();
                if (key == "model") continue;
                else if (key == "format") cfg.format = it.value().get<std::string>();
                else if (key == "out") cfg.out = it.value().get<std::string>();
                else if (key == "constants") continue;
                else if (key == "y_range") continue;
                else if (key == "points") pot_points = it.value().get<int>();
                else if (key == "normalization") pot_norm = it.value().get<std::string>();
                else if (key == "log_axis") pot_log = it.value().get<bool>();
                else throw InvalidArgument("unknown config key '" + key + "'");
            }
            pot_common.apply_overrides(cfg);

            PotentialNormalization norm;
            if (pot_norm == "raw") norm = PotentialNormalization::raw;
            else if (pot_norm == "figure" || pot_norm == "fig2") norm = PotentialNormalization::figure;
            else throw InvalidArgument("unknown normalization '" + pot_norm + "'");

            double ylo = is_gaussian(m) ? -2.5 : -1.4;
            double yhi = is_gaussian(m) ? 2.5 : 1.4;
            if (cfg_json.contains("y_range")) {
                const json& r = cfg_json.at("y_range");
                if (!r.is_array() || r.size() != 2)
                    throw InvalidArgument("y_range must be [lo, hi]");
                ylo = r[0].get<double>();
                yhi = r[1].get<double>();
            }
            if (opt_ylo->count()) ylo = pot_ylo;
            if (opt_yhi->count()) yhi = pot_yhi;

            std::vector<ConservedSet> sets;
            if (cfg_json.contains("constants"))
                for (const json& entry : cfg_json.at("constants"))
                    sets.push_back(constants_from_json(entry));
            for (const std::string& text : pot_constants)
                sets.push_back(parse_constants(text, false));
            if (sets.empty()) throw InvalidArgument("no constants given (use --constants)");

            std::vector<PotentialProfile> profiles;
            for (const ConservedSet& cs : sets)
                profiles.push_back(potential_profile(m, ylo, yhi, pot_points, cs, norm));

            std::string content;
            if (cfg.format == "csv") content = potential_to_csv(profiles);
            else if (cfg.format == "json") content = potential_to_json(profiles).dump(2) + "\n";
            else content = potential_to_svg(profiles, pot_log);
            write_output(content, cfg.out);
            return 0;
        }

        if (verify->parsed()) {
            std::vector<ModelId> models;
            if (ver_models.empty())
                models.assign(std::begin(kAllModels), std::end(kAllModels));
            else
                for (const std::string& n : ver_models) models.push_back(model_from_name(n));

            VerificationReport report;
            for (ModelId m : models) {
                const auto grid = default_verification_grid(m);
                report.entries.push_back(verify_against_closed_form(m, grid, ver_nodes));
            }
            std::cout << verification_report_text(report);
            if (!ver_out.empty())
                write_output(verification_report_to_json(report).dump(2) + "\n", ver_out);
            return report.pass() ? 0 : 4;
        }

        if (bounds->parsed()) {
            const ModelId m = model_from_name(bnd_model);
            const ConservedSet cs = parse_constants(bnd_constants, true);
            const OrbitBounds b = orbit_bounds(m, cs);
            std::cout << "model: " << model_name(m) << "\n";
            std::cout << "constants: " << conserved_summary(cs) << "\n";
            std::cout << "coordinate: " << b.coordinate << "\n";
            std::cout << "interval: [" << format_g17(b.lower) << ", " << format_g17(b.upper)
                      << "]\n";
            std::cout << "kind: " << orbit_kind_name(b.kind) << "\n";
            const auto eq = equilibria(m, cs);
            if (eq.empty()) {
                std::cout << "equilibria: none\n";
            } else {
                const auto& names = coordinate_names(m);
                for (const ChartPoint& p : eq) {
                    std::cout << "equilibrium:";
                    for (std::size_t i = 0; i < names.size(); ++i)
                        std::cout << (i ? ", " : " ") << names[i] << " = "
                                  << format_g17(p.coords[i]);
                    std::cout << "\n";
                }
            }
            return 0;
        }
    } catch (const DriftExceeded& e) {
        std::cerr << "geostat: error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "geostat: error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "geostat: error: InvalidArgument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "geostat: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
