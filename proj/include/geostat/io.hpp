#pragma once

// Serialization of trajectories, portraits, potential profiles and
// verification reports to CSV (RFC-4180 body, '#' comment header, 17
// significant digits), JSON (exact double round-trip) and hand-emitted SVG
// 1.1 (fixed 800x600 viewport, byte-deterministic).

#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "geostat/analysis.hpp"
#include "geostat/pullback.hpp"

namespace geostat {

using json = nlohmann::json;

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
    ModelId model = ModelId::bernoulli_classical;
    std::vector<double> coords;    // initial point, chart order
    std::vector<double> velocity;  // initial velocity, chart order
    IntegratorConfig integrator;
    std::string format = "csv";  // csv | json | svg
    std::string out;             // output path; empty means stdout
};

inline RunConfig default_run_config(ModelId m) {
    RunConfig cfg;
    cfg.model = m;
    cfg.velocity.assign(static_cast<std::size_t>(model_dim(m)), 0.0);
    switch (m) {
        case ModelId::bernoulli_classical: cfg.coords = {0.5}; break;
        case ModelId::qubit_quantum: cfg.coords = {0.5, 0.0}; break;
        case ModelId::gaussian_classical: cfg.coords = {0.0, 1.0}; break;
        case ModelId::gaussian_quantum: cfg.coords = {0.0, 1.0, 0.0}; break;
    }
    return cfg;
}

inline GeodesicState initial_state(const RunConfig& cfg) {
    return make_state(cfg.model, cfg.coords, cfg.velocity);
}

// Applies the "initial" object of a JSON config: keys must be chart
// coordinate names or "<name>dot"; anything else is rejected.
inline void apply_initial_json(RunConfig& cfg, const json& initial) {
    if (!initial.is_object()) throw InvalidArgument("'initial' must be an object");
    const auto& names = coordinate_names(cfg.model);
    for (auto it = initial.begin(); it != initial.end(); ++it) {
        const std::string& key = it.key();
        if (!it.value().is_number())
            throw InvalidArgument("initial value '" + key + "' must be a number");
        bool matched = false;
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (key == names[i]) {
                cfg.coords[i] = it.value().get<double>();
                matched = true;
            } else if (key == names[i] + "dot") {
                cfg.velocity[i] = it.value().get<double>();
                matched = true;
            }
        }
        if (!matched)
            throw InvalidArgument("unknown initial-condition key '" + key + "' for model " +
                                  std::string(model_name(cfg.model)));
    }
}

inline void apply_integrator_json(IntegratorConfig& icfg, const json& j) {
    if (!j.is_object()) throw InvalidArgument("'integrator' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key == "step_size") icfg.step_size = it.value().get<double>();
        else if (key == "max_steps") icfg.max_steps = it.value().get<long long>();
        else if (key == "boundary_margin") icfg.boundary_margin = it.value().get<double>();
        else if (key == "drift_tolerance") icfg.drift_tolerance = it.value().get<double>();
        else if (key == "horizon") icfg.horizon = it.value().get<double>();
        else if (key == "method") {
            if (it.value().get<std::string>() != "rk4")
                throw InvalidArgument("only the rk4 method is available");
        } else
            throw InvalidArgument("unknown integrator key '" + key + "'");
    }
}

// ---------------------------------------------------------------------------
// Trajectories

inline std::vector<std::string> trajectory_columns(ModelId m) {
    std::vector<std::string> cols{"t"};
    for (const std::string& n : coordinate_names(m)) cols.push_back(n);
    for (const std::string& n : coordinate_names(m)) cols.push_back(n + "dot");
    if (m != ModelId::bernoulli_classical) cols.push_back("A");
    if (m == ModelId::gaussian_quantum) cols.push_back("B");
    cols.push_back("C");
    cols.push_back("entropy");
    return cols;
}

inline std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

inline std::string conserved_summary(const ConservedSet& cs) {
    std::vector<std::string> parts;
    if (cs.A) parts.push_back("A=" + format_g17(*cs.A));
    if (cs.B) parts.push_back("B=" + format_g17(*cs.B));
    parts.push_back("C=" + format_g17(cs.C));
    return join(parts, ", ");
}

inline std::string drift_summary(const ConservedDrift& d) {
    std::vector<std::string> parts;
    if (d.A) parts.push_back("A=" + format_g17(*d.A));
    if (d.B) parts.push_back("B=" + format_g17(*d.B));
    parts.push_back("C=" + format_g17(d.C));
    return join(parts, ", ");
}

inline std::string trajectory_to_csv(const Trajectory& t) {
    std::string out;
    out += "# geostat trajectory\n";
    out += "# model: " + std::string(model_name(t.model)) + "\n";
    out += "# columns: " + join(trajectory_columns(t.model), ",") + "\n";
    out += "# stop_reason: " + std::string(stop_reason_name(t.stop_reason)) + "\n";
    out += "# conserved: " + conserved_summary(t.conserved_initial) + "\n";
    out += "# drift: " + drift_summary(t.conserved_drift) + "\n";
    for (const GeodesicState& s : t.samples) {
        const ConservedSet cs = conserved_quantities(t.model, s);
        std::vector<std::string> fields{format_g17(s.time)};
        for (double c : s.point.coords) fields.push_back(format_g17(c));
        for (double v : s.velocity.components) fields.push_back(format_g17(v));
        if (cs.A) fields.push_back(format_g17(*cs.A));
        if (cs.B) fields.push_back(format_g17(*cs.B));
        fields.push_back(format_g17(cs.C));
        fields.push_back(format_g17(shannon_entropy(t.model, s.point)));
        out += join(fields, ",") + "\n";
    }
    return out;
}

inline json conserved_to_json(const ConservedSet& cs) {
    json j = json::object();
    if (cs.A) j["A"] = *cs.A;
    if (cs.B) j["B"] = *cs.B;
    j["C"] = cs.C;
    return j;
}

inline json trajectory_to_json(const Trajectory& t, const IntegratorConfig& cfg) {
    json j;
    j["model"] = std::string(model_name(t.model));
    j["config"] = {{"step_size", cfg.step_size},
                   {"max_steps", cfg.max_steps},
                   {"boundary_margin", cfg.boundary_margin},
                   {"drift_tolerance", cfg.drift_tolerance},
                   {"horizon", cfg.horizon},
                   {"method", "rk4"}};
    json samples = json::array();
    for (const GeodesicState& s : t.samples) {
        json js;
        js["t"] = s.time;
        js["coords"] = s.point.coords;
        js["velocity"] = s.velocity.components;
        js["conserved"] = conserved_to_json(conserved_quantities(t.model, s));
        js["entropy"] = shannon_entropy(t.model, s.point);
        samples.push_back(std::move(js));
    }
    j["samples"] = std::move(samples);
    j["stop_reason"] = std::string(stop_reason_name(t.stop_reason));
    json drift = json::object();
    if (t.conserved_drift.A) drift["A"] = *t.conserved_drift.A;
    if (t.conserved_drift.B) drift["B"] = *t.conserved_drift.B;
    drift["C"] = t.conserved_drift.C;
    j["drift"] = std::move(drift);
    return j;
}

inline Trajectory trajectory_from_json(const json& j) {
    Trajectory t;
    t.model = model_from_name(j.at("model").get<std::string>());
    const std::string chart{model_name(t.model)};
    for (const json& js : j.at("samples")) {
        GeodesicState s;
        s.time = js.at("t").get<double>();
        s.point.chart_id = chart;
        s.point.coords = js.at("coords").get<std::vector<double>>();
        s.velocity.chart_id = chart;
        s.velocity.components = js.at("velocity").get<std::vector<double>>();
        t.samples.push_back(std::move(s));
    }
    if (t.samples.empty()) throw InvalidArgument("trajectory JSON has no samples");
    t.conserved_initial = conserved_quantities(t.model, t.samples.front());
    t.stop_reason = stop_reason_from_name(j.at("stop_reason").get<std::string>());
    const json& drift = j.at("drift");
    if (drift.contains("A")) t.conserved_drift.A = drift.at("A").get<double>();
    if (drift.contains("B")) t.conserved_drift.B = drift.at("B").get<double>();
    t.conserved_drift.C = drift.at("C").get<double>();
    return t;
}

// ---------------------------------------------------------------------------
// SVG

struct SvgCurve {
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

namespace detail {

inline const char* svg_palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    return colors[i % (sizeof(colors) / sizeof(colors[0]))];
}

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string svg_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

}  // namespace detail

// Fixed 800x600 line plot. With log_y the value axis is logarithmic; curves
// must then contain positive values.
inline std::string svg_plot(const std::vector<SvgCurve>& curves, const std::string& x_label,
                            const std::string& y_label, bool log_y = false) {
    constexpr double kW = 800.0, kH = 600.0;
    constexpr double kLeft = 70.0, kRight = 20.0, kTop = 20.0, kBottom = 50.0;
    const double plot_w = kW - kLeft - kRight;
    const double plot_h = kH - kTop - kBottom;

    double xmin = kInfinity, xmax = -kInfinity, ymin = kInfinity, ymax = -kInfinity;
    for (const SvgCurve& c : curves) {
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            const double y = log_y ? (c.y[i] > 0.0 ? std::log10(c.y[i]) : kInfinity) : c.y[i];
            if (!std::isfinite(c.x[i]) || !std::isfinite(y)) continue;
            xmin = std::min(xmin, c.x[i]);
            xmax = std::max(xmax, c.x[i]);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(xmin <= xmax) || !(ymin <= ymax))
        throw InvalidArgument("nothing to plot (no finite points" +
                              std::string(log_y ? "; log axis needs positive values)" : ")"));
    if (xmax - xmin < 1e-300) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin < 1e-300) { ymin -= 0.5; ymax += 0.5; }
    const double xpad = 0.05 * (xmax - xmin), ypad = 0.05 * (ymax - ymin);
    xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * plot_h; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
         "height=\"600\" viewBox=\"0 0 800 600\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    s += "<rect x=\"" + detail::svg_num(kLeft) + "\" y=\"" + detail::svg_num(kTop) +
         "\" width=\"" + detail::svg_num(plot_w) + "\" height=\"" + detail::svg_num(plot_h) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 5.0;
        const double gx = px(fx);
        s += "<line x1=\"" + detail::svg_num(gx) + "\" y1=\"" + detail::svg_num(kTop + plot_h) +
             "\" x2=\"" + detail::svg_num(gx) + "\" y2=\"" +
             detail::svg_num(kTop + plot_h + 5.0) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + detail::svg_num(gx) + "\" y=\"" +
             detail::svg_num(kTop + plot_h + 20.0) +
             "\" font-size=\"12\" text-anchor=\"middle\">" + detail::svg_label(fx) + "</text>\n";

        const double fy = ymin + (ymax - ymin) * i / 5.0;
        const double gy = py(fy);
        const double label = log_y ? std::pow(10.0, fy) : fy;
        s += "<line x1=\"" + detail::svg_num(kLeft - 5.0) + "\" y1=\"" + detail::svg_num(gy) +
             "\" x2=\"" + detail::svg_num(kLeft) + "\" y2=\"" + detail::svg_num(gy) +
             "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + detail::svg_num(kLeft - 8.0) + "\" y=\"" +
             detail::svg_num(gy + 4.0) + "\" font-size=\"12\" text-anchor=\"end\">" +
             detail::svg_label(label) + "</text>\n";
    }
    s += "<text x=\"" + detail::svg_num(kLeft + plot_w / 2.0) + "\" y=\"" +
         detail::svg_num(kH - 10.0) + "\" font-size=\"14\" text-anchor=\"middle\">" + x_label +
         "</text>\n";
    s += "<text x=\"15\" y=\"" + detail::svg_num(kTop + plot_h / 2.0) +
         "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
         detail::svg_num(kTop + plot_h / 2.0) + ")\">" + (log_y ? y_label + " (log)" : y_label) +
         "</text>\n";

    for (std::size_t ci = 0; ci < curves.size(); ++ci) {
        const SvgCurve& c = curves[ci];
        std::string pts;
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            const double y = log_y ? (c.y[i] > 0.0 ? std::log10(c.y[i]) : kInfinity) : c.y[i];
            if (!std::isfinite(c.x[i]) || !std::isfinite(y)) continue;
            if (!pts.empty()) pts += " ";
            pts += detail::svg_num(px(c.x[i])) + "," + detail::svg_num(py(y));
        }
        s += "<polyline fill=\"none\" stroke=\"" + std::string(detail::svg_palette(ci)) +
             "\" stroke-width=\"1.5\"" + (c.dashed ? " stroke-dasharray=\"6 4\"" : "") +
             " points=\"" + pts + "\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

inline std::string trajectory_to_svg(const Trajectory& t) {
    const int r = radial_index(t.model);
    SvgCurve c;
    for (const GeodesicState& s : t.samples) {
        c.x.push_back(s.point.coords[static_cast<std::size_t>(r)]);
        c.y.push_back(s.velocity.components[static_cast<std::size_t>(r)]);
    }
    return svg_plot({c}, radial_name(t.model), radial_name(t.model) + "dot");
}

// ---------------------------------------------------------------------------
// Phase portraits

inline bool curve_dashed(const PortraitCurve& c) {
    return c.constants.B.has_value() && *c.constants.B != 0.0;
}

inline std::string portrait_to_csv(const PhasePortrait& p) {
    std::string out;
    out += "# geostat portrait\n";
    out += "# model: " + std::string(model_name(p.model)) + "\n";
    out += "# plane: " + p.x_axis + "," + p.v_axis + "\n";
    for (std::size_t ci = 0; ci < p.curves.size(); ++ci) {
        const PortraitCurve& c = p.curves[ci];
        if (ci) out += "\n";
        out += "# curve " + std::to_string(ci) + ": " + conserved_summary(c.constants) +
               ", stop=" + std::string(stop_reason_name(c.stop_reason)) +
               ", dashed=" + (curve_dashed(c) ? "1" : "0") + "\n";
        for (std::size_t i = 0; i < c.x.size(); ++i)
            out += format_g17(c.x[i]) + "," + format_g17(c.v[i]) + "\n";
    }
    return out;
}

inline json portrait_to_json(const PhasePortrait& p) {
    json j;
    j["model"] = std::string(model_name(p.model));
    j["plane"] = {p.x_axis, p.v_axis};
    json curves = json::array();
    for (const PortraitCurve& c : p.curves) {
        json jc;
        jc["constants"] = conserved_to_json(c.constants);
        jc["stop_reason"] = std::string(stop_reason_name(c.stop_reason));
        jc["dashed"] = curve_dashed(c);
        jc["x"] = c.x;
        jc["v"] = c.v;
        curves.push_back(std::move(jc));
    }
    j["curves"] = std::move(curves);
    return j;
}

inline std::string portrait_to_svg(const PhasePortrait& p) {
    std::vector<SvgCurve> curves;
    for (const PortraitCurve& c : p.curves)
        curves.push_back(SvgCurve{c.x, c.v, curve_dashed(c)});
    return svg_plot(curves, p.x_axis, p.v_axis);
}

// ---------------------------------------------------------------------------
// Potential profiles

inline std::string potential_to_csv(std::span<const PotentialProfile> profiles) {
    std::string out;
    out += "# geostat potential\n";
    for (std::size_t pi = 0; pi < profiles.size(); ++pi) {
        const PotentialProfile& p = profiles[pi];
        if (pi) out += "\n";
        out += "# profile " + std::to_string(pi) + ": model=" +
               std::string(model_name(p.model)) + ", " + conserved_summary(p.constants) +
               ", normalization=" +
               (p.normalization == PotentialNormalization::raw ? "raw" : "figure");
        if (p.y_min_location)
            out += ", y_min=" + format_g17(*p.y_min_location) +
                   ", u_min=" + format_g17(*p.u_min_value);
        out += "\n";
        for (std::size_t i = 0; i < p.y.size(); ++i)
            out += format_g17(p.y[i]) + "," + format_g17(p.u[i]) + "\n";
    }
    return out;
}

inline json potential_to_json(std::span<const PotentialProfile> profiles) {
    json arr = json::array();
    for (const PotentialProfile& p : profiles) {
        json jp;
        jp["model"] = std::string(model_name(p.model));
        jp["constants"] = conserved_to_json(p.constants);
        jp["normalization"] = p.normalization == PotentialNormalization::raw ? "raw" : "figure";
        if (p.y_min_location) {
            jp["y_min"] = *p.y_min_location;
            jp["u_min"] = *p.u_min_value;
        }
        jp["y"] = p.y;
        jp["u"] = p.u;
        arr.push_back(std::move(jp));
    }
    return json{{"profiles", std::move(arr)}};
}

inline std::string potential_to_svg(std::span<const PotentialProfile> profiles,
                                    bool log_axis = false) {
    std::vector<SvgCurve> curves;
    for (const PotentialProfile& p : profiles) curves.push_back(SvgCurve{p.y, p.u, false});
    return svg_plot(curves, "y", "U(y)", log_axis);
}

// ---------------------------------------------------------------------------
// Entropy series

inline std::string entropy_series_to_csv(const Trajectory& t) {
    std::string out;
    out += "# geostat entropy\n";
    out += "# model: " + std::string(model_name(t.model)) + "\n";
    std::vector<std::string> cols{"t"};
    for (const std::string& n : coordinate_names(t.model)) cols.push_back(n);
    cols.push_back("entropy");
    out += "# columns: " + join(cols, ",") + "\n";
    for (const GeodesicState& s : t.samples) {
        std::vector<std::string> fields{format_g17(s.time)};
        for (double c : s.point.coords) fields.push_back(format_g17(c));
        fields.push_back(format_g17(shannon_entropy(t.model, s.point)));
        out += join(fields, ",") + "\n";
    }
    return out;
}

inline json entropy_series_to_json(const Trajectory& t) {
    json samples = json::array();
    for (const auto& [time, h] : entropy_along(t))
        samples.push_back(json{{"t", time}, {"entropy", h}});
    return json{{"model", std::string(model_name(t.model))}, {"samples", std::move(samples)}};
}

inline std::string entropy_series_to_svg(const Trajectory& t) {
    SvgCurve c;
    for (const auto& [time, h] : entropy_along(t)) {
        c.x.push_back(time);
        c.y.push_back(h);
    }
    return svg_plot({c}, "t", "entropy (nats)");
}

// ---------------------------------------------------------------------------
// Verification reports

struct VerificationReport {
    std::vector<DeviationEntry> entries;
    double threshold = 1e-6;

    bool pass() const {
        for (const DeviationEntry& e : entries)
            if (e.max_metric_dev > threshold || e.max_symplectic_dev > threshold) return false;
        return true;
    }
};

inline std::string verification_report_text(const VerificationReport& r) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-22s %-13s %-13s %s\n", "model", "max|dg|", "max|domega|",
                  "status");
    out += line;
    for (const DeviationEntry& e : r.entries) {
        const bool ok = e.max_metric_dev <= r.threshold && e.max_symplectic_dev <= r.threshold;
        std::snprintf(line, sizeof line, "%-22s %-13.3e %-13.3e %s\n",
                      std::string(model_name(e.model)).c_str(), e.max_metric_dev,
                      e.max_symplectic_dev, ok ? "PASS" : "FAIL");
        out += line;
    }
    out += std::string("overall: ") + (r.pass() ? "PASS" : "FAIL") + "\n";
    return out;
}

inline json verification_report_to_json(const VerificationReport& r) {
    json arr = json::array();
    for (const DeviationEntry& e : r.entries) {
        arr.push_back(json{{"model", std::string(model_name(e.model))},
                           {"max_metric_dev", e.max_metric_dev},
                           {"max_symplectic_dev", e.max_symplectic_dev},
                           {"pass", e.max_metric_dev <= r.threshold &&
                                        e.max_symplectic_dev <= r.threshold}});
    }
    return json{{"threshold", r.threshold}, {"entries", std::move(arr)}, {"pass", r.pass()}};
}

}  // namespace geostat
