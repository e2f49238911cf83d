#pragma once

// Figure-level analyses over integrated trajectories: phase portraits,
// effective-potential profiles, endpoint classification, entropy tracking and
// the uncertainty product of the Gaussian models.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geostat/integrator.hpp"

namespace geostat {

struct PortraitCurve {
    std::vector<double> x;  // radial coordinate samples
    std::vector<double> v;  // radial velocity samples
    ConservedSet constants;
    StopReason stop_reason = StopReason::user_horizon;
};

// Radial-plane projection (p, pdot) or (sigma, sigmadot) of a family of
// geodesics, one curve per initial state, in input order.
struct PhasePortrait {
    ModelId model = ModelId::bernoulli_classical;
    std::string x_axis;
    std::string v_axis;
    std::vector<PortraitCurve> curves;
};

struct PotentialProfile {
    ModelId model = ModelId::bernoulli_classical;
    std::vector<double> y;
    std::vector<double> u;
    ConservedSet constants;
    PotentialNormalization normalization = PotentialNormalization::raw;
    // Location and value of the potential minimum when one exists
    // (gaussian-quantum with A, B != 0).
    std::optional<double> y_min_location;
    std::optional<double> u_min_value;
};

enum class EndpointClass { min_entropy_boundary, bounded_oscillation, equilibrium, sigma_divergent };

inline std::string_view endpoint_class_name(EndpointClass c) {
    switch (c) {
        case EndpointClass::min_entropy_boundary: return "min-entropy-boundary";
        case EndpointClass::bounded_oscillation: return "bounded-oscillation";
        case EndpointClass::equilibrium: return "equilibrium";
        case EndpointClass::sigma_divergent: return "sigma-divergent";
    }
    throw InvalidArgument("unknown endpoint class");
}

namespace detail {

// Decimation keeps every stride-th sample plus the first, the last and both
// neighbors of every radial turning point, so curve extrema match the full
// trajectory exactly.
inline std::vector<std::size_t> decimation_indices(const Trajectory& t, std::size_t max_points) {
    const std::size_t n = t.samples.size();
    std::vector<std::size_t> keep;
    if (n == 0) return keep;
    const std::size_t stride = std::max<std::size_t>(1, (n + max_points - 1) / max_points);
    const int r = radial_index(t.model);
    for (std::size_t i = 0; i < n; ++i) {
        bool take = (i % stride == 0) || i + 1 == n;
        if (!take && i > 0) {
            const double v0 = t.samples[i - 1].velocity.components[static_cast<std::size_t>(r)];
            const double v1 = t.samples[i].velocity.components[static_cast<std::size_t>(r)];
            take = v0 * v1 <= 0.0;
        }
        if (!take && i + 1 < n) {
            const double v0 = t.samples[i].velocity.components[static_cast<std::size_t>(r)];
            const double v1 = t.samples[i + 1].velocity.components[static_cast<std::size_t>(r)];
            take = v0 * v1 <= 0.0;
        }
        if (take) keep.push_back(i);
    }
    return keep;
}

}  // namespace detail

inline PhasePortrait phase_portrait(ModelId m, const std::vector<GeodesicState>& initial_family,
                                    const IntegratorConfig& cfg = {},
                                    std::size_t max_points_per_curve = 2000) {
    PhasePortrait out;
    out.model = m;
    out.x_axis = radial_name(m);
    out.v_axis = radial_name(m) + "dot";
    const int r = radial_index(m);
    for (const GeodesicState& s0 : initial_family) {
        const Trajectory traj = integrate(m, s0, cfg);
        PortraitCurve curve;
        curve.constants = traj.conserved_initial;
        curve.stop_reason = traj.stop_reason;
        for (std::size_t i : detail::decimation_indices(traj, max_points_per_curve)) {
            curve.x.push_back(traj.samples[i].point.coords[static_cast<std::size_t>(r)]);
            curve.v.push_back(traj.samples[i].velocity.components[static_cast<std::size_t>(r)]);
        }
        out.curves.push_back(std::move(curve));
    }
    return out;
}

// Tabulates the effective potential on a uniform y grid. Qubit grids must
// stay at least 1e-3 away from the asymptotes at +-pi/2.
inline PotentialProfile potential_profile(ModelId m, double y_lo, double y_hi, int n_points,
                                          const ConservedSet& cs,
                                          PotentialNormalization norm = PotentialNormalization::raw) {
    if (!(y_lo < y_hi)) throw InvalidArgument("empty y range");
    if (n_points < 2) throw InvalidArgument("need at least two grid points");
    if (!is_gaussian(m)) {
        const double limit = std::numbers::pi / 2.0 - 1e-3;
        if (y_lo < -limit || y_hi > limit)
            throw OutOfDomain("y range must stay 1e-3 away from the +-pi/2 asymptotes");
    }
    PotentialProfile prof;
    prof.model = m;
    prof.constants = cs;
    prof.normalization = norm;
    prof.y.reserve(static_cast<std::size_t>(n_points));
    prof.u.reserve(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        const double y = y_lo + (y_hi - y_lo) * i / (n_points - 1);
        prof.y.push_back(y);
        prof.u.push_back(effective_potential(m, y, cs, norm));
    }
    const double A = detail::opt0(cs.A);
    const double B = detail::opt0(cs.B);
    if (m == ModelId::gaussian_quantum && A != 0.0 && B != 0.0) {
        prof.y_min_location = 0.25 * std::log(B * B / (2.0 * A * A));
        prof.u_min_value = effective_potential(m, *prof.y_min_location, cs, norm);
    }
    return prof;
}

// Qualitative fate of a trajectory:
//   min-entropy-boundary  stopped at the margin of p in {0,1} or sigma -> 0
//   equilibrium           radial excursion below 1e-8
//   sigma-divergent       Gaussian model, A = 0, sigma grew past
//                         divergence_cap_factor * sigma(0)
//   bounded-oscillation   at least two radial turning events
// Anything else means the horizon was too short to tell: Unclassifiable.
inline EndpointClass classify_endpoint(const Trajectory& t, double divergence_cap_factor = 1e3) {
    if (t.samples.size() < 2) throw Unclassifiable("trajectory has fewer than two samples");
    if (t.stop_reason == StopReason::boundary) return EndpointClass::min_entropy_boundary;

    const int r = radial_index(t.model);
    const double x0 = t.samples.front().point.coords[static_cast<std::size_t>(r)];
    double excursion = 0.0;
    double x_max = x0;
    for (const GeodesicState& s : t.samples) {
        const double x = s.point.coords[static_cast<std::size_t>(r)];
        excursion = std::max(excursion, std::abs(x - x0));
        x_max = std::max(x_max, x);
    }
    if (excursion < 1e-8) return EndpointClass::equilibrium;

    if (is_gaussian(t.model)) {
        const double A = detail::opt0(t.conserved_initial.A);
        if (A == 0.0 && x_max >= divergence_cap_factor * x0)
            return EndpointClass::sigma_divergent;
    }
    if (detect_turning_points(t, radial_name(t.model)).size() >= 2)
        return EndpointClass::bounded_oscillation;
    throw Unclassifiable("no endpoint criterion observed; extend the horizon");
}

/// Shannon entropy at every sample, as (time, entropy) pairs.
inline std::vector<std::pair<double, double>> entropy_along(const Trajectory& t) {
    if (t.samples.empty()) throw InvalidArgument("entropy_along needs samples");
    std::vector<std::pair<double, double>> out;
    out.reserve(t.samples.size());
    for (const GeodesicState& s : t.samples)
        out.emplace_back(s.time, shannon_entropy(t.model, s.point));
    return out;
}

// Delta_x * Delta_p = sigma * 1/(2 sigma) along a Gaussian trajectory,
// constant 1/2 by construction; exposed so the invariant is executable.
inline std::vector<std::pair<double, double>> uncertainty_product(const Trajectory& t) {
    if (!is_gaussian(t.model))
        throw NotApplicable("uncertainty product applies to the Gaussian models only");
    if (t.samples.empty()) throw InvalidArgument("uncertainty_product needs samples");
    std::vector<std::pair<double, double>> out;
    out.reserve(t.samples.size());
    for (const GeodesicState& s : t.samples) {
        const double sigma = s.point.coords[1];
        out.emplace_back(s.time, sigma * (1.0 / (2.0 * sigma)));
    }
    return out;
}

}  // namespace geostat
