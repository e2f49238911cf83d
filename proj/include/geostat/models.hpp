#pragma once

// Catalog of the four statistical manifolds:
//
//   bernoulli-classical  chart (p),          p in (0,1)
//       g = 1/(p(1-p)) dp (x) dp
//   qubit-quantum        chart (p, phi),     p in (0,1), phi periodic
//       g = 1/(4p(1-p)) dp (x) dp + p(1-p) dphi (x) dphi,  omega = dp ^ dphi
//   gaussian-classical   chart (mu, sigma),  mu in R, sigma > 0
//       g = 1/(4 sigma^2) (dmu (x) dmu + 2 dsigma (x) dsigma)
//   gaussian-quantum     chart (mu, sigma, alpha)
//       g = classical block + sigma^2 dalpha (x) dalpha,   omega = dalpha ^ dmu
//
// Each discrete model has the flattening chart y with 2(p - 1/2) = sin y,
// y in (-pi/2, pi/2); each Gaussian model has sigma = e^y. In the y chart the
// radial motion obeys  kinetic_coeff * ydot^2 + U(y) = C  with the constants
// of the motion
//
//   bernoulli:        C = pdot^2 / (p(1-p))                      (ydot^2 = C)
//   qubit:            A = p(1-p) phidot
//                     C = pdot^2/(8p(1-p)) + p(1-p) phidot^2 / 2
//                         ((1/8) ydot^2 + 2A^2/cos^2 y = C)
//   gaussian:         A = mudot / (2 sigma^2)
//                     C = ydot^2/2 + A^2 sigma^2
//   gaussian-quantum: B = sqrt(2) sigma^2 alphadot
//                     C = ydot^2/2 + A^2 sigma^2 + B^2/(2 sigma^2)
//
// A and B are the momenta of the cyclic coordinates; C is the energy of the
// metric Lagrangian (C = 2E except for the qubit where C = E). All four are
// exact first integrals of the geodesic flow; the integrator audits them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geostat/geometry.hpp"

namespace geostat {

enum class ModelId {
    bernoulli_classical,
    qubit_quantum,
    gaussian_classical,
    gaussian_quantum,
};

inline constexpr ModelId kAllModels[] = {
    ModelId::bernoulli_classical,
    ModelId::qubit_quantum,
    ModelId::gaussian_classical,
    ModelId::gaussian_quantum,
};

// Domain membership uses strict inequalities with this margin; the metrics
// diverge at the chart boundaries.
inline constexpr double kDomainMargin = 1e-12;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline std::string_view model_name(ModelId m) {
    switch (m) {
        case ModelId::bernoulli_classical: return "bernoulli-classical";
        case ModelId::qubit_quantum: return "qubit-quantum";
        case ModelId::gaussian_classical: return "gaussian-classical";
        case ModelId::gaussian_quantum: return "gaussian-quantum";
    }
    throw InvalidArgument("unknown model id");
}

inline ModelId model_from_name(std::string_view name) {
    if (name == "bernoulli" || name == "bernoulli-classical") return ModelId::bernoulli_classical;
    if (name == "qubit" || name == "qubit-quantum") return ModelId::qubit_quantum;
    if (name == "gaussian" || name == "gaussian-classical") return ModelId::gaussian_classical;
    if (name == "gaussian-quantum") return ModelId::gaussian_quantum;
    throw InvalidArgument("unknown model '" + std::string(name) +
                          "' (expected bernoulli, qubit, gaussian or gaussian-quantum)");
}

inline int model_dim(ModelId m) {
    switch (m) {
        case ModelId::bernoulli_classical: return 1;
        case ModelId::qubit_quantum: return 2;
        case ModelId::gaussian_classical: return 2;
        case ModelId::gaussian_quantum: return 3;
    }
    throw InvalidArgument("unknown model id");
}

inline bool is_quantum(ModelId m) {
    return m == ModelId::qubit_quantum || m == ModelId::gaussian_quantum;
}

inline bool is_gaussian(ModelId m) {
    return m == ModelId::gaussian_classical || m == ModelId::gaussian_quantum;
}

inline const std::vector<std::string>& coordinate_names(ModelId m) {
    static const std::vector<std::string> bern{"p"};
    static const std::vector<std::string> qubit{"p", "phi"};
    static const std::vector<std::string> gauss{"mu", "sigma"};
    static const std::vector<std::string> gaussq{"mu", "sigma", "alpha"};
    switch (m) {
        case ModelId::bernoulli_classical: return bern;
        case ModelId::qubit_quantum: return qubit;
        case ModelId::gaussian_classical: return gauss;
        case ModelId::gaussian_quantum: return gaussq;
    }
    throw InvalidArgument("unknown model id");
}

// Index of the coordinate whose motion is bounded by the effective potential
// (p for the discrete models, sigma for the Gaussian ones).
inline int radial_index(ModelId m) { return is_gaussian(m) ? 1 : 0; }

inline const std::string& radial_name(ModelId m) {
    return coordinate_names(m)[static_cast<std::size_t>(radial_index(m))];
}

inline int coordinate_index(ModelId m, std::string_view name) {
    const auto& names = coordinate_names(m);
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    throw InvalidArgument("model " + std::string(model_name(m)) + " has no coordinate '" +
                          std::string(name) + "'");
}

inline std::string y_chart_id(ModelId m) { return std::string(model_name(m)) + ":y"; }

// Momenta of the cyclic coordinates (A, B) and the energy-like constant C.
// Absent fields mean the model has no such cyclic coordinate.
struct ConservedSet {
    std::optional<double> A;
    std::optional<double> B;
    double C = 0.0;
};

enum class OrbitKind { bounded_oscillation, boundary_reaching, equilibrium, divergent };

inline std::string_view orbit_kind_name(OrbitKind k) {
    switch (k) {
        case OrbitKind::bounded_oscillation: return "bounded-oscillation";
        case OrbitKind::boundary_reaching: return "boundary-reaching";
        case OrbitKind::equilibrium: return "equilibrium";
        case OrbitKind::divergent: return "divergent";
    }
    throw InvalidArgument("unknown orbit kind");
}

// Interval of the radial coordinate visited by orbits with the given
// constants, together with the qualitative fate of the motion.
struct OrbitBounds {
    std::string coordinate;
    double lower = 0.0;
    double upper = 0.0;
    OrbitKind kind = OrbitKind::bounded_oscillation;
};

namespace detail {

inline bool in_open_domain_raw(ModelId m, const double* x, double margin = kDomainMargin) {
    const int d = model_dim(m);
    for (int i = 0; i < d; ++i)
        if (!std::isfinite(x[i])) return false;
    switch (m) {
        case ModelId::bernoulli_classical:
        case ModelId::qubit_quantum:
            return x[0] > margin && x[0] < 1.0 - margin;
        case ModelId::gaussian_classical:
        case ModelId::gaussian_quantum:
            return x[1] > margin;
    }
    return false;
}

// Distance to the nearest chart edge in the natural coordinates. Unbounded
// and periodic coordinates do not contribute.
inline double boundary_distance_raw(ModelId m, const double* x) {
    switch (m) {
        case ModelId::bernoulli_classical:
        case ModelId::qubit_quantum:
            return std::min(x[0], 1.0 - x[0]);
        case ModelId::gaussian_classical:
        case ModelId::gaussian_quantum:
            return x[1];
    }
    return kInfinity;
}

inline void christoffel_raw(ModelId m, const double* x, ChristoffelValue& gamma) {
    switch (m) {
        case ModelId::bernoulli_classical: {
            const double p = x[0], w = p * (1.0 - p);
            gamma = ChristoffelValue(1);
            gamma.set(0, 0, 0, -(1.0 - 2.0 * p) / (2.0 * w));
            return;
        }
        case ModelId::qubit_quantum: {
            const double p = x[0], w = p * (1.0 - p), wp = 1.0 - 2.0 * p;
            gamma = ChristoffelValue(2);
            gamma.set(0, 0, 0, -wp / (2.0 * w));      // p,pp
            gamma.set(0, 1, 1, -2.0 * w * wp);        // p,phiphi
            gamma.set(1, 0, 1, wp / (2.0 * w));       // phi,pphi
            return;
        }
        case ModelId::gaussian_classical: {
            const double s = x[1];
            gamma = ChristoffelValue(2);
            gamma.set(0, 0, 1, -1.0 / s);             // mu,musigma
            gamma.set(1, 0, 0, 1.0 / (2.0 * s));      // sigma,mumu
            gamma.set(1, 1, 1, -1.0 / s);             // sigma,sigmasigma
            return;
        }
        case ModelId::gaussian_quantum: {
            const double s = x[1];
            gamma = ChristoffelValue(3);
            gamma.set(0, 0, 1, -1.0 / s);
            gamma.set(1, 0, 0, 1.0 / (2.0 * s));
            gamma.set(1, 1, 1, -1.0 / s);
            gamma.set(1, 2, 2, -2.0 * s * s * s);     // sigma,alphaalpha
            gamma.set(2, 1, 2, 1.0 / s);              // alpha,sigmaalpha
            return;
        }
    }
    throw InvalidArgument("unknown model id");
}

inline ConservedSet conserved_raw(ModelId m, const double* x, const double* v) {
    ConservedSet cs;
    switch (m) {
        case ModelId::bernoulli_classical: {
            const double w = x[0] * (1.0 - x[0]);
            cs.C = v[0] * v[0] / w;
            return cs;
        }
        case ModelId::qubit_quantum: {
            const double w = x[0] * (1.0 - x[0]);
            cs.A = w * v[1];
            cs.C = v[0] * v[0] / (8.0 * w) + 0.5 * w * v[1] * v[1];
            return cs;
        }
        case ModelId::gaussian_classical: {
            const double s = x[1], ydot = v[1] / s;
            const double a = v[0] / (2.0 * s * s);
            cs.A = a;
            cs.C = 0.5 * ydot * ydot + a * a * s * s;
            return cs;
        }
        case ModelId::gaussian_quantum: {
            const double s = x[1], ydot = v[1] / s;
            const double a = v[0] / (2.0 * s * s);
            const double b = std::numbers::sqrt2 * s * s * v[2];
            cs.A = a;
            cs.B = b;
            cs.C = 0.5 * ydot * ydot + a * a * s * s + b * b / (2.0 * s * s);
            return cs;
        }
    }
    throw InvalidArgument("unknown model id");
}

inline double opt0(const std::optional<double>& v) { return v.value_or(0.0); }

}  // namespace detail

inline bool in_domain(ModelId m, const ChartPoint& p, double margin = kDomainMargin) {
    if (p.chart_id != model_name(m) || p.dim() != model_dim(m)) return false;
    return detail::in_open_domain_raw(m, p.coords.data(), margin);
}

inline void require_interior(ModelId m, const ChartPoint& p, double margin = kDomainMargin) {
    if (p.chart_id != model_name(m))
        throw OutOfDomain("point chart '" + p.chart_id + "' does not belong to model '" +
                          std::string(model_name(m)) + "'");
    if (p.dim() != model_dim(m))
        throw DimensionMismatch("point has " + std::to_string(p.dim()) + " coordinates, model " +
                                std::string(model_name(m)) + " expects " +
                                std::to_string(model_dim(m)));
    if (!detail::in_open_domain_raw(m, p.coords.data(), margin))
        throw OutOfDomain("point is outside the open domain of " + std::string(model_name(m)));
}

inline ChartPoint make_point(ModelId m, std::vector<double> coords) {
    ChartPoint p{std::string(model_name(m)), std::move(coords)};
    require_interior(m, p);
    return p;
}

inline GeodesicState make_state(ModelId m, std::vector<double> coords, std::vector<double> velocity,
                                double time = 0.0) {
    GeodesicState s;
    s.point = make_point(m, std::move(coords));
    s.velocity = TangentVector{std::string(model_name(m)), std::move(velocity)};
    if (s.velocity.dim() != model_dim(m))
        throw DimensionMismatch("velocity has " + std::to_string(s.velocity.dim()) +
                                " components, model expects " + std::to_string(model_dim(m)));
    s.time = time;
    return s;
}

inline double boundary_distance(ModelId m, const ChartPoint& p) {
    require_interior(m, p);
    return detail::boundary_distance_raw(m, p.coords.data());
}

/// Closed-form metric matrix at an interior point.
inline MetricValue metric_at(ModelId m, const ChartPoint& p) {
    require_interior(m, p);
    const double* x = p.coords.data();
    MetricValue g;
    switch (m) {
        case ModelId::bernoulli_classical: {
            g.matrix = Eigen::MatrixXd::Zero(1, 1);
            g.matrix(0, 0) = 1.0 / (x[0] * (1.0 - x[0]));
            return g;
        }
        case ModelId::qubit_quantum: {
            const double w = x[0] * (1.0 - x[0]);
            g.matrix = Eigen::MatrixXd::Zero(2, 2);
            g.matrix(0, 0) = 1.0 / (4.0 * w);
            g.matrix(1, 1) = w;
            return g;
        }
        case ModelId::gaussian_classical: {
            const double s2 = x[1] * x[1];
            g.matrix = Eigen::MatrixXd::Zero(2, 2);
            g.matrix(0, 0) = 1.0 / (4.0 * s2);
            g.matrix(1, 1) = 1.0 / (2.0 * s2);
            return g;
        }
        case ModelId::gaussian_quantum: {
            const double s2 = x[1] * x[1];
            g.matrix = Eigen::MatrixXd::Zero(3, 3);
            g.matrix(0, 0) = 1.0 / (4.0 * s2);
            g.matrix(1, 1) = 1.0 / (2.0 * s2);
            g.matrix(2, 2) = s2;
            return g;
        }
    }
    throw InvalidArgument("unknown model id");
}

// Matrix of the symplectic form, entries omega(d_i, d_j). Constant for both
// quantum models: omega = dp ^ dphi (qubit) and omega = dalpha ^ dmu
// (gaussian-quantum). Classical models carry no symplectic structure.
inline Eigen::MatrixXd symplectic_at(ModelId m, const ChartPoint& p) {
    require_interior(m, p);
    switch (m) {
        case ModelId::qubit_quantum: {
            Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
            w(0, 1) = 1.0;
            w(1, 0) = -1.0;
            return w;
        }
        case ModelId::gaussian_quantum: {
            Eigen::MatrixXd w = Eigen::MatrixXd::Zero(3, 3);
            w(2, 0) = 1.0;
            w(0, 2) = -1.0;
            return w;
        }
        default:
            throw NotApplicable("model " + std::string(model_name(m)) +
                                " is classical (dalpha == 0, omega == 0)");
    }
}

inline ChristoffelValue christoffel_analytic(ModelId m, const ChartPoint& p) {
    require_interior(m, p);
    ChristoffelValue gamma;
    detail::christoffel_raw(m, p.coords.data(), gamma);
    return gamma;
}

// Flattening chart: y = asin(2p - 1) for the discrete models, y = ln sigma for
// the Gaussian ones. Cyclic coordinates pass through unchanged.
inline ChartPoint to_y_chart(ModelId m, const ChartPoint& p) {
    require_interior(m, p);
    ChartPoint out = p;
    out.chart_id = y_chart_id(m);
    const int r = radial_index(m);
    if (is_gaussian(m))
        out.coords[static_cast<std::size_t>(r)] = std::log(p.coords[static_cast<std::size_t>(r)]);
    else
        out.coords[static_cast<std::size_t>(r)] =
            std::asin(2.0 * p.coords[static_cast<std::size_t>(r)] - 1.0);
    return out;
}

inline ChartPoint from_y_chart(ModelId m, const ChartPoint& y) {
    if (y.chart_id != y_chart_id(m))
        throw OutOfDomain("point chart '" + y.chart_id + "' is not the y chart of " +
                          std::string(model_name(m)));
    if (y.dim() != model_dim(m))
        throw DimensionMismatch("y-chart point has wrong dimension");
    const int r = radial_index(m);
    const double yr = y.coords[static_cast<std::size_t>(r)];
    if (!std::isfinite(yr)) throw OutOfDomain("non-finite y coordinate");
    ChartPoint out = y;
    out.chart_id = std::string(model_name(m));
    if (is_gaussian(m)) {
        out.coords[static_cast<std::size_t>(r)] = std::exp(yr);
    } else {
        if (std::abs(yr) >= std::numbers::pi / 2.0 - kDomainMargin)
            throw OutOfDomain("y outside (-pi/2, pi/2)");
        out.coords[static_cast<std::size_t>(r)] = 0.5 * (1.0 + std::sin(yr));
    }
    require_interior(m, out);
    return out;
}

// Radial y-chart velocity of a state: ydot = pdot / sqrt(p(1-p)) for the
// discrete models, ydot = sigmadot / sigma for the Gaussian ones.
inline double y_velocity(ModelId m, const GeodesicState& s) {
    require_interior(m, s.point);
    const int r = radial_index(m);
    const double xr = s.point.coords[static_cast<std::size_t>(r)];
    const double vr = s.velocity.components[static_cast<std::size_t>(r)];
    if (is_gaussian(m)) return vr / xr;
    return vr / std::sqrt(xr * (1.0 - xr));
}

inline ConservedSet conserved_quantities(ModelId m, const GeodesicState& s) {
    require_interior(m, s.point);
    if (s.velocity.dim() != model_dim(m))
        throw DimensionMismatch("velocity dimension does not match the model chart");
    return detail::conserved_raw(m, s.point.coords.data(), s.velocity.components.data());
}

// C = energy_normalization * (1/2 v^T g v) for every model and state.
inline double energy_normalization(ModelId m) {
    return m == ModelId::qubit_quantum ? 1.0 : 2.0;
}

// Shannon entropy in nats: -p ln p - (1-p) ln(1-p) for the discrete models,
// differential entropy (1/2) ln(2 pi e sigma^2) for the Gaussian ones. The
// cyclic coordinates do not enter.
inline double shannon_entropy(ModelId m, const ChartPoint& p) {
    require_interior(m, p);
    if (is_gaussian(m)) {
        const double s = p.coords[1];
        return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * s * s);
    }
    const double q = p.coords[0];
    return -q * std::log(q) - (1.0 - q) * std::log(1.0 - q);
}

// The qubit potential comes in two conventional normalizations:
//   raw:    U = 2A^2/cos^2 y   with (1/8) ydot^2 + U = C
//   figure: U = 16A^2/cos^2 y  with        ydot^2 + U = 8C
// For the other models both flags coincide.
enum class PotentialNormalization { raw, figure };

inline double y_kinetic_coeff(ModelId m, PotentialNormalization n = PotentialNormalization::raw) {
    switch (m) {
        case ModelId::bernoulli_classical: return 1.0;
        case ModelId::qubit_quantum: return n == PotentialNormalization::raw ? 0.125 : 1.0;
        case ModelId::gaussian_classical:
        case ModelId::gaussian_quantum: return 0.5;
    }
    throw InvalidArgument("unknown model id");
}

inline double y_energy_level(ModelId m, const ConservedSet& cs,
                             PotentialNormalization n = PotentialNormalization::raw) {
    if (m == ModelId::qubit_quantum && n == PotentialNormalization::figure) return 8.0 * cs.C;
    return cs.C;
}

inline double effective_potential(ModelId m, double y, const ConservedSet& cs,
                                  PotentialNormalization n = PotentialNormalization::raw) {
    if (!std::isfinite(y)) throw OutOfDomain("non-finite y");
    const double A = detail::opt0(cs.A);
    const double B = detail::opt0(cs.B);
    switch (m) {
        case ModelId::bernoulli_classical:
            if (std::abs(y) >= std::numbers::pi / 2.0) throw OutOfDomain("y outside (-pi/2, pi/2)");
            return 0.0;  // free motion: ydot^2 = C
        case ModelId::qubit_quantum: {
            if (std::abs(y) >= std::numbers::pi / 2.0) throw OutOfDomain("y outside (-pi/2, pi/2)");
            const double c = std::cos(y);
            const double scale = n == PotentialNormalization::figure ? 16.0 : 2.0;
            return scale * A * A / (c * c);
        }
        case ModelId::gaussian_classical:
            return A * A * std::exp(2.0 * y);
        case ModelId::gaussian_quantum:
            return A * A * std::exp(2.0 * y) + B * B / (2.0 * std::exp(2.0 * y));
    }
    throw InvalidArgument("unknown model id");
}

// Minimum of the effective potential over the y chart (the admissibility
// threshold for C).
inline double potential_minimum(ModelId m, const ConservedSet& cs) {
    const double A = detail::opt0(cs.A);
    const double B = detail::opt0(cs.B);
    switch (m) {
        case ModelId::bernoulli_classical: return 0.0;
        case ModelId::qubit_quantum: return 2.0 * A * A;
        case ModelId::gaussian_classical: return 0.0;
        case ModelId::gaussian_quantum:
            if (A != 0.0 && B != 0.0) return std::numbers::sqrt2 * std::abs(A) * std::abs(B);
            return 0.0;
    }
    throw InvalidArgument("unknown model id");
}

inline void require_admissible(ModelId m, const ConservedSet& cs) {
    if (!std::isfinite(cs.C) || cs.C < 0.0)
        throw InadmissibleConstants("C must be finite and >= 0");
    const double umin = potential_minimum(m, cs);
    if (cs.C < umin * (1.0 - 1e-12))
        throw InadmissibleConstants("C = " + std::to_string(cs.C) +
                                    " below the potential minimum " + std::to_string(umin));
    if (m != ModelId::gaussian_quantum && cs.B.value_or(0.0) != 0.0)
        throw InadmissibleConstants("constant B only applies to gaussian-quantum");
    if (m == ModelId::bernoulli_classical && cs.A.value_or(0.0) != 0.0)
        throw InadmissibleConstants("bernoulli-classical has no cyclic momentum A");
}

inline OrbitBounds orbit_bounds(ModelId m, const ConservedSet& cs) {
    require_admissible(m, cs);
    const double A = detail::opt0(cs.A);
    const double B = detail::opt0(cs.B);
    const double C = cs.C;
    const double umin = potential_minimum(m, cs);
    const bool at_minimum = C - umin <= 1e-12 * std::max(1.0, C);

    OrbitBounds out;
    out.coordinate = radial_name(m);
    switch (m) {
        case ModelId::bernoulli_classical: {
            if (C == 0.0) {
                out.lower = 0.0;
                out.upper = 1.0;
                out.kind = OrbitKind::equilibrium;  // every point is fixed
            } else {
                out.lower = 0.0;
                out.upper = 1.0;
                out.kind = OrbitKind::boundary_reaching;
            }
            return out;
        }
        case ModelId::qubit_quantum: {
            if (A == 0.0) {
                out.lower = 0.0;
                out.upper = 1.0;
                out.kind = C == 0.0 ? OrbitKind::equilibrium : OrbitKind::boundary_reaching;
                return out;
            }
            if (at_minimum) {
                out.lower = out.upper = 0.5;
                out.kind = OrbitKind::equilibrium;
                return out;
            }
            // sin^2 y <= 1 - 2A^2/C
            const double sb = std::sqrt(1.0 - 2.0 * A * A / C);
            out.lower = 0.5 * (1.0 - sb);
            out.upper = 0.5 * (1.0 + sb);
            out.kind = OrbitKind::bounded_oscillation;
            return out;
        }
        case ModelId::gaussian_classical: {
            if (A == 0.0) {
                out.lower = 0.0;
                out.upper = kInfinity;
                out.kind = C == 0.0 ? OrbitKind::equilibrium : OrbitKind::divergent;
                return out;
            }
            out.lower = 0.0;
            out.upper = std::sqrt(C) / std::abs(A);
            out.kind = OrbitKind::boundary_reaching;  // collapses toward sigma -> 0
            return out;
        }
        case ModelId::gaussian_quantum: {
            if (A == 0.0 && B == 0.0) {
                out.lower = 0.0;
                out.upper = kInfinity;
                out.kind = C == 0.0 ? OrbitKind::equilibrium : OrbitKind::divergent;
                return out;
            }
            if (B == 0.0) {
                out.lower = 0.0;
                out.upper = std::sqrt(C) / std::abs(A);
                out.kind = OrbitKind::boundary_reaching;
                return out;
            }
            if (A == 0.0) {
                out.lower = std::abs(B) / std::sqrt(2.0 * C);
                out.upper = kInfinity;
                out.kind = OrbitKind::divergent;
                return out;
            }
            if (at_minimum) {
                const double se = std::pow(B * B / (2.0 * A * A), 0.25);
                out.lower = out.upper = se;
                out.kind = OrbitKind::equilibrium;
                return out;
            }
            const double disc = std::sqrt(C * C - 2.0 * A * A * B * B);
            out.lower = std::sqrt((C - disc) / (2.0 * A * A));
            out.upper = std::sqrt((C + disc) / (2.0 * A * A));
            out.kind = OrbitKind::bounded_oscillation;
            return out;
        }
    }
    throw InvalidArgument("unknown model id");
}

// Stable equilibria of the radial motion, in the model's natural chart. The
// cyclic coordinates are reported as 0: the equilibrium set is the whole
// cyclic orbit through the listed radial value. Degenerate families where
// every point is fixed (C = 0 with vanishing momenta) return an empty list.
inline std::vector<ChartPoint> equilibria(ModelId m, const ConservedSet& cs) {
    const double A = detail::opt0(cs.A);
    const double B = detail::opt0(cs.B);
    std::vector<ChartPoint> out;
    switch (m) {
        case ModelId::bernoulli_classical:
        case ModelId::gaussian_classical:
            return out;  // free/monotone radial motion, no minimum
        case ModelId::qubit_quantum:
            if (A != 0.0) out.push_back(make_point(m, {0.5, 0.0}));
            return out;
        case ModelId::gaussian_quantum:
            if (A != 0.0 && B != 0.0) {
                const double se = std::pow(B * B / (2.0 * A * A), 0.25);
                out.push_back(make_point(m, {0.0, se, 0.0}));
            }
            return out;
    }
    throw InvalidArgument("unknown model id");
}

// Builds an initial state realizing the given constants, used by the phase
// portrait generators and the test suites. The discrete models start at
// p = 1/2 (y = 0); the Gaussian ones start where the potential carries half
// (classical) or none (quantum, at the minimum) of the energy. radial_sign
// picks the initial direction of the radial motion.
inline GeodesicState state_from_constants(ModelId m, const ConservedSet& cs, int radial_sign = 1) {
    require_admissible(m, cs);
    const double A = detail::opt0(cs.A);
    const double B = detail::opt0(cs.B);
    const double C = cs.C;
    const double sgn = radial_sign >= 0 ? 1.0 : -1.0;
    // Constants at the potential minimum (same tolerance as orbit_bounds) get
    // an exactly vanishing radial velocity; the naive square root would turn
    // start-point rounding into a sqrt(eps)-sized excursion.
    const bool at_min = C - potential_minimum(m, cs) <= 1e-12 * std::max(1.0, C);
    switch (m) {
        case ModelId::bernoulli_classical: {
            // ydot = sqrt(C), pdot = ydot/2 at p = 1/2
            const double pdot = at_min ? 0.0 : sgn * 0.5 * std::sqrt(C);
            return make_state(m, {0.5}, {pdot});
        }
        case ModelId::qubit_quantum: {
            const double phidot = 4.0 * A;
            const double ydot = at_min ? 0.0 : std::sqrt(std::max(0.0, 8.0 * (C - 2.0 * A * A)));
            return make_state(m, {0.5, 0.0}, {sgn * 0.5 * ydot, phidot});
        }
        case ModelId::gaussian_classical: {
            double s0 = 1.0, u0 = 0.0;
            if (A != 0.0) {
                s0 = std::sqrt(C / 2.0) / std::abs(A);  // potential carries C/2 here
                u0 = A * A * s0 * s0;
            }
            const double ydot = at_min ? 0.0 : sgn * std::sqrt(std::max(0.0, 2.0 * (C - u0)));
            return make_state(m, {0.0, s0}, {2.0 * A * s0 * s0, s0 * ydot});
        }
        case ModelId::gaussian_quantum: {
            double s0 = 1.0;
            if (A != 0.0 && B != 0.0)
                s0 = std::pow(B * B / (2.0 * A * A), 0.25);  // potential minimum
            else if (A != 0.0)
                s0 = std::sqrt(C / 2.0) / std::abs(A);
            else if (B != 0.0)
                s0 = std::abs(B) / std::sqrt(C);  // B-wall carries C/2 here
            const double u0 = A * A * s0 * s0 + (B == 0.0 ? 0.0 : B * B / (2.0 * s0 * s0));
            const double ydot = at_min ? 0.0 : sgn * std::sqrt(std::max(0.0, 2.0 * (C - u0)));
            const double alphadot = B / (std::numbers::sqrt2 * s0 * s0);
            return make_state(m, {0.0, s0, 0.0}, {2.0 * A * s0 * s0, s0 * ydot, alphadot});
        }
    }
    throw InvalidArgument("unknown model id");
}

}  // namespace geostat
