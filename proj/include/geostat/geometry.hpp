#pragma once

// Chart-level differential geometry: value types for points, tangent vectors,
// metrics and connection coefficients, plus the generic operations every model
// shares (metric inversion, finite-difference Christoffel symbols, geodesic
// right-hand side). Charts here are open subsets of R^d with d <= 3.

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geostat/errors.hpp"

namespace geostat {

inline constexpr int kMaxDim = 3;

struct ChartPoint {
    std::string chart_id;
    std::vector<double> coords;

    int dim() const { return static_cast<int>(coords.size()); }
};

struct TangentVector {
    std::string chart_id;
    std::vector<double> components;

    int dim() const { return static_cast<int>(components.size()); }
};

// Symmetric positive definite d x d matrix of metric coefficients at a point.
struct MetricValue {
    Eigen::MatrixXd matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

// Connection coefficients gamma[k][i][j] with upper index k, symmetric in the
// two lower indices by construction (set() writes both (i,j) and (j,i)).
class ChristoffelValue {
public:
    ChristoffelValue() : dim_(0) { data_.fill(0.0); }
    explicit ChristoffelValue(int dim) : dim_(dim) { data_.fill(0.0); }

    int dim() const { return dim_; }

    double at(int k, int i, int j) const { return data_[index(k, i, j)]; }

    void set(int k, int i, int j, double value) {
        data_[index(k, i, j)] = value;
        data_[index(k, j, i)] = value;
    }

private:
    static std::size_t index(int k, int i, int j) {
        return static_cast<std::size_t>((k * kMaxDim + i) * kMaxDim + j);
    }

    int dim_;
    std::array<double, kMaxDim * kMaxDim * kMaxDim> data_;
};

struct GeodesicState {
    ChartPoint point;
    TangentVector velocity;
    double time = 0.0;
};

// Time derivative of a GeodesicState under geodesic flow.
struct StateDerivative {
    TangentVector velocity;
    TangentVector acceleration;
};

using MetricFn = std::function<MetricValue(const ChartPoint&)>;

namespace detail {

inline std::string describe_matrix(const Eigen::MatrixXd& m) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%ldx%ld matrix", static_cast<long>(m.rows()),
                  static_cast<long>(m.cols()));
    return buf;
}

// acceleration_k = -gamma^k_{ij} v^i v^j
inline void geodesic_acceleration(const ChristoffelValue& gamma, const double* v, double* out) {
    const int d = gamma.dim();
    for (int k = 0; k < d; ++k) {
        double acc = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) acc += gamma.at(k, i, j) * v[i] * v[j];
        out[k] = -acc;
    }
}

}  // namespace detail

// Inverse of a symmetric positive definite metric. The eigenvalue check doubles
// as the boundary detector: metrics of the catalog degenerate or blow up only
// at chart boundaries.
inline MetricValue invert_metric(const MetricValue& m) {
    const int d = m.dim();
    if (d < 1 || d > kMaxDim || m.matrix.cols() != d)
        throw DimensionMismatch("invert_metric expects a square matrix of dimension 1..3, got " +
                                detail::describe_matrix(m.matrix));
    if (!m.matrix.allFinite()) throw NonFiniteValue("metric has non-finite entries");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix);
    if (es.eigenvalues().minCoeff() <= 1e-14)
        throw SingularMetric("eigenvalue " + std::to_string(es.eigenvalues().minCoeff()) +
                             " <= 1e-14; point is at or beyond the chart boundary");

    MetricValue inv;
    inv.matrix = m.matrix.inverse();
    inv.matrix = ((inv.matrix + inv.matrix.transpose()) / 2.0).eval();
    return inv;
}

// Christoffel symbols from central differences of the metric,
//   gamma^k_{ij} = 1/2 g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij}),
// with per-coordinate step h * max(1, |coordinate|). Stencil points that leave
// the chart (the metric callback throws OutOfDomain) surface as
// BoundaryProximity.
inline ChristoffelValue christoffel_fd(const MetricFn& metric_fn, const ChartPoint& p,
                                       double h = 1e-5) {
    const int d = p.dim();
    if (d < 1 || d > kMaxDim) throw DimensionMismatch("chart dimension must be 1..3");
    if (!(h > 0)) throw InvalidArgument("finite-difference step must be positive");

    const MetricValue g0 = metric_fn(p);
    if (g0.dim() != d) throw DimensionMismatch("metric dimension does not match the point");
    const MetricValue ginv = invert_metric(g0);

    // dg[l] = d g / d x^l at p
    std::array<Eigen::MatrixXd, kMaxDim> dg;
    for (int l = 0; l < d; ++l) {
        const double step = h * std::max(1.0, std::abs(p.coords[l]));
        ChartPoint plus = p;
        ChartPoint minus = p;
        plus.coords[l] += step;
        minus.coords[l] -= step;
        try {
            dg[l] = (metric_fn(plus).matrix - metric_fn(minus).matrix) / (2.0 * step);
        } catch (const OutOfDomain& e) {
            throw BoundaryProximity("finite-difference stencil leaves the chart: " +
                                    std::string(e.what()));
        }
        if (!dg[l].allFinite())
            throw BoundaryProximity("metric derivative non-finite near the chart boundary");
    }

    ChristoffelValue gamma(d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                double sum = 0.0;
                for (int l = 0; l < d; ++l)
                    sum += ginv.matrix(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                gamma.set(k, i, j, 0.5 * sum);
            }
    return gamma;
}

// First-order reduction of the geodesic equation: returns (xdot, vdot) with
// vdot^k = -gamma^k_{ij} v^i v^j. gamma must be evaluated at s.point.
inline StateDerivative geodesic_rhs(const ChristoffelValue& gamma, const GeodesicState& s) {
    const int d = gamma.dim();
    if (s.point.dim() != d || s.velocity.dim() != d)
        throw DimensionMismatch("state dimension " + std::to_string(s.point.dim()) + "/" +
                                std::to_string(s.velocity.dim()) +
                                " does not match connection dimension " + std::to_string(d));
    if (s.point.chart_id != s.velocity.chart_id)
        throw DimensionMismatch("point chart '" + s.point.chart_id + "' != velocity chart '" +
                                s.velocity.chart_id + "'");

    StateDerivative out;
    out.velocity = s.velocity;
    out.acceleration.chart_id = s.velocity.chart_id;
    out.acceleration.components.resize(static_cast<std::size_t>(d));
    detail::geodesic_acceleration(gamma, s.velocity.components.data(),
                                  out.acceleration.components.data());
    return out;
}

}  // namespace geostat
