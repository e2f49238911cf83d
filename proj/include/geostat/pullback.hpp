#pragma once

// Numeric pull-back of the hermitean tensor of a statistical model
// psi = sqrt(p) e^{i alpha}:
//
//   g_ij     = 1/4 E[d_i lnp d_j lnp] + E[d_i a d_j a] - E[d_i a] E[d_j a]
//   omega_ij = E[d_j lnp d_i a] - E[d_i lnp d_j a]
//
// (orientation fixed so that the gaussian-quantum model yields
// omega(d_alpha, d_mu) = +1). With a constant phase, omega vanishes and g is
// the 1/4-normalized Fisher-Rao metric. Expectations are exact sums over
// finite sample spaces, or Gauss-Hermite quadrature against the model's own
// Gaussian weight on the real line. This engine is the independent oracle for
// every closed-form metric in the model catalog.

#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "geostat/models.hpp"

namespace geostat {

struct RealLine {};

using SampleSpace = std::variant<std::vector<double>, RealLine>;

// A parametric family p(x; theta), alpha(x; theta) over a one-dimensional
// sample space. Gradients are with respect to theta; when the analytic
// callbacks are absent they fall back to central differences with relative
// step 1e-6. Continuous models must expose gauss_center = theta -> (mean,
// stddev) of their density so the quadrature can be placed.
struct StatisticalModelSpec {
    SampleSpace sample_space;
    std::function<double(double, std::span<const double>)> log_density;
    std::function<double(double, std::span<const double>)> phase;
    int param_dim = 0;
    std::function<void(double, std::span<const double>, std::span<double>)> grad_log_density;
    std::function<void(double, std::span<const double>, std::span<double>)> grad_phase;
    std::function<std::pair<double, double>(std::span<const double>)> gauss_center;
};

enum class QuadratureKind { exact_sum, gauss_hermite };

// Gauss-Hermite counts in [16, 256] cover the catalog to machine precision;
// 64 is the default. Smaller counts are allowed for diagnostics.
struct QuadratureRule {
    QuadratureKind kind = QuadratureKind::exact_sum;
    int node_count = 64;
};

struct HermitianPullback {
    Eigen::MatrixXd g;      // symmetric, positive semidefinite
    Eigen::MatrixXd omega;  // antisymmetric
};

namespace detail {

struct GaussHermiteTable {
    std::vector<double> nodes;    // roots t_i of H_n, weight exp(-t^2)
    std::vector<double> weights;  // normalized so they sum to 1
};

// Golub-Welsch: nodes are the eigenvalues of the Jacobi matrix with
// off-diagonal sqrt(k/2); weights come from the first eigenvector components.
inline std::shared_ptr<const GaussHermiteTable> gauss_hermite_table(int n) {
    if (n < 1 || n > 1024) throw InvalidArgument("gauss-hermite node count must be in [1, 1024]");
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const GaussHermiteTable>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(k / 2.0);
        jacobi(k - 1, k) = b;
        jacobi(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    auto table = std::make_shared<GaussHermiteTable>();
    table->nodes.resize(static_cast<std::size_t>(n));
    table->weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        table->nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        table->weights[static_cast<std::size_t>(i)] = v0 * v0;  // w_i / sqrt(pi)
    }
    cache.emplace(n, table);
    return table;
}

inline bool is_finite_space(const SampleSpace& s) {
    return std::holds_alternative<std::vector<double>>(s);
}

}  // namespace detail

// E_p[f] at theta: exact sum over finite sample spaces, Gauss-Hermite with the
// change of variables x = mean + sqrt(2) stddev t for Gaussian-weighted
// integrands (exact for polynomial f up to degree 2 * node_count - 1).
inline double expectation(const StatisticalModelSpec& spec,
                          const std::function<double(double)>& f, std::span<const double> theta,
                          const QuadratureRule& q) {
    if (!spec.log_density) throw GradientUnavailable("spec has no log_density callback");
    if (static_cast<int>(theta.size()) != spec.param_dim)
        throw DimensionMismatch("theta size does not match param_dim");

    double acc = 0.0;
    if (detail::is_finite_space(spec.sample_space)) {
        if (q.kind != QuadratureKind::exact_sum)
            throw QuadratureMismatch("finite sample space requires the exact-sum rule");
        for (double x : std::get<std::vector<double>>(spec.sample_space)) {
            const double p = std::exp(spec.log_density(x, theta));
            acc += p * f(x);
        }
    } else {
        if (q.kind != QuadratureKind::gauss_hermite)
            throw QuadratureMismatch("continuous sample space requires the gauss-hermite rule");
        if (!spec.gauss_center)
            throw QuadratureMismatch("continuous spec has no gauss_center callback");
        const auto [mean, stddev] = spec.gauss_center(theta);
        const auto table = detail::gauss_hermite_table(q.node_count);
        for (std::size_t i = 0; i < table->nodes.size(); ++i)
            acc += table->weights[i] * f(mean + std::numbers::sqrt2 * stddev * table->nodes[i]);
    }
    if (!std::isfinite(acc)) throw NonFiniteValue("expectation is not finite");
    return acc;
}

namespace detail {

using GradFn = std::function<void(double, std::span<const double>, std::span<double>)>;

// Central differences in theta with relative step 1e-6.
inline GradFn fd_gradient(const std::function<double(double, std::span<const double>)>& f,
                          int param_dim) {
    return [f, param_dim](double x, std::span<const double> theta, std::span<double> out) {
        std::vector<double> shifted(theta.begin(), theta.end());
        for (int i = 0; i < param_dim; ++i) {
            const double h = 1e-6 * std::max(1.0, std::abs(theta[static_cast<std::size_t>(i)]));
            const double orig = shifted[static_cast<std::size_t>(i)];
            shifted[static_cast<std::size_t>(i)] = orig + h;
            const double fp = f(x, shifted);
            shifted[static_cast<std::size_t>(i)] = orig - h;
            const double fm = f(x, shifted);
            shifted[static_cast<std::size_t>(i)] = orig;
            out[static_cast<std::size_t>(i)] = (fp - fm) / (2.0 * h);
        }
    };
}

}  // namespace detail

inline HermitianPullback pullback_hermitian(const StatisticalModelSpec& spec,
                                            std::span<const double> theta,
                                            const QuadratureRule& q) {
    const int d = spec.param_dim;
    if (d < 1 || d > kMaxDim) throw DimensionMismatch("param_dim must be 1..3");
    if (static_cast<int>(theta.size()) != d)
        throw DimensionMismatch("theta size does not match param_dim");
    if (!spec.log_density) throw GradientUnavailable("spec has no log_density callback");
    if (!spec.phase) throw GradientUnavailable("spec has no phase callback");

    const detail::GradFn grad_logp =
        spec.grad_log_density ? spec.grad_log_density : detail::fd_gradient(spec.log_density, d);
    const detail::GradFn grad_phase =
        spec.grad_phase ? spec.grad_phase : detail::fd_gradient(spec.phase, d);

    Eigen::MatrixXd e_aa = Eigen::MatrixXd::Zero(d, d);  // E[d_i lnp d_j lnp]
    Eigen::MatrixXd e_bb = Eigen::MatrixXd::Zero(d, d);  // E[d_i a d_j a]
    Eigen::MatrixXd e_ab = Eigen::MatrixXd::Zero(d, d);  // E[d_i lnp d_j a]
    Eigen::VectorXd e_b = Eigen::VectorXd::Zero(d);      // E[d_i a]

    double total_weight = 0.0;
    std::vector<double> a(static_cast<std::size_t>(d)), b(static_cast<std::size_t>(d));
    auto accumulate = [&](double x, double weight) {
        grad_logp(x, theta, a);
        grad_phase(x, theta, b);
        for (int i = 0; i < d; ++i) {
            e_b(i) += weight * b[static_cast<std::size_t>(i)];
            for (int j = 0; j < d; ++j) {
                e_aa(i, j) += weight * a[static_cast<std::size_t>(i)] * a[static_cast<std::size_t>(j)];
                e_bb(i, j) += weight * b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
                e_ab(i, j) += weight * a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
            }
        }
        total_weight += weight;
    };

    if (detail::is_finite_space(spec.sample_space)) {
        if (q.kind != QuadratureKind::exact_sum)
            throw QuadratureMismatch("finite sample space requires the exact-sum rule");
        for (double x : std::get<std::vector<double>>(spec.sample_space)) {
            const double lp = spec.log_density(x, theta);
            if (!std::isfinite(lp))
                throw NonFiniteValue("log-density not finite; densities must be positive");
            accumulate(x, std::exp(lp));
        }
        if (std::abs(total_weight - 1.0) > 1e-12)
            throw InvalidArgument("density does not sum to 1 at the tested theta");
    } else {
        if (q.kind != QuadratureKind::gauss_hermite)
            throw QuadratureMismatch("continuous sample space requires the gauss-hermite rule");
        if (!spec.gauss_center)
            throw QuadratureMismatch("continuous spec has no gauss_center callback");
        const auto [mean, stddev] = spec.gauss_center(theta);
        const auto table = detail::gauss_hermite_table(q.node_count);
        for (std::size_t i = 0; i < table->nodes.size(); ++i)
            accumulate(mean + std::numbers::sqrt2 * stddev * table->nodes[i], table->weights[i]);
    }

    HermitianPullback out;
    out.g = 0.25 * e_aa + e_bb - e_b * e_b.transpose();
    out.g = (0.5 * (out.g + out.g.transpose())).eval();
    out.omega = (e_ab.transpose() - e_ab).eval();
    if (!out.g.allFinite() || !out.omega.allFinite())
        throw NonFiniteValue("pull-back tensor has non-finite entries");
    return out;
}

// Catalog specs with analytic gradients, matching the closed-form metrics.
inline StatisticalModelSpec catalog_spec(ModelId m) {
    StatisticalModelSpec spec;
    spec.param_dim = model_dim(m);
    switch (m) {
        case ModelId::bernoulli_classical:
        case ModelId::qubit_quantum: {
            spec.sample_space = std::vector<double>{0.0, 1.0};
            spec.log_density = [](double x, std::span<const double> th) {
                return x < 0.5 ? std::log(th[0]) : std::log(1.0 - th[0]);
            };
            spec.grad_log_density = [](double x, std::span<const double> th, std::span<double> out) {
                out[0] = x < 0.5 ? 1.0 / th[0] : -1.0 / (1.0 - th[0]);
                for (std::size_t i = 1; i < out.size(); ++i) out[i] = 0.0;
            };
            if (m == ModelId::qubit_quantum) {
                spec.phase = [](double x, std::span<const double> th) {
                    return x < 0.5 ? 0.0 : th[1];
                };
                spec.grad_phase = [](double x, std::span<const double>, std::span<double> out) {
                    out[0] = 0.0;
                    out[1] = x < 0.5 ? 0.0 : 1.0;
                };
            } else {
                spec.phase = [](double, std::span<const double>) { return 0.0; };
                spec.grad_phase = [](double, std::span<const double>, std::span<double> out) {
                    out[0] = 0.0;
                };
            }
            return spec;
        }
        case ModelId::gaussian_classical:
        case ModelId::gaussian_quantum: {
            spec.sample_space = RealLine{};
            spec.log_density = [](double x, std::span<const double> th) {
                const double z = (x - th[0]) / th[1];
                return -0.5 * z * z - std::log(th[1]) - 0.5 * std::log(2.0 * std::numbers::pi);
            };
            spec.grad_log_density = [](double x, std::span<const double> th, std::span<double> out) {
                const double mu = th[0], s = th[1], dx = x - mu;
                out[0] = dx / (s * s);
                out[1] = (dx * dx - s * s) / (s * s * s);
                for (std::size_t i = 2; i < out.size(); ++i) out[i] = 0.0;
            };
            spec.gauss_center = [](std::span<const double> th) {
                return std::make_pair(th[0], th[1]);
            };
            if (m == ModelId::gaussian_quantum) {
                spec.phase = [](double x, std::span<const double> th) { return th[2] * x; };
                spec.grad_phase = [](double x, std::span<const double>, std::span<double> out) {
                    out[0] = 0.0;
                    out[1] = 0.0;
                    out[2] = x;
                };
            } else {
                spec.phase = [](double, std::span<const double>) { return 0.0; };
                spec.grad_phase = [](double, std::span<const double>, std::span<double> out) {
                    out[0] = 0.0;
                    out[1] = 0.0;
                };
            }
            return spec;
        }
    }
    throw InvalidArgument("unknown model id");
}

// Max deviations between the numeric pull-back and the closed forms over a
// grid of interior points.
struct DeviationEntry {
    ModelId model = ModelId::bernoulli_classical;
    double max_metric_dev = 0.0;
    double max_symplectic_dev = 0.0;
};

// The bernoulli closed form is the un-normalized Fisher-Rao metric; the
// engine reports the pull-back value, which is 1/4 of it, so the comparison
// applies the explicit factor 4 for that model only.
inline double closed_form_scale(ModelId m) {
    return m == ModelId::bernoulli_classical ? 4.0 : 1.0;
}

inline DeviationEntry verify_against_closed_form(ModelId m, std::span<const ChartPoint> grid,
                                                 int gauss_hermite_nodes = 64) {
    const StatisticalModelSpec spec = catalog_spec(m);
    QuadratureRule rule;
    rule.kind = detail::is_finite_space(spec.sample_space) ? QuadratureKind::exact_sum
                                                           : QuadratureKind::gauss_hermite;
    rule.node_count = gauss_hermite_nodes;

    DeviationEntry entry;
    entry.model = m;
    const double scale = closed_form_scale(m);
    for (const ChartPoint& p : grid) {
        require_interior(m, p);
        const HermitianPullback num = pullback_hermitian(spec, p.coords, rule);
        const Eigen::MatrixXd g_closed = metric_at(m, p).matrix;
        entry.max_metric_dev = std::max(
            entry.max_metric_dev, (scale * num.g - g_closed).cwiseAbs().maxCoeff());
        const Eigen::MatrixXd omega_closed =
            is_quantum(m) ? symplectic_at(m, p)
                          : Eigen::MatrixXd::Zero(model_dim(m), model_dim(m)).eval();
        entry.max_symplectic_dev = std::max(
            entry.max_symplectic_dev, (num.omega - omega_closed).cwiseAbs().maxCoeff());
    }
    return entry;
}

inline std::vector<ChartPoint> default_verification_grid(ModelId m) {
    std::vector<ChartPoint> grid;
    switch (m) {
        case ModelId::bernoulli_classical:
            for (int i = 1; i <= 9; ++i) grid.push_back(make_point(m, {0.1 * i}));
            return grid;
        case ModelId::qubit_quantum:
            for (double p : {0.15, 0.5, 0.85})
                for (double phi : {0.0, 2.0944, 4.18879}) grid.push_back(make_point(m, {p, phi}));
            return grid;
        case ModelId::gaussian_classical:
            for (double mu : {-1.0, 0.0, 3.0})
                for (double s : {0.5, 1.0, 2.0}) grid.push_back(make_point(m, {mu, s}));
            return grid;
        case ModelId::gaussian_quantum: {
            const double mus[] = {-1.0, 0.0, 3.0};
            const double sigmas[] = {0.5, 1.0, 2.0};
            const double alphas[] = {-0.7, 0.0, 0.7};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    grid.push_back(make_point(m, {mus[i], sigmas[j], alphas[(i + j) % 3]}));
            return grid;
        }
    }
    throw InvalidArgument("unknown model id");
}

inline std::vector<DeviationEntry> verify_all_models(int gauss_hermite_nodes = 64) {
    std::vector<DeviationEntry> out;
    for (ModelId m : kAllModels) {
        const auto grid = default_verification_grid(m);
        out.push_back(verify_against_closed_form(m, grid, gauss_hermite_nodes));
    }
    return out;
}

}  // namespace geostat
