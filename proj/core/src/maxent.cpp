// Maximum-entropy distribution under the rule constraints.
//
// Newton is first run over every world. If it converges and a strictly
// positive exactly feasible point is nearby, that point is the optimum. Otherwise the worlds that every
// consistent distribution sets to zero are found by repeated LPs (each LP
// maximizes the mass on worlds not yet seen positive) and Newton reruns on the
// remaining support.
// On the support the optimum is p(w) ∝ exp(sum_j lambda_j a_jw),
// and lambda minimizes the convex dual
//
//   f(lambda) = log sum_w exp((M^T lambda)_w) - b . lambda
//
// whose gradient M p - b is exactly the constraint residual. Damped Newton
// with pseudo-inverse steps handles linearly dependent rows.

#include "holex/criteria_solver.hpp"
#include "holex/errors.hpp"
#include "holex/lp.hpp"
#include "solver_detail.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace holex {

namespace {

std::vector<std::size_t> feasible_support(const ConstraintSystem& cs, const LpOptions& lp) {
    const auto rows = detail::lp_rows(cs);
    std::vector<bool> positive(cs.num_worlds, false);
    std::size_t found = 0;

    while (found < cs.num_worlds) {
        std::vector<double> objective(cs.num_worlds, 0.0);
        for (std::size_t w = 0; w < cs.num_worlds; ++w) {
            if (!positive[w]) objective[w] = 1.0;
        }
        const auto result = solve_lp(rows, objective, LpSense::Maximize, lp);
        if (result.status == LpStatus::Infeasible) detail::throw_infeasible(cs, lp);
        if (result.status != LpStatus::Optimal) throw InternalError("support LP did not reach an optimum");

        std::size_t added = 0;
        for (std::size_t w = 0; w < cs.num_worlds; ++w) {
            if (!positive[w] && result.x[w] > lp.tolerance) {
                positive[w] = true;
                ++added;
            }
        }
        if (added == 0) break;
        found += added;
    }

    std::vector<std::size_t> support;
    for (std::size_t w = 0; w < cs.num_worlds; ++w) {
        if (positive[w]) support.push_back(w);
    }
    return support;
}

struct DualPoint {
    Eigen::VectorXd p;  // distribution over the support
    double value = 0.0;
};

DualPoint evaluate(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, const Eigen::VectorXd& lambda) {
    const Eigen::VectorXd z = m.transpose() * lambda;
    const double zmax = z.maxCoeff();
    Eigen::VectorXd w = (z.array() - zmax).exp().matrix();
    const double total = w.sum();
    return {w / total, zmax + std::log(total) - b.dot(lambda)};
}

// Max |K^T nu - log p| for the best multipliers nu, where K stacks the
// normalization row and the rule rows over the support.
double stationarity_residual(const Eigen::MatrixXd& m, const Eigen::VectorXd& p) {
    Eigen::MatrixXd k(m.cols(), m.rows() + 1);
    k.col(0).setOnes();
    k.rightCols(m.rows()) = m.transpose();
    const Eigen::VectorXd y = p.array().log().matrix();
    const Eigen::VectorXd nu = k.completeOrthogonalDecomposition().solve(y);
    return (k * nu - y).cwiseAbs().maxCoeff();
}

struct NewtonRun {
    DualPoint point;
    std::size_t iterations = 0;
    double grad_norm = 0.0;
};

NewtonRun newton(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, Eigen::VectorXd lambda,
                 const SolverOptions& options) {
    const auto k = m.rows();
    NewtonRun run{evaluate(m, b, lambda)};

    for (; run.iterations < options.maxent_max_iterations; ++run.iterations) {
        const Eigen::VectorXd mean = m * run.point.p;
        const Eigen::VectorXd grad = mean - b;
        run.grad_norm = k == 0 ? 0.0 : grad.cwiseAbs().maxCoeff();
        if (run.grad_norm <= options.maxent_residual_tol) break;

        const Eigen::MatrixXd hessian =
            m * run.point.p.asDiagonal() * m.transpose() - mean * mean.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hessian);
        const double top = eig.eigenvalues().cwiseAbs().maxCoeff();
        Eigen::VectorXd step = Eigen::VectorXd::Zero(k);
        for (Eigen::Index i = 0; i < k; ++i) {
            const double ev = eig.eigenvalues()(i);
            if (ev > top * 1e-14 && ev > 0.0) {
                const auto v = eig.eigenvectors().col(i);
                step -= (v.dot(grad) / ev) * v;
            }
        }
        double slope = grad.dot(step);
        if (!(slope < 0.0)) {
            step = -grad;
            slope = -grad.squaredNorm();
        }

        // Near the optimum the Armijo decrease drops below the rounding level
        // of f, so a step is also taken when f is flat and the gradient shrinks.
        const double flat = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(run.point.value));
        const auto acceptable = [&](const DualPoint& trial, double t) {
            if (trial.value <= run.point.value + 1e-4 * t * slope) return true;
            return trial.value <= run.point.value + flat &&
                   (m * trial.p - b).cwiseAbs().maxCoeff() < run.grad_norm;
        };
        double t = 1.0;
        DualPoint trial = evaluate(m, b, lambda + t * step);
        while (!acceptable(trial, t) && t > 1e-16) {
            t *= 0.5;
            trial = evaluate(m, b, lambda + t * step);
        }
        if (t <= 1e-16) break;  // no further decrease representable
        lambda += t * step;
        run.point = std::move(trial);
    }
    return run;
}

// True when the min-norm correction of p onto {K x = (1, b)} stays strictly
// positive. A world forced to zero would have a nonnegative row combination
// y^T K vanishing on every exactly feasible point, which no positive point
// can satisfy.
bool certifies_full_support(const Eigen::MatrixXd& m, const Eigen::VectorXd& b, const Eigen::VectorXd& p) {
    Eigen::MatrixXd k(m.rows() + 1, m.cols());
    k.row(0).setOnes();
    k.bottomRows(m.rows()) = m;
    Eigen::VectorXd rhs(m.rows() + 1);
    rhs(0) = 1.0;
    rhs.tail(m.rows()) = b;
    const Eigen::VectorXd q = p + k.completeOrthogonalDecomposition().solve(rhs - k * p);
    const double residual = (k * q - rhs).cwiseAbs().maxCoeff();
    return q.minCoeff() > 100.0 * std::max(residual, std::numeric_limits<double>::epsilon());
}

}  // namespace

MaxEntSolution solve_maxent(const ConstraintSystem& cs, const SolverOptions& options) {
    std::vector<const Constraint*> rule_rows;
    for (const auto& c : cs.constraints) {
        if (!c.origin.is_normalization()) rule_rows.push_back(&c);
    }
    const auto k = static_cast<Eigen::Index>(rule_rows.size());

    auto restrict_to = [&](const std::vector<std::size_t>& support, Eigen::MatrixXd& m, Eigen::VectorXd& b) {
        const auto s = static_cast<Eigen::Index>(support.size());
        m.resize(k, s);
        b.resize(k);
        for (Eigen::Index j = 0; j < k; ++j) {
            b(j) = rule_rows[j]->rhs;
            for (Eigen::Index i = 0; i < s; ++i) m(j, i) = rule_rows[j]->coeffs[support[i]];
        }
    };

    Eigen::VectorXd lambda0 = Eigen::VectorXd::Zero(k);
    if (options.maxent_seed != 0) {
        std::mt19937_64 rng(options.maxent_seed);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Eigen::Index j = 0; j < k; ++j) lambda0(j) = normal(rng);
    }

    std::vector<std::size_t> support(cs.num_worlds);
    for (std::size_t w = 0; w < cs.num_worlds; ++w) support[w] = w;
    Eigen::MatrixXd m;
    Eigen::VectorXd b;
    restrict_to(support, m, b);
    NewtonRun run = newton(m, b, lambda0, options);
    std::size_t iterations = run.iterations;

    const bool interior =
        run.grad_norm <= options.maxent_residual_tol && certifies_full_support(m, b, run.point.p);
    if (!interior) {
        const LpOptions lp{options.feasibility_tol};
        support = feasible_support(cs, lp);
        if (support.empty()) detail::throw_infeasible(cs, lp);
        restrict_to(support, m, b);
        run = newton(m, b, lambda0, options);
        iterations += run.iterations;
    }

    MaxEntSolution out;
    out.iterations = iterations;
    std::vector<double> probs(cs.num_worlds, 0.0);
    for (std::size_t i = 0; i < support.size(); ++i) probs[support[i]] = run.point.p(static_cast<Eigen::Index>(i));

    out.constraint_residual = max_residual(cs, probs);
    out.stationarity_residual = stationarity_residual(m, run.point.p);
    out.forced_zero_worlds = cs.num_worlds - support.size();
    out.distribution = Distribution{cs.atoms, std::move(probs)};

    if (out.constraint_residual > kMaxEntConstraintTarget ||
        out.stationarity_residual > kMaxEntStationarityTarget) {
        std::ostringstream os;
        os << "maximum-entropy solve did not converge after " << out.iterations
           << " iterations (constraint residual " << out.constraint_residual
           << ", stationarity residual " << out.stationarity_residual << ")";
        throw ConvergenceError(os.str(), out.constraint_residual, out.stationarity_residual);
    }
    return out;
}

}  // namespace holex
