#include "holex/lp.hpp"

#include "holex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace holex {

namespace {

constexpr double kPivotTol = 1e-7;

class Tableau {
public:
    Tableau(std::span<const LpRow> rows, std::size_t num_cols)
        : m_(rows.size()), n_(num_cols), width_(num_cols + rows.size() + 1),
          data_((m_ + 1) * width_, 0.0), basis_(m_) {
        for (std::size_t i = 0; i < m_; ++i) {
            const auto& row = rows[i];
            if (row.coeffs.size() != n_) throw std::invalid_argument("LP row has wrong width");
            const double sign = row.rhs < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign * row.coeffs[j];
            at(i, n_ + i) = 1.0;
            rhs(i) = sign * row.rhs;
            basis_[i] = n_ + i;
        }
    }

    double& at(std::size_t i, std::size_t j) { return data_[i * width_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * width_ + j]; }
    double& rhs(std::size_t i) { return data_[i * width_ + width_ - 1]; }
    double rhs(std::size_t i) const { return data_[i * width_ + width_ - 1]; }
    double& cost(std::size_t j) { return at(m_, j); }
    // The objective row's rhs cell holds minus the current objective value.
    double objective() const { return -rhs(m_); }

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }
    std::size_t basic(std::size_t i) const { return basis_[i]; }
    bool is_artificial(std::size_t j) const { return j >= n_; }

    void set_costs(std::span<const double> c) {
        // c covers original and artificial columns; reduce against the basis.
        for (std::size_t j = 0; j + 1 < width_; ++j) cost(j) = c[j];
        rhs(m_) = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = c[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) at(m_, j) -= cb * at(i, j);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        const double p = at(r, c);
        for (std::size_t j = 0; j < width_; ++j) at(r, j) /= p;
        at(r, c) = 1.0;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            double* dst = &data_[i * width_];
            const double* src = &data_[r * width_];
            for (std::size_t j = 0; j < width_; ++j) dst[j] -= f * src[j];
            dst[c] = 0.0;
        }
        basis_[r] = c;
    }

    enum class Outcome { Optimal, Unbounded };

    // Minimizes the current cost row over columns [0, allowed).
    Outcome optimize(std::size_t allowed, const LpOptions& opt, std::size_t& iterations) {
        const double tol = opt.tolerance;
        const std::size_t budget = 50 * (width_ + m_) + 1000;
        std::size_t degenerate_run = 0;
        bool bland = false;

        for (;;) {
            if (++iterations > budget) throw InternalError("simplex iteration budget exhausted");

            std::size_t enter = allowed;
            double best = -tol;
            for (std::size_t j = 0; j < allowed; ++j) {
                const double d = cost(j);
                if (bland) {
                    if (d < -tol) {
                        enter = j;
                        break;
                    }
                } else if (d < best) {
                    best = d;
                    enter = j;
                }
            }
            if (enter == allowed) return Outcome::Optimal;

            // Two-pass (Harris) ratio test: find the smallest ratio with a
            // small rhs relaxation, then take the largest pivot among rows
            // within that bound. Ties go to the smallest basic index.
            double bound = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a > kPivotTol) bound = std::min(bound, (std::max(rhs(i), 0.0) + tol) / a);
            }
            if (bound == std::numeric_limits<double>::infinity()) return Outcome::Unbounded;

            std::size_t leave = m_;
            double ratio = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a <= kPivotTol) continue;
                const double q = std::max(rhs(i), 0.0) / a;
                if (q > bound) continue;
                const bool better = leave == m_ || a > at(leave, enter) ||
                                    (a == at(leave, enter) && basis_[i] < basis_[leave]);
                if (better) {
                    leave = i;
                    ratio = q;
                }
            }
            if (leave == m_) return Outcome::Unbounded;

            if (ratio <= tol) {
                if (++degenerate_run > opt.degenerate_limit) bland = true;
            } else {
                degenerate_run = 0;
            }
            pivot(leave, enter);
        }
    }

private:
    std::size_t m_;
    std::size_t n_;
    std::size_t width_;
    std::vector<double> data_;
    std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve_lp(std::span<const LpRow> rows, std::span<const double> objective, LpSense sense,
                  const LpOptions& options) {
    if (rows.empty()) throw std::invalid_argument("LP has no rows");
    const std::size_t n = rows.front().coeffs.size();
    if (!objective.empty() && objective.size() != n) {
        throw std::invalid_argument("objective has wrong width");
    }

    Tableau t(rows, n);
    const std::size_t m = t.rows();
    LpResult result;

    // Phase 1: minimize the sum of artificials.
    std::vector<double> phase1(n + m, 0.0);
    for (std::size_t j = n; j < n + m; ++j) phase1[j] = 1.0;
    t.set_costs(phase1);
    t.optimize(n + m, options, result.iterations);
    if (t.objective() > options.tolerance) {
        result.status = LpStatus::Infeasible;
        return result;
    }

    // Pivot remaining artificials out of the basis; rows where that is
    // impossible are redundant and stay inert (artificials never re-enter).
    for (std::size_t i = 0; i < m; ++i) {
        if (!t.is_artificial(t.basic(i))) continue;
        std::size_t col = n;
        double best = options.tolerance;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(t.at(i, j)) > best) {
                best = std::abs(t.at(i, j));
                col = j;
            }
        }
        if (col < n) t.pivot(i, col);
    }

    // Phase 2.
    std::vector<double> phase2(n + m, 0.0);
    const double sign = sense == LpSense::Maximize ? -1.0 : 1.0;
    for (std::size_t j = 0; j < objective.size(); ++j) phase2[j] = sign * objective[j];
    t.set_costs(phase2);
    if (t.optimize(n, options, result.iterations) == Tableau::Outcome::Unbounded) {
        result.status = LpStatus::Unbounded;
        return result;
    }

    result.status = LpStatus::Optimal;
    result.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto j = t.basic(i);
        if (j < n) result.x[j] = std::max(t.rhs(i), 0.0);
    }
    result.value = 0.0;
    for (std::size_t j = 0; j < objective.size(); ++j) result.value += objective[j] * result.x[j];
    return result;
}

}  // namespace holex
