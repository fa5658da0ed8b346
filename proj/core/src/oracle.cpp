#include "holex/oracle.hpp"

#include "holex/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace holex::oracle {

namespace {

constexpr double kVertexTol = 1e-9;

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > kMaxBases) return kMaxBases + 1;
    }
    return r;
}

double residual(const ConstraintSystem& cs, const std::vector<double>& x) {
    return max_residual(cs, x);
}

bool same_point(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > kVertexTol) return false;
    }
    return true;
}

// Next k-combination of {0..n-1} in lexicographic order.
bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
    const std::size_t k = c.size();
    for (std::size_t i = k; i-- > 0;) {
        if (c[i] < n - k + i) {
            ++c[i];
            for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

VertexSet enumerate_vertices(const ConstraintSystem& cs) {
    const std::size_t n = cs.num_worlds;
    const std::size_t m = cs.constraints.size();
    if (n > kMaxWorlds || m > kMaxConstraints) {
        throw OracleScaleError("oracle handles at most " + std::to_string(kMaxWorlds) + " worlds and " +
                               std::to_string(kMaxConstraints) + " constraints; got " +
                               std::to_string(n) + " and " + std::to_string(m));
    }

    Eigen::MatrixXd a(m, n);
    Eigen::VectorXd b(m);
    for (std::size_t i = 0; i < m; ++i) {
        b(i) = cs.constraints[i].rhs;
        for (std::size_t j = 0; j < n; ++j) a(i, j) = cs.constraints[i].coeffs[j];
    }

    // Greedily keep a maximal set of linearly independent rows.
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Eigen::MatrixXd trial(kept.size() + 1, n);
        for (std::size_t r = 0; r < kept.size(); ++r) trial.row(r) = a.row(kept[r]);
        trial.row(kept.size()) = a.row(i);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(trial);
        lu.setThreshold(1e-10);
        if (static_cast<std::size_t>(lu.rank()) == kept.size() + 1) kept.push_back(i);
    }
    const std::size_t rank = kept.size();

    {
        Eigen::MatrixXd augmented(m, n + 1);
        augmented << a, b;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(augmented);
        lu.setThreshold(1e-10);
        if (static_cast<std::size_t>(lu.rank()) > rank) return {};  // inconsistent equalities
    }

    if (binomial(n, rank) > kMaxBases) {
        throw OracleScaleError("oracle would need more than " + std::to_string(kMaxBases) +
                               " basis solves");
    }

    Eigen::MatrixXd a_rows(rank, n);
    Eigen::VectorXd b_rows(rank);
    for (std::size_t r = 0; r < rank; ++r) {
        a_rows.row(r) = a.row(kept[r]);
        b_rows(r) = b(kept[r]);
    }

    std::vector<std::vector<double>> points;
    std::vector<std::size_t> cols(rank);
    for (std::size_t i = 0; i < rank; ++i) cols[i] = i;
    Eigen::MatrixXd basis(rank, rank);
    do {
        for (std::size_t c = 0; c < rank; ++c) basis.col(c) = a_rows.col(cols[c]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
        lu.setThreshold(1e-10);
        if (!lu.isInvertible()) continue;
        const Eigen::VectorXd xb = lu.solve(b_rows);
        if ((xb.array() < -kVertexTol).any()) continue;

        std::vector<double> x(n, 0.0);
        for (std::size_t c = 0; c < rank; ++c) x[cols[c]] = std::max(xb(c), 0.0);
        if (residual(cs, x) > kVertexTol) continue;
        if (std::none_of(points.begin(), points.end(),
                         [&](const auto& p) { return same_point(p, x); })) {
            points.push_back(std::move(x));
        }
    } while (next_combination(cols, n));

    std::sort(points.begin(), points.end());
    VertexSet out;
    for (auto& p : points) out.vertices.push_back(Distribution{cs.atoms, std::move(p)});
    return out;
}

double oracle_extremal(const ConstraintSystem& cs, const Atom& phi, Direction direction) {
    const auto vs = enumerate_vertices(cs);
    if (vs.vertices.empty()) throw InfeasibleError("oracle: constraint system has no vertices");
    const auto targets = cs.worlds_entailing(phi);

    double best = direction == Direction::Maximize ? -1.0 : 2.0;
    for (const auto& v : vs.vertices) {
        double value = 0.0;
        for (auto w : targets) value += v.probs[w];
        best = direction == Direction::Maximize ? std::max(best, value) : std::min(best, value);
    }
    return best;
}

std::vector<Distribution> sample_feasible(const ConstraintSystem& cs, std::size_t count,
                                          std::uint64_t seed) {
    if (count == 0) return {};
    const auto vs = enumerate_vertices(cs);
    if (vs.vertices.empty()) throw InfeasibleError("oracle: constraint system has no vertices");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Distribution> samples;
    samples.reserve(count);
    std::vector<double> weights(vs.vertices.size());

    for (std::size_t s = 0; s < count; ++s) {
        // Exponential weights, normalized: a uniform draw from the simplex of
        // mixing coefficients.
        double total = 0.0;
        for (auto& w : weights) {
            w = -std::log(1.0 - unit(rng));
            total += w;
        }
        Distribution d{cs.atoms, std::vector<double>(cs.num_worlds, 0.0)};
        for (std::size_t v = 0; v < vs.vertices.size(); ++v) {
            const double lambda = weights[v] / total;
            for (std::size_t w = 0; w < cs.num_worlds; ++w) d.probs[w] += lambda * vs.vertices[v].probs[w];
        }
        samples.push_back(std::move(d));
    }
    return samples;
}

}  // namespace holex::oracle
