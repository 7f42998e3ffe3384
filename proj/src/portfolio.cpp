#include "causal/error.hpp"
#include "causal/finance.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>

namespace causal
{

namespace
{

double sign(double v) noexcept
{
    return static_cast<double>((v > 0.0) - (v < 0.0));
}

void check_dims(std::size_t n, std::span<const double> a, const char *what)
{
    if (a.size() != n) {
        fail(Errc::LengthMismatch, std::string(what) + " length does not match the asset count");
    }
}

std::vector<double> to_weights(const Eigen::VectorXd &x)
{
    std::vector<double> w(static_cast<std::size_t>(x.size()));
    double total = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        w[static_cast<std::size_t>(i)] = std::max(0.0, x(i));
        total += w[static_cast<std::size_t>(i)];
    }
    for (double &v : w) {
        v /= total;
    }
    return w;
}

} // namespace

void CoDependenceMatrix::validate() const
{
    const auto n = static_cast<Eigen::Index>(assets.size());
    if (values.rows() != n || values.cols() != n) {
        fail(Errc::InvalidArgument, "co-dependence matrix does not match the asset count");
    }
    if (base_kind(kind) != CodependenceKind::correlation) {
        if (!sign_source) {
            fail(Errc::InvalidArgument, "a correlation sign source is required for this measure");
        }
        if (sign_source->rows() != n || sign_source->cols() != n) {
            fail(Errc::InvalidArgument, "sign source does not match the asset count");
        }
    }
}

Eigen::MatrixXd substituted_matrix(const CoDependenceMatrix &codep)
{
    codep.validate();
    Eigen::MatrixXd theta = codep.values;
    if (base_kind(codep.kind) != CodependenceKind::correlation) {
        theta = theta.binaryExpr(*codep.sign_source, [](double psi, double rho) { return psi * sign(rho); });
    }
    theta.diagonal().setOnes();
    return theta;
}

Eigen::MatrixXd repair_psd(const Eigen::MatrixXd &m, double floor)
{
    if (m.rows() != m.cols()) {
        fail(Errc::InvalidArgument, "matrix must be square");
    }
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    const Eigen::VectorXd values = eig.eigenvalues();
    // Eigenvalues within rounding of zero belong to a semidefinite matrix and
    // are left alone; only clearly negative ones are lifted to the floor.
    const double tol = static_cast<double>(m.rows()) * std::numeric_limits<double>::epsilon() *
                       std::max(values.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    Eigen::VectorXd lift = Eigen::VectorXd::Zero(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values(i) < -tol) {
            lift(i) = floor - values(i);
        }
    }
    if (lift.isZero()) {
        return sym;
    }
    // Adding the lift along the clipped eigenvectors only, rather than
    // rebuilding V diag(values) V^T, leaves the untouched spectrum exact.
    const Eigen::MatrixXd &v = eig.eigenvectors();
    const Eigen::MatrixXd repaired = sym + v * lift.asDiagonal() * v.transpose();
    return 0.5 * (repaired + repaired.transpose());
}

double portfolio_variance(std::span<const double> weights, std::span<const double> vols,
                          const CoDependenceMatrix &codep)
{
    const std::size_t n = codep.assets.size();
    check_dims(n, weights, "weight");
    check_dims(n, vols, "volatility");
    const Eigen::MatrixXd theta = substituted_matrix(codep);
    double total = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        scale += std::abs(weights[i] * vols[i]);
        for (std::size_t j = 0; j < n; ++j) {
            total += weights[i] * weights[j] * vols[i] * vols[j] *
                     theta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    if (total < 0.0) {
        if (total < -1e-12 * scale * scale) {
            fail(Errc::NegativeVariance, "substituted co-dependence matrix gives a negative variance");
        }
        return 0.0;
    }
    return total;
}

Eigen::VectorXd solve_nonnegative_qp(const Eigen::MatrixXd &Q, const Eigen::MatrixXd &A,
                                     const Eigen::VectorXd &b, Eigen::VectorXd x)
{
    const Eigen::Index n = Q.rows();
    const Eigen::Index m = A.rows();
    if (Q.cols() != n || A.cols() != n || b.size() != m || x.size() != n) {
        fail(Errc::InvalidArgument, "quadratic program dimensions disagree");
    }
    const double feas = 1e-9 * (1.0 + b.cwiseAbs().maxCoeff());
    if ((A * x - b).cwiseAbs().maxCoeff() > feas || x.minCoeff() < 0.0) {
        fail(Errc::InvalidArgument, "quadratic program start point is infeasible");
    }
    const double qscale = std::max(Q.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    const double mult_tol = 1e-12 * qscale;

    std::vector<bool> active(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        active[static_cast<std::size_t>(i)] = x(i) == 0.0;
    }

    // After a full (unblocked) step x minimizes the objective on the current
    // face, so the next iteration only inspects the multipliers.
    bool on_face_minimum = false;
    const Eigen::Index max_iter = 50 * (n + 1);
    for (Eigen::Index iter = 0; iter < max_iter; ++iter) {
        std::vector<Eigen::Index> free;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!active[static_cast<std::size_t>(i)]) {
                free.push_back(i);
            }
        }
        const auto nf = static_cast<Eigen::Index>(free.size());
        const Eigen::VectorXd grad = 2.0 * Q * x;

        // Equality-constrained step on the free variables:
        // [2 Q_FF  A_F^T] [p_F]   [-grad_F]
        // [A_F     0    ] [nu ] = [   0   ]
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nf + m, nf + m);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf + m);
        for (Eigen::Index r = 0; r < nf; ++r) {
            for (Eigen::Index c = 0; c < nf; ++c) {
                kkt(r, c) = 2.0 * Q(free[r], free[c]);
            }
            for (Eigen::Index k = 0; k < m; ++k) {
                kkt(r, nf + k) = A(k, free[r]);
                kkt(nf + k, r) = A(k, free[r]);
            }
            rhs(r) = -grad(free[r]);
        }
        Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
        if (!on_face_minimum) {
            const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
            for (Eigen::Index r = 0; r < nf; ++r) {
                p(free[r]) = sol(r);
            }
        }

        if (on_face_minimum || p.cwiseAbs().maxCoeff() < 1e-12 * (1.0 + x.cwiseAbs().maxCoeff())) {
            // Multipliers of the equality rows from the free-variable
            // stationarity grad_F = A_F^T nu, then of the active bounds.
            Eigen::VectorXd nu = Eigen::VectorXd::Zero(m);
            if (nf > 0 && m > 0) {
                Eigen::MatrixXd af(nf, m);
                Eigen::VectorXd gf(nf);
                for (Eigen::Index r = 0; r < nf; ++r) {
                    af.row(r) = A.col(free[r]).transpose();
                    gf(r) = grad(free[r]);
                }
                nu = af.completeOrthogonalDecomposition().solve(gf);
            }
            const Eigen::VectorXd mult = grad - A.transpose() * nu;
            Eigen::Index worst = -1;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (active[static_cast<std::size_t>(i)] && mult(i) < -mult_tol &&
                    (worst < 0 || mult(i) < mult(worst))) {
                    worst = i;
                }
            }
            if (worst < 0) {
                return x;
            }
            active[static_cast<std::size_t>(worst)] = false;
            on_face_minimum = false;
            continue;
        }

        double alpha = 1.0;
        Eigen::Index blocking = -1;
        for (Eigen::Index i : free) {
            if (p(i) < 0.0) {
                const double limit = -x(i) / p(i);
                if (limit < alpha) {
                    alpha = limit;
                    blocking = i;
                }
            }
        }
        x += alpha * p;
        if (blocking >= 0) {
            x(blocking) = 0.0;
            active[static_cast<std::size_t>(blocking)] = true;
        }
        x = x.cwiseMax(0.0);
        on_face_minimum = blocking < 0;
    }
    fail(Errc::InvalidArgument, "quadratic program did not converge");
}

Eigen::MatrixXd risk_matrix(std::span<const double> vols, const CoDependenceMatrix &codep)
{
    check_dims(codep.assets.size(), vols, "volatility");
    const Eigen::Map<const Eigen::VectorXd> s(vols.data(), static_cast<Eigen::Index>(vols.size()));
    return s.asDiagonal() * repair_psd(substituted_matrix(codep)) * s.asDiagonal();
}

PortfolioWeights min_risk_weights(std::span<const double> mean_returns, std::span<const double> vols,
                                  const CoDependenceMatrix &codep, std::optional<double> target_return)
{
    const std::size_t n = codep.assets.size();
    if (n < 2) {
        fail(Errc::InvalidArgument, "minimum risk weights need at least 2 assets");
    }
    check_dims(n, mean_returns, "mean return");
    const Eigen::MatrixXd Q = risk_matrix(vols, codep);
    const auto dim = static_cast<Eigen::Index>(n);

    if (!target_return) {
        const Eigen::MatrixXd A = Eigen::MatrixXd::Ones(1, dim);
        const Eigen::VectorXd b = Eigen::VectorXd::Ones(1);
        const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(dim, 1.0 / static_cast<double>(n));
        return {to_weights(solve_nonnegative_qp(Q, A, b, x0))};
    }

    const double target = *target_return;
    const auto lo = std::min_element(mean_returns.begin(), mean_returns.end());
    const auto hi = std::max_element(mean_returns.begin(), mean_returns.end());
    const double tol = 1e-12 * std::max({1.0, std::abs(*lo), std::abs(*hi)});
    if (!(target >= *lo - tol && target <= *hi + tol)) {
        fail(Errc::InfeasibleTarget, "target return lies outside the attainable range");
    }
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(dim);
    if (*hi - *lo <= tol) {
        x0.setConstant(1.0 / static_cast<double>(n));
    } else {
        const double share_hi = std::clamp((target - *lo) / (*hi - *lo), 0.0, 1.0);
        x0(lo - mean_returns.begin()) = 1.0 - share_hi;
        x0(hi - mean_returns.begin()) = share_hi;
    }
    Eigen::MatrixXd A(2, dim);
    A.row(0).setOnes();
    for (Eigen::Index i = 0; i < dim; ++i) {
        A(1, i) = mean_returns[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd b(2);
    b << 1.0, A.row(1).dot(x0);
    return {to_weights(solve_nonnegative_qp(Q, A, b, x0))};
}

PortfolioWeights max_sharpe_weights(std::span<const double> mean_returns, std::span<const double> vols,
                                    const CoDependenceMatrix &codep, double risk_free)
{
    const std::size_t n = codep.assets.size();
    check_dims(n, mean_returns, "mean return");
    const auto dim = static_cast<Eigen::Index>(n);
    Eigen::VectorXd excess(dim);
    Eigen::VectorXd y0(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        excess(i) = mean_returns[static_cast<std::size_t>(i)] - risk_free;
        y0(i) = std::max(excess(i), 0.0);
    }
    if (!(y0.sum() > 0.0)) {
        fail(Errc::NoExcessReturn, "no asset has a mean return above the risk-free rate");
    }
    // Any positive level of the excess constraint gives the same w; this one
    // keeps y near the simplex.
    y0 /= y0.sum();
    const Eigen::MatrixXd Q = risk_matrix(vols, codep);
    const Eigen::MatrixXd A = excess.transpose();
    const Eigen::VectorXd b = Eigen::VectorXd::Constant(1, excess.dot(y0));
    return {to_weights(solve_nonnegative_qp(Q, A, b, y0))};
}

} // namespace causal
