#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "isospec/config.hpp"
#include "isospec/errors.hpp"
#include "isospec/numeric.hpp"
#include "isospec/operators.hpp"

namespace isospec {

/// Symmetric tridiagonal matrix of a Sturm-Liouville discretization with
/// Dirichlet values at both grid endpoints. Unknowns are the interior grid
/// points; scale holds w^{-1/2} to map matrix eigenvectors back to functions.
struct DiscretizedOperator {
    Grid grid;
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;
    std::vector<double> scale;
    std::vector<double> weight;
    BoundaryKind boundary = BoundaryKind::dirichlet;
    bool symmetric = true;

    int size() const { return static_cast<int>(diagonal.size()); }

    DiscretizedOperator shifted(double c) const {
        DiscretizedOperator d = *this;
        for (double& v : d.diagonal) v += c;
        return d;
    }
};

struct Spectrum {
    std::vector<double> eigenvalues;
    std::vector<SampledFunction> eigenvectors;
    Grid grid{0.0, 1.0, 2};
    double tolerance = 0.0;
    std::string method;
};

/// Brings P f'' + Q f' + R f to -(p f')'/w + q/w f with
/// p = s, w = -s/P, q = R w and s = exp(int Q/P), then applies the
/// three-point stencil with p at half points and symmetrizes by w^{1/2}.
inline DiscretizedOperator discretize(const SecondOrderOperator& op, const Grid& grid,
                                      BoundaryKind bc = BoundaryKind::dirichlet,
                                      const Tolerances& tol = default_tolerances()) {
    if (bc != BoundaryKind::dirichlet) throw UnsupportedError("only Dirichlet boundaries are discretized");
    const int n = grid.count();
    if (n < 3) throw InvalidArgument("discretize needs at least three grid points");
    const double h = grid.spacing();
    // Half-step grid: even entries are grid points, odd entries midpoints.
    const int m = 2 * n - 1;
    std::vector<double> x(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(i)] = i % 2 == 0 ? grid[i / 2] : grid.lower() + 0.5 * i * h;
    std::vector<double> P(x.size()), Q(x.size());
    bool positive = false, negative = false;
    for (int i = 1; i < m - 1; ++i) {
        const Jet X(x[static_cast<std::size_t>(i)]);
        P[static_cast<std::size_t>(i)] = op.P(X).value();
        Q[static_cast<std::size_t>(i)] = op.Q(X).value();
        const double p = P[static_cast<std::size_t>(i)];
        if (!std::isfinite(p)) throw SingularityError("leading coefficient is singular", {x[static_cast<std::size_t>(i)]});
        if (p > 0.0) positive = true;
        if (p < 0.0) negative = true;
        if (p == 0.0) positive = negative = true;
    }
    if (positive && negative) throw UnsupportedError("leading coefficient changes sign on the domain");
    if (positive) throw UnsupportedError("leading coefficient must be negative (operator bounded below)");

    // log s relative to the middle of the domain.
    std::vector<double> logs(x.size(), 0.0);
    const int mid = n - 1;
    auto ratio = [&](double t) {
        const Jet X(t);
        return op.Q(X).value() / op.P(X).value();
    };
    bool has_q = false;
    for (int i = 1; i < m - 1; ++i) has_q = has_q || Q[static_cast<std::size_t>(i)] != 0.0;
    if (has_q) {
        for (int i = mid + 1; i < m - 1; ++i)
            logs[static_cast<std::size_t>(i)] = logs[static_cast<std::size_t>(i - 1)] +
                                                integrate(ratio, x[static_cast<std::size_t>(i - 1)], x[static_cast<std::size_t>(i)], tol.quadrature);
        for (int i = mid - 1; i >= 1; --i)
            logs[static_cast<std::size_t>(i)] = logs[static_cast<std::size_t>(i + 1)] -
                                                integrate(ratio, x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i + 1)], tol.quadrature);
    }
    auto s = [&](int i) { return std::exp(logs[static_cast<std::size_t>(i)]); };

    DiscretizedOperator d{grid, {}, {}, {}, {}, bc, true};
    const int k = n - 2;
    d.diagonal.resize(static_cast<std::size_t>(k));
    d.off_diagonal.resize(static_cast<std::size_t>(std::max(k - 1, 0)));
    d.scale.resize(static_cast<std::size_t>(k));
    d.weight.resize(static_cast<std::size_t>(k));
    std::vector<double> bad;
    for (int j = 0; j < k; ++j) {
        const int i = 2 * (j + 1);  // half-grid index of unknown j
        const double w = -s(i) / P[static_cast<std::size_t>(i)];
        const double r = op.R(Jet(x[static_cast<std::size_t>(i)])).value();
        const double pl = s(i - 1), pr = s(i + 1);
        const double diag = (pl + pr) / (h * h) + r * w;
        if (!std::isfinite(diag) || !(w > 0.0)) bad.push_back(x[static_cast<std::size_t>(i)]);
        d.weight[static_cast<std::size_t>(j)] = w;
        d.scale[static_cast<std::size_t>(j)] = 1.0 / std::sqrt(w);
        d.diagonal[static_cast<std::size_t>(j)] = diag / w;
    }
    if (!bad.empty()) throw SingularityError("operator coefficients are singular on the grid", bad);
    for (int j = 0; j + 1 < k; ++j) {
        const int i = 2 * (j + 1) + 1;
        d.off_diagonal[static_cast<std::size_t>(j)] =
            -s(i) / (h * h) * d.scale[static_cast<std::size_t>(j)] * d.scale[static_cast<std::size_t>(j + 1)];
    }
    return d;
}

/// Number of eigenvalues below mu (Sturm sequence of pivots).
inline int sturm_count(const DiscretizedOperator& d, double mu) {
    const auto& a = d.diagonal;
    const auto& b = d.off_diagonal;
    const double tiny = std::numeric_limits<double>::min() * 1e10;
    int count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double b2 = i == 0 ? 0.0 : b[i - 1] * b[i - 1];
        q = a[i] - mu - (i == 0 ? 0.0 : b2 / q);
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++count;
    }
    return count;
}

namespace detail {

// Solves (T - mu I) y = rhs for tridiagonal T with partial pivoting.
inline std::vector<double> tridiagonal_solve(const DiscretizedOperator& d, double mu, std::vector<double> rhs) {
    const std::size_t n = d.diagonal.size();
    std::vector<double> dl(n > 0 ? n - 1 : 0), dd(n), du(n > 0 ? n - 1 : 0), du2(n > 1 ? n - 2 : 0, 0.0);
    for (std::size_t i = 0; i < n; ++i) dd[i] = d.diagonal[i] - mu;
    for (std::size_t i = 0; i + 1 < n; ++i) dl[i] = du[i] = d.off_diagonal[i];
    std::vector<char> swapped(n, 0);
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(dd[i]) >= std::abs(dl[i])) {
            if (dd[i] == 0.0) dd[i] = eps;
            const double f = dl[i] / dd[i];
            dl[i] = f;
            dd[i + 1] -= f * du[i];
        } else {
            const double f = dd[i] / dl[i];
            dd[i] = dl[i];
            dl[i] = f;
            const double t = du[i];
            du[i] = dd[i + 1];
            dd[i + 1] = t - f * du[i];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du2[i];
            }
            swapped[i] = 1;
        }
    }
    if (n > 0 && dd[n - 1] == 0.0) dd[n - 1] = eps;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (swapped[i]) std::swap(rhs[i], rhs[i + 1]);
        rhs[i + 1] -= dl[i] * rhs[i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double v = rhs[ii];
        if (ii + 1 < n) v -= du[ii] * rhs[ii + 1];
        if (ii + 2 < n) v -= du2[ii] * rhs[ii + 2];
        rhs[ii] = v / dd[ii];
    }
    return rhs;
}

inline double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace detail

/// The m lowest eigenvalues by Sturm bisection and their eigenvectors by
/// inverse iteration, normalized so that sum w f^2 h = 1.
inline Spectrum eigen_lowest(const DiscretizedOperator& d, int m, double tol = default_tolerances().eigenvalue) {
    const int n = d.size();
    if (m < 0 || m > n) throw InvalidArgument("requested more eigenvalues than interior points");
    Spectrum sp;
    sp.grid = d.grid;
    sp.tolerance = tol;
    sp.method = "sturm bisection + inverse iteration";
    if (m == 0) return sp;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(d.off_diagonal[static_cast<std::size_t>(i - 1)]);
        if (i + 1 < n) r += std::abs(d.off_diagonal[static_cast<std::size_t>(i)]);
        lo = std::min(lo, d.diagonal[static_cast<std::size_t>(i)] - r);
        hi = std::max(hi, d.diagonal[static_cast<std::size_t>(i)] + r);
    }
    const double h = d.grid.spacing();
    for (int k = 0; k < m; ++k) {
        double a = lo, b = hi;
        for (int it = 0; it < 200 && b - a > tol; ++it) {
            const double c = 0.5 * (a + b);
            if (sturm_count(d, c) > k) b = c;
            else a = c;
        }
        const double e = 0.5 * (a + b);
        sp.eigenvalues.push_back(e);

        const double gap = std::max(std::abs(e), 1.0) * 1e-13;
        std::vector<double> y(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = 1.0 + 1e-3 * ((i * 7919) % 101);
        for (int it = 0; it < 4; ++it) {
            y = detail::tridiagonal_solve(d, e + gap, std::move(y));
            const double nrm = detail::norm2(y);
            for (double& v : y) v /= nrm;
        }
        std::vector<double> f(static_cast<std::size_t>(d.grid.count()), 0.0);
        double norm = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = y[static_cast<std::size_t>(i)] * d.scale[static_cast<std::size_t>(i)];
            f[static_cast<std::size_t>(i + 1)] = v;
            norm += d.weight[static_cast<std::size_t>(i)] * v * v * h;
        }
        norm = std::sqrt(norm);
        // Fix the sign so the first significant lobe is positive.
        double first = 0.0;
        for (double v : f)
            if (std::abs(v) > 1e-6 * norm) {
                first = v;
                break;
            }
        const double sgn = first < 0.0 ? -1.0 : 1.0;
        for (double& v : f) v *= sgn / norm;
        sp.eigenvectors.emplace_back(d.grid, std::move(f));
    }
    return sp;
}

}  // namespace isospec
