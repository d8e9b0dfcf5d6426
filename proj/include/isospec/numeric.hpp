#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "isospec/config.hpp"
#include "isospec/errors.hpp"
#include "isospec/jet.hpp"

namespace isospec {

enum class BoundaryKind { dirichlet, natural };

/// Uniform sample domain with exact endpoints.
class Grid {
public:
    Grid(double lower, double upper, int count, BoundaryKind boundary = BoundaryKind::dirichlet)
        : lower_(lower), upper_(upper), count_(count), boundary_(boundary) {
        if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper))
            throw InvalidArgument("grid bounds must satisfy lower < upper");
        if (count < 2) throw InvalidArgument("grid needs at least two points");
        spacing_ = (upper - lower) / (count - 1);
    }

    double lower() const { return lower_; }
    double upper() const { return upper_; }
    int count() const { return count_; }
    double spacing() const { return spacing_; }
    BoundaryKind boundary() const { return boundary_; }

    double operator[](int i) const { return i == count_ - 1 ? upper_ : lower_ + i * spacing_; }

    std::vector<double> points() const {
        std::vector<double> x(static_cast<std::size_t>(count_));
        for (int i = 0; i < count_; ++i) x[static_cast<std::size_t>(i)] = (*this)[i];
        return x;
    }

    bool contains(double x) const { return x >= lower_ && x <= upper_; }

private:
    double lower_;
    double upper_;
    int count_;
    double spacing_;
    BoundaryKind boundary_;
};

inline Grid make_uniform_grid(double lower, double upper, int count) {
    return Grid(lower, upper, count);
}

/// Function values sampled on a grid, optionally with derivative values.
struct SampledFunction {
    Grid grid;
    std::vector<double> values;
    std::optional<std::vector<double>> derivative;

    SampledFunction(Grid g, std::vector<double> v, std::optional<std::vector<double>> d = std::nullopt)
        : grid(std::move(g)), values(std::move(v)), derivative(std::move(d)) {
        if (static_cast<int>(values.size()) != grid.count())
            throw InvalidArgument("sampled values do not match grid size");
        if (derivative && static_cast<int>(derivative->size()) != grid.count())
            throw InvalidArgument("sampled derivative does not match grid size");
    }

    double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
};

/// Samples f (and its exact derivative) on every grid point.
inline SampledFunction sample(const RealFn& f, const Grid& grid) {
    std::vector<double> v(static_cast<std::size_t>(grid.count()));
    std::vector<double> d(v.size());
    for (int i = 0; i < grid.count(); ++i) {
        Jet j = eval_jet(f, grid[i]);
        v[static_cast<std::size_t>(i)] = j.value();
        d[static_cast<std::size_t>(i)] = j.derivative(1);
    }
    return SampledFunction(grid, std::move(v), std::move(d));
}

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr std::array<double, 8> gk_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error, magnitude;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * gk_weights[7];
    double gauss = fc * gauss_weights[3];
    double magnitude = std::abs(kronrod);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * gk_nodes[static_cast<std::size_t>(j)];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        kronrod += gk_weights[static_cast<std::size_t>(j)] * (f1 + f2);
        magnitude += gk_weights[static_cast<std::size_t>(j)] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += gauss_weights[static_cast<std::size_t>(j / 2)] * (f1 + f2);
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half), magnitude * std::abs(half)};
}

}  // namespace detail

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod 7/15 quadrature with interval bisection.
///
/// Stops once the summed error estimate is below max(abs_tol, rel_tol*|I|)
/// or below the round-off floor of the integrand magnitude. Throws
/// AccuracyError carrying the best estimate when the budget is exhausted.
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                                    double rel_tol = default_tolerances().quadrature_relative,
                                    long budget = default_tolerances().evaluation_budget) {
    if (!(abs_tol > 0.0)) throw InvalidArgument("quadrature tolerance must be positive");
    if (a == b) return {};
    if (a > b) {
        QuadratureResult r = integrate_adaptive(f, b, a, abs_tol, rel_tol, budget);
        r.value = -r.value;
        return r;
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::priority_queue<detail::Segment> heap;
    detail::Segment first = detail::gauss_kronrod(f, a, b);
    long evaluations = 15;
    double total = first.value, total_error = first.error, total_magnitude = first.magnitude;
    heap.push(first);
    auto converged = [&] {
        const double target = std::max({abs_tol, rel_tol * std::abs(total), 50.0 * eps * total_magnitude});
        return total_error <= target;
    };
    while (!converged()) {
        if (!std::isfinite(total))
            throw AccuracyError("integrand is not finite on the interval", total, total_error);
        if (evaluations + 30 > budget)
            throw AccuracyError("adaptive quadrature exceeded its evaluation budget", total, total_error);
        detail::Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break;  // interval at machine resolution
        heap.pop();
        detail::Segment left = detail::gauss_kronrod(f, worst.a, mid);
        detail::Segment right = detail::gauss_kronrod(f, mid, worst.b);
        evaluations += 30;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        total_magnitude += left.magnitude + right.magnitude - worst.magnitude;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to remove drift from the incremental updates.
    double sum = 0.0, err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {sum, err, evaluations};
}

template <class F>
double integrate(F&& f, double a, double b, double tol = default_tolerances().quadrature) {
    return integrate_adaptive(f, a, b, tol).value;
}

/// Integral over [a, inf) through x = a + t/(1-t), summed over dyadic
/// t-intervals so a tail that does not decay is detected explicitly.
template <class F>
double integrate_semi_infinite(F&& f, double a, double tol = default_tolerances().quadrature) {
    if (!(tol > 0.0)) throw InvalidArgument("quadrature tolerance must be positive");
    auto mapped = [&](double t) {
        const double s = 1.0 - t;
        const double v = f(a + t / s);
        return v == 0.0 ? 0.0 : v / (s * s);
    };
    constexpr int max_pieces = 64;
    double total = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    int stagnant = 0;
    for (int k = 1; k <= max_pieces; ++k) {
        const double t0 = 1.0 - std::ldexp(1.0, -(k - 1));
        const double t1 = 1.0 - std::ldexp(1.0, -k);
        const double piece = integrate_adaptive(mapped, t0, t1, tol / 8.0).value;
        total += piece;
        const double size = std::abs(piece);
        if (k >= 3 && size <= tol / 16.0 && size <= previous) return total;
        stagnant = (k >= 4 && size >= 0.98 * previous) ? stagnant + 1 : 0;
        if (stagnant >= 8)
            throw DivergenceError("integrand tail does not decay on [" + std::to_string(a) + ", inf)");
        previous = size;
    }
    throw DivergenceError("semi-infinite integral did not converge from " + std::to_string(a));
}

/// F(x) = integral of f from origin to x, on every grid point.
template <class F>
SampledFunction cumulative_integral(F&& f, double origin, const Grid& grid,
                                    double tol = default_tolerances().quadrature) {
    const double slack = 1e-12 * (grid.upper() - grid.lower());
    if (origin < grid.lower() - slack || origin > grid.upper() + slack)
        throw InvalidArgument("cumulative integral origin lies outside the grid domain");
    const int n = grid.count();
    std::vector<double> values(static_cast<std::size_t>(n));
    std::vector<double> deriv(static_cast<std::size_t>(n));
    int pivot = static_cast<int>(std::floor((origin - grid.lower()) / grid.spacing()));
    pivot = std::clamp(pivot, 0, n - 1);
    auto at = [&](int i) -> double& { return values[static_cast<std::size_t>(i)]; };
    at(pivot) = integrate(f, origin, grid[pivot], tol);
    for (int i = pivot + 1; i < n; ++i) at(i) = at(i - 1) + integrate(f, grid[i - 1], grid[i], tol);
    for (int i = pivot - 1; i >= 0; --i) at(i) = at(i + 1) - integrate(f, grid[i], grid[i + 1], tol);
    for (int i = 0; i < n; ++i) deriv[static_cast<std::size_t>(i)] = f(grid[i]);
    return SampledFunction(grid, std::move(values), std::move(deriv));
}

/// Second-order finite-difference derivative; exact for quadratics.
inline SampledFunction differentiate(const SampledFunction& f) {
    const Grid& g = f.grid;
    const int n = g.count();
    if (n < 3) throw InvalidArgument("differentiate needs at least three grid points");
    const double h = g.spacing();
    std::vector<double> d(static_cast<std::size_t>(n));
    auto v = [&](int i) { return f.values[static_cast<std::size_t>(i)]; };
    d[0] = (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h);
    for (int i = 1; i < n - 1; ++i) d[static_cast<std::size_t>(i)] = (v(i + 1) - v(i - 1)) / (2.0 * h);
    d[static_cast<std::size_t>(n - 1)] = (3.0 * v(n - 1) - 4.0 * v(n - 2) + v(n - 3)) / (2.0 * h);
    return SampledFunction(g, std::move(d));
}

/// Running integral usable as a jet function.
///
/// Either F(x) = int_origin^x f or, for a tail, F(x) = int_x^inf f. A table
/// of values on evenly spaced nodes over [lower, upper] is built once; an
/// evaluation adds one short adaptive integral from the nearest node. The
/// derivative series comes from the integrand's jet, so F carries exact
/// derivatives like any other RealFn.
class RunningIntegral {
public:
    static RunningIntegral from_origin(RealFn integrand, double origin, double lower, double upper,
                                       const Tolerances& tol = default_tolerances(), int nodes = 257) {
        RunningIntegral r(std::move(integrand), lower, upper, false, tol, nodes);
        auto& t = r.state_->table;
        const auto& x = r.state_->nodes;
        auto f = r.value_fn();
        const int n = static_cast<int>(x.size());
        int pivot = static_cast<int>(std::lower_bound(x.begin(), x.end(), origin) - x.begin());
        pivot = std::clamp(pivot, 0, n - 1);
        t[static_cast<std::size_t>(pivot)] = r.segment(f, origin, x[static_cast<std::size_t>(pivot)]);
        for (int i = pivot + 1; i < n; ++i)
            t[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i - 1)] +
                                             r.segment(f, x[static_cast<std::size_t>(i - 1)], x[static_cast<std::size_t>(i)]);
        for (int i = pivot - 1; i >= 0; --i)
            t[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i + 1)] -
                                             r.segment(f, x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i + 1)]);
        return r;
    }

    static RunningIntegral tail(RealFn integrand, double lower, double upper,
                                const Tolerances& tol = default_tolerances(), int nodes = 257) {
        RunningIntegral r(std::move(integrand), lower, upper, true, tol, nodes);
        auto& t = r.state_->table;
        const auto& x = r.state_->nodes;
        auto f = r.value_fn();
        const int n = static_cast<int>(x.size());
        t[static_cast<std::size_t>(n - 1)] = integrate_semi_infinite(f, x.back(), tol.quadrature);
        for (int i = n - 2; i >= 0; --i)
            t[static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(i + 1)] +
                                             r.segment(f, x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i + 1)]);
        return r;
    }

    double value(double x) const {
        const auto& s = *state_;
        auto f = value_fn();
        if (s.is_tail && x > s.nodes.back()) return integrate_semi_infinite(f, x, s.tol.quadrature);
        std::size_t i = nearest(x);
        const double base = s.table[i];
        const double piece = segment(f, s.nodes[i], x);
        return s.is_tail ? base - piece : base + piece;
    }

    Jet operator()(const Jet& x) const {
        const double x0 = x.value();
        Jet slope = state_->integrand(Jet::variable(x0));
        if (state_->is_tail) slope = -slope;
        Jet local = integrate_series(slope, value(x0));
        Jet shift = x;
        shift.coeff(0) = 0.0;
        return compose_series(local, shift);
    }

    RealFn as_fn() const {
        return [self = *this](const Jet& x) { return self(x); };
    }

private:
    struct State {
        RealFn integrand;
        std::vector<double> nodes;
        std::vector<double> table;
        bool is_tail = false;
        Tolerances tol;
    };

    RunningIntegral(RealFn integrand, double lower, double upper, bool is_tail, const Tolerances& tol, int nodes)
        : state_(std::make_shared<State>()) {
        if (!(lower < upper)) throw InvalidArgument("running integral needs lower < upper");
        state_->integrand = std::move(integrand);
        state_->is_tail = is_tail;
        state_->tol = tol;
        nodes = std::max(nodes, 2);
        state_->nodes.resize(static_cast<std::size_t>(nodes));
        for (int i = 0; i < nodes; ++i)
            state_->nodes[static_cast<std::size_t>(i)] = lower + (upper - lower) * i / (nodes - 1);
        state_->nodes.back() = upper;
        state_->table.assign(state_->nodes.size(), 0.0);
    }

    std::function<double(double)> value_fn() const {
        return [s = state_.get()](double y) { return s->integrand(Jet(y)).value(); };
    }

    template <class F>
    double segment(F& f, double a, double b) const {
        return integrate_adaptive(f, a, b, state_->tol.quadrature * 1e-3, state_->tol.quadrature_relative,
                                  state_->tol.evaluation_budget)
            .value;
    }

    std::size_t nearest(double x) const {
        const auto& n = state_->nodes;
        auto it = std::lower_bound(n.begin(), n.end(), x);
        if (it == n.end()) return n.size() - 1;
        if (it == n.begin()) return 0;
        auto prev = it - 1;
        return static_cast<std::size_t>((x - *prev <= *it - x ? prev : it) - n.begin());
    }

    std::shared_ptr<State> state_;
};

}  // namespace isospec
