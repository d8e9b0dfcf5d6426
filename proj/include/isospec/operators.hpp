#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isospec/config.hpp"
#include "isospec/errors.hpp"
#include "isospec/jet.hpp"
#include "isospec/numeric.hpp"
#include "isospec/report.hpp"
#include "isospec/special_functions.hpp"

namespace isospec {

/// First-order operator f -> m(x) f + d(x) f'.
///
/// Raising operators are written alpha + beta D and lowering operators
/// gamma - delta D; both are stored through the pair (m, d), so a lowering
/// operator keeps d = -delta. Coefficients built from samples have no
/// exact derivative and are marked non-analytic.
struct FirstOrderOperator {
    RealFn multiplicative;
    RealFn derivative;
    std::optional<int> index;
    std::optional<double> step;
    int shift = 0;  ///< +1 raising, -1 lowering, 0 unspecified
    bool analytic = true;
    std::string name;

    static FirstOrderOperator raising(RealFn alpha, RealFn beta, std::string name = {}) {
        return {std::move(alpha), std::move(beta), std::nullopt, std::nullopt, +1, true, std::move(name)};
    }

    static FirstOrderOperator lowering(RealFn gamma, RealFn delta, std::string name = {}) {
        return {std::move(gamma), scaled(std::move(delta), -1.0), std::nullopt, std::nullopt, -1, true, std::move(name)};
    }

    static FirstOrderOperator generic(RealFn m, RealFn d, std::string name = {}) {
        return {std::move(m), std::move(d), std::nullopt, std::nullopt, 0, true, std::move(name)};
    }

    FirstOrderOperator with_index(int n) const {
        FirstOrderOperator r = *this;
        r.index = n;
        return r;
    }

    /// Same operator with u added to the multiplicative coefficient.
    FirstOrderOperator deformed(const RealFn& u, std::string new_name = {}) const {
        FirstOrderOperator r = *this;
        r.multiplicative = multiplicative + u;
        r.step.reset();
        if (!new_name.empty()) r.name = std::move(new_name);
        return r;
    }

    Jet operator()(const RealFn& f, const Jet& x) const {
        const Jet fx = f(Jet::variable(x.value()));
        Jet df = differentiate_series(fx);
        Jet s = x;
        s.coeff(0) = 0.0;
        return multiplicative(x) * compose_series(fx, s) + derivative(x) * compose_series(df, s);
    }

    double at(const RealFn& f, double x) const {
        const Jet fx = f(Jet::variable(x));
        return multiplicative(Jet(x)).value() * fx.value() + derivative(Jet(x)).value() * fx.derivative(1);
    }
};

/// Piecewise-linear coefficient from samples; no exact derivative exists.
inline RealFn interpolated_fn(const SampledFunction& s) {
    return [s](const Jet& x) {
        const Grid& g = s.grid;
        const double t = std::clamp((x.value() - g.lower()) / g.spacing(), 0.0, g.count() - 1.0);
        const int i = std::min(static_cast<int>(t), g.count() - 2);
        const double w = t - i;
        Jet r(s[i] * (1.0 - w) + s[i + 1] * w);
        r.coeff(1) = (s[i + 1] - s[i]) / g.spacing();
        return r;
    };
}

inline FirstOrderOperator from_samples(const SampledFunction& m, const SampledFunction& d, std::string name = {}) {
    FirstOrderOperator op = FirstOrderOperator::generic(interpolated_fn(m), interpolated_fn(d), std::move(name));
    op.analytic = false;
    return op;
}

/// Second-order operator f -> P f'' + Q f' + R f.
struct SecondOrderOperator {
    RealFn P;
    RealFn Q;
    RealFn R;
    std::optional<int> index;
    std::string name;

    Jet operator()(const RealFn& f, const Jet& x) const {
        const Jet fx = f(Jet::variable(x.value()));
        Jet d1 = differentiate_series(fx);
        Jet d2 = differentiate_series(d1);
        Jet s = x;
        s.coeff(0) = 0.0;
        return P(x) * compose_series(d2, s) + Q(x) * compose_series(d1, s) + R(x) * compose_series(fx, s);
    }

    double at(const RealFn& f, double x) const {
        const Jet fx = f(Jet::variable(x));
        const Jet X(x);
        return P(X).value() * fx.derivative(2) + Q(X).value() * fx.derivative(1) + R(X).value() * fx.value();
    }

    /// Same operator with v added to R.
    SecondOrderOperator plus(const RealFn& v, std::string new_name = {}) const {
        SecondOrderOperator r = *this;
        r.R = R + v;
        if (!new_name.empty()) r.name = std::move(new_name);
        return r;
    }

    SecondOrderOperator plus(double k) const { return plus(constant_fn(k)); }

    /// f(x) times this operator.
    SecondOrderOperator times(const RealFn& f) const {
        SecondOrderOperator r = *this;
        r.P = f * P;
        r.Q = f * Q;
        r.R = f * R;
        return r;
    }
};

/// Schrodinger form -c d^2/dx^2 + V.
inline SecondOrderOperator schrodinger(double c, RealFn potential, std::string name = {}) {
    return {constant_fn(-c), constant_fn(0.0), std::move(potential), std::nullopt, std::move(name)};
}

/// Product left * right as a second-order operator.
inline SecondOrderOperator compose(const FirstOrderOperator& left, const FirstOrderOperator& right) {
    if (!left.analytic || !right.analytic)
        throw ConfigurationError("compose needs coefficients with exact derivatives (" + left.name + ", " +
                                 right.name + ")");
    const RealFn l0 = left.multiplicative, l1 = left.derivative;
    const RealFn r0 = right.multiplicative, r1 = right.derivative;
    const RealFn dr0 = derivative_fn(r0), dr1 = derivative_fn(r1);
    SecondOrderOperator op;
    op.P = l1 * r1;
    op.Q = l0 * r1 + l1 * r0 + l1 * dr1;
    op.R = l0 * r0 + l1 * dr0;
    op.name = left.name + "*" + right.name;
    return op;
}

namespace detail {

inline void require_finite(std::vector<double>& v, const Grid& g, const std::string& what) {
    std::vector<double> bad;
    for (int i = 0; i < g.count(); ++i)
        if (!std::isfinite(v[static_cast<std::size_t>(i)])) bad.push_back(g[i]);
    if (!bad.empty()) throw SingularityError(what + " is singular on the grid", std::move(bad));
}

}  // namespace detail

/// Pointwise image of f on the grid, with the exact derivative of the image.
template <class Op>
SampledFunction apply(const Op& op, const RealFn& f, const Grid& grid) {
    std::vector<double> v(static_cast<std::size_t>(grid.count())), d(v.size());
    for (int i = 0; i < grid.count(); ++i) {
        const Jet y = op(f, Jet::variable(grid[i]));
        v[static_cast<std::size_t>(i)] = y.value();
        d[static_cast<std::size_t>(i)] = y.derivative(1);
    }
    detail::require_finite(v, grid, op.name.empty() ? std::string("operator image") : op.name + " image");
    return SampledFunction(grid, std::move(v), std::move(d));
}

/// The image op(f) as a function, usable as input to further operators.
template <class Op>
RealFn apply_fn(const Op& op, RealFn f) {
    return [op, f = std::move(f)](const Jet& x) { return op(f, x); };
}

enum class SchemeTag { case_I, case_II, generic };

inline std::string to_string(SchemeTag t) {
    switch (t) {
        case SchemeTag::case_I: return "I";
        case SchemeTag::case_II: return "II";
        default: return "generic";
    }
}

/// H = left * right + k; the reversed product right * left + partner_k is the
/// partner operator whose eigenfunctions the right factor produces.
struct FactorizationScheme {
    FirstOrderOperator left;
    FirstOrderOperator right;
    double k = 0.0;
    double partner_k = 0.0;
    SchemeTag tag = SchemeTag::generic;
    std::string name;

    SecondOrderOperator product() const { return compose(left, right).plus(k); }
    SecondOrderOperator partner() const { return compose(right, left).plus(partner_k); }
};

namespace detail {

inline std::vector<RealFn> probe_functions() {
    return {
        [](const Jet& x) { return cos(0.7 * x) + 0.1 * x * x; },
        [](const Jet& x) { return exp(0.3 * x) - 0.5; },
        [](const Jet& x) { return sin(1.3 * x + 0.2); },
    };
}

inline std::vector<int> interior_indices(const Grid& g, int exclude) {
    std::vector<int> idx;
    const int lo = std::min(exclude, (g.count() - 1) / 2);
    for (int i = lo; i < g.count() - lo; ++i) idx.push_back(i);
    return idx;
}

}  // namespace detail

/// Compares two operators on coefficients and on probe functions; every
/// deviation is scaled by max(1, |target value|).
inline VerificationReport compare_operators(const SecondOrderOperator& target, const SecondOrderOperator& candidate,
                                            const Grid& grid, double tol, std::string id = "operator_identity",
                                            std::string claim = {}) {
    VerificationReport rep(std::move(id), std::move(claim));
    double coef = 0.0, probe = 0.0;
    auto dev = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
    const auto probes = detail::probe_functions();
    for (int i = 0; i < grid.count(); ++i) {
        const Jet x(grid[i]);
        coef = std::max({coef, dev(candidate.P(x).value(), target.P(x).value()),
                         dev(candidate.Q(x).value(), target.Q(x).value()),
                         dev(candidate.R(x).value(), target.R(x).value())});
        for (const auto& f : probes) probe = std::max(probe, dev(candidate.at(f, grid[i]), target.at(f, grid[i])));
    }
    rep.add("coefficient_deviation", coef, tol);
    rep.add("probe_deviation", probe, tol);
    return rep;
}

/// Checks that left * right + k reproduces the target operator.
inline VerificationReport check_factorization(const SecondOrderOperator& target, const FactorizationScheme& scheme,
                                              const Grid& grid, double tol) {
    auto rep = compare_operators(target, scheme.product(), grid, tol, "factorization:" + scheme.name,
                                 "H = left*right + k");
    rep.add("k", scheme.k);
    return rep;
}

/// Fits c in op(phi_n) = c phi_{n+shift} by least squares over interior
/// points and reports c with the max residual relative to the image scale.
/// A lowering step below the family's first index is an annihilation
/// check (c = 0).
inline VerificationReport ladder_step_check(const FirstOrderOperator& op, const EigenfunctionFamily& family, int n,
                                            const Grid& grid, double tol,
                                            const Tolerances& t = default_tolerances()) {
    if (op.shift == 0) throw InvalidArgument("ladder_step_check needs a raising or lowering operator");
    if (!family.contains(n)) throw InvalidArgument(family.id + ": source index outside family range");
    const int target = n + op.shift;
    const bool annihilation = target < family.min_index;
    if (!annihilation && !family.contains(target))
        throw InvalidArgument(family.id + ": target index " + std::to_string(target) + " outside family range");

    VerificationReport rep("ladder:" + (op.name.empty() ? std::string("op") : op.name) + "@" + std::to_string(n),
                           "A phi_n = c phi_{n+-1}");
    const RealFn src = family.member(n);
    const auto idx = detail::interior_indices(grid, t.boundary_exclusion);
    std::vector<double> image, tgt;
    for (int i : idx) {
        image.push_back(op.at(src, grid[i]));
        tgt.push_back(annihilation ? 0.0 : family(target, Jet(grid[i])).value());
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < image.size(); ++i) {
        num += image[i] * tgt[i];
        den += tgt[i] * tgt[i];
    }
    const double c = den > 0.0 ? num / den : 0.0;
    double res = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < image.size(); ++i) {
        res = std::max(res, std::abs(image[i] - c * tgt[i]));
        scale = std::max(scale, std::abs(c * tgt[i]));
    }
    if (annihilation) {
        for (int i : idx) scale = std::max(scale, std::abs(family(n, Jet(grid[i])).value()));
    }
    rep.add("c", c);
    rep.add("residual", scale > 0.0 ? res / scale : res, tol);
    if (annihilation) rep.note("target below family range: annihilation check");
    return rep;
}

}  // namespace isospec
