#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isospec/config.hpp"
#include "isospec/errors.hpp"
#include "isospec/jet.hpp"
#include "isospec/numeric.hpp"
#include "isospec/operators.hpp"

namespace isospec {

/// Where the running integrals of the Riccati solution start.
///
/// The exponent is I(x) = exponent_at_origin + int_{exponent_origin}^x p with
/// p = r0/r1 - l0/l1. The offset S(x) = int e^I / r1 runs either from
/// offset_origin or, for a tail, from +infinity. Closed forms, when supplied,
/// replace the corresponding quadrature.
struct DeformationOptions {
    double exponent_origin = 0.0;
    double exponent_at_origin = 0.0;
    bool offset_tail = false;
    double offset_origin = 0.0;
    std::optional<RealFn> exponent;
    std::optional<RealFn> offset;
    int table_nodes = 257;
    int scan_resolution = 4000;
    Tolerances tolerances = default_tolerances();
};

/// One member of a deformed factorization.
///
/// u is the Riccati solution added to the right factor; the left factor
/// receives -(l1/r1) u. Case I labels u as nu and the left term as eta,
/// Case II the other way round. delta is the change of the reversed product,
/// so the deformed partner operator is partner + delta. shift follows the
/// sign convention of the case: Case I subtracts it, Case II adds it.
struct DeformationResult {
    SchemeTag tag = SchemeTag::case_I;
    double lambda = 0.0;
    FactorizationScheme scheme;
    RealFn u;
    RealFn left_term;
    RealFn nu;
    RealFn eta;
    RealFn exponent;
    RealFn denominator;  ///< lambda - S(x); zeros are singularities
    RealFn delta;
    RealFn shift;
    FirstOrderOperator left;
    FirstOrderOperator right;
    bool closed_form = false;
    std::vector<double> singularities;

    SecondOrderOperator partner() const { return scheme.partner().plus(delta, "deformed " + scheme.name); }

    /// Eigenvalue of right(phi) under the deformed partner for a seed phi with
    /// eigenvalue e under left*right + k.
    double partner_eigenvalue(double seed_eigenvalue) const {
        return seed_eigenvalue - scheme.k + scheme.partner_k;
    }

    RealFn product_state(const RealFn& seed) const { return apply_fn(right, seed); }
};

/// Sign changes of f on [lower, upper] sampled at the given resolution, each
/// refined by bisection to width tol.
inline std::vector<double> singularity_scan(const RealFn& f, double lower, double upper, int resolution,
                                            double tol = default_tolerances().root) {
    if (!(lower < upper)) throw InvalidArgument("singularity scan needs lower < upper");
    resolution = std::max(resolution, 2);
    auto val = [&](double x) { return f(Jet(x)).value(); };
    std::vector<double> roots;
    double x0 = lower, f0 = val(lower);
    if (f0 == 0.0) roots.push_back(lower);
    for (int i = 1; i <= resolution; ++i) {
        const double x1 = i == resolution ? upper : lower + (upper - lower) * i / resolution;
        const double f1 = val(x1);
        if (f1 == 0.0) {
            roots.push_back(x1);
        } else if (f0 != 0.0 && std::isfinite(f0) && std::isfinite(f1) && (f0 < 0.0) != (f1 < 0.0)) {
            double a = x0, b = x1, fa = f0;
            while (b - a > tol) {
                const double m = 0.5 * (a + b);
                if (m <= a || m >= b) break;
                const double fm = val(m);
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

namespace detail {

inline std::string format_points(const std::vector<double>& pts) {
    std::string s;
    for (std::size_t i = 0; i < pts.size() && i < 8; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%s%.12g", i ? ", " : "", pts[i]);
        s += buf;
    }
    if (pts.size() > 8) s += ", ...";
    return s;
}

inline DeformationResult assemble(const FactorizationScheme& scheme, SchemeTag tag, double lambda, RealFn u,
                                  RealFn exponent, RealFn denominator, bool closed_form) {
    DeformationResult r;
    r.tag = tag;
    r.lambda = lambda;
    r.scheme = scheme;
    r.closed_form = closed_form;
    r.u = u;
    const RealFn l1 = scheme.left.derivative, r1 = scheme.right.derivative;
    r.left_term = [u, l1, r1](const Jet& x) { return -(l1(x) / r1(x)) * u(x); };
    const RealFn du = derivative_fn(u), deta = derivative_fn(r.left_term);
    r.delta = [l1, r1, du, deta](const Jet& x) { return r1(x) * deta(x) - l1(x) * du(x); };
    r.shift = tag == SchemeTag::case_II ? r.delta : scaled(r.delta, -1.0);
    if (tag == SchemeTag::case_II) {
        r.eta = u;
        r.nu = r.left_term;
    } else {
        r.nu = u;
        r.eta = r.left_term;
    }
    r.exponent = std::move(exponent);
    r.denominator = std::move(denominator);
    r.right = scheme.right.deformed(u, "deformed " + scheme.right.name);
    r.left = scheme.left.deformed(r.left_term, "deformed " + scheme.left.name);
    return r;
}

inline void check_validity(DeformationResult& r, const Grid& grid, const DeformationOptions& opt) {
    r.singularities = singularity_scan(r.denominator, grid.lower(), grid.upper(), opt.scan_resolution,
                                       opt.tolerances.root);
    if (!r.singularities.empty())
        throw ValidityError("deformation denominator vanishes inside the domain at x = " +
                                format_points(r.singularities),
                            r.singularities);
}

inline DeformationResult solve_riccati(const FactorizationScheme& scheme, SchemeTag tag, double lambda,
                                       const Grid& grid, const DeformationOptions& opt) {
    if (!std::isfinite(lambda)) throw InvalidArgument("deformation parameter must be finite");
    const RealFn l0 = scheme.left.multiplicative, l1 = scheme.left.derivative;
    const RealFn r0 = scheme.right.multiplicative, r1 = scheme.right.derivative;

    RealFn exponent;
    if (opt.exponent) {
        exponent = *opt.exponent;
    } else {
        RealFn p = [l0, l1, r0, r1](const Jet& x) { return r0(x) / r1(x) - l0(x) / l1(x); };
        const double lo = std::min(grid.lower(), opt.exponent_origin), hi = std::max(grid.upper(), opt.exponent_origin);
        auto I = RunningIntegral::from_origin(p, opt.exponent_origin, lo, hi, opt.tolerances, opt.table_nodes);
        exponent = shifted(I.as_fn(), opt.exponent_at_origin);
    }
    RealFn offset;
    if (opt.offset) {
        offset = *opt.offset;
    } else {
        RealFn g = [exponent, r1](const Jet& x) { return exp(exponent(x)) / r1(x); };
        if (opt.offset_tail) {
            offset = RunningIntegral::tail(g, grid.lower(), grid.upper(), opt.tolerances, opt.table_nodes).as_fn();
        } else {
            const double lo = std::min(grid.lower(), opt.offset_origin), hi = std::max(grid.upper(), opt.offset_origin);
            offset = RunningIntegral::from_origin(g, opt.offset_origin, lo, hi, opt.tolerances, opt.table_nodes).as_fn();
        }
    }
    // A tail offset is the negated integral from infinity.
    RealFn denominator = opt.offset_tail ? [lambda, offset](const Jet& x) { return lambda + offset(x); }
                                         : RealFn([lambda, offset](const Jet& x) { return lambda - offset(x); });
    RealFn u = [exponent, denominator](const Jet& x) { return exp(exponent(x)) / denominator(x); };
    DeformationResult r = assemble(scheme, tag, lambda, u, exponent, denominator, opt.exponent && opt.offset);
    check_validity(r, grid, opt);
    return r;
}

}  // namespace detail

/// General Riccati solution of the factor deformation with the Case I
/// labelling: u is nu on the lowering (right) factor, eta on the left.
inline DeformationResult nu_general(const FactorizationScheme& scheme, double lambda, const Grid& grid,
                                    const DeformationOptions& opt = {}) {
    return detail::solve_riccati(scheme, SchemeTag::case_I, lambda, grid, opt);
}

/// Case II arrangement: the raising factor sits on the right and carries eta,
/// solved first; nu follows on the left factor.
inline DeformationResult eta_case2(const FactorizationScheme& scheme, double lambda, const Grid& grid,
                                   const DeformationOptions& opt = {}) {
    return detail::solve_riccati(scheme, SchemeTag::case_II, lambda, grid, opt);
}

/// Installs a closed-form Riccati solution u with its denominator.
inline DeformationResult closed_form_deformation(const FactorizationScheme& scheme, SchemeTag tag, double lambda,
                                                 RealFn u, RealFn exponent, RealFn denominator, const Grid& grid,
                                                 const DeformationOptions& opt = {}) {
    DeformationResult r = detail::assemble(scheme, tag, lambda, std::move(u), std::move(exponent),
                                           std::move(denominator), true);
    detail::check_validity(r, grid, opt);
    return r;
}

/// Max-norm over interior points of l1 u' - (l1/r1) u^2 - ((l1/r1) r0 - l0) u,
/// the Riccati equation that keeps left*right unchanged.
inline double riccati_residual(const RealFn& u, const FactorizationScheme& scheme, const Grid& grid,
                               const Tolerances& tol = default_tolerances()) {
    const RealFn l0 = scheme.left.multiplicative, l1 = scheme.left.derivative;
    const RealFn r0 = scheme.right.multiplicative, r1 = scheme.right.derivative;
    double worst = 0.0;
    for (int i : detail::interior_indices(grid, tol.boundary_exclusion)) {
        const Jet x(grid[i]);
        const Jet uj = u(Jet::variable(grid[i]));
        const double a = l1(x).value(), b = r1(x).value();
        const double res = a * uj.derivative(1) - (a / b) * uj.value() * uj.value() -
                           ((a / b) * r0(x).value() - l0(x).value()) * uj.value();
        worst = std::max(worst, std::isfinite(res) ? std::abs(res) : HUGE_VAL);
    }
    return worst;
}

inline double riccati_residual(const DeformationResult& r, const Grid& grid,
                               const Tolerances& tol = default_tolerances()) {
    return riccati_residual(r.u, r.scheme, grid, tol);
}

/// H with R replaced by R - shift (Case I) or R + shift (Case II).
inline SecondOrderOperator deformed_operator(const SecondOrderOperator& base, const DeformationResult& r) {
    const RealFn s = r.tag == SchemeTag::case_II ? r.shift : scaled(r.shift, -1.0);
    return base.plus(s, base.name.empty() ? std::string("deformed") : "deformed " + base.name);
}

/// Max-norm of eta_left * delta - beta * nu in the raising/lowering notation,
/// which reduces to left_term * r1 + l1 * u.
inline double eta_nu_relation(const DeformationResult& r, const Grid& grid) {
    double worst = 0.0;
    for (int i = 0; i < grid.count(); ++i) {
        const Jet x(grid[i]);
        const double v = r.left_term(x).value() * r.scheme.right.derivative(x).value() +
                         r.scheme.left.derivative(x).value() * r.u(x).value();
        worst = std::max(worst, std::abs(v));
    }
    return worst;
}

/// Solution of deformed_left(chi) = 0, up to normalization:
/// chi = exp(-int l0/l1) / denominator, using that u/r1 is minus the
/// logarithmic derivative of the denominator.
inline RealFn annihilation_state(const DeformationResult& r, const Grid& grid, double origin,
                                 std::optional<RealFn> closed_ratio_integral = std::nullopt,
                                 const Tolerances& tol = default_tolerances()) {
    RealFn integral;
    if (closed_ratio_integral) {
        integral = *closed_ratio_integral;
    } else {
        const RealFn l0 = r.scheme.left.multiplicative, l1 = r.scheme.left.derivative;
        RealFn ratio = [l0, l1](const Jet& x) { return l0(x) / l1(x); };
        const double lo = std::min(grid.lower(), origin), hi = std::max(grid.upper(), origin);
        integral = RunningIntegral::from_origin(ratio, origin, lo, hi, tol).as_fn();
    }
    const RealFn den = r.denominator;
    return [integral, den](const Jet& x) { return exp(-integral(x)) / den(x); };
}

}  // namespace isospec
