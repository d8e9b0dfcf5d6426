#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>

#include "isospec/errors.hpp"
#include "isospec/jet.hpp"

namespace isospec {

inline constexpr int max_polynomial_index = 60;
inline constexpr int max_bessel_order = 50;

/// L2-normalized eigenfunction of -1/2 d^2/dx^2 + x^2/2, via the upward
/// recurrence on normalized functions.
template <class T>
T hermite_fn(int n, const T& x) {
    using std::exp;
    if (n < 0 || n > max_polynomial_index) throw InvalidArgument("hermite index out of range");
    const double norm = 1.0 / std::sqrt(std::sqrt(std::numbers::pi));
    T prev = norm * exp(-0.5 * (x * x));
    if (n == 0) return prev;
    T curr = std::sqrt(2.0) * x * prev;
    for (int k = 1; k < n; ++k) {
        T next = std::sqrt(2.0 / (k + 1)) * x * curr - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = std::move(curr);
        curr = std::move(next);
    }
    return curr;
}

enum class BesselKind { j, n };

namespace detail {

// Series about the origin for j_l; used only at rho == 0 where the
// normalization by sin(rho)/rho is undefined.
template <class T>
T spherical_j_series(int l, const T& rho) {
    double dfact = 1.0;
    for (int k = 1; k <= 2 * l + 1; k += 2) dfact *= k;
    T term(1.0 / dfact);
    T sum = term;
    const T half_sq = -0.5 * (rho * rho);
    for (int k = 1; k < 30; ++k) {
        term = term * half_sq / static_cast<double>(k * (2 * l + 2 * k + 1));
        sum = sum + term;
    }
    return powi(rho, l) * sum;
}

}  // namespace detail

/// Spherical Bessel functions j_l (downward Miller recurrence normalized
/// against j_0 or j_1) and n_l (upward recurrence from n_0, n_1).
template <class T>
T spherical_bessel(BesselKind kind, int l, const T& rho) {
    using std::cos;
    using std::sin;
    if (l < 0 || l > max_bessel_order) throw InvalidArgument("spherical Bessel order out of range");
    const double r0 = value_of(rho);
    if (kind == BesselKind::n) {
        if (r0 == 0.0) throw SingularityError("n_l is singular at rho = 0", {0.0});
        T s = sin(rho), c = cos(rho);
        T prev = -c / rho;
        if (l == 0) return prev;
        T curr = -c / (rho * rho) - s / rho;
        for (int k = 1; k < l; ++k) {
            T next = (2.0 * k + 1.0) * curr / rho - prev;
            prev = std::move(curr);
            curr = std::move(next);
        }
        return curr;
    }
    if (r0 == 0.0) return detail::spherical_j_series(l, rho);
    if (r0 < 0.0) throw InvalidArgument("spherical Bessel argument must be non-negative");

    // The oscillatory region rho > l does not damp start-up error, so the
    // margin above rho grows like rho^{1/3}.
    const int start = l + 15 + static_cast<int>(std::ceil(r0 + 3.0 * std::cbrt(r0)));
    T upper(0.0);
    T curr(1e-30);
    T at_l(0.0), at_1(0.0), at_0(0.0);
    for (int k = start; k >= 1; --k) {
        T next = (2.0 * k + 1.0) * curr / rho - upper;
        upper = std::move(curr);
        curr = std::move(next);
        if (k - 1 == l) at_l = curr;
        if (k - 1 == 1) at_1 = curr;
        if (std::abs(value_of(curr)) > 1e200) {
            curr = curr * 1e-200;
            upper = upper * 1e-200;
            at_l = at_l * 1e-200;
            at_1 = at_1 * 1e-200;
        }
    }
    at_0 = curr;
    const T s = sin(rho), c = cos(rho);
    const T j0 = s / rho;
    const T j1 = s / (rho * rho) - c / rho;
    if (std::abs(value_of(j0)) >= std::abs(value_of(j1))) return at_l * (j0 / at_0);
    return at_l * (j1 / at_1);
}

/// Associated Laguerre polynomial L_n^k by three-term upward recurrence.
template <class T>
T assoc_laguerre(int n, double k, const T& rho) {
    if (n < 0 || n > max_polynomial_index) throw InvalidArgument("Laguerre index out of range");
    T prev(1.0);
    if (n == 0) return prev;
    T curr = (k + 1.0) - rho;
    for (int m = 1; m < n; ++m) {
        T next = ((2.0 * m + k + 1.0) - rho) * curr / (m + 1.0) - ((m + k) / (m + 1.0)) * prev;
        prev = std::move(curr);
        curr = std::move(next);
    }
    return curr;
}

/// Unnormalized radial oscillator function u_nl(r) = r^{l+1} e^{-r^2/2} L_n^{l+1/2}(r^2).
///
/// l = -1 is accepted: it yields the even whole-line solutions of the l = 0
/// radial operator (l(l+1) vanishes), which seed the lowest Case II member.
template <class T>
T radial_u(int n, int l, const T& r) {
    using std::exp;
    if (l < -1) throw InvalidArgument("radial oscillator needs l >= -1");
    if (value_of(r) < 0.0) throw InvalidArgument("radial coordinate must be non-negative");
    const T rho = r * r;
    return powi(r, l + 1) * exp(-0.5 * rho) * assoc_laguerre(n, l + 0.5, rho);
}

/// Radial oscillator eigenvalue 4n + 2l + 3.
inline double radial_energy(int n, int l) { return 4.0 * n + 2.0 * l + 3.0; }

/// Indexed family of reference eigenfunctions.
struct EigenfunctionFamily {
    std::string id;
    int min_index = 0;
    int max_index = 0;
    std::function<Jet(int, const Jet&)> evaluator;
    std::string normalization;

    bool contains(int i) const { return i >= min_index && i <= max_index; }

    Jet operator()(int i, const Jet& x) const {
        if (!contains(i)) throw InvalidArgument(id + ": index " + std::to_string(i) + " outside family range");
        return evaluator(i, x);
    }

    RealFn member(int i) const {
        if (!contains(i)) throw InvalidArgument(id + ": index " + std::to_string(i) + " outside family range");
        return [ev = evaluator, i](const Jet& x) { return ev(i, x); };
    }
};

inline EigenfunctionFamily hermite_family(int max_n = max_polynomial_index) {
    return {"hermite", 0, max_n, [](int n, const Jet& x) { return hermite_fn(n, x); }, "L2-normalized on the line"};
}

inline EigenfunctionFamily spherical_bessel_family(BesselKind kind, int max_l = max_bessel_order - 1) {
    return {kind == BesselKind::j ? "spherical_j" : "spherical_n", 0, max_l,
            [kind](int l, const Jet& rho) { return spherical_bessel(kind, l, rho); },
            "standard normalization, j_0 = sin(rho)/rho"};
}

/// u_nl at fixed l, indexed by n.
inline EigenfunctionFamily radial_family_in_n(int l, int max_n = max_polynomial_index) {
    return {"radial_u(n; l=" + std::to_string(l) + ")", 0, max_n,
            [l](int n, const Jet& r) { return radial_u(n, l, r); }, "unnormalized"};
}

/// u_nl at fixed n, indexed by l (l = -1 allowed as lowest seed).
inline EigenfunctionFamily radial_family_in_l(int n, int max_l = 40) {
    return {"radial_u(l; n=" + std::to_string(n) + ")", -1, max_l,
            [n](int l, const Jet& r) { return radial_u(n, l, r); }, "unnormalized"};
}

}  // namespace isospec
