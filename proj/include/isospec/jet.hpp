#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

namespace isospec {

/// Truncated Taylor series in one variable.
///
/// A Jet stores the normalized Taylor coefficients c[k] = f^(k)(x0) / k!
/// of a function around an expansion point. Arithmetic on jets propagates
/// exact derivatives through any composition of the supported primitives,
/// which is how every coefficient function in this library carries its
/// analytic derivatives.
class Jet {
public:
    static constexpr int order = 6;
    static constexpr std::size_t size = order + 1;

    constexpr Jet() = default;
    constexpr Jet(double value) { c_[0] = value; }  // NOLINT: implicit by intent

    /// Independent variable seeded at x: f(x) = x, f' = 1.
    static constexpr Jet variable(double x) {
        Jet j(x);
        j.c_[1] = 1.0;
        return j;
    }

    constexpr double value() const { return c_[0]; }
    constexpr double coeff(int k) const { return c_[static_cast<std::size_t>(k)]; }
    constexpr double& coeff(int k) { return c_[static_cast<std::size_t>(k)]; }

    /// k-th derivative at the expansion point.
    constexpr double derivative(int k = 1) const {
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        return c_[static_cast<std::size_t>(k)] * fact;
    }

    bool finite() const {
        for (double v : c_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    Jet& operator+=(const Jet& o) {
        for (std::size_t k = 0; k < size; ++k) c_[k] += o.c_[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t k = 0; k < size; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Jet& operator*=(double s) {
        for (double& v : c_) v *= s;
        return *this;
    }
    Jet& operator/=(double s) {
        for (double& v : c_) v /= s;
        return *this;
    }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }
    Jet& operator/=(const Jet& o) { return *this = *this / o; }

    friend Jet operator-(Jet a) {
        for (double& v : a.c_) v = -v;
        return a;
    }
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double b) { a.c_[0] += b; return a; }
    friend Jet operator+(double a, Jet b) { b.c_[0] += a; return b; }
    friend Jet operator-(Jet a, double b) { a.c_[0] -= b; return a; }
    friend Jet operator-(double a, const Jet& b) { return Jet(a) - b; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, double s) { return a /= s; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (std::size_t k = 0; k < size; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i <= k; ++i) s += a.c_[i] * b.c_[k - i];
            r.c_[k] = s;
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) {
        Jet q;
        for (std::size_t k = 0; k < size; ++k) {
            double s = a.c_[k];
            for (std::size_t i = 1; i <= k; ++i) s -= b.c_[i] * q.c_[k - i];
            q.c_[k] = s / b.c_[0];
        }
        return q;
    }
    friend Jet operator/(double a, const Jet& b) { return Jet(a) / b; }

private:
    std::array<double, size> c_{};
};

/// Derivative series: coefficients of f'(x0 + s). The top coefficient is
/// unknown after differentiation and is set to zero.
inline Jet differentiate_series(const Jet& f) {
    Jet d;
    for (int k = 0; k < Jet::order; ++k) d.coeff(k) = (k + 1) * f.coeff(k + 1);
    return d;
}

/// Series of F with F' = g and F(x0) = value.
inline Jet integrate_series(const Jet& g, double value) {
    Jet F(value);
    for (int k = 1; k <= Jet::order; ++k) F.coeff(k) = g.coeff(k - 1) / k;
    return F;
}

/// Substitutes a series with zero constant term into the polynomial p(s).
inline Jet compose_series(const Jet& p, const Jet& s) {
    Jet r(p.coeff(Jet::order));
    for (int k = Jet::order - 1; k >= 0; --k) r = r * s + p.coeff(k);
    return r;
}

inline Jet exp(const Jet& a) {
    Jet e(std::exp(a.value()));
    for (int k = 1; k <= Jet::order; ++k) {
        double s = 0.0;
        for (int i = 1; i <= k; ++i) s += i * a.coeff(i) * e.coeff(k - i);
        e.coeff(k) = s / k;
    }
    return e;
}

inline Jet log(const Jet& a) {
    Jet l(std::log(a.value()));
    for (int k = 1; k <= Jet::order; ++k) {
        double s = 0.0;
        for (int i = 1; i < k; ++i) s += i * l.coeff(i) * a.coeff(k - i);
        l.coeff(k) = (a.coeff(k) - s / k) / a.value();
    }
    return l;
}

inline void sincos(const Jet& a, Jet& s, Jet& c) {
    s = Jet(std::sin(a.value()));
    c = Jet(std::cos(a.value()));
    for (int k = 1; k <= Jet::order; ++k) {
        double ss = 0.0, cc = 0.0;
        for (int i = 1; i <= k; ++i) {
            ss += i * a.coeff(i) * c.coeff(k - i);
            cc += i * a.coeff(i) * s.coeff(k - i);
        }
        s.coeff(k) = ss / k;
        c.coeff(k) = -cc / k;
    }
}

inline Jet sin(const Jet& a) {
    Jet s, c;
    sincos(a, s, c);
    return s;
}

inline Jet cos(const Jet& a) {
    Jet s, c;
    sincos(a, s, c);
    return c;
}

/// Real power for positive base.
inline Jet pow(const Jet& a, double alpha) {
    Jet p(std::pow(a.value(), alpha));
    for (int k = 1; k <= Jet::order; ++k) {
        double s = 0.0;
        for (int i = 1; i <= k; ++i) s += ((alpha + 1.0) * i - k) * a.coeff(i) * p.coeff(k - i);
        p.coeff(k) = s / (k * a.value());
    }
    return p;
}

inline Jet sqrt(const Jet& a) { return pow(a, 0.5); }

/// Error function; its derivative 2/sqrt(pi) e^{-x^2} is a jet primitive.
inline Jet erf(const Jet& a) {
    const double two_over_sqrt_pi = 1.1283791670955126;
    Jet d = two_over_sqrt_pi * exp(-(Jet::variable(a.value()) * Jet::variable(a.value())));
    Jet local = integrate_series(d, std::erf(a.value()));
    Jet shift = a;
    shift.coeff(0) = 0.0;
    return compose_series(local, shift);
}

/// Integer power valid for any sign of the base.
template <class T>
T powi(const T& x, int n) {
    if (n < 0) return T(1.0) / powi(x, -n);
    T result(1.0);
    T base = x;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

/// Real function of one variable with exact derivatives through jets.
using RealFn = std::function<Jet(const Jet&)>;

inline Jet eval_jet(const RealFn& f, double x) { return f(Jet::variable(x)); }
inline double eval(const RealFn& f, double x) { return f(Jet(x)).value(); }
inline double eval_derivative(const RealFn& f, double x, int k = 1) {
    return f(Jet::variable(x)).derivative(k);
}

inline RealFn constant_fn(double c) {
    return [c](const Jet&) { return Jet(c); };
}

/// f' as a function, evaluated exactly up to order-1 terms.
inline RealFn derivative_fn(RealFn f) {
    return [f = std::move(f)](const Jet& x) {
        Jet d = differentiate_series(f(Jet::variable(x.value())));
        Jet shift = x;
        shift.coeff(0) = 0.0;
        return compose_series(d, shift);
    };
}

inline RealFn operator+(RealFn f, RealFn g) {
    return [f = std::move(f), g = std::move(g)](const Jet& x) { return f(x) + g(x); };
}
inline RealFn operator-(RealFn f, RealFn g) {
    return [f = std::move(f), g = std::move(g)](const Jet& x) { return f(x) - g(x); };
}
inline RealFn operator*(RealFn f, RealFn g) {
    return [f = std::move(f), g = std::move(g)](const Jet& x) { return f(x) * g(x); };
}
inline RealFn operator/(RealFn f, RealFn g) {
    return [f = std::move(f), g = std::move(g)](const Jet& x) { return f(x) / g(x); };
}
inline RealFn scaled(RealFn f, double s) {
    return [f = std::move(f), s](const Jet& x) { return f(x) * s; };
}
inline RealFn shifted(RealFn f, double c) {
    return [f = std::move(f), c](const Jet& x) { return f(x) + c; };
}

}  // namespace isospec
