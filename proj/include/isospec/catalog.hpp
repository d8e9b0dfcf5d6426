#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isospec/deformation.hpp"
#include "isospec/errors.hpp"
#include "isospec/jet.hpp"
#include "isospec/numeric.hpp"
#include "isospec/operators.hpp"
#include "isospec/special_functions.hpp"

namespace isospec {

enum class ModelId { oscillator1d, free1d, free3d, isotropic_l, isotropic_n };
enum class CaseTag { unique, I, II };

inline std::string to_string(ModelId m) {
    switch (m) {
        case ModelId::oscillator1d: return "oscillator1d";
        case ModelId::free1d: return "free1d";
        case ModelId::free3d: return "free3d";
        case ModelId::isotropic_l: return "isotropic-l";
        case ModelId::isotropic_n: return "isotropic-n";
    }
    return "?";
}

inline std::string to_string(CaseTag c) {
    switch (c) {
        case CaseTag::unique: return "unique";
        case CaseTag::I: return "I";
        case CaseTag::II: return "II";
    }
    return "?";
}

inline ModelId parse_model(const std::string& s) {
    for (auto m : {ModelId::oscillator1d, ModelId::free1d, ModelId::free3d, ModelId::isotropic_l, ModelId::isotropic_n})
        if (to_string(m) == s) return m;
    throw InvalidArgument("unknown model '" + s + "'");
}

inline CaseTag parse_case(const std::string& s) {
    if (s == "unique") return CaseTag::unique;
    if (s == "I" || s == "1") return CaseTag::I;
    if (s == "II" || s == "2") return CaseTag::II;
    throw InvalidArgument("unknown case tag '" + s + "'");
}

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

/// Selects one state of a family. n and l are the level and angular indices
/// of the deformed state (l picks the family member for l-ladders, n for the
/// n-ladder); k is the free-particle wave number and phase the point where
/// the free seed sin(k(x - phase)) vanishes.
struct StateLabel {
    int n = 0;
    int l = 0;
    double k = 0.0;
    std::optional<double> phase;
};

/// One deformed operator of a family together with its seeds.
struct FamilyMember {
    int index = 0;
    SecondOrderOperator base;      ///< the member's undeformed operator (reversed product)
    SecondOrderOperator seed_operator;  ///< left*right + k, whose eigenfunctions seed the member
    SecondOrderOperator deformed;
    DeformationResult deformation;
    std::optional<SecondOrderOperator> semi_isospectral;
};

struct DeformedFamily {
    ModelId model = ModelId::oscillator1d;
    CaseTag case_tag = CaseTag::unique;
    double lambda = 0.0;
    Interval domain;
    BesselKind seed_kind = BesselKind::j;
    int min_member = 0;
    int max_member = 0;
    double weight_power = 0.0;   ///< inner products carry the weight x^weight_power
    double adjoint_scale = 0.0;  ///< c with (right)^dagger = c * left; 0 when no pairing holds
    bool radial = false;
    std::function<FamilyMember(int)> builder;
    std::function<bool(double)> lambda_valid;

    FamilyMember member(int m) const {
        if (m < min_member || m > max_member)
            throw InvalidArgument(to_string(model) + ": member " + std::to_string(m) + " outside family range");
        return builder(m);
    }

    int member_of(const StateLabel& s) const {
        switch (model) {
            case ModelId::free3d:
            case ModelId::isotropic_l: return s.l;
            case ModelId::isotropic_n: return s.n;
            default: return 0;
        }
    }

    RealFn weight() const {
        const double p = weight_power;
        if (p == 0.0) return constant_fn(1.0);
        return [p](const Jet& x) { return powi(x, static_cast<int>(p)); };
    }
};

namespace detail {

inline RealFn var() {
    return [](const Jet& x) { return x; };
}

/// c * x^p for integer p.
inline RealFn monomial(double c, int p) {
    return [c, p](const Jet& x) { return c * powi(x, p); };
}

inline Grid domain_grid(const Interval& d, int count = 2001) { return make_uniform_grid(d.lower, d.upper, count); }

inline DeformationOptions scan_options() {
    DeformationOptions o;
    o.scan_resolution = 4000;
    return o;
}

inline SecondOrderOperator free3d_operator(int l) {
    const double c = l * (l + 1.0);
    return {constant_fn(-1.0), monomial(-2.0, -1), monomial(c, -2), l, "H_" + std::to_string(l)};
}

inline SecondOrderOperator isotropic_operator(int l) {
    const double c = l * (l + 1.0);
    return schrodinger(1.0, [c](const Jet& r) { return r * r + c / (r * r); }, "H_" + std::to_string(l));
}

// l/r + r style multiplicative coefficients of the isotropic ladders.
inline RealFn inverse_plus_linear(double a) {
    return [a](const Jet& r) { return a / r + r; };
}

}  // namespace detail

/// Oscillator scheme: H = (x+D)/2 (x-D) - 1/2, partner (x-D)(x+D)/2 + 1/2 = H.
inline FactorizationScheme oscillator_scheme() {
    FactorizationScheme s;
    s.left = FirstOrderOperator::raising(scaled(detail::var(), 0.5), constant_fn(0.5), "(x+D)/2");
    s.right = FirstOrderOperator::lowering(detail::var(), constant_fn(1.0), "x-D");
    s.left.shift = -1;
    s.right.shift = +1;
    s.k = -0.5;
    s.partner_k = 0.5;
    s.tag = SchemeTag::case_I;
    s.name = "oscillator";
    return s;
}

/// Free particle: H = D(-D), partner (-D)D = H.
inline FactorizationScheme free1d_scheme() {
    FactorizationScheme s;
    s.left = FirstOrderOperator::raising(constant_fn(0.0), constant_fn(1.0), "a");
    s.right = FirstOrderOperator::lowering(constant_fn(0.0), constant_fn(1.0), "a+");
    s.tag = SchemeTag::case_I;
    s.name = "free1d";
    return s;
}

/// Spherical Bessel raising A+_l = l/rho - D.
inline FirstOrderOperator bessel_raising(int l) {
    auto op = FirstOrderOperator::raising(detail::monomial(l, -1), constant_fn(-1.0), "A+_" + std::to_string(l));
    op.index = l;
    op.step = 1.0;
    return op;
}

/// Spherical Bessel lowering A-_l = (l+1)/rho + D.
inline FirstOrderOperator bessel_lowering(int l) {
    auto op = FirstOrderOperator::lowering(detail::monomial(l + 1.0, -1), constant_fn(-1.0), "A-_" + std::to_string(l));
    op.index = l;
    op.step = 1.0;
    return op;
}

/// Case I member l: A+_l A-_{l+1} = H_{l+1}, reversed product H_l.
/// Case II member l: A-_l A+_{l-1} = H_{l-1}, reversed product H_l.
inline FactorizationScheme free3d_scheme(CaseTag c, int l) {
    FactorizationScheme s;
    if (c == CaseTag::II) {
        s.left = bessel_lowering(l);
        s.right = bessel_raising(l - 1);
        s.tag = SchemeTag::case_II;
    } else {
        s.left = bessel_raising(l);
        s.right = bessel_lowering(l + 1);
        s.tag = SchemeTag::case_I;
    }
    s.name = "free3d(" + to_string(c) + ", l=" + std::to_string(l) + ")";
    return s;
}

/// Isotropic oscillator lowering a-_l = l/r + r + D.
inline FirstOrderOperator isotropic_lowering(int l) {
    auto op = FirstOrderOperator::lowering(detail::inverse_plus_linear(l), constant_fn(-1.0), "a-_" + std::to_string(l));
    op.index = l;
    return op;
}

/// Isotropic oscillator raising a+_l = (l+1)/r + r - D.
inline FirstOrderOperator isotropic_raising(int l) {
    auto op = FirstOrderOperator::raising(detail::inverse_plus_linear(l + 1.0), constant_fn(-1.0), "a+_" + std::to_string(l));
    op.index = l;
    return op;
}

/// H_l = a+_{l-1} a-_l - (2l-1) = a-_{l+1} a+_l - (2l+3).
inline double isotropic_k1(int l) { return -(2.0 * l - 1.0); }
inline double isotropic_k2(int l) { return -(2.0 * l + 3.0); }

inline FactorizationScheme isotropic_scheme(CaseTag c, int l) {
    FactorizationScheme s;
    if (c == CaseTag::II) {
        s.left = isotropic_lowering(l);
        s.right = isotropic_raising(l - 1);
        s.k = isotropic_k2(l - 1);
        s.partner_k = isotropic_k1(l);
        s.tag = SchemeTag::case_II;
    } else {
        s.left = isotropic_raising(l);
        s.right = isotropic_lowering(l + 1);
        s.k = isotropic_k1(l + 1);
        s.partner_k = isotropic_k2(l);
        s.tag = SchemeTag::case_I;
    }
    s.name = "isotropic-l(" + to_string(c) + ", l=" + std::to_string(l) + ")";
    return s;
}

/// n-ladder lowering a-_n = n + 1/2 - r^2/2 - (r/2) D.
inline FirstOrderOperator n_lowering(int n) {
    const double c = n + 0.5;
    auto op = FirstOrderOperator::generic([c](const Jet& r) { return c - 0.5 * r * r; }, scaled(detail::var(), -0.5),
                                          "a-_" + std::to_string(n));
    op.shift = -1;
    op.index = n;
    op.step = c;
    return op;
}

/// n-ladder raising a+_n = n + 1 - r^2/2 + (r/2) D.
inline FirstOrderOperator n_raising(int n) {
    const double c = n + 1.0;
    auto op = FirstOrderOperator::generic([c](const Jet& r) { return c - 0.5 * r * r; }, scaled(detail::var(), 0.5),
                                          "a+_" + std::to_string(n));
    op.shift = +1;
    op.index = n;
    op.step = c;
    return op;
}

/// E_n = a-_{n+1} a+_n (left*right), reversed product D_{n+1}.
inline FactorizationScheme n_ladder_scheme(int n) {
    FactorizationScheme s;
    s.left = n_lowering(n + 1);
    s.right = n_raising(n);
    s.tag = SchemeTag::case_II;
    s.name = "isotropic-n(n=" + std::to_string(n) + ")";
    return s;
}

inline double n_ladder_e(int n) { return (n + 1.0) * (n + 1.5); }
inline double n_ladder_d(int n) { return n * (n + 0.5); }

/// The two operators built from the n-ladder at level n, each in composed
/// form and in the form (r^2/4)[H_0 - eps_n0] + constant.
struct ConjugatePair {
    SecondOrderOperator E_composed;
    SecondOrderOperator D_composed;
    SecondOrderOperator E_closed;
    SecondOrderOperator D_closed;
    double e = 0.0;
    double d = 0.0;
};

inline SecondOrderOperator n_ladder_closed(int n, double constant) {
    const double eps = radial_energy(n, 0);
    return detail::isotropic_operator(0).plus(-eps).times([](const Jet& r) { return 0.25 * r * r; }).plus(constant);
}

inline ConjugatePair conjugate_pair(int n) {
    if (n < 0) throw InvalidArgument("n-ladder index must be non-negative");
    ConjugatePair p;
    p.e = n_ladder_e(n);
    p.d = n_ladder_d(n);
    p.E_composed = compose(n_lowering(n + 1), n_raising(n));
    p.E_composed.name = "E_" + std::to_string(n);
    p.E_closed = n_ladder_closed(n, p.e);
    if (n == 0) {
        // a+_{-1} is a legitimate operator; D_0 annihilates u_00.
        p.D_composed = compose(n_raising(-1), n_lowering(0));
    } else {
        p.D_composed = compose(n_raising(n - 1), n_lowering(n));
    }
    p.D_composed.name = "D_" + std::to_string(n);
    p.D_closed = n_ladder_closed(n, p.d);
    return p;
}

namespace detail {

inline FamilyMember make_member(int index, SecondOrderOperator base, SecondOrderOperator seed_operator,
                                DeformationResult def) {
    FamilyMember m;
    m.index = index;
    m.seed_operator = std::move(seed_operator);
    m.deformed = deformed_operator(base, def);
    m.base = std::move(base);
    m.deformation = std::move(def);
    return m;
}

inline std::vector<double> merge_points(std::vector<double> a, const std::vector<double>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace detail

/// Closed-form member builders.
namespace models {

inline FamilyMember oscillator(double lambda, const Grid& g) {
    const auto s = oscillator_scheme();
    RealFn F = [](const Jet& x) { return 0.5 * std::sqrt(std::numbers::pi) * erf(x); };
    RealFn den = shifted(F, lambda);
    RealFn expo = [](const Jet& x) { return -(x * x); };
    RealFn u = [den](const Jet& x) { return exp(-(x * x)) / den(x); };
    auto def = closed_form_deformation(s, SchemeTag::case_I, lambda, u, expo, den, g, detail::scan_options());
    const auto H = schrodinger(0.5, [](const Jet& x) { return 0.5 * x * x; }, "H");
    return detail::make_member(0, H, H, std::move(def));
}

inline FamilyMember free1d(double lambda, const Grid& g) {
    const auto s = free1d_scheme();
    RealFn den = [lambda](const Jet& x) { return lambda + x; };
    RealFn u = [lambda](const Jet& x) { return 1.0 / (lambda + x); };
    auto def = closed_form_deformation(s, SchemeTag::case_I, lambda, u, constant_fn(0.0), den, g,
                                       detail::scan_options());
    const auto H = schrodinger(1.0, constant_fn(0.0), "H");
    return detail::make_member(0, H, H, std::move(def));
}

inline FamilyMember free3d(CaseTag c, int l, double lambda, const Grid& g) {
    const auto s = free3d_scheme(c, l);
    RealFn den, expo;
    int power = 0;
    if (c == CaseTag::II) {
        if (l < 1) throw InvalidArgument("free3d Case II members start at l = 1");
        power = -2 * l;
        const double a = 2.0 * l - 1.0;
        den = [lambda, a, l](const Jet& r) { return lambda - powi(r, 1 - 2 * l) / a; };
    } else {
        power = 2 * l + 2;
        const double a = 2.0 * l + 3.0;
        den = [lambda, a, l](const Jet& r) { return lambda - powi(r, 2 * l + 3) / a; };
    }
    expo = [power](const Jet& r) { return power * log(r); };
    RealFn u = [den, power](const Jet& r) { return powi(r, power) / den(r); };
    auto def = closed_form_deformation(s, s.tag, lambda, u, expo, den, g, detail::scan_options());
    const int seed_l = c == CaseTag::II ? l - 1 : l + 1;
    return detail::make_member(l, detail::free3d_operator(l), detail::free3d_operator(seed_l), std::move(def));
}

inline FamilyMember isotropic_l(CaseTag c, int l, double lambda, const Grid& g) {
    const auto s = isotropic_scheme(c, l);
    const Tolerances tol = default_tolerances();
    RealFn den, expo;
    if (c == CaseTag::II) {
        const int p = -2 * l;
        RealFn w = [p](const Jet& x) { return powi(x, p) * exp(-(x * x)); };
        auto T = RunningIntegral::tail(w, g.lower(), g.upper(), tol);
        den = [lambda, T](const Jet& r) { return lambda - T(r); };
        expo = [p](const Jet& r) { return p * log(r) - r * r; };
    } else {
        const int p = 2 * l + 2;
        RealFn w = [p](const Jet& x) { return powi(x, p) * exp(x * x); };
        auto S = RunningIntegral::from_origin(w, 0.0, 0.0, g.upper(), tol);
        den = [lambda, S](const Jet& r) { return lambda - S(r); };
        expo = [p](const Jet& r) { return p * log(r) + r * r; };
    }
    RealFn u = [expo, den](const Jet& r) { return exp(expo(r)) / den(r); };
    auto def = closed_form_deformation(s, s.tag, lambda, u, expo, den, g, detail::scan_options());
    const int seed_l = c == CaseTag::II ? l - 1 : l + 1;
    return detail::make_member(l, detail::isotropic_operator(l), detail::isotropic_operator(seed_l), std::move(def));
}

inline FamilyMember isotropic_n(int n, double lambda, const Grid& g) {
    if (n < 0) throw InvalidArgument("n-ladder index must be non-negative");
    const auto s = n_ladder_scheme(n);
    const int p = 4 * n + 4;
    RealFn w = [p](const Jet& x) { return 2.0 * powi(x, p) * exp(-(x * x)); };
    auto S = RunningIntegral::from_origin(w, 0.0, 0.0, g.upper(), default_tolerances());
    RealFn den = [lambda, S](const Jet& r) { return lambda - S(r); };
    RealFn expo = [n](const Jet& r) { return (4.0 * n + 5.0) * log(r) - r * r; };
    RealFn u = [expo, den](const Jet& r) { return exp(expo(r)) / den(r); };
    auto def = closed_form_deformation(s, SchemeTag::case_II, lambda, u, expo, den, g, detail::scan_options());
    const auto pair = conjugate_pair(n + 1);
    FamilyMember m = detail::make_member(n, pair.D_closed, conjugate_pair(n).E_closed, std::move(def));
    m.deformed.name = "E^lambda_" + std::to_string(n);
    // E^lambda_n = (r^2/4)[H_0 + 4 V / r^2 - eps_{n+1,0}] + e_n with V = r u'.
    const RealFn du = derivative_fn(u);
    RealFn v = [du](const Jet& r) { return 4.0 * du(r) / r; };
    m.semi_isospectral = detail::isotropic_operator(0).plus(v, "H^lambda_" + std::to_string(n + 1));
    return m;
}

}  // namespace models

namespace detail {

inline Interval default_domain(ModelId m) {
    switch (m) {
        case ModelId::oscillator1d: return {-10.0, 10.0};
        case ModelId::free1d: return {-2.0, 10.0};
        case ModelId::free3d: return {0.05, 20.0};
        case ModelId::isotropic_l: return {0.01, 8.0};
        case ModelId::isotropic_n: return {0.01, 8.0};
    }
    return {};
}

}  // namespace detail

inline Interval default_domain(ModelId m) { return detail::default_domain(m); }

/// Builds a deformed family. l-ladders and the n-ladder hold one member per
/// index; the lowest member is constructed eagerly so an invalid lambda is
/// reported here with the singular points.
inline DeformedFamily build_family(ModelId model, CaseTag c, double lambda, std::optional<Interval> domain = {},
                                   BesselKind seed_kind = BesselKind::j, int max_member = 8) {
    DeformedFamily f;
    f.model = model;
    f.case_tag = c;
    f.lambda = lambda;
    f.domain = domain.value_or(detail::default_domain(model));
    f.seed_kind = seed_kind;
    f.max_member = max_member;
    if (!(f.domain.lower < f.domain.upper)) throw InvalidArgument("empty domain");
    const Grid g = detail::domain_grid(f.domain);
    const double sqrt_pi_2 = 0.5 * std::sqrt(std::numbers::pi);
    switch (model) {
        case ModelId::oscillator1d:
            if (c != CaseTag::unique) throw InvalidArgument("oscillator1d has a single case (unique)");
            f.max_member = 0;
            f.adjoint_scale = 2.0;
            f.builder = [lambda, g](int) { return models::oscillator(lambda, g); };
            f.lambda_valid = [sqrt_pi_2](double lam) { return std::abs(lam) > sqrt_pi_2; };
            break;
        case ModelId::free1d:
            if (c != CaseTag::unique) throw InvalidArgument("free1d has a single case (unique)");
            f.max_member = 0;
            f.adjoint_scale = 1.0;
            f.builder = [lambda, g](int) { return models::free1d(lambda, g); };
            f.lambda_valid = [d = f.domain](double lam) { return -lam < d.lower || -lam > d.upper; };
            break;
        case ModelId::free3d:
            if (c == CaseTag::unique) throw InvalidArgument("free3d needs case I or II");
            if (f.domain.lower <= 0.0) throw InvalidArgument("radial domains must start above 0");
            f.radial = true;
            f.weight_power = 2.0;
            f.adjoint_scale = 1.0;
            f.min_member = c == CaseTag::II ? 1 : 0;
            f.builder = [c, lambda, g](int l) { return models::free3d(c, l, lambda, g); };
            f.lambda_valid = [](double lam) { return lam < 0.0; };
            break;
        case ModelId::isotropic_l:
            if (c == CaseTag::unique) throw InvalidArgument("isotropic-l needs case I or II");
            if (f.domain.lower <= 0.0) throw InvalidArgument("radial domains must start above 0");
            f.radial = true;
            f.adjoint_scale = 1.0;
            f.builder = [c, lambda, g](int l) { return models::isotropic_l(c, l, lambda, g); };
            if (c == CaseTag::I)
                f.lambda_valid = [](double lam) { return lam <= 0.0; };
            else
                f.lambda_valid = [sqrt_pi_2](double lam) { return lam < 0.0 || lam > sqrt_pi_2; };
            break;
        case ModelId::isotropic_n:
            if (c != CaseTag::unique) throw InvalidArgument("isotropic-n has a single case (unique)");
            if (f.domain.lower <= 0.0) throw InvalidArgument("radial domains must start above 0");
            f.radial = true;
            f.weight_power = -2.0;
            f.adjoint_scale = 1.0;
            f.builder = [lambda, g](int n) { return models::isotropic_n(n, lambda, g); };
            f.lambda_valid = [](double lam) { return lam <= 0.0; };
            break;
    }
    f.builder(f.min_member);
    return f;
}

/// Seed eigenfunction mapped to the given deformed state, with the eigenvalue
/// of that seed under the member's left*right + k.
struct Seed {
    RealFn phi;
    double eigenvalue = 0.0;
};

inline Seed seed_of(const DeformedFamily& f, const StateLabel& s) {
    switch (f.model) {
        case ModelId::oscillator1d:
            if (s.n < 1) throw InvalidArgument("oscillator product states start at n = 1");
            return {[n = s.n - 1](const Jet& x) { return hermite_fn(n, x); }, s.n - 1 + 0.5};
        case ModelId::free1d: {
            const double k = s.k, x0 = s.phase.value_or(f.domain.lower);
            return {[k, x0](const Jet& x) { return sin(k * (x - x0)); }, k * k};
        }
        case ModelId::free3d: {
            const int l = f.case_tag == CaseTag::II ? s.l - 1 : s.l + 1;
            return {[kind = f.seed_kind, l](const Jet& r) { return spherical_bessel(kind, l, r); }, 1.0};
        }
        case ModelId::isotropic_l: {
            const int l = f.case_tag == CaseTag::II ? s.l - 1 : s.l + 1;
            return {[n = s.n, l](const Jet& r) { return radial_u(n, l, r); }, radial_energy(s.n, l)};
        }
        case ModelId::isotropic_n:
            return {[n = s.n](const Jet& r) { return radial_u(n, 0, r); }, n_ladder_e(s.n)};
    }
    throw InvalidArgument("unknown model");
}

/// Seed eigenvalue as an eigenvalue of left*right + k. For the l-ladders
/// left*right + k is the radial operator of the seed's l.
inline double seed_eigenvalue(const DeformedFamily& f, const StateLabel& s) { return seed_of(f, s).eigenvalue; }

/// Eigenvalue of the deformed state under its member operator.
inline double eigenvalue(const DeformedFamily& f, const StateLabel& s) {
    if (f.model == ModelId::oscillator1d) return s.n + 0.5;
    const FamilyMember m = f.member(f.member_of(s));
    return m.deformation.partner_eigenvalue(seed_eigenvalue(f, s));
}

inline RealFn special_state(const DeformedFamily& f);

/// Deformed eigenfunction: the deformed right factor applied to the seed.
/// The oscillator ground state (n = 0) is the annihilated special state.
inline RealFn deformed_eigenfunction(const DeformedFamily& f, const StateLabel& s) {
    if (f.model == ModelId::oscillator1d && s.n == 0) return special_state(f);
    if (f.model == ModelId::oscillator1d && s.n < 0) throw InvalidArgument("negative oscillator level");
    if ((f.model == ModelId::isotropic_l || f.model == ModelId::isotropic_n) && (s.n < 0 || s.n > max_polynomial_index))
        throw InvalidArgument("radial level out of range");
    const FamilyMember m = f.member(f.member_of(s));
    return m.deformation.product_state(seed_of(f, s).phi);
}

/// Solution of deformed_left(chi) = 0 for the family's lowest member.
inline RealFn special_state(const DeformedFamily& f) {
    if (f.case_tag == CaseTag::II)
        throw UnsupportedError(to_string(f.model) + " Case II has no annihilation state");
    if (f.model == ModelId::isotropic_n) throw UnsupportedError("isotropic-n has no annihilation state");
    const FamilyMember m = f.member(f.min_member);
    const Grid g = detail::domain_grid(f.domain);
    std::optional<RealFn> ratio;
    switch (f.model) {
        case ModelId::oscillator1d: ratio = RealFn([](const Jet& x) { return 0.5 * x * x; }); break;
        case ModelId::free1d: ratio = constant_fn(0.0); break;
        case ModelId::free3d:
            ratio = RealFn([l = m.index](const Jet& r) { return -static_cast<double>(l) * log(r); });
            break;
        case ModelId::isotropic_l:
            ratio = RealFn([l = m.index](const Jet& r) { return -(l + 1.0) * log(r) - 0.5 * r * r; });
            break;
        default: break;
    }
    return annihilation_state(m.deformation, g, f.radial ? 1.0 : 0.0, ratio);
}

/// Eigenvalue of the special state: the partner constant.
inline double special_state_eigenvalue(const DeformedFamily& f) {
    return f.member(f.min_member).deformation.scheme.partner_k;
}

}  // namespace isospec
