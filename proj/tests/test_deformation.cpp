#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "isospec/catalog.hpp"
#include "isospec/deformation.hpp"

using namespace isospec;
using Catch::Approx;

namespace {

double oscillator_nu(double lambda, double x) {
    return std::exp(-x * x) / (lambda + 0.5 * std::sqrt(std::numbers::pi) * std::erf(x));
}

double sup_norm(const RealFn& f, const Grid& g) {
    double w = 0.0;
    for (int i = 0; i < g.count(); ++i) w = std::max(w, std::abs(eval(f, g[i])));
    return w;
}

}  // namespace

TEST_CASE("quadrature Riccati solution matches the oscillator closed form", "[deformation]") {
    const Grid g = make_uniform_grid(-6.0, 6.0, 1201);
    const auto r = nu_general(oscillator_scheme(), 2.0, g);
    CHECK_FALSE(r.closed_form);
    double worst = 0.0;
    for (int i = 0; i < g.count(); ++i) worst = std::max(worst, std::abs(eval(r.nu, g[i]) - oscillator_nu(2.0, g[i])));
    CHECK(worst < 1e-9);
    CHECK(riccati_residual(r, g) < 1e-9);
    CHECK(eta_nu_relation(r, g) < 1e-12);
}

TEST_CASE("free particle Riccati solution is 1/(lambda + x)", "[deformation]") {
    const Grid g = make_uniform_grid(-2.0, 10.0, 601);
    const auto r = nu_general(free1d_scheme(), 3.0, g);
    for (int i = 0; i < g.count(); i += 20) CHECK(eval(r.nu, g[i]) == Approx(1.0 / (3.0 + g[i])).epsilon(1e-10));
    CHECK(riccati_residual(r, g) < 1e-9);
}

TEST_CASE("a huge lambda degenerates to the undeformed operator", "[deformation]") {
    const Grid g = make_uniform_grid(-10.0, 10.0, 801);
    const auto r = nu_general(oscillator_scheme(), 1e12, g);
    CHECK(sup_norm(r.nu, g) < 2e-12);
    CHECK(sup_norm(r.shift, g) < 2e-12);
    const auto base = schrodinger(0.5, [](const Jet& x) { return 0.5 * x * x; });
    const auto def = deformed_operator(base, r);
    double worst = 0.0;
    for (int i = 0; i < g.count(); ++i) worst = std::max(worst, std::abs(eval(def.R, g[i]) - eval(base.R, g[i])));
    CHECK(worst < 1e-12);
}

TEST_CASE("the shift decays like 1/lambda", "[deformation][property]") {
    const Grid g = make_uniform_grid(-4.0, 4.0, 401);
    auto shift = [&](double lambda) { return sup_norm(nu_general(oscillator_scheme(), lambda, g).shift, g); };
    double previous = HUGE_VAL;
    for (double lambda : {2.0, 20.0, 200.0, 2000.0}) {
        const double s = shift(lambda);
        CHECK(s < previous);
        previous = s;
    }
    CHECK(2000.0 * shift(2000.0) == Approx(20000.0 * shift(20000.0)).epsilon(1e-3));
    CHECK(shift(-2000.0) == Approx(shift(2000.0)).epsilon(1e-3));
}

TEST_CASE("Case II solution for free 3-D l = 1 matches the closed form", "[deformation]") {
    const Grid g = make_uniform_grid(0.05, 20.0, 800);
    DeformationOptions opt;
    opt.exponent_origin = 1.0;
    opt.offset_tail = true;
    const int l = 1;
    const double lambda = -1.0;
    const auto r = eta_case2(free3d_scheme(CaseTag::II, l), lambda, g, opt);
    CHECK(r.tag == SchemeTag::case_II);
    for (int i = 0; i < g.count(); i += 25) {
        const double rho = g[i];
        const double closed = std::pow(rho, -2 * l) / (lambda + std::pow(rho, 1 - 2 * l) / (1 - 2 * l));
        CHECK(eval(r.eta, rho) == Approx(closed).epsilon(1e-9));
    }
    CHECK(riccati_residual(r, g) < 1e-9);
    CHECK(eta_nu_relation(r, g) < 1e-12);
}

TEST_CASE("Case II solution vanishes for huge lambda", "[deformation]") {
    const Grid g = make_uniform_grid(0.5, 10.0, 200);
    DeformationOptions opt;
    opt.exponent_origin = 1.0;
    opt.offset_tail = true;
    const auto r = eta_case2(free3d_scheme(CaseTag::II, 2), 1e12, g, opt);
    CHECK(sup_norm(r.eta, g) < 1e-10);
}

TEST_CASE("quadrature path reproduces the free 3-D Case I closed form", "[deformation]") {
    const Grid g = make_uniform_grid(0.05, 6.0, 400);
    DeformationOptions opt;
    opt.exponent_origin = 1.0;
    for (int l = 0; l <= 3; ++l) {
        const auto r = nu_general(free3d_scheme(CaseTag::I, l), -1.0, g, opt);
        for (int i = 0; i < g.count(); i += 40) {
            const double rho = g[i];
            const double closed = std::pow(rho, 2 * l + 2) / (-1.0 - std::pow(rho, 2 * l + 3) / (2 * l + 3));
            CHECK(eval(r.nu, rho) == Approx(closed).epsilon(1e-9));
        }
    }
}

TEST_CASE("Riccati residual of the trivial and perturbed solutions", "[deformation]") {
    const Grid g = make_uniform_grid(-5.0, 5.0, 501);
    const auto s = oscillator_scheme();
    CHECK(riccati_residual(constant_fn(0.0), s, g) == 0.0);
    const auto r = nu_general(s, 2.0, g);
    CHECK(riccati_residual(r.u, s, g) < 1e-9);
    CHECK(riccati_residual(shifted(r.u, 1e-3), s, g) >= 1e-4);
}

TEST_CASE("singularity scan brackets denominator zeros", "[deformation][scan]") {
    const RealFn free_den = [](const Jet& x) { return 3.0 + x; };
    const auto roots = singularity_scan(free_den, -10.0, 10.0, 4000);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == Approx(-3.0).margin(1e-11));

    const RealFn osc_den = [](const Jet& x) { return 2.0 + 0.5 * std::sqrt(std::numbers::pi) * erf(x); };
    CHECK(singularity_scan(osc_den, -10.0, 10.0, 4000).empty());

    const auto iso = build_family(ModelId::isotropic_l, CaseTag::I, -1.0);
    const auto m = iso.member(0);
    CHECK(singularity_scan(m.deformation.denominator, iso.domain.lower, iso.domain.upper, 4000).empty());
    CHECK(m.deformation.singularities.empty());
}

TEST_CASE("singular lambda is refused with the singular points", "[deformation][scan]") {
    const Grid g = make_uniform_grid(-10.0, 10.0, 2001);
    try {
        nu_general(free1d_scheme(), 3.0, g);
        FAIL("expected a validity error");
    } catch (const ValidityError& e) {
        REQUIRE(e.points().size() == 1);
        CHECK(e.points()[0] == Approx(-3.0).margin(1e-10));
    }
    // A domain that excludes the singular point is accepted.
    CHECK_NOTHROW(nu_general(free1d_scheme(), 3.0, make_uniform_grid(-2.0, 10.0, 601)));
}

TEST_CASE("deformed oscillator potential is x^2/2 minus the derivative of nu", "[deformation]") {
    const auto m = models::oscillator(2.0, make_uniform_grid(-10.0, 10.0, 2001));
    for (double x : {-3.0, -1.0, 0.0, 0.4, 2.5}) {
        const double dnu = eval_derivative(m.deformation.nu, x);
        CHECK(eval(m.deformed.R, x) == Approx(0.5 * x * x - dnu).margin(1e-14));
    }
}

TEST_CASE("deformed free particle potential is 2/(lambda + x)^2", "[deformation]") {
    const auto m = models::free1d(3.0, make_uniform_grid(-2.0, 10.0, 1201));
    for (double x : {-1.5, 0.0, 4.0}) CHECK(eval(m.deformed.R, x) == Approx(2.0 / ((3.0 + x) * (3.0 + x))).epsilon(1e-14));
    CHECK(eval(m.deformed.R, 0.0) == Approx(2.0 / 9.0).epsilon(1e-15));
    // The deformed potential equals 2 nu^2 = -2 nu', not +2 nu'.
    CHECK(eval(m.deformed.R, 1.0) == Approx(-2.0 * eval_derivative(m.deformation.nu, 1.0)).epsilon(1e-14));
}

TEST_CASE("deformed factors keep the product and give the deformed partner", "[deformation][property]") {
    const Grid g = make_uniform_grid(0.05, 8.0, 400);
    for (CaseTag c : {CaseTag::I, CaseTag::II}) {
        const auto f = build_family(ModelId::isotropic_l, c, -1.0);
        for (int l = f.min_member; l <= 3; ++l) {
            const auto m = f.member(l);
            FactorizationScheme d = m.deformation.scheme;
            d.left = m.deformation.left;
            d.right = m.deformation.right;
            INFO(to_string(c) << " l = " << l);
            CHECK(compare_operators(m.deformation.scheme.product(), d.product(), g, 1e-8).pass());
            CHECK(compare_operators(m.deformed, d.partner(), g, 1e-8).pass());
            CHECK(eta_nu_relation(m.deformation, g) < 1e-12);
        }
    }
}
