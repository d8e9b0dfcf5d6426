#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "isospec/catalog.hpp"
#include "isospec/verify.hpp"

using namespace isospec;
using Catch::Approx;

namespace {

const Grid& radial_grid() {
    static const Grid g = make_uniform_grid(0.01, 8.0, 2001);
    return g;
}

}  // namespace

TEST_CASE("model and case vocabulary parses", "[catalog]") {
    CHECK(parse_model("oscillator1d") == ModelId::oscillator1d);
    CHECK(parse_model("free1d") == ModelId::free1d);
    CHECK(parse_model("free3d") == ModelId::free3d);
    CHECK(parse_model("isotropic-l") == ModelId::isotropic_l);
    CHECK(parse_model("isotropic-n") == ModelId::isotropic_n);
    CHECK_THROWS_AS(parse_model("hydrogen"), InvalidArgument);
    CHECK(parse_case("I") == CaseTag::I);
    CHECK(parse_case("II") == CaseTag::II);
    CHECK(parse_case("unique") == CaseTag::unique);
    CHECK_THROWS_AS(parse_case("III"), InvalidArgument);
    for (ModelId m : {ModelId::oscillator1d, ModelId::free1d, ModelId::free3d, ModelId::isotropic_l, ModelId::isotropic_n})
        CHECK(parse_model(to_string(m)) == m);
}

TEST_CASE("case tags are checked against the model", "[catalog]") {
    CHECK_THROWS_AS(build_family(ModelId::oscillator1d, CaseTag::I, 2.0), InvalidArgument);
    CHECK_THROWS_AS(build_family(ModelId::free3d, CaseTag::unique, -1.0), InvalidArgument);
    CHECK_THROWS_AS(build_family(ModelId::isotropic_n, CaseTag::II, -1.0), InvalidArgument);
    CHECK_THROWS_AS(build_family(ModelId::isotropic_l, CaseTag::I, -1.0, Interval{0.0, 8.0}), InvalidArgument);
}

TEST_CASE("oscillator family at lambda = 2", "[catalog][oscillator]") {
    const auto f = build_family(ModelId::oscillator1d, CaseTag::unique, 2.0);
    const auto m = f.member(0);
    for (double x : {-2.0, 0.0, 1.3}) {
        const double phi = std::exp(-x * x) / (2.0 + 0.5 * std::sqrt(std::numbers::pi) * std::erf(x));
        CHECK(eval(m.deformation.nu, x) == Approx(phi).epsilon(1e-14));
    }
    for (int n = 0; n <= 5; ++n) CHECK(eigenvalue(f, {n}) == n + 0.5);
    const Grid g = make_uniform_grid(-10.0, 10.0, 2001);
    CHECK(residual(m.deformed, deformed_eigenfunction(f, {1}), 1.5, g) < 1e-8);
}

TEST_CASE("oscillator validity follows the range of the error function", "[catalog][validity]") {
    CHECK_THROWS_AS(build_family(ModelId::oscillator1d, CaseTag::unique, 0.5), ValidityError);
    CHECK_THROWS_AS(build_family(ModelId::oscillator1d, CaseTag::unique, -0.8), ValidityError);
    CHECK_NOTHROW(build_family(ModelId::oscillator1d, CaseTag::unique, -0.9));
    const auto f = build_family(ModelId::oscillator1d, CaseTag::unique, 2.0);
    CHECK(f.lambda_valid(0.9));
    CHECK_FALSE(f.lambda_valid(0.88));
}

TEST_CASE("free particle family at lambda = 1 decays at infinity", "[catalog][free1d]") {
    const auto f = build_family(ModelId::free1d, CaseTag::unique, 1.0, Interval{0.0, 1000.0});
    const auto m = f.member(0);
    CHECK(eval(m.deformed.R, 0.0) == Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(eval(m.deformed.R, 1000.0)) < 3e-6);
    CHECK_THROWS_AS(build_family(ModelId::free1d, CaseTag::unique, 1.0, Interval{-10.0, 10.0}), ValidityError);
}

TEST_CASE("free particle special state is 1/(lambda + x)", "[catalog][special]") {
    const auto f = build_family(ModelId::free1d, CaseTag::unique, 3.0);
    const RealFn chi = special_state(f);
    const double scale = eval(chi, 0.0) * 3.0;
    for (double x : {-1.5, 0.0, 2.0, 9.0}) CHECK(eval(chi, x) == Approx(scale / (3.0 + x)).epsilon(1e-13));
    CHECK(special_state_eigenvalue(f) == 0.0);
}

TEST_CASE("special state of a plain derivative annihilator is constant", "[catalog][special]") {
    const auto f = build_family(ModelId::free1d, CaseTag::unique, 1e12);
    const RealFn chi = special_state(f);
    for (double x : {-2.0, 3.0, 10.0}) CHECK(eval(chi, x) == Approx(eval(chi, 0.0)).epsilon(1e-10));
}

TEST_CASE("oscillator special state is annihilated and orthogonal", "[catalog][special]") {
    const auto f = build_family(ModelId::oscillator1d, CaseTag::unique, 2.0);
    const auto m = f.member(0);
    const RealFn chi = special_state(f);
    const Grid g = make_uniform_grid(-10.0, 10.0, 2001);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < g.count(); ++i) {
        worst = std::max(worst, std::abs(m.deformation.left.at(chi, g[i])));
        scale = std::max(scale, std::abs(eval(chi, g[i])));
    }
    CHECK(worst / scale < 1e-10);
    for (double x : {-1.0, 0.5}) {
        const double expect = std::exp(-0.5 * x * x) / (2.0 + 0.5 * std::sqrt(std::numbers::pi) * std::erf(x));
        CHECK(eval(chi, x) / eval(chi, 0.0) == Approx(expect / 0.5).epsilon(1e-13));
    }
    std::vector<RealFn> states{chi};
    for (int n = 1; n <= 5; ++n) states.push_back(deformed_eigenfunction(f, {n}));
    CHECK(max_offdiagonal(normalized(gram(states, g))) < 1e-8);
}

TEST_CASE("Case II and n-ladder families have no annihilation state", "[catalog][special]") {
    CHECK_THROWS_AS(special_state(build_family(ModelId::isotropic_l, CaseTag::II, -1.0)), UnsupportedError);
    CHECK_THROWS_AS(special_state(build_family(ModelId::free3d, CaseTag::II, -1.0)), UnsupportedError);
    CHECK_THROWS_AS(special_state(build_family(ModelId::isotropic_n, CaseTag::unique, -1.0)), UnsupportedError);
}

TEST_CASE("free 3-D Case I: l = 0 state built from j_1 has eigenvalue 1", "[catalog][free3d]") {
    for (BesselKind kind : {BesselKind::j, BesselKind::n}) {
        const auto f = build_family(ModelId::free3d, CaseTag::I, -1.0, std::nullopt, kind);
        const auto m = f.member(0);
        StateLabel s;
        s.l = 0;
        CHECK(eigenvalue(f, s) == 1.0);
        CHECK(residual(m.deformed, deformed_eigenfunction(f, s), 1.0, make_uniform_grid(0.05, 20.0, 2001)) < 1e-8);
    }
}

TEST_CASE("free 3-D Case II starts at l = 1", "[catalog][free3d]") {
    const auto f = build_family(ModelId::free3d, CaseTag::II, -1.0);
    CHECK(f.min_member == 1);
    CHECK_THROWS_AS(f.member(0), InvalidArgument);
    CHECK_THROWS_AS(f.member(f.max_member + 1), InvalidArgument);
}

TEST_CASE("free 3-D Case II Riccati solution tends to -(2l-1)/rho", "[catalog][free3d][limit]") {
    const auto f = build_family(ModelId::free3d, CaseTag::II, -1.0, Interval{1e-3, 20.0});
    for (int l = 1; l <= 4; ++l) {
        const double rho = 1e-3;
        const double u = eval(f.member(l).deformation.u, rho);
        CHECK(u * rho == Approx(-(2.0 * l - 1.0)).epsilon(1e-2));
    }
}

TEST_CASE("isotropic Case II Riccati solution tends to -(2l-1)/r", "[catalog][isotropic][limit]") {
    const auto f = build_family(ModelId::isotropic_l, CaseTag::II, -1.0, Interval{1e-4, 8.0});
    for (int l = 1; l <= 3; ++l) {
        const double r = 5e-4;
        const double u = eval(f.member(l).deformation.u, r);
        CHECK(u * r == Approx(-(2.0 * l - 1.0)).epsilon(1e-2));
    }
}

TEST_CASE("isotropic validity predicates", "[catalog][validity]") {
    CHECK_THROWS_AS(build_family(ModelId::isotropic_l, CaseTag::I, 0.5), ValidityError);
    CHECK_NOTHROW(build_family(ModelId::isotropic_l, CaseTag::I, 0.0));
    CHECK_THROWS_AS(build_family(ModelId::isotropic_l, CaseTag::II, 0.5), ValidityError);
    CHECK_NOTHROW(build_family(ModelId::isotropic_l, CaseTag::II, 1.0));
    CHECK_NOTHROW(build_family(ModelId::isotropic_l, CaseTag::II, -1.0));
    const auto f = build_family(ModelId::isotropic_l, CaseTag::II, -1.0);
    CHECK(f.lambda_valid(0.9));
    CHECK_FALSE(f.lambda_valid(0.8));
}

TEST_CASE("isotropic Case I: lowest member carries eigenvalue 3", "[catalog][isotropic]") {
    const auto f = build_family(ModelId::isotropic_l, CaseTag::I, -1.0);
    StateLabel s;
    s.n = 0;
    s.l = 0;
    CHECK(seed_eigenvalue(f, s) == 5.0);
    CHECK(eigenvalue(f, s) == 3.0);
    CHECK(residual(f.member(0).deformed, deformed_eigenfunction(f, s), 3.0, radial_grid()) < 1e-7);
}

TEST_CASE("isotropic deformed eigen-relations", "[catalog][isotropic]") {
    for (CaseTag c : {CaseTag::I, CaseTag::II}) {
        const auto f = build_family(ModelId::isotropic_l, c, -1.0);
        for (int l = f.min_member; l <= 2; ++l)
            for (int n = 0; n <= 2; ++n) {
                StateLabel s;
                s.n = n;
                s.l = l;
                INFO(to_string(c) << " n = " << n << " l = " << l);
                CHECK(eigenvalue(f, s) == radial_energy(n, l));
                CHECK(residual(f.member(l).deformed, deformed_eigenfunction(f, s), radial_energy(n, l), radial_grid()) <
                      1e-7);
            }
    }
}

TEST_CASE("isotropic Case I states stay finite and decay", "[catalog][isotropic]") {
    const auto f = build_family(ModelId::isotropic_l, CaseTag::I, 0.0);
    const RealFn psi = deformed_eigenfunction(f, {1, 1});
    const auto m = f.member(1);
    double peak = 0.0;
    for (int i = 0; i < radial_grid().count(); ++i) {
        const double r = radial_grid()[i];
        CHECK(std::isfinite(eval(psi, r)));
        CHECK(std::isfinite(eval(m.deformed.R, r)));
        peak = std::max(peak, std::abs(eval(psi, r)));
    }
    CHECK(std::abs(eval(psi, 8.0)) < 1e-8 * peak);
    CHECK(std::abs(eval(psi, 8.0)) < std::abs(eval(psi, 6.0)));
    CHECK(std::abs(eval(psi, 6.0)) < std::abs(eval(psi, 4.0)));
}

TEST_CASE("n-ladder conjugate pair", "[catalog][nladder]") {
    const auto p0 = conjugate_pair(0);
    CHECK(p0.e == 1.5);
    CHECK(p0.d == 0.0);
    const RealFn u00 = [](const Jet& r) { return radial_u(0, 0, r); };
    const Grid g = make_uniform_grid(0.05, 6.0, 300);
    for (int i = 0; i < g.count(); i += 10) CHECK(p0.E_composed.at(u00, g[i]) == Approx(1.5 * eval(u00, g[i])).margin(1e-13));
    for (int n = 0; n <= 4; ++n) {
        const auto p = conjugate_pair(n);
        INFO("n = " << n);
        CHECK(compare_operators(p.E_closed, p.E_composed, g, 1e-9).pass());
        CHECK(compare_operators(p.D_closed, p.D_composed, g, 1e-9).pass());
        CHECK(p.e == (n + 1.0) * (n + 1.5));
        CHECK(p.d == n * (n + 0.5));
    }
    CHECK_THROWS_AS(conjugate_pair(-1), InvalidArgument);
}

TEST_CASE("n-ladder family: closed form, eigenfunctions and semi-isospectral operator", "[catalog][nladder]") {
    const auto f = build_family(ModelId::isotropic_n, CaseTag::unique, -1.0);
    for (int n = 0; n <= 3; ++n) {
        const auto m = f.member(n);
        for (double r : {0.3, 1.0, 2.5}) {
            auto w = [n](double x) { return std::exp(-x * x) * std::pow(x, 4.0 * (n + 1)); };
            const double closed =
                std::exp(-r * r) * std::pow(r, 4.0 * n + 5.0) / (-1.0 - 2.0 * integrate_adaptive(w, 0.0, r, 1e-14, 1e-14).value);
            CHECK(eval(m.deformation.u, r) == Approx(closed).epsilon(1e-10));
        }
        StateLabel s;
        s.n = n;
        const RealFn psi = deformed_eigenfunction(f, s);
        INFO("n = " << n);
        CHECK(eigenvalue(f, s) == Approx(n_ladder_e(n)));
        CHECK(residual(m.deformed, psi, n_ladder_e(n), radial_grid()) < 1e-7);
        REQUIRE(m.semi_isospectral);
        CHECK(residual(*m.semi_isospectral, psi, radial_energy(n + 1, 0), radial_grid()) < 1e-7);
    }
}

TEST_CASE("literal r^2/4 scaling of the semi-isospectral potential fails the eigen-relation", "[catalog][nladder]") {
    const auto f = build_family(ModelId::isotropic_n, CaseTag::unique, -1.0);
    const auto m = f.member(0);
    const RealFn du = derivative_fn(m.deformation.u);
    const auto literal =
        detail::isotropic_operator(0).plus([du](const Jet& r) { return 0.25 * r * r * (r * du(r)); });
    CHECK(residual(literal, deformed_eigenfunction(f, {0}), radial_energy(1, 0), radial_grid()) > 1e-3);
}
