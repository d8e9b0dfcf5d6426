#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "isospec/numeric.hpp"

using namespace isospec;
using Catch::Approx;

namespace {

// Composite Simpson rule; an oracle independent of the adaptive Gauss-Kronrod path.
template <class F>
double simpson(F f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("uniform grid construction", "[numeric][grid]") {
    CHECK(make_uniform_grid(0.0, 1.0, 2).spacing() == 1.0);
    const Grid g = make_uniform_grid(-10.0, 10.0, 2001);
    CHECK(g.spacing() == Approx(0.01).epsilon(1e-14));
    CHECK(g[0] == -10.0);
    CHECK(g[2000] == 10.0);
    auto x = g.points();
    for (std::size_t i = 1; i < x.size(); ++i) REQUIRE(x[i] > x[i - 1]);

    CHECK_THROWS_AS(make_uniform_grid(0.0, 0.0, 5), InvalidArgument);
    CHECK_THROWS_AS(make_uniform_grid(1.0, 0.0, 5), InvalidArgument);
    CHECK_THROWS_AS(make_uniform_grid(0.0, 1.0, 1), InvalidArgument);
}

TEST_CASE("adaptive quadrature", "[numeric][integrate]") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) == Approx(1.0 / 3.0).margin(1e-14));

    SECTION("swapping the interval flips the sign") {
        auto f = [](double x) { return std::cos(3.0 * x) + x; };
        CHECK(integrate(f, 2.0, -1.0) == Approx(-integrate(f, -1.0, 2.0)).margin(1e-14));
        CHECK(integrate(f, 1.5, 1.5) == 0.0);
    }

    SECTION("growing integrand against an independent rule") {
        auto f = [](double x) { return x * x * std::exp(x * x); };
        const double adaptive = integrate_adaptive(f, 0.0, 2.0, 1e-12).value;
        const double reference = simpson(f, 0.0, 2.0, 400000);
        CHECK(std::abs(adaptive - reference) < 1e-9);
        // frozen from a 30-digit reference quadrature
        CHECK(adaptive == Approx(46.3718361503906239657).epsilon(1e-14));
    }

    SECTION("linearity") {
        auto f = [](double x) { return std::exp(-x) * std::sin(5.0 * x); };
        auto g = [](double x) { return 1.0 / (1.0 + x * x); };
        const double alpha = 2.5, beta = -0.75, tol = 1e-10;
        const double lhs = integrate([&](double x) { return alpha * f(x) + beta * g(x); }, -1.0, 4.0, tol);
        const double rhs = alpha * integrate(f, -1.0, 4.0, tol) + beta * integrate(g, -1.0, 4.0, tol);
        CHECK(std::abs(lhs - rhs) <= 2.0 * tol * (std::abs(alpha) + std::abs(beta)));
    }

    SECTION("budget exhaustion carries the best estimate") {
        auto f = [](double x) { return std::sin(1.0 / x); };
        try {
            integrate_adaptive(f, 1e-4, 1.0, 1e-14, 0.0, 600);
            FAIL("expected an accuracy error");
        } catch (const AccuracyError& e) {
            CHECK(std::isfinite(e.best_estimate()));
            CHECK(e.error_estimate() > 0.0);
        }
    }
}

TEST_CASE("semi-infinite quadrature", "[numeric][integrate]") {
    auto gauss = [](double y) { return std::exp(-y * y); };
    CHECK(integrate_semi_infinite(gauss, 0.0) == Approx(std::sqrt(std::numbers::pi) / 2.0).margin(1e-10));
    CHECK(integrate_semi_infinite(gauss, 1.0, 1e-12) == Approx(0.139402792640330988249).margin(1e-12));
    CHECK(integrate_semi_infinite([](double x) { return std::exp(-x); }, 0.0) == Approx(1.0).margin(1e-10));
    CHECK_THROWS_AS(integrate_semi_infinite([](double x) { return 1.0 / x; }, 1.0), DivergenceError);

    SECTION("splitting the half line is additive") {
        auto f = [](double x) { return std::exp(-x) / (1.0 + x * x); };
        const double tol = 1e-10;
        const double whole = integrate_semi_infinite(f, -0.5, tol);
        const double split = integrate_semi_infinite(f, 2.0, tol) + integrate(f, -0.5, 2.0, tol);
        CHECK(std::abs(whole - split) <= 2.0 * tol);
    }
}

TEST_CASE("cumulative integral", "[numeric][cumulative]") {
    const Grid unit = make_uniform_grid(0.0, 1.0, 11);
    auto ones = cumulative_integral([](double) { return 1.0; }, 0.0, unit);
    for (int i = 0; i < unit.count(); ++i) CHECK(ones[i] == Approx(unit[i]).margin(1e-14));

    const Grid line = make_uniform_grid(-10.0, 10.0, 201);
    auto gauss = [](double y) { return std::exp(-y * y); };
    auto F = cumulative_integral(gauss, 0.0, line);
    CHECK(F[100] == 0.0);
    CHECK(F[200] == Approx(integrate(gauss, 0.0, 10.0, 1e-12)).margin(1e-10));
    CHECK(F[200] == Approx(std::sqrt(std::numbers::pi) / 2.0).margin(1e-10));

    SECTION("odd integrand about the origin gives an even primitive") {
        auto odd = cumulative_integral([](double y) { return y * std::exp(-y * y) + std::sin(y); }, 0.0, line);
        for (int i = 0; i < 100; ++i) CHECK(odd[i] == Approx(odd[200 - i]).margin(1e-12));
    }

    CHECK_THROWS_AS(cumulative_integral(gauss, 11.0, line), InvalidArgument);
}

TEST_CASE("finite-difference derivative", "[numeric][differentiate]") {
    const Grid g = make_uniform_grid(-2.0, 3.0, 41);
    std::vector<double> sq, cst;
    for (double x : g.points()) {
        sq.push_back(x * x);
        cst.push_back(4.0);
    }
    auto d = differentiate(SampledFunction(g, sq));
    for (int i = 0; i < g.count(); ++i) CHECK(d[i] == Approx(2.0 * g[i]).margin(1e-11));
    auto z = differentiate(SampledFunction(g, cst));
    for (int i = 0; i < g.count(); ++i) CHECK(z[i] == 0.0);

    SECTION("second-order convergence on sin") {
        auto max_error = [](int n) {
            const Grid grid = make_uniform_grid(0.0, 3.0, n);
            std::vector<double> v;
            for (double x : grid.points()) v.push_back(std::sin(x));
            auto dd = differentiate(SampledFunction(grid, v));
            double err = 0.0;
            for (int i = 0; i < grid.count(); ++i) err = std::max(err, std::abs(dd[i] - std::cos(grid[i])));
            return std::make_pair(grid.spacing(), err);
        };
        auto [h1, e1] = max_error(51);
        auto [h2, e2] = max_error(201);
        const double order = std::log(e1 / e2) / std::log(h1 / h2);
        CHECK(order >= 1.9);
    }

    CHECK_THROWS_AS(differentiate(SampledFunction(make_uniform_grid(0.0, 1.0, 2), {0.0, 1.0})), InvalidArgument);
}

TEST_CASE("cumulative integral then derivative recovers the integrand", "[numeric][property]") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double a = coef(rng), b = coef(rng), c = coef(rng);
        auto f = [=](double x) { return a * std::sin(b * x) + c * std::exp(-x * x); };
        const Grid g = make_uniform_grid(-3.0, 3.0, 301);
        auto F = cumulative_integral(f, -3.0, g, 1e-12);
        auto dF = differentiate(F);
        double err = 0.0;
        for (int i = 0; i < g.count(); ++i) err = std::max(err, std::abs(dF[i] - f(g[i])));
        CHECK(err < 20.0 * g.spacing() * g.spacing() * (std::abs(a) * (1 + b * b * std::abs(b)) + 4 * std::abs(c)));
    }
}

TEST_CASE("running integral carries exact derivatives", "[numeric][running]") {
    RealFn gauss = [](const Jet& y) { return exp(-(y * y)); };
    auto F = RunningIntegral::from_origin(gauss, 0.0, -4.0, 4.0);
    for (double x : {-3.7, -1.0, 0.0, 0.25, 2.9}) {
        Jet j = F(Jet::variable(x));
        CHECK(j.value() == Approx(std::sqrt(std::numbers::pi) / 2.0 * std::erf(x)).margin(1e-13));
        CHECK(j.derivative(1) == Approx(std::exp(-x * x)).margin(1e-15));
        CHECK(j.derivative(2) == Approx(-2.0 * x * std::exp(-x * x)).margin(1e-14));
    }
    // outside the table range
    CHECK(F.value(5.0) == Approx(std::sqrt(std::numbers::pi) / 2.0 * std::erf(5.0)).margin(1e-13));

    auto T = RunningIntegral::tail(gauss, 0.5, 4.0);
    for (double x : {0.5, 1.0, 3.3, 6.0}) {
        Jet j = T(Jet::variable(x));
        CHECK(j.value() == Approx(std::sqrt(std::numbers::pi) / 2.0 * std::erfc(x)).margin(1e-13));
        CHECK(j.derivative(1) == Approx(-std::exp(-x * x)).margin(1e-15));
    }
}
