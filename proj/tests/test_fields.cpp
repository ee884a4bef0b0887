#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pohozaev/fields.hpp"
#include "pohozaev/quadrature.hpp"

using namespace pohozaev;

namespace {

double const pi = std::numbers::pi;
std::vector<double> const e1{1.0, 0.0, 0.0};
std::vector<double> const minus_e1{-1.0, 0.0, 0.0};
std::vector<double> const scan_R{8.0, 16.0, 32.0, 64.0};

double kernel(double d, double a)
{
    return std::pow(1.0 + d, -a);
}

} // namespace

TEST_CASE("axisymmetric grid integrates a constant to the cylinder volume")
{
    AxisymGridSpec spec;
    spec.anchors = {{0.0, 0.1}, {3.0, 0.1}};
    spec.extent = 20.0;
    AxisymGrid const grid(spec);
    double const Z0 = grid.z_breaks().front(), Z1 = grid.z_breaks().back(), P = grid.rho_breaks().back();
    double const v = integrate_axisym_once([](double, double) { return 1.0; }, grid);
    CHECK(v == doctest::Approx((Z1 - Z0) * pi * P * P).epsilon(1e-12));
}

TEST_CASE("Gaussian integral over R^3")
{
    AxisymGrid const grid(kernel_grid_spec(3, {0.0}, 1.0));
    auto const r = integrate_axisym([](double z, double rho) { return std::exp(-(z * z + rho * rho)); }, grid);
    CHECK(r.value == doctest::Approx(std::pow(pi, 1.5)).epsilon(1e-6));
    CHECK(r.error < 1e-6);
}

TEST_CASE("radial power kernel against its closed form")
{
    // int (1+|x|)^{-5} dx = 4 pi int r^2 (1+r)^{-5} dr = 4 pi / 12
    AxisymGrid const grid(kernel_grid_spec(3, {0.0}, 1.0));
    auto const r = integrate_axisym([](double z, double rho) { return kernel(std::hypot(z, rho), 5.0); }, grid);
    CHECK(r.value == doctest::Approx(pi / 3.0).epsilon(1e-5));
}

TEST_CASE("graded breaks refine at anchors and cover the interval")
{
    auto const b = graded_breaks(-50.0, 50.0, {{0.0, 0.05}, {10.0, 0.05}}, 0.08);
    CHECK(b.front() == -50.0);
    CHECK(b.back() == 50.0);
    double smallest = INFINITY;
    for (std::size_t i = 1; i < b.size(); ++i) {
        REQUIRE(b[i] > b[i - 1]);
        smallest = std::min(smallest, b[i] - b[i - 1]);
    }
    CHECK(smallest <= 0.05 + 1e-12);
}

TEST_CASE("two-center kernel exponents")
{
    auto const f42 = clapp_maia_scan(4.0, 2.0, e1, minus_e1, scan_R);
    CHECK(f42.predicted_exponent == -2.0);
    CHECK(std::abs(f42.slope - f42.predicted_exponent) <= 0.15);

    auto const f22 = clapp_maia_scan(2.0, 2.0, e1, minus_e1, scan_R);
    CHECK(f22.predicted_exponent == -1.0);
    CHECK(std::abs(f22.slope - f22.predicted_exponent) <= 0.15);
}

TEST_CASE("local slope of the (2, 2) scan steepens towards the prediction")
{
    auto const f = clapp_maia_scan(2.0, 2.0, e1, minus_e1, std::vector<double>{8.0, 16.0, 32.0, 64.0, 128.0});
    double prev = 0.0;
    for (std::size_t i = 1; i < f.R.size(); ++i) {
        double const local = std::log(f.values[i] / f.values[i - 1]) / std::log(f.R[i] / f.R[i - 1]);
        CHECK(local < prev);
        CHECK(local > -1.0);
        prev = local;
    }
}

TEST_CASE("perpendicular and collinear (4, 2) scans share the exponent")
{
    McSampler mc;
    mc.samples = 100000;
    std::vector<double> const perp{1.0, 2.0, 0.0};
    auto const fp = clapp_maia_scan(4.0, 2.0, e1, perp, scan_R, mc);
    auto const fc = clapp_maia_scan(4.0, 2.0, e1, minus_e1, scan_R);
    CHECK(std::abs(fp.slope - fc.slope) < 0.1);
    for (double err : fp.errors) {
        CHECK(err >= 0.0);
    }
}

TEST_CASE("three-center kernel picks up a logarithm at theta = N")
{
    // theta = 3, gamma = 1: value ~ (4 pi ln R + c) / R^2, so R^2 value grows by 4 pi ln 2 per doubling
    auto const f = clapp_maia_three_center_scan(3.0, 1.0, e1, minus_e1, std::vector<double>{64.0, 128.0, 256.0});
    CHECK(f.predicted_exponent == -2.0);
    for (std::size_t i = 1; i < f.R.size(); ++i) {
        double const step = f.values[i] * f.R[i] * f.R[i] - f.values[i - 1] * f.R[i - 1] * f.R[i - 1];
        CHECK(step == doctest::Approx(4.0 * pi * std::log(2.0)).epsilon(0.1));
    }
}

TEST_CASE("Monte Carlo agrees with the axisymmetric rule within three standard errors")
{
    double const R = 8.0;
    auto g = [&](double z, double rho) {
        return kernel(std::hypot(z - R, rho), 4.0) * kernel(std::hypot(z + R, rho), 2.0);
    };
    AxisymGrid const grid(kernel_grid_spec(3, {R, -R}, R));
    double const exact = integrate_axisym(g, grid).value;

    McSampler mc;
    mc.samples = 400000;
    mc.centers = {{R, 0.0, 0.0}, {-R, 0.0, 0.0}};
    auto const r = integrate_mc([&](std::span<double const> x) { return g(x[0], std::hypot(x[1], x[2])); }, 3, mc);
    CHECK(r.relative_error() < 0.02);
    CHECK(std::abs(r.value - exact) < 3.0 * r.stderr_mc);
}

TEST_CASE("Monte Carlo is reproducible for a fixed seed")
{
    McSampler mc;
    mc.samples = 20000;
    mc.centers = {{0.0, 0.0, 0.0}};
    auto g = [](std::span<double const> x) { return kernel(std::hypot(x[0], x[1], x[2]), 5.0); };
    CHECK(integrate_mc(g, 3, mc).value == integrate_mc(g, 3, mc).value);
    CHECK_THROWS_AS(integrate_mc(g, 3, McSampler{}), DomainError);
}

TEST_CASE("scan is invariant under rotating the axis")
{
    std::vector<double> const e2{0.0, 1.0, 0.0}, minus_e2{0.0, -1.0, 0.0};
    std::vector<double> const R{8.0, 16.0};
    auto const a = clapp_maia_scan(4.0, 2.0, e1, minus_e1, R);
    auto const b = clapp_maia_scan(4.0, 2.0, e2, minus_e2, R);
    for (std::size_t i = 0; i < R.size(); ++i) {
        CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
    }
}

TEST_CASE("scan argument checks")
{
    CHECK_THROWS_AS(clapp_maia_scan(1.0, 1.0, e1, minus_e1, scan_R), DomainError);
    CHECK_THROWS_AS(clapp_maia_scan(4.0, 2.0, e1, minus_e1, std::vector<double>{8.0}), DomainError);
    double t = 0.0;
    CHECK(collinear_with(e1, minus_e1, t));
    CHECK(t == -1.0);
    CHECK_FALSE(collinear_with(e1, std::vector<double>{1.0, 2.0, 0.0}, t));
}
