#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "frozen.hpp"
#include "pohozaev/projection.hpp"

using namespace pohozaev;
using testing::ground;
using testing::model_V;
using testing::rational;

namespace {

FieldMoments synthetic(double G, double F)
{
    FieldMoments m;
    m.grad_norm_sq = G;
    m.F_integral = F;
    return m;
}

FieldMoments half_half(double R)
{
    TwoBumpConfig c;
    c.lambda = 0.5;
    c.R = R;
    TwoBumpField const U(ground(), c);
    auto const grid = U.grid();
    auto const est = two_bump_integrals(U, rational(), grid, false);
    return two_bump_moments(U, rational(), grid, &est.value);
}

} // namespace

TEST_CASE("dilation path without potential")
{
    auto const m = synthetic(6.0, 1.5);
    // xi(s) = s G / 2 - s^3 F, critical at s^2 = G / (6 F)
    auto const a = xi(m, nullptr, 1.0);
    CHECK(a.value == doctest::Approx(1.5));
    CHECK(a.derivative == doctest::Approx(3.0 - 4.5));
    CHECK(std::abs(xi(m, nullptr, 1e-6).value) < 1e-5);
    auto const p = project(m, nullptr, rational());
    CHECK(p.s_star == doctest::Approx(std::sqrt(6.0 / 9.0)).epsilon(1e-10));
    CHECK(std::abs(xi(m, nullptr, p.s_star).derivative) < 1e-9);
    CHECK(p.unique);
    CHECK_THROWS_AS(xi(m, nullptr, 0.0), DomainError);
    CHECK_THROWS_AS(xi(m, nullptr, -1.0), DomainError);
}

TEST_CASE("psi grows like s^2 times the primitive without potential")
{
    auto const m = synthetic(6.0, 1.5);
    CHECK(psi(m, nullptr, 2.0) == doctest::Approx(6.0));
}

TEST_CASE("ground state is its own projection")
{
    auto const m = radial_moments(*ground(), rational());
    auto const p = project(m, nullptr, rational());
    CHECK(p.s_star == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(p.projected_energy == doctest::Approx(frozen::ground_m).epsilon(1e-4));
    CHECK(std::abs(p.report.J_V) < 1e-8 * p.report.grad_norm_sq);
}

TEST_CASE("projection is covariant under dilation")
{
    double const a = 2.5;
    auto const m = radial_moments(*ground(), rational());
    auto const ma = radial_moments(ground()->dilated(a), rational());
    double const s = project(m, nullptr, rational()).s_star;
    double const sa = project(ma, nullptr, rational()).s_star;
    CHECK(std::abs(sa * a - s) < 1e-8);
    CHECK(sa == doctest::Approx(1.0 / a).epsilon(1e-8));
}

TEST_CASE("ground state with the model potential")
{
    auto const m = radial_moments(*ground(), rational());
    auto const p = project(m, &model_V(), rational());
    CHECK(p.s_star > 0.0);
    CHECK(std::abs(p.report.J_V) < 1e-8 * p.report.grad_norm_sq);
    // V >= 0 lifts the projected energy above the limit level
    CHECK(p.projected_energy > frozen::ground_m);
}

TEST_CASE("no root when the primitive integral is negative")
{
    CHECK_THROWS_AS(project(synthetic(6.0, -1.0), nullptr, rational()), ProjectionError);
    CHECK_THROWS_AS(project(synthetic(0.0, 0.0), nullptr, rational()), DomainError);
}

TEST_CASE("two half-size bumps project with dilation tending to 2")
{
    double prev = INFINITY;
    double last = 0.0;
    for (double R : {8.0, 16.0, 32.0, 64.0}) {
        auto const p = project(half_half(R), &model_V(), rational());
        double const S = p.s_star;
        CHECK(std::abs(S - 2.0) < prev);
        CHECK(p.projected_energy < 2.0 * frozen::ground_m);
        CHECK(p.projected_energy > frozen::ground_m);
        CHECK(std::abs(p.report.J_V) < 1e-7 * p.report.grad_norm_sq);
        prev = std::abs(S - 2.0);
        last = S;
    }
    CHECK(std::abs(last - 2.0) < 0.1);
}

TEST_CASE("small landscape")
{
    std::vector<double> const lambdas{0.0, 0.25, 0.5, 0.75, 1.0};
    TwoBumpConfig c;
    auto const rep = projection_landscape(ground(), &model_V(), rational(), 16.0, lambdas,
                                          {{"collinear", collinear_partner(c.y0)}}, c.y0, frozen::ground_m, {}, 2);
    REQUIRE(rep.cells.size() == lambdas.size());
    for (auto const& cell : rep.cells) {
        CHECK(cell.ok);
        CHECK(cell.grad_norm >= rep.rho);
    }
    CHECK(rep.max_energy < 2.0 * frozen::ground_m);
    CHECK(rep.eta == doctest::Approx(2.0 * rep.p0 - rep.max_energy));
    CHECK(rep.endpoint_max < 1.05 * frozen::ground_m);
    CHECK(rep.all_above_rho);
    // symmetric pair of lambdas mirror each other
    CHECK(rep.cells[1].energy == doctest::Approx(rep.cells[3].energy).epsilon(1e-6));
    CHECK(rep.cells[1].barycenter == doctest::Approx(-rep.cells[3].barycenter).epsilon(1e-6));
    for (std::size_t i = 1; i < rep.cells.size(); ++i) {
        CHECK(std::abs(rep.cells[i].s_star - rep.cells[i - 1].s_star) < 0.5);
    }
}
