#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "frozen.hpp"
#include "pohozaev/functionals.hpp"
#include "pohozaev/limit_problem.hpp"

using namespace pohozaev;
using testing::ground;
using testing::rational;

TEST_CASE("zero height is the slow-decay trivial orbit")
{
    auto const res = shoot(rational(), 3, 0.0);
    CHECK(res.classification == Classification::slow_decay);
    CHECK(res.profile.sup_norm() == 0.0);
}

TEST_CASE("heights outside [0, gamma) are rejected")
{
    CHECK_THROWS_AS(shoot(rational(), 3, rational().gamma()), DomainError);
    CHECK_THROWS_AS(shoot(rational(), 3, 1.5), DomainError);
    CHECK_THROWS_AS(shoot(rational(), 3, -0.1), DomainError);
}

TEST_CASE("bracket that does not separate the two behaviours")
{
    double const g = rational().gamma();
    CHECK_THROWS_AS(find_fast_decay(rational(), 3, {0.95 * g, 0.99 * g}), BracketError);
}

TEST_CASE("orbits on either side of the separatrix")
{
    double const u = frozen::ground_u0;
    CHECK(shoot(rational(), 3, 0.9 * u).asymptote > 0.0);
    auto const over = shoot(rational(), 3, 1.02 * u);
    CHECK((over.classification == Classification::crossing || over.asymptote < 0.0));
}

TEST_CASE("ground state height matches the shooting oracle")
{
    auto const sol = find_fast_decay(rational(), 3, default_bracket(rational()));
    CHECK(sol.u0 == doctest::Approx(frozen::ground_u0).epsilon(1e-6));
    CHECK(sol.separatrix_count == 1);
    CHECK(sol.u0 < rational().gamma());
}

TEST_CASE("ground state shape")
{
    auto const& w = *ground();
    CHECK(w.sup_norm() < rational().gamma());
    CHECK(w.decay_exponent == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(w.gradient_decay_exponent == doctest::Approx(-2.0).epsilon(0.05));
    CHECK(w.plateau_statistic < 0.02);
    CHECK(w.tail_coefficient > 0.0);
    auto const& v = w.values();
    for (std::size_t i = 1; i < v.size(); ++i) {
        REQUIRE(v[i] <= v[i - 1]);
        REQUIRE(v[i] > 0.0);
    }
    CHECK(ode_residual(w, rational()) < 1e-7);
}

TEST_CASE("envelope continues the profile beyond the last node")
{
    auto const& w = *ground();
    double const r = 4.0 * w.r_max();
    CHECK(w.value(r) * r == doctest::Approx(w.tail_coefficient).epsilon(1e-12));
    CHECK(w.value(w.r_max()) == doctest::Approx(w.tail_coefficient / w.r_max()).epsilon(1e-3));
}

TEST_CASE("limit energy and the Pohozaev identity")
{
    auto const e = limit_energy(*ground(), rational());
    CHECK(e.consistent);
    CHECK(e.m == doctest::Approx(frozen::ground_m).epsilon(1e-4));
    CHECK(e.grad_norm_sq == doctest::Approx(frozen::ground_grad_norm_sq).epsilon(1e-4));
    CHECK(e.F_integral == doctest::Approx(frozen::ground_F_integral).epsilon(1e-4));
    CHECK(std::abs(e.J0) < 1e-4 * e.grad_norm_sq);
    CHECK(e.identity_gap < 1e-4);
}

TEST_CASE("dilation scales the gradient and primitive integrals")
{
    auto const& w = *ground();
    double const t = 1.7;
    auto const wt = w.dilated(t);
    auto const e = limit_energy(w, rational());
    auto const et = limit_energy(wt, rational(), 1.0);
    CHECK(et.grad_norm_sq == doctest::Approx(t * e.grad_norm_sq).epsilon(1e-6));
    CHECK(et.F_integral == doctest::Approx(t * t * t * e.F_integral).epsilon(1e-6));
    CHECK(wt.value(2.0 * t) == doctest::Approx(w.value(2.0)).epsilon(1e-12));
}

TEST_CASE("quintic interpolation agrees with the nodes")
{
    auto const& w = *ground();
    for (std::size_t i = 10; i < w.size(); i += 997) {
        CHECK(w.value(w.node(i)) == doctest::Approx(w.values()[i]).epsilon(1e-13));
    }
    double const r = 0.5 * (w.node(3000) + w.node(3001));
    double const h = 1e-5;
    double const d = (w.value(r + h) - w.value(r - h)) / (2.0 * h);
    CHECK(w.derivative(r) == doctest::Approx(d).epsilon(1e-6));
}

TEST_CASE("pure power below the critical exponent has no positive fast-decay orbit in the bracket")
{
    auto const nl = power_model(4.0, 3);
    auto const res = shoot(nl, 3, 1.0);
    CHECK(res.classification == Classification::crossing);
}
