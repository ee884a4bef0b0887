#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "common.hpp"
#include "frozen.hpp"
#include "pohozaev/errors.hpp"
#include "pohozaev/functionals.hpp"
#include "pohozaev/potential.hpp"

using namespace pohozaev;
using testing::model_V;

namespace {

std::array<double, 3> at(double r)
{
    return {r, 0.0, 0.0};
}

} // namespace

TEST_CASE("model potential values")
{
    auto const& V = model_V();
    auto const o = at(0.0), one = at(1.0);
    CHECK(V.V(o) == 1.0);
    CHECK(V.grad_dot(one) == doctest::Approx(-3.0 / 16.0).epsilon(1e-15));
    CHECK(V.hess_quad(one) == doctest::Approx(12.0 / 32.0).epsilon(1e-15));
    CHECK(V.is_radial());
    CHECK(V.k() == 3.0);
}

TEST_CASE("scale multiplies every evaluator")
{
    auto const V = model_potential(3.0, 2.5, 3);
    auto const x = at(1.7);
    CHECK(V.V(x) == doctest::Approx(2.5 * model_V().V(x)));
    CHECK(V.grad_dot(x) == doctest::Approx(2.5 * model_V().grad_dot(x)));
}

TEST_CASE("k out of range is a configuration error")
{
    CHECK_THROWS_AS(model_potential(1.5, 1.0, 3), ConfigError);
    CHECK_THROWS_AS(model_potential(2.0, 1.0, 3), ConfigError);
    CHECK_THROWS_AS(model_potential(3.0, 1.0, 5), ConfigError);
    CHECK_NOTHROW(model_potential(3.5, 1.0, 5));
    CHECK_THROWS_AS(model_potential(3.0, -1.0, 3), ConfigError);
}

TEST_CASE("radial pairings agree with finite differences")
{
    auto const& V = model_V();
    for (int i = 0; i <= 60; ++i) {
        double const r = 0.1 * std::pow(1000.0, i / 60.0);
        double const h = 1e-3 * r;
        double const d1 = (V.V_r(r + h) - V.V_r(r - h)) / (2.0 * h);
        double const d2 = (V.V_r(r + h) - 2.0 * V.V_r(r) + V.V_r(r - h)) / (h * h);
        CHECK(V.grad_dot_r(r) == doctest::Approx(r * d1).epsilon(1e-6));
        CHECK(V.hess_quad_r(r) == doctest::Approx(r * r * d2).epsilon(1e-5));
    }
}

TEST_CASE("K+ matches the closed form")
{
    auto const& V = model_V();
    for (double r : {0.5, 2.9, 3.0, 3.5, 10.0, 100.0}) {
        auto const x = at(r);
        double const expected = r > 3.0 ? r * std::pow(1.0 + r, -5.0) * (r - 3.0) : 0.0;
        CHECK(V.K_plus(x, 3) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("hypotheses hold for the model potential")
{
    double const S = sobolev_constant(3);
    auto const rep = check_V_hypotheses(model_V(), 3, S);
    CHECK(rep.all_pass());
    CHECK(rep.at("V1_negative_part").value == 0.0);
    CHECK(rep.at("V3_W_plus").value == 0.0);
    CHECK(rep.at("V4_Z_minus").value == 0.0);
    auto const& k = rep.at("V5_K_plus");
    CHECK(k.value == doctest::Approx(frozen::kplus_integral).epsilon(1e-5));
    CHECK(k.threshold == doctest::Approx(std::pow(frozen::sobolev_S3 / 3.0, 1.5)).epsilon(1e-8));
}

TEST_CASE("hypothesis integrals are stable under doubling the truncation radius")
{
    double const S = sobolev_constant(3);
    PotentialQuadSpec a, b;
    a.truncation_radius = 2e3;
    b.truncation_radius = 4e3;
    auto const ra = check_V_hypotheses(model_V(), 3, S, a);
    auto const rb = check_V_hypotheses(model_V(), 3, S, b);
    for (auto const* name : {"V5_K_plus", "V5_hessian_integrable"}) {
        CHECK(ra.at(name).value == doctest::Approx(rb.at(name).value).epsilon(1e-4));
    }
}

TEST_CASE("tail vanishing and bounded hessian pairing")
{
    auto const rep = check_V_hypotheses(model_V(), 3, sobolev_constant(3));
    CHECK(rep.at("V2_tail_vanishing").pass);
    CHECK(rep.at("V5_hessian_decay").pass);
    CHECK(std::isfinite(rep.at("V5_hessian_bound_A3").value));
}

TEST_CASE("general potential uses Monte Carlo and agrees with the radial path")
{
    auto const& R = model_V();
    auto const G = Potential::general(
        "model-general", [&](std::span<double const> x) { return R.V(x); },
        [&](std::span<double const> x) { return R.grad_dot(x); },
        [&](std::span<double const> x) { return R.hess_quad(x); }, 3.0, 1.0, 3.0);
    CHECK_FALSE(G.is_radial());
    double const S = sobolev_constant(3);
    auto const rg = check_V_hypotheses(G, 3, S);
    auto const rr = check_V_hypotheses(R, 3, S);
    CHECK(rg.at("V1_negative_part").value == 0.0);
    auto const& kg = rg.at("V5_K_plus");
    double const se = std::max(1e-12, std::abs(kg.value) * 0.02);
    CHECK(std::abs(kg.value - rr.at("V5_K_plus").value) < 3.0 * se + 0.02 * rr.at("V5_K_plus").value);
}

TEST_CASE("sign-changing potential reports a negative part")
{
    auto const V = Potential::radial(
        "well", [](double r) { return -0.5 * std::pow(1.0 + r, -4.0); },
        [](double r) { return 2.0 * r * std::pow(1.0 + r, -5.0); },
        [](double r) { return -10.0 * r * r * std::pow(1.0 + r, -6.0); }, 4.0, 0.5, 2.0);
    auto const rep = check_V_hypotheses(V, 3, sobolev_constant(3));
    CHECK(rep.at("V1_negative_part").value > 0.0);
    CHECK(rep.at("V1_negative_part").pass);
}

TEST_CASE("radial space integral of a Gaussian")
{
    auto const r = radial_space_integral([](double x) { return std::exp(-x * x); }, 3, 1e3);
    CHECK(r.value == doctest::Approx(std::pow(M_PI, 1.5)).epsilon(1e-8));
}
