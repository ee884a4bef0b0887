#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "frozen.hpp"
#include "pohozaev/functionals.hpp"

using namespace pohozaev;
using testing::ground;
using testing::model_V;
using testing::rational;

namespace {

double argmax_on_path(FieldMoments const& m)
{
    std::vector<double> t;
    for (int i = 0; i <= 4000; ++i) {
        t.push_back(0.2 + 2.8 * i / 4000.0);
    }
    auto const path = scaling_path(m, nullptr, t);
    auto best = path.front();
    for (auto const& p : path) {
        if (p.second > best.second) {
            best = p;
        }
    }
    return best.first;
}

} // namespace

TEST_CASE("Sobolev constant matches the bubble quotient")
{
    CHECK(sobolev_constant(3) == doctest::Approx(frozen::sobolev_S3).epsilon(1e-10));
    CHECK_THROWS_AS(sobolev_constant(2), DomainError);
}

TEST_CASE("gradient lower bound on the manifold")
{
    CHECK(rho_bound(3, frozen::A2) == doctest::Approx(frozen::rho).epsilon(1e-9));
    CHECK(rho_bound(3, rational().A2()) == doctest::Approx(frozen::rho).epsilon(1e-3));
}

TEST_CASE("ground state energies without potential")
{
    auto const m = radial_moments(*ground(), rational());
    auto const e = evaluate(m, nullptr, rational());
    CHECK(std::abs(e.J_0) < 1e-4 * e.grad_norm_sq);
    CHECK(e.I_0 == doctest::Approx(e.grad_norm_sq / 3.0).epsilon(1e-4));
    CHECK(e.I_0 == doctest::Approx(frozen::ground_m).epsilon(1e-4));
    CHECK(e.I_V == e.I_0);
    CHECK(e.J_V == e.J_0);
    CHECK(std::sqrt(e.grad_norm_sq) > e.rho_bound);
}

TEST_CASE("zero field has zero energy")
{
    FieldMoments z;
    auto const e = evaluate(z, &model_V(), rational());
    CHECK(e.I_V == 0.0);
    CHECK(e.J_V == 0.0);
}

TEST_CASE("scaling path peaks at the unscaled ground state")
{
    auto const m = radial_moments(*ground(), rational());
    CHECK(argmax_on_path(m) == doctest::Approx(1.0).epsilon(1e-3));
    double const a = 1.6;
    auto const ma = radial_moments(ground()->dilated(a), rational());
    CHECK(argmax_on_path(ma) == doctest::Approx(1.0 / a).epsilon(1e-3));
    CHECK_THROWS_AS(scaling_path(m, nullptr, {0.0}), DomainError);
}

TEST_CASE("dilation of the moments matches dilation of the profile")
{
    double const s = 1.3;
    auto const m = radial_moments(*ground(), rational());
    auto const ms = radial_moments(ground()->dilated(s), rational());
    auto const e = evaluate(m, &model_V(), rational(), s);
    auto const es = evaluate(ms, &model_V(), rational(), 1.0);
    CHECK(e.grad_norm_sq == doctest::Approx(es.grad_norm_sq).epsilon(1e-8));
    CHECK(e.F_integral == doctest::Approx(es.F_integral).epsilon(1e-8));
    CHECK(e.V_quadratic == doctest::Approx(es.V_quadratic).epsilon(1e-5));
    CHECK(e.gradV_quadratic == doctest::Approx(es.gradV_quadratic).epsilon(1e-5));
}

TEST_CASE("functional identities")
{
    auto const m = radial_moments(*ground(), rational());
    auto const e = evaluate(m, &model_V(), rational(), 0.8);
    CHECK(e.I_V == doctest::Approx(e.I_0 + 0.5 * e.V_quadratic).epsilon(1e-14));
    CHECK(e.J_V == doctest::Approx(e.J_0 + 0.5 * e.gradV_quadratic + 1.5 * e.V_quadratic).epsilon(1e-14));
    CHECK(e.V_quadratic > 0.0);
    CHECK(e.gradV_quadratic < 0.0);
}

TEST_CASE("potential terms against a direct radial quadrature")
{
    auto const& w = *ground();
    auto const m = radial_moments(w, rational());
    double const direct = w.radial_integral([](double r, double v, double) { return std::pow(1.0 + r, -3.0) * v * v; });
    // the library also integrates the envelope beyond r_max
    double const c = w.tail_coefficient, R = w.r_max();
    double const tail = 4.0 * M_PI * c * c / (2.0 * (1.0 + R) * (1.0 + R));
    CHECK(m.potential_terms(model_V()).first == doctest::Approx(direct + tail).epsilon(1e-4));
}

TEST_CASE("truncation and radial-mass guards")
{
    auto m = radial_moments(*ground(), rational());
    m.grad_tail = 0.02 * m.grad_norm_sq;
    CHECK_THROWS_AS(evaluate(m, nullptr, rational()), NumericalError);
    CHECK_THROWS_AS(evaluate(radial_moments(*ground(), rational()), nullptr, rational(), -1.0), DomainError);

    auto const general = Potential::general(
        "general", [](std::span<double const>) { return 0.0; }, [](std::span<double const>) { return 0.0; },
        [](std::span<double const>) { return 0.0; }, 3.0, 1.0, 1.0);
    CHECK_THROWS_AS(radial_moments(*ground(), rational()).potential_terms(general), DomainError);
}

TEST_CASE("mass compression keeps the potential terms")
{
    auto const full = radial_moments(*ground(), rational());
    auto small = full;
    small.compress(200);
    CHECK(small.radii.size() < full.radii.size());
    CHECK(small.total_mass() == doctest::Approx(full.total_mass()).epsilon(1e-12));
    for (double s : {0.5, 1.0, 2.0}) {
        auto const a = full.potential_terms(model_V(), s), b = small.potential_terms(model_V(), s);
        CHECK(a.first == doctest::Approx(b.first).epsilon(1e-6));
        CHECK(a.second == doctest::Approx(b.second).epsilon(1e-6));
    }
}

TEST_CASE("residual of the ground state is small without potential")
{
    double const r0 = radial_residual_norm(*ground(), nullptr, rational());
    double const r1 = radial_residual_norm(*ground(), &model_V(), rational());
    CHECK(r0 < 1e-5);
    CHECK(r1 > 10.0 * r0);
}
