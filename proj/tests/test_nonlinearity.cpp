#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "common.hpp"
#include "frozen.hpp"
#include "pohozaev/errors.hpp"
#include "pohozaev/nonlinearity.hpp"

using namespace pohozaev;
using testing::rational;

TEST_CASE("rational model vanishes at zero and at its first zero")
{
    auto const& nl = rational();
    CHECK(nl.f(0.0) == 0.0);
    CHECK(nl.F(0.0) == 0.0);
    double const g = std::pow(2.0, 0.25);
    CHECK(nl.gamma() == doctest::Approx(g).epsilon(1e-15));
    CHECK(std::abs(nl.gamma_numeric() - g) < 1e-9);
    CHECK(std::abs(nl.f(g)) < 1e-14);
}

TEST_CASE("rational numerator factors as 2 s^7 (s^2 - sqrt2)^2")
{
    auto const& nl = rational();
    for (double s : {0.1, 0.5, 0.9, 1.3, 2.0, 7.5}) {
        double const num = 2.0 * std::pow(s, 7) * std::pow(s * s - std::sqrt(2.0), 2);
        CHECK(nl.f(s) == doctest::Approx(num / (std::pow(s, 10) + 1.0)).epsilon(1e-13));
    }
}

TEST_CASE("asymptotic slope of the rational model is 2")
{
    auto const& nl = rational();
    CHECK(nl.ell() == 2.0);
    CHECK(nl.f(1e6) / 1e6 == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("g tends to 7 at zero and to 1 at infinity")
{
    auto const& nl = rational();
    CHECK(eval_g(nl, 1e-3) == doctest::Approx(7.0).epsilon(1e-4));
    CHECK(eval_g(nl, 1e6) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK_THROWS_AS(eval_g(nl, nl.gamma()), DomainError);
    CHECK_THROWS_AS(eval_g(nl, -1.0), DomainError);
}

TEST_CASE("g is constant p - 1 for a pure power")
{
    auto const nl = power_model(4.5, 3);
    for (double s : {1e-3, 0.2, 1.0, 30.0}) {
        CHECK(eval_g(nl, s) == doctest::Approx(3.5).epsilon(1e-12));
    }
}

TEST_CASE("hypotheses hold for the rational model")
{
    auto const rep = check_f_hypotheses(rational());
    CHECK(rep.all_pass());
    auto const& e = rep.at("f3_endpoint_order");
    CHECK(e.pass);
    CHECK(e.value == 5.0);
    CHECK(rep.at("f1_growth_A2").value == doctest::Approx(frozen::A2).epsilon(1e-3));
    CHECK(rational().A2() == doctest::Approx(frozen::A2).epsilon(1e-3));
}

TEST_CASE("critical power fails the limit at infinity")
{
    auto const rep = check_f_hypotheses(power_model(6.0, 3));
    CHECK_FALSE(rep.at("f2_limit_at_infinity").pass);
    CHECK_FALSE(rep.all_pass());
}

TEST_CASE("linear f fails the limit at zero")
{
    auto const rep = check_f_hypotheses(power_model(2.0, 3));
    CHECK_FALSE(rep.at("f2_limit_at_zero").pass);
}

TEST_CASE("primitive is consistent with f to second order")
{
    for (auto const& nl : {rational(), builtin_model("sine_superlinear")}) {
        for (double s : {0.05, 0.3, 0.8, 1.1, 2.5, 9.0}) {
            double const h = 1e-5 * s;
            double const d = (nl.F(s + h) - nl.F(s - h)) / (2.0 * h);
            CHECK(std::abs(d - nl.f(s)) <= 1e-5 * std::max(nl.f(s), nl.F(s) / s) + 1e-14);
        }
    }
}

TEST_CASE("odd extension is exact")
{
    auto const& nl = rational();
    for (int i = 0; i < 200; ++i) {
        double const s = std::pow(10.0, -3.0 + 6.0 * i / 199.0);
        CHECK(nl.f(-s) + nl.f(s) == 0.0);
    }
}

TEST_CASE("rational f is nonnegative and g non-increasing below gamma")
{
    auto const& nl = rational();
    double prev = INFINITY;
    for (int i = 0; i < 2000; ++i) {
        double const s = 1e-4 + (nl.gamma() - 2e-4) * i / 1999.0;
        CHECK(nl.f(s) >= 0.0);
        double const g = eval_g(nl, s);
        CHECK(g <= prev + 1e-10);
        prev = g;
    }
}

TEST_CASE("sine model has gamma = pi / 2")
{
    auto const nl = builtin_model("sine_superlinear");
    CHECK(nl.gamma() == doctest::Approx(M_PI / 2.0));
    CHECK(nl.dimension() == 3);
}

TEST_CASE("unknown model name is a configuration error")
{
    CHECK_THROWS_AS(builtin_model("quartic"), ConfigError);
}

TEST_CASE("custom model differentiates numerically")
{
    auto const nl = custom_model("cubic", 3, [](double s) { return s * s * s; });
    CHECK(nl.fprime(0.7) == doctest::Approx(3.0 * 0.49).epsilon(1e-8));
    CHECK(nl.F(2.0) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("table model interpolates and grows linearly beyond the last sample")
{
    std::vector<double> s, fs;
    for (int i = 0; i <= 400; ++i) {
        double const x = 0.01 * i;
        s.push_back(x);
        fs.push_back(x * x * x);
    }
    auto const nl = table_model("cube", 3, s, fs);
    CHECK(nl.f(1.234) == doctest::Approx(std::pow(1.234, 3)).epsilon(1e-5));
    // beyond the table f grows like l s with l = f(s_last) / s_last
    CHECK(nl.f(5.0) == doctest::Approx(64.0 * 5.0 / 4.0).epsilon(1e-12));
    CHECK(nl.ell() == doctest::Approx(16.0));

    char const* path = "table_model_test.txt";
    {
        std::ofstream out(path);
        out << "# s f\n";
        for (std::size_t i = 0; i < s.size(); ++i) {
            out << s[i] << ' ' << fs[i] << '\n';
        }
    }
    auto const from_file = table_model_from_file(path, 3);
    CHECK(from_file.f(2.5) == doctest::Approx(nl.f(2.5)).epsilon(1e-6));
    std::remove(path);
    CHECK_THROWS_AS(table_model_from_file("no/such/table.txt", 3), ConfigError);
}
