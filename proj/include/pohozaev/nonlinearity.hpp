#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "pohozaev/report.hpp"

namespace pohozaev {

/// Cumulative primitive of f on a uniform panel table; F(s) = table[k] + Gauss rule on the remainder.
class PrimitiveTable
{
  public:
    PrimitiveTable(std::function<double(double)> f, double panel_width, double s_cap);

    /// F(s) for s >= 0.
    double operator()(double s) const;

  private:
    std::function<double(double)> f_;
    double h_;
    double cap_;
    std::vector<double> cumulative_;
};

/// An admissible nonlinearity f with primitive F and derivative f', extended as an odd function.
///
/// The evaluator bundle is immutable; copies share the primitive table.
class Nonlinearity
{
  public:
    struct Parts
    {
        std::string name;
        int dimension = 3;
        /// f and f' on s >= 0.
        std::function<double(double)> f;
        std::function<double(double)> fprime;
        /// Closed-form F on s >= 0; built from quadrature when empty.
        std::function<double(double)> primitive;
        double ell = 0.0;
        /// Known first positive zero (cross-checked against the numeric search), or NaN.
        double gamma_exact = std::numeric_limits<double>::quiet_NaN();
    };

    explicit Nonlinearity(Parts parts);

    double f(double s) const;
    double F(double s) const;
    double fprime(double s) const;

    std::string const& name() const { return name_; }
    int dimension() const { return dimension_; }
    /// First positive zero of f (+inf if f > 0 on (0, inf)).
    double gamma() const { return gamma_; }
    /// Numerically located zero, before replacement by the exact value.
    double gamma_numeric() const { return gamma_numeric_; }
    double ell() const { return ell_; }
    /// Growth constant fitted over a log grid: max of |F|/s^{2*}, |f|/s^{2*-1}, |f'|/s^{2*-2}.
    double A2() const { return A2_; }
    double critical_exponent() const { return 2.0 * dimension_ / (dimension_ - 2.0); }

  private:
    std::string name_;
    int dimension_;
    std::function<double(double)> f_;
    std::function<double(double)> fprime_;
    std::function<double(double)> primitive_;
    std::shared_ptr<PrimitiveTable const> table_;
    double gamma_ = 0.0;
    double gamma_numeric_ = 0.0;
    double ell_ = 0.0;
    double A2_ = 0.0;
};

enum class BuiltinModel { rational_asymlinear, sine_superlinear };

/// f(s) = (2s^11 - 4 sqrt2 s^9 + 4 s^7) / (s^10 + 1) or f(s) = s^7 (1 - sin s) / (1 + s^4), posed in R^3.
Nonlinearity builtin_model(BuiltinModel model);
Nonlinearity builtin_model(std::string const& name);

/// Pure power f(s) = s^{p-1}.
Nonlinearity power_model(double p, int dimension);

/// User-supplied f; f' by central differences with step s*1e-6 + 1e-12 when not given.
Nonlinearity custom_model(std::string name, int dimension, std::function<double(double)> f,
                          std::function<double(double)> fprime = {});

/// Monotone-cubic interpolant of (s, f(s)) samples; linear growth beyond the last sample.
Nonlinearity table_model(std::string name, int dimension, std::vector<double> s, std::vector<double> fs);

/// Reads a two-column text table (s f(s)); '#' starts a comment.
Nonlinearity table_model_from_file(std::string const& path, int dimension);

/// g(s) = s f'(s) / f(s); throws DomainError when f(s) vanishes or s is outside (0, gamma).
double eval_g(Nonlinearity const& nl, double s);

/// Logarithmic sampling of (0, s_max].
struct SamplingSpec
{
    double s_min = 1e-6;
    double s_max = 1e6;
    int points_per_decade = 200;
};

/// Grid checks of the growth, limit, and monotonicity hypotheses on f. Failures are entries, not errors.
HypothesisReport check_f_hypotheses(Nonlinearity const& nl, SamplingSpec const& grid = {}, double tol = 1e-6);

/// First positive zero of f on (0, s_max]: sign changes by bisection, touching zeros by bisection on f'.
double locate_first_zero(std::function<double(double)> const& f, std::function<double(double)> const& fprime,
                         double s_max, double tol = 1e-12);

} // namespace pohozaev
