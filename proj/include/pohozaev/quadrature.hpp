#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pohozaev {

/// Surface area of the unit sphere S^{n-1} in R^n (so 4*pi for n = 3, 2*pi for n = 2).
double unit_sphere_area(int n);

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule
{
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int order);

struct QuadResult
{
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

/// Single 15-point Kronrod panel with the embedded 7-point Gauss estimate.
QuadResult gauss_kronrod15(std::function<double(double)> const& f, double a, double b);

/// Globally adaptive Gauss-Kronrod (15 point) quadrature on a finite interval.
QuadResult integrate_adaptive(std::function<double(double)> const& f, double a, double b,
                              double abs_tol = 1e-12, double rel_tol = 1e-10, int max_panels = 2000);

/// Adaptive quadrature on [a, infinity) via the map x = a + t / (1 - t).
QuadResult integrate_adaptive_semi_infinite(std::function<double(double)> const& f, double a,
                                            double abs_tol = 1e-12, double rel_tol = 1e-10);

/// Neumaier compensated summation.
class CompensatedSum
{
  public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + comp_; }
    CompensatedSum& operator+=(double x) noexcept
    {
        add(x);
        return *this;
    }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Finite-difference weights for derivatives 0..max_order at x0 on arbitrary nodes (Fornberg).
/// Result is indexed [order][node].
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<double const> nodes, int max_order);

/// Weighted least-squares line fit y = slope * x + intercept.
struct LineFit
{
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    /// Half width of the 95% confidence interval of the slope.
    double band95 = 0.0;
    std::size_t points = 0;
};

LineFit fit_line(std::span<double const> x, std::span<double const> y, std::span<double const> weights = {});

/// Least-squares slope of log|y| against log x.
LineFit fit_loglog(std::span<double const> x, std::span<double const> y);

/// Weighted by 1 / (rel_err^2 + floor^2) with rel_err = err / |y|; the floor keeps
/// negligible quadrature errors from dominating over model error.
LineFit fit_loglog_weighted(std::span<double const> x, std::span<double const> y, std::span<double const> err,
                            double floor = 1e-3);

/// Two-sided 97.5% Student-t quantile.
double student_t975(std::size_t dof);

} // namespace pohozaev
