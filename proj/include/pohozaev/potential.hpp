#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "pohozaev/report.hpp"

namespace pohozaev {

/// A potential V with the pairings grad V(x).x and x.H(x).x, plus the decay metadata of its envelope.
///
/// Radial potentials carry profile evaluators in r = |x|, which the field quadratures use directly.
class Potential
{
  public:
    using PointFn = std::function<double(std::span<double const>)>;
    using RadialFn = std::function<double(double)>;

    /// Radial potential from V(r), r V'(r) and r^2 V''(r).
    static Potential radial(std::string name, RadialFn V, RadialFn grad_dot, RadialFn hess_quad, double k, double A0,
                            double A1);
    /// General potential from point evaluators; integrals fall back to Monte Carlo.
    static Potential general(std::string name, PointFn V, PointFn grad_dot, PointFn hess_quad, double k, double A0,
                             double A1);

    std::string const& name() const { return name_; }
    bool is_radial() const { return radial_; }
    double k() const { return k_; }
    double A0() const { return A0_; }
    double A1() const { return A1_; }

    double V(std::span<double const> x) const;
    double grad_dot(std::span<double const> x) const;
    double hess_quad(std::span<double const> x) const;

    /// Radial evaluators; only valid when is_radial().
    double V_r(double r) const { return V_r_(r); }
    double grad_dot_r(double r) const { return gd_r_(r); }
    double hess_quad_r(double r) const { return hq_r_(r); }

    // derived pieces entering the hypotheses
    double V_minus(std::span<double const> x) const;
    double W_plus(std::span<double const> x) const;
    double Z_minus(std::span<double const> x, int N) const;
    double K_plus(std::span<double const> x, int N) const;

  private:
    Potential() = default;

    std::string name_;
    bool radial_ = false;
    PointFn V_, gd_, hq_;
    RadialFn V_r_, gd_r_, hq_r_;
    double k_ = 0.0, A0_ = 0.0, A1_ = 0.0;
};

/// V(x) = scale (1 + |x|)^{-k}; requires k > max{2, N - 2}.
Potential model_potential(double k, double scale, int N);

struct PotentialQuadSpec
{
    double truncation_radius = 1e4;
    /// Strict inequalities pass only below threshold * (1 - margin).
    double margin = 1e-3;
    /// Monte Carlo settings for non-radial potentials.
    std::int64_t mc_samples = 400000;
    std::uint64_t seed = 12345;
};

/// Value of a whole-space integral with its truncation tail (radial) or standard error (Monte Carlo).
struct SpaceIntegral
{
    double value = 0.0;
    double tail = 0.0;
    double stderr_mc = 0.0;
};

/// int_{R^N} g(|x|) dx by radial quadrature to the truncation radius plus a power-law tail extrapolation.
/// Throws NumericalError when the estimated tail exceeds 10% of the value.
SpaceIntegral radial_space_integral(std::function<double(double)> const& g, int N, double truncation_radius);

/// int_{R^N} g(x) dx by Monte Carlo with density proportional to (1 + |x|)^{-(N+1)}.
SpaceIntegral mc_space_integral(std::function<double(std::span<double const>)> const& g, int N,
                                std::int64_t samples, std::uint64_t seed);

/// Numeric checks of the five hypotheses on V against the Sobolev constant S.
HypothesisReport check_V_hypotheses(Potential const& pot, int N, double S, PotentialQuadSpec const& quad = {});

} // namespace pohozaev
