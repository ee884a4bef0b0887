#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pohozaev/errors.hpp"
#include "pohozaev/nonlinearity.hpp"

namespace pohozaev {

/// Raised when the shooting bracket does not separate crossing from slow-decay trajectories.
class BracketError : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

/// A radial function on r = 0 plus a log-uniform grid [r_min, r_max], with first and second derivatives.
///
/// Values between nodes use quintic Hermite interpolation; beyond r_max the fitted envelope c r^{-(N-2)}.
class RadialProfile
{
  public:
    RadialProfile() = default;
    RadialProfile(int N, double r_min, double log_step, std::vector<double> w, std::vector<double> dw,
                  std::vector<double> d2w);

    int dimension() const { return N_; }
    std::size_t size() const { return w_.size(); }
    double node(std::size_t i) const;
    double r_min() const { return r_min_; }
    double r_max() const { return node(size() - 1); }
    double log_step() const { return h_; }
    std::vector<double> const& values() const { return w_; }
    std::vector<double> const& derivatives() const { return dw_; }
    std::vector<double> const& second_derivatives() const { return d2w_; }

    double value(double r) const;
    double derivative(double r) const;
    /// Both at once (shares the interval lookup).
    std::pair<double, double> value_and_derivative(double r) const;

    /// The dilation x -> w(x / t): nodes scale by t, derivatives by 1/t and 1/t^2.
    RadialProfile dilated(double t) const;

    /// omega_{N-1} int_0^{r_max} g(r, w, w') r^{N-1} dr: Gauss on [0, r_min], Simpson in log r beyond.
    double radial_integral(std::function<double(double, double, double)> const& g) const;

    struct QuadNode
    {
        double r;
        double weight; ///< includes omega_{N-1} r^{N-1}
        double w;
        double dw;
    };
    /// The nodes and weights behind radial_integral.
    std::vector<QuadNode> quadrature_rule() const;

    // tail metadata, filled by the fast-decay solver
    double tail_coefficient = 0.0; ///< c in w ~ c r^{-(N-2)} beyond r_max
    double decay_exponent = 0.0;
    double gradient_decay_exponent = 0.0;
    double A4 = 0.0, A5 = 0.0, A6 = 0.0;
    double plateau_statistic = 0.0;
    double ode_residual = 0.0;

    double sup_norm() const { return w_.empty() ? 0.0 : w_.front(); }

  private:
    std::size_t interval(double r) const;

    int N_ = 3;
    double r_min_ = 0.0;
    double h_ = 0.0;
    std::vector<double> w_, dw_, d2w_;
};

enum class Classification { crossing, slow_decay, fast_decay };

std::string to_string(Classification c);

struct ShootOptions
{
    double r_max = 1e3;
    /// First log-grid node; the series start is applied there.
    double r_min = 1e-3;
    /// Log-grid nodes in [r_min, r_max] (odd, so Simpson applies).
    int nodes = 8001;
    double rel_tol = 1e-10;
    double abs_tol = 1e-16;
    double crossing_threshold = -1e-14;
    double plateau_threshold = 0.02;
};

struct ShootResult
{
    RadialProfile profile;
    Classification classification = Classification::slow_decay;
    /// a in w ~ a + b r^{-(N-2)} at the last node; negative means the orbit will cross zero.
    double asymptote = 0.0;
    /// Radius where integration stopped (first zero for crossing orbits).
    double r_end = 0.0;
};

/// Integrates w'' + (N-1)/r w' + f(w) = 0, w(0) = u0, w'(0) = 0 out to r_max or the first zero.
ShootResult shoot(Nonlinearity const& nl, int N, double u0, ShootOptions const& opts = {});

struct FastDecaySolution
{
    double u0 = 0.0;
    RadialProfile profile;
    /// Side changes seen on a coarse scan of the bracket; more than one is reported, not resolved.
    int separatrix_count = 0;
    int bisection_steps = 0;
};

/// Bisection on u0 between an orbit that crosses zero and one that stays positive with slow decay.
FastDecaySolution find_fast_decay(Nonlinearity const& nl, int N, std::pair<double, double> bracket,
                                  double tol = 1e-13, ShootOptions const& opts = {});

/// Bracket (0.05 gamma, 0.99 gamma), or (0.05, 10) for nonlinearities without a positive zero.
std::pair<double, double> default_bracket(Nonlinearity const& nl);

struct LimitEnergy
{
    double m = 0.0;
    double grad_norm_sq = 0.0;
    double F_integral = 0.0;
    double J0 = 0.0;
    /// |I0(w) - ||grad w||^2 / N| / I0(w)
    double identity_gap = 0.0;
    bool consistent = false;
};

/// I0(w) by radial quadrature including the envelope tail, with the m = ||grad w||^2 / N cross-check.
LimitEnergy limit_energy(RadialProfile const& w, Nonlinearity const& nl, double tol = 1e-4);

/// Max over interior nodes of |w'' + (N-1)/r w' + f(w)| with w'' from a 5-point stencil on w'.
double ode_residual(RadialProfile const& w, Nonlinearity const& nl);

} // namespace pohozaev
