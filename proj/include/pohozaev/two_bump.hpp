#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pohozaev/fields.hpp"
#include "pohozaev/functionals.hpp"
#include "pohozaev/limit_problem.hpp"
#include "pohozaev/nonlinearity.hpp"
#include "pohozaev/report.hpp"

namespace pohozaev {

/// U = w((x - R y0) / lambda) + w((x - R y) / (1 - lambda)); a bump with zero dilation is the zero function.
struct TwoBumpConfig
{
    std::vector<double> y0{1.0, 0.0, 0.0};
    std::vector<double> y{-1.0, 0.0, 0.0};
    double lambda = 0.5;
    double R = 8.0;
    std::optional<double> s;

    double lambda_minus() const { return std::min(lambda, 1.0 - lambda); }
    /// Throws DomainError unless |y0| = 1, |y - y0| = 2, lambda in [0, 1], R >= 1.
    void validate() const;
};

/// y = -y0.
std::vector<double> collinear_partner(std::span<double const> y0);
/// y = y0 + 2 e with e a unit vector orthogonal to y0.
std::vector<double> perpendicular_partner(std::span<double const> y0);

/// lambda^j + (1 - lambda)^j
double C_lambda(double lambda, double j);

class TwoBumpField
{
  public:
    TwoBumpField(std::shared_ptr<RadialProfile const> w, TwoBumpConfig cfg);

    TwoBumpConfig const& config() const { return cfg_; }
    RadialProfile const& profile() const { return *w_; }
    int dimension() const { return w_->dimension(); }

    double value(std::span<double const> x) const;
    /// Bumps as functions of the distance to their centers (value, radial derivative).
    std::pair<double, double> bump0(double dist) const;
    std::pair<double, double> bumpy(double dist) const;

    /// Both centers on a line through the origin, so the field is axisymmetric about the y0 axis.
    bool axisymmetric() const { return collinear_; }
    /// Axis coordinates (along y0) of the two centers.
    double z0() const { return cfg_.R; }
    double zy() const { return cfg_.R * t_; }
    double value_axi(double z, double rho) const;

    /// Mesh refined at both centers (panel width spacing_scale times the bump dilation, capped at 0.1) and at the origin.
    AxisymGrid grid(double spacing_scale = 0.1, double extent_factor = 1e4) const;

    /// Largest distance (in profile units) at which a bump is sampled inside the grid, to flag envelope use.
    bool uses_envelope(AxisymGrid const& grid) const;

  private:
    std::shared_ptr<RadialProfile const> w_;
    TwoBumpConfig cfg_;
    bool collinear_ = false;
    double t_ = -1.0;
};

struct TwoBumpIntegrals
{
    double grad_cross = 0.0;    ///< int grad w0 . grad wy
    double epsilon = 0.0;       ///< int f(w0) wy
    double epsilon_mirror = 0.0; ///< int f(wy) w0
    double F_cross = 0.0;       ///< int F(U) - F(w0) - F(wy)
    double cross_term = 0.0;    ///< F_cross minus both linear couplings, summed pointwise
    double mixed_power = 0.0;   ///< int w0^a wy^b
    double crit_norm = 0.0;     ///< int |U|^{2*}
    double crit_moment = 0.0;   ///< int z |U|^{2*}
};

struct TwoBumpEstimate
{
    TwoBumpIntegrals value;
    TwoBumpIntegrals error;
    bool envelope_used = false;
};

struct MixedPowers
{
    double a = 5.0;
    double b = 1.0;
};

/// All cross integrals in one pass over the grid (and its refinement when with_error).
TwoBumpEstimate two_bump_integrals(TwoBumpField const& U, Nonlinearity const& nl, AxisymGrid const& grid,
                                   bool with_error = true, MixedPowers powers = {});

/// Moments of U for the functionals; self terms come from the 1-D profile by exact scaling.
FieldMoments two_bump_moments(TwoBumpField const& U, Nonlinearity const& nl, AxisymGrid const& grid,
                              TwoBumpIntegrals const* cross = nullptr);

/// Weighted L^2 norm of -Delta U + V U - f(U) for U(. / s), using -Delta w = f(w) for each bump.
double two_bump_residual_norm(TwoBumpField const& U, Potential const* pot, Nonlinearity const& nl,
                              AxisymGrid const& grid, double s = 1.0);

struct EpsilonResult
{
    double value = 0.0;
    double error = 0.0;
};

/// int f(w0) wy; axisymmetric quadrature when collinear, otherwise Monte Carlo.
EpsilonResult epsilon(TwoBumpField const& U, Nonlinearity const& nl, McSampler const& mc = {});

struct InteractionRow
{
    double R = 0.0;
    double epsilon = 0.0, epsilon_error = 0.0;
    double grad_cross = 0.0, grad_cross_error = 0.0;
    double mixed_power = 0.0, mixed_power_error = 0.0;
    double cross_term = 0.0, cross_term_error = 0.0;
    double ratio = 0.0; ///< cross_term / epsilon
    double identity_gap = 0.0; ///< |grad_cross - epsilon / lambda^2| / |grad_cross|
    bool envelope_used = false;
};

struct InteractionReport
{
    double lambda = 0.5;
    MixedPowers powers;
    std::vector<InteractionRow> rows;
    LineFit epsilon_fit, grad_fit, mixed_fit, cross_fit;
    bool ratio_decreasing = false;
};

/// R-scan at fixed (y0, y, lambda): cfg_list must share those and differ in R.
InteractionReport interaction_suite(std::shared_ptr<RadialProfile const> w, Nonlinearity const& nl,
                                    std::vector<TwoBumpConfig> const& cfg_list, MixedPowers powers = {},
                                    int jobs = 1);

struct AcpReport
{
    double sigma = 1.0;
    double C5 = 1.0;
    double C6 = 0.0;
    double holdout_f_ratio = 0.0; ///< max |f(u+v)-f(u)-f(v)| / |uv|^sigma on the holdout
    double holdout_F_ratio = 0.0;
    bool pass = false;
};

/// Fits the smallest C6 on a dense grid of (u, v) in [-C5, C5]^2 and validates on random holdout pairs.
AcpReport acp_pointwise_check(Nonlinearity const& nl, double C5, int holdout = 10000, std::uint64_t seed = 7,
                              double slack = 0.01);

} // namespace pohozaev
