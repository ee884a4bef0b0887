#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pohozaev/errors.hpp"
#include "pohozaev/functionals.hpp"
#include "pohozaev/two_bump.hpp"

namespace pohozaev {

/// xi' has no sign change on the (expanded) bracket.
class ProjectionError : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

struct XiSample
{
    double s = 0.0;
    double value = 0.0;      ///< I_V(u(. / s))
    double derivative = 0.0; ///< d/ds; equals J_V(u(. / s)) / s
};

/// Energy along the dilation path s -> u(. / s).
XiSample xi(FieldMoments const& u, Potential const* pot, double s);

/// s^2 [int F(u) - 1/2 int (grad V(sx).(sx) / N + V(sx)) u^2]
double psi(FieldMoments const& u, Potential const* pot, double s);

struct ProjectionOptions
{
    double lo = 0.05;
    double hi = 8.0;
    /// Geometric widenings of the bracket (factor 2 each side) before giving up.
    int expansions = 4;
    double tol = 1e-10;
    int certificate_points = 32;
    int max_iterations = 200;
};

struct ProjectionResult
{
    double s_star = 0.0;
    std::pair<double, double> bracket;
    std::vector<XiSample> xi_values;
    /// psi strictly increasing on the sampled points of (bracket.lo, 4 bracket.hi).
    bool unique = false;
    double projected_energy = 0.0;
    EnergyReport report;
    int iterations = 0;
};

ProjectionResult project(FieldMoments const& u, Potential const* pot, Nonlinearity const& nl,
                         ProjectionOptions const& opts = {});

struct LandscapeCell
{
    double lambda = 0.0;
    std::string y_tag;
    bool ok = false;
    std::string error;
    double s_star = 0.0;
    double energy = 0.0;
    double grad_norm = 0.0;
    bool unique = false;
    double barycenter = 0.0; ///< signed axis coordinate of the projected field's barycenter
};

struct LandscapeReport
{
    double R = 0.0;
    double p0 = 0.0;
    double rho = 0.0;
    std::vector<LandscapeCell> cells;
    double max_energy = 0.0;
    double eta = 0.0; ///< 2 p0 - max_energy
    double endpoint_max = 0.0;
    bool all_above_rho = false;
};

struct YChoice
{
    std::string tag;
    std::vector<double> y;
};

/// Projects U^R_{y,lambda} for every lambda and y; failures are recorded per cell.
LandscapeReport projection_landscape(std::shared_ptr<RadialProfile const> w, Potential const* pot,
                                     Nonlinearity const& nl, double R, std::vector<double> const& lambda_grid,
                                     std::vector<YChoice> const& y_choices, std::vector<double> const& y0,
                                     double p0, McSampler const& mc = {}, int jobs = 1);

/// Monte Carlo moments of a two-bump field for non-collinear centers.
FieldMoments two_bump_moments_mc(TwoBumpField const& U, Nonlinearity const& nl, McSampler const& mc);

} // namespace pohozaev
