#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "pohozaev/limit_problem.hpp"
#include "pohozaev/nonlinearity.hpp"
#include "pohozaev/potential.hpp"

namespace pohozaev {

/// Everything the energy functionals need from a field u, so that dilations u(x/s) can be
/// evaluated without touching u again.
///
/// The potential terms are kept as a discrete measure: int V(x) u(x)^2 dx ~ sum_i mass_i V(|x_i|).
struct FieldMoments
{
    int N = 3;
    double grad_norm_sq = 0.0;
    double F_integral = 0.0;
    /// Portion of grad_norm_sq contributed by an extrapolated tail.
    double grad_tail = 0.0;
    std::vector<double> radii;
    std::vector<double> mass;

    /// int V(s x) u(x)^2 dx and int (grad V . x)(s x) u(x)^2 dx; pot must be radial.
    std::pair<double, double> potential_terms(Potential const& pot, double s = 1.0) const;
    double total_mass() const;

    /// Replaces the mass measure by two nodes per logarithmic radius bin matching the bin's
    /// mass, mean and variance; potential terms change by O(bin width^3).
    void compress(int bins_per_decade = 1000);
};

struct EnergyReport
{
    double I_V = 0.0;
    double I_0 = 0.0;
    double J_V = 0.0;
    double J_0 = 0.0;
    double grad_norm_sq = 0.0;
    double V_quadratic = 0.0;
    double gradV_quadratic = 0.0;
    double F_integral = 0.0;
    double residual_norm = std::numeric_limits<double>::quiet_NaN();
    double rho_bound = 0.0;
};

/// Energies of u(. / s) from the moments of u; pot may be null (V = 0).
EnergyReport evaluate(FieldMoments const& u, Potential const* pot, Nonlinearity const& nl, double s = 1.0);

/// Talenti's best constant in ||grad u||^2 >= S ||u||_{2*}^2.
double sobolev_constant(int N);

/// rho with rho^{2*-2} = S^{2*/2} / (2 2* A2): lower bound for ||grad u|| on the Pohozaev manifold.
double rho_bound(int N, double A2);

/// (t, I_V(u(. / t))) along the dilation path.
std::vector<std::pair<double, double>> scaling_path(FieldMoments const& u, Potential const* pot,
                                                    std::vector<double> const& t_list);

/// Moments of a radial profile; the envelope tail beyond r_max is added analytically and
/// extended with extra mass nodes out to tail_factor * r_max.
FieldMoments radial_moments(RadialProfile const& w, Nonlinearity const& nl, double tail_factor = 1e3);

/// Weighted L^2 norm of -Delta u + V u - f(u) for u = w(. / s), with the Laplacian from finite differences.
double radial_residual_norm(RadialProfile const& w, Potential const* pot, Nonlinearity const& nl, double s = 1.0);

} // namespace pohozaev
