#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pohozaev/errors.hpp"
#include "pohozaev/quadrature.hpp"

namespace pohozaev {

/// A point cluster on the symmetry axis where the graded mesh is refined.
struct AxisAnchor
{
    double z = 0.0;
    /// Panel width at the anchor.
    double spacing = 0.1;
};

/// Graded tensor mesh for integrands axisymmetric about the z axis in R^N.
struct AxisymGridSpec
{
    int N = 3;
    std::vector<AxisAnchor> anchors;
    /// Panel widths grow like spacing + growth * distance (geometric ratio 1 + growth).
    double growth = 0.08;
    /// Half-length in z measured from the outermost anchor, and the radial extent.
    double extent = 100.0;
    int gauss_order = 4;
};

/// Tensor Gauss points on (z, rho) with measure omega_{N-2} rho^{N-2} drho dz folded into the weights.
class AxisymGrid
{
  public:
    explicit AxisymGrid(AxisymGridSpec spec);

    /// Same breakpoints with every panel split in two.
    AxisymGrid refined() const;

    int dimension() const { return spec_.N; }
    std::vector<double> const& z() const { return z_; }
    std::vector<double> const& z_weights() const { return wz_; }
    std::vector<double> const& rho() const { return rho_; }
    std::vector<double> const& rho_weights() const { return wrho_; }
    std::vector<double> const& z_breaks() const { return z_breaks_; }
    std::vector<double> const& rho_breaks() const { return rho_breaks_; }
    std::size_t point_count() const { return z_.size() * rho_.size(); }
    AxisymGridSpec const& spec() const { return spec_; }

    /// Smallest panel width next to an anchor.
    double min_spacing() const;

  private:
    AxisymGrid(AxisymGridSpec spec, std::vector<double> zb, std::vector<double> rb);
    void build_points();

    AxisymGridSpec spec_;
    std::vector<double> z_breaks_, rho_breaks_;
    std::vector<double> z_, wz_, rho_, wrho_;
};

/// Breakpoints on [a, b] graded towards the given anchors.
std::vector<double> graded_breaks(double a, double b, std::vector<AxisAnchor> const& anchors, double growth);

struct AxisymResult
{
    double value = 0.0;
    /// |I(grid) - I(refined grid)|
    double error = 0.0;
};

/// Composite tensor quadrature of g(z, rho); the value is taken on the refined grid.
AxisymResult integrate_axisym(std::function<double(double, double)> const& g, AxisymGrid const& grid);

/// Single pass on the given grid, no error estimate.
double integrate_axisym_once(std::function<double(double, double)> const& g, AxisymGrid const& grid);

/// Importance sampler: equal-weight mixture of (1 + |x - c|)^{-(N+1)} kernels at the centers.
struct McSampler
{
    std::uint64_t seed = 20240611;
    std::int64_t samples = 200000;
    std::vector<std::vector<double>> centers;
};

struct McResult
{
    double value = 0.0;
    double stderr_mc = 0.0;
    double relative_error() const { return value != 0.0 ? stderr_mc / std::abs(value) : 0.0; }
};

McResult integrate_mc(std::function<double(std::span<double const>)> const& g, int N, McSampler const& sampler);

/// Log-log decay fit of a scan over R.
struct ExponentFit
{
    std::vector<double> R;
    std::vector<double> values;
    std::vector<double> errors;
    double slope = 0.0;
    double intercept = 0.0;
    double band95 = 0.0;
    double predicted_exponent = 0.0;
};

/// Scan of int (1+|x-Ry0|)^{-alpha} (1+|x-Ry|)^{-beta} dx; predicted exponent -min{alpha, beta, alpha+beta-N}.
/// Collinear centers use the axisymmetric grid, others Monte Carlo.
ExponentFit clapp_maia_scan(double alpha, double beta, std::span<double const> y0, std::span<double const> y,
                            std::span<double const> R_list, McSampler const& mc = {});

/// Scan of int (1+|x|)^{-theta} (1+|x-Ry0|)^{-g} (1+|x-Ry|)^{-g} dx; predicted -min{theta, 2g, theta+2g-N}.
ExponentFit clapp_maia_three_center_scan(double theta, double gamma_exp, std::span<double const> y0,
                                         std::span<double const> y, std::span<double const> R_list,
                                         McSampler const& mc = {});

/// If y = t y0 for a scalar t, returns true and sets t.
bool collinear_with(std::span<double const> y0, std::span<double const> y, double& t);

/// Default mesh for integrands built from unit-scale kernels at the given axis positions.
AxisymGridSpec kernel_grid_spec(int N, std::vector<double> const& axis_centers, double R);

} // namespace pohozaev
