#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pohozaev/fields.hpp"
#include "pohozaev/functionals.hpp"
#include "pohozaev/projection.hpp"

namespace pohozaev {

struct NodalGridSpec
{
    int N = 3;
    /// Node clusters on the axis; the axis coordinate runs along y0.
    std::vector<AxisAnchor> anchors{{0.0, 0.05}};
    double growth = 0.04;
    /// Half-width of the box beyond the outermost anchor, and the radial extent.
    double radius = 2000.0;
    /// Mirror the nonnegative half so that z -> -z maps nodes to nodes.
    bool symmetric = true;
};

/// Tensor nodes (z_j, rho_l) with rho_0 = 0 and finite-volume weights for the reduced measure
/// omega_{N-2} rho^{N-2} drho dz. The outer boundary carries the exterior energy of a
/// r^{-(N-2)} continuation, so the box edge is not a Dirichlet wall.
class NodalGrid
{
  public:
    explicit NodalGrid(NodalGridSpec spec);

    int dimension() const { return spec_.N; }
    std::size_t nz() const { return z_.size(); }
    std::size_t nrho() const { return rho_.size(); }
    std::size_t size() const { return z_.size() * rho_.size(); }
    std::size_t index(std::size_t j, std::size_t l) const { return j * rho_.size() + l; }
    std::vector<double> const& z() const { return z_; }
    std::vector<double> const& rho() const { return rho_; }
    std::vector<double> const& volume() const { return vol_; }
    double radius() const { return spec_.radius; }
    double min_spacing() const { return hmin_; }
    bool symmetric() const { return symmetric_; }
    NodalGridSpec const& spec() const { return spec_; }

    /// (K u)_i = 1/2 d/du_i of the discrete Dirichlet energy u.K u.
    void apply_stiffness(std::span<double const> u, std::span<double> out) const;
    /// u.K u and its exterior (boundary) part.
    std::pair<double, double> dirichlet_energy(std::span<double const> u) const;
    /// Node mirrored through z = 0 (symmetric grids only).
    std::size_t mirror(std::size_t i) const;

    struct Entry
    {
        std::size_t row, col;
        double value;
    };
    /// Lower triangle of K, diagonal included.
    std::vector<Entry> stiffness_entries() const;

  private:
    NodalGridSpec spec_;
    std::vector<double> z_, rho_, vol_;
    std::vector<double> az_;   // z-edge coefficients, (nz-1) x nrho
    std::vector<double> brho_; // rho-edge coefficients, nz x (nrho-1)
    std::vector<double> bnd_;  // boundary coefficients per node
    double hmin_ = 0.0;
    bool symmetric_ = false;
};

/// u(x / s) sampled at the grid nodes (u stored in unscaled coordinates).
struct NodalField
{
    std::shared_ptr<NodalGrid const> grid;
    std::vector<double> u;
    double s = 1.0;

    static NodalField sample(std::shared_ptr<NodalGrid const> grid, std::function<double(double, double)> const& f);
};

FieldMoments nodal_moments(NodalField const& u, Nonlinearity const& nl);

/// -s^{-2} Delta_h u + V(s x) u - f(u) at the nodes; pot may be null.
std::vector<double> nodal_residual(NodalField const& u, Potential const* pot, Nonlinearity const& nl);

/// sqrt(s^N sum vol r^2)
double nodal_residual_norm(NodalField const& u, std::span<double const> r);

/// Axis coordinate of the moment barycenter int x |u|^{2*} / int |u|^{2*} in physical units.
double barycenter_axis(NodalField const& u);

/// A function on a uniform Cartesian grid in R^N (for off-axis translations).
struct CartesianField
{
    std::vector<double> origin;
    double h = 0.1;
    std::vector<int> n;
    std::vector<double> u;

    static CartesianField sample(std::function<double(std::span<double const>)> const& f,
                                 std::vector<double> origin, double h, std::vector<int> n);
};

/// Midpoint-rule moment barycenter; throws DomainError when ||u||_{2*} is negligible.
std::vector<double> barycenter(CartesianField const& u, int N);

enum class Verdict { converged, escaped_to_infinity, max_iterations };

/// plain: step along the pointwise residual. sobolev: step along (s^{-2} K + M)^{-1} M r.
enum class Descent { plain, sobolev };

std::string to_string(Verdict v);

struct SearchOptions
{
    double tol_r = 1e-4;
    /// Relative energy change over the last 5 accepted steps.
    double tol_e = 1e-9;
    int max_iter = 4000;
    double tau_max = 50.0;
    bool enforce_reflection = false;
    double escape_fraction = 0.8;
    int escape_window = 20;
    int max_backtracks = 40;
    Descent descent = Descent::sobolev;
};

struct HistoryRow
{
    int iteration = 0;
    double energy = 0.0;
    double residual = 0.0;
    double barycenter = 0.0;
    double s = 1.0;
    double tau = 0.0;
    double J_V = 0.0;
};

struct SearchState
{
    NodalField u;
    double energy = 0.0;
    double residual_norm = 0.0;
    double barycenter = 0.0;
    double tau = 0.0;
    int iteration = 0;
    double J_V = 0.0;
    /// Sum of the absolute J_V terms; the scale for the natural-constraint check.
    double J_scale = 0.0;
    EnergyReport report;
    std::vector<HistoryRow> history;
    std::string stop_reason;
};

struct SearchResult
{
    SearchState state;
    Verdict verdict = Verdict::max_iterations;
};

/// Projected L^2-gradient descent of I_V on the Pohozaev manifold.
SearchResult minimize_on_manifold(NodalField u0, Potential const* pot, Nonlinearity const& nl,
                                  SearchOptions const& opts = {});

/// Grid clustered at the two-bump centers and the origin.
NodalGridSpec two_bump_grid_spec(TwoBumpConfig const& cfg, double spacing = 0.05, double growth = 0.04,
                                 double radius = 2000.0);

struct Candidate
{
    std::string source;
    double energy = 0.0;
    double grad_norm = 0.0;
    double barycenter_norm = 0.0;
    /// Separation parameter of the configuration it came from.
    double R = 0.0;
};

struct LevelReport
{
    double p0 = 0.0;
    double pV_upper = 0.0;
    double landscape_max = 0.0;
    double eta = 0.0;
    double endpoint_max = 0.0;
    double delta = 0.0;
    double rho = 0.0;
    std::vector<Candidate> candidates;
    bool pV_below_p0 = false;
    bool low_energy_off_center = false;
    bool all_above_rho = false;
    bool landscape_below_2p0 = false;
};

/// Candidates without a tracked barycenter (NaN) are left out of the off-center check.
LevelReport level_diagnostics(double p0, double rho, std::vector<Candidate> candidates,
                              LandscapeReport const* landscape, double delta, double tol);

} // namespace pohozaev
