#include "pohozaev/fields.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace pohozaev {

namespace {

double local_spacing(double x, std::vector<AxisAnchor> const& anchors, double growth)
{
    double h = std::numeric_limits<double>::infinity();
    for (auto const& a : anchors) {
        h = std::min(h, a.spacing + growth * std::abs(x - a.z));
    }
    return h;
}

// march from a towards b; the spacing function shrinks near anchors so the march settles onto b
void march(std::vector<double>& out, double a, double b, std::vector<AxisAnchor> const& anchors, double growth)
{
    double x = a;
    while (true) {
        double const h = local_spacing(x, anchors, growth);
        double const hb = local_spacing(b, anchors, growth);
        if (b - x <= 1.5 * std::max(h, hb) || b - x <= 1.5 * h) {
            out.push_back(b);
            return;
        }
        x += h;
        out.push_back(x);
    }
}

} // namespace

std::vector<double> graded_breaks(double a, double b, std::vector<AxisAnchor> const& anchors, double growth)
{
    std::vector<double> cuts{a, b};
    for (auto const& an : anchors) {
        if (an.z > a && an.z < b) {
            cuts.push_back(an.z);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<double> breaks{cuts.front()};
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        double const lo = cuts[k], hi = cuts[k + 1];
        // refine from both ends towards the midpoint so each end sees its own anchor spacing
        double const mid = 0.5 * (lo + hi);
        std::vector<double> left, right;
        march(left, lo, mid, anchors, growth);
        std::vector<AxisAnchor> mirrored;
        for (auto const& an : anchors) {
            mirrored.push_back({-an.z, an.spacing});
        }
        march(right, -hi, -mid, mirrored, growth);
        left.pop_back(); // mid comes back from the right march
        breaks.insert(breaks.end(), left.begin(), left.end());
        for (auto it = right.rbegin(); it != right.rend(); ++it) {
            breaks.push_back(-*it);
        }
        breaks.push_back(hi);
    }
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double u, double v) { return std::abs(u - v) <= 1e-12 * (1.0 + std::abs(u)); }),
                 breaks.end());
    return breaks;
}

AxisymGrid::AxisymGrid(AxisymGridSpec spec)
    : spec_(std::move(spec))
{
    if (spec_.anchors.empty()) {
        throw DomainError("axisymmetric grid needs at least one anchor");
    }
    double zmin = spec_.anchors.front().z, zmax = zmin, hmin = spec_.anchors.front().spacing;
    for (auto const& a : spec_.anchors) {
        zmin = std::min(zmin, a.z);
        zmax = std::max(zmax, a.z);
        hmin = std::min(hmin, a.spacing);
    }
    z_breaks_ = graded_breaks(zmin - spec_.extent, zmax + spec_.extent, spec_.anchors, spec_.growth);
    rho_breaks_ = graded_breaks(0.0, spec_.extent, {{0.0, hmin}}, spec_.growth);
    build_points();
}

AxisymGrid::AxisymGrid(AxisymGridSpec spec, std::vector<double> zb, std::vector<double> rb)
    : spec_(std::move(spec))
    , z_breaks_(std::move(zb))
    , rho_breaks_(std::move(rb))
{
    build_points();
}

void AxisymGrid::build_points()
{
    auto const rule = gauss_legendre(spec_.gauss_order);
    auto fill = [&](std::vector<double> const& br, std::vector<double>& x, std::vector<double>& w, bool radial) {
        x.clear();
        w.clear();
        double const area = radial ? unit_sphere_area(spec_.N - 1) : 1.0;
        for (std::size_t k = 0; k + 1 < br.size(); ++k) {
            double const c = 0.5 * (br[k] + br[k + 1]), h = 0.5 * (br[k + 1] - br[k]);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                double const p = c + h * rule.nodes[q];
                x.push_back(p);
                w.push_back(h * rule.weights[q] * (radial ? area * std::pow(p, spec_.N - 2) : 1.0));
            }
        }
    };
    fill(z_breaks_, z_, wz_, false);
    fill(rho_breaks_, rho_, wrho_, true);
}

AxisymGrid AxisymGrid::refined() const
{
    auto split = [](std::vector<double> const& br) {
        std::vector<double> out;
        out.reserve(2 * br.size());
        for (std::size_t k = 0; k + 1 < br.size(); ++k) {
            out.push_back(br[k]);
            out.push_back(0.5 * (br[k] + br[k + 1]));
        }
        out.push_back(br.back());
        return out;
    };
    return AxisymGrid(spec_, split(z_breaks_), split(rho_breaks_));
}

double AxisymGrid::min_spacing() const
{
    double h = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < z_breaks_.size(); ++k) {
        h = std::min(h, z_breaks_[k + 1] - z_breaks_[k]);
    }
    return h;
}

double integrate_axisym_once(std::function<double(double, double)> const& g, AxisymGrid const& grid)
{
    auto const& z = grid.z();
    auto const& wz = grid.z_weights();
    auto const& rho = grid.rho();
    auto const& wr = grid.rho_weights();
    CompensatedSum total;
    for (std::size_t j = 0; j < z.size(); ++j) {
        double row = 0.0;
        for (std::size_t l = 0; l < rho.size(); ++l) {
            row += wr[l] * g(z[j], rho[l]);
        }
        total += wz[j] * row;
    }
    return total.value();
}

AxisymResult integrate_axisym(std::function<double(double, double)> const& g, AxisymGrid const& grid)
{
    double const coarse = integrate_axisym_once(g, grid);
    double const fine = integrate_axisym_once(g, grid.refined());
    return {fine, std::abs(fine - coarse)};
}

McResult integrate_mc(std::function<double(std::span<double const>)> const& g, int N, McSampler const& sampler)
{
    if (sampler.centers.empty()) {
        throw DomainError("Monte Carlo sampler needs at least one center");
    }
    std::mt19937_64 rng(sampler.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::size_t const K = sampler.centers.size();
    double const norm_const = unit_sphere_area(N) / N;
    std::vector<double> x(N), d(N);
    double mean = 0.0, m2 = 0.0;
    for (std::int64_t i = 0; i < sampler.samples; ++i) {
        auto const& c = sampler.centers[std::min<std::size_t>(static_cast<std::size_t>(uni(rng) * K), K - 1)];
        double const t = std::pow(uni(rng), 1.0 / N);
        double const r = t / (1.0 - t);
        double len = 0.0;
        for (auto& v : d) {
            v = gauss(rng);
            len += v * v;
        }
        len = std::sqrt(len);
        for (int a = 0; a < N; ++a) {
            x[a] = c[a] + r * d[a] / len;
        }
        double pdf = 0.0;
        for (auto const& ck : sampler.centers) {
            double dist = 0.0;
            for (int a = 0; a < N; ++a) {
                dist += (x[a] - ck[a]) * (x[a] - ck[a]);
            }
            pdf += std::pow(1.0 + std::sqrt(dist), -(N + 1.0));
        }
        pdf /= static_cast<double>(K) * norm_const;
        double const v = g(x) / pdf;
        double const delta = v - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (v - mean);
    }
    McResult res;
    res.value = mean;
    res.stderr_mc =
        std::sqrt(m2 / static_cast<double>(sampler.samples - 1) / static_cast<double>(sampler.samples));
    return res;
}

bool collinear_with(std::span<double const> y0, std::span<double const> y, double& t)
{
    double dot = 0.0, n0 = 0.0, ny = 0.0;
    for (std::size_t a = 0; a < y0.size(); ++a) {
        dot += y0[a] * y[a];
        n0 += y0[a] * y0[a];
        ny += y[a] * y[a];
    }
    t = dot / n0;
    double perp = 0.0;
    for (std::size_t a = 0; a < y0.size(); ++a) {
        double const c = y[a] - t * y0[a];
        perp += c * c;
    }
    return perp <= 1e-24 * std::max(1.0, ny);
}

AxisymGridSpec kernel_grid_spec(int N, std::vector<double> const& axis_centers, double R)
{
    AxisymGridSpec spec;
    spec.N = N;
    for (double z : axis_centers) {
        spec.anchors.push_back({z, 0.1});
    }
    double outer = 0.0;
    for (double z : axis_centers) {
        outer = std::max(outer, std::abs(z));
    }
    spec.extent = std::max(4.0 * R, 1000.0 * (outer + 1.0));
    return spec;
}

namespace {

using Kernel = std::function<double(double)>; // of the distance

ExponentFit run_scan(std::vector<std::pair<std::vector<double>, Kernel>> const& factors_at_unit, int N,
                     std::span<double const> R_list, double predicted, bool collinear, McSampler const& mc,
                     std::span<double const> y0)
{
    if (R_list.size() < 2) {
        throw DomainError("exponent scan needs at least two R values");
    }
    ExponentFit fit;
    fit.predicted_exponent = predicted;
    for (double R : R_list) {
        if (R < 1.0) {
            throw DomainError("scan radii must be at least 1");
        }
        double value = 0.0, err = 0.0;
        if (collinear) {
            // centers as axis coordinates along y0
            std::vector<double> axis;
            std::vector<Kernel> kernels;
            for (auto const& [c, k] : factors_at_unit) {
                double along = 0.0;
                for (std::size_t a = 0; a < y0.size(); ++a) {
                    along += c[a] * y0[a];
                }
                axis.push_back(R * along);
                kernels.push_back(k);
            }
            AxisymGrid const grid(kernel_grid_spec(N, axis, R));
            auto g = [&](double z, double rho) {
                double v = 1.0;
                for (std::size_t i = 0; i < axis.size(); ++i) {
                    v *= kernels[i](std::hypot(z - axis[i], rho));
                }
                return v;
            };
            auto const res = integrate_axisym(g, grid);
            value = res.value;
            err = res.error;
            if (err > 0.05 * std::abs(value)) {
                std::ostringstream msg;
                msg << "resolution: Richardson estimate " << err / std::abs(value) << " exceeds 5% at R = " << R;
                throw NumericalError(msg.str());
            }
        } else {
            McSampler s = mc;
            s.centers.clear();
            for (auto const& [c, k] : factors_at_unit) {
                std::vector<double> p(c.size());
                for (std::size_t a = 0; a < c.size(); ++a) {
                    p[a] = R * c[a];
                }
                s.centers.push_back(p);
            }
            auto g = [&](std::span<double const> x) {
                double v = 1.0;
                for (std::size_t i = 0; i < s.centers.size(); ++i) {
                    double d = 0.0;
                    for (std::size_t a = 0; a < x.size(); ++a) {
                        d += (x[a] - s.centers[i][a]) * (x[a] - s.centers[i][a]);
                    }
                    v *= factors_at_unit[i].second(std::sqrt(d));
                }
                return v;
            };
            auto const res = integrate_mc(g, N, s);
            value = res.value;
            err = res.stderr_mc;
        }
        fit.R.push_back(R);
        fit.values.push_back(value);
        fit.errors.push_back(err);
    }
    auto const line = fit_loglog_weighted(fit.R, fit.values, fit.errors);
    fit.slope = line.slope;
    fit.intercept = line.intercept;
    fit.band95 = line.band95;
    return fit;
}

} // namespace

ExponentFit clapp_maia_scan(double alpha, double beta, std::span<double const> y0, std::span<double const> y,
                            std::span<double const> R_list, McSampler const& mc)
{
    int const N = static_cast<int>(y0.size());
    if (!(alpha > 0.0 && beta > 0.0 && alpha + beta > N)) {
        throw DomainError("need alpha, beta > 0 and alpha + beta > N");
    }
    double t = 0.0;
    bool const collinear = collinear_with(y0, y, t);
    double const mu = std::min({alpha, beta, alpha + beta - N});
    std::vector<std::pair<std::vector<double>, Kernel>> factors{
        {{y0.begin(), y0.end()}, [alpha](double d) { return std::pow(1.0 + d, -alpha); }},
        {{y.begin(), y.end()}, [beta](double d) { return std::pow(1.0 + d, -beta); }}};
    return run_scan(factors, N, R_list, -mu, collinear, mc, y0);
}

ExponentFit clapp_maia_three_center_scan(double theta, double gamma_exp, std::span<double const> y0,
                                         std::span<double const> y, std::span<double const> R_list,
                                         McSampler const& mc)
{
    int const N = static_cast<int>(y0.size());
    if (!(theta > 0.0 && gamma_exp > 0.0 && theta + 2.0 * gamma_exp > N)) {
        throw DomainError("need theta, gamma > 0 and theta + 2 gamma > N");
    }
    double t = 0.0;
    bool const collinear = collinear_with(y0, y, t);
    double const tau = std::min({theta, 2.0 * gamma_exp, theta + 2.0 * gamma_exp - N});
    std::vector<double> origin(N, 0.0);
    // the origin kernel does not move with R: scale its "center" by zero
    std::vector<std::pair<std::vector<double>, Kernel>> factors{
        {origin, [theta](double d) { return std::pow(1.0 + d, -theta); }},
        {{y0.begin(), y0.end()}, [gamma_exp](double d) { return std::pow(1.0 + d, -gamma_exp); }},
        {{y.begin(), y.end()}, [gamma_exp](double d) { return std::pow(1.0 + d, -gamma_exp); }}};
    return run_scan(factors, N, R_list, -tau, collinear, mc, y0);
}

} // namespace pohozaev
