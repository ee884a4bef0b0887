#include "pohozaev/search.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <optional>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "pohozaev/errors.hpp"
#include "pohozaev/quadrature.hpp"

namespace pohozaev {

NodalGrid::NodalGrid(NodalGridSpec spec)
    : spec_(std::move(spec))
{
    int const N = spec_.N;
    if (spec_.anchors.empty()) {
        throw DomainError("nodal grid needs at least one anchor");
    }
    double outer = 0.0, h0 = spec_.anchors.front().spacing;
    for (auto const& a : spec_.anchors) {
        outer = std::max(outer, std::abs(a.z));
        h0 = std::min(h0, a.spacing);
    }
    double const Z = outer + spec_.radius;
    if (spec_.symmetric) {
        std::vector<AxisAnchor> folded;
        for (auto const& a : spec_.anchors) {
            folded.push_back({std::abs(a.z), a.spacing});
        }
        auto const half = graded_breaks(0.0, Z, folded, spec_.growth);
        for (auto it = half.rbegin(); it != std::prev(half.rend()); ++it) {
            z_.push_back(-*it);
        }
        z_.insert(z_.end(), half.begin(), half.end());
        symmetric_ = true;
    } else {
        z_ = graded_breaks(-Z, Z, spec_.anchors, spec_.growth);
    }
    rho_ = graded_breaks(0.0, spec_.radius, {{0.0, h0}}, spec_.growth);
    hmin_ = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < z_.size(); ++j) {
        hmin_ = std::min(hmin_, z_[j + 1] - z_[j]);
    }
    for (std::size_t l = 0; l + 1 < rho_.size(); ++l) {
        hmin_ = std::min(hmin_, rho_[l + 1] - rho_[l]);
    }

    std::size_t const J = z_.size(), K = rho_.size();
    double const omega = unit_sphere_area(N - 1);
    auto shell = [&](double a, double b) { return omega * (std::pow(b, N - 1) - std::pow(a, N - 1)) / (N - 1.0); };
    std::vector<double> dz(J), area(K);
    for (std::size_t j = 0; j < J; ++j) {
        double const lo = j == 0 ? z_[0] : 0.5 * (z_[j - 1] + z_[j]);
        double const hi = j + 1 == J ? z_[J - 1] : 0.5 * (z_[j] + z_[j + 1]);
        dz[j] = hi - lo;
    }
    for (std::size_t l = 0; l < K; ++l) {
        double const lo = l == 0 ? 0.0 : 0.5 * (rho_[l - 1] + rho_[l]);
        double const hi = l + 1 == K ? rho_[K - 1] : 0.5 * (rho_[l] + rho_[l + 1]);
        area[l] = shell(lo, hi);
    }
    vol_.resize(J * K);
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t l = 0; l < K; ++l) {
            vol_[index(j, l)] = dz[j] * area[l];
        }
    }
    az_.resize((J - 1) * K);
    for (std::size_t j = 0; j + 1 < J; ++j) {
        for (std::size_t l = 0; l < K; ++l) {
            az_[j * K + l] = area[l] / (z_[j + 1] - z_[j]);
        }
    }
    brho_.resize(J * (K - 1));
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t l = 0; l + 1 < K; ++l) {
            double const d = rho_[l + 1] - rho_[l];
            brho_[j * (K - 1) + l] = dz[j] * shell(rho_[l], rho_[l + 1]) / (d * d);
        }
    }
    // exterior energy of the continuation u(x) = u_b (r_b / r)^{N-2}: (N-2) (x.n) / r^2 u^2 dS
    bnd_.assign(J * K, 0.0);
    for (std::size_t l = 0; l < K; ++l) {
        for (std::size_t j : {std::size_t{0}, J - 1}) {
            double const r = std::hypot(z_[j], rho_[l]);
            bnd_[index(j, l)] += (N - 2.0) * std::abs(z_[j]) / (r * r) * area[l];
        }
    }
    double const side = omega * std::pow(rho_[K - 1], N - 2);
    for (std::size_t j = 0; j < J; ++j) {
        double const r = std::hypot(z_[j], rho_[K - 1]);
        bnd_[index(j, K - 1)] += (N - 2.0) * rho_[K - 1] / (r * r) * side * dz[j];
    }
}

void NodalGrid::apply_stiffness(std::span<double const> u, std::span<double> out) const
{
    std::size_t const J = z_.size(), K = rho_.size();
    for (std::size_t i = 0; i < J * K; ++i) {
        out[i] = bnd_[i] * u[i];
    }
    for (std::size_t j = 0; j + 1 < J; ++j) {
        for (std::size_t l = 0; l < K; ++l) {
            double const a = az_[j * K + l];
            std::size_t const p = index(j, l), q = index(j + 1, l);
            double const d = a * (u[p] - u[q]);
            out[p] += d;
            out[q] -= d;
        }
    }
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t l = 0; l + 1 < K; ++l) {
            double const b = brho_[j * (K - 1) + l];
            std::size_t const p = index(j, l), q = index(j, l + 1);
            double const d = b * (u[p] - u[q]);
            out[p] += d;
            out[q] -= d;
        }
    }
}

std::pair<double, double> NodalGrid::dirichlet_energy(std::span<double const> u) const
{
    std::size_t const J = z_.size(), K = rho_.size();
    CompensatedSum total, boundary;
    for (std::size_t i = 0; i < J * K; ++i) {
        if (bnd_[i] != 0.0) {
            boundary += bnd_[i] * u[i] * u[i];
        }
    }
    for (std::size_t j = 0; j + 1 < J; ++j) {
        for (std::size_t l = 0; l < K; ++l) {
            double const d = u[index(j, l)] - u[index(j + 1, l)];
            total += az_[j * K + l] * d * d;
        }
    }
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t l = 0; l + 1 < K; ++l) {
            double const d = u[index(j, l)] - u[index(j, l + 1)];
            total += brho_[j * (K - 1) + l] * d * d;
        }
    }
    total += boundary.value();
    return {total.value(), boundary.value()};
}

std::size_t NodalGrid::mirror(std::size_t i) const
{
    std::size_t const K = rho_.size();
    return index(z_.size() - 1 - i / K, i % K);
}

std::vector<NodalGrid::Entry> NodalGrid::stiffness_entries() const
{
    std::size_t const J = z_.size(), K = rho_.size();
    std::vector<Entry> out;
    std::vector<double> diag(bnd_);
    for (std::size_t j = 0; j + 1 < J; ++j) {
        for (std::size_t l = 0; l < K; ++l) {
            double const a = az_[j * K + l];
            diag[index(j, l)] += a;
            diag[index(j + 1, l)] += a;
            out.push_back({index(j + 1, l), index(j, l), -a});
        }
    }
    for (std::size_t j = 0; j < J; ++j) {
        for (std::size_t l = 0; l + 1 < K; ++l) {
            double const b = brho_[j * (K - 1) + l];
            diag[index(j, l)] += b;
            diag[index(j, l + 1)] += b;
            out.push_back({index(j, l + 1), index(j, l), -b});
        }
    }
    for (std::size_t i = 0; i < diag.size(); ++i) {
        out.push_back({i, i, diag[i]});
    }
    return out;
}

NodalField NodalField::sample(std::shared_ptr<NodalGrid const> grid, std::function<double(double, double)> const& f)
{
    NodalField out;
    out.u.resize(grid->size());
    for (std::size_t j = 0; j < grid->nz(); ++j) {
        for (std::size_t l = 0; l < grid->nrho(); ++l) {
            out.u[grid->index(j, l)] = f(grid->z()[j], grid->rho()[l]);
        }
    }
    out.grid = std::move(grid);
    return out;
}

FieldMoments nodal_moments(NodalField const& u, Nonlinearity const& nl)
{
    auto const& g = *u.grid;
    FieldMoments m;
    m.N = g.dimension();
    auto const [G, tail] = g.dirichlet_energy(u.u);
    m.grad_norm_sq = G;
    m.grad_tail = tail;
    auto const& vol = g.volume();
    CompensatedSum F;
    m.radii.reserve(g.size());
    m.mass.reserve(g.size());
    for (std::size_t j = 0; j < g.nz(); ++j) {
        for (std::size_t l = 0; l < g.nrho(); ++l) {
            std::size_t const i = g.index(j, l);
            F += vol[i] * nl.F(u.u[i]);
            m.radii.push_back(std::hypot(g.z()[j], g.rho()[l]));
            m.mass.push_back(vol[i] * u.u[i] * u.u[i]);
        }
    }
    m.F_integral = F.value();
    m.compress();
    return m;
}

std::vector<double> nodal_residual(NodalField const& u, Potential const* pot, Nonlinearity const& nl)
{
    auto const& g = *u.grid;
    std::vector<double> r(g.size());
    g.apply_stiffness(u.u, r);
    auto const& vol = g.volume();
    double const inv_s2 = 1.0 / (u.s * u.s);
    for (std::size_t j = 0; j < g.nz(); ++j) {
        for (std::size_t l = 0; l < g.nrho(); ++l) {
            std::size_t const i = g.index(j, l);
            double v = r[i] / vol[i] * inv_s2 - nl.f(u.u[i]);
            if (pot != nullptr) {
                v += pot->V_r(u.s * std::hypot(g.z()[j], g.rho()[l])) * u.u[i];
            }
            r[i] = v;
        }
    }
    return r;
}

double nodal_residual_norm(NodalField const& u, std::span<double const> r)
{
    auto const& vol = u.grid->volume();
    CompensatedSum sum;
    for (std::size_t i = 0; i < r.size(); ++i) {
        sum += vol[i] * r[i] * r[i];
    }
    return std::sqrt(std::pow(u.s, u.grid->dimension()) * sum.value());
}

double barycenter_axis(NodalField const& u)
{
    auto const& g = *u.grid;
    int const N = g.dimension();
    double const crit = 2.0 * N / (N - 2.0);
    auto const& vol = g.volume();
    CompensatedSum num, den;
    for (std::size_t j = 0; j < g.nz(); ++j) {
        for (std::size_t l = 0; l < g.nrho(); ++l) {
            std::size_t const i = g.index(j, l);
            double const p = vol[i] * std::pow(std::abs(u.u[i]), crit);
            num += p * g.z()[j];
            den += p;
        }
    }
    if (!(std::pow(den.value(), 1.0 / crit) > 1e-12)) {
        throw DomainError("degenerate input: ||u||_{2*} is negligible");
    }
    return u.s * num.value() / den.value();
}

CartesianField CartesianField::sample(std::function<double(std::span<double const>)> const& f,
                                      std::vector<double> origin, double h, std::vector<int> n)
{
    CartesianField out;
    out.origin = std::move(origin);
    out.h = h;
    out.n = std::move(n);
    std::size_t total = 1;
    for (int k : out.n) {
        total *= static_cast<std::size_t>(k);
    }
    out.u.resize(total);
    std::size_t const dim = out.n.size();
    std::vector<int> idx(dim, 0);
    std::vector<double> x(dim);
    for (std::size_t c = 0; c < total; ++c) {
        for (std::size_t a = 0; a < dim; ++a) {
            x[a] = out.origin[a] + (idx[a] + 0.5) * h;
        }
        out.u[c] = f(x);
        for (std::size_t a = dim; a-- > 0;) {
            if (++idx[a] < out.n[a]) {
                break;
            }
            idx[a] = 0;
        }
    }
    return out;
}

std::vector<double> barycenter(CartesianField const& u, int N)
{
    double const crit = 2.0 * N / (N - 2.0);
    std::size_t const dim = u.n.size();
    std::vector<int> idx(dim, 0);
    std::vector<CompensatedSum> num(dim);
    CompensatedSum den;
    for (std::size_t c = 0; c < u.u.size(); ++c) {
        double const p = std::pow(std::abs(u.u[c]), crit);
        den += p;
        for (std::size_t a = 0; a < dim; ++a) {
            num[a] += p * (u.origin[a] + (idx[a] + 0.5) * u.h);
        }
        for (std::size_t a = dim; a-- > 0;) {
            if (++idx[a] < u.n[a]) {
                break;
            }
            idx[a] = 0;
        }
    }
    double const cell = std::pow(u.h, static_cast<double>(dim));
    if (!(std::pow(den.value() * cell, 1.0 / crit) > 1e-12)) {
        throw DomainError("degenerate input: ||u||_{2*} is negligible");
    }
    std::vector<double> out(dim);
    for (std::size_t a = 0; a < dim; ++a) {
        out[a] = num[a].value() / den.value();
    }
    return out;
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::converged:
        return "converged";
    case Verdict::escaped_to_infinity:
        return "escaped_to_infinity";
    case Verdict::max_iterations:
        return "max_iterations";
    }
    return "unknown";
}

namespace {

double weighted_dot(std::vector<double> const& vol, std::span<double const> a, std::span<double const> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += vol[i] * a[i] * b[i];
    }
    return s;
}

void symmetrize(NodalField& u)
{
    auto const& g = *u.grid;
    for (std::size_t i = 0; i < u.u.size(); ++i) {
        std::size_t const k = g.mirror(i);
        if (k > i) {
            double const avg = 0.5 * (u.u[i] + u.u[k]);
            u.u[i] = avg;
            u.u[k] = avg;
        }
    }
}

// (s^{-2} K + M)^{-1}, refactored when s drifts
class SobolevSolver
{
  public:
    explicit SobolevSolver(NodalGrid const& g)
        : grid_(g), entries_(g.stiffness_entries())
    {
    }

    void apply(std::vector<double> const& rhs, double s, std::vector<double>& out)
    {
        if (!(std::abs(std::log(s / s_)) < 0.05)) {
            factor(s);
        }
        Eigen::Map<Eigen::VectorXd const> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
        Eigen::VectorXd x = ldlt_.solve(b);
        out.assign(x.data(), x.data() + x.size());
    }

  private:
    void factor(double s)
    {
        auto const n = static_cast<Eigen::Index>(grid_.size());
        std::vector<Eigen::Triplet<double>> t;
        t.reserve(entries_.size());
        double const c = 1.0 / (s * s);
        auto const& vol = grid_.volume();
        for (auto const& e : entries_) {
            double v = c * e.value;
            if (e.row == e.col) {
                v += vol[e.row];
            }
            t.emplace_back(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col), v);
        }
        Eigen::SparseMatrix<double> P(n, n);
        P.setFromTriplets(t.begin(), t.end());
        if (first_) {
            ldlt_.analyzePattern(P);
            first_ = false;
        }
        ldlt_.factorize(P);
        if (ldlt_.info() != Eigen::Success) {
            throw NumericalError("preconditioner factorization failed");
        }
        s_ = s;
    }

    NodalGrid const& grid_;
    std::vector<NodalGrid::Entry> entries_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt_;
    double s_ = 0.0;
    bool first_ = true;
};

double j_scale(EnergyReport const& e, int N)
{
    return 0.5 * (N - 2.0) * std::abs(e.grad_norm_sq) + 0.5 * std::abs(e.gradV_quadratic) +
           0.5 * N * std::abs(e.V_quadratic) + N * std::abs(e.F_integral);
}

} // namespace

SearchResult minimize_on_manifold(NodalField u0, Potential const* pot, Nonlinearity const& nl,
                                  SearchOptions const& opts)
{
    if (opts.enforce_reflection && !u0.grid->symmetric()) {
        throw DomainError("reflection symmetry needs a symmetric grid");
    }
    int const N = u0.grid->dimension();
    auto const& vol = u0.grid->volume();
    SearchState st;
    st.u = std::move(u0);
    if (opts.enforce_reflection) {
        symmetrize(st.u);
    }

    auto project_field = [&](NodalField& f, double hint) {
        ProjectionOptions po;
        po.certificate_points = 0;
        if (hint > 0.0) {
            po.lo = hint / 1.5;
            po.hi = hint * 1.5;
            po.expansions = 8;
        }
        f.s = 1.0;
        auto const m = nodal_moments(f, nl);
        auto pr = project(m, pot, nl, po);
        f.s = pr.s_star;
        return pr;
    };

    auto pr = project_field(st.u, -1.0);
    st.energy = pr.projected_energy;
    st.report = pr.report;
    st.J_V = pr.report.J_V;
    st.J_scale = j_scale(pr.report, N);
    auto r = nodal_residual(st.u, pot, nl);
    st.residual_norm = nodal_residual_norm(st.u, r);
    st.barycenter = barycenter_axis(st.u);

    SearchResult out;
    std::deque<double> recent{st.energy};
    int far_count = 0;
    bool const sobolev = opts.descent == Descent::sobolev;
    std::optional<SobolevSolver> solver;
    std::vector<double> d, g(r.size());
    auto direction = [&]() {
        if (!sobolev) {
            d = r;
            return;
        }
        for (std::size_t i = 0; i < r.size(); ++i) {
            g[i] = vol[i] * r[i];
        }
        solver->apply(g, st.u.s, d);
    };
    double tau = 0.5 * st.u.s * st.u.s * st.u.grid->min_spacing() * st.u.grid->min_spacing();
    if (sobolev) {
        solver.emplace(*st.u.grid);
        tau = 1.0;
    }
    direction();
    st.history.push_back({0, st.energy, st.residual_norm, st.barycenter, st.u.s, 0.0, st.J_V});

    for (st.iteration = 1; st.iteration <= opts.max_iter; ++st.iteration) {
        bool const settled = recent.size() >= 6 &&
                             std::abs(recent.back() - recent.front()) < opts.tol_e * std::max(1.0, std::abs(st.energy));
        if (st.residual_norm < opts.tol_r && settled) {
            out.verdict = Verdict::converged;
            st.stop_reason = "residual and energy change below tolerance";
            break;
        }

        NodalField trial;
        ProjectionResult tpr;
        bool accepted = false;
        std::string projection_failure;
        for (int bt = 0; bt < opts.max_backtracks; ++bt) {
            trial = st.u;
            for (std::size_t i = 0; i < trial.u.size(); ++i) {
                trial.u[i] -= tau * d[i];
            }
            if (opts.enforce_reflection) {
                symmetrize(trial);
            }
            try {
                tpr = project_field(trial, st.u.s);
                projection_failure.clear();
            } catch (ProjectionError const& e) {
                projection_failure = e.what();
                tau *= 0.5;
                continue;
            }
            if (tpr.projected_energy < st.energy) {
                accepted = true;
                break;
            }
            tau *= 0.5;
        }
        if (!accepted && !projection_failure.empty()) {
            std::ostringstream msg;
            msg << projection_failure << "; state: iteration " << st.iteration << ", energy " << st.energy
                << ", residual " << st.residual_norm << ", s " << st.u.s << ", barycenter " << st.barycenter;
            throw ProjectionError(msg.str());
        }
        if (!accepted) {
            st.stop_reason = "line search exhausted";
            break;
        }

        auto r_new = nodal_residual(trial, pot, nl);
        std::vector<double> du(r.size()), dr(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            du[i] = trial.u[i] - st.u.u[i];
            dr[i] = r_new[i] - r[i];
        }
        double num = weighted_dot(vol, du, du);
        if (sobolev) {
            std::vector<double> kdu(du.size());
            trial.grid->apply_stiffness(du, kdu);
            num += std::inner_product(du.begin(), du.end(), kdu.begin(), 0.0) / (trial.s * trial.s);
        }
        double const den = weighted_dot(vol, du, dr);
        st.tau = tau;
        tau = den > 0.0 ? std::min(opts.tau_max, num / den) : opts.tau_max;

        st.u = std::move(trial);
        r = std::move(r_new);
        st.energy = tpr.projected_energy;
        st.report = tpr.report;
        st.J_V = tpr.report.J_V;
        st.J_scale = j_scale(tpr.report, N);
        st.residual_norm = nodal_residual_norm(st.u, r);
        st.barycenter = barycenter_axis(st.u);
        direction();
        recent.push_back(st.energy);
        if (recent.size() > 6) {
            recent.pop_front();
        }
        st.history.push_back(
            {st.iteration, st.energy, st.residual_norm, st.barycenter, st.u.s, st.tau, st.J_V});

        double const safe = opts.escape_fraction * st.u.s * st.u.grid->radius();
        far_count = std::abs(st.barycenter) > safe ? far_count + 1 : 0;
        if (far_count >= opts.escape_window) {
            out.verdict = Verdict::escaped_to_infinity;
            st.stop_reason = "barycenter beyond the safe radius";
            break;
        }
    }
    if (st.stop_reason.empty()) {
        st.stop_reason = "iteration limit";
    }
    // accepted steps
    st.iteration = static_cast<int>(st.history.size()) - 1;
    st.report.residual_norm = st.residual_norm;
    out.state = std::move(st);
    return out;
}

NodalGridSpec two_bump_grid_spec(TwoBumpConfig const& cfg, double spacing, double growth, double radius)
{
    double t = 0.0;
    if (!collinear_with(cfg.y0, cfg.y, t)) {
        throw DomainError("nodal grids need collinear centers");
    }
    NodalGridSpec spec;
    spec.N = static_cast<int>(cfg.y0.size());
    spec.growth = growth;
    spec.radius = radius;
    spec.anchors = {{0.0, spacing}};
    if (cfg.lambda > 0.0) {
        spec.anchors.push_back({cfg.R, spacing});
    }
    if (cfg.lambda < 1.0) {
        spec.anchors.push_back({cfg.R * t, spacing});
    }
    spec.symmetric = std::abs(t + 1.0) < 1e-12 || cfg.lambda == 0.0 || cfg.lambda == 1.0;
    if (spec.symmetric) {
        // a lone bump still gets a mirrored cluster so the node set is symmetric
        std::vector<AxisAnchor> mirrored = spec.anchors;
        for (auto const& a : spec.anchors) {
            mirrored.push_back({-a.z, a.spacing});
        }
        spec.anchors = mirrored;
    }
    return spec;
}

LevelReport level_diagnostics(double p0, double rho, std::vector<Candidate> candidates,
                              LandscapeReport const* landscape, double delta, double tol)
{
    LevelReport rep;
    rep.p0 = p0;
    rep.rho = rho;
    rep.delta = delta;
    rep.candidates = std::move(candidates);
    rep.pV_upper = std::numeric_limits<double>::infinity();
    rep.all_above_rho = true;
    rep.low_energy_off_center = true;
    for (auto const& c : rep.candidates) {
        rep.pV_upper = std::min(rep.pV_upper, c.energy);
        if (!(c.grad_norm >= rho)) {
            rep.all_above_rho = false;
        }
        if (c.energy <= p0 + delta && std::isfinite(c.barycenter_norm) && !(c.barycenter_norm > 0.5 * c.R)) {
            rep.low_energy_off_center = false;
        }
    }
    if (landscape != nullptr) {
        rep.landscape_max = landscape->max_energy;
        rep.eta = landscape->eta;
        rep.endpoint_max = landscape->endpoint_max;
        rep.landscape_below_2p0 = landscape->max_energy < 2.0 * p0 && landscape->eta > 0.0;
        rep.pV_upper = std::min(rep.pV_upper, landscape->endpoint_max);
    }
    rep.pV_below_p0 = rep.pV_upper <= p0 + tol;
    return rep;
}

} // namespace pohozaev
