#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pohozaev/config.hpp"
#include "pohozaev/fields.hpp"
#include "pohozaev/limit_problem.hpp"
#include "pohozaev/nonlinearity.hpp"
#include "pohozaev/potential.hpp"
#include "pohozaev/projection.hpp"
#include "pohozaev/search.hpp"
#include "pohozaev/two_bump.hpp"

namespace pohozaev {

/// The (f, V) pair selected by a config.
struct Model
{
    Nonlinearity nl;
    std::optional<Potential> pot;

    Potential const* potential() const { return pot ? &*pot : nullptr; }
};

/// Throws ConfigError for unsupported selections (e.g. builtin models outside N = 3).
Model build_model(RunConfig const& cfg);

McSampler sampler(RunConfig const& cfg);

struct CheckOutcome
{
    HypothesisReport f;
    HypothesisReport V;
    bool pass() const { return f.all_pass() && V.all_pass(); }
};

CheckOutcome run_check(RunConfig const& cfg, Model const& model);

struct LimitOutcome
{
    FastDecaySolution solution;
    std::shared_ptr<RadialProfile const> w;
    LimitEnergy energy;
    double p0 = 0.0;
};

LimitOutcome run_limit(RunConfig const& cfg, Model const& model);

struct KernelScan
{
    std::string tag;
    ExponentFit fit;
};

struct ScanOutcome
{
    InteractionReport interaction;
    std::vector<KernelScan> kernels;
    AcpReport acp;
};

ScanOutcome run_scan(RunConfig const& cfg, Model const& model, LimitOutcome const& limit, int jobs = 1);

struct ProjectOutcome
{
    ProjectionResult ground;         ///< w with V = 0
    ProjectionResult ground_with_V;  ///< w with the configured potential
    double dilation = 2.5;
    double dilation_gap = 0.0;       ///< |a s*(w(. / a)) - s*(w)|
    std::vector<double> R;
    std::vector<ProjectionResult> two_bump; ///< U^R_{y,1/2} for each R in the scan
};

ProjectOutcome run_project(RunConfig const& cfg, Model const& model, LimitOutcome const& limit);

LandscapeReport run_landscape(RunConfig const& cfg, Model const& model, LimitOutcome const& limit, int jobs = 1);

struct SearchRun
{
    std::string tag;
    TwoBumpConfig start;
    SearchResult result;
};

std::vector<SearchRun> run_search(RunConfig const& cfg, Model const& model, LimitOutcome const& limit, int jobs = 1);

/// Candidates from the landscape, the search runs and far-translated single bumps.
LevelReport run_levels(RunConfig const& cfg, Model const& model, LimitOutcome const& limit,
                       LandscapeReport const* landscape, std::vector<SearchRun> const& runs);

} // namespace pohozaev
