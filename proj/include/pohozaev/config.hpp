#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace pohozaev {

/// Experiment settings read from flat `section.key = value` text. `[section]` lines prefix
/// the keys that follow; `#` starts a comment.
struct RunConfig
{
    int N = 3;

    std::string nonlinearity = "rational_asymlinear"; // rational_asymlinear | sine_superlinear | power | table
    double power = 6.0;
    std::string table_path;

    std::string potential_kind = "model"; // model | none
    double potential_k = 3.0;
    double potential_scale = 1.0;

    double limit_tol = 1e-13;
    double limit_r_max = 1e3;

    std::vector<double> R_scan{8.0, 16.0, 32.0, 64.0};
    double scan_lambda = 0.5;
    double mixed_alpha = 5.0;
    double mixed_beta = 1.0;
    double acp_C5 = 0.0; // 0 means gamma

    std::string y_geometry = "collinear"; // collinear | perpendicular | custom
    std::vector<double> y_custom;

    double projection_lo = 0.05;
    double projection_hi = 8.0;
    double projection_tol = 1e-10;

    double landscape_R = 64.0;
    int lambda_points = 17;
    double delta_fraction = 0.05;

    double search_tol_r = 1e-4;
    double search_tol_e = 1e-9;
    int search_max_iter = 4000;
    double search_radius = 2000.0;
    double search_spacing = 0.05;
    double search_growth = 0.04;
    double search_R = 4.0;
    double search_lambda = 0.5;
    bool search_reflection = true;
    bool search_asymmetric = false;
    std::string search_descent = "sobolev"; // sobolev | plain
    std::vector<double> translation_R{256.0, 1024.0};

    std::int64_t mc_samples = 200000;
    std::uint64_t seed = 20240611;
    std::string out_dir = "out";

    static RunConfig parse(std::string const& text);
    static RunConfig load(std::string const& path);

    /// Assigns one dotted key; unknown keys and malformed values throw ConfigError.
    void set(std::string const& key, std::string const& value);
    /// Range checks; throws ConfigError.
    void validate() const;

    /// Sorted `key = value` lines with full-precision numbers.
    std::vector<std::pair<std::string, std::string>> entries() const;
    std::string canonical() const;
    /// FNV-1a 64 of the canonical form without output.dir, as 16 hex digits.
    std::string hash() const;

    std::vector<double> y0() const;
    /// Second center for the configured geometry.
    std::vector<double> y() const;
    std::vector<double> lambda_grid() const;
};

} // namespace pohozaev
