#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace pohozaev {

/// One numeric hypothesis check: pass means value compares favourably with threshold.
struct HypothesisEntry
{
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string detail;
};

struct HypothesisReport
{
    std::vector<HypothesisEntry> entries;

    bool all_pass() const;
    HypothesisEntry const& at(std::string const& name) const;
    bool has(std::string const& name) const;
    void add(std::string name, double value, double threshold, bool pass, std::string detail = {});
    nlohmann::json to_json() const;
};

} // namespace pohozaev
