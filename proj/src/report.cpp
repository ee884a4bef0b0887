#include "pohozaev/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pohozaev {

bool HypothesisReport::all_pass() const
{
    return std::all_of(entries.begin(), entries.end(), [](auto const& e) { return e.pass; });
}

HypothesisEntry const& HypothesisReport::at(std::string const& name) const
{
    for (auto const& e : entries) {
        if (e.name == name) {
            return e;
        }
    }
    throw std::out_of_range("no hypothesis entry named " + name);
}

bool HypothesisReport::has(std::string const& name) const
{
    return std::any_of(entries.begin(), entries.end(), [&](auto const& e) { return e.name == name; });
}

void HypothesisReport::add(std::string name, double value, double threshold, bool pass, std::string detail)
{
    entries.push_back({std::move(name), value, threshold, pass, std::move(detail)});
}

namespace {

nlohmann::json finite_or_string(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    if (std::isnan(v)) {
        return "nan";
    }
    return v > 0 ? "inf" : "-inf";
}

} // namespace

nlohmann::json HypothesisReport::to_json() const
{
    nlohmann::json j = nlohmann::json::object();
    for (auto const& e : entries) {
        nlohmann::json entry = {{"value", finite_or_string(e.value)},
                                {"threshold", finite_or_string(e.threshold)},
                                {"pass", e.pass}};
        if (!e.detail.empty()) {
            entry["detail"] = e.detail;
        }
        j[e.name] = entry;
    }
    return j;
}

} // namespace pohozaev
