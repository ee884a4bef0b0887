#pragma once

#include <memory>

#include "pohozaev/limit_problem.hpp"
#include "pohozaev/nonlinearity.hpp"
#include "pohozaev/potential.hpp"

namespace testing {

inline pohozaev::Nonlinearity const& rational()
{
    static auto const nl = pohozaev::builtin_model("rational_asymlinear");
    return nl;
}

inline pohozaev::Potential const& model_V()
{
    static auto const pot = pohozaev::model_potential(3.0, 1.0, 3);
    return pot;
}

/// Ground state of the rational model, solved once per test binary.
inline std::shared_ptr<pohozaev::RadialProfile const> const& ground()
{
    static auto const w = std::make_shared<pohozaev::RadialProfile const>(
        pohozaev::find_fast_decay(rational(), 3, pohozaev::default_bracket(rational())).profile);
    return w;
}

} // namespace testing
