#include "pohozaev/errors.hpp"

namespace pohozaev {

std::string stage_message(std::string const& stage, std::string const& what)
{
    return "[" + stage + "] " + what;
}

} // namespace pohozaev
