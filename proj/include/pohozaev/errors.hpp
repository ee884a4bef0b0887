#pragma once

#include <stdexcept>
#include <string>

namespace pohozaev {

/// Process exit codes shared by the CLI and the acceptance runner.
enum class ExitCode : int {
    success = 0,
    scientific_failure = 1,
    usage_error = 2,
    numerical_failure = 3,
};

/// Base of all library errors; carries the exit code a driver should map it to.
class Error : public std::runtime_error
{
  public:
    Error(std::string const& what, ExitCode code)
        : std::runtime_error(what)
        , code_(code)
    {
    }
    ExitCode code() const noexcept { return code_; }

  private:
    ExitCode code_;
};

/// Invalid configuration or unsupported model selection.
class ConfigError : public Error
{
  public:
    explicit ConfigError(std::string const& what)
        : Error("configuration error: " + what, ExitCode::usage_error)
    {
    }
};

/// Argument outside the domain of a mathematical operation.
class DomainError : public Error
{
  public:
    explicit DomainError(std::string const& what)
        : Error("domain error: " + what, ExitCode::numerical_failure)
    {
    }
};

/// Numerical method failed (step underflow, under-resolved quadrature, no root).
class NumericalError : public Error
{
  public:
    explicit NumericalError(std::string const& what)
        : Error("numerical error: " + what, ExitCode::numerical_failure)
    {
    }
};

/// Prefixes the message with the pipeline stage that raised it.
std::string stage_message(std::string const& stage, std::string const& what);

} // namespace pohozaev
