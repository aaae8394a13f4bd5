#pragma once

#include <stdexcept>
#include <string>

namespace hygame {

// Base class for everything this library throws on purpose.  The CLI maps
// subtypes onto its exit codes, so keep the taxonomy flat and explicit.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// -- input / usage -----------------------------------------------------------
struct OutOfDomain : Error          { using Error::Error; };
struct InvalidInitialState : Error  { using Error::Error; };
struct InfeasibleInput : Error      { using Error::Error; };
struct EmptyDomain : Error          { using Error::Error; };
struct UnknownScenario : Error      { using Error::Error; };
struct ParseError : Error           { using Error::Error; };
struct NoInputBox : Error           { using Error::Error; };

// -- numerics ----------------------------------------------------------------
struct SingularMatrix : Error        { using Error::Error; };
struct BlowUp : Error                { using Error::Error; };
struct SingularRv : Error            { using Error::Error; };
struct DefinitenessViolated : Error  { using Error::Error; };
struct NoConvergence : Error         { using Error::Error; };
struct InconsistentEquations : Error { using Error::Error; };
struct FlowConditionViolated : Error { using Error::Error; };
struct BranchLimitExceeded : Error   { using Error::Error; };

// -- certificate / check failures -------------------------------------------
struct ResidualTooLarge : Error     { using Error::Error; };
struct CertificateViolated : Error  { using Error::Error; };

}  // namespace hygame
