#pragma once

#include <stdexcept>
#include <string>

namespace stancesim {

// Base class for every error raised by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// (A, B) pair cannot be assigned arbitrary poles.
struct UncontrollableError : Error {
  explicit UncontrollableError(const std::string& msg) : Error(msg) {}
};

// Matrix handed to the Lyapunov solver is not Hurwitz.
struct NotHurwitzError : Error {
  explicit NotHurwitzError(const std::string& msg) : Error(msg) {}
};

// Linear system too badly conditioned to solve.
struct SingularSystemError : Error {
  explicit SingularSystemError(const std::string& msg) : Error(msg) {}
};

// Feedthrough/gain combination puts the output algebraic loop at a pole.
struct SingularFeedthroughError : Error {
  explicit SingularFeedthroughError(const std::string& msg) : Error(msg) {}
};

// An integrator stage produced NaN or infinity.
struct NonFiniteDerivativeError : Error {
  explicit NonFiniteDerivativeError(const std::string& msg) : Error(msg) {}
};

// Too few usable samples for a least-squares rate fit.
struct DegenerateFitError : Error {
  explicit DegenerateFitError(const std::string& msg) : Error(msg) {}
};

// Scenario index outside the registry.
struct UnknownScenarioError : Error {
  explicit UnknownScenarioError(const std::string& msg) : Error(msg) {}
};

// Config file is not syntactically valid.
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Config file key that no section defines.
struct UnknownKeyError : Error {
  explicit UnknownKeyError(const std::string& msg) : Error(msg) {}
};

// A field violates its invariant; message carries the dotted path.
struct ValidationError : Error {
  explicit ValidationError(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace stancesim
