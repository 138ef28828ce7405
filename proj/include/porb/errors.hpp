#pragma once

#include <stdexcept>
#include <string>

namespace porb {

/// Base of all solver errors. `kind()` is the stable machine-readable tag
/// emitted in CLI error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define PORB_ERROR_CLASS(Name)                                            \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& what) : Error(#Name, what) {}        \
  }

PORB_ERROR_CLASS(CollisionError);        // evaluation point inside a collision ball
PORB_ERROR_CLASS(DegenerateError);       // undefined right-hand side (r = z = 0)
PORB_ERROR_CLASS(ParameterRangeError);   // parameter outside its admissible range
PORB_ERROR_CLASS(SymmetryError);         // odd-symmetry machinery invoked with mu != 1/2, or a non-odd file
PORB_ERROR_CLASS(InfeasibleInitError);   // initializer produced a node inside a collision ball
PORB_ERROR_CLASS(OutOfRangeError);       // time outside [-n, n]
PORB_ERROR_CLASS(StalledError);          // line search cannot make progress above machine precision
PORB_ERROR_CLASS(CollisionTrapError);    // every step size down to the floor enters a collision ball
PORB_ERROR_CLASS(MaxItersError);         // iteration cap reached before convergence
PORB_ERROR_CLASS(WindowError);           // comparison window exceeds the smallest horizon
PORB_ERROR_CLASS(InsufficientDataError); // too few rows for a fit
PORB_ERROR_CLASS(FormatError);           // malformed trajectory file

#undef PORB_ERROR_CLASS

}  // namespace porb
