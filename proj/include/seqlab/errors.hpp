#pragma once

#include <stdexcept>
#include <string>

namespace seqlab {

/// Base of every domain error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define SEQLAB_ERROR(Name) \
  struct Name : Error {    \
    using Error::Error;    \
  }

SEQLAB_ERROR(ZeroDivision);
SEQLAB_ERROR(NotInvertible);
SEQLAB_ERROR(OddIndex);
SEQLAB_ERROR(ZeroMap);
SEQLAB_ERROR(InconsistentEquivalence);
SEQLAB_ERROR(NotAComplex);
SEQLAB_ERROR(Unsupported);
SEQLAB_ERROR(NotGapped);
SEQLAB_ERROR(CapTooSmall);
SEQLAB_ERROR(NotStabilized);
SEQLAB_ERROR(HypothesisFailed);
SEQLAB_ERROR(ExactnessFailure);
SEQLAB_ERROR(DivergenceRisk);
SEQLAB_ERROR(SquareNonzero);
SEQLAB_ERROR(NotClosed);
SEQLAB_ERROR(SamplingTooCoarse);
SEQLAB_ERROR(DegenerateCrossing);
SEQLAB_ERROR(CornerMismatch);
SEQLAB_ERROR(JumpTooLarge);
SEQLAB_ERROR(NotLagrangian);
SEQLAB_ERROR(ZeroSection);
SEQLAB_ERROR(OnSingularity);
SEQLAB_ERROR(DomainError);

#undef SEQLAB_ERROR

/// Malformed input; carries a JSON pointer to the offending value.
struct InputError : Error {
  InputError(std::string pointer, const std::string& message)
      : Error(message + " at " + (pointer.empty() ? std::string("/") : pointer)),
        pointer(std::move(pointer)) {}
  std::string pointer;
};

}  // namespace seqlab
