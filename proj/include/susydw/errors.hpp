#pragma once

#include <stdexcept>
#include <string>

namespace susydw {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SUSYDW_DEFINE_ERROR(Name)            \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

/// Adaptive quadrature hit its depth bound before meeting tolerance.
SUSYDW_DEFINE_ERROR(NonConvergence);
/// An integrand returned NaN or infinity.
SUSYDW_DEFINE_ERROR(NonFinite);
/// log-weight exceeds the representable range.
SUSYDW_DEFINE_ERROR(Overflow);
/// gamma lies inside the range of gamma(x); the family member has a pole.
SUSYDW_DEFINE_ERROR(SingularGamma);
/// gamma*(x) evaluated where F(x) vanishes.
SUSYDW_DEFINE_ERROR(PoleAtTurningPoint);
/// The peak-height difference never changes sign on the searched range.
SUSYDW_DEFINE_ERROR(NoCrossing);
/// The zero mode has fewer than two maxima.
SUSYDW_DEFINE_ERROR(OnePeak);
/// The two wells cannot be told apart.
SUSYDW_DEFINE_ERROR(Degenerate);
/// An eigenvector does not decay before reaching the box wall.
SUSYDW_DEFINE_ERROR(DomainTooSmall);
/// Configuration outside the validated parameter set.
SUSYDW_DEFINE_ERROR(Unsupported);
/// Precondition violation on user input.
SUSYDW_DEFINE_ERROR(InvalidArgument);

#undef SUSYDW_DEFINE_ERROR

}  // namespace susydw
