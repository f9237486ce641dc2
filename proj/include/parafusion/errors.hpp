#pragma once

#include <stdexcept>
#include <string>

namespace parafusion {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define PARAFUSION_DEFINE_ERROR(Name)          \
  class Name : public Error {                  \
   public:                                     \
    explicit Name(std::string const& what)     \
        : Error(std::string(#Name ": ") + what) {} \
  }

// A configured size cap was exceeded; never a silent approximation.
PARAFUSION_DEFINE_ERROR(CapExceeded);
PARAFUSION_DEFINE_ERROR(ParseError);
PARAFUSION_DEFINE_ERROR(InvalidArgument);
PARAFUSION_DEFINE_ERROR(NotNormal);
PARAFUSION_DEFINE_ERROR(NotSylow);
PARAFUSION_DEFINE_ERROR(NotSubsystem);
PARAFUSION_DEFINE_ERROR(NotSaturated);
PARAFUSION_DEFINE_ERROR(SearchExhausted);
PARAFUSION_DEFINE_ERROR(PreconditionFailed);
PARAFUSION_DEFINE_ERROR(NotSubgroupChain);
PARAFUSION_DEFINE_ERROR(NoProvenance);
PARAFUSION_DEFINE_ERROR(NotCovering);
PARAFUSION_DEFINE_ERROR(UnclassifiedResidue);
PARAFUSION_DEFINE_ERROR(NonCommutingSquares);
PARAFUSION_DEFINE_ERROR(DisconnectedFixedPoints);
PARAFUSION_DEFINE_ERROR(HypothesisFailed);
PARAFUSION_DEFINE_ERROR(NoIdentityOnSIsomorphism);
PARAFUSION_DEFINE_ERROR(UnrecognizedLieType);

#undef PARAFUSION_DEFINE_ERROR

}  // namespace parafusion
