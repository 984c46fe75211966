#pragma once

#include <stdexcept>
#include <string>

namespace blochhom {

// Error taxonomy shared by all modules. Each condition gets its own type so
// callers can catch precisely; all derive from Error for blanket handling.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define BLOCHHOM_DEFINE_ERROR(Name)                          \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& msg) : Error(msg) {}    \
  }

BLOCHHOM_DEFINE_ERROR(NotSymmetric);
BLOCHHOM_DEFINE_ERROR(NotElliptic);
BLOCHHOM_DEFINE_ERROR(BadDimension);
BLOCHHOM_DEFINE_ERROR(EtaOutOfCell);
BLOCHHOM_DEFINE_ERROR(GardingViolation);
BLOCHHOM_DEFINE_ERROR(EigensolverFailure);
BLOCHHOM_DEFINE_ERROR(DegenerateGauge);
BLOCHHOM_DEFINE_ERROR(SingularSystem);
BLOCHHOM_DEFINE_ERROR(CompatibilityViolation);
BLOCHHOM_DEFINE_ERROR(StepTooLarge);
BLOCHHOM_DEFINE_ERROR(IncommensurateGrid);
BLOCHHOM_DEFINE_ERROR(RegimeMismatch);
BLOCHHOM_DEFINE_ERROR(ConfigInvalid);

#undef BLOCHHOM_DEFINE_ERROR

}  // namespace blochhom
