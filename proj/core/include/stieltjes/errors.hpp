#pragma once

#include <stdexcept>
#include <string>

namespace stieltjes {

// Base type for every failure raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : Error { using Error::Error; };
struct OutOfWindow : Error { using Error::Error; };
struct GeneratorUnbounded : Error { using Error::Error; };
struct ToleranceNotMet : Error { using Error::Error; };
struct RouteUnavailable : Error { using Error::Error; };
struct DerivativeUndefined : Error { using Error::Error; };
struct LimitNotConverged : Error { using Error::Error; };
struct NotCertified : Error { using Error::Error; };
struct DivergenceDetected : Error { using Error::Error; };
struct BoundViolated : Error { using Error::Error; };
struct NotIdentifiable : Error { using Error::Error; };
struct OutsideDomain : Error { using Error::Error; };
struct SingularFactor : Error { using Error::Error; };
struct HypothesisViolated : Error { using Error::Error; };

}  // namespace stieltjes
