#include "ttlr/errors.hpp"

namespace ttlr {

UnitarityError::UnitarityError(const std::string& what, double deviation)
    : Error(what + " (deviation " + std::to_string(deviation) + ")"), deviation_(deviation) {}

NumericError::NumericError(const std::string& what, std::ptrdiff_t slice)
    : Error(slice >= 0 ? what + " (slice " + std::to_string(slice) + ")" : what), slice_(slice) {}

DivergenceError::DivergenceError(const std::string& what, int iteration)
    : NumericError(what + " at iteration " + std::to_string(iteration)), iteration_(iteration) {}

}  // namespace ttlr
