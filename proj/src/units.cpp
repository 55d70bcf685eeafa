#include "wastefactor/units.hpp"

#include <stdexcept>
#include <string>

namespace wastefactor {

double linear_to_db(double linear) {
    if (!(linear > 0.0)) {
        throw std::domain_error("linear_to_db: ratio must be positive, got " + std::to_string(linear));
    }
    return 10.0 * std::log10(linear);
}

double watts_to_dbm(double watts) {
    if (!(watts > 0.0)) {
        throw std::domain_error("watts_to_dbm: power must be positive, got " + std::to_string(watts));
    }
    return 10.0 * std::log10(watts) + 30.0;
}

LinearRatio::LinearRatio(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument("LinearRatio must be finite and > 0, got " + std::to_string(value));
    }
}

Power::Power(double watts) : watts_(watts) {
    if (!(watts >= 0.0) || !std::isfinite(watts)) {
        throw std::invalid_argument("Power must be finite and >= 0 W, got " + std::to_string(watts));
    }
}

}  // namespace wastefactor
