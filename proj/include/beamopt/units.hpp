// SPDX-License-Identifier: Apache-2.0
//
// Unit conversions used at configuration and report boundaries. Everything
// inside the library is strict SI: watts, seconds, meters, radians, hertz.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace beamopt {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Thrown when a quantity falls outside the mathematical domain of a model
/// (d = 0 for the mobility offset, FNBW for a single-element array, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline double dbm_to_watt(double p_dbm) { return std::pow(10.0, (p_dbm - 30.0) / 10.0); }

inline double watt_to_dbm(double p_w)
{
    if (!(p_w > 0.0)) {
        throw DomainError("watt_to_dbm: power must be positive, got " + std::to_string(p_w));
    }
    return 10.0 * std::log10(p_w) + 30.0;
}

inline double db_to_linear(double x_db) { return std::pow(10.0, x_db / 10.0); }

inline double linear_to_db(double x)
{
    if (!(x > 0.0)) {
        throw DomainError("linear_to_db: ratio must be positive, got " + std::to_string(x));
    }
    return 10.0 * std::log10(x);
}

}  // namespace beamopt
