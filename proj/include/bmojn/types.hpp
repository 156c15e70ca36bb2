#ifndef BMOBMOJN_TYPES_HPP
#define BMOBMOJN_TYPES_HPP

#include <stdexcept>
#include <string>

namespace bmojn {

/// Selects the upper (B+, w+, f) or lower (B-, w-, f-) branch of every
/// two-sided quantity in the library.
enum class Sign { plus, minus };

constexpr double signum(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

constexpr const char* to_string(Sign s) {
    return s == Sign::plus ? "plus" : "minus";
}

/// A nonnegative real or a +infinity sentinel.  Used for exponential
/// averages and sharp constants at or past the critical norm radius,
/// so sweeps produce clean tables instead of throwing.
struct ExtendedValue {
    double value = 0.0;
    bool finite = true;

    static ExtendedValue of(double v) { return {v, true}; }
    static ExtendedValue infinity() { return {0.0, false}; }

    bool is_finite() const { return finite; }

    /// Value accessor that refuses to hand out the sentinel silently.
    double get() const {
        if (!finite) throw std::domain_error("ExtendedValue: value is infinite");
        return value;
    }
};

} // namespace bmojn

#endif
