#ifndef PCE_RATIONAL_H_
#define PCE_RATIONAL_H_

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace pce {

// Exact rational number. gmpxx keeps every value canonical (lowest terms,
// positive denominator) after each arithmetic operation.
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

// Accepts "p/q", integers, and decimals with optional exponent
// ("0.25", "-1.5e-3"). Decimals are converted exactly.
Rational ParseRational(std::string_view text);

// "p/q", or "p" when the denominator is 1.
std::string ToString(const Rational& value);

inline double ToDouble(const Rational& value) { return value.get_d(); }

// Exact binary value of a finite double.
Rational FromDouble(double value);

Rational Sum(const RationalVector& values);

}  // namespace pce

#endif  // PCE_RATIONAL_H_
