#include "pce/rational.h"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace pce {
namespace {

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Rational ParseDecimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!AllDigits(exp_part) || exp_part.size() > 6) {
      throw std::invalid_argument("bad exponent in number '" + std::string(text) + "'");
    }
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
    s = s.substr(0, e);
  }
  std::string digits;
  long fraction_digits = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view whole = s.substr(0, dot);
    std::string_view fraction = s.substr(dot + 1);
    if ((!whole.empty() && !AllDigits(whole)) ||
        (!fraction.empty() && !AllDigits(fraction)) ||
        (whole.empty() && fraction.empty())) {
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }
    digits = std::string(whole) + std::string(fraction);
    fraction_digits = static_cast<long>(fraction.size());
  } else {
    if (!AllDigits(s)) {
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }
    digits = std::string(s);
  }
  mpz_class numerator(digits, 10);
  long scale = exponent - fraction_digits;
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(scale)));
  Rational value = scale >= 0 ? Rational(numerator * power) : Rational(numerator, power);
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational numerator = ParseDecimal(text.substr(0, slash));
    Rational denominator = ParseDecimal(text.substr(slash + 1));
    if (denominator == 0) {
      throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    }
    return numerator / denominator;
  }
  return ParseDecimal(text);
}

std::string ToString(const Rational& value) { return value.get_str(); }

Rational FromDouble(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite double");
  Rational r;
  r = value;  // mpq_set_d is exact
  return r;
}

Rational Sum(const RationalVector& values) {
  Rational total = 0;
  for (const auto& v : values) total += v;
  return total;
}

}  // namespace pce
