#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace sistab {

// Cell counts, matrix entries and margins are exact 64-bit integers with
// overflow detection; fiber counts and importance weights are unbounded.
using Int = std::int64_t;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a configured search/node budget is exhausted.
struct ResourceLimit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown by the rejection-free sampler when the fiber has no tables.
struct EmptyFiberError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("integer overflow in addition");
  }
  return r;
}

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("integer overflow in multiplication");
  }
  return r;
}

inline Int checked_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) {
    throw std::overflow_error("integer overflow in subtraction");
  }
  return r;
}

/// Floor of an exact rational.
inline BigInt floor_rat(const Rational& r) {
  BigInt num = numerator(r);
  BigInt den = denominator(r);  // canonical: den > 0
  BigInt q = num / den;         // truncates toward zero
  if (num < 0 && q * den != num) --q;
  return q;
}

inline BigInt ceil_rat(const Rational& r) { return -floor_rat(-r); }

/// log10 of a positive big integer, accurate to double precision.
inline double log10_big(const BigInt& x) {
  if (x <= 0) throw InvalidInput("log10_big: argument must be positive");
  const unsigned m = boost::multiprecision::msb(x);
  if (m <= 52) return std::log10(x.convert_to<double>());
  const unsigned shift = m - 52;
  const double top = BigInt(x >> shift).convert_to<double>();
  return std::log10(top) + static_cast<double>(shift) * std::log10(2.0);
}

inline double log10_rat(const Rational& r) {
  if (r <= 0) throw InvalidInput("log10_rat: argument must be positive");
  return log10_big(numerator(r)) - log10_big(denominator(r));
}

/// Nearest-double conversion; overflows to +/-inf instead of throwing.
inline double rat_to_double(const Rational& r) {
  if (r == 0) return 0.0;
  const double l = log10_rat(r > 0 ? r : Rational(-r));
  if (l > 307.0) {
    return r > 0 ? std::numeric_limits<double>::infinity()
                 : -std::numeric_limits<double>::infinity();
  }
  return r.convert_to<double>();
}

inline Int to_int_checked(const BigInt& x, const char* context) {
  if (x > std::numeric_limits<Int>::max() || x < std::numeric_limits<Int>::min()) {
    throw std::overflow_error(std::string("value does not fit 64 bits in ") + context);
  }
  return x.convert_to<Int>();
}

}  // namespace sistab
