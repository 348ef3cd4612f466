#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace rii {

// Exact scalar used by the combinatorial hypograph machinery. Expression
// templates are disabled so arithmetic results deduce as plain values.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline Rat make_rat(long long num, long long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  return Rat(BigInt(num), BigInt(den));
}

inline double to_double(const Rat& v) { return static_cast<double>(v); }
inline double to_double(double v) { return v; }

// Exact dyadic decomposition of a double. Throws on non-finite input and on
// values whose exponent pushes num/den outside int64 (never the case for the
// value ranges this toolkit serializes).
inline void double_to_fraction(double v, std::int64_t& num, std::int64_t& den) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value in rational serialization");
  if (v == 0.0) { num = 0; den = 1; return; }
  int exp = 0;
  double m = std::frexp(v, &exp);  // v = m * 2^exp, |m| in [0.5, 1)
  std::int64_t mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  exp -= 53;
  while ((mant & 1) == 0 && exp < 0) { mant >>= 1; ++exp; }
  if (exp >= 0) {
    if (exp > 9) throw std::invalid_argument("value too large for exact serialization");
    num = mant << exp;
    den = 1;
  } else {
    if (exp < -62) throw std::invalid_argument("value too small for exact serialization");
    num = mant;
    den = std::int64_t{1} << (-exp);
  }
}

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
  static constexpr bool exact = true;
  static Rat from_fraction(std::int64_t num, std::int64_t den) { return make_rat(num, den); }
  static Rat from_double(double v) {
    std::int64_t n, d;
    double_to_fraction(v, n, d);
    return make_rat(n, d);
  }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double from_fraction(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double from_double(double v) { return v; }
};

}  // namespace rii
