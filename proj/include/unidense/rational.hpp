#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace unidense {

using BigInt = boost::multiprecision::number<boost::multiprecision::backends::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }

inline Rat rat(long long num, long long den = 1) { return Rat(BigInt(num), BigInt(den)); }

inline BigInt rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline BigInt rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

// Floor of a nonnegative rational as a big integer.
inline BigInt rat_floor(const Rat& r) {
  BigInt q = rat_num(r) / rat_den(r);
  if (r < 0 && q * rat_den(r) != rat_num(r)) --q;
  return q;
}

// "p/q" for non-integers, "p" otherwise.
inline std::string rat_to_string(const Rat& r) {
  if (rat_den(r) == 1) return rat_num(r).str();
  return rat_num(r).str() + "/" + rat_den(r).str();
}

// Least t > 0 with t/a and t/b integral, for positive rationals a, b.
inline Rat rat_lcm(const Rat& a, const Rat& b) {
  BigInt pa = rat_num(a), qa = rat_den(a);
  BigInt pb = rat_num(b), qb = rat_den(b);
  BigInt num = boost::multiprecision::lcm(pa * qb, pb * qa);
  return Rat(num, qa * qb);
}

}  // namespace unidense
