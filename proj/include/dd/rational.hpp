#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace dd {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline Rat rat(long num, long den = 1) { return Rat(num, den); }

// Parses "num/den" or "num". Used by every JSON reader.
inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rat(Int(s));
  Int num(s.substr(0, slash));
  Int den(s.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
  return Rat(num, den);
}

inline std::string format_rat(const Rat& r) {
  Int num = numerator(r), den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline Int gcd_int(Int a, Int b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline Int lcm_int(const Int& a, const Int& b) {
  if (a == 0 || b == 0) return 0;
  return a / gcd_int(a, b) * b;
}

// Largest multiple of 1/grain not exceeding r; grain = 0 keeps r exact.
inline Rat round_down(const Rat& r, const Int& grain) {
  if (grain == 0) return r;
  Int scaled = numerator(r) * grain / denominator(r);
  if (r < 0 && Rat(scaled, grain) != r) scaled -= 1;
  return Rat(scaled, grain);
}

}  // namespace dd
