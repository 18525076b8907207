#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace simplexlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const BigInt& v) { return v.str(); }
inline std::string to_string(const Rational& v) { return v.str(); }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }

}  // namespace simplexlab
