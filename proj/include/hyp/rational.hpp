#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace hyp {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "3", "-2", "3/2" and finite decimals such as "1.25".
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
BigInt floor_of(const Rational& q);
BigInt ceil_of(const Rational& q);
std::int64_t to_int64(const BigInt& z);

}  // namespace hyp
