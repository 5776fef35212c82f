#include "hyp/rational.hpp"

#include <cctype>
#include <limits>

#include "hyp/error.hpp"

namespace hyp {

Rational parse_rational(const std::string& raw) {
  std::string t;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) fail(ErrorKind::Syntax, "empty number");
  auto digits = [&](const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  auto whole = [&](const std::string& s) {
    return BigInt(s[0] == '+' ? s.substr(1) : s);
  };
  if (auto slash = t.find('/'); slash != std::string::npos) {
    std::string n = t.substr(0, slash), d = t.substr(slash + 1);
    if (!digits(n) || !digits(d)) fail(ErrorKind::Syntax, "bad rational '" + raw + "'");
    BigInt den = whole(d);
    if (den == 0) fail(ErrorKind::Domain, "zero denominator in '" + raw + "'");
    return Rational(whole(n), den);
  }
  if (auto dot = t.find('.'); dot != std::string::npos) {
    std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (ip.empty() || ip == "-" || ip == "+") ip += "0";
    if (!digits(ip) || fp.empty() || !digits(fp) || fp[0] == '-' || fp[0] == '+')
      fail(ErrorKind::Syntax, "bad decimal '" + raw + "'");
    BigInt scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    BigInt ipart = boost::multiprecision::abs(whole(ip));
    Rational q = Rational(ipart) + Rational(BigInt(fp), scale);
    return neg ? -q : q;
  }
  if (!digits(t)) fail(ErrorKind::Syntax, "bad number '" + raw + "'");
  return Rational(whole(t));
}

std::string to_string(const Rational& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

BigInt floor_of(const Rational& q) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  BigInt n = numerator(q), d = denominator(q);
  BigInt f = n / d;
  if (n % d != 0 && n < 0) f -= 1;
  return f;
}

BigInt ceil_of(const Rational& q) { return -floor_of(-q); }

std::int64_t to_int64(const BigInt& z) {
  if (z > std::numeric_limits<std::int64_t>::max() || z < std::numeric_limits<std::int64_t>::min())
    fail(ErrorKind::Domain, "integer out of range: " + z.str());
  return z.convert_to<std::int64_t>();
}

}  // namespace hyp
