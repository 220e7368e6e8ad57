#include "famc/rational.hpp"

#include <cctype>

#include "famc/error.hpp"

namespace famc {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  if (!body.empty() && body.front() == '-') body.remove_prefix(1);
  const auto slash = body.find('/');
  const std::string_view num = body.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? "1" : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den)) {
    throw ParseError("", "not a rational: '" + std::string(text) + "'");
  }
  Integer d(std::string(den), 10);
  if (d == 0) throw ParseError("", "zero denominator: '" + std::string(text) + "'");
  Rational out(Integer(std::string(num), 10), d);
  out.canonicalize();
  if (text.front() == '-') out = -out;
  return out;
}

std::string format_rational(const Rational& value) { return value.get_str(10); }

std::string format_decimal(const Rational& value, int places) {
  Integer scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  Rational magnitude = abs(value) * scale + Rational(1, 2);
  Integer scaled = floor_of(magnitude);
  std::string digits = scaled.get_str(10);
  if (static_cast<int>(digits.size()) <= places) {
    digits.insert(0, static_cast<std::size_t>(places + 1 - static_cast<int>(digits.size())), '0');
  }
  std::string out = value < 0 && scaled != 0 ? "-" : "";
  out += digits.substr(0, digits.size() - static_cast<std::size_t>(places));
  if (places > 0) {
    out += '.';
    out += digits.substr(digits.size() - static_cast<std::size_t>(places));
  }
  return out;
}

bool is_integer(const Rational& value) { return value.get_den() == 1; }

Integer floor_of(const Rational& value) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

Integer ceil_of(const Rational& value) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

}  // namespace famc
