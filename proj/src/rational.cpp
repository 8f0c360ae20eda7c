#include "negdep/rational.hpp"

#include <cctype>

#include "negdep/errors.hpp"

namespace negdep {

namespace {

bool valid_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rat parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!valid_integer_token(text)) {
      fail(ErrorCode::Parse, "not a rational: '" + text + "'");
    }
    return Rat(Int(text));
  }
  const std::string num = text.substr(0, slash);
  const std::string den = text.substr(slash + 1);
  if (!valid_integer_token(num) || !valid_integer_token(den)) {
    fail(ErrorCode::Parse, "not a rational: '" + text + "'");
  }
  Int d(den);
  if (d == 0) fail(ErrorCode::Parse, "zero denominator: '" + text + "'");
  Rat q(Int(num), d);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

Int common_denominator(const std::vector<Rat>& values) {
  Int d = 1;
  for (const Rat& v : values) {
    Int g;
    mpz_lcm(g.get_mpz_t(), d.get_mpz_t(), v.get_den().get_mpz_t());
    d = g;
  }
  return d;
}

std::vector<Int> cleared_integers(const std::vector<Rat>& values) {
  const Int d = common_denominator(values);
  std::vector<Int> out;
  out.reserve(values.size());
  for (const Rat& v : values) {
    Rat scaled = v * d;
    out.push_back(scaled.get_num());
  }
  return out;
}

}  // namespace negdep
