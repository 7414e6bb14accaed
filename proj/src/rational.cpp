#include "flexlab/rational.hpp"

namespace flexlab {

Rational parse_rational(std::string_view text) {
  size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  skip();
  std::string num, den;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) num += text[i++];
  skip();
  size_t digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    num += text[i++];
    ++digits;
  }
  if (digits == 0) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  skip();
  if (i < text.size() && text[i] == '/') {
    ++i;
    skip();
    size_t d2 = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      den += text[i++];
      ++d2;
    }
    if (d2 == 0) throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  } else {
    den = "1";
  }
  skip();
  if (i != text.size()) throw std::invalid_argument("trailing junk in rational: '" + std::string(text) + "'");
  Integer n(num), d(den);
  if (d == 0) throw std::domain_error("rational with zero denominator");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Integer isqrt(const Integer& n) {
  if (n < 0) throw std::domain_error("isqrt of negative integer");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

bool is_perfect_square(const Integer& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

}  // namespace flexlab
