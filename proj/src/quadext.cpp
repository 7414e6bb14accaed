#include "flexlab/quadext.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace flexlab {

namespace {

constexpr unsigned long kTrialDivisionBound = 1000000;

// n = root^2 * squarefree, n >= 0. Trial division up to 10^6, then the
// remaining cofactor must be a perfect square or we refuse loudly.
struct SquarefreeSplit {
  Integer root;
  Integer squarefree;
};

SquarefreeSplit squarefree_split(Integer n) {
  if (n < 0) throw std::domain_error("squarefree split of negative integer");
  if (n == 0) return {0, 1};
  SquarefreeSplit out{1, 1};
  if (is_perfect_square(n)) {
    out.root = isqrt(n);
    return out;
  }
  auto strip = [&](unsigned long p) {
    if (!mpz_divisible_ui_p(n.get_mpz_t(), p)) return;
    unsigned e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++e;
    }
    for (unsigned k = 0; k < e / 2; ++k) out.root *= p;
    if (e % 2) out.squarefree *= p;
  };
  strip(2);
  strip(3);
  for (unsigned long p = 5; p <= kTrialDivisionBound && n > 1; p += 6) {
    if (Integer(p) * p > n) break;
    strip(p);
    strip(p + 2);
  }
  if (n > 1) {
    // n is now free of primes <= 10^6 (or itself <= bound^2 and prime).
    if (is_perfect_square(n)) {
      out.root *= isqrt(n);
    } else if (n <= Integer(kTrialDivisionBound) * kTrialDivisionBound) {
      out.squarefree *= n;  // single prime below the bound squared
    } else {
      throw std::length_error("squarefree decomposition failed: cofactor " + n.get_str() +
                              " has no prime factor below 10^6 and is not a perfect square");
    }
  }
  return out;
}

long radicand_to_long(const Integer& d) {
  if (!d.fits_slong_p())
    throw std::length_error("radicand " + d.get_str() + " exceeds supported range");
  return d.get_si();
}

}  // namespace

void QuadExt::set_term(long d, const Rational& q) {
  if (q == 0)
    terms_.erase(d);
  else
    terms_[d] = q;
}

QuadExt QuadExt::radical(const Rational& coeff, const Integer& d) {
  if (d <= 0) throw std::domain_error("radicand must be positive");
  SquarefreeSplit sp = squarefree_split(d);
  QuadExt out;
  out.set_term(radicand_to_long(sp.squarefree), coeff * Rational(sp.root));
  return out;
}

bool QuadExt::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

Rational QuadExt::coeff(long d) const {
  auto it = terms_.find(d);
  return it == terms_.end() ? Rational(0) : it->second;
}

QuadExt QuadExt::operator-() const {
  QuadExt out;
  for (const auto& [d, q] : terms_) out.terms_.emplace(d, -q);
  return out;
}

QuadExt& QuadExt::operator+=(const QuadExt& o) {
  for (const auto& [d, q] : o.terms_) set_term(d, coeff(d) + q);
  return *this;
}

QuadExt& QuadExt::operator-=(const QuadExt& o) {
  for (const auto& [d, q] : o.terms_) set_term(d, coeff(d) - q);
  return *this;
}

QuadExt& QuadExt::operator*=(const QuadExt& o) {
  QuadExt out;
  for (const auto& [d1, q1] : terms_) {
    for (const auto& [d2, q2] : o.terms_) {
      // sqrt(d1)*sqrt(d2) = g*sqrt((d1/g)*(d2/g)) with g = gcd(d1,d2);
      // both factors squarefree, so the reduced radicand is squarefree.
      long g = std::gcd(d1, d2);
      Integer rad = Integer(d1 / g) * Integer(d2 / g);
      long d = radicand_to_long(rad);
      out.set_term(d, out.coeff(d) + q1 * q2 * Rational(g));
    }
  }
  terms_ = std::move(out.terms_);
  return *this;
}

QuadExt QuadExt::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero QuadExt");
  if (is_rational()) return QuadExt(Rational(1) / rational_part());

  // Coprime basis of the radicands: every radicand is a product of a subset
  // of pairwise-coprime squarefree generators.
  std::vector<long> basis;
  for (const auto& [d, q] : terms_) {
    (void)q;
    long m = d;
    for (size_t i = 0; i < basis.size() && m > 1; ++i) {
      long g = std::gcd(m, basis[i]);
      if (g == 1 || g == basis[i]) {
        if (g == basis[i]) m /= g;
        continue;
      }
      long rest = basis[i] / g;
      basis[i] = g;
      basis.push_back(rest);
      m /= g;
      i = static_cast<size_t>(-1);  // restart: new elements may divide m
    }
    if (m > 1) basis.push_back(m);
  }
  if (basis.size() > kMaxGenerators)
    throw std::length_error("QuadExt inversion needs " + std::to_string(basis.size()) +
                            " generators, cap is " + std::to_string(kMaxGenerators));

  auto conjugate = [](const QuadExt& v, long b) {
    QuadExt out;
    for (const auto& [d, q] : v.terms_) out.terms_.emplace(d, d % b == 0 ? -q : q);
    return out;
  };

  QuadExt x = *this;
  QuadExt num(Rational(1));
  for (long b : basis) {
    QuadExt c = conjugate(x, b);
    num *= c;
    x *= c;  // now free of radicands divisible by b
  }
  if (!x.is_rational() || x.rational_part() == 0)
    throw std::logic_error("conjugation norm failed to rationalize");
  return num * QuadExt(Rational(1) / x.rational_part());
}

double QuadExt::eval(double abs_err) const {
  if (!(abs_err > 0)) throw std::invalid_argument("eval precision must be positive");
  if (terms_.empty()) return 0.0;

  double scale = 0;
  for (const auto& [d, q] : terms_)
    scale += std::abs(to_double(q)) * std::sqrt(static_cast<double>(d)) + 1.0;
  long bits = 64 + static_cast<long>(std::ceil(std::log2(std::max(scale / abs_err, 2.0))));

  mpf_class acc(0, bits);
  for (const auto& [d, q] : terms_) {
    mpf_class root(0, bits);
    mpf_sqrt_ui(root.get_mpf_t(), static_cast<unsigned long>(d));
    acc += mpf_class(q, bits) * root;
  }
  return acc.get_d();
}

std::string QuadExt::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [d, q] : terms_) {
    Rational mag = rational_abs(q);
    if (first) {
      if (q < 0) out += "-";
      first = false;
    } else {
      out += q < 0 ? " - " : " + ";
    }
    if (d == 1) {
      out += format_rational(mag);
    } else if (mag == 1) {
      out += "sqrt(" + std::to_string(d) + ")";
    } else {
      out += format_rational(mag) + "*sqrt(" + std::to_string(d) + ")";
    }
  }
  return out;
}

namespace {

struct Parser {
  std::string_view s;
  size_t i = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("QuadExt syntax error at position " + std::to_string(i) + ": " + what);
  }
  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  bool lookahead_word(std::string_view w) {
    skip();
    return s.substr(i, w.size()) == w;
  }
  Integer digits() {
    skip();
    size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) fail("expected digits");
    return Integer(std::string(s.substr(start, i - start)));
  }
  Integer radicand() {
    if (!lookahead_word("sqrt")) fail("expected sqrt(...)");
    i += 4;
    if (!eat('(')) fail("expected '('");
    Integer d = digits();
    if (!eat(')')) fail("expected ')'");
    if (d <= 0) fail("radicand must be positive");
    return d;
  }
  Rational rational(bool negated) {
    Integer num = digits();
    Integer den = 1;
    if (eat('/')) {
      den = digits();
      if (den == 0) fail("zero denominator");
    }
    Rational q(negated ? Integer(-num) : num, den);
    q.canonicalize();
    return q;
  }
  QuadExt term(bool negated) {
    skip();
    if (lookahead_word("sqrt")) return QuadExt::radical(negated ? -1 : 1, radicand());
    Rational q = rational(negated);
    if (eat('*')) return QuadExt::radical(q, radicand());
    return QuadExt(q);
  }
  QuadExt expr() {
    bool neg = false;
    skip();
    if (eat('-'))
      neg = true;
    else
      eat('+');
    QuadExt acc = term(neg);
    for (;;) {
      skip();
      if (i == s.size()) break;
      if (eat('+'))
        acc += term(false);
      else if (eat('-'))
        acc += term(true);
      else
        fail("expected '+' or '-'");
    }
    return acc;
  }
};

}  // namespace

QuadExt QuadExt::parse(std::string_view text) {
  Parser p{text};
  return p.expr();
}

QuadExt sqrt_rational(const Rational& q) {
  if (q < 0) throw std::domain_error("sqrt of negative rational");
  if (q == 0) return QuadExt();
  // sqrt(n/m) = sqrt(n*m)/m
  Integer nm = q.get_num() * q.get_den();
  SquarefreeSplit sp = squarefree_split(nm);
  return QuadExt::radical(Rational(sp.root, q.get_den()), sp.squarefree);
}

}  // namespace flexlab
