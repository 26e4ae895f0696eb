#include "jlm/symexpr.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "bigfloat.hpp"

namespace jlm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_scalar: return "invalid-scalar";
    case ErrorKind::evaluation_pole: return "evaluation-pole";
    case ErrorKind::degree_cap: return "degree-cap";
    case ErrorKind::mixed_pi: return "mixed-pi";
    case ErrorKind::parse: return "parse";
    case ErrorKind::spec_violation: return "spec-violation";
    case ErrorKind::not_square_integrable: return "not-square-integrable";
    case ErrorKind::no_discrete_series: return "no-discrete-series";
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::input: return "input";
    case ErrorKind::normalization: return "normalization";
    case ErrorKind::domain: return "domain";
    case ErrorKind::resource: return "resource";
  }
  return "unknown";
}

namespace detail {

std::string BigFloat::to_string(int digits) const {
  if (mpfr_zero_p(v_)) return "0";
  if (!mpfr_number_p(v_)) return mpfr_nan_p(v_) ? "nan" : (sign() > 0 ? "inf" : "-inf");
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
  std::string mant(raw);
  mpfr_free_str(raw);
  bool neg = false;
  if (!mant.empty() && mant[0] == '-') {
    neg = true;
    mant.erase(0, 1);
  }
  // value = 0.mant * 10^exp10
  std::string out;
  if (exp10 > 0 && exp10 <= 21) {
    auto e = static_cast<std::size_t>(exp10);
    if (e >= mant.size()) {
      out = mant + std::string(e - mant.size(), '0');
    } else {
      out = mant.substr(0, e) + "." + mant.substr(e);
    }
  } else if (exp10 <= 0 && exp10 > -6) {
    out = "0." + std::string(static_cast<std::size_t>(-exp10), '0') + mant;
  } else {
    out = mant.substr(0, 1) + "." + mant.substr(1) + "e" + std::to_string(exp10 - 1);
  }
  if (out.find('.') != std::string::npos && out.find('e') == std::string::npos) {
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return neg ? "-" + out : out;
}

}  // namespace detail

namespace symexpr {

namespace {

std::atomic<std::size_t> g_degree_cap{256};

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace

std::size_t degree_cap() { return g_degree_cap.load(std::memory_order_relaxed); }
void set_degree_cap(std::size_t cap) { g_degree_cap.store(cap, std::memory_order_relaxed); }

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<mpq_class> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

Polynomial Polynomial::constant(const mpq_class& c) { return Polynomial({c}); }

Polynomial Polynomial::monomial(const mpq_class& c, std::size_t power) {
  std::vector<mpq_class> v(power + 1);
  v[power] = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::q_pow_minus_one(std::size_t power) {
  std::vector<mpq_class> v(power + 1);
  v[power] = 1;
  v[0] -= 1;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

mpq_class Polynomial::coeff(std::size_t power) const {
  return power < coeffs_.size() ? coeffs_[power] : mpq_class(0);
}

const mpq_class& Polynomial::leading() const {
  if (is_zero()) fail(ErrorKind::invalid_scalar, "leading coefficient of the zero polynomial");
  return coeffs_.back();
}

std::size_t Polynomial::term_count() const {
  return static_cast<std::size_t>(
      std::count_if(coeffs_.begin(), coeffs_.end(), [](const mpq_class& c) { return sgn(c) != 0; }));
}

std::size_t Polynomial::low_order() const {
  std::size_t k = 0;
  while (k < coeffs_.size() && sgn(coeffs_[k]) == 0) ++k;
  return is_zero() ? 0 : k;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& rhs) {
  if (is_zero() || rhs.is_zero()) {
    coeffs_.clear();
    return *this;
  }
  std::vector<mpq_class> out(coeffs_.size() + rhs.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (sgn(coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) {
      if (sgn(rhs.coeffs_[j]) == 0) continue;
      out[i + j] += coeffs_[i] * rhs.coeffs_[j];
    }
  }
  coeffs_ = std::move(out);
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(const mpq_class& rhs) {
  if (sgn(rhs) == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& c : coeffs_) c *= rhs;
  return *this;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return {};
  mpq_class inv = 1 / leading();
  return *this * inv;
}

mpq_class Polynomial::operator()(const mpq_class& x) const {
  mpq_class acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) fail(ErrorKind::invalid_scalar, "polynomial division by zero");
  if (a.degree() < b.degree()) return {Polynomial{}, a};
  std::vector<mpq_class> rem = a.coeffs_;
  const auto db = static_cast<std::size_t>(b.degree());
  std::vector<mpq_class> quot(rem.size() - db);
  const mpq_class inv_lead = 1 / b.leading();
  for (std::size_t k = quot.size(); k-- > 0;) {
    mpq_class c = rem[k + db] * inv_lead;
    if (sgn(c) == 0) continue;
    quot[k] = c;
    for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= c * b.coeffs_[j];
  }
  rem.resize(db);
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial gcd(Polynomial a, Polynomial b) {
  // Strip the common power of q first; it is the most frequent shared factor.
  const std::size_t shared = std::min(a.is_zero() ? b.low_order() : a.low_order(),
                                      b.is_zero() ? a.low_order() : b.low_order());
  auto shift_down = [](const Polynomial& p, std::size_t k) {
    if (k == 0 || p.is_zero()) return p;
    return Polynomial(std::vector<mpq_class>(p.coeffs().begin() + static_cast<long>(k), p.coeffs().end()));
  };
  a = shift_down(a, shared);
  b = shift_down(b, shared);
  while (!b.is_zero()) {
    Polynomial r = Polynomial::divmod(a, b).second;
    a = std::move(b);
    b = r.monic();
  }
  a = a.monic();
  if (shared > 0 && !a.is_zero()) a *= Polynomial::monomial(1, shared);
  return a;
}

// ---------------------------------------------------------------------------
// SymbolicScalar

namespace {

void check_cap(const Polynomial& p) {
  if (p.degree() > static_cast<long>(degree_cap())) {
    fail(ErrorKind::degree_cap, "polynomial degree " + std::to_string(p.degree()) +
                                    " exceeds the cap of " + std::to_string(degree_cap()));
  }
}

Polynomial exact_quotient(const Polynomial& a, const Polynomial& b) {
  if (b.degree() == 0) return a * (1 / b.leading());
  return Polynomial::divmod(a, b).first;
}

}  // namespace

SymbolicScalar::SymbolicScalar() : num_(), den_(Polynomial::constant(1)), pi_exp_(0) {}

SymbolicScalar::SymbolicScalar(const mpq_class& c)
    : num_(Polynomial::constant(c)), den_(Polynomial::constant(1)), pi_exp_(0) {}

SymbolicScalar::SymbolicScalar(long c) : SymbolicScalar(mpq_class(c)) {}

SymbolicScalar::SymbolicScalar(Polynomial num, Polynomial den, long pi_exp)
    : num_(std::move(num)), den_(std::move(den)), pi_exp_(pi_exp) {}

SymbolicScalar canonicalize(const RawScalar& raw) {
  if (raw.denominator.is_zero()) fail(ErrorKind::invalid_scalar, "zero denominator");
  check_cap(raw.numerator);
  check_cap(raw.denominator);
  if (raw.numerator.is_zero()) return SymbolicScalar();
  Polynomial g = gcd(raw.numerator, raw.denominator);
  Polynomial num = exact_quotient(raw.numerator, g);
  Polynomial den = exact_quotient(raw.denominator, g);
  const mpq_class inv = 1 / den.leading();
  num *= inv;
  den *= inv;
  return SymbolicScalar(std::move(num), std::move(den), raw.pi_exponent);
}

SymbolicScalar SymbolicScalar::q() { return SymbolicScalar(Polynomial::monomial(1, 1), Polynomial::constant(1), 0); }

SymbolicScalar SymbolicScalar::q_pow(long k) {
  if (static_cast<std::size_t>(std::labs(k)) > degree_cap()) {
    fail(ErrorKind::degree_cap, "q^" + std::to_string(k) + " exceeds the degree cap");
  }
  if (k >= 0) {
    return SymbolicScalar(Polynomial::monomial(1, static_cast<std::size_t>(k)), Polynomial::constant(1), 0);
  }
  return SymbolicScalar(Polynomial::constant(1), Polynomial::monomial(1, static_cast<std::size_t>(-k)), 0);
}

SymbolicScalar SymbolicScalar::pi_pow(long k) {
  return SymbolicScalar(Polynomial::constant(1), Polynomial::constant(1), k);
}

bool SymbolicScalar::is_one() const {
  return pi_exp_ == 0 && num_.degree() == 0 && den_.degree() == 0 && num_.coeffs()[0] == 1;
}

bool SymbolicScalar::is_q_free() const noexcept { return num_.degree() <= 0 && den_.degree() == 0; }

bool SymbolicScalar::is_rational() const noexcept { return is_q_free() && pi_exp_ == 0; }

mpq_class SymbolicScalar::to_rational() const {
  if (!is_rational()) fail(ErrorKind::invalid_parameter, "scalar " + to_string() + " is not a rational number");
  return num_.coeff(0);
}

SymbolicScalar SymbolicScalar::operator-() const { return SymbolicScalar(-num_, den_, pi_exp_); }

SymbolicScalar& SymbolicScalar::operator+=(const SymbolicScalar& rhs) {
  if (rhs.is_zero()) return *this;
  if (is_zero()) return *this = rhs;
  if (pi_exp_ != rhs.pi_exp_) {
    fail(ErrorKind::mixed_pi, "cannot add terms with pi^" + std::to_string(pi_exp_) + " and pi^" +
                                  std::to_string(rhs.pi_exp_));
  }
  if (den_ == rhs.den_) {
    return *this = canonicalize({num_ + rhs.num_, den_, pi_exp_});
  }
  return *this = canonicalize({num_ * rhs.den_ + rhs.num_ * den_, den_ * rhs.den_, pi_exp_});
}

SymbolicScalar& SymbolicScalar::operator-=(const SymbolicScalar& rhs) { return *this += -rhs; }

SymbolicScalar& SymbolicScalar::operator*=(const SymbolicScalar& rhs) {
  if (is_zero() || rhs.is_zero()) return *this = SymbolicScalar();
  // Cross-cancel so that the product is already reduced.
  Polynomial g1 = gcd(num_, rhs.den_);
  Polynomial g2 = gcd(rhs.num_, den_);
  Polynomial num = exact_quotient(num_, g1) * exact_quotient(rhs.num_, g2);
  Polynomial den = exact_quotient(den_, g2) * exact_quotient(rhs.den_, g1);
  check_cap(num);
  check_cap(den);
  const mpq_class inv = 1 / den.leading();
  num *= inv;
  den *= inv;
  num_ = std::move(num);
  den_ = std::move(den);
  pi_exp_ += rhs.pi_exp_;
  return *this;
}

SymbolicScalar& SymbolicScalar::operator/=(const SymbolicScalar& rhs) { return *this *= rhs.inverse(); }

SymbolicScalar SymbolicScalar::inverse() const {
  if (is_zero()) fail(ErrorKind::invalid_scalar, "inverse of zero");
  const mpq_class inv = 1 / num_.leading();
  return SymbolicScalar(den_ * inv, num_ * inv, -pi_exp_);
}

SymbolicScalar SymbolicScalar::pow(long k) const {
  if (k < 0) return inverse().pow(-k);
  SymbolicScalar result(1L);
  SymbolicScalar base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k > 0) base *= base;
  }
  return result;
}

SymbolicScalar SymbolicScalar::substitute(const mpq_class& q_value) const {
  const mpq_class d = den_(q_value);
  if (sgn(d) == 0) fail(ErrorKind::evaluation_pole, "pole at q = " + q_value.get_str());
  SymbolicScalar r(mpq_class(num_(q_value) / d));
  if (!r.is_zero()) r.pi_exp_ = pi_exp_;
  return r;
}

namespace {

std::string render_poly(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    const mpq_class& c = p.coeffs()[i];
    if (sgn(c) == 0) continue;
    mpq_class mag = abs(c);
    std::string term;
    if (i == 0) {
      term = mag.get_str();
    } else {
      std::string var = i == 1 ? "q" : "q^" + std::to_string(i);
      term = mag == 1 ? var : mag.get_str() + "*" + var;
    }
    if (first) {
      out = sgn(c) < 0 ? "-" + term : term;
      first = false;
    } else {
      out += sgn(c) < 0 ? " - " : " + ";
      out += term;
    }
  }
  return out;
}

}  // namespace

std::string SymbolicScalar::to_string() const {
  if (is_zero()) return "0";
  std::string rational;
  const bool den_one = den_.degree() == 0;
  const std::string n = render_poly(num_);
  if (den_one) {
    rational = n;
  } else {
    const bool wrap_num = num_.term_count() > 1 || n.find('/') != std::string::npos;
    const bool wrap_den = den_.term_count() > 1;
    rational = (wrap_num ? "(" + n + ")" : n) + "/" + (wrap_den ? "(" + render_poly(den_) + ")" : render_poly(den_));
  }
  if (pi_exp_ == 0) return rational;
  const std::string pi = "pi^" + std::to_string(pi_exp_);
  if (den_one && num_.degree() == 0 && num_.coeffs()[0] == 1) return pi;
  if (den_one && num_.term_count() > 1) rational = "(" + rational + ")";
  return rational + "·" + pi;
}

std::ostream& operator<<(std::ostream& os, const SymbolicScalar& s) { return os << s.to_string(); }

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, const Bindings& bindings) : text_(text), bindings_(bindings) {}

  SymbolicScalar parse() {
    SymbolicScalar v = expr();
    skip_ws();
    if (pos_ != text_.size()) error("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::parse, "cannot parse \"" + std::string(text_) + "\" at offset " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  SymbolicScalar expr() {
    SymbolicScalar v = term();
    for (;;) {
      if (accept("+")) {
        v += term();
      } else if (accept("-")) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  SymbolicScalar term() {
    SymbolicScalar v = unary();
    for (;;) {
      if (accept("*") || accept("·")) {
        v *= unary();
      } else if (accept("/")) {
        SymbolicScalar d = unary();
        if (d.is_zero()) fail(ErrorKind::invalid_scalar, "division by zero in \"" + std::string(text_) + "\"");
        v /= d;
      } else {
        return v;
      }
    }
  }

  SymbolicScalar unary() {
    if (accept("-")) return -unary();
    if (accept("+")) return unary();
    return power();
  }

  SymbolicScalar power() {
    SymbolicScalar base = atom();
    if (accept("^")) {
      long k = exponent();
      if (base.is_zero() && k < 0) error("zero to a negative power");
      return base.pow(k);
    }
    return base;
  }

  long exponent() {
    bool paren = accept("(");
    bool neg = false;
    if (accept("-")) {
      neg = true;
    } else {
      accept("+");
    }
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) error("expected an integer exponent");
    long k = std::stol(std::string(text_.substr(start, pos_ - start)));
    if (paren && !accept(")")) error("expected ')'");
    return neg ? -k : k;
  }

  SymbolicScalar atom() {
    skip_ws();
    if (pos_ >= text_.size()) error("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      SymbolicScalar v = expr();
      if (!accept(")")) error("expected ')'");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string_view name = text_.substr(start, pos_ - start);
      if (auto it = bindings_.find(name); it != bindings_.end()) return SymbolicScalar(it->second);
      if (name == "q") return SymbolicScalar::q();
      if (name == "pi") return SymbolicScalar::pi_pow(1);
      pos_ = start;
      error("unknown name '" + std::string(name) + "'");
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  SymbolicScalar number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string digits(text_.substr(start, pos_ - start));
    std::string frac;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      std::size_t fs = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      frac = std::string(text_.substr(fs, pos_ - fs));
    }
    if (digits.empty() && frac.empty()) error("malformed number");
    mpz_class whole(digits.empty() ? "0" : digits);
    mpq_class value(whole);
    if (!frac.empty()) {
      mpz_class scale;
      mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
      value += mpq_class(mpz_class(frac), scale);
      value.canonicalize();
    }
    return SymbolicScalar(value);
  }

  std::string_view text_;
  const Bindings& bindings_;
  std::size_t pos_ = 0;
};

}  // namespace

SymbolicScalar parse_scalar(std::string_view text, const Bindings& bindings) {
  return Parser(text, bindings).parse();
}

mpq_class parse_rational(std::string_view text) {
  SymbolicScalar s = parse_scalar(text);
  if (!s.is_rational()) fail(ErrorKind::parse, "\"" + std::string(text) + "\" is not a rational literal");
  return s.to_rational();
}

// ---------------------------------------------------------------------------
// Surds

namespace {

// Split n = a^2 * s with s squarefree. Trial division is bounded; what remains
// after it is squarefree unless it is a perfect square.
std::pair<mpz_class, mpz_class> square_split(mpz_class n) {
  mpz_class a = 1;
  mpz_class s = 1;
  for (unsigned long p = 2; p <= 1000000; p += (p == 2 ? 1 : 2)) {
    mpz_class pp = p;
    if (pp * pp > n) break;
    int e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) a *= p;
    if (e % 2) s *= p;
  }
  if (n > 1) {
    if (mpz_perfect_square_p(n.get_mpz_t())) {
      mpz_class r;
      mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
      a *= r;
    } else {
      s *= n;
    }
  }
  return {a, s};
}

mpq_class pow_q(const mpz_class& base, long k) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(std::labs(k)));
  return k >= 0 ? mpq_class(r) : mpq_class(1, r);
}

}  // namespace

SurdScalar SurdScalar::from_half_power(const mpz_class& base, long half_exponent) {
  if (base <= 0) fail(ErrorKind::invalid_parameter, "surd base must be positive");
  if (half_exponent % 2 == 0) return {SymbolicScalar(pow_q(base, half_exponent / 2)), 1};
  // base^(h/2) = base^((h-1)/2) * sqrt(base) = base^((h-1)/2) * a * sqrt(s)
  auto [a, s] = square_split(base);
  mpq_class c = pow_q(base, (half_exponent - 1) / 2) * a;
  c.canonicalize();
  return {SymbolicScalar(c), s};
}

SurdScalar& SurdScalar::operator*=(const SurdScalar& rhs) {
  mpz_class g = gcd(radicand, rhs.radicand);
  scalar *= rhs.scalar;
  scalar *= SymbolicScalar(mpq_class(g));
  radicand = (radicand / g) * (rhs.radicand / g);
  return *this;
}

SurdScalar& SurdScalar::operator/=(const SurdScalar& rhs) {
  // 1/(c sqrt(s)) = sqrt(s) / (c s)
  SurdScalar inv{(rhs.scalar * SymbolicScalar(mpq_class(rhs.radicand))).inverse(), rhs.radicand};
  return *this *= inv;
}

std::string SurdScalar::to_string() const {
  if (!has_surd()) return scalar.to_string();
  std::string s = scalar.to_string();
  if (scalar.is_one()) return "sqrt(" + radicand.get_str() + ")";
  if (s.find_first_of("+- ") != std::string::npos && s.front() != '(') s = "(" + s + ")";
  return s + "·sqrt(" + radicand.get_str() + ")";
}

// ---------------------------------------------------------------------------
// Numeric evaluation

std::string NumericValue::to_string(int digits) const {
  if (exact) return value.get_str();
  return detail::BigFloat(value, detail::bits_for_digits(digits)).to_string(digits);
}

namespace {

constexpr int kMaxDigits = 250;

NumericValue scale_by_pi(const mpq_class& r, long k, int pi_digits) {
  if (k == 0 || sgn(r) == 0) return NumericValue::exact_value(r);
  if (pi_digits < 1 || pi_digits > kMaxDigits) {
    fail(ErrorKind::invalid_parameter, "pi precision must be between 1 and " + std::to_string(kMaxDigits) + " digits");
  }
  const mpfr_prec_t prec = detail::bits_for_digits(pi_digits);
  const mpq_class pi_hat = detail::BigFloat::pi(prec).to_mpq();
  mpq_class powered = 1;
  for (long i = 0; i < std::labs(k); ++i) powered *= pi_hat;
  if (k < 0) powered = 1 / powered;
  mpq_class value = r * powered;
  value.canonicalize();
  // |pi - pi_hat| <= 2^(2 - prec); bound |x^k - y^k| by |k| |x - y| max|t^(k-1)|
  // over t in [3.1, 3.2].
  const double eps = std::ldexp(1.0, static_cast<int>(2 - prec));
  const double slope = k > 0 ? std::pow(3.2, static_cast<double>(k - 1)) : std::pow(3.1, static_cast<double>(k - 1));
  double bound = std::fabs(r.get_d()) * static_cast<double>(std::labs(k)) * eps * slope * (1.0 + 1e-9);
  bound = std::max(bound, std::numeric_limits<double>::denorm_min());
  return {value, bound, false};
}

}  // namespace

NumericValue evaluate_at(const SymbolicScalar& s, const mpq_class& q_value, int pi_digits) {
  SymbolicScalar v = s.substitute(q_value);
  return scale_by_pi(v.numerator().coeff(0), v.pi_exponent(), pi_digits);
}

NumericValue evaluate(const SymbolicScalar& s, int pi_digits) {
  if (!s.is_q_free()) fail(ErrorKind::invalid_parameter, "scalar " + s.to_string() + " depends on q");
  return scale_by_pi(s.numerator().coeff(0), s.pi_exponent(), pi_digits);
}

NumericValue evaluate(const SurdScalar& s, int digits) {
  NumericValue base = evaluate(s.scalar, digits);
  if (!s.has_surd()) return base;
  const mpfr_prec_t prec = detail::bits_for_digits(digits);
  detail::BigFloat root(mpq_class(s.radicand), prec);
  mpfr_sqrt(root.get(), root.get(), MPFR_RNDN);
  const mpq_class root_hat = root.to_mpq();
  mpq_class value = base.value * root_hat;
  value.canonicalize();
  // sqrt rounding: half an ulp relative; propagate the scalar's own bound.
  const double root_d = root_hat.get_d();
  const double rel = std::ldexp(1.0, static_cast<int>(1 - prec));
  double bound = (std::fabs(base.value.get_d()) * root_d * rel + base.error_bound * root_d) * (1.0 + 1e-9);
  bound = std::max(bound, std::numeric_limits<double>::denorm_min());
  return {value, bound, false};
}

}  // namespace symexpr
}  // namespace jlm
