#pragma once

// Exact scalars of the form  r(q) * pi^k  where r is a rational function in a
// formal variable q with rational coefficients and k is an integer.
//
// Every SymbolicScalar is kept in canonical form: the denominator is monic,
// numerator and denominator are coprime, and zero is (0, 1, pi^0). Two values
// are equal iff their canonical parts are equal, so identity checks reduce
// to a comparison.

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jlm/error.hpp"

namespace jlm::symexpr {

/// Dense univariate polynomial over Q, coefficients in ascending powers.
/// The coefficient vector never has a trailing zero; the zero polynomial is
/// the empty vector.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<mpq_class> coeffs);

  static Polynomial constant(const mpq_class& c);
  static Polynomial monomial(const mpq_class& c, std::size_t power);
  /// q^power - 1
  static Polynomial q_pow_minus_one(std::size_t power);

  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
  const std::vector<mpq_class>& coeffs() const noexcept { return coeffs_; }
  mpq_class coeff(std::size_t power) const;
  const mpq_class& leading() const;
  std::size_t term_count() const;
  /// Largest k with q^k dividing this polynomial (0 for the zero polynomial).
  std::size_t low_order() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(const Polynomial& rhs);
  Polynomial& operator*=(const mpq_class& rhs);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Polynomial a, const mpq_class& b) { return a *= b; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

  Polynomial monic() const;
  mpq_class operator()(const mpq_class& x) const;

  /// Euclidean division; throws invalid_scalar on a zero divisor.
  static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a,
                                                  const Polynomial& b);

 private:
  void trim();

  std::vector<mpq_class> coeffs_;
};

/// Monic gcd; gcd(0, 0) = 0.
Polynomial gcd(Polynomial a, Polynomial b);

/// Maximum polynomial degree accepted by canonicalization (default 256).
std::size_t degree_cap();
void set_degree_cap(std::size_t cap);

/// Unnormalized triple as it comes from a caller or a parser.
struct RawScalar {
  Polynomial numerator;
  Polynomial denominator = Polynomial::constant(1);
  long pi_exponent = 0;
};

class SymbolicScalar;

/// Reduce to the unique canonical form. Throws invalid_scalar on a zero
/// denominator and degree_cap when either part exceeds the configured cap.
SymbolicScalar canonicalize(const RawScalar& raw);

class SymbolicScalar {
 public:
  /// Zero.
  SymbolicScalar();
  SymbolicScalar(const mpq_class& c);  // NOLINT(google-explicit-constructor)
  SymbolicScalar(long c);              // NOLINT(google-explicit-constructor)

  static SymbolicScalar q();
  /// q^k for any integer k; negative powers land in the denominator.
  static SymbolicScalar q_pow(long k);
  static SymbolicScalar pi_pow(long k);

  const Polynomial& numerator() const noexcept { return num_; }
  const Polynomial& denominator() const noexcept { return den_; }
  long pi_exponent() const noexcept { return pi_exp_; }
  RawScalar raw() const { return {num_, den_, pi_exp_}; }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_one() const;
  /// No q dependence (pi powers allowed).
  bool is_q_free() const noexcept;
  /// No q dependence and no pi factor.
  bool is_rational() const noexcept;
  /// Value of a rational scalar; throws invalid_parameter otherwise.
  mpq_class to_rational() const;

  SymbolicScalar operator-() const;
  SymbolicScalar& operator+=(const SymbolicScalar& rhs);
  SymbolicScalar& operator-=(const SymbolicScalar& rhs);
  SymbolicScalar& operator*=(const SymbolicScalar& rhs);
  SymbolicScalar& operator/=(const SymbolicScalar& rhs);

  friend SymbolicScalar operator+(SymbolicScalar a, const SymbolicScalar& b) { return a += b; }
  friend SymbolicScalar operator-(SymbolicScalar a, const SymbolicScalar& b) { return a -= b; }
  friend SymbolicScalar operator*(SymbolicScalar a, const SymbolicScalar& b) { return a *= b; }
  friend SymbolicScalar operator/(SymbolicScalar a, const SymbolicScalar& b) { return a /= b; }
  friend bool operator==(const SymbolicScalar& a, const SymbolicScalar& b) = default;

  SymbolicScalar inverse() const;
  SymbolicScalar pow(long k) const;

  /// Replace q by a rational value, keeping the pi factor. Throws
  /// evaluation_pole when the denominator vanishes there.
  SymbolicScalar substitute(const mpq_class& q_value) const;

  /// Canonical text: "N/D·pi^k" with N and D in ascending q-powers.
  std::string to_string() const;

 private:
  friend SymbolicScalar canonicalize(const RawScalar& raw);
  SymbolicScalar(Polynomial num, Polynomial den, long pi_exp);

  Polynomial num_;
  Polynomial den_;
  long pi_exp_ = 0;
};

std::ostream& operator<<(std::ostream& os, const SymbolicScalar& s);

/// Named rational values available to the parser (e.g. {"k", 7}).
using Bindings = std::map<std::string, mpq_class, std::less<>>;

/// Parse an arithmetic expression in q, pi, integer/decimal literals and
/// bound names with + - * · / ^ (integer exponents) and parentheses.
/// Accepts everything to_string() produces.
SymbolicScalar parse_scalar(std::string_view text, const Bindings& bindings = {});

/// A scalar times sqrt(radicand) with radicand squarefree; radicand 1 means
/// the value is the scalar itself. Used where half-integer powers of an
/// integer occur.
struct SurdScalar {
  SymbolicScalar scalar;
  mpz_class radicand = 1;

  /// scalar * base^(half_exponent/2), reduced.
  static SurdScalar from_half_power(const mpz_class& base, long half_exponent);

  bool has_surd() const { return radicand != 1; }
  SurdScalar& operator*=(const SurdScalar& rhs);
  SurdScalar& operator/=(const SurdScalar& rhs);
  friend SurdScalar operator*(SurdScalar a, const SurdScalar& b) { return a *= b; }
  friend SurdScalar operator/(SurdScalar a, const SurdScalar& b) { return a /= b; }
  friend bool operator==(const SurdScalar& a, const SurdScalar& b) = default;

  std::string to_string() const;
};

/// Exact rational or high-precision approximation with an error bound.
struct NumericValue {
  mpq_class value;
  double error_bound = 0.0;
  bool exact = true;

  static NumericValue exact_value(const mpq_class& v) { return {v, 0.0, true}; }

  double to_double() const { return value.get_d(); }
  /// Decimal rendering with the requested number of significant digits;
  /// exact integers and short fractions keep their exact form.
  std::string to_string(int digits = 20) const;
};

/// Evaluate at q = q_value with pi computed to at least pi_digits decimal
/// digits. The error bound accounts for pi truncation only; pi-free values are
/// exact.
NumericValue evaluate_at(const SymbolicScalar& s, const mpq_class& q_value,
                         int pi_digits = 30);

/// Evaluate a q-free scalar (q is not consulted).
NumericValue evaluate(const SymbolicScalar& s, int pi_digits = 30);

NumericValue evaluate(const SurdScalar& s, int digits = 30);

/// Parse a rational literal such as "3", "-7/4" or "0.125".
mpq_class parse_rational(std::string_view text);

}  // namespace jlm::symexpr
