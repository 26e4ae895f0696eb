#pragma once

// Global assembly: restricted products of local measures with a certified
// Euler tail, S-arithmetic covolumes through the strong-approximation
// fibration, the power-index factors relating PGL to SL, and the covolume
// comparison for an inner form.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "jlm/symexpr.hpp"

namespace jlm::adelic {

using symexpr::NumericValue;
using symexpr::SurdScalar;
using symexpr::SymbolicScalar;

inline constexpr std::uint32_t kDefaultPrimeCap = 1000000;

struct FinitePlace {
  std::string name;
  mpz_class q;                              ///< residue cardinality
  std::optional<mpz_class> local_disc_norm;  ///< d(F_v); 1 when absent
};

/// Global field invariants plus the place bookkeeping of an S-arithmetic
/// problem. Archimedean places are named "r1".."r<r1>" and "c1".."c<r2>".
struct GlobalSetup {
  mpz_class abs_discriminant = 1;
  long r1 = 1;
  long r2 = 0;
  long torsion_order = 2;
  std::vector<FinitePlace> places;
  std::set<std::string> ram_set;
  std::set<std::string> S;

  std::vector<std::string> archimedean_places() const;
  const FinitePlace* find(const std::string& name) const;
  bool is_archimedean(const std::string& name) const;
  /// Throws input on duplicate or unknown place names, a non-prime-power q,
  /// or S missing an archimedean place.
  void validate() const;
  bool ram_in_S() const;
};

/// (1 - q^exponent)^{-1 if invert else 1}
struct TailTerm {
  long exponent = -2;
  bool invert = false;
  friend auto operator<=>(const TailTerm&, const TailTerm&) = default;
};

/// Closed-form local factor at almost all places: a product of TailTerms
/// evaluated at q_v. The empty product is the constant 1.
class TailRule {
 public:
  TailRule() = default;
  explicit TailRule(std::vector<TailTerm> terms);

  static TailRule one() { return {}; }
  static TailRule one_minus_q_pow(long exponent, bool invert = false) {
    return TailRule({TailTerm{exponent, invert}});
  }

  const std::vector<TailTerm>& terms() const noexcept { return terms_; }
  bool is_one() const noexcept { return terms_.empty(); }

  TailRule& operator*=(const TailRule& rhs);
  friend TailRule operator*(TailRule a, const TailRule& b) { return a *= b; }
  TailRule inverse() const;
  friend bool operator==(const TailRule&, const TailRule&) = default;

  /// C with |log factor(q)| <= C q^{-2} for every q >= 2. Throws divergence
  /// when some term decays slower than q^{-2}.
  double log_constant() const;

  /// Exact factor value at q.
  mpq_class at(const mpz_class& q) const;

  std::string to_string() const;

 private:
  std::vector<TailTerm> terms_;  // sorted; an inverted term never meets its inverse
};

struct RestrictedProductSpec {
  std::map<std::string, mpq_class> S_factors;
  TailRule tail;
  double tolerance = 1e-6;
  std::uint32_t prime_cap = kDefaultPrimeCap;
  std::set<std::uint32_t> excluded_primes;  ///< primes whose factor is not taken from the tail
};

/// Raised when the tolerance cannot be certified below the prime cap. Carries
/// the value and bound reached at the cap.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, NumericValue best, std::uint32_t reached)
      : Error(ErrorKind::truncation, what), best_(std::move(best)), reached_(reached) {}
  const NumericValue& best() const noexcept { return best_; }
  std::uint32_t reached_bound() const noexcept { return reached_; }

 private:
  NumericValue best_;
  std::uint32_t reached_;
};

/// Partial Euler product over rational primes p <= bound (minus exclusions)
/// together with a certified bound on |log(limit / partial)|.
struct TailEstimate {
  NumericValue partial;  ///< value of the truncated product; error_bound covers rounding only
  double log_tail_bound = 0.0;
  std::uint32_t bound = 0;
};

TailEstimate truncated_tail(const TailRule& rule, std::uint32_t bound,
                            const std::set<std::uint32_t>& excluded = {});

/// prod_{i in S} S_factor(i) * prod_{p} tail(p), truncated where the certified
/// error drops below the tolerance. Exact when the tail is identically 1.
NumericValue restricted_product_measure(const RestrictedProductSpec& spec);

struct TailSpec {
  TailRule rule;
  double tolerance = 1e-6;
  std::uint32_t prime_cap = kDefaultPrimeCap;
  std::set<std::uint32_t> excluded_primes;
  friend bool operator==(const TailSpec&, const TailSpec&) = default;
};

/// A parahoric volume mu_v(P_v); a value symbolic in q is evaluated at q.
struct LocalFactor {
  SymbolicScalar value;
  std::optional<mpz_class> q;

  SymbolicScalar resolved() const;
};

/// D_F^{half_exponent/2} * tau * (prod_{v not in S} mu_v(P_v))^{-1}
struct CovolumeExpr {
  mpz_class disc_base = 1;
  long half_exponent = 0;
  mpq_class tamagawa_number = 1;
  std::map<std::string, LocalFactor> finite_factors;
  std::optional<TailSpec> tail;

  SurdScalar disc_factor() const { return SurdScalar::from_half_power(disc_base, half_exponent); }
  /// Throws input for a nonpositive tau or factor, or a q-dependent factor
  /// without q.
  void validate() const;
};

struct CovolumeValue {
  std::optional<SurdScalar> exact;  ///< present iff there is no tail to truncate
  NumericValue numeric;
};

CovolumeValue covolume_S_arithmetic(const CovolumeExpr& expr);

/// [A : A^n] for A = Z^rank + sum_j Z/w_j.
mpz_class abelian_power_index(long rank, const std::vector<long>& torsion_orders, long n);

struct RealPlaceKind {};
struct ComplexPlaceKind {};
struct PadicPlaceKind {
  mpz_class q;
  mpz_class residue_char;
  long mu_n_order = 1;      ///< #mu_n(F_v)
  mpz_class val_n = 1;      ///< |n|_v^{-1}
};
using PlaceKind = std::variant<RealPlaceKind, ComplexPlaceKind, PadicPlaceKind>;

/// [F_v^x : (F_v^x)^n].
mpz_class local_power_index(const PlaceKind& kind, long n);

/// #mu_n(F_v).
long local_roots_of_unity(const PlaceKind& kind, long n);

/// The common prefactor
///   [F_S^x : (F_S^x)^n] / [O_S^x : (O_S^x)^n] * [mu_n(F_S) : mu_n(O_S)]^{-1}
/// relating PGL-type covolumes to their SL-type (reduced-norm-one) versions.
struct IndexData {
  mpz_class fs_index = 1;
  mpz_class os_index = 1;
  mpz_class mu_fs_order = 1;
  mpz_class mu_os_order = 1;

  /// Throws input unless all entries are positive and mu_os_order divides
  /// mu_fs_order.
  void validate() const;
  mpq_class prefactor() const;
  friend bool operator==(const IndexData&, const IndexData&) = default;
};

/// Index data from the global setup: O_S^x = mu(F) x Z^{|S|-1}, mu_n(O_S) has
/// order gcd(n, w) and mu_n(F_S) = prod_{v in S} mu_n(F_v). `s_kinds` gives the
/// local kind of every place of S, keyed by place name.
IndexData index_data_from_setup(const GlobalSetup& setup, long n, const std::map<std::string, PlaceKind>& s_kinds);

struct CovolumeSide {
  CovolumeExpr expr;
  IndexData index;
};

enum class Verdict { equal, not_equal, inconclusive };

std::string to_string(Verdict v);

struct CheckResult {
  Verdict verdict = Verdict::equal;
  std::string detail;  ///< witness for not_equal, reason for inconclusive
};

/// Compare two PGL-type covolumes. Inconclusive with "ram ⊄ S" when a
/// ramified place lies outside S; otherwise equal iff index prefactors,
/// discriminant factors, Tamagawa numbers and the remaining explicit local
/// factors agree exactly (identical tails cancel).
CheckResult covolume_equality_check(const CovolumeSide& left, const CovolumeSide& right, const GlobalSetup& setup);

}  // namespace jlm::adelic
