#pragma once

// Brute-force ground truth. Finite commutative rings are materialized as
// addition and multiplication tables and matrix groups over them are counted
// directly, without the closed forms used elsewhere in the library.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "jlm/localgeom.hpp"

namespace jlm::oracle {

inline constexpr long kMaxRingSize = 256;
inline constexpr long kDefaultAbelianCap = 200;

enum class RingKind { prime_field, prime_power_field, chain_ring };

/// How a chain ring of residue degree 1 is built. Rings with f > 1 are always
/// F_{p^f}[x]/(x^m).
enum class Realization { integers_mod, truncated_polynomial };

struct FiniteRingSpec {
  RingKind kind = RingKind::prime_field;
  long p = 2;
  long f = 1;
  long m = 1;  ///< length of the chain
  Realization realization = Realization::integers_mod;

  static FiniteRingSpec prime_field(long p) { return {RingKind::prime_field, p, 1, 1}; }
  static FiniteRingSpec prime_power_field(long p, long f) { return {RingKind::prime_power_field, p, f, 1}; }
  static FiniteRingSpec chain_ring(long p, long f, long m, Realization r = Realization::integers_mod) {
    return {RingKind::chain_ring, p, f, m, r};
  }

  /// Throws invalid_parameter for a composite p or nonpositive f, m, and
  /// resource when the ring would exceed kMaxRingSize elements.
  void validate() const;
  long size() const;
  std::string to_string() const;
};

/// Tabulated commutative ring on {0, .., size-1}; 0 and 1 are the identities.
class FiniteRing {
 public:
  explicit FiniteRing(const FiniteRingSpec& spec);

  int size() const noexcept { return n_; }
  int add(int a, int b) const { return add_[a * n_ + b]; }
  int mul(int a, int b) const { return mul_[a * n_ + b]; }
  int neg(int a) const { return neg_[a]; }
  int sub(int a, int b) const { return add(a, neg(b)); }
  bool is_unit(int a) const { return unit_[a] != 0; }
  int unit_count() const;
  /// Generate R as an additive group.
  const std::vector<int>& additive_generators() const noexcept { return add_gens_; }
  /// Generate R^x as a group.
  const std::vector<int>& unit_generators() const noexcept { return unit_gens_; }

 private:
  int n_ = 0;
  std::vector<std::uint16_t> add_, mul_, neg_;
  std::vector<std::uint8_t> unit_;
  std::vector<int> add_gens_, unit_gens_;
};

/// prod_{i=0}^{n-1} (q^n - q^i).
mpz_class order_gl_finite(long n, const mpz_class& q);

/// q^{f n^2 (m-1)} * prod_{i<n} (q^{fn} - q^{fi}) with q = p.
mpz_class chain_ring_gl_closed_form(long n, const FiniteRingSpec& ring);

/// Number of invertible n x n matrices (n <= 3) over the ring, counted by
/// enumerating rows against the unit-determinant condition.
mpz_class count_gl_by_enumeration(long n, const FiniteRingSpec& ring);

/// Same count by visiting every matrix. Throws resource above 2^26 matrices.
mpz_class count_gl_exhaustive(long n, const FiniteRingSpec& ring);

struct OracleVerdict {
  bool equal = false;
  mpq_class formula;
  mpq_class oracle;
  mpz_class count;
  FiniteRingSpec ring;
};

/// Compare volume_max_compact_mult(spec) with
/// (1 - 1/q)^{-1} |GL(n_v, R)| / |R|^{n_v^2}, R the chain ring of length m
/// with residue field F_{q^{d_v}}.
OracleVerdict volume_formula_oracle_check(const localgeom::LocalAlgebraSpec& spec, long m,
                                          Realization r = Realization::integers_mod);

/// [A : nA] for A = prod Z/orders[j], by listing nA.
mpz_class abelian_index_oracle(const std::vector<long>& orders, long n, long cap = kDefaultAbelianCap);

/// n * [U : U^n] for U = (Z/p^k)^x; equals [Q_p^x : (Q_p^x)^n] once k
/// exceeds v_p(n) + 1 (+ 1 more for p = 2).
mpz_class padic_power_index_oracle(long p, long n, long k);

}  // namespace jlm::oracle
