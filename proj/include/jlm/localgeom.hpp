#pragma once

// Volumes of maximal-order unit groups of central simple algebras over
// non-archimedean local fields.
//
// A local algebra A_v = M(n_v, D_v) with D_v of index d_v sits inside a global
// shape GL(n, D), D of index d, so that n_v * d_v = n * d. The residue field
// has q elements; q may be a concrete prime power or left as the formal
// variable of SymbolicScalar. The norm of the local discriminant of the base
// field, d(F_v), is supplied as data.

#include <gmpxx.h>

#include <optional>
#include <string_view>

#include "jlm/symexpr.hpp"

namespace jlm::localgeom {

using symexpr::SurdScalar;
using symexpr::SymbolicScalar;

struct LocalAlgebraSpec {
  std::optional<mpz_class> q;  ///< residue cardinality; empty = symbolic
  mpz_class local_disc_norm = 1;
  long n = 1;
  long d = 1;
  long n_v = 1;
  long d_v = 1;

  bool symbolic() const { return !q.has_value(); }
  long total_rank() const { return n * d; }

  /// Throws spec_violation unless n_v*d_v = n*d, all indices are positive,
  /// local_disc_norm >= 1 and a numeric q is a prime power >= 2.
  void validate() const;

  /// Same place, split algebra M(nd, F_v).
  LocalAlgebraSpec split_form() const;

  friend bool operator==(const LocalAlgebraSpec&, const LocalAlgebraSpec&) = default;
};

enum class Normalization { multiplicative, tamagawa, mass_one };

std::string_view to_string(Normalization n);

struct VolumeResult {
  /// Exact value; carries a sqrt(radicand) factor only when d(F_v) enters
  /// with an odd half-exponent and is not a perfect square.
  SurdScalar value;
  Normalization normalization = Normalization::multiplicative;
};

/// (1 - 1/q)^{-1} * prod_{i=1}^{n_v} (1 - q^{-d_v i}); the volume of
/// GL(n_v, O(D_v)) under the multiplicative Haar measure.
VolumeResult volume_max_compact_mult(const LocalAlgebraSpec& spec);

/// Norm of the discriminant of the maximal order:
/// d(F_v)^{n^2 d^2} * q^{d_v (d_v - 1) n_v^2}. Exact; symbolic in q when q is.
SymbolicScalar disc_norm(const LocalAlgebraSpec& spec);

/// disc_norm as an integer; requires a numeric q.
mpz_class disc_norm_integer(const LocalAlgebraSpec& spec);

/// Volume of the maximal compact subgroup under the local Tamagawa measure,
/// disc_norm^{-1/2} times the multiplicative volume.
VolumeResult tamagawa_volume_max_compact(const LocalAlgebraSpec& spec);

/// mu(GL(nd, O_v)) / mu(GL(n_v, O(D_v))) in closed form:
/// q^{d_v (d_v - 1) n_v^2 / 2} * prod_{i <= nd, d_v does not divide i} (1 - q^{-i}).
SymbolicScalar volume_quotient(const LocalAlgebraSpec& spec);

/// 1 - q^{-k} as a scalar in the formal variable q.
SymbolicScalar one_minus_q_inverse_pow(long k);

}  // namespace jlm::localgeom
