#include "jlm/localgeom.hpp"

#include <string>

#include "jlm/numtheory.hpp"

namespace jlm::localgeom {

namespace {

[[noreturn]] void violation(const std::string& msg) { throw Error(ErrorKind::spec_violation, msg); }

SymbolicScalar at_q(const LocalAlgebraSpec& spec, const SymbolicScalar& s) {
  return spec.q ? s.substitute(mpq_class(*spec.q)) : s;
}

// Exponent of q in the discriminant of O(D_v): d_v (d_v - 1), scaled by n_v^2.
long disc_q_exponent(const LocalAlgebraSpec& spec) { return spec.d_v * (spec.d_v - 1) * spec.n_v * spec.n_v; }

long disc_field_exponent(const LocalAlgebraSpec& spec) { return spec.n * spec.n * spec.d * spec.d; }

SymbolicScalar mult_volume_symbolic(const LocalAlgebraSpec& spec) {
  SymbolicScalar v = one_minus_q_inverse_pow(1).inverse();
  for (long i = 1; i <= spec.n_v; ++i) v *= one_minus_q_inverse_pow(spec.d_v * i);
  return v;
}

}  // namespace

std::string_view to_string(Normalization n) {
  switch (n) {
    case Normalization::multiplicative: return "multiplicative";
    case Normalization::tamagawa: return "tamagawa";
    case Normalization::mass_one: return "mass_one";
  }
  return "unknown";
}

void LocalAlgebraSpec::validate() const {
  if (n < 1 || d < 1 || n_v < 1 || d_v < 1) violation("n, d, n_v and d_v must all be positive");
  if (n_v * d_v != n * d) {
    violation("n_v * d_v = " + std::to_string(n_v * d_v) + " differs from n * d = " + std::to_string(n * d));
  }
  if (local_disc_norm < 1) violation("local_disc_norm must be a positive integer");
  if (q) {
    if (*q < 2 || !numtheory::prime_power(*q)) violation("q = " + q->get_str() + " is not a prime power >= 2");
  }
}

LocalAlgebraSpec LocalAlgebraSpec::split_form() const {
  LocalAlgebraSpec s = *this;
  s.n_v = n * d;
  s.d_v = 1;
  return s;
}

SymbolicScalar one_minus_q_inverse_pow(long k) { return SymbolicScalar(1L) - SymbolicScalar::q_pow(-k); }

VolumeResult volume_max_compact_mult(const LocalAlgebraSpec& spec) {
  spec.validate();
  return {{at_q(spec, mult_volume_symbolic(spec)), 1}, Normalization::multiplicative};
}

SymbolicScalar disc_norm(const LocalAlgebraSpec& spec) {
  spec.validate();
  mpz_class field_part;
  mpz_pow_ui(field_part.get_mpz_t(), spec.local_disc_norm.get_mpz_t(),
             static_cast<unsigned long>(disc_field_exponent(spec)));
  return at_q(spec, SymbolicScalar(mpq_class(field_part)) * SymbolicScalar::q_pow(disc_q_exponent(spec)));
}

mpz_class disc_norm_integer(const LocalAlgebraSpec& spec) {
  SymbolicScalar v = disc_norm(spec);
  if (!v.is_rational()) throw Error(ErrorKind::invalid_parameter, "disc_norm of a symbolic q is not an integer");
  return v.to_rational().get_num();
}

VolumeResult tamagawa_volume_max_compact(const LocalAlgebraSpec& spec) {
  spec.validate();
  // d(F_v)^{-n^2 d^2 / 2} may be a surd; the q part always has an integral
  // exponent because d_v (d_v - 1) is even.
  SurdScalar field_part = SurdScalar::from_half_power(spec.local_disc_norm, -disc_field_exponent(spec));
  SymbolicScalar q_part = SymbolicScalar::q_pow(-disc_q_exponent(spec) / 2) * mult_volume_symbolic(spec);
  field_part.scalar *= at_q(spec, q_part);
  return {field_part, Normalization::tamagawa};
}

SymbolicScalar volume_quotient(const LocalAlgebraSpec& spec) {
  spec.validate();
  SymbolicScalar v = SymbolicScalar::q_pow(disc_q_exponent(spec) / 2);
  for (long i = 1; i <= spec.total_rank(); ++i) {
    if (i % spec.d_v != 0) v *= one_minus_q_inverse_pow(i);
  }
  return at_q(spec, v);
}

}  // namespace jlm::localgeom
