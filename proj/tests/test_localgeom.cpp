#include <gtest/gtest.h>

#include "jlm/localgeom.hpp"
#include "jlm/oracle.hpp"
#include "support.hpp"

using jlm::Error;
using jlm::ErrorKind;
using namespace jlm::localgeom;
using jlm::symexpr::parse_scalar;

namespace {

LocalAlgebraSpec make(long n, long d, long dv, std::optional<long> q = std::nullopt, long disc = 1) {
  LocalAlgebraSpec s;
  s.n = n;
  s.d = d;
  s.d_v = dv;
  s.n_v = n * d / dv;
  if (q) s.q = *q;
  s.local_disc_norm = disc;
  return s;
}

std::vector<LocalAlgebraSpec> sweep(long max_nd) {
  std::vector<LocalAlgebraSpec> out;
  for (long nd = 1; nd <= max_nd; ++nd) {
    for (long d = 1; d <= nd; ++d) {
      if (nd % d) continue;
      for (long dv = 1; dv <= nd; ++dv) {
        if (nd % dv == 0) out.push_back(make(nd / d, d, dv));
      }
    }
  }
  return out;
}

}  // namespace

TEST(Spec, Validation) {
  EXPECT_NO_THROW(make(1, 2, 2).validate());
  LocalAlgebraSpec bad = make(1, 2, 2);
  bad.n_v = 2;
  EXPECT_THROW(bad.validate(), Error);
  bad = make(2, 1, 1, 6);
  try {
    bad.validate();
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::spec_violation);
  }
  bad = make(1, 1, 1, 2, 0);
  EXPECT_THROW(bad.validate(), Error);
  EXPECT_THROW(volume_max_compact_mult(bad), Error);
}

TEST(Volume, SplitGl2OverF2) {
  // |GL(2,F_2)| / |M(2,F_2)| * (1 - 1/2)^{-1}, counted rather than quoted.
  const mpz_class order = jlm::oracle::count_gl_exhaustive(2, jlm::oracle::FiniteRingSpec::prime_field(2));
  mpq_class expected = mpq_class(order, 16) * 2;
  expected.canonicalize();
  const auto v = volume_max_compact_mult(make(2, 1, 1, 2));
  EXPECT_EQ(v.value.scalar.to_rational(), expected);
  EXPECT_EQ(expected, mpq_class(3, 4));
  EXPECT_EQ(v.normalization, Normalization::multiplicative);
}

TEST(Volume, SymbolicGl1IsOne) {
  EXPECT_TRUE(volume_max_compact_mult(make(1, 1, 1)).value.scalar.is_one());
  EXPECT_TRUE(tamagawa_volume_max_compact(make(1, 1, 1, 7)).value.scalar.is_one());
}

TEST(Volume, SymbolicSplitGl2) {
  const auto v = tamagawa_volume_max_compact(make(1, 2, 1));
  EXPECT_EQ(v.value.scalar, parse_scalar("1 - q^-2"));
  EXPECT_FALSE(v.value.has_surd());
  EXPECT_EQ(v.normalization, Normalization::tamagawa);
}

TEST(Volume, DivisionAlgebraOfIndexTwo) {
  // (1-1/q)^{-1}(1-q^{-2}) = (q+1)/q
  EXPECT_EQ(volume_max_compact_mult(make(1, 2, 2)).value.scalar, parse_scalar("(q+1)/q"));
}

TEST(Volume, PositiveForEveryQ) {
  for (const auto& base : sweep(8)) {
    for (long q : {2, 3, 4, 5, 7, 8, 9, 49}) {
      auto s = base;
      s.q = q;
      for (long disc : {1, 3, 4}) {
        s.local_disc_norm = disc;
        const auto v = jlm::symexpr::evaluate(tamagawa_volume_max_compact(s).value, 20);
        EXPECT_GT(v.value, 0);
      }
      EXPECT_GT(volume_max_compact_mult(s).value.scalar.to_rational(), 0);
    }
  }
}

TEST(DiscNorm, Examples) {
  EXPECT_EQ(disc_norm_integer(make(1, 1, 1, 5)), 1);
  EXPECT_EQ(disc_norm_integer(make(1, 2, 2, 3)), 9);      // q^{2*1*1}
  EXPECT_EQ(disc_norm_integer(make(1, 2, 2, 3, 2)), 144);  // 2^4 * 3^2
  EXPECT_EQ(disc_norm(make(1, 2, 2)), parse_scalar("q^2"));
  EXPECT_THROW(disc_norm_integer(make(1, 2, 2)), Error);
}

TEST(Tamagawa, OddExponentKeepsSurd) {
  const auto v = tamagawa_volume_max_compact(make(1, 1, 1, 3, 5));
  EXPECT_TRUE(v.value.has_surd());
  EXPECT_EQ(v.value.radicand, 5);
  EXPECT_EQ(tamagawa_volume_max_compact(make(1, 1, 1, 3, 4)).value.scalar.to_rational(), mpq_class(1, 2));
}

TEST(VolumeQuotient, MatchesTamagawaVolumesExhaustively) {
  for (const auto& s : sweep(12)) {
    for (long disc : {1, 2}) {
      auto t = s;
      t.local_disc_norm = disc;
      auto inner = tamagawa_volume_max_compact(t).value;
      inner.scalar *= volume_quotient(t);
      EXPECT_EQ(inner, tamagawa_volume_max_compact(t.split_form()).value)
          << "n=" << t.n << " d=" << t.d << " d_v=" << t.d_v;
    }
  }
}

TEST(VolumeQuotient, NumericQMatchesSubstitution) {
  for (const auto& s : sweep(6)) {
    auto t = s;
    t.q = 5;
    EXPECT_EQ(volume_quotient(t), volume_quotient(s).substitute(5));
  }
}
