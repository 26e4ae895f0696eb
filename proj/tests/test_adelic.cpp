#include <gtest/gtest.h>

#include "jlm/adelic.hpp"
#include "jlm/localgeom.hpp"
#include "jlm/oracle.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>

using jlm::Error;
using jlm::ErrorKind;
using namespace jlm::adelic;
using jlm::symexpr::parse_scalar;
using testing_support::Dec50;
using testing_support::Gen;

namespace {

Dec50 zeta2() { return testing_support::pi50() * testing_support::pi50() / 6; }

double abs_err(const NumericValue& v, const Dec50& ref) {
  return static_cast<double>(boost::multiprecision::abs(testing_support::to_dec(v.value) - ref));
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::resource;
}

GlobalSetup rationals(std::vector<long> primes, std::set<std::string> ram, std::set<std::string> s) {
  GlobalSetup g;
  for (long p : primes) g.places.push_back({std::to_string(p), p, std::nullopt});
  g.ram_set = std::move(ram);
  g.S = std::move(s);
  return g;
}

}  // namespace

TEST(RestrictedProduct, FiniteProductIsExact) {
  RestrictedProductSpec spec;
  spec.S_factors = {{"v1", 2}, {"v2", mpq_class(3, 4)}};
  const auto v = restricted_product_measure(spec);
  EXPECT_TRUE(v.exact);
  EXPECT_EQ(v.value, mpq_class(3, 2));
  EXPECT_EQ(v.error_bound, 0.0);
}

TEST(RestrictedProduct, ZetaTwoWithinTolerance) {
  RestrictedProductSpec spec;
  spec.tail = TailRule::one_minus_q_pow(-2, true);
  const auto v = restricted_product_measure(spec);
  EXPECT_FALSE(v.exact);
  EXPECT_LE(v.error_bound, 1e-6);
  EXPECT_LE(abs_err(v, zeta2()), v.error_bound);
}

TEST(RestrictedProduct, ZetaThreeCertified) {
  RestrictedProductSpec spec;
  spec.tail = TailRule::one_minus_q_pow(-3, true);
  spec.tolerance = 2e-7;
  const auto v = restricted_product_measure(spec);
  const Dec50 zeta3("1.2020569031595942853997381615114499907649862923405");
  EXPECT_LE(abs_err(v, zeta3), v.error_bound);
}

TEST(RestrictedProduct, HarmonicTailDiverges) {
  RestrictedProductSpec spec;
  spec.tail = TailRule::one_minus_q_pow(-1, true);
  EXPECT_EQ(kind_of([&] { restricted_product_measure(spec); }), ErrorKind::divergence);
}

TEST(RestrictedProduct, UnreachableToleranceCarriesBestValue) {
  RestrictedProductSpec spec;
  spec.tail = TailRule::one_minus_q_pow(-2, true);
  spec.prime_cap = 1000;
  try {
    restricted_product_measure(spec);
    ADD_FAILURE();
  } catch (const TruncationError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::truncation);
    EXPECT_EQ(e.reached_bound(), 1000u);
    EXPECT_GT(e.best().error_bound, 1e-6);
    EXPECT_LE(abs_err(e.best(), zeta2()), e.best().error_bound);
  }
}

TEST(RestrictedProduct, ErrorBoundDominatesDoubling) {
  Gen g(5);
  const TailRule rules[] = {TailRule::one_minus_q_pow(-2, true), TailRule::one_minus_q_pow(-2),
                            TailRule::one_minus_q_pow(-3, true) * TailRule::one_minus_q_pow(-2)};
  for (int i = 0; i < 30; ++i) {
    const auto& rule = rules[i % 3];
    const auto b = static_cast<std::uint32_t>(g.integer(10, 20000));
    const auto lo = truncated_tail(rule, b);
    const auto hi = truncated_tail(rule, 2 * b);
    const double observed = std::fabs(mpq_class(hi.partial.value - lo.partial.value).get_d());
    const double bound = std::fabs(lo.partial.to_double()) * std::expm1(lo.log_tail_bound) + lo.partial.error_bound +
                         hi.partial.error_bound;
    EXPECT_LE(observed, bound) << "bound " << b;
    if (i % 3 == 0) EXPECT_GE(hi.partial.value, lo.partial.value);  // log-factors are nonnegative
  }
}

TEST(TailRule, AlgebraAndExactValues) {
  const auto r = TailRule::one_minus_q_pow(-2, true);
  EXPECT_TRUE((r * r.inverse()).is_one());
  EXPECT_EQ(r.at(2), mpq_class(4, 3));
  EXPECT_EQ(r.to_string(), "(1 - q^-2)^-1");
  EXPECT_EQ(TailRule::one().to_string(), "1");
  EXPECT_EQ(kind_of([] { TailRule::one_minus_q_pow(-1).log_constant(); }), ErrorKind::divergence);
}

TEST(Covolume, ExactWithoutTail) {
  CovolumeExpr e;
  e.tamagawa_number = 1;
  e.finite_factors["2"] = {parse_scalar("1 - q^-2"), 2};
  const auto v = covolume_S_arithmetic(e);
  ASSERT_TRUE(v.exact);
  EXPECT_EQ(v.exact->scalar.to_rational(), mpq_class(4, 3));
  EXPECT_TRUE(v.numeric.exact);
}

TEST(Covolume, DiscriminantHalfPowerAndTamagawa) {
  CovolumeExpr e;
  e.disc_base = 4;
  e.half_exponent = 1;
  e.tamagawa_number = 2;
  const auto v = covolume_S_arithmetic(e);
  ASSERT_TRUE(v.exact);
  EXPECT_FALSE(v.exact->has_surd());
  EXPECT_EQ(v.exact->scalar.to_rational(), 4);
}

TEST(Covolume, ZetaTwoTail) {
  CovolumeExpr e;
  e.tail = TailSpec{TailRule::one_minus_q_pow(-2), 1e-6, kDefaultPrimeCap, {}};
  const auto v = covolume_S_arithmetic(e);
  EXPECT_FALSE(v.exact);
  EXPECT_LE(abs_err(v.numeric, zeta2()), v.numeric.error_bound);
  EXPECT_LE(v.numeric.error_bound, 1e-6);
}

TEST(Covolume, ExplicitPlaceIsExcludedFromTail) {
  // Factor at 2 given explicitly and equal to the tail value: result is still zeta(2).
  CovolumeExpr e;
  e.finite_factors["2"] = {parse_scalar("1 - q^-2"), 2};
  e.tail = TailSpec{TailRule::one_minus_q_pow(-2), 1e-6, kDefaultPrimeCap, {}};
  const auto v = covolume_S_arithmetic(e);
  EXPECT_LE(abs_err(v.numeric, zeta2()), v.numeric.error_bound);
}

TEST(Covolume, SymbolicFactorNeedsQ) {
  CovolumeExpr e;
  e.finite_factors["v"] = {parse_scalar("q - 1"), std::nullopt};
  EXPECT_EQ(kind_of([&] { covolume_S_arithmetic(e); }), ErrorKind::input);
  e.finite_factors["v"] = {parse_scalar("-1"), std::nullopt};
  EXPECT_EQ(kind_of([&] { covolume_S_arithmetic(e); }), ErrorKind::input);
}

TEST(PowerIndex, AbelianExamples) {
  EXPECT_EQ(abelian_power_index(1, {}, 2), 2);
  EXPECT_EQ(abelian_power_index(0, {6}, 3), 3);
  EXPECT_EQ(abelian_power_index(2, {6}, 4), 32);
  EXPECT_EQ(kind_of([] { abelian_power_index(1, {}, 0); }), ErrorKind::invalid_parameter);
}

TEST(PowerIndex, AbelianAgainstBruteForce) {
  // Free part Z^r is modelled by (Z/n^2)^r, which has the same n-th power index.
  Gen g(8);
  for (int i = 0; i < 40; ++i) {
    const long n = g.integer(1, 6);
    const long rank = g.integer(0, 1);
    std::vector<long> tors;
    for (long j = g.integer(0, 2); j > 0; --j) tors.push_back(g.integer(1, 12));
    std::vector<long> orders = tors;
    for (long r = 0; r < rank; ++r) orders.push_back(n * n);
    long total = 1;
    for (long o : orders) total *= o;
    if (total > 2000) continue;
    EXPECT_EQ(abelian_power_index(rank, tors, n), jlm::oracle::abelian_index_oracle(orders, n, 2000));
  }
}

TEST(PowerIndex, LocalKinds) {
  EXPECT_EQ(local_power_index(RealPlaceKind{}, 2), 2);
  EXPECT_EQ(local_power_index(RealPlaceKind{}, 3), 1);
  EXPECT_EQ(local_power_index(ComplexPlaceKind{}, 5), 1);
  EXPECT_EQ(local_roots_of_unity(ComplexPlaceKind{}, 5), 5);
  // Q_5, n = 2: |mu_2| = 2, |2|_5 = 1.
  const PadicPlaceKind q5{5, 5, 2, 1};
  EXPECT_EQ(local_power_index(q5, 2), 4);
  EXPECT_EQ(local_power_index(q5, 2), jlm::oracle::padic_power_index_oracle(5, 2, 3));
  // Q_3, n = 3: mu_3(Q_3) trivial, |3|_3^{-1} = 3.
  EXPECT_EQ(local_power_index(PadicPlaceKind{3, 3, 1, 3}, 3), jlm::oracle::padic_power_index_oracle(3, 3, 4));
}

TEST(PowerIndex, FromSetup) {
  auto g = rationals({5}, {}, {"r1", "5"});
  const auto d = index_data_from_setup(g, 2, {{"r1", RealPlaceKind{}}, {"5", PadicPlaceKind{5, 5, 2, 1}}});
  EXPECT_EQ(d.fs_index, 8);
  EXPECT_EQ(d.os_index, 4);  // {±1} x Z
  EXPECT_EQ(d.mu_fs_order, 4);
  EXPECT_EQ(d.mu_os_order, 2);
  EXPECT_EQ(d.prefactor(), 1);
  EXPECT_EQ(kind_of([&] { index_data_from_setup(g, 2, {{"r1", RealPlaceKind{}}}); }), ErrorKind::input);
}

namespace {

// Quaternion-type pair over Q. The left side writes the split factor
// 1 - q^-2 at each listed place outside S by hand; the right side takes the
// hyperspecial Tamagawa volume of the split form from the local module.
std::pair<CovolumeSide, CovolumeSide> pair_for(const GlobalSetup& g, Gen& rng) {
  CovolumeSide left;
  left.expr.half_exponent = 3;
  left.expr.tamagawa_number = mpq_class(rng.integer(1, 4), rng.integer(1, 3));
  left.expr.tail = TailSpec{TailRule::one_minus_q_pow(-2), 1e-5, kDefaultPrimeCap, {}};
  left.index = {mpz_class(rng.integer(1, 8)), mpz_class(rng.integer(1, 8)), 2, 2};
  CovolumeSide right = left;
  for (const auto& v : g.places) {
    if (g.S.contains(v.name)) continue;
    left.expr.finite_factors[v.name] = {parse_scalar("1 - q^-2"), v.q};
    jlm::localgeom::LocalAlgebraSpec split;
    split.n = 2;
    split.n_v = 2;
    split.q = v.q;
    right.expr.finite_factors[v.name] = {jlm::localgeom::tamagawa_volume_max_compact(split).value.scalar, v.q};
  }
  return {left, right};
}

}  // namespace

TEST(CovolumeCheck, Examples) {
  Gen rng(1);
  auto g = rationals({2, 3}, {"r1", "2"}, {"r1", "2"});
  auto [l, r] = pair_for(g, rng);
  EXPECT_EQ(covolume_equality_check(l, r, g).verdict, Verdict::equal);

  r.expr.tamagawa_number *= 2;
  auto res = covolume_equality_check(l, r, g);
  EXPECT_EQ(res.verdict, Verdict::not_equal);
  EXPECT_EQ(res.detail, "tamagawa number");

  g.S = {"r1"};
  std::tie(l, r) = pair_for(g, rng);
  res = covolume_equality_check(l, r, g);
  EXPECT_EQ(res.verdict, Verdict::inconclusive);
  EXPECT_EQ(res.detail, "ram ⊄ S");
}

TEST(CovolumeCheck, FactorWithoutQLeavesItsPrimeInTheTail) {
  Gen rng(3);
  auto g = rationals({2, 3}, {"r1", "2"}, {"r1", "2"});
  auto [l, r] = pair_for(g, rng);
  r.expr.finite_factors["3"].q.reset();
  const auto res = covolume_equality_check(l, r, g);
  EXPECT_EQ(res.verdict, Verdict::inconclusive);
  EXPECT_EQ(res.detail, "tail rules differ");
}

TEST(CovolumeCheck, FactorInsideSIsInputError) {
  Gen rng(2);
  auto g = rationals({2}, {}, {"r1", "2"});
  auto [l, r] = pair_for(g, rng);
  l.expr.finite_factors["2"] = {parse_scalar("1"), 2};
  EXPECT_EQ(kind_of([&] { covolume_equality_check(l, r, g); }), ErrorKind::input);
}

TEST(CovolumeCheck, PropertyOverSynthesizedSetups) {
  Gen rng(77);
  const std::vector<long> primes = {2, 3, 5, 7, 11, 13};
  int with_ram_in_s = 0;
  for (int i = 0; i < 40; ++i) {
    std::vector<long> chosen;
    for (long p : primes) {
      if (rng.integer(0, 1)) chosen.push_back(p);
    }
    std::set<std::string> ram, s = {"r1"};
    for (long p : chosen) {
      if (rng.integer(0, 2) == 0) ram.insert(std::to_string(p));
      if (rng.integer(0, 1)) s.insert(std::to_string(p));
    }
    if (rng.integer(0, 1)) ram.insert("r1");
    if (rng.integer(0, 2) > 0) s.insert(ram.begin(), ram.end());
    const auto g = rationals(chosen, ram, s);
    auto [l, r] = pair_for(g, rng);
    const auto res = covolume_equality_check(l, r, g);
    if (g.ram_in_S()) {
      ++with_ram_in_s;
      EXPECT_EQ(res.verdict, Verdict::equal) << i;
      // Covolumes themselves agree numerically within the certified bounds.
      const auto lv = covolume_S_arithmetic(l.expr).numeric;
      const auto rv = covolume_S_arithmetic(r.expr).numeric;
      EXPECT_LE(std::fabs(mpq_class(lv.value - rv.value).get_d()), lv.error_bound + rv.error_bound);
      // Any single perturbation is detected.
      auto r2 = r;
      r2.index.fs_index += 1;
      EXPECT_EQ(covolume_equality_check(l, r2, g).verdict, Verdict::not_equal);
      if (!r.expr.finite_factors.empty()) {
        auto r3 = r;
        r3.expr.finite_factors.begin()->second.value = parse_scalar("1 - q^-3");
        const auto bad = covolume_equality_check(l, r3, g);
        EXPECT_EQ(bad.verdict, Verdict::not_equal);
        EXPECT_EQ(bad.detail, "place " + r.expr.finite_factors.begin()->first);
      }
    } else {
      EXPECT_EQ(res.verdict, Verdict::inconclusive) << i;
    }
  }
  EXPECT_GE(with_ram_in_s, 20);
}
