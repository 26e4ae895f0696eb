#include <gtest/gtest.h>

#include <cmath>

#include "jlm/vndensity.hpp"
#include "support.hpp"

using jlm::Error;
using jlm::ErrorKind;
using namespace jlm::vndensity;
using jlm::plancherel::sl2_discrete_series_degree;
using jlm::symexpr::parse_scalar;
using testing_support::Dec50;
using testing_support::Gen;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::resource;
}

Dec50 reference_density(const Dec50& t, int sign) {
  const Dec50 pi = testing_support::pi50();
  const Dec50 th = boost::multiprecision::tanh(pi * t / 2);
  return t / (8 * pi) * (sign > 0 ? th : 1 / th);
}

}  // namespace

TEST(GammaDimension, Sl2zHolomorphicTable) {
  // pi/3 * (k-1)/(4 pi) = (k-1)/12
  const auto lat = sl2z_lattice();
  for (long k = 2; k <= 30; ++k) {
    const auto dim = gamma_dimension(lat, sl2_discrete_series_degree(k));
    EXPECT_EQ(dim, SymbolicScalar(mpq_class(k - 1, 12))) << k;
  }
  EXPECT_EQ(gamma_dimension(lat, sl2_discrete_series_degree(7)).to_string(), "1/2");
}

TEST(GammaDimension, ZeroCovolumeRejected) {
  LatticeDatum lat{SymbolicScalar(), "zero", jlm::plancherel::kHyperbolicHaar};
  EXPECT_EQ(kind_of([&] { lat.validate(); }), ErrorKind::input);
  EXPECT_EQ(kind_of([&] { gamma_dimension(lat, sl2_discrete_series_degree(3)); }), ErrorKind::input);
  lat.covolume = parse_scalar("q");
  EXPECT_EQ(kind_of([&] { lat.validate(); }), ErrorKind::input);
}

TEST(GammaDimension, HalfCovolumeTimesGl2Degree) {
  LatticeDatum lat{parse_scalar("1/2"), "half", jlm::plancherel::kTamagawaHaar};
  jlm::plancherel::ArchTemperedParam p = jlm::plancherel::ArchTemperedParam::real(
      {jlm::plancherel::DiscreteSeriesBlock{3, "w"}});
  const auto deg = jlm::plancherel::arch_formal_degree(p);
  EXPECT_EQ(gamma_dimension(lat, deg), parse_scalar("3/(4*pi^2)"));
}

TEST(GammaDimension, HaarMismatchIsNormalizationError) {
  LatticeDatum lat{parse_scalar("1/2"), "half", jlm::plancherel::kTamagawaHaar};
  EXPECT_EQ(kind_of([&] { gamma_dimension(lat, sl2_discrete_series_degree(4)); }), ErrorKind::normalization);
  EXPECT_EQ(kind_of([&] { gamma_density(lat, ps_plancherel_density(1)); }), ErrorKind::normalization);
}

TEST(GammaDimension, AdditiveAndScalesWithCovolume) {
  Gen g(3);
  for (int i = 0; i < 100; ++i) {
    const long k1 = g.integer(2, 40), k2 = g.integer(2, 40);
    mpq_class c(g.integer(1, 50), g.integer(1, 50));
    LatticeDatum lat{SymbolicScalar(c) * SymbolicScalar::pi_pow(g.integer(-1, 2)), "L",
                     jlm::plancherel::kHyperbolicHaar};
    const auto d1 = sl2_discrete_series_degree(k1);
    const auto d2 = sl2_discrete_series_degree(k2);
    auto sum = d1;
    sum.value = d1.value + d2.value;
    EXPECT_EQ(gamma_dimension(lat, sum), gamma_dimension(lat, d1) + gamma_dimension(lat, d2));
    const mpq_class scale(g.integer(1, 9), g.integer(1, 9));
    LatticeDatum scaled = lat;
    scaled.covolume *= SymbolicScalar(scale);
    EXPECT_EQ(gamma_dimension(scaled, d1), SymbolicScalar(scale) * gamma_dimension(lat, d1));
  }
}

TEST(PsDensity, MatchesIndependentHyperbolicFunctions) {
  for (int sign : {1, -1}) {
    for (const char* ts : {"1/10", "1/2", "1", "2", "7/3", "10"}) {
      const mpq_class t(ts);
      const auto v = ps_density_value(t, sign, 40);
      const Dec50 ref = reference_density(testing_support::to_dec(t), sign);
      EXPECT_LT(testing_support::rel_diff(testing_support::to_dec(v.value), ref), 1e-35) << ts;
      EXPECT_NEAR(ps_density(t.get_d(), sign), static_cast<double>(ref), 1e-15);
    }
  }
  // (2 / (8 pi)) tanh(pi) = 0.07928...
  EXPECT_NEAR(ps_density(2.0, 1), 0.0792808, 5e-8);
}

TEST(PsDensity, DomainAndSign) {
  EXPECT_EQ(kind_of([] { ps_density(0.0, 1); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([] { ps_density(-1.0, -1); }), ErrorKind::domain);
  EXPECT_EQ(kind_of([] { ps_plancherel_density(0); }), ErrorKind::invalid_parameter);
  EXPECT_EQ(ps_plancherel_density(1).to_string(), "1/8·pi^-1·t*tanh(pi*t/2)");
}

TEST(PsDensity, GammaDensityIsCovolumeTimesDensity) {
  const auto gd = gamma_density(sl2z_lattice(), ps_plancherel_density(1));
  EXPECT_EQ(gd.coefficient, parse_scalar("1/24"));
  EXPECT_EQ(gd.kernel, DensityKernel::t_tanh_half_pi);
  for (const char* ts : {"1/3", "2", "5"}) {
    const mpq_class t(ts);
    const Dec50 ref = testing_support::pi50() / 3 * reference_density(testing_support::to_dec(t), 1);
    EXPECT_LT(testing_support::rel_diff(testing_support::to_dec(gd.at(t, 40).value), ref), 1e-35);
  }
}

TEST(DensityPreservation, Examples) {
  const DensitySide a{sl2z_lattice(), ps_plancherel_density(1)};
  EXPECT_EQ(density_preservation_check(a, a).verdict, Verdict::equal);

  DensitySide b = a;
  b.lattice.covolume *= SymbolicScalar(2L);
  auto r = density_preservation_check(a, b);
  EXPECT_EQ(r.verdict, Verdict::not_equal);
  EXPECT_EQ(r.detail, "covolume");

  b = a;
  b.local_density.coefficient *= SymbolicScalar(mpq_class(1, 2));
  r = density_preservation_check(a, b);
  EXPECT_EQ(r.verdict, Verdict::not_equal);
  EXPECT_EQ(r.detail, "density");

  b = a;
  b.local_density = ps_plancherel_density(-1);
  EXPECT_EQ(kind_of([&] { density_preservation_check(a, b); }), ErrorKind::input);
  b = a;
  b.local_density.reference_measure = "dt/2";
  EXPECT_EQ(kind_of([&] { density_preservation_check(a, b); }), ErrorKind::input);
}

namespace {

TransferCase quaternion_case(bool ram_in_s) {
  using namespace jlm::adelic;
  TransferCase c;
  c.setup.places = {{"2", 2, std::nullopt}, {"3", 3, std::nullopt}};
  c.setup.ram_set = {"r1", "2"};
  c.setup.S = ram_in_s ? std::set<std::string>{"r1", "2"} : std::set<std::string>{"r1"};
  CovolumeSide side;
  side.expr.half_exponent = 3;
  side.expr.tamagawa_number = 2;
  side.expr.finite_factors["3"] = {parse_scalar("1 - q^-2"), 3};
  if (!ram_in_s) side.expr.finite_factors["2"] = {parse_scalar("1 - q^-2"), 2};
  side.expr.tail = TailSpec{TailRule::one_minus_q_pow(-2), 1e-6, 100000, {}};
  c.left = side;
  c.right = side;
  if (ram_in_s) {
    jlm::localgeom::LocalAlgebraSpec d;
    d.q = 2;
    d.n = 1;
    d.d = 2;
    d.n_v = 1;
    d.d_v = 2;
    c.finite_places.push_back({"2", d});
  }
  c.archimedean.push_back(jlm::plancherel::ArchTemperedParam::real({jlm::plancherel::DiscreteSeriesBlock{4, "w"}}));
  return c;
}

}  // namespace

TEST(DensityPreservation, TransferCaseComposesCovolumeAndLocalChecks) {
  EXPECT_EQ(density_preservation_check(quaternion_case(true)).verdict, Verdict::equal);

  auto c = quaternion_case(true);
  c.right.expr.tamagawa_number = 1;
  const auto r = density_preservation_check(c);
  EXPECT_EQ(r.verdict, Verdict::not_equal);
  EXPECT_EQ(r.detail, "covolume: tamagawa number");

  EXPECT_EQ(density_preservation_check(quaternion_case(false)).verdict, Verdict::inconclusive);

  c = quaternion_case(true);
  c.archimedean = {jlm::plancherel::ArchTemperedParam::real(
      {jlm::plancherel::CharacterBlock{1, 0.3, "x"}, jlm::plancherel::CharacterBlock{-1, 0.1, "y"}})};
  EXPECT_EQ(kind_of([&] { density_preservation_check(c); }), ErrorKind::input);
}
