#include "jlm/adelic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bigfloat.hpp"
#include "jlm/numtheory.hpp"

namespace jlm::adelic {

namespace {

using detail::BigFloat;

constexpr mpfr_prec_t kTailPrecision = 192;
// pi(x) < 1.25506 x / ln x for x > 1; partial summation then gives
// sum_{p > P} p^{-2} <= 2 * 1.25506 / (P ln P).
constexpr double kPrimeTailConstant = 2.0 * 1.25506;
constexpr std::uint32_t kFirstCheckpoint = 1024;

[[noreturn]] void input_error(const std::string& msg) { throw Error(ErrorKind::input, msg); }

double log_tail_bound(double c, std::uint32_t bound) {
  if (c == 0.0) return 0.0;
  const double p = static_cast<double>(bound);
  return c * kPrimeTailConstant / (p * std::log(p));
}

// Multiplies `acc` by the tail factor at p; returns the number of roundings.
int apply_factor(BigFloat& acc, const TailRule& rule, std::uint32_t p) {
  int ops = 0;
  for (const auto& t : rule.terms()) {
    BigFloat x(static_cast<double>(p), kTailPrecision);
    x = x.pow_si(t.exponent);
    BigFloat f(1.0, kTailPrecision);
    f -= x;
    if (t.invert) {
      acc /= f;
    } else {
      acc *= f;
    }
    ops += 3;
  }
  return ops;
}

// Walks the primes once, checking the certified error at doubling
// checkpoints. `scale` multiplies the product (or divides by it when
// `invert_tail`) and carries its own absolute error.
NumericValue certified_product(const TailRule& rule, const std::set<std::uint32_t>& excluded, std::uint32_t cap,
                               double tolerance, const NumericValue& scale, bool invert_tail) {
  if (!(tolerance > 0.0)) input_error("tolerance must be positive");
  const double c = rule.log_constant();
  if (cap < 2) input_error("prime cap must be at least 2");
  const auto primes = numtheory::primes_up_to(cap);
  BigFloat prod(1.0, kTailPrecision);
  long ops = 0;
  std::size_t idx = 0;
  std::uint32_t checkpoint = std::min(cap, kFirstCheckpoint);
  NumericValue last;
  for (;;) {
    while (idx < primes.size() && primes[idx] <= checkpoint) {
      if (!excluded.contains(primes[idx])) ops += apply_factor(prod, rule, primes[idx]);
      ++idx;
    }
    const double delta = log_tail_bound(c, checkpoint);
    BigFloat value(scale.value, kTailPrecision);
    if (invert_tail) {
      value /= prod;
    } else {
      value *= prod;
    }
    ops += 2;
    const double mag = value.abs().to_double_up();
    const double rounding = mag * std::ldexp(static_cast<double>(ops + 4), 1 - static_cast<int>(kTailPrecision));
    const double tail_part = mag * std::expm1(delta);
    const double factor = invert_tail ? 1.0 / prod.to_double() : prod.to_double();
    const double scale_part = scale.error_bound * std::exp(delta) * factor;
    double err = (tail_part + rounding + scale_part) * (1.0 + 1e-12);
    err = std::max(err, std::numeric_limits<double>::denorm_min());
    last = NumericValue{value.to_mpq(), err, false};
    if (err <= tolerance) return last;
    if (checkpoint == cap) break;
    checkpoint = checkpoint > cap / 2 ? cap : checkpoint * 2;
  }
  throw TruncationError("tolerance " + std::to_string(tolerance) + " not reached below prime cap " +
                            std::to_string(cap) + "; best bound " + std::to_string(last.error_bound),
                        last, cap);
}

std::optional<std::uint32_t> rational_prime_of(const mpz_class& q) {
  auto pp = numtheory::prime_power(q);
  if (!pp || !pp->prime.fits_uint_p()) return std::nullopt;
  return static_cast<std::uint32_t>(pp->prime.get_ui());
}

}  // namespace

// ---------------------------------------------------------------------------
// GlobalSetup

std::vector<std::string> GlobalSetup::archimedean_places() const {
  std::vector<std::string> out;
  for (long i = 1; i <= r1; ++i) out.push_back("r" + std::to_string(i));
  for (long i = 1; i <= r2; ++i) out.push_back("c" + std::to_string(i));
  return out;
}

const FinitePlace* GlobalSetup::find(const std::string& name) const {
  for (const auto& p : places) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

bool GlobalSetup::is_archimedean(const std::string& name) const {
  const auto arch = archimedean_places();
  return std::find(arch.begin(), arch.end(), name) != arch.end();
}

void GlobalSetup::validate() const {
  if (abs_discriminant < 1) input_error("abs_discriminant must be positive");
  if (r1 < 0 || r2 < 0 || r1 + r2 < 1) input_error("signature needs r1, r2 >= 0 and r1 + r2 >= 1");
  if (torsion_order < 1) input_error("torsion_order must be positive");
  if (r1 > 0 && torsion_order % 2 != 0) input_error("a field with a real place has an even number of roots of unity");
  std::set<std::string> names;
  for (const auto& p : places) {
    if (p.name.empty()) input_error("finite place with an empty name");
    if (is_archimedean(p.name)) input_error("finite place '" + p.name + "' clashes with an archimedean name");
    if (!names.insert(p.name).second) input_error("duplicate place '" + p.name + "'");
    if (!numtheory::prime_power(p.q)) input_error("place '" + p.name + "' has q = " + p.q.get_str() + ", not a prime power");
    if (p.local_disc_norm && *p.local_disc_norm < 1) input_error("place '" + p.name + "' has a nonpositive local_disc_norm");
  }
  for (const auto& a : archimedean_places()) {
    if (!S.contains(a)) input_error("S must contain the archimedean place '" + a + "'");
  }
  for (const auto& v : S) {
    if (!names.contains(v) && !is_archimedean(v)) input_error("S names unknown place '" + v + "'");
  }
  for (const auto& v : ram_set) {
    if (!names.contains(v) && !is_archimedean(v)) input_error("ram_set names unknown place '" + v + "'");
  }
}

bool GlobalSetup::ram_in_S() const {
  return std::all_of(ram_set.begin(), ram_set.end(), [&](const std::string& v) { return S.contains(v); });
}

// ---------------------------------------------------------------------------
// TailRule

TailRule::TailRule(std::vector<TailTerm> terms) {
  std::sort(terms.begin(), terms.end());
  // Cancel (1 - q^e) against (1 - q^e)^{-1}.
  for (const auto& t : terms) {
    if (t.exponent == 0) input_error("tail term (1 - q^0) vanishes");
    auto opposite = std::find(terms_.begin(), terms_.end(), TailTerm{t.exponent, !t.invert});
    if (opposite != terms_.end()) {
      terms_.erase(opposite);
    } else {
      terms_.push_back(t);
    }
  }
  std::sort(terms_.begin(), terms_.end());
}

TailRule& TailRule::operator*=(const TailRule& rhs) {
  std::vector<TailTerm> all = terms_;
  all.insert(all.end(), rhs.terms_.begin(), rhs.terms_.end());
  *this = TailRule(std::move(all));
  return *this;
}

TailRule TailRule::inverse() const {
  std::vector<TailTerm> inv = terms_;
  for (auto& t : inv) t.invert = !t.invert;
  return TailRule(std::move(inv));
}

double TailRule::log_constant() const {
  double c = 0.0;
  for (const auto& t : terms_) {
    if (t.exponent > -2) {
      throw Error(ErrorKind::divergence, "tail factor (1 - q^" + std::to_string(t.exponent) +
                                             ") does not satisfy |f - 1| <= C q^-2; the product diverges");
    }
    // |log(1 - x)| <= x / (1 - x) with x = q^e; q^2 x / (1 - x) peaks at q = 2.
    const double x = std::ldexp(1.0, static_cast<int>(t.exponent));
    c += 4.0 * x / (1.0 - x);
  }
  return c * (1.0 + 1e-12);
}

mpq_class TailRule::at(const mpz_class& q) const {
  mpq_class v = 1;
  for (const auto& t : terms_) {
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(std::labs(t.exponent)));
    mpq_class x = t.exponent < 0 ? mpq_class(1, pw) : mpq_class(pw);
    x.canonicalize();
    mpq_class f = 1 - x;
    if (t.invert) {
      v /= f;
    } else {
      v *= f;
    }
  }
  return v;
}

std::string TailRule::to_string() const {
  if (terms_.empty()) return "1";
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += "*";
    out += "(1 - q^" + std::to_string(t.exponent) + ")";
    if (t.invert) out += "^-1";
  }
  return out;
}

// ---------------------------------------------------------------------------

TailEstimate truncated_tail(const TailRule& rule, std::uint32_t bound, const std::set<std::uint32_t>& excluded) {
  if (bound < 2) input_error("truncation bound must be at least 2");
  const double c = rule.log_constant();
  BigFloat prod(1.0, kTailPrecision);
  long ops = 0;
  for (std::uint32_t p : numtheory::primes_up_to(bound)) {
    if (!excluded.contains(p)) ops += apply_factor(prod, rule, p);
  }
  const double mag = prod.abs().to_double_up();
  double rounding = mag * std::ldexp(static_cast<double>(ops + 2), 1 - static_cast<int>(kTailPrecision));
  return {NumericValue{prod.to_mpq(), rounding, rule.is_one()}, log_tail_bound(c, bound), bound};
}

NumericValue restricted_product_measure(const RestrictedProductSpec& spec) {
  mpq_class finite = 1;
  for (const auto& [place, f] : spec.S_factors) {
    if (sgn(f) < 0) input_error("S factor at '" + place + "' is negative");
    finite *= f;
  }
  if (spec.tail.is_one()) return NumericValue::exact_value(finite);
  spec.tail.log_constant();  // divergence check before any work
  return certified_product(spec.tail, spec.excluded_primes, spec.prime_cap, spec.tolerance,
                           NumericValue::exact_value(finite), false);
}

// ---------------------------------------------------------------------------
// Covolumes

SymbolicScalar LocalFactor::resolved() const {
  if (value.is_q_free()) return value;
  if (!q) input_error("local factor " + value.to_string() + " depends on q but no q is given");
  return value.substitute(mpq_class(*q));
}

void CovolumeExpr::validate() const {
  if (disc_base < 1) input_error("discriminant base must be positive");
  if (sgn(tamagawa_number) <= 0) input_error("Tamagawa number must be positive");
  for (const auto& [place, f] : finite_factors) {
    SymbolicScalar v = f.resolved();
    if (sgn(symexpr::evaluate(v, 20).value) <= 0) input_error("local factor at '" + place + "' is not positive");
  }
}

namespace {

// Primes whose factor is not taken from the tail: the declared exclusions
// plus the residue characteristic of every explicit factor that carries q.
std::set<std::uint32_t> tail_exclusions(const CovolumeExpr& expr) {
  std::set<std::uint32_t> out;
  if (expr.tail) out = expr.tail->excluded_primes;
  for (const auto& [place, f] : expr.finite_factors) {
    if (f.q) {
      if (auto p = rational_prime_of(*f.q)) out.insert(*p);
    }
  }
  return out;
}

}  // namespace

CovolumeValue covolume_S_arithmetic(const CovolumeExpr& expr) {
  expr.validate();
  SurdScalar exact = expr.disc_factor();
  exact.scalar *= SymbolicScalar(expr.tamagawa_number);
  for (const auto& [place, f] : expr.finite_factors) exact.scalar /= f.resolved();
  if (!expr.tail || expr.tail->rule.is_one()) {
    return {exact, symexpr::evaluate(exact, 30)};
  }
  const auto excluded = tail_exclusions(expr);
  NumericValue scale = symexpr::evaluate(exact, 40);
  return {std::nullopt, certified_product(expr.tail->rule, excluded, expr.tail->prime_cap, expr.tail->tolerance,
                                          scale, true)};
}

// ---------------------------------------------------------------------------
// Power indices

mpz_class abelian_power_index(long rank, const std::vector<long>& torsion_orders, long n) {
  if (n < 1) throw Error(ErrorKind::invalid_parameter, "n must be positive");
  if (rank < 0) throw Error(ErrorKind::invalid_parameter, "rank must be nonnegative");
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(rank));
  for (long w : torsion_orders) {
    if (w < 1) throw Error(ErrorKind::invalid_parameter, "cyclic orders must be positive");
    out *= std::gcd(n, w);
  }
  return out;
}

long local_roots_of_unity(const PlaceKind& kind, long n) {
  if (n < 1) throw Error(ErrorKind::invalid_parameter, "n must be positive");
  if (std::holds_alternative<RealPlaceKind>(kind)) return n % 2 == 0 ? 2 : 1;
  if (std::holds_alternative<ComplexPlaceKind>(kind)) return n;
  return std::get<PadicPlaceKind>(kind).mu_n_order;
}

mpz_class local_power_index(const PlaceKind& kind, long n) {
  if (n < 1) throw Error(ErrorKind::invalid_parameter, "n must be positive");
  if (std::holds_alternative<RealPlaceKind>(kind)) return n % 2 == 0 ? 2 : 1;
  if (std::holds_alternative<ComplexPlaceKind>(kind)) return 1;
  const auto& p = std::get<PadicPlaceKind>(kind);
  if (p.mu_n_order < 1 || p.val_n < 1) throw Error(ErrorKind::invalid_parameter, "p-adic index data must be positive");
  return mpz_class(n) * p.mu_n_order * p.val_n;
}

void IndexData::validate() const {
  if (fs_index < 1 || os_index < 1 || mu_fs_order < 1 || mu_os_order < 1) {
    input_error("index data entries must be positive");
  }
  if (!mpz_divisible_p(mu_fs_order.get_mpz_t(), mu_os_order.get_mpz_t())) {
    input_error("mu_n(O_S) order " + mu_os_order.get_str() + " does not divide mu_n(F_S) order " + mu_fs_order.get_str());
  }
}

mpq_class IndexData::prefactor() const {
  mpq_class r(fs_index * mu_os_order, os_index * mu_fs_order);
  r.canonicalize();
  return r;
}

IndexData index_data_from_setup(const GlobalSetup& setup, long n, const std::map<std::string, PlaceKind>& s_kinds) {
  setup.validate();
  IndexData out;
  for (const auto& v : setup.S) {
    auto it = s_kinds.find(v);
    if (it == s_kinds.end()) input_error("no local kind given for place '" + v + "' of S");
    out.fs_index *= local_power_index(it->second, n);
    out.mu_fs_order *= local_roots_of_unity(it->second, n);
  }
  const long w = std::gcd(n, setup.torsion_order);
  out.os_index = abelian_power_index(static_cast<long>(setup.S.size()) - 1, {setup.torsion_order}, n);
  out.mu_os_order = w;
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::equal: return "equal";
    case Verdict::not_equal: return "not_equal";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

CheckResult covolume_equality_check(const CovolumeSide& left, const CovolumeSide& right, const GlobalSetup& setup) {
  setup.validate();
  left.index.validate();
  right.index.validate();
  left.expr.validate();
  right.expr.validate();
  for (const auto* side : {&left, &right}) {
    for (const auto& [place, f] : side->expr.finite_factors) {
      if (setup.S.contains(place)) input_error("local factor given at '" + place + "', which lies in S");
    }
  }
  if (!setup.ram_in_S()) return {Verdict::inconclusive, "ram ⊄ S"};

  if (left.index.prefactor() != right.index.prefactor()) return {Verdict::not_equal, "index prefactor"};
  if (!(left.expr.disc_factor() == right.expr.disc_factor())) return {Verdict::not_equal, "discriminant factor"};
  if (left.expr.tamagawa_number != right.expr.tamagawa_number) return {Verdict::not_equal, "tamagawa number"};

  const TailRule one;
  const TailRule& lt = left.expr.tail ? left.expr.tail->rule : one;
  const TailRule& rt = right.expr.tail ? right.expr.tail->rule : one;
  if (!(lt == rt) || (!lt.is_one() && tail_exclusions(left.expr) != tail_exclusions(right.expr))) {
    return {Verdict::inconclusive, "tail rules differ"};
  }

  // Places outside S are unramified for both groups, so their factors should
  // match one by one; report the first place where they do not.
  std::set<std::string> places;
  for (const auto& [p, f] : left.expr.finite_factors) places.insert(p);
  for (const auto& [p, f] : right.expr.finite_factors) places.insert(p);
  SymbolicScalar lp(1L);
  SymbolicScalar rp(1L);
  std::string first_mismatch;
  for (const auto& p : places) {
    auto li = left.expr.finite_factors.find(p);
    auto ri = right.expr.finite_factors.find(p);
    SymbolicScalar lv = li != left.expr.finite_factors.end() ? li->second.resolved() : SymbolicScalar(1L);
    SymbolicScalar rv = ri != right.expr.finite_factors.end() ? ri->second.resolved() : SymbolicScalar(1L);
    lp *= lv;
    rp *= rv;
    if (first_mismatch.empty() && !(lv == rv)) first_mismatch = p;
  }
  if (!(lp == rp)) return {Verdict::not_equal, "place " + first_mismatch};
  return {Verdict::equal, ""};
}

}  // namespace jlm::adelic
