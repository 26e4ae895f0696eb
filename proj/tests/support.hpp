#pragma once

// Shared generators and high-precision reference values for the test suites.
// References come from Boost.Multiprecision, which shares no code with the
// MPFR path inside the library.

#include <gmpxx.h>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include <random>
#include <string>

#include "jlm/symexpr.hpp"

namespace testing_support {

using Dec50 = boost::multiprecision::cpp_dec_float_50;

inline Dec50 pi50() { return boost::math::constants::pi<Dec50>(); }

inline Dec50 to_dec(const mpq_class& q) {
  return Dec50(q.get_num().get_str()) / Dec50(q.get_den().get_str());
}

inline double rel_diff(const Dec50& a, const Dec50& b) {
  using boost::multiprecision::abs;
  return static_cast<double>(abs(a - b) / abs(b));
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  mpq_class rational(long range = 9) {
    long den = integer(1, range);
    return mpq_class(integer(-range, range), den);
  }

  jlm::symexpr::Polynomial polynomial(long max_degree) {
    std::vector<mpq_class> c(static_cast<std::size_t>(integer(0, max_degree) + 1));
    for (auto& x : c) x = rational();
    return jlm::symexpr::Polynomial(std::move(c));
  }

  /// Random rational function in q with a fixed pi power.
  jlm::symexpr::SymbolicScalar scalar(long max_degree, long pi_exp = 0) {
    jlm::symexpr::Polynomial den;
    do {
      den = polynomial(max_degree);
    } while (den.is_zero());
    return jlm::symexpr::canonicalize({polynomial(max_degree), den, pi_exp});
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing_support
