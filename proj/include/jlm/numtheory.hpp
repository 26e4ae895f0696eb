#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

namespace jlm::numtheory {

struct PrimePower {
  mpz_class prime;
  unsigned long exponent = 0;
};

/// p and k with n = p^k, p prime, k >= 1; empty when n is not a prime power.
std::optional<PrimePower> prime_power(const mpz_class& n);

/// All primes <= limit in ascending order (sieve of Eratosthenes).
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

}  // namespace jlm::numtheory
