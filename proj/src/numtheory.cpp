#include "jlm/numtheory.hpp"

namespace jlm::numtheory {

std::optional<PrimePower> prime_power(const mpz_class& n) {
  if (n < 2) return std::nullopt;
  const unsigned long max_k = mpz_sizeinbase(n.get_mpz_t(), 2);
  // Largest k first so that the root is the prime itself.
  for (unsigned long k = max_k; k >= 1; --k) {
    mpz_class root;
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) == 0) continue;
    if (mpz_probab_prime_p(root.get_mpz_t(), 40) > 0) return PrimePower{root, k};
  }
  return std::nullopt;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    out.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t m = p * p; m <= limit; m += p) composite[m] = true;
  }
  return out;
}

}  // namespace jlm::numtheory
