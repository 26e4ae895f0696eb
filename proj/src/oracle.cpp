#include "jlm/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>

#include "jlm/numtheory.hpp"

namespace jlm::oracle {

namespace {

[[noreturn]] void bad_param(const std::string& msg) { throw Error(ErrorKind::invalid_parameter, msg); }

bool is_small_prime(long p) {
  if (p < 2) return false;
  for (long i = 2; i * i <= p; ++i) {
    if (p % i == 0) return false;
  }
  return true;
}

long ipow(long b, long e) {
  long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Polynomials over F_p as coefficient vectors, ascending.
using Poly = std::vector<int>;

Poly poly_mod(Poly a, const Poly& g, int p) {
  const std::size_t dg = g.size() - 1;  // g monic
  while (a.size() > dg) {
    const int lead = a.back();
    const std::size_t shift = a.size() - 1 - dg;
    if (lead != 0) {
      for (std::size_t i = 0; i <= dg; ++i) a[shift + i] = ((a[shift + i] - lead * g[i]) % p + p) % p;
    }
    a.pop_back();
  }
  return a;
}

Poly poly_from_index(long idx, long len, int p) {
  Poly c(static_cast<std::size_t>(len));
  for (auto& x : c) {
    x = static_cast<int>(idx % p);
    idx /= p;
  }
  return c;
}

// Monic irreducible polynomial of degree f over F_p, found by trial division.
Poly irreducible(int p, long f) {
  for (long idx = 0; idx < ipow(p, f); ++idx) {
    Poly g = poly_from_index(idx, f, p);
    g.push_back(1);
    bool reducible = false;
    for (long k = 1; 2 * k <= f && !reducible; ++k) {
      for (long j = 0; j < ipow(p, k) && !reducible; ++j) {
        Poly h = poly_from_index(j, k, p);
        h.push_back(1);
        Poly r = poly_mod(g, h, p);
        reducible = std::all_of(r.begin(), r.end(), [](int c) { return c == 0; });
      }
    }
    if (!reducible) return g;
  }
  bad_param("no irreducible polynomial found");
}

struct Tables {
  int n = 0;
  std::vector<int> add, mul;
  std::vector<int> add_gens;
};

Tables integers_mod(long modulus) {
  Tables t;
  t.n = static_cast<int>(modulus);
  t.add.resize(t.n * t.n);
  t.mul.resize(t.n * t.n);
  for (int a = 0; a < t.n; ++a) {
    for (int b = 0; b < t.n; ++b) {
      t.add[a * t.n + b] = (a + b) % t.n;
      t.mul[a * t.n + b] = static_cast<int>((static_cast<long>(a) * b) % t.n);
    }
  }
  t.add_gens = {1};
  return t;
}

Tables field(int p, long f) {
  const Poly g = irreducible(p, f);
  Tables t;
  t.n = static_cast<int>(ipow(p, f));
  t.add.resize(t.n * t.n);
  t.mul.resize(t.n * t.n);
  auto encode = [&](const Poly& c) {
    long v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * p + c[i];
    return static_cast<int>(v);
  };
  for (int a = 0; a < t.n; ++a) {
    const Poly pa = poly_from_index(a, f, p);
    for (int b = 0; b < t.n; ++b) {
      const Poly pb = poly_from_index(b, f, p);
      Poly s(f), prod(2 * f - 1, 0);
      for (long i = 0; i < f; ++i) s[i] = (pa[i] + pb[i]) % p;
      for (long i = 0; i < f; ++i) {
        for (long j = 0; j < f; ++j) prod[i + j] = (prod[i + j] + pa[i] * pb[j]) % p;
      }
      t.add[a * t.n + b] = encode(s);
      t.mul[a * t.n + b] = encode(poly_mod(prod, g, p));
    }
  }
  for (long i = 0; i < f; ++i) t.add_gens.push_back(static_cast<int>(ipow(p, i)));
  return t;
}

// K[x]/(x^m) for a tabulated field K; element = sum digit_j * |K|^j.
Tables truncated(const Tables& k, long m) {
  const int Q = k.n;
  Tables t;
  t.n = static_cast<int>(ipow(Q, m));
  t.add.resize(t.n * t.n);
  t.mul.resize(t.n * t.n);
  std::vector<int> da(m), db(m), dr(m);
  auto digits = [&](int v, std::vector<int>& d) {
    for (long j = 0; j < m; ++j) {
      d[j] = v % Q;
      v /= Q;
    }
  };
  auto encode = [&](const std::vector<int>& d) {
    int v = 0;
    for (long j = m; j-- > 0;) v = v * Q + d[j];
    return v;
  };
  for (int a = 0; a < t.n; ++a) {
    digits(a, da);
    for (int b = 0; b < t.n; ++b) {
      digits(b, db);
      for (long j = 0; j < m; ++j) dr[j] = k.add[da[j] * Q + db[j]];
      t.add[a * t.n + b] = encode(dr);
      std::fill(dr.begin(), dr.end(), 0);
      for (long i = 0; i < m; ++i) {
        for (long j = 0; i + j < m; ++j) dr[i + j] = k.add[dr[i + j] * Q + k.mul[da[i] * Q + db[j]]];
      }
      t.mul[a * t.n + b] = encode(dr);
    }
  }
  for (long j = 0; j < m; ++j) {
    for (int g : k.add_gens) t.add_gens.push_back(g * static_cast<int>(ipow(Q, j)));
  }
  return t;
}

}  // namespace

void FiniteRingSpec::validate() const {
  if (!is_small_prime(p)) bad_param("ring characteristic " + std::to_string(p) + " is not prime");
  if (f < 1 || m < 1) bad_param("ring needs f >= 1 and m >= 1");
  if (kind == RingKind::prime_field && (f != 1 || m != 1)) bad_param("prime field has f = m = 1");
  if (kind == RingKind::prime_power_field && m != 1) bad_param("field has length 1");
  long size = 1;
  for (long i = 0; i < f * m; ++i) {
    size *= p;
    if (size > kMaxRingSize) {
      throw Error(ErrorKind::resource, "ring " + to_string() + " exceeds " + std::to_string(kMaxRingSize) + " elements");
    }
  }
}

long FiniteRingSpec::size() const {
  validate();
  return ipow(p, f * m);
}

std::string FiniteRingSpec::to_string() const {
  switch (kind) {
    case RingKind::prime_field: return "F_" + std::to_string(p);
    case RingKind::prime_power_field: return "F_" + std::to_string(ipow(p, f));
    case RingKind::chain_ring: break;
  }
  if (f == 1 && realization == Realization::integers_mod) return "Z/" + std::to_string(ipow(p, m));
  return "F_" + std::to_string(ipow(p, f)) + "[x]/(x^" + std::to_string(m) + ")";
}

FiniteRing::FiniteRing(const FiniteRingSpec& spec) {
  spec.validate();
  Tables t;
  const int p = static_cast<int>(spec.p);
  if (spec.f == 1 && (spec.m == 1 || spec.realization == Realization::integers_mod)) {
    t = integers_mod(ipow(p, spec.m));
  } else {
    Tables k = spec.f == 1 ? integers_mod(p) : field(p, spec.f);
    t = spec.m == 1 ? std::move(k) : truncated(k, spec.m);
  }
  n_ = t.n;
  add_.assign(t.add.begin(), t.add.end());
  mul_.assign(t.mul.begin(), t.mul.end());
  neg_.resize(n_);
  unit_.assign(n_, 0);
  for (int a = 0; a < n_; ++a) {
    for (int b = 0; b < n_; ++b) {
      if (add(a, b) == 0) neg_[a] = static_cast<std::uint16_t>(b);
      if (mul(a, b) == 1) unit_[a] = 1;
    }
  }
  add_gens_ = t.add_gens;

  // Greedy generating set of the unit group.
  std::vector<std::uint8_t> in_group(n_, 0);
  in_group[1] = 1;
  std::vector<int> members{1};
  for (int u = 0; u < n_; ++u) {
    if (!is_unit(u) || in_group[u]) continue;
    unit_gens_.push_back(u);
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (int g : unit_gens_) {
        const int x = mul(members[i], g);
        if (!in_group[x]) {
          in_group[x] = 1;
          members.push_back(x);
        }
      }
    }
  }
}

int FiniteRing::unit_count() const {
  return static_cast<int>(std::count(unit_.begin(), unit_.end(), 1));
}

mpz_class order_gl_finite(long n, const mpz_class& q) {
  if (n < 1) bad_param("order_gl_finite needs n >= 1");
  if (q < 2) bad_param("order_gl_finite needs q >= 2");
  mpz_class qn, qi = 1, out = 1;
  mpz_pow_ui(qn.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(n));
  for (long i = 0; i < n; ++i) {
    out *= qn - qi;
    qi *= q;
  }
  return out;
}

mpz_class chain_ring_gl_closed_form(long n, const FiniteRingSpec& ring) {
  ring.validate();
  mpz_class residue;
  mpz_ui_pow_ui(residue.get_mpz_t(), static_cast<unsigned long>(ring.p), static_cast<unsigned long>(ring.f));
  mpz_class lift;
  mpz_pow_ui(lift.get_mpz_t(), residue.get_mpz_t(), static_cast<unsigned long>(n * n * (ring.m - 1)));
  return lift * order_gl_finite(n, residue);
}

namespace {

// Orbits of R^n under the elementary, diagonal-unit and swap moves. Both the
// number of rows r with r.c a unit and the number of completions of a first
// row to an invertible matrix are constant on these orbits.
struct Orbits {
  std::vector<std::uint32_t> id;    // vector -> orbit index
  std::vector<std::uint32_t> rep;   // orbit -> representative
  std::vector<std::uint64_t> size;  // orbit -> cardinality
};

Orbits vector_orbits(const FiniteRing& R, int n) {
  const std::uint32_t N = static_cast<std::uint32_t>(R.size());
  std::uint32_t total = 1;
  for (int i = 0; i < n; ++i) total *= N;
  std::vector<std::uint32_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0U);
  std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  std::vector<std::uint32_t> pw(n);
  pw[0] = 1;
  for (int i = 1; i < n; ++i) pw[i] = pw[i - 1] * N;
  std::vector<int> v(n);
  for (std::uint32_t idx = 0; idx < total; ++idx) {
    std::uint32_t t = idx;
    for (int i = 0; i < n; ++i) {
      v[i] = static_cast<int>(t % N);
      t /= N;
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        for (int a : R.additive_generators()) {
          const int nv = R.add(v[i], R.mul(a, v[j]));
          unite(idx, idx + (static_cast<std::uint32_t>(nv) - static_cast<std::uint32_t>(v[i])) * pw[i]);
        }
      }
    }
    for (int u : R.unit_generators()) {
      const int nv = R.mul(u, v[0]);
      unite(idx, idx - static_cast<std::uint32_t>(v[0]) + static_cast<std::uint32_t>(nv));
    }
  }
  Orbits o;
  o.id.resize(total);
  std::vector<std::uint32_t> root_to_orbit(total, UINT32_MAX);
  for (std::uint32_t idx = 0; idx < total; ++idx) {
    const std::uint32_t r = find(idx);
    if (root_to_orbit[r] == UINT32_MAX) {
      root_to_orbit[r] = static_cast<std::uint32_t>(o.rep.size());
      o.rep.push_back(idx);
      o.size.push_back(0);
    }
    o.id[idx] = root_to_orbit[r];
    ++o.size[o.id[idx]];
  }
  return o;
}

std::vector<int> unpack(std::uint32_t idx, int n, int N) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = static_cast<int>(idx % N);
    idx /= N;
  }
  return v;
}

std::uint32_t pack(const std::vector<int>& v, int N) {
  std::uint32_t idx = 0;
  for (std::size_t i = v.size(); i-- > 0;) idx = idx * N + static_cast<std::uint32_t>(v[i]);
  return idx;
}

// #{r in R^n : r.c is a unit}
std::uint64_t unit_dot_count(const FiniteRing& R, const std::vector<int>& c) {
  const int N = R.size();
  const int n = static_cast<int>(c.size());
  std::uint32_t total = 1;
  for (int i = 0; i < n; ++i) total *= N;
  std::uint64_t count = 0;
  for (std::uint32_t idx = 0; idx < total; ++idx) {
    std::uint32_t t = idx;
    int s = 0;
    for (int i = 0; i < n; ++i) {
      s = R.add(s, R.mul(static_cast<int>(t % N), c[i]));
      t /= N;
    }
    count += R.is_unit(s);
  }
  return count;
}

}  // namespace

mpz_class count_gl_by_enumeration(long n, const FiniteRingSpec& spec) {
  if (n < 1 || n > 3) bad_param("count_gl_by_enumeration supports 1 <= n <= 3");
  const FiniteRing R(spec);
  const int N = R.size();
  if (n == 1) return R.unit_count();
  const int dim = static_cast<int>(n);
  const Orbits orb = vector_orbits(R, dim);
  std::vector<std::uint64_t> units_against(orb.rep.size());
  for (std::size_t k = 0; k < orb.rep.size(); ++k) units_against[k] = unit_dot_count(R, unpack(orb.rep[k], dim, N));

  mpz_class count = 0;
  if (n == 2) {
    // det(r1; r2) = r2 . (-r1[1], r1[0])
    for (std::size_t k = 0; k < orb.rep.size(); ++k) {
      const auto r1 = unpack(orb.rep[k], 2, N);
      const std::uint32_t c = pack({R.neg(r1[1]), r1[0]}, N);
      count += mpz_class(static_cast<unsigned long>(orb.size[k])) *
               mpz_class(static_cast<unsigned long>(units_against[orb.id[c]]));
    }
    return count;
  }
  // det(r1; r2; r3) = r3 . (r1 x r2)
  const std::uint32_t total = static_cast<std::uint32_t>(N) * N * N;
  for (std::size_t k = 0; k < orb.rep.size(); ++k) {
    const auto a = unpack(orb.rep[k], 3, N);
    std::uint64_t completions = 0;
    for (std::uint32_t j = 0; j < total; ++j) {
      const auto b = unpack(j, 3, N);
      const std::vector<int> c{R.sub(R.mul(a[1], b[2]), R.mul(a[2], b[1])),
                               R.sub(R.mul(a[2], b[0]), R.mul(a[0], b[2])),
                               R.sub(R.mul(a[0], b[1]), R.mul(a[1], b[0]))};
      completions += units_against[orb.id[pack(c, N)]];
    }
    count += mpz_class(static_cast<unsigned long>(orb.size[k])) * mpz_class(static_cast<unsigned long>(completions));
  }
  return count;
}

mpz_class count_gl_exhaustive(long n, const FiniteRingSpec& spec) {
  if (n < 1 || n > 3) bad_param("count_gl_exhaustive supports 1 <= n <= 3");
  const FiniteRing R(spec);
  const int N = R.size();
  double matrices = 1.0;
  for (long i = 0; i < n * n; ++i) matrices *= N;
  if (matrices > static_cast<double>(1UL << 26)) {
    throw Error(ErrorKind::resource, "exhaustive enumeration over " + spec.to_string() + " exceeds 2^26 matrices");
  }
  const int cells = static_cast<int>(n * n);
  std::vector<int> m(cells, 0);
  std::uint64_t count = 0;
  auto det = [&]() {
    if (n == 1) return m[0];
    if (n == 2) return R.sub(R.mul(m[0], m[3]), R.mul(m[1], m[2]));
    const int c0 = R.sub(R.mul(m[4], m[8]), R.mul(m[5], m[7]));
    const int c1 = R.sub(R.mul(m[3], m[8]), R.mul(m[5], m[6]));
    const int c2 = R.sub(R.mul(m[3], m[7]), R.mul(m[4], m[6]));
    return R.add(R.sub(R.mul(m[0], c0), R.mul(m[1], c1)), R.mul(m[2], c2));
  };
  while (true) {
    count += R.is_unit(det());
    int i = 0;
    while (i < cells && ++m[i] == N) m[i++] = 0;
    if (i == cells) break;
  }
  return mpz_class(static_cast<unsigned long>(count));
}

OracleVerdict volume_formula_oracle_check(const localgeom::LocalAlgebraSpec& spec, long m, Realization r) {
  spec.validate();
  if (!spec.q) bad_param("volume oracle needs a numeric q");
  if (*spec.q > 4 || spec.n_v > 3 || spec.d_v > 2 || m < 1 || m > 2) {
    bad_param("volume oracle supports q <= 4, n_v <= 3, d_v <= 2, 1 <= m <= 2");
  }
  const auto pp = numtheory::prime_power(*spec.q);
  OracleVerdict out;
  out.ring = FiniteRingSpec::chain_ring(pp->prime.get_si(), static_cast<long>(pp->exponent) * spec.d_v, m, r);
  out.count = count_gl_by_enumeration(spec.n_v, out.ring);
  mpz_class ring_power;
  mpz_ui_pow_ui(ring_power.get_mpz_t(), static_cast<unsigned long>(out.ring.size()),
                static_cast<unsigned long>(spec.n_v * spec.n_v));
  const mpq_class q(*spec.q);
  out.oracle = mpq_class(out.count, ring_power) / (1 - 1 / q);
  out.oracle.canonicalize();
  const auto formula = localgeom::volume_max_compact_mult(spec).value;
  out.formula = formula.scalar.to_rational();
  out.equal = !formula.has_surd() && out.formula == out.oracle;
  return out;
}

mpz_class abelian_index_oracle(const std::vector<long>& orders, long n, long cap) {
  if (n < 1) bad_param("power index needs n >= 1");
  long order = 1;
  for (long w : orders) {
    if (w < 1) bad_param("cyclic orders must be positive");
    order *= w;
    if (order > cap) throw Error(ErrorKind::resource, "abelian group order exceeds " + std::to_string(cap));
  }
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(order), 0);
  long image = 0;
  for (long x = 0; x < order; ++x) {
    long t = x, code = 0, scale = 1;
    for (long w : orders) {
      const long c = t % w;
      t /= w;
      code += ((c * n) % w) * scale;
      scale *= w;
    }
    if (!hit[code]) {
      hit[code] = 1;
      ++image;
    }
  }
  return order / image;
}

mpz_class padic_power_index_oracle(long p, long n, long k) {
  if (!is_small_prime(p)) bad_param("p must be prime");
  if (n < 1 || k < 1) bad_param("need n >= 1 and k >= 1");
  long modulus = 1;
  for (long i = 0; i < k; ++i) {
    modulus *= p;
    if (modulus > 1000000) throw Error(ErrorKind::resource, "p^k exceeds 10^6");
  }
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(modulus), 0);
  long units = 0, image = 0;
  for (long x = 1; x < modulus; ++x) {
    if (x % p == 0) continue;
    ++units;
    long y = 1;
    for (long i = 0; i < n; ++i) y = (y * x) % modulus;
    if (!hit[y]) {
      hit[y] = 1;
      ++image;
    }
  }
  return mpz_class(n) * (units / image);
}

}  // namespace jlm::oracle
