#include "obstrukt/bounds.hpp"

namespace obstrukt {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<long> primes_up_to(long n) {
  std::vector<long> out;
  for (long p = 2; p <= n; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

std::optional<PrimePower> prime_power(long k) {
  if (k < 2) return std::nullopt;
  long p = 2;
  while (k % p != 0) ++p;
  int n = 0;
  while (k % p == 0) {
    k /= p;
    ++n;
  }
  if (k != 1) return std::nullopt;
  return PrimePower{p, n};
}

int ord_p(const BigInt& n, long p) {
  if (n == 0) throw std::domain_error("ord_p of zero");
  BigInt m = abs(n);
  int e = 0;
  while (m % p == 0) {
    m /= p;
    ++e;
  }
  return e;
}

BigInt binom_gcd(long k) {
  if (k < 2) throw std::domain_error("binom_gcd needs k >= 2");
  BigInt g = 0, c = 1;
  for (long i = 1; i < k; ++i) {
    c = c * (k - i + 1) / i;
    g = gcd(g, c);
  }
  return g;
}

Annihilators liebermann_annihilators(int t, int r, const std::vector<long>& m_values) {
  Annihilators a;
  if (r < 2) throw std::domain_error("liebermann_annihilators needs r >= 2");
  if (t < r) {
    a.note = "d_r^{s,t} = 0 for t < r";
    return a;
  }
  for (long m : m_values) {
    BigInt mm = m, x, y;
    mpz_pow_ui(x.get_mpz_t(), mm.get_mpz_t(), static_cast<unsigned long>(t - r + 1));
    mpz_pow_ui(y.get_mpz_t(), mm.get_mpz_t(), static_cast<unsigned long>(r - 1));
    a.values.push_back(x * (y - 1));
  }
  return a;
}

std::vector<long> relevant_primes(int r) {
  std::vector<long> out;
  for (long p : primes_up_to(r))
    if ((r - 1) % (p - 1) == 0) out.push_back(p);
  return out;
}

int lambda_exponent(int t, int r, long p) {
  int eps = p == 2 ? 2 : 1;
  return std::min(t - r + 1, eps + ord_p(BigInt((r - 1) / (p - 1)), p));
}

int xi_exponent(int t, int r, long p) { return r % 2 ? lambda_exponent(t, r, p) : 1; }

BBound b_bound(int t, int r) {
  if (t < r || r < 2) throw std::domain_error("b_bound needs t >= r >= 2");
  BBound b;
  if (r % 2 == 0) {
    b.value = 2;
    return b;
  }
  b.value = 1;
  for (long p : relevant_primes(r)) {
    int e = lambda_exponent(t, r, p);
    b.terms.push_back({p, e});
    BigInt pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    b.value *= pe;
  }
  return b;
}

ChiLedger chi_product(int r, int t, const std::map<int, bool>& v_flags) {
  if (t < r || r < 2) throw std::domain_error("chi_product needs t >= r >= 2");
  for (const auto& [k, flag] : v_flags)
    if (k < r || k > t) throw std::out_of_range("flag outside k = r..t");
  ChiLedger led;
  led.r = r;
  led.t = t;
  for (int k = r; k <= t; ++k) {
    auto it = v_flags.find(k);
    bool nz = it != v_flags.end() && it->second;
    BigInt chi = 1;
    if (nz) {
      auto pp = prime_power(k);
      if (pp && (r - 1) % (pp->p - 1) == 0 && ord_p(led.product, pp->p) < xi_exponent(t, r, pp->p))
        chi = pp->p;
    }
    led.product *= chi;
    if (nz && led.product == 1)
      throw InconsistentFlags("v_r^" + std::to_string(k) + " flagged nonzero but the chi product up to k is 1");
    led.entries.push_back({k, nz, chi});
  }
  return led;
}

}  // namespace obstrukt
