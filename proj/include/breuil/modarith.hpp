#pragma once

#include <cstdint>

#include <gmpxx.h>

namespace breuil {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 add_mod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return s >= m ? s - m : s;
}

inline u64 sub_mod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<u128>(a) * b) % m); }

inline u64 neg_mod(u64 a, u64 m) { return a == 0 ? 0 : m - a; }

inline u64 ipow(u64 base, int exp) {
  u64 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

/// Residue of a signed integer in [0, m).
inline u64 residue(long long v, u64 m) {
  long long r = v % static_cast<long long>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<long long>(m) : r);
}

inline u64 residue(const mpz_class& v, u64 m) {
  mpz_class r;
  mpz_class mm(static_cast<unsigned long>(m));
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), mm.get_mpz_t());
  return r.get_ui();
}

/// Inverse of a unit modulo m (m a prime power, a coprime to it).
inline u64 inv_mod(u64 a, u64 m) {
  long long t = 0, new_t = 1;
  long long r = static_cast<long long>(m), new_r = static_cast<long long>(a % m);
  while (new_r != 0) {
    long long q = r / new_r;
    long long tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  return residue(t, m);
}

/// Symmetric representative of a residue: in (-m/2, m/2].
inline long long balanced(u64 a, u64 m) {
  return a > m / 2 ? -static_cast<long long>(m - a) : static_cast<long long>(a);
}

/// p-adic valuation of a residue mod p^prec; returns prec for zero.
inline int valuation(u64 a, u64 p, int prec) {
  if (a == 0) return prec;
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

}  // namespace breuil
