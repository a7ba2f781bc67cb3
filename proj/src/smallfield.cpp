#include "loidreau/smallfield.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace loidreau {

// ---------------------------------------------------------------------------
// f2x: bit-packed GF(2)[x]
// ---------------------------------------------------------------------------

namespace f2x {

int deg(const Poly& a) {
  for (size_t w = a.size(); w-- > 0;)
    if (a[w]) return int(w * 64 + 63 - __builtin_clzll(a[w]));
  return -1;
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

bool get(const Poly& a, int i) {
  size_t w = size_t(i) / 64;
  return w < a.size() && ((a[w] >> (i % 64)) & 1u);
}

void set(Poly& a, int i, bool v) {
  size_t w = size_t(i) / 64;
  if (w >= a.size()) a.resize(w + 1, 0);
  if (v)
    a[w] |= uint64_t(1) << (i % 64);
  else
    a[w] &= ~(uint64_t(1) << (i % 64));
}

Poly shifted(const Poly& a, int s) {
  Poly r;
  int d = deg(a);
  if (d < 0) return r;
  r.resize(size_t(d + s) / 64 + 1, 0);
  for (int i = 0; i <= d; ++i)
    if (get(a, i)) set(r, i + s, true);
  return r;
}

void add_inplace(Poly& a, const Poly& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0);
  for (size_t w = 0; w < b.size(); ++w) a[w] ^= b[w];
  trim(a);
}

Poly mul(const Poly& a, const Poly& b) {
  Poly r;
  int da = deg(a), db = deg(b);
  if (da < 0 || db < 0) return r;
  r.resize(size_t(da + db) / 64 + 1, 0);
  for (int i = 0; i <= da; ++i) {
    if (!get(a, i)) continue;
    for (size_t w = 0; w < b.size(); ++w) {
      size_t tw = w + size_t(i) / 64;
      int sh = i % 64;
      r[tw] ^= b[w] << sh;
      if (sh && tw + 1 < r.size()) r[tw + 1] ^= b[w] >> (64 - sh);
    }
  }
  trim(r);
  return r;
}

Poly mod(Poly a, const Poly& f) {
  int df = deg(f);
  if (df < 0) throw std::invalid_argument("f2x::mod: zero modulus");
  for (int d = deg(a); d >= df; d = deg(a)) {
    Poly t = shifted(f, d - df);
    add_inplace(a, t);
  }
  trim(a);
  return a;
}

Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (deg(b) >= 0) {
    a = mod(std::move(a), b);
    std::swap(a, b);
  }
  return a;
}

Poly powmod(const Poly& a, uint64_t e, const Poly& f) {
  Poly result{1};
  Poly base = mod(a, f);
  while (e) {
    if (e & 1) result = mod(mul(result, base), f);
    e >>= 1;
    if (e) base = mod(mul(base, base), f);
  }
  return result;
}

// x^(2^t) mod f by iterated squaring.
static Poly frob_power_x(uint32_t t, const Poly& f) {
  Poly y{2};  // x
  y = mod(std::move(y), f);
  for (uint32_t i = 0; i < t; ++i) y = mod(mul(y, y), f);
  return y;
}

bool irreducible(const Poly& f) {
  int d = deg(f);
  if (d <= 0) return false;
  if (d == 1) return true;
  if (!get(f, 0)) return false;  // divisible by x
  // Rabin: x^(2^d) == x mod f, and x^(2^(d/r)) - x coprime to f for prime r|d.
  Poly x{2};
  Poly t = frob_power_x(uint32_t(d), f);
  add_inplace(t, x);
  if (deg(t) >= 0) return false;
  for (uint32_t r : prime_divisors(uint32_t(d))) {
    Poly u = frob_power_x(uint32_t(d) / r, f);
    add_inplace(u, x);
    Poly g = gcd(u, f);
    if (deg(g) != 0) return false;
  }
  return true;
}

Poly from_indices(const std::vector<uint16_t>& coeffs) {
  Poly r;
  for (size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i]) set(r, int(i), true);
  trim(r);
  return r;
}

std::vector<uint16_t> to_indices(const Poly& a, size_t len) {
  std::vector<uint16_t> r(len, 0);
  for (size_t i = 0; i < len; ++i) r[i] = get(a, int(i)) ? 1 : 0;
  return r;
}

}  // namespace f2x

// ---------------------------------------------------------------------------
// primes
// ---------------------------------------------------------------------------

bool is_prime_u32(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; uint64_t(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<uint32_t> prime_divisors(uint32_t n) {
  std::vector<uint32_t> ps;
  for (uint32_t d = 2; uint64_t(d) * d <= n; ++d) {
    if (n % d == 0) {
      ps.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) ps.push_back(n);
  return ps;
}

// ---------------------------------------------------------------------------
// dense polynomials over F_p (used only while constructing a SmallField,
// before its tables exist); coefficients are plain residues mod p
// ---------------------------------------------------------------------------

namespace {

using PPoly = std::vector<uint16_t>;

int pdeg(const PPoly& a) {
  for (size_t i = a.size(); i-- > 0;)
    if (a[i]) return int(i);
  return -1;
}

void ptrim(PPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PPoly pmul(uint32_t p, const PPoly& a, const PPoly& b) {
  if (a.empty() || b.empty()) return {};
  PPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = uint16_t((r[i + j] + uint32_t(a[i]) * b[j]) % p);
  }
  ptrim(r);
  return r;
}

// a mod f, f monic
PPoly pmod(uint32_t p, PPoly a, const PPoly& f) {
  int df = pdeg(f);
  for (int d = pdeg(a); d >= df; d = pdeg(a)) {
    uint32_t c = a[size_t(d)];
    for (int i = 0; i <= df; ++i) {
      uint32_t t = (uint32_t(f[size_t(i)]) * c) % p;
      uint32_t idx = size_t(d - df + i);
      a[idx] = uint16_t((a[idx] + p - t) % p);
    }
    ptrim(a);
  }
  return a;
}

PPoly pgcd(uint32_t p, PPoly a, PPoly b) {
  ptrim(a);
  ptrim(b);
  while (pdeg(b) >= 0) {
    // make b monic for pmod
    PPoly bm = b;
    uint32_t lc = bm[size_t(pdeg(bm))];
    if (lc != 1) {
      // scale by lc^{-1} mod p (Fermat)
      uint32_t inv = 1, base = lc, e = p - 2;
      while (e) {
        if (e & 1) inv = (inv * base) % p;
        base = (base * base) % p;
        e >>= 1;
      }
      for (auto& c : bm) c = uint16_t((uint32_t(c) * inv) % p);
    }
    a = pmod(p, std::move(a), bm);
    std::swap(a, b);
  }
  return a;
}

PPoly ppowmod(uint32_t p, const PPoly& a, uint64_t e, const PPoly& f) {
  PPoly result{1};
  PPoly base = pmod(p, a, f);
  while (e) {
    if (e & 1) result = pmod(p, pmul(p, result, base), f);
    e >>= 1;
    if (e) base = pmod(p, pmul(p, base, base), f);
  }
  return result;
}

bool pirreducible(uint32_t p, const PPoly& f) {
  int d = pdeg(f);
  if (d <= 0) return false;
  if (d == 1) return true;
  // Rabin over F_p: x^(p^d) == x mod f; gcd(x^(p^(d/r)) - x, f) = 1.
  auto frob_x = [&](uint32_t t) {
    PPoly y{0, 1};
    for (uint32_t i = 0; i < t; ++i) y = ppowmod(p, y, p, f);
    return y;
  };
  PPoly t = frob_x(uint32_t(d));
  // t - x
  if (t.size() < 2) t.resize(2, 0);
  t[1] = uint16_t((t[1] + p - 1) % p);
  ptrim(t);
  if (pdeg(t) >= 0) return false;
  for (uint32_t r : prime_divisors(uint32_t(d))) {
    PPoly u = frob_x(uint32_t(d) / r);
    if (u.size() < 2) u.resize(2, 0);
    u[1] = uint16_t((u[1] + p - 1) % p);
    ptrim(u);
    PPoly g = pgcd(p, u, f);
    if (pdeg(g) != 0) return false;
  }
  return true;
}

PPoly default_base_modulus(uint32_t p, uint32_t e) {
  // smallest integer encoding sum c_i p^i among monic irreducibles of degree e
  uint64_t qe = 1;
  for (uint32_t i = 0; i < e; ++i) qe *= p;
  for (uint64_t low = 0; low < qe; ++low) {
    PPoly f(e + 1, 0);
    uint64_t v = low;
    for (uint32_t i = 0; i < e; ++i) {
      f[i] = uint16_t(v % p);
      v /= p;
    }
    f[e] = 1;
    if (pirreducible(p, f)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");  // unreachable
}

}  // namespace

// ---------------------------------------------------------------------------
// SmallField
// ---------------------------------------------------------------------------

SmallField::SmallField(uint32_t p, uint32_t e, std::vector<uint16_t> base_modulus)
    : p_(p), e_(e) {
  if (!is_prime_u32(p)) throw std::invalid_argument("SmallField: p is not prime");
  if (e < 1) throw std::invalid_argument("SmallField: e must be >= 1");
  uint64_t q = 1;
  for (uint32_t i = 0; i < e; ++i) {
    q *= p;
    if (q > 65536) throw std::invalid_argument("SmallField: q = p^e exceeds 2^16");
  }
  q_ = uint32_t(q);

  if (e_ == 1) {
    modulus_ = {0, 1};  // y - 0 placeholder; unused
  } else if (base_modulus.empty()) {
    modulus_ = default_base_modulus(p_, e_);
  } else {
    ptrim(base_modulus);
    if (pdeg(base_modulus) != int(e_))
      throw std::invalid_argument("SmallField: base modulus has wrong degree");
    for (auto c : base_modulus)
      if (c >= p_) throw std::invalid_argument("SmallField: base modulus coefficient out of range");
    if (base_modulus[e_] != 1)
      throw std::invalid_argument("SmallField: base modulus must be monic");
    if (!pirreducible(p_, base_modulus))
      throw std::invalid_argument("SmallField: base modulus is reducible");
    modulus_ = std::move(base_modulus);
  }

  // raw arithmetic on indices, used to bootstrap the tables
  auto raw_add = [&](Elem a, Elem b) -> Elem {
    if (p_ == 2) return a ^ b;
    uint32_t r = 0, mul = 1;
    for (uint32_t i = 0; i < e_; ++i) {
      uint32_t da = (a / mul) % p_, db = (b / mul) % p_;
      r += ((da + db) % p_) * mul;
      mul *= p_;
    }
    return Elem(r);
  };
  auto raw_mul = [&](Elem a, Elem b) -> Elem {
    PPoly pa(e_, 0), pb(e_, 0);
    uint32_t va = a, vb = b;
    for (uint32_t i = 0; i < e_; ++i) {
      pa[i] = uint16_t(va % p_);
      va /= p_;
      pb[i] = uint16_t(vb % p_);
      vb /= p_;
    }
    PPoly r = pmod(p_, pmul(p_, pa, pb), modulus_);
    uint32_t out = 0, mul = 1;
    for (size_t i = 0; i < r.size(); ++i) {
      out += uint32_t(r[i]) * mul;
      mul *= p_;
    }
    return Elem(out);
  };

  if (q_ > 2) {
    if (p_ != 2) {
      add_.resize(size_t(q_) * q_);
      neg_.resize(q_);
      for (uint32_t a = 0; a < q_; ++a)
        for (uint32_t b = 0; b < q_; ++b) add_[size_t(a) * q_ + b] = raw_add(Elem(a), Elem(b));
      for (uint32_t a = 0; a < q_; ++a) {
        // -a: digitwise p - d
        uint32_t r = 0, mul = 1, v = a;
        for (uint32_t i = 0; i < e_; ++i) {
          uint32_t d = v % p_;
          v /= p_;
          r += (d ? p_ - d : 0) * mul;
          mul *= p_;
        }
        neg_[a] = Elem(r);
      }
    }
    // find a generator: order of candidate must not divide (q-1)/r
    std::vector<uint32_t> rs = prime_divisors(q_ - 1);
    auto raw_pow = [&](Elem a, uint32_t n) {
      Elem r = 1, base = a;
      while (n) {
        if (n & 1) r = raw_mul(r, base);
        base = raw_mul(base, base);
        n >>= 1;
      }
      return r;
    };
    for (uint32_t c = 2; c < q_; ++c) {
      bool ok = true;
      for (uint32_t r : rs)
        if (raw_pow(Elem(c), (q_ - 1) / r) == 1) {
          ok = false;
          break;
        }
      if (ok) {
        gen_ = Elem(c);
        break;
      }
    }
    if (gen_ == 0) throw std::logic_error("SmallField: no generator found");
    exp_.resize(2 * (q_ - 1));
    log_.assign(q_, 0);
    Elem cur = 1;
    for (uint32_t i = 0; i < q_ - 1; ++i) {
      exp_[i] = cur;
      exp_[i + (q_ - 1)] = cur;
      log_[cur] = uint16_t(i);
      cur = raw_mul(cur, gen_);
    }
    if (cur != 1) throw std::logic_error("SmallField: generator order mismatch");
  } else {
    gen_ = 1;
    exp_ = {1, 1};
    log_.assign(2, 0);
  }
}

SmallField::Elem SmallField::inv(Elem a) const {
  if (a == 0) throw std::domain_error("SmallField: division by zero");
  if (q_ == 2) return 1;
  return exp_[(q_ - 1) - log_[a]];
}

SmallField::Elem SmallField::pow(Elem a, uint64_t n) const {
  if (a == 0) return n == 0 ? one() : zero();
  if (q_ == 2) return 1;
  uint64_t l = (uint64_t(log_[a]) * (n % (q_ - 1))) % (q_ - 1);
  return exp_[l];
}

std::vector<uint16_t> SmallField::digits(Elem a) const {
  std::vector<uint16_t> d(e_, 0);
  uint32_t v = a;
  for (uint32_t i = 0; i < e_; ++i) {
    d[i] = uint16_t(v % p_);
    v /= p_;
  }
  return d;
}

SmallField::Elem SmallField::from_digits(const std::vector<uint16_t>& d) const {
  if (d.size() != e_) throw std::invalid_argument("SmallField: wrong digit count");
  uint32_t v = 0, mul = 1;
  for (uint32_t i = 0; i < e_; ++i) {
    if (d[i] >= p_) throw std::invalid_argument("SmallField: digit out of range");
    v += uint32_t(d[i]) * mul;
    mul *= p_;
  }
  return Elem(v);
}

// ---------------------------------------------------------------------------
// fqx: dense polynomials over a SmallField
// ---------------------------------------------------------------------------

namespace fqx {

int deg(const Poly& a) {
  for (size_t i = a.size(); i-- > 0;)
    if (a[i]) return int(i);
  return -1;
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly add(const SmallField& f, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    uint16_t x = i < a.size() ? a[i] : 0;
    uint16_t y = i < b.size() ? b[i] : 0;
    r[i] = f.add(x, y);
  }
  trim(r);
  return r;
}

Poly mul(const SmallField& f, const Poly& a, const Poly& b) {
  if (deg(a) < 0 || deg(b) < 0) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (b[j]) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

Poly mod(const SmallField& f, Poly a, const Poly& m) {
  int dm = deg(m);
  if (dm < 0) throw std::invalid_argument("fqx::mod: zero modulus");
  uint16_t lcinv = f.inv(m[size_t(dm)]);
  for (int d = deg(a); d >= dm; d = deg(a)) {
    uint16_t c = f.mul(a[size_t(d)], lcinv);
    for (int i = 0; i <= dm; ++i)
      a[size_t(d - dm + i)] = f.sub(a[size_t(d - dm + i)], f.mul(c, m[size_t(i)]));
    trim(a);
  }
  return a;
}

void divmod(const SmallField& f, const Poly& a, const Poly& b, Poly& quot, Poly& rem) {
  int db = deg(b);
  if (db < 0) throw std::invalid_argument("fqx::divmod: zero divisor");
  rem = a;
  trim(rem);
  quot.assign(rem.size(), 0);
  uint16_t lcinv = f.inv(b[size_t(db)]);
  for (int d = deg(rem); d >= db; d = deg(rem)) {
    uint16_t c = f.mul(rem[size_t(d)], lcinv);
    quot[size_t(d - db)] = c;
    for (int i = 0; i <= db; ++i)
      rem[size_t(d - db + i)] = f.sub(rem[size_t(d - db + i)], f.mul(c, b[size_t(i)]));
    trim(rem);
  }
  trim(quot);
}

Poly gcd(const SmallField& f, Poly a, Poly b) {
  trim(a);
  trim(b);
  while (deg(b) >= 0) {
    a = mod(f, std::move(a), b);
    std::swap(a, b);
  }
  // monic normalization for a canonical result
  int d = deg(a);
  if (d >= 0) {
    uint16_t lcinv = f.inv(a[size_t(d)]);
    for (auto& c : a) c = f.mul(c, lcinv);
  }
  return a;
}

Poly powmod(const SmallField& f, const Poly& a, uint64_t e, const Poly& m) {
  Poly result{1};
  Poly base = mod(f, a, m);
  while (e) {
    if (e & 1) result = mod(f, mul(f, result, base), m);
    e >>= 1;
    if (e) base = mod(f, mul(f, base, base), m);
  }
  return result;
}

bool irreducible(const SmallField& f, const Poly& poly) {
  int d = deg(poly);
  if (d <= 0) return false;
  if (d == 1) return true;
  auto frob_x = [&](uint32_t t) {
    Poly y{0, 1};
    for (uint32_t i = 0; i < t; ++i) y = powmod(f, y, f.q(), poly);
    return y;
  };
  auto minus_x = [&](Poly y) {
    if (y.size() < 2) y.resize(2, 0);
    y[1] = f.sub(y[1], 1);
    trim(y);
    return y;
  };
  if (deg(minus_x(frob_x(uint32_t(d)))) >= 0) return false;
  for (uint32_t r : prime_divisors(uint32_t(d))) {
    Poly g = gcd(f, minus_x(frob_x(uint32_t(d) / r)), poly);
    if (deg(g) != 0) return false;
  }
  return true;
}

}  // namespace fqx

// ---------------------------------------------------------------------------
// default top modulus
// ---------------------------------------------------------------------------

std::vector<uint16_t> default_irreducible(const SmallField& fq, uint32_t degree) {
  static std::mutex mu;
  static std::map<std::tuple<uint32_t, uint32_t, uint32_t>, std::vector<uint16_t>> cache;
  std::tuple<uint32_t, uint32_t, uint32_t> key{fq.p(), fq.e(), degree};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  std::vector<uint16_t> result;
  if (degree == 1) {
    result = {0, 1};  // x itself: any monic linear polynomial is irreducible
  } else if (fq.q() == 2) {
    // fast path: enumerate encodings x^degree + low, low ascending
    for (uint64_t low = 0;; ++low) {
      if (low >> std::min<uint32_t>(degree, 63)) throw std::logic_error("modulus search overflow");
      f2x::Poly f;
      for (uint32_t i = 0; i < degree && i < 64; ++i)
        if ((low >> i) & 1) f2x::set(f, int(i), true);
      f2x::set(f, int(degree), true);
      if (f2x::irreducible(f)) {
        result = f2x::to_indices(f, degree + 1);
        break;
      }
    }
  } else {
    const uint32_t q = fq.q();
    // low part enumerated as base-q digit counter
    std::vector<uint16_t> low(degree, 0);
    for (;;) {
      fqx::Poly f(low.begin(), low.end());
      f.resize(degree + 1, 0);
      f[degree] = 1;
      if (fqx::irreducible(fq, f)) {
        result = f;
        break;
      }
      uint32_t i = 0;
      while (i < degree && low[i] == q - 1) low[i++] = 0;
      if (i == degree) throw std::logic_error("no irreducible polynomial of requested degree");
      ++low[i];
    }
  }

  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, result);
  return result;
}

}  // namespace loidreau
