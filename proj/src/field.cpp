#include "loidreau/field.hpp"

#include <algorithm>
#include <utility>

namespace loidreau {

// ---------------------------------------------------------------------------
// make_field
// ---------------------------------------------------------------------------

FieldDescriptor make_field(uint32_t p, uint32_t e, uint32_t m,
                           std::vector<uint16_t> base_modulus,
                           std::vector<uint16_t> top_modulus) {
  if (!is_prime_u32(p)) throw std::invalid_argument("make_field: p is not prime");
  if (e < 1) throw std::invalid_argument("make_field: e must be >= 1");
  if (m < 1) throw std::invalid_argument("make_field: m must be >= 1");
  SmallField fq(p, e, std::move(base_modulus));

  FieldDescriptor d;
  d.p = p;
  d.e = e;
  d.m = m;
  if (e > 1) d.base_modulus = fq.modulus();

  if (top_modulus.empty()) {
    d.top_modulus = default_irreducible(fq, m);
  } else {
    while (!top_modulus.empty() && top_modulus.back() == 0) top_modulus.pop_back();
    if (top_modulus.size() != size_t(m) + 1)
      throw std::invalid_argument("make_field: top modulus has wrong degree");
    for (auto c : top_modulus)
      if (c >= fq.q()) throw std::invalid_argument("make_field: top modulus coefficient out of range");
    if (top_modulus[m] != 1) throw std::invalid_argument("make_field: top modulus must be monic");
    if (m >= 2) {
      bool irr = fq.q() == 2 ? f2x::irreducible(f2x::from_indices(top_modulus))
                             : fqx::irreducible(fq, top_modulus);
      if (!irr) throw std::invalid_argument("make_field: top modulus is reducible");
    }
    d.top_modulus = std::move(top_modulus);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Gf2m
// ---------------------------------------------------------------------------

Gf2m::Gf2m(const FieldDescriptor& d) : desc_(d), base_(d.p, d.e), m_(d.m) {
  if (d.p != 2 || d.e != 1) throw std::invalid_argument("Gf2m: requires q = 2");
  if (d.m < 1 || d.m > 128) throw std::invalid_argument("Gf2m: requires 1 <= m <= 128");
  if (d.top_modulus.size() != size_t(d.m) + 1 || d.top_modulus[d.m] != 1)
    throw std::invalid_argument("Gf2m: top modulus must be monic of degree m");
  for (auto c : d.top_modulus)
    if (c >= 2) throw std::invalid_argument("Gf2m: top modulus coefficient out of range");
  if (m_ >= 2) {
    if (!f2x::irreducible(f2x::from_indices(d.top_modulus)))
      throw std::invalid_argument("Gf2m: top modulus is reducible");
  }

  tail_[0] = tail_[1] = 0;
  tail_deg_ = -1;
  for (uint32_t i = 0; i < m_; ++i) {
    if (!d.top_modulus[i]) continue;
    if (i < 64)
      tail_[0] |= uint64_t(1) << i;
    else
      tail_[1] |= uint64_t(1) << (i - 64);
    tail_deg_ = int(i);
  }

  if (m_ >= 64) {
    mask0_ = ~uint64_t(0);
    mask1_ = m_ == 128 ? ~uint64_t(0) : (m_ == 64 ? 0 : (uint64_t(1) << (m_ - 64)) - 1);
  } else {
    mask0_ = (uint64_t(1) << m_) - 1;
    mask1_ = 0;
  }

  gen_ = m_ == 1 ? Elem{this, tail_[0], 0} : Elem{this, 2, 0};

  // frobenius matrices: row i of shift s holds (x^i)^(2^s)
  if (m_ > 1) {
    frob_.assign(size_t(m_) * m_, {0, 0});
    for (uint32_t i = 0; i < m_; ++i) {
      Elem xi = i < 64 ? Elem{this, uint64_t(1) << i, 0} : Elem{this, 0, uint64_t(1) << (i - 64)};
      Elem sq = mul(xi, xi);
      frob_[size_t(m_) + i] = {sq.w0, sq.w1};
    }
    for (uint32_t s = 2; s < m_; ++s)
      for (uint32_t i = 0; i < m_; ++i) {
        Elem prev{this, frob_[size_t(s - 1) * m_ + i][0], frob_[size_t(s - 1) * m_ + i][1]};
        Elem next = frobenius(prev, 1);
        frob_[size_t(s) * m_ + i] = {next.w0, next.w1};
      }
  }

  for (uint32_t r : prime_divisors(m_)) subfield_checks_.push_back(m_ / r);
}

void Gf2m::reduce(uint64_t r[4], Elem& out) const {
  auto degree = [](const uint64_t v[4]) -> int {
    for (int w = 3; w >= 0; --w)
      if (v[w]) return w * 64 + 63 - __builtin_clzll(v[w]);
    return -1;
  };
  const unsigned wo = m_ / 64, bo = m_ % 64;
  for (int d = degree(r); d >= int(m_); d = degree(r)) {
    uint64_t h0, h1;
    auto at = [&](unsigned i) -> uint64_t { return i < 4 ? r[i] : 0; };
    if (bo == 0) {
      h0 = at(wo);
      h1 = at(wo + 1);
    } else {
      h0 = (at(wo) >> bo) | (at(wo + 1) << (64 - bo));
      h1 = (at(wo + 1) >> bo) | (at(wo + 2) << (64 - bo));
    }
    r[0] &= mask0_;
    r[1] &= mask1_;
    r[2] = 0;
    r[3] = 0;
    uint64_t prod[4];
    clmul128(h0, h1, tail_[0], tail_[1], prod);
    r[0] ^= prod[0];
    r[1] ^= prod[1];
    r[2] ^= prod[2];
    r[3] ^= prod[3];
  }
  out.w0 = r[0];
  out.w1 = r[1];
}

namespace {

int deg3(const uint64_t w[3]) {
  for (int i = 2; i >= 0; --i)
    if (w[i]) return i * 64 + 63 - __builtin_clzll(w[i]);
  return -1;
}

// dst ^= src << s, within 3 words
void xorshift3(uint64_t dst[3], const uint64_t src[3], int s) {
  int wo = s / 64, bo = s % 64;
  if (bo == 0) {
    for (int i = 2; i >= wo; --i) dst[i] ^= src[i - wo];
  } else {
    for (int i = 2; i >= wo; --i) {
      uint64_t x = src[i - wo] << bo;
      if (i - wo - 1 >= 0) x |= src[i - wo - 1] >> (64 - bo);
      dst[i] ^= x;
    }
  }
}

}  // namespace

Gf2m::Elem Gf2m::inv(const Elem& a) const {
  if (a.is_zero()) throw std::domain_error("Gf2m: division by zero");
  uint64_t bu[3] = {a.w0, a.w1, 0};
  uint64_t bv[3] = {tail_[0], tail_[1], 0};
  uint64_t modulus3[3] = {tail_[0], tail_[1], 0};
  if (m_ < 64) {
    bv[0] ^= uint64_t(1) << m_;
    modulus3[0] ^= uint64_t(1) << m_;
  } else if (m_ < 128) {
    bv[1] ^= uint64_t(1) << (m_ - 64);
    modulus3[1] ^= uint64_t(1) << (m_ - 64);
  } else {
    bv[2] ^= 1;
    modulus3[2] ^= 1;
  }
  uint64_t b1[3] = {1, 0, 0}, b2[3] = {0, 0, 0};
  uint64_t *u = bu, *v = bv, *g1 = b1, *g2 = b2;
  int du = deg3(u), dv = deg3(v);
  while (du > 0) {
    if (du < dv) {
      std::swap(u, v);
      std::swap(du, dv);
      std::swap(g1, g2);
    }
    int j = du - dv;
    xorshift3(u, v, j);
    xorshift3(g1, g2, j);
    du = deg3(u);
  }
  if (du != 0) throw std::logic_error("Gf2m: inverse failed (not a unit)");
  for (int dg = deg3(g1); dg >= int(m_); dg = deg3(g1)) xorshift3(g1, modulus3, dg - int(m_));
  return {this, g1[0], g1[1]};
}

Gf2m::Elem Gf2m::pow(Elem a, uint64_t n) const {
  Elem r = one();
  while (n) {
    if (n & 1) r = mul(r, a);
    n >>= 1;
    if (n) a = mul(a, a);
  }
  return r;
}

Gf2m::Elem Gf2m::from_coeffs(const std::vector<uint16_t>& c) const {
  if (c.size() > m_) throw std::invalid_argument("Gf2m: coefficient list too long");
  Elem r = zero();
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] >= 2) throw std::invalid_argument("Gf2m: coefficient out of range");
    if (!c[i]) continue;
    if (i < 64)
      r.w0 |= uint64_t(1) << i;
    else
      r.w1 |= uint64_t(1) << (i - 64);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Fqm
// ---------------------------------------------------------------------------

Fqm::Fqm(const FieldDescriptor& d)
    : desc_(d), base_(d.p, d.e, d.base_modulus), m_(d.m) {
  if (d.top_modulus.size() != size_t(d.m) + 1 || d.top_modulus[d.m] != 1)
    throw std::invalid_argument("Fqm: top modulus must be monic of degree m");
  for (auto c : d.top_modulus)
    if (c >= base_.q()) throw std::invalid_argument("Fqm: top modulus coefficient out of range");
  top_ = d.top_modulus;
  if (m_ >= 2) {
    bool irr = base_.q() == 2 ? f2x::irreducible(f2x::from_indices(top_))
                              : fqx::irreducible(base_, top_);
    if (!irr) throw std::invalid_argument("Fqm: top modulus is reducible");
  }

  if (m_ == 1) {
    gen_ = Elem{this, {base_.neg(top_[0])}};
  } else {
    std::vector<uint16_t> v(m_, 0);
    v[1] = 1;
    gen_ = Elem{this, std::move(v)};
  }

  if (m_ > 1) {
    frob_.assign(size_t(m_) * m_ * m_, 0);
    Elem xq = pow(gen_, base_.q());
    Elem cur = one();
    for (uint32_t i = 0; i < m_; ++i) {
      for (uint32_t j = 0; j < m_; ++j) frob_[size_t(m_) * m_ + size_t(i) * m_ + j] = cur.c[j];
      cur = mul(cur, xq);
    }
    for (uint32_t s = 2; s < m_; ++s)
      for (uint32_t i = 0; i < m_; ++i) {
        Elem prev{this, std::vector<uint16_t>(
                            frob_.begin() + (size_t(s - 1) * m_ + i) * m_,
                            frob_.begin() + (size_t(s - 1) * m_ + i + 1) * m_)};
        Elem next = frobenius(prev, 1);
        for (uint32_t j = 0; j < m_; ++j) frob_[(size_t(s) * m_ + i) * m_ + j] = next.c[j];
      }
  }

  for (uint32_t r : prime_divisors(m_)) subfield_checks_.push_back(m_ / r);
}

Fqm::Elem Fqm::mul(const Elem& a, const Elem& b) const {
  const SmallField& F = base_;
  std::vector<uint16_t> prod(2 * size_t(m_) - 1, 0);
  for (uint32_t i = 0; i < m_; ++i) {
    if (!a.c[i]) continue;
    for (uint32_t j = 0; j < m_; ++j)
      if (b.c[j]) prod[i + j] = F.add(prod[i + j], F.mul(a.c[i], b.c[j]));
  }
  for (size_t dpos = prod.size(); dpos-- > m_;) {
    uint16_t c = prod[dpos];
    if (!c) continue;
    prod[dpos] = 0;
    for (uint32_t i = 0; i < m_; ++i)
      if (top_[i]) prod[dpos - m_ + i] = F.sub(prod[dpos - m_ + i], F.mul(c, top_[i]));
  }
  prod.resize(m_);
  return {this, std::move(prod)};
}

Fqm::Elem Fqm::inv(const Elem& a) const {
  if (a.is_zero()) throw std::domain_error("Fqm: division by zero");
  const SmallField& F = base_;
  fqx::Poly r0 = top_, r1(a.c.begin(), a.c.end());
  fqx::trim(r1);
  fqx::Poly s0, s1{1};
  auto psub = [&](const fqx::Poly& x, const fqx::Poly& y) {
    fqx::Poly r(std::max(x.size(), y.size()), 0);
    for (size_t i = 0; i < r.size(); ++i)
      r[i] = F.sub(i < x.size() ? x[i] : 0, i < y.size() ? y[i] : 0);
    fqx::trim(r);
    return r;
  };
  while (fqx::deg(r1) > 0) {
    fqx::Poly quot, rem;
    fqx::divmod(F, r0, r1, quot, rem);
    r0 = std::move(r1);
    r1 = std::move(rem);
    fqx::Poly snew = psub(s0, fqx::mul(F, quot, s1));
    s0 = std::move(s1);
    s1 = std::move(snew);
  }
  if (fqx::deg(r1) != 0) throw std::logic_error("Fqm: inverse failed (not a unit)");
  uint16_t cinv = F.inv(r1[0]);
  s1.resize(m_, 0);
  for (auto& x : s1) x = F.mul(x, cinv);
  return {this, std::move(s1)};
}

Fqm::Elem Fqm::pow(Elem a, uint64_t n) const {
  Elem r = one();
  while (n) {
    if (n & 1) r = mul(r, a);
    n >>= 1;
    if (n) a = mul(a, a);
  }
  return r;
}

Fqm::Elem Fqm::frobenius(const Elem& x, long long s) const {
  long long r = s % (long long)m_;
  if (r < 0) r += m_;
  if (r == 0) return x;
  const SmallField& F = base_;
  Elem acc = zero();
  const uint16_t* mat = &frob_[size_t(r) * m_ * m_];
  for (uint32_t i = 0; i < m_; ++i) {
    if (!x.c[i]) continue;
    const uint16_t* row = mat + size_t(i) * m_;
    if (x.c[i] == 1) {
      for (uint32_t j = 0; j < m_; ++j) acc.c[j] = F.add(acc.c[j], row[j]);
    } else {
      for (uint32_t j = 0; j < m_; ++j)
        if (row[j]) acc.c[j] = F.add(acc.c[j], F.mul(x.c[i], row[j]));
    }
  }
  return acc;
}

Fqm::Elem Fqm::from_coeffs(const std::vector<uint16_t>& c) const {
  if (c.size() > m_) throw std::invalid_argument("Fqm: coefficient list too long");
  std::vector<uint16_t> v(m_, 0);
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] >= base_.q()) throw std::invalid_argument("Fqm: coefficient out of range");
    v[i] = c[i];
  }
  return {this, std::move(v)};
}

}  // namespace loidreau
