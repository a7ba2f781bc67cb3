#ifndef LOIDREAU_SCHEME_HPP
#define LOIDREAU_SCHEME_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "loidreau/gabidulin.hpp"

namespace loidreau {

/// n, k: code length and dimension; lambda: F_q-dimension of the masking
/// space V; t = floor((n-k)/(2 lambda)) is the public error rank.
struct SchemeParams {
  size_t n = 0, k = 0, lambda = 0, t = 0;

  SchemeParams() = default;
  SchemeParams(size_t n_, size_t k_, size_t lambda_) : n(n_), k(k_), lambda(lambda_) {
    if (lambda == 0) throw std::invalid_argument("SchemeParams: lambda must be >= 1");
    if (k >= n) throw std::invalid_argument("SchemeParams: need k < n");
    t = (n - k) / (2 * lambda);
    if (t == 0) throw std::invalid_argument("SchemeParams: t = floor((n-k)/(2 lambda)) is zero");
  }

  template <class F>
  void check_field(const F& f) const {
    if (n > f.m()) throw std::invalid_argument("SchemeParams: need n <= m");
    if (lambda > f.m()) throw std::invalid_argument("SchemeParams: need lambda <= m");
  }
};

template <class F>
struct PublicKey {
  SchemeParams prm;
  Mat<F> g_pub;  // k x n, full rank

  Code<F> code() const { return Code<F>::from_matrix(g_pub); }
};

/// Secret data plus the white-box values the cryptanalysis is validated
/// against: for lambda = 2, V = <1, gamma>, P^T = P0 + gamma P1, and the
/// dual support a of the secret code with g = a P0, h = a P1.
template <class F>
struct SecretKey {
  using Elem = typename F::Elem;

  SchemeParams prm;
  Vec<F> b;                    // support of the secret Gabidulin code
  Mat<F> p_mat;                // P, entries in V, invertible
  std::vector<Elem> v_basis;   // F_q-basis of V; v_basis[0] = 1
  Mat<F> s_inv;                // inverse of the generator scrambler S

  // lambda = 2 only:
  Elem gamma;
  Mat<SmallField> p0, p1;
  Vec<F> a;  // Gab_{n-k}(a) = Gab_k(b)^perp
  Vec<F> g, h;
};

/// x * M for an F_q matrix M: scalars embed as degree-0 field elements.
template <class F>
Vec<F> mul_vec_fqmat(const Vec<F>& x, const Mat<SmallField>& m) {
  const F& f = x.field();
  Vec<F> r(f, m.cols());
  for (size_t i = 0; i < x.size(); ++i) {
    if (f.is_zero(x[i])) continue;
    for (size_t j = 0; j < m.cols(); ++j) {
      uint16_t c = m.at(i, j);
      if (!c) continue;
      auto term = c == 1 ? x[i] : f.mul(f.from_coeffs({c}), x[i]);
      r[j] = f.add(r[j], term);
    }
  }
  return r;
}

/// Lifts an F_q matrix entrywise into F_{q^m}.
template <class F>
Mat<F> lift_fq_matrix(const F& f, const Mat<SmallField>& m) {
  Mat<F> r(f, m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) {
      uint16_t c = m.at(i, j);
      if (c) r.at(i, j) = f.from_coeffs({c});
    }
  return r;
}

template <class F>
std::pair<PublicKey<F>, SecretKey<F>> keygen(const F& f, const SchemeParams& prm, Rng& rng) {
  prm.check_field(f);
  const size_t n = prm.n, k = prm.k, lambda = prm.lambda;
  const SmallField& fq = f.base();

  SecretKey<F> sk;
  sk.prm = prm;
  sk.b = random_full_rank_vector(f, n, rng);

  // V: uniform among lambda-dimensional subspaces containing 1; for
  // lambda = 2 the second generator avoids all proper subfields
  sk.v_basis = {f.one()};
  if (lambda == 2) {
    sk.gamma = f.random_outside_subfields(rng);
    sk.v_basis.push_back(sk.gamma);
  } else if (lambda > 1) {
    for (;;) {
      std::vector<typename F::Elem> cand = {f.one()};
      for (size_t i = 1; i < lambda; ++i) cand.push_back(f.random_element(rng));
      if (FqSubspace<F>::span(f, cand).dim() == lambda) {
        sk.v_basis = std::move(cand);
        break;
      }
    }
  }

  // P with entries uniform over V, resampled until the entries span exactly
  // V and P is invertible
  std::optional<Mat<F>> p_inv;
  for (int attempt = 0;; ++attempt) {
    if (attempt >= 1000)
      throw std::runtime_error("keygen: could not sample an invertible P (parameter pathology)");
    Mat<F> p(f, n, n);
    Mat<SmallField> coords(fq, lambda, n * n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        auto acc = f.zero();
        for (size_t l = 0; l < lambda; ++l) {
          uint16_t c = uint16_t(rng.below(fq.q()));
          coords.at(l, i * n + j) = c;
          if (!c) continue;
          acc = f.add(acc, c == 1 ? sk.v_basis[l] : f.mul(f.from_coeffs({c}), sk.v_basis[l]));
        }
        p.at(i, j) = acc;
      }
    if (coords.rank() != lambda) continue;  // entries span a proper subspace of V
    auto inv = p.inverse();
    if (!inv) continue;
    sk.p_mat = std::move(p);
    p_inv = std::move(*inv);
    break;
  }

  // random generator matrix of Gab_k(b): invertible scrambler times Moore
  Mat<F> s(f, k, k);
  for (;;) {
    for (size_t i = 0; i < k; ++i)
      for (size_t j = 0; j < k; ++j) s.at(i, j) = f.random_element(rng);
    auto inv = s.inverse();
    if (inv) {
      sk.s_inv = std::move(*inv);
      break;
    }
  }
  Mat<F> gmat = s * moore_matrix(sk.b, k);

  PublicKey<F> pk;
  pk.prm = prm;
  pk.g_pub = gmat * *p_inv;

  if (lambda == 2) {
    // P^T = P0 + gamma P1: coordinates of each entry in the basis (1, gamma)
    Mat<SmallField> vmat(fq, 2, f.m());
    for (uint32_t j = 0; j < f.m(); ++j) {
      vmat.at(0, j) = f.coeff(f.one(), j);
      vmat.at(1, j) = f.coeff(sk.gamma, j);
    }
    sk.p0 = Mat<SmallField>(fq, n, n);
    sk.p1 = Mat<SmallField>(fq, n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) {
        Vec<SmallField> target(fq, f.m());
        for (uint32_t l = 0; l < f.m(); ++l) target[l] = f.coeff(sk.p_mat.at(j, i), l);
        auto sol = vmat.solve_left(target);
        if (!sol) throw std::logic_error("keygen: P entry not in V");
        sk.p0.at(i, j) = (*sol)[0];
        sk.p1.at(i, j) = (*sol)[1];
      }
    sk.a = dual_gabidulin_support(sk.b, k);
    sk.g = mul_vec_fqmat(sk.a, sk.p0);
    sk.h = mul_vec_fqmat(sk.a, sk.p1);
  }

  return {std::move(pk), std::move(sk)};
}

template <class F>
Vec<F> encrypt(const PublicKey<F>& pk, const Vec<F>& msg, Rng& rng) {
  if (msg.size() != pk.prm.k) throw std::invalid_argument("encrypt: message length != k");
  Vec<F> e = random_rank_t_vector(msg.field(), pk.prm.n, pk.prm.t, rng);
  return msg * pk.g_pub + e;
}

/// Decodes c P in the secret Gabidulin code at radius floor((n-k)/2); the
/// masked error e P stays decodable because its entries live in the product
/// space supp(e).V of dimension at most t lambda. Returns nothing on
/// malformed ciphertexts.
template <class F>
std::optional<Vec<F>> decrypt(const SecretKey<F>& sk, const Vec<F>& c) {
  const F& f = sk.b.field();
  const size_t n = sk.prm.n, k = sk.prm.k;
  if (c.size() != n) throw std::invalid_argument("decrypt: ciphertext length != n");
  Vec<F> y = c * sk.p_mat;
  auto dec = gab_decode(GabidulinCode<F>(sk.b, k), y, (n - k) / 2);
  if (!dec) return std::nullopt;
  if (rank_weight(dec->e) > sk.prm.t * sk.prm.lambda) return std::nullopt;
  // y - e = f(b) = (m S) applied to the Moore rows, so m = coeffs(f) S^{-1}
  Vec<F> fc(f, k);
  for (size_t i = 0; i < k; ++i) fc[i] = dec->f.coeff(i);
  return fc * sk.s_inv;
}

}  // namespace loidreau

#endif
