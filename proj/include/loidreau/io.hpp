#ifndef LOIDREAU_IO_HPP
#define LOIDREAU_IO_HPP

#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <string>

#include "loidreau/attack.hpp"
#include "loidreau/distinguisher.hpp"
#include "loidreau/scheme.hpp"

namespace loidreau {
namespace io {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;

class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// field descriptor
// ---------------------------------------------------------------------------

inline json descriptor_to_json(const FieldDescriptor& d) {
  json j{{"p", d.p}, {"e", d.e}, {"m", d.m}, {"top_modulus", d.top_modulus}};
  if (d.e > 1) j["base_modulus"] = d.base_modulus;
  return j;
}

inline FieldDescriptor descriptor_from_json(const json& j) {
  std::vector<uint16_t> base, top;
  if (j.contains("base_modulus")) base = j.at("base_modulus").get<std::vector<uint16_t>>();
  top = j.at("top_modulus").get<std::vector<uint16_t>>();
  // make_field re-validates irreducibility of everything loaded from disk
  return make_field(j.at("p").get<uint32_t>(), j.at("e").get<uint32_t>(),
                    j.at("m").get<uint32_t>(), std::move(base), std::move(top));
}

// ---------------------------------------------------------------------------
// elements / vectors / matrices
// ---------------------------------------------------------------------------

// F_q values: plain integer when e = 1, little-endian digit list otherwise
inline json fq_to_json(const SmallField& fq, uint16_t v) {
  if (fq.e() == 1) return v;
  return json(fq.digits(v));
}

inline uint16_t fq_from_json(const SmallField& fq, const json& j) {
  uint16_t v;
  if (j.is_array()) {
    v = fq.from_digits(j.get<std::vector<uint16_t>>());
  } else {
    v = j.get<uint16_t>();
    if (v >= fq.q()) throw format_error("F_q value out of range");
  }
  return v;
}

template <class F>
json elem_to_json(const F& f, const typename F::Elem& x) {
  json j = json::array();
  for (uint32_t i = 0; i < f.m(); ++i) j.push_back(fq_to_json(f.base(), f.coeff(x, i)));
  return j;
}

template <class F>
typename F::Elem elem_from_json(const F& f, const json& j) {
  if (!j.is_array() || j.size() != f.m())
    throw format_error("element must be a coefficient list of length m");
  std::vector<uint16_t> c(f.m());
  for (uint32_t i = 0; i < f.m(); ++i) c[i] = fq_from_json(f.base(), j.at(i));
  return f.from_coeffs(c);
}

template <class F>
json vec_to_json(const Vec<F>& v) {
  json j = json::array();
  for (size_t i = 0; i < v.size(); ++i) j.push_back(elem_to_json(v.field(), v[i]));
  return j;
}

template <class F>
Vec<F> vec_from_json(const F& f, const json& j) {
  Vec<F> v(f, j.size());
  for (size_t i = 0; i < j.size(); ++i) v[i] = elem_from_json(f, j.at(i));
  return v;
}

template <class F>
json mat_to_json(const Mat<F>& m) {
  json j = json::array();
  for (size_t i = 0; i < m.rows(); ++i) j.push_back(vec_to_json(m.row(i)));
  return j;
}

template <class F>
Mat<F> mat_from_json(const F& f, const json& j) {
  if (!j.is_array() || j.empty()) throw format_error("matrix must be a nonempty row array");
  Mat<F> m(f, j.size(), j.at(0).size());
  for (size_t i = 0; i < j.size(); ++i) {
    auto row = vec_from_json(f, j.at(i));
    if (row.size() != m.cols()) throw format_error("ragged matrix rows");
    m.set_row(i, row);
  }
  return m;
}

inline json fqmat_to_json(const Mat<SmallField>& m) {
  json j = json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (size_t c = 0; c < m.cols(); ++c) row.push_back(fq_to_json(m.field(), m.at(i, c)));
    j.push_back(row);
  }
  return j;
}

inline Mat<SmallField> fqmat_from_json(const SmallField& fq, const json& j) {
  if (!j.is_array() || j.empty()) throw format_error("matrix must be a nonempty row array");
  Mat<SmallField> m(fq, j.size(), j.at(0).size());
  for (size_t i = 0; i < j.size(); ++i) {
    const auto& row = j.at(i);
    if (row.size() != m.cols()) throw format_error("ragged matrix rows");
    for (size_t c = 0; c < m.cols(); ++c) m.at(i, c) = fq_from_json(fq, row.at(c));
  }
  return m;
}

// ---------------------------------------------------------------------------
// scheme artifacts
// ---------------------------------------------------------------------------

inline json params_to_json(const SchemeParams& p) {
  return json{{"n", p.n}, {"k", p.k}, {"lambda", p.lambda}, {"t", p.t}};
}

inline SchemeParams params_from_json(const json& j) {
  SchemeParams p(j.at("n").get<size_t>(), j.at("k").get<size_t>(), j.at("lambda").get<size_t>());
  if (j.contains("t") && j.at("t").get<size_t>() != p.t)
    throw format_error("stored t does not match floor((n-k)/(2 lambda))");
  return p;
}

inline void check_header(const json& j, const std::string& kind) {
  if (!j.contains("kind") || j.at("kind").get<std::string>() != kind)
    throw format_error("expected a '" + kind + "' file");
  if (!j.contains("version") || j.at("version").get<int>() != kFormatVersion)
    throw format_error("unsupported format version");
}

template <class F>
json public_key_to_json(const F& f, const PublicKey<F>& pk) {
  return json{{"kind", "public_key"},
              {"version", kFormatVersion},
              {"field", descriptor_to_json(f.descriptor())},
              {"params", params_to_json(pk.prm)},
              {"g_pub", mat_to_json(pk.g_pub)}};
}

template <class F>
PublicKey<F> public_key_from_json(const F& f, const json& j) {
  check_header(j, "public_key");
  PublicKey<F> pk;
  pk.prm = params_from_json(j.at("params"));
  pk.prm.check_field(f);
  pk.g_pub = mat_from_json(f, j.at("g_pub"));
  if (pk.g_pub.rows() != pk.prm.k || pk.g_pub.cols() != pk.prm.n)
    throw format_error("G_pub shape does not match params");
  return pk;
}

template <class F>
json secret_key_to_json(const F& f, const SecretKey<F>& sk) {
  json j{{"kind", "secret_key"},
         {"version", kFormatVersion},
         {"field", descriptor_to_json(f.descriptor())},
         {"params", params_to_json(sk.prm)},
         {"b", vec_to_json(sk.b)},
         {"p", mat_to_json(sk.p_mat)},
         {"s_inv", mat_to_json(sk.s_inv)}};
  json vb = json::array();
  for (const auto& v : sk.v_basis) vb.push_back(elem_to_json(f, v));
  j["v_basis"] = vb;
  if (sk.prm.lambda == 2) {
    j["gamma"] = elem_to_json(f, sk.gamma);
    j["p0"] = fqmat_to_json(sk.p0);
    j["p1"] = fqmat_to_json(sk.p1);
    j["a"] = vec_to_json(sk.a);
    j["g"] = vec_to_json(sk.g);
    j["h"] = vec_to_json(sk.h);
  }
  return j;
}

template <class F>
SecretKey<F> secret_key_from_json(const F& f, const json& j) {
  check_header(j, "secret_key");
  SecretKey<F> sk;
  sk.prm = params_from_json(j.at("params"));
  sk.prm.check_field(f);
  sk.b = vec_from_json(f, j.at("b"));
  sk.p_mat = mat_from_json(f, j.at("p"));
  sk.s_inv = mat_from_json(f, j.at("s_inv"));
  for (const auto& v : j.at("v_basis")) sk.v_basis.push_back(elem_from_json(f, v));
  if (sk.prm.lambda == 2) {
    sk.gamma = elem_from_json(f, j.at("gamma"));
    sk.p0 = fqmat_from_json(f.base(), j.at("p0"));
    sk.p1 = fqmat_from_json(f.base(), j.at("p1"));
    sk.a = vec_from_json(f, j.at("a"));
    sk.g = vec_from_json(f, j.at("g"));
    sk.h = vec_from_json(f, j.at("h"));
  }
  return sk;
}

template <class F>
json vector_file_to_json(const F& f, const Vec<F>& v, const std::string& kind) {
  return json{{"kind", kind},
              {"version", kFormatVersion},
              {"field", descriptor_to_json(f.descriptor())},
              {"v", vec_to_json(v)}};
}

template <class F>
Vec<F> vector_file_from_json(const F& f, const json& j, const std::string& kind) {
  check_header(j, kind);
  return vec_from_json(f, j.at("v"));
}

template <class F>
json recovered_key_to_json(const F& f, const RecoveredKey<F>& rk) {
  return json{{"kind", "recovered_key"},
              {"version", kFormatVersion},
              {"field", descriptor_to_json(f.descriptor())},
              {"params", params_to_json(rk.prm)},
              {"a_prime", vec_to_json(rk.a_prime)},
              {"a_dprime", vec_to_json(rk.a_dprime)},
              {"gamma", elem_to_json(f, rk.gamma)},
              {"q0", fqmat_to_json(rk.q0)},
              {"q1", fqmat_to_json(rk.q1)},
              {"g_pub", mat_to_json(rk.g_pub)}};
}

template <class F>
RecoveredKey<F> recovered_key_from_json(const F& f, const json& j) {
  check_header(j, "recovered_key");
  RecoveredKey<F> rk;
  rk.prm = params_from_json(j.at("params"));
  rk.prm.check_field(f);
  rk.a_prime = vec_from_json(f, j.at("a_prime"));
  rk.a_dprime = vec_from_json(f, j.at("a_dprime"));
  rk.gamma = elem_from_json(f, j.at("gamma"));
  rk.q0 = fqmat_from_json(f.base(), j.at("q0"));
  rk.q1 = fqmat_from_json(f.base(), j.at("q1"));
  rk.g_pub = mat_from_json(f, j.at("g_pub"));
  // Q and its inverse are derived data
  const size_t n = rk.prm.n;
  Mat<F> gamma_diag(f, n, n);
  for (size_t i = 0; i < n; ++i) gamma_diag.at(i, i) = rk.gamma;
  rk.q_mat = lift_fq_matrix(f, rk.q0).transpose() +
             gamma_diag * lift_fq_matrix(f, rk.q1).transpose();
  auto qinv = rk.q_mat.inverse();
  if (!qinv) throw format_error("recovered key holds a singular Q");
  rk.q_inv = std::move(*qinv);
  rk.decode_radius = (rk.prm.n - rk.prm.k) / 2;
  return rk;
}

inline json report_to_json(const DistinguishReport& r) {
  return json{{"s", r.s},
              {"dual_dim", r.dual_dim},
              {"observed_dim", r.observed_dim},
              {"random_expect", r.random_expect},
              {"structured_bound", r.structured_bound},
              {"verdict", to_string(r.verdict)}};
}

inline json report_to_json(const AttackReport& r) {
  return json{{"n", r.n},
              {"k", r.k},
              {"r", r.r},
              {"root_count", r.root_count},
              {"step1_ms", r.step1_ms},
              {"step2_ms", r.step2_ms},
              {"step3_ms", r.step3_ms},
              {"total_ms", r.total_ms}};
}

// ---------------------------------------------------------------------------
// file helpers
// ---------------------------------------------------------------------------

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(1) << "\n";
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  in >> j;
  return j;
}

inline FieldDescriptor peek_field(const json& j) {
  return descriptor_from_json(j.at("field"));
}

}  // namespace io
}  // namespace loidreau

#endif
