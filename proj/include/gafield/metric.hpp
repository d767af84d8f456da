#pragma once

#include <functional>
#include <vector>

#include "gafield/gauge.hpp"

namespace gafield {

// symmetric metric map with optional closed-form inverse and directional derivative;
// missing closures fall back to algebraic inversion and central differences
struct MetricField {
  Algebra alg;
  std::function<VectorMap(const Multivector&)> g_at;
  std::function<VectorMap(const Multivector&)> ginv_at;
  std::function<VectorMap(const Multivector&, const Multivector&)> dg_at;
};

inline VectorMap metric_eval(const MetricField& m, const Multivector& q) { return m.g_at(q); }

inline VectorMap metric_inverse_eval(const MetricField& m, const Multivector& q) {
  return m.ginv_at ? m.ginv_at(q) : inverse_map(m.g_at(q));
}

inline VectorMap metric_derivative(const MetricField& m, const Multivector& q,
                                   const Multivector& dir) {
  if (m.dg_at) return m.dg_at(q, dir);
  const double h = fd_step(coeff_norm(q));
  return (m.g_at(q + dir * h) - m.g_at(q - dir * h)) * (1.0 / (2.0 * h));
}

// g = hbar^{-1} o h^{-1} with its closed-form inverse h o hbar; the derivative chains
// through d(hbar^{-1})
inline MetricField metric_field_from_gauge(const GaugeField& g) {
  MetricField m;
  m.alg = g.alg;
  m.g_at = [g](const Multivector& q) { return metric_map(four_forms(g, q)); };
  m.ginv_at = [g](const Multivector& q) { return metric_inverse_map(four_forms(g, q)); };
  m.dg_at = [g](const Multivector& q, const Multivector& dir) {
    return dmetric_map(g, q, dir, four_forms(g, q));
  };
  return m;
}

// metric given through its component matrix g_mu_nu in the generator basis;
// the map sends e_nu -> sigma_mu g_mu_nu e_mu so that e_mu . g(e_nu) = g_mu_nu
inline MetricField metric_field_from_components(
    const Algebra& alg,
    std::function<std::vector<std::vector<double>>(const Multivector&)> comp) {
  MetricField m;
  m.alg = alg;
  m.g_at = [alg, comp](const Multivector& q) {
    const auto c = comp(q);
    std::vector<Multivector> img;
    img.reserve(alg.dim());
    for (int nu = 1; nu <= alg.dim(); ++nu) {
      Multivector im(alg);
      for (int mu = 1; mu <= alg.dim(); ++mu)
        im.vec(mu) = alg.signature(mu) * c[mu - 1][nu - 1];
      img.push_back(im);
    }
    return VectorMap(alg, std::move(img));
  };
  return m;
}

// vector field with an optional analytic Jacobian, used as a symmetry candidate
struct KillingCandidate {
  std::function<Multivector(const Multivector&)> at;
  std::function<VectorMap(const Multivector&)> jacobian;
};

inline VectorMap killing_jacobian(const KillingCandidate& v, const Multivector& q) {
  if (v.jacobian) return v.jacobian(q);
  const Algebra& alg = q.algebra();
  const double h = fd_step(coeff_norm(q));
  std::vector<Multivector> img;
  img.reserve(alg.dim());
  for (int k = 1; k <= alg.dim(); ++k) {
    const Multivector ek = Multivector::basis_vector(alg, k);
    img.push_back(grade_project((v.at(q + ek * h) - v.at(q - ek * h)) * (1.0 / (2.0 * h)), 1));
  }
  return VectorMap(alg, std::move(img));
}

// Christoffel symbols of the second kind in the generator basis,
// C[mu][lambda][kappa] = (1/2) g^{mu nu} (d_kappa g_nu_lambda + d_lambda g_nu_kappa - d_nu g_lambda_kappa)
inline std::vector<std::vector<std::vector<double>>> christoffel_symbols(const MetricField& m,
                                                                         const Multivector& q) {
  const Algebra& alg = m.alg;
  const int n = alg.dim();
  const Frame gen = generator_frame(alg);
  const VectorMap gi = metric_inverse_eval(m, q);

  // gup[mu][nu] = gamma^mu . g^{-1}(gamma^nu)
  std::vector<std::vector<double>> gup(n, std::vector<double>(n, 0.0));
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      gup[mu][nu] = alg.signature(mu + 1) * alg.signature(nu + 1) *
                    scalar_part(fat_dot(gen[mu], gi.apply_vector(gen[nu])));

  // dg[kappa][nu][lambda] = e_nu . (d_kappa g)(e_lambda)
  std::vector<std::vector<std::vector<double>>> dg(n);
  for (int kappa = 0; kappa < n; ++kappa) {
    const VectorMap dk = metric_derivative(m, q, gen[kappa]);
    dg[kappa].assign(n, std::vector<double>(n, 0.0));
    for (int nu = 0; nu < n; ++nu)
      for (int lam = 0; lam < n; ++lam)
        dg[kappa][nu][lam] = scalar_part(fat_dot(gen[nu], dk.apply_vector(gen[lam])));
  }

  std::vector<std::vector<std::vector<double>>> C(
      n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  for (int mu = 0; mu < n; ++mu)
    for (int lam = 0; lam < n; ++lam)
      for (int kap = 0; kap < n; ++kap) {
        double s = 0.0;
        for (int nu = 0; nu < n; ++nu)
          s += gup[mu][nu] * (dg[kap][nu][lam] + dg[lam][nu][kap] - dg[nu][lam][kap]);
        C[mu][lam][kap] = 0.5 * s;
      }
  return C;
}

// K_mu_nu = v^lambda d_lambda g_mu_nu + g_nu_lambda d_mu v^lambda + g_mu_lambda d_nu v^lambda;
// the candidate generates a symmetry of the metric iff K vanishes
inline std::vector<std::vector<double>> killing_residual_matrix(const MetricField& m,
                                                                const KillingCandidate& v,
                                                                const Multivector& q) {
  const Algebra& alg = m.alg;
  const int n = alg.dim();
  const Frame gen = generator_frame(alg);
  const VectorMap gq = metric_eval(m, q);
  const VectorMap dgv = metric_derivative(m, q, grade_project(v.at(q), 1));
  const VectorMap J = killing_jacobian(v, q);

  std::vector<Multivector> gdv;  // g(d_mu v)
  gdv.reserve(n);
  for (int mu = 1; mu <= n; ++mu) gdv.push_back(gq.apply_vector(J.image(mu)));

  std::vector<std::vector<double>> K(n, std::vector<double>(n, 0.0));
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      K[mu][nu] = scalar_part(fat_dot(gen[mu], dgv.apply_vector(gen[nu]))) +
                  scalar_part(fat_dot(gen[nu], gdv[mu])) +
                  scalar_part(fat_dot(gen[mu], gdv[nu]));
  return K;
}

inline double killing_residual_norm(const MetricField& m, const KillingCandidate& v,
                                    const Multivector& q) {
  double worst = 0.0;
  for (const auto& row : killing_residual_matrix(m, v, q))
    for (double x : row) worst = std::max(worst, std::fabs(x));
  return worst;
}

}  // namespace gafield
