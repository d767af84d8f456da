#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "gafield/metric.hpp"

namespace gafield {

// relativistic Hamiltonian H(q, Pbar) with optional closed-form derivatives; dP is the
// multivector derivative with respect to the momentum slot, dq the vector derivative
// with respect to position at fixed momentum
struct Hamiltonian {
  Algebra alg;
  std::function<double(const Multivector&, const Multivector&)> value;
  std::function<Multivector(const Multivector&, const Multivector&)> dP;
  std::function<Multivector(const Multivector&, const Multivector&)> dq;
};

// numeric multivector derivative sum_J e_J^{-1} dF/dx_J by central differences over
// every basis blade
inline Multivector multivector_derivative(const std::function<double(const Multivector&)>& fn,
                                          const Multivector& at) {
  const Algebra& alg = at.algebra();
  const double h = fd_step(coeff_norm(at));
  Multivector out(alg);
  for (blade_t J = 0; J < static_cast<blade_t>(alg.size()); ++J) {
    const Multivector eJ = Multivector::basis_blade(alg, J);
    const double d = (fn(at + eJ * h) - fn(at - eJ * h)) / (2.0 * h);
    out += blade_inverse(eJ) * d;
  }
  return out;
}

// membrane Hamiltonian (reverse(P) . P - Lambda^2) / 2; its momentum derivative is
// reverse(P) and it carries no explicit position dependence
inline Hamiltonian string_hamiltonian(const Algebra& alg, double Lambda) {
  Hamiltonian H;
  H.alg = alg;
  H.value = [Lambda](const Multivector&, const Multivector& P) {
    return 0.5 * (scalar_part(reverse(P) * P) - Lambda * Lambda);
  };
  H.dP = [](const Multivector&, const Multivector& P) { return reverse(P); };
  H.dq = [](const Multivector& q, const Multivector&) { return Multivector(q.algebra()); };
  return H;
}

// U . d_q U = g^{-1} [ (1/2) sum_k e^k ((d_k g)(U) . U) - (d_U g)(U) ]
inline Multivector geodesic_acceleration(const MetricField& m, const Multivector& q,
                                         const Multivector& U) {
  const Algebra& alg = m.alg;
  const int n = alg.dim();
  const Frame gen = generator_frame(alg);
  const Frame rec = generator_reciprocal_frame(alg);
  Multivector s(alg);
  VectorMap dU = VectorMap::identity(alg) * 0.0;
  for (int k = 0; k < n; ++k) {
    const VectorMap dk = metric_derivative(m, q, gen[k]);
    s += rec[k] * (0.5 * scalar_part(fat_dot(dk.apply_vector(U), U)));
    dU = dU + dk * U.vec(k + 1);  // directional derivatives are linear in the direction
  }
  return metric_inverse_eval(m, q).apply_vector(grade_project(s - dU.apply_vector(U), 1));
}

inline double metric_norm(const MetricField& m, const Multivector& q, const Multivector& U) {
  return scalar_part(fat_dot(reverse(U), metric_eval(m, q).apply_vector(U)));
}

// conserved quantity P . v = (sign) Lambda U . g(v) associated with a symmetry generator v
inline double conserved_quantity(const MetricField& m, const Multivector& q,
                                 const Multivector& U, const KillingCandidate& v,
                                 double Lambda = 1.0, int sign = +1) {
  return (sign >= 0 ? Lambda : -Lambda) *
         scalar_part(fat_dot(U, metric_eval(m, q).apply_vector(grade_project(v.at(q), 1))));
}

struct GeodesicSample {
  double tau;
  Multivector q, U;
  double norm_residual;              // drift of reverse(U) . g(U) from its initial value
  std::vector<double> conserved;     // U . g(v) for each supplied candidate
};

// classical fourth-order Runge-Kutta with a fixed step on the state (q, U)
inline std::vector<GeodesicSample> integrate_geodesic(
    const MetricField& m, const Multivector& q0, const Multivector& U0, double dtau, int steps,
    const std::vector<KillingCandidate>& candidates = {}, int sample_every = 1) {
  if (dtau <= 0.0 || steps < 1) throw ga_error("integrate_geodesic: need dtau > 0 and steps >= 1");
  if (sample_every < 1) sample_every = 1;

  auto accel = [&](const Multivector& q, const Multivector& U) {
    return geodesic_acceleration(m, q, U);
  };
  const double norm0 = metric_norm(m, q0, U0);
  auto make_sample = [&](double tau, const Multivector& q, const Multivector& U) {
    GeodesicSample s{tau, q, U, std::fabs(metric_norm(m, q, U) - norm0), {}};
    for (const auto& v : candidates) s.conserved.push_back(conserved_quantity(m, q, U, v));
    return s;
  };

  std::vector<GeodesicSample> out;
  out.reserve(static_cast<std::size_t>(steps / sample_every) + 2);
  Multivector q = q0, U = U0;
  out.push_back(make_sample(0.0, q, U));
  for (int i = 1; i <= steps; ++i) {
    const Multivector k1q = U, k1u = accel(q, U);
    const Multivector k2q = U + k1u * (0.5 * dtau), k2u = accel(q + k1q * (0.5 * dtau), k2q);
    const Multivector k3q = U + k2u * (0.5 * dtau), k3u = accel(q + k2q * (0.5 * dtau), k3q);
    const Multivector k4q = U + k3u * dtau, k4u = accel(q + k3q * dtau, k4q);
    q += (k1q + (k2q + k3q) * 2.0 + k4q) * (dtau / 6.0);
    U += (k1u + (k2u + k3u) * 2.0 + k4u) * (dtau / 6.0);
    if (i % sample_every == 0 || i == steps) out.push_back(make_sample(i * dtau, q, U));
  }
  return out;
}

// infinitesimal symmetry condition for the gauged Hamiltonian:
//   v . d_q H + [ (d_v hbar)(P) - hbar(sum_k e^k ^ ((d_k v) . P)) ] . d_Pbar H
// evaluates to zero when v generates a symmetry
inline double symmetry_condition_residual(const GaugeField& g, const Hamiltonian& H,
                                          const KillingCandidate& v, const Multivector& q,
                                          const Multivector& P) {
  const Algebra& alg = g.alg;
  const VectorMap hb = g.hbar_at(q);
  const Multivector Pbar = hb(P);
  const Multivector vq = grade_project(v.at(q), 1);

  double term1 = 0.0;
  if (H.dq) {
    term1 = scalar_part(fat_dot(vq, H.dq(q, Pbar)));
  } else {
    const double h = fd_step(coeff_norm(q));
    term1 = (H.value(q + vq * h, Pbar) - H.value(q - vq * h, Pbar)) / (2.0 * h);
  }

  const Multivector m1 = outermorphism_derivative(hb, dhbar(g, q, vq), P);
  const VectorMap Jv = killing_jacobian(v, q);
  const Frame rec = generator_reciprocal_frame(alg);
  Multivector s(alg);
  for (int k = 1; k <= alg.dim(); ++k)
    s += outer(rec[k - 1], fat_dot(grade_project(Jv.image(k), 1), P));
  const Multivector m2 = hb(s);

  const Multivector dPH =
      H.dP ? H.dP(q, Pbar)
           : multivector_derivative([&](const Multivector& X) { return H.value(q, X); }, Pbar);
  return term1 + scalar_part(fat_dot(m1 - m2, dPH));
}

// Hamiltonian-independent sufficient condition (d_v hbar)(P) = hbar(sum_k e^k ^ ((d_k v) . P));
// returns the norm of the mismatch
inline double sufficient_symmetry_residual(const GaugeField& g, const KillingCandidate& v,
                                           const Multivector& q, const Multivector& P) {
  const Algebra& alg = g.alg;
  const VectorMap hb = g.hbar_at(q);
  const Multivector vq = grade_project(v.at(q), 1);
  const Multivector m1 = outermorphism_derivative(hb, dhbar(g, q, vq), P);
  const VectorMap Jv = killing_jacobian(v, q);
  const Frame rec = generator_reciprocal_frame(alg);
  Multivector s(alg);
  for (int k = 1; k <= alg.dim(); ++k)
    s += outer(rec[k - 1], fat_dot(grade_project(Jv.image(k), 1), P));
  return coeff_norm(m1 - hb(s));
}

}  // namespace gafield
