#pragma once

// Position-dependent gauge fields h(q) in four mutually adjoint/inverse forms,
// overdot (map-only) derivatives, the grade-raising field strength F, gauge
// transformations under diffeomorphisms, torsion components, and the
// gravitational specialization acting on the x-factor of a split space.

#include <functional>
#include <vector>

#include "gafield/pointmap.hpp"
#include "gafield/split_space.hpp"

namespace gafield {

struct GaugeField {
  Algebra alg;
  // q -> the adjoint form hbar(.;q)
  std::function<VectorMap(const Multivector&)> hbar_at;
  // optional analytic directional derivative of hbar at q along dir (linear in dir)
  std::function<VectorMap(const Multivector&, const Multivector&)> dhbar_at;
};

inline GaugeField identity_gauge_field(const Algebra& alg) {
  GaugeField g;
  g.alg = alg;
  g.hbar_at = [alg](const Multivector&) { return VectorMap::identity(alg); };
  g.dhbar_at = [alg](const Multivector&, const Multivector&) {
    return VectorMap::identity(alg) * 0.0;
  };
  return g;
}

// derivative of the map hbar along dir, analytic when provided
inline VectorMap dhbar(const GaugeField& g, const Multivector& q, const Multivector& dir) {
  if (g.dhbar_at) return g.dhbar_at(q, dir);
  const double h = fd_step(coeff_norm(q));
  return (g.hbar_at(q + dir * h) - g.hbar_at(q - dir * h)) * (1.0 / (2.0 * h));
}

struct GaugeForms {
  VectorMap hbar, h, hbar_inv, h_inv;
};

inline GaugeForms four_forms(const GaugeField& g, const Multivector& q) {
  VectorMap hbar = g.hbar_at(q);
  VectorMap hbar_inv = inverse_map(hbar);
  VectorMap h = adjoint(hbar);
  VectorMap h_inv = adjoint(hbar_inv);
  return {std::move(hbar), std::move(h), std::move(hbar_inv), std::move(h_inv)};
}

// d(hbar^{-1}) = -hbar^{-1} d(hbar) hbar^{-1}
inline VectorMap dhbar_inv(const GaugeField& g, const Multivector& q, const Multivector& dir,
                           const GaugeForms& forms) {
  return compose(compose(forms.hbar_inv, dhbar(g, q, dir)), forms.hbar_inv) * -1.0;
}

// Leibniz action of a map derivative on a multivector: with m a map and dm its
// derivative, d[m(A)] hits one wedge factor at a time. (The derivative of an
// outermorphism is not an outermorphism.)
inline Multivector outermorphism_derivative(const VectorMap& m, const VectorMap& dm,
                                            const Multivector& A) {
  const Algebra& alg = m.algebra();
  alg.require_same(A.algebra());
  Multivector out(alg);
  for (std::size_t mask = 1; mask < A.size(); ++mask) {
    const double c = A[static_cast<blade_t>(mask)];
    if (c == 0.0) continue;
    std::vector<int> gen;  // 0-based generator indices, ascending
    for (int i = 0; i < alg.dim(); ++i)
      if (mask & (blade_t{1} << i)) gen.push_back(i);
    for (std::size_t j = 0; j < gen.size(); ++j) {
      Multivector w = Multivector::scalar(alg, c);
      for (std::size_t t = 0; t < gen.size(); ++t)
        w = outer(w, t == j ? dm.image(gen[t] + 1) : m.image(gen[t] + 1));
      out += w;
    }
  }
  return out;
}

// F on the generator vectors: F(e_i) = -hbar( sum_k e^k ^ (d_k hbar^{-1})(e_i) ),
// the derivative acting on the map only
inline std::vector<Multivector> field_strength_generators(const GaugeField& g,
                                                          const Multivector& q) {
  const Algebra& alg = g.alg;
  const GaugeForms forms = four_forms(g, q);
  std::vector<Multivector> curl(static_cast<std::size_t>(alg.dim()), Multivector(alg));
  for (int k = 1; k <= alg.dim(); ++k) {
    const VectorMap dk_inv = dhbar_inv(g, q, Multivector::basis_vector(alg, k), forms);
    const Multivector ek_recip = Multivector::basis_vector(alg, k) * alg.signature(k);
    for (int i = 1; i <= alg.dim(); ++i)
      curl[i - 1] += outer(ek_recip, dk_inv.image(i));
  }
  std::vector<Multivector> out;
  out.reserve(alg.dim());
  for (int i = 1; i <= alg.dim(); ++i) out.push_back(-forms.hbar(curl[i - 1]));
  return out;
}

inline Multivector field_strength_vector(const GaugeField& g, const Multivector& q,
                                         const Multivector& b) {
  const auto Fg = field_strength_generators(g, q);
  const Multivector bv = grade_project(b, 1);
  Multivector out(g.alg);
  for (int i = 1; i <= g.alg.dim(); ++i) {
    const double c = bv.vec(i);
    if (c != 0.0) out += Fg[i - 1] * c;
  }
  return out;
}

// F(b1^...^br) = sum_j (-1)^{j-1} F(b_j) ^ (blade with b_j removed); scalars -> 0
inline Multivector field_strength_multivector(const GaugeField& g, const Multivector& q,
                                              const Multivector& A) {
  const Algebra& alg = g.alg;
  alg.require_same(A.algebra());
  const auto Fg = field_strength_generators(g, q);
  Multivector out(alg);
  for (std::size_t mask = 1; mask < A.size(); ++mask) {
    const double c = A[static_cast<blade_t>(mask)];
    if (c == 0.0) continue;
    std::vector<int> gen;
    for (int i = 0; i < alg.dim(); ++i)
      if (mask & (blade_t{1} << i)) gen.push_back(i);
    double sign = 1.0;
    for (std::size_t j = 0; j < gen.size(); ++j) {
      const blade_t rest = static_cast<blade_t>(mask) & ~(blade_t{1} << gen[j]);
      out += outer(Fg[gen[j]], Multivector::basis_blade(alg, rest)) * (c * sign);
      sign = -sign;
    }
  }
  return out;
}

//--------------------------------------------------------------------------------------
// Gauge transformations

// momentum transforms contravariantly to points: P' = adjoint(J_f(q)^{-1}) applied
// as an outermorphism
inline Multivector momentum_transform(const PointMap& f, const Multivector& q,
                                      const Multivector& P) {
  return adjoint(inverse_map(jacobian_at(f, q)))(P);
}

// h'bar(.;q') = hbar(.;q) o fbar(.;q) with q = f^{-1}(q')
inline GaugeField gauge_transform(const GaugeField& g, const PointMap& f) {
  GaugeField out;
  out.alg = g.alg;
  out.hbar_at = [g, f](const Multivector& qp) {
    const Multivector q0 = invert_point(f, qp, qp);
    return compose(g.hbar_at(q0), adjoint(jacobian_at(f, q0)));
  };
  if (f.jacobian && f.jacobian_derivative) {
    out.dhbar_at = [g, f](const Multivector& qp, const Multivector& dir) {
      const Multivector q0 = invert_point(f, qp, qp);
      const VectorMap J = f.jacobian(q0);
      const Multivector dq0 = inverse_map(J).apply_vector(grade_project(dir, 1));
      const VectorMap dH = dhbar(g, q0, dq0);
      return compose(dH, adjoint(J)) + compose(g.hbar_at(q0), adjoint(f.jacobian_derivative(q0, dq0)));
    };
  }
  return out;
}

// pure gauge: the transform of the identity field, hbar(.;q) = fbar(.;f^{-1}(q));
// its field strength vanishes identically
inline GaugeField make_pure_gauge(const PointMap& f) {
  return gauge_transform(identity_gauge_field(f.alg), f);
}

// residual || F'(P'bar; q') - F(Pbar; q) || for the transformed picture; zero up to
// derivative error for any gauge field and diffeomorphism
inline double field_strength_gauge_invariance_check(const GaugeField& g, const PointMap& f,
                                                    const Multivector& q, const Multivector& P) {
  const Multivector Pbar = g.hbar_at(q)(P);
  const Multivector F_orig = field_strength_multivector(g, q, Pbar);

  const GaugeField gp = gauge_transform(g, f);
  const Multivector qp = f.forward(q);
  const Multivector Pp = momentum_transform(f, q, P);
  const Multivector Pbar_p = gp.hbar_at(qp)(Pp);
  const Multivector F_new = field_strength_multivector(gp, qp, Pbar_p);
  return coeff_norm(F_new - F_orig);
}

//--------------------------------------------------------------------------------------
// Torsion with respect to a coordinate frame

using FrameField = std::function<Frame(const Multivector&)>;

inline FrameField constant_generator_frame(const Algebra& alg) {
  return [alg](const Multivector&) { return generator_frame(alg); };
}

// columns of the Jacobian of a coordinate map, evaluated at the preimage; such
// frames have vanishing Lie brackets by construction
inline FrameField coordinate_frame_from_map(const PointMap& phi) {
  return [phi](const Multivector& q) {
    const Multivector u = invert_point(phi, q, q);
    const VectorMap J = jacobian_at(phi, u);
    std::vector<Multivector> vecs;
    vecs.reserve(phi.alg.dim());
    for (int k = 1; k <= phi.alg.dim(); ++k) vecs.push_back(J.image(k));
    return Frame{std::move(vecs)};
  };
}

// max over pairs of || e_mu . d e_nu - e_nu . d e_mu || by central differences
inline double frame_lie_bracket_residual(const FrameField& frame, const Algebra& alg,
                                         const Multivector& q) {
  const Frame e0 = frame(q);
  const double h = fd_step(coeff_norm(q));
  double worst = 0.0;
  const int n = alg.dim();
  // directional derivative of every frame vector along every frame direction
  std::vector<std::vector<Multivector>> d(static_cast<std::size_t>(n));
  for (int mu = 0; mu < n; ++mu) {
    const Frame plus = frame(q + e0[mu] * h);
    const Frame minus = frame(q - e0[mu] * h);
    for (int nu = 0; nu < n; ++nu)
      d[mu].push_back((plus[nu] - minus[nu]) / (2.0 * h));
  }
  for (int mu = 0; mu < n; ++mu)
    for (int nu = mu + 1; nu < n; ++nu)
      worst = std::max(worst, coeff_norm(d[mu][nu] - d[nu][mu]));
  return worst;
}

// T^rho_{mu nu} = h^{-1}(e_mu ^ e_nu) . F(hbar(e^rho)), the argument of F frozen
// at q; antisymmetric in (mu, nu)
inline std::vector<std::vector<std::vector<double>>> torsion_components(
    const GaugeField& g, const FrameField& frame, const Multivector& q,
    double bracket_tol = 1e-6) {
  const Algebra& alg = g.alg;
  const int n = alg.dim();
  const Frame e = frame(q);
  const double br = frame_lie_bracket_residual(frame, alg, q);
  if (br > bracket_tol)
    throw ga_error("torsion_components: coordinate frame Lie bracket residual " +
                   std::to_string(br) + " exceeds tolerance");
  const Frame erec = reciprocal_frame(e);
  const GaugeForms forms = four_forms(g, q);

  const auto Fg = field_strength_generators(g, q);
  std::vector<std::vector<std::vector<double>>> T(
      n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  for (int rho = 0; rho < n; ++rho) {
    const Multivector b = forms.hbar.apply_vector(erec[rho]);
    Multivector Fb(alg);
    for (int i = 1; i <= n; ++i) {
      const double c = b.vec(i);
      if (c != 0.0) Fb += Fg[i - 1] * c;
    }
    for (int mu = 0; mu < n; ++mu)
      for (int nu = mu + 1; nu < n; ++nu) {
        const double t = scalar_part(fat_dot(forms.h_inv(outer(e[mu], e[nu])), Fb));
        T[rho][mu][nu] = t;
        T[rho][nu][mu] = -t;
      }
  }
  return T;
}

//--------------------------------------------------------------------------------------
// Gravitational specialization: hbar_Gr(b) = hbar_x(b_x) + b_y

inline GaugeField make_gravitational_gauge(
    const SplitSpace& ss, std::function<VectorMap(const Multivector&)> hbar_x_at,
    std::function<VectorMap(const Multivector&, const Multivector&)> dhbar_x_at = {},
    double mix_tol = 1e-10) {
  GaugeField g;
  g.alg = ss.alg;
  auto lift = [ss, mix_tol](const VectorMap& hx, bool derivative) {
    std::vector<Multivector> img;
    img.reserve(ss.alg.dim());
    for (int k = 1; k <= ss.alg.dim(); ++k) {
      if (ss.is_x_generator(k)) {
        Multivector im = hx.image(k);
        const double leak = coeff_norm(im - ss.project_x(im));
        if (leak > mix_tol * std::max(1.0, coeff_norm(im)))
          throw ga_error("make_gravitational_gauge: x-block leaks into the field space");
        img.push_back(std::move(im));
      } else {
        img.push_back(derivative ? Multivector(ss.alg)
                                 : Multivector::basis_vector(ss.alg, k));
      }
    }
    return VectorMap(ss.alg, std::move(img));
  };
  g.hbar_at = [ss, hbar_x_at, lift](const Multivector& q) {
    return lift(hbar_x_at(ss.project_x(grade_project(q, 1))), false);
  };
  if (dhbar_x_at) {
    g.dhbar_at = [ss, dhbar_x_at, lift](const Multivector& q, const Multivector& dir) {
      const Multivector x = ss.project_x(grade_project(q, 1));
      const Multivector dx = ss.project_x(grade_project(dir, 1));
      return lift(dhbar_x_at(x, dx), true);
    };
  }
  return g;
}

// gauge field specified through its hbar^{-1} form (vielbein-style input);
// d(hbar) = -hbar d(hbar^{-1}) hbar when the analytic derivative is supplied
inline GaugeField gauge_from_hbar_inv(
    const Algebra& alg, std::function<VectorMap(const Multivector&)> hbar_inv_at,
    std::function<VectorMap(const Multivector&, const Multivector&)> dhbar_inv_at = {}) {
  GaugeField g;
  g.alg = alg;
  g.hbar_at = [hbar_inv_at](const Multivector& q) { return inverse_map(hbar_inv_at(q)); };
  if (dhbar_inv_at) {
    g.dhbar_at = [hbar_inv_at, dhbar_inv_at](const Multivector& q, const Multivector& dir) {
      const VectorMap hbar = inverse_map(hbar_inv_at(q));
      return compose(compose(hbar, dhbar_inv_at(q, dir)), hbar) * -1.0;
    };
  }
  return g;
}

// gauge field whose generator images are polynomial in the coordinates; each
// entry map gives image(e_k) = entry[k-1].eval(q), with the analytic derivative
// coming from the polynomial Jacobians
inline GaugeField polynomial_gauge(const Algebra& alg, std::vector<PolynomialMap> entries) {
  if (static_cast<int>(entries.size()) != alg.dim())
    throw ga_error("polynomial_gauge: need one entry map per generator");
  GaugeField g;
  g.alg = alg;
  g.hbar_at = [alg, entries](const Multivector& q) {
    std::vector<Multivector> img;
    img.reserve(alg.dim());
    for (const auto& p : entries) img.push_back(p.eval(q));
    return VectorMap(alg, std::move(img));
  };
  g.dhbar_at = [alg, entries](const Multivector& q, const Multivector& dir) {
    std::vector<Multivector> img;
    img.reserve(alg.dim());
    for (const auto& p : entries) img.push_back(p.jacobian(q).apply_vector(grade_project(dir, 1)));
    return VectorMap(alg, std::move(img));
  };
  return g;
}

//--------------------------------------------------------------------------------------
// Metric derived from a gauge field: g = hbar^{-1} o h^{-1}, g^{-1} = h o hbar

inline VectorMap metric_map(const GaugeForms& forms) {
  return compose(forms.hbar_inv, forms.h_inv);
}

inline VectorMap metric_inverse_map(const GaugeForms& forms) {
  return compose(forms.h, forms.hbar);
}

// directional derivative of the metric map: d(g) = d(hbar^{-1}) h^{-1} + hbar^{-1} d(h^{-1})
inline VectorMap dmetric_map(const GaugeField& g, const Multivector& q, const Multivector& dir,
                             const GaugeForms& forms) {
  const VectorMap dhi = dhbar_inv(g, q, dir, forms);
  return compose(dhi, forms.h_inv) + compose(forms.hbar_inv, adjoint(dhi));
}

// component matrices g_{mu nu} = gamma_mu . g(gamma_nu) and g^{mu nu} = gamma^mu . g^{-1}(gamma^nu)
inline std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>>
metric_from_gauge(const GaugeField& g, const Multivector& q, const Frame& gamma) {
  const int n = static_cast<int>(gamma.vectors.size());
  const Frame recip = reciprocal_frame(gamma);
  const GaugeForms forms = four_forms(g, q);
  const VectorMap gm = metric_map(forms);
  const VectorMap gi = metric_inverse_map(forms);
  std::vector<std::vector<double>> lo(n, std::vector<double>(n, 0.0)), up = lo;
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) {
      lo[mu][nu] = scalar_part(fat_dot(gamma[mu], gm.apply_vector(gamma[nu])));
      up[mu][nu] = scalar_part(fat_dot(recip[mu], gi.apply_vector(recip[nu])));
    }
  return {std::move(lo), std::move(up)};
}

}  // namespace gafield
