#pragma once

#include <complex>

#include "gafield/dynamics.hpp"
#include "gafield/yang_mills.hpp"

namespace gafield {

// N-component field y(x) over the base space, with optional analytic partial
// derivatives and a potential V evaluated on field values
struct FieldConfiguration {
  SplitSpace space;
  std::function<Multivector(const Multivector&)> y_of_x;        // field-space vector
  std::function<Multivector(const Multivector&, int)> dy_of_x;  // d y / d x^mu, may be empty
  std::function<double(const Multivector&)> potential;          // V(y), may be empty
};

inline Multivector field_derivative(const FieldConfiguration& cfg, const Multivector& x,
                                    int mu) {
  if (cfg.dy_of_x) return grade_project(cfg.dy_of_x(x, mu), 1);
  const double h = fd_step(coeff_norm(x));
  const Multivector emu = cfg.space.x_generator(mu);
  return grade_project((cfg.y_of_x(x + emu * h) - cfg.y_of_x(x - emu * h)) * (1.0 / (2.0 * h)),
                       1);
}

inline double field_potential(const FieldConfiguration& cfg, const Multivector& y) {
  return cfg.potential ? cfg.potential(y) : 0.0;
}

// constraint Hamiltonian of the field: P . I_x + 1/2 sum_a (I_x . (P . e_a))^2 + V(y).
// All contractions keep the scalar terms, which matters for one-dimensional bases.
inline Hamiltonian scalar_field_hamiltonian(const SplitSpace& ss,
                                            std::function<double(const Multivector&)> potential) {
  Hamiltonian H;
  H.alg = ss.alg;
  H.value = [ss, potential](const Multivector& q, const Multivector& P) {
    const Multivector Ix = ss.pseudoscalar_x();
    double val = scalar_part(fat_dot(P, Ix));
    for (int a = 1; a <= ss.dim_y(); ++a) {
      const Multivector w = fat_dot(Ix, fat_dot(P, ss.y_generator(a)));
      val += 0.5 * scalar_part(w * w);
    }
    if (potential) val += potential(ss.project_y(grade_project(q, 1)));
    return val;
  };
  return H;
}

// minimal coupling: the gauge field enters by the substitution P -> hbar(P)
inline Hamiltonian gauge_coupled(const Hamiltonian& H, const GaugeField& g) {
  Hamiltonian out;
  out.alg = H.alg;
  auto value = H.value;
  out.value = [value, g](const Multivector& q, const Multivector& P) {
    return value(q, four_forms(g, q).hbar(P));
  };
  return out;
}

// tangent of the motion surface {x + y(x)}: the wedge of the deformed frame
// vectors gamma_mu + d_mu y; the scalar measure |dX| rides along separately
struct SurfaceElement {
  Multivector q;        // the surface point x + y(x)
  Multivector tangent;  // (gamma_1 + d_1 y) ^ ... ^ (gamma_D + d_D y)
  double measure;
};

inline SurfaceElement surface_element_at(const FieldConfiguration& cfg, const Multivector& x,
                                         double measure = 1.0) {
  const SplitSpace& ss = cfg.space;
  Multivector tangent = ss.x_generator(1) + field_derivative(cfg, x, 1);
  for (int mu = 2; mu <= ss.dim_x; ++mu)
    tangent = outer(tangent, ss.x_generator(mu) + field_derivative(cfg, x, mu));
  return {grade_project(x, 1) + grade_project(cfg.y_of_x(x), 1), tangent, measure};
}

// Lagrange multiplier lambda = I_x^{-1} . h^{-1}(dGamma)
inline double lambda_from_surface(const GaugeForms& forms, const SplitSpace& ss,
                                  const SurfaceElement& d) {
  return d.measure *
         scalar_part(fat_dot(ss.pseudoscalar_x_inv(), forms.h_inv(d.tangent)));
}

// field momentum kappa_a = I_x^{-1} . (h^{-1}(dGamma) . e_a), a base-space vector
inline Multivector momentum_from_surface(const GaugeForms& forms, const SplitSpace& ss,
                                         const SurfaceElement& d, int a) {
  const Multivector hd = forms.h_inv(d.tangent);
  return grade_project(fat_dot(ss.pseudoscalar_x_inv(), fat_dot(hd, ss.y_generator(a))), 1) *
         d.measure;
}

// action density per unit measure: (1/2 lambda) sum_a kappa_a^2 - lambda V(y)
inline double action_integrand_generic(const GaugeField& g, const FieldConfiguration& cfg,
                                       const Multivector& x) {
  const SplitSpace& ss = cfg.space;
  const SurfaceElement d = surface_element_at(cfg, x);
  const GaugeForms forms = four_forms(g, d.q);
  const double lam = lambda_from_surface(forms, ss, d);
  if (std::fabs(lam) < 1e-14) throw ga_error("action integrand: degenerate multiplier");
  double kin = 0.0;
  for (int a = 1; a <= ss.dim_y(); ++a) {
    const Multivector ka = momentum_from_surface(forms, ss, d, a);
    kin += scalar_part(ka * ka);
  }
  return 0.5 * kin / lam - lam * field_potential(cfg, ss.project_y(grade_project(d.q, 1)));
}

// base-space reduction for block gauge fields:
// det(h^{-1}) [ 1/2 sum_a (hbar(grad phi_a))^2 - V(y) ], phi_a = e_a . y
inline double gr_action_integrand(const GaugeField& g, const FieldConfiguration& cfg,
                                  const Multivector& x) {
  const SplitSpace& ss = cfg.space;
  const Algebra& alg = ss.alg;
  const Multivector q = grade_project(x, 1) + grade_project(cfg.y_of_x(x), 1);
  const GaugeForms forms = four_forms(g, q);
  const double det = determinant(forms.h_inv);
  std::vector<Multivector> dys;
  for (int mu = 1; mu <= ss.dim_x; ++mu) dys.push_back(field_derivative(cfg, x, mu));
  double kin = 0.0;
  for (int a = 1; a <= ss.dim_y(); ++a) {
    Multivector grad(alg);  // gradient of phi_a: sum_mu gamma^mu d_mu phi_a
    for (int mu = 1; mu <= ss.dim_x; ++mu)
      grad += ss.x_generator(mu) *
              (alg.signature(mu) * scalar_part(fat_dot(dys[mu - 1], ss.y_generator(a))));
    const Multivector w = forms.hbar.apply_vector(grad);
    kin += 0.5 * scalar_part(w * w);
  }
  return det * (kin - field_potential(cfg, grade_project(cfg.y_of_x(x), 1)));
}

// rotor-potential reduction: 1/2 sum_mu sigma_mu (D_mu y).(D_mu y) - U(y^2),
// with the covariant derivative D_mu y = d_mu y + y . A_mu; independent of the rotor
inline double ym_action_integrand(const YangMillsField& f, const FieldConfiguration& cfg,
                                  const std::function<double(double)>& U,
                                  const Multivector& x) {
  const SplitSpace& ss = f.space;
  double kin = 0.0;
  for (int mu = 1; mu <= ss.dim_x; ++mu) {
    const Multivector D = ym_covariant_derivative(f, cfg.y_of_x, cfg.dy_of_x, x, mu);
    kin += 0.5 * ss.alg.signature(mu) * scalar_part(fat_dot(D, D));
  }
  const Multivector y = grade_project(cfg.y_of_x(x), 1);
  return kin - (U ? U(scalar_part(y * y)) : 0.0);
}

// two-component reduction in complex form: 1/2 sum_mu sigma_mu |(d_mu + i alpha_mu) Phi|^2
// - U(|Phi|^2), where Phi = phi_R + i phi_I collects the field components and the
// imaginary unit stands in for the field-space pseudoscalar
inline double em_action_integrand_complex(const FieldConfiguration& cfg,
                                          const std::function<double(const Multivector&, int)>& alpha_at,
                                          const std::function<double(double)>& U,
                                          const Multivector& x) {
  const SplitSpace& ss = cfg.space;
  if (ss.dim_y() != 2) throw ga_error("complex form needs a two-dimensional field space");
  const auto comp = [&](const Multivector& v) {
    return std::complex<double>(v.vec(ss.dim_x + 1), v.vec(ss.dim_x + 2));
  };
  const std::complex<double> Phi = comp(cfg.y_of_x(x));
  double kin = 0.0;
  for (int mu = 1; mu <= ss.dim_x; ++mu) {
    const std::complex<double> D =
        comp(field_derivative(cfg, x, mu)) + std::complex<double>(0.0, alpha_at(x, mu)) * Phi;
    kin += 0.5 * ss.alg.signature(mu) * std::norm(D);
  }
  return kin - (U ? U(std::norm(Phi)) : 0.0);
}

}  // namespace gafield
