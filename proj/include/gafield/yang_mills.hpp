#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "gafield/gauge.hpp"

namespace gafield {

// rotor-plus-potential gauge field on a split position space:
//   hbar(b; q) = reverse(S) b S - sum_mu gamma^mu [(y . A_mu) . b]
// with S(x) an even versor of the field space, A_mu(x) field-space bivectors, and
// gamma^mu the reciprocal base-space generators.  The analytic derivative closures
// are optional; when one is missing the generic machinery falls back to finite
// differences.
struct YangMillsField {
  SplitSpace space;
  std::function<Rotor(const Multivector&)> rotor_at;                 // S(x); null -> 1
  std::function<Multivector(const Multivector&, int)> potential_at;  // A_mu(x); null -> 0
  std::function<Multivector(const Multivector&, const Multivector&)> drotor_at;
  std::function<Multivector(const Multivector&, const Multivector&, int)> dpotential_at;
};

namespace detail {

inline Rotor ym_rotor(const YangMillsField& f, const Multivector& x) {
  if (!f.rotor_at) return Rotor(Multivector::scalar(f.space.alg, 1.0));
  Rotor S = f.rotor_at(x);
  // S must live in the even part of the field-space algebra
  Multivector even = Multivector::scalar(f.space.alg, scalar_part(S.element));
  for (int g = 2; g <= f.space.dim_y(); g += 2)
    even += f.space.project_y(grade_project(S.element, g));
  if (coeff_norm(S.element - even) > 1e-12 * std::max(1.0, coeff_norm(S.element)))
    throw ga_error("yang-mills rotor must be an even element of the field space");
  return S;
}

inline Multivector ym_drotor(const YangMillsField& f, const Multivector& x,
                             const Multivector& dx) {
  if (!f.rotor_at) return Multivector(f.space.alg);
  if (f.drotor_at) return f.drotor_at(x, dx);
  const double h = fd_step(coeff_norm(x));
  return (f.rotor_at(x + dx * h).element - f.rotor_at(x - dx * h).element) * (1.0 / (2.0 * h));
}

inline Multivector ym_potential(const YangMillsField& f, const Multivector& x, int mu) {
  if (!f.potential_at) return Multivector(f.space.alg);
  Multivector A = f.potential_at(x, mu);
  if (coeff_norm(A - f.space.project_y(grade_project(A, 2))) >
      1e-12 * std::max(1.0, coeff_norm(A)))
    throw ga_error("yang-mills potential must be a field-space bivector");
  return A;
}

inline Multivector ym_dpotential(const YangMillsField& f, const Multivector& x,
                                 const Multivector& dx, int mu) {
  if (!f.potential_at) return Multivector(f.space.alg);
  if (f.dpotential_at) return f.dpotential_at(x, dx, mu);
  const double h = fd_step(coeff_norm(x));
  return (f.potential_at(x + dx * h, mu) - f.potential_at(x - dx * h, mu)) * (1.0 / (2.0 * h));
}

// shear data for the potential part: u_mu = -gamma^mu, v_mu = y . A_mu
inline std::pair<std::vector<Multivector>, std::vector<Multivector>> ym_shear_data(
    const YangMillsField& f, const Multivector& x, const Multivector& y) {
  std::vector<Multivector> us, vs;
  for (int mu = 1; mu <= f.space.dim_x; ++mu) {
    us.push_back(f.space.x_generator(mu) * -static_cast<double>(f.space.alg.signature(mu)));
    vs.push_back(grade_project(fat_dot(y, ym_potential(f, x, mu)), 1));
  }
  return {std::move(us), std::move(vs)};
}

}  // namespace detail

inline GaugeField make_yang_mills_gauge(const YangMillsField& f) {
  GaugeField g;
  g.alg = f.space.alg;
  g.hbar_at = [f](const Multivector& q) {
    const SplitSpace& ss = f.space;
    const Multivector x = ss.project_x(grade_project(q, 1));
    const Multivector y = ss.project_y(grade_project(q, 1));
    const Rotor S = detail::ym_rotor(f, x);
    const Multivector Srev = reverse(S.element);
    const auto [us, vs] = detail::ym_shear_data(f, x, y);
    std::vector<Multivector> img;
    img.reserve(ss.alg.dim());
    for (int k = 1; k <= ss.alg.dim(); ++k) {
      const Multivector ek = Multivector::basis_vector(ss.alg, k);
      Multivector im = grade_project(Srev * ek * S.element, 1);
      for (std::size_t j = 0; j < us.size(); ++j)
        im += us[j] * scalar_part(fat_dot(vs[j], ek));
      img.push_back(std::move(im));
    }
    return VectorMap(ss.alg, std::move(img));
  };
  // analytic derivative only when every q-dependent ingredient has one
  const bool rotor_ok = !f.rotor_at || f.drotor_at;
  const bool pot_ok = !f.potential_at || f.dpotential_at;
  if (rotor_ok && pot_ok) {
    g.dhbar_at = [f](const Multivector& q, const Multivector& dir) {
      const SplitSpace& ss = f.space;
      const Multivector x = ss.project_x(grade_project(q, 1));
      const Multivector y = ss.project_y(grade_project(q, 1));
      const Multivector dx = ss.project_x(grade_project(dir, 1));
      const Multivector dy = ss.project_y(grade_project(dir, 1));
      const Rotor S = detail::ym_rotor(f, x);
      const Multivector dS = detail::ym_drotor(f, x, dx);
      const Multivector Srev = reverse(S.element);
      const Multivector dSrev = reverse(dS);
      std::vector<Multivector> dva;  // d[(y . A_mu)] along dir
      for (int mu = 1; mu <= ss.dim_x; ++mu)
        dva.push_back(grade_project(fat_dot(dy, detail::ym_potential(f, x, mu)) +
                                        fat_dot(y, detail::ym_dpotential(f, x, dx, mu)),
                                    1));
      std::vector<Multivector> img;
      img.reserve(ss.alg.dim());
      for (int k = 1; k <= ss.alg.dim(); ++k) {
        const Multivector ek = Multivector::basis_vector(ss.alg, k);
        Multivector im = grade_project(dSrev * ek * S.element + Srev * ek * dS, 1);
        for (int mu = 1; mu <= ss.dim_x; ++mu)
          im -= ss.x_generator(mu) * (static_cast<double>(ss.alg.signature(mu)) *
                                      scalar_part(fat_dot(dva[mu - 1], ek)));
        img.push_back(std::move(im));
      }
      return VectorMap(ss.alg, std::move(img));
    };
  }
  return g;
}

// the four forms written directly as shear/rotation compositions, bypassing the
// generic adjoint and inversion machinery
inline GaugeForms ym_closed_forms(const YangMillsField& f, const Multivector& q) {
  const SplitSpace& ss = f.space;
  const Multivector x = ss.project_x(grade_project(q, 1));
  const Multivector y = ss.project_y(grade_project(q, 1));
  const Rotor S = detail::ym_rotor(f, x);
  const VectorMap rot = rotation_map(S);                        // b -> S b reverse(S)
  const VectorMap rot_rev = rotation_map(S.reversed());         // b -> reverse(S) b S
  auto [us, vs] = detail::ym_shear_data(f, x, y);
  std::vector<Multivector> us_neg, vs_neg;
  for (const auto& u : us) us_neg.push_back(-u);
  for (const auto& v : vs) vs_neg.push_back(-v);
  const VectorMap shear_bar = shear_map(us, vs);
  const VectorMap shear_bar_inv = shear_map(us_neg, vs);
  const VectorMap shear_h = shear_map(vs, us);       // adjoint swaps the two lists
  const VectorMap shear_h_inv = shear_map(vs_neg, us);
  GaugeForms out{compose(rot_rev, shear_bar), compose(shear_h, rot),
                 compose(shear_bar_inv, rot), compose(rot_rev, shear_h_inv)};
  return out;
}

// position map x' = x, y' = R(x) y reverse(R(x)) generated by a field-space rotor field
inline PointMap ym_rotation_point_map(
    const SplitSpace& ss, std::function<Rotor(const Multivector&)> rotor_field,
    std::function<Multivector(const Multivector&, const Multivector&)> drotor = {}) {
  PointMap f;
  f.alg = ss.alg;
  f.forward = [ss, rotor_field](const Multivector& q) {
    const Multivector x = ss.project_x(grade_project(q, 1));
    const Multivector y = ss.project_y(grade_project(q, 1));
    return x + grade_project(rotor_field(x)(y), 1);
  };
  f.inverse = [ss, rotor_field](const Multivector& qp) {
    const Multivector x = ss.project_x(grade_project(qp, 1));
    const Multivector yp = ss.project_y(grade_project(qp, 1));
    return x + grade_project(rotor_field(x).reversed()(yp), 1);
  };
  if (drotor) {
    f.jacobian = [ss, rotor_field, drotor](const Multivector& q) {
      const Multivector x = ss.project_x(grade_project(q, 1));
      const Multivector y = ss.project_y(grade_project(q, 1));
      const Rotor R = rotor_field(x);
      std::vector<Multivector> img;
      img.reserve(ss.alg.dim());
      for (int k = 1; k <= ss.alg.dim(); ++k) {
        const Multivector ek = Multivector::basis_vector(ss.alg, k);
        if (ss.is_x_generator(k)) {
          const Multivector dR = drotor(x, ek);
          img.push_back(ek + grade_project(dR * y * reverse(R.element) +
                                               R.element * y * reverse(dR),
                                           1));
        } else {
          img.push_back(grade_project(R(ek), 1));
        }
      }
      return VectorMap(ss.alg, std::move(img));
    };
  }
  return f;
}

// curvature bivector of the potential: F_mu_nu = d_mu A_nu - d_nu A_mu - A_mu x A_nu
inline Multivector ym_field_bivector(const YangMillsField& f, const Multivector& x, int mu,
                                     int nu) {
  const Multivector emu = f.space.x_generator(mu);
  const Multivector enu = f.space.x_generator(nu);
  const Multivector Amu = detail::ym_potential(f, x, mu);
  const Multivector Anu = detail::ym_potential(f, x, nu);
  return detail::ym_dpotential(f, x, emu, nu) - detail::ym_dpotential(f, x, enu, mu) -
         commutator(Amu, Anu);
}

// covariant derivative D_mu w = d_mu w + w . A_mu of a field-space vector field w(x);
// pass the analytic derivative when available, otherwise central differences are used
inline Multivector ym_covariant_derivative(
    const YangMillsField& f, const std::function<Multivector(const Multivector&)>& w_of_x,
    const std::function<Multivector(const Multivector&, int)>& dw_of_x, const Multivector& x,
    int mu) {
  Multivector dw(f.space.alg);
  if (dw_of_x) {
    dw = dw_of_x(x, mu);
  } else {
    const double h = fd_step(coeff_norm(x));
    const Multivector emu = f.space.x_generator(mu);
    dw = (w_of_x(x + emu * h) - w_of_x(x - emu * h)) * (1.0 / (2.0 * h));
  }
  return dw + grade_project(fat_dot(w_of_x(x), detail::ym_potential(f, x, mu)), 1);
}

// (D_mu D_nu - D_nu D_mu) y for a configuration y(x); one finite-difference level on the
// outer derivative, the inner covariant derivative evaluated as above
inline Multivector ym_covariant_commutator(
    const YangMillsField& f, const std::function<Multivector(const Multivector&)>& y_of_x,
    const std::function<Multivector(const Multivector&, int)>& dy_of_x, const Multivector& x,
    int mu, int nu) {
  auto inner = [&](const Multivector& p, int m) {
    return ym_covariant_derivative(f, y_of_x, dy_of_x, p, m);
  };
  auto outer = [&](int m, int n) {  // D_m applied to the field p -> inner(p, n)
    const double h = fd_step(coeff_norm(x));
    const Multivector em = f.space.x_generator(m);
    const Multivector dw = (inner(x + em * h, n) - inner(x - em * h, n)) * (1.0 / (2.0 * h));
    return dw + grade_project(fat_dot(inner(x, n), detail::ym_potential(f, x, m)), 1);
  };
  return outer(mu, nu) - outer(nu, mu);
}

//--------------------------------------------------------------------------------------
// Electromagnetic specialization: two-dimensional field space, S = exp(-I_y phi / 2),
// A_mu = alpha_mu I_y

inline YangMillsField make_em_field(
    const SplitSpace& ss, std::function<double(const Multivector&)> phi_at,
    std::function<double(const Multivector&, int)> alpha_at,
    std::function<double(const Multivector&, const Multivector&)> dphi_at = {},
    std::function<double(const Multivector&, const Multivector&, int)> dalpha_at = {}) {
  if (ss.dim_y() != 2)
    throw ga_error("make_em_field: the electromagnetic form needs a two-dimensional field space");
  YangMillsField f;
  f.space = ss;
  const Multivector Iy = ss.pseudoscalar_y();
  if (phi_at) {
    f.rotor_at = [Iy, phi_at](const Multivector& x) {
      return rotor_from_bivector(Iy * phi_at(x));
    };
    if (dphi_at) {
      // d exp(-I_y phi/2) = -(I_y/2) dphi exp(-I_y phi/2): the generator commutes with itself
      f.drotor_at = [Iy, phi_at, dphi_at](const Multivector& x, const Multivector& dx) {
        const Rotor S = rotor_from_bivector(Iy * phi_at(x));
        return Iy * S.element * (-0.5 * dphi_at(x, dx));
      };
    }
  }
  if (alpha_at) {
    f.potential_at = [Iy, alpha_at](const Multivector& x, int mu) { return Iy * alpha_at(x, mu); };
    if (dalpha_at) {
      f.dpotential_at = [Iy, dalpha_at](const Multivector& x, const Multivector& dx, int mu) {
        return Iy * dalpha_at(x, dx, mu);
      };
    }
  }
  return f;
}

}  // namespace gafield
