#pragma once

// Linear vector maps extended to the whole algebra as outermorphisms, their
// adjoints/determinants/inverses, antisymmetric maps <-> bivectors, shears, rotors.

#include <functional>
#include <utility>
#include <vector>

#include "gafield/frame.hpp"
#include "gafield/multivector.hpp"

namespace gafield {

class VectorMap {
 public:
  VectorMap(Algebra alg, std::vector<Multivector> images) : alg_(std::move(alg)), img_(std::move(images)) {
    if (static_cast<int>(img_.size()) != alg_.dim())
      throw ga_error("VectorMap: need one image per generator");
    for (auto& im : img_) {
      alg_.require_same(im.algebra());
      im = grade_project(im, 1);
    }
  }

  static VectorMap identity(const Algebra& alg) {
    std::vector<Multivector> img;
    img.reserve(alg.dim());
    for (int i = 1; i <= alg.dim(); ++i) img.push_back(Multivector::basis_vector(alg, i));
    return VectorMap(alg, std::move(img));
  }

  static VectorMap diagonal(const Algebra& alg, const std::vector<double>& d) {
    if (static_cast<int>(d.size()) != alg.dim()) throw ga_error("VectorMap::diagonal: size mismatch");
    std::vector<Multivector> img;
    img.reserve(alg.dim());
    for (int i = 1; i <= alg.dim(); ++i) img.push_back(Multivector::basis_vector(alg, i) * d[i - 1]);
    return VectorMap(alg, std::move(img));
  }

  // M[i][k]: coefficient of e_{i+1} in the image of e_{k+1}
  static VectorMap from_matrix(const Algebra& alg, const std::vector<std::vector<double>>& M) {
    const int n = alg.dim();
    std::vector<Multivector> img(static_cast<std::size_t>(n), Multivector(alg));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) img[k].vec(i + 1) = M[i][k];
    return VectorMap(alg, std::move(img));
  }

  const Algebra& algebra() const { return alg_; }
  const Multivector& image(int k) const { return img_[k - 1]; }  // image of e_k, 1-based

  std::vector<std::vector<double>> matrix() const {
    const int n = alg_.dim();
    std::vector<std::vector<double>> M(n, std::vector<double>(n, 0.0));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) M[i][k] = img_[k].vec(i + 1);
    return M;
  }

  Multivector apply_vector(const Multivector& v) const {
    alg_.require_same(v.algebra());
    Multivector out(alg_);
    for (int i = 1; i <= alg_.dim(); ++i) {
      const double c = v.vec(i);
      if (c != 0.0) out += img_[i - 1] * c;
    }
    return out;
  }

  // outermorphism: scalars pass through, blades map to wedges of generator images
  Multivector operator()(const Multivector& a) const {
    alg_.require_same(a.algebra());
    Multivector out(alg_);
    out[0] = a[0];
    for (std::size_t m = 1; m < a.size(); ++m) {
      const double c = a[static_cast<blade_t>(m)];
      if (c == 0.0) continue;
      blade_t rest = static_cast<blade_t>(m);
      int i = std::countr_zero(rest);
      rest &= rest - 1;
      Multivector w = img_[i];
      while (rest) {
        i = std::countr_zero(rest);
        rest &= rest - 1;
        w = outer(w, img_[i]);
      }
      out += w * c;
    }
    return out;
  }

  VectorMap& operator+=(const VectorMap& o) {
    alg_.require_same(o.alg_);
    for (int k = 0; k < alg_.dim(); ++k) img_[k] += o.img_[k];
    return *this;
  }
  VectorMap& operator-=(const VectorMap& o) {
    alg_.require_same(o.alg_);
    for (int k = 0; k < alg_.dim(); ++k) img_[k] -= o.img_[k];
    return *this;
  }
  VectorMap& operator*=(double s) {
    for (auto& im : img_) im *= s;
    return *this;
  }
  friend VectorMap operator+(VectorMap a, const VectorMap& b) { return a += b; }
  friend VectorMap operator-(VectorMap a, const VectorMap& b) { return a -= b; }
  friend VectorMap operator*(VectorMap a, double s) { return a *= s; }
  friend VectorMap operator*(double s, VectorMap a) { return a *= s; }

 private:
  Algebra alg_;
  std::vector<Multivector> img_;
};

// f after g
inline VectorMap compose(const VectorMap& f, const VectorMap& g) {
  f.algebra().require_same(g.algebra());
  std::vector<Multivector> img;
  img.reserve(f.algebra().dim());
  for (int k = 1; k <= f.algebra().dim(); ++k) img.push_back(f.apply_vector(g.image(k)));
  return VectorMap(f.algebra(), std::move(img));
}

// metric adjoint: adjoint(m)(b) · a = b · m(a)
inline VectorMap adjoint(const VectorMap& m) {
  const Algebra& alg = m.algebra();
  const int n = alg.dim();
  std::vector<Multivector> img(static_cast<std::size_t>(n), Multivector(alg));
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      img[k - 1].vec(i) = alg.signature(i) * alg.signature(k) * m.image(i).vec(k);
  return VectorMap(alg, std::move(img));
}

// det(m) = I^{-1} m(I), the scalar the outermorphism scales the pseudoscalar by
inline double determinant(const VectorMap& m) {
  const Algebra& alg = m.algebra();
  const Multivector I = Multivector::pseudoscalar(alg);
  return scalar_part(blade_inverse(I) * m(I));
}

namespace detail {
inline double map_scale(const VectorMap& m) {
  double s = 1.0;
  for (int k = 1; k <= m.algebra().dim(); ++k) s *= std::max(coeff_norm(m.image(k)), 1e-300);
  return s;
}
}  // namespace detail

// explicit inverse: m^{-1}(A) = adjoint(m)(A I) I^{-1} / det(m)
inline VectorMap inverse_map(const VectorMap& m, double rel_tol = 1e-12) {
  const Algebra& alg = m.algebra();
  const double det = determinant(m);
  if (std::fabs(det) <= rel_tol * detail::map_scale(m))
    throw singular_map("inverse_map: determinant below tolerance", det);
  const Multivector I = Multivector::pseudoscalar(alg);
  const Multivector I_inv = blade_inverse(I);
  const VectorMap adj = adjoint(m);
  std::vector<Multivector> img;
  img.reserve(alg.dim());
  for (int k = 1; k <= alg.dim(); ++k) {
    const Multivector e_k = Multivector::basis_vector(alg, k);
    img.push_back(grade_project(adj(e_k * I) * I_inv, 1) / det);
  }
  return VectorMap(alg, std::move(img));
}

// a -> a·A for a bivector A
inline VectorMap antisymmetric_from_bivector(const Multivector& A) {
  const Algebra& alg = A.algebra();
  std::vector<Multivector> img;
  img.reserve(alg.dim());
  for (int k = 1; k <= alg.dim(); ++k)
    img.push_back(inner(Multivector::basis_vector(alg, k), grade_project(A, 2)));
  return VectorMap(alg, std::move(img));
}

// characteristic bivector (1/2) e^j ^ m(e_j); rejects maps that are not
// antisymmetric in the metric (b·m(a) = -a·m(b))
inline Multivector bivector_from_antisymmetric(const VectorMap& m, double rel_tol = 1e-10) {
  const Algebra& alg = m.algebra();
  double worst = 0.0, scale = 0.0;
  for (int i = 1; i <= alg.dim(); ++i)
    for (int j = 1; j <= alg.dim(); ++j) {
      const double mij = alg.signature(i) * m.image(j).vec(i);  // e_i · m(e_j)
      const double mji = alg.signature(j) * m.image(i).vec(j);
      worst = std::max(worst, std::fabs(mij + mji));
      scale = std::max(scale, std::fabs(mij));
    }
  if (worst > rel_tol * std::max(scale, 1.0))
    throw ga_error("bivector_from_antisymmetric: map is not antisymmetric (max violation " +
                   std::to_string(worst) + ")");
  Multivector B(alg);
  const Frame recip = generator_reciprocal_frame(alg);
  for (int j = 1; j <= alg.dim(); ++j) B += outer(recip[j - 1], m.image(j)) * 0.5;
  return B;
}

// S(a) = a + sum_j u_j (v_j · a), with u_j · v_k = 0 for all j,k; under that
// precondition the inverse is the same shear with u -> -u and the adjoint swaps roles
inline VectorMap shear_map(const std::vector<Multivector>& us, const std::vector<Multivector>& vs,
                           double tol = 1e-12) {
  if (us.empty() || us.size() != vs.size()) throw ga_error("shear_map: need matching u/v lists");
  const Algebra& alg = us[0].algebra();
  for (const auto& u : us)
    for (const auto& v : vs) {
      const double d = scalar_part(fat_dot(grade_project(u, 1), grade_project(v, 1)));
      if (std::fabs(d) > tol * std::max(1.0, coeff_norm(u) * coeff_norm(v)))
        throw ga_error("shear_map: u_j · v_k must vanish (got " + std::to_string(d) + ")");
    }
  std::vector<Multivector> img;
  img.reserve(alg.dim());
  for (int k = 1; k <= alg.dim(); ++k) {
    Multivector im = Multivector::basis_vector(alg, k);
    for (std::size_t j = 0; j < us.size(); ++j)
      im += us[j] * scalar_part(fat_dot(vs[j], Multivector::basis_vector(alg, k)));
    img.push_back(im);
  }
  return VectorMap(alg, std::move(img));
}

//--------------------------------------------------------------------------------------
// Rotors

struct Rotor {
  Multivector element;  // even versor with R reverse(R) = 1

  explicit Rotor(Multivector r) : element(std::move(r)) {}

  // sandwich R a reverse(R); grade-preserving on any multivector
  Multivector operator()(const Multivector& a) const { return element * a * reverse(element); }

  Rotor reversed() const { return Rotor(reverse(element)); }
};

namespace detail {

// exp by scaling-and-squaring; series tail kept below 1e-15 of the partial sum
inline Multivector exp_even(const Multivector& X) {
  const Algebra& alg = X.algebra();
  // ||A B||_2 <= sqrt(2^n) ||A||_2 ||B||_2, so this keeps the series ratio <= 1/4
  const double thresh = 0.25 / std::sqrt(static_cast<double>(alg.size()));
  double s = coeff_norm(X);
  int k = 0;
  while (s > thresh) {
    s *= 0.5;
    ++k;
  }
  const double scale = std::ldexp(1.0, -k);
  const Multivector Xs = X * scale;
  Multivector sum = Multivector::scalar(alg, 1.0);
  Multivector term = Multivector::scalar(alg, 1.0);
  for (int m = 1; m <= 64; ++m) {
    term = term * Xs / static_cast<double>(m);
    sum += term;
    // term ratio is <= 1/4 here, so the tail is bounded by ~1.3x the last term
    if (coeff_norm(term) < 0.5e-15 * std::max(1.0, coeff_norm(sum))) break;
  }
  for (int m = 0; m < k; ++m) sum = sum * sum;
  return sum;
}

// signature of the generators a bivector actually involves must be definite or
// Lorentz for exp(-B/2) to cover the rotation group
inline void check_rotor_signature(const Multivector& B) {
  const Algebra& alg = B.algebra();
  blade_t support = 0;
  for (std::size_t m = 0; m < B.size(); ++m)
    if (B[static_cast<blade_t>(m)] != 0.0) support |= static_cast<blade_t>(m);
  int plus = 0, minus = 0;
  for (int i = 1; i <= alg.dim(); ++i)
    if (support & (blade_t{1} << (i - 1))) (alg.signature(i) > 0 ? plus : minus)++;
  if (plus == 0 || minus == 0) return;            // definite
  if (plus == 1 || minus == 1) return;            // Lorentz
  throw ga_error("rotor_from_bivector: generator signature on the bivector support must be "
                 "definite or Lorentz");
}

}  // namespace detail

// R = exp(-B/2) for a bivector B
inline Rotor rotor_from_bivector(const Multivector& B) {
  int g = 0;
  if (!is_homogeneous(B, &g) || (g != 2 && max_abs_coeff(B) != 0.0))
    throw ga_error("rotor_from_bivector: argument must be a bivector");
  detail::check_rotor_signature(B);
  return Rotor(detail::exp_even(B * -0.5));
}

inline VectorMap rotation_map(const Rotor& R) {
  const Algebra& alg = R.element.algebra();
  std::vector<Multivector> img;
  img.reserve(alg.dim());
  for (int k = 1; k <= alg.dim(); ++k)
    img.push_back(grade_project(R(Multivector::basis_vector(alg, k)), 1));
  return VectorMap(alg, std::move(img));
}

// d/dt R(t) reverse(R(t)) by central differences; a bivector up to step error
inline Multivector rotor_log_derivative(const std::function<Rotor(double)>& R, double t,
                                        double step = 0.0) {
  if (step <= 0.0) step = std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::fabs(t));
  const Multivector Rdot = (R(t + step).element - R(t - step).element) / (2.0 * step);
  return Rdot * reverse(R(t).element);
}

}  // namespace gafield
