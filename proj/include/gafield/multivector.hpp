#pragma once

// Multivector value type and the product zoo: geometric, outer, Hestenes inner
// (scalar arguments annihilate), fat dot (scalar arguments multiply), commutator.

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "gafield/algebra.hpp"

namespace gafield {

class Multivector {
 public:
  explicit Multivector(Algebra alg) : alg_(std::move(alg)), c_(alg_.size(), 0.0) {}

  static Multivector scalar(const Algebra& alg, double v) {
    Multivector m(alg);
    m.c_[0] = v;
    return m;
  }

  // 1-based generator index
  static Multivector basis_vector(const Algebra& alg, int i) {
    if (i < 1 || i > alg.dim()) throw ga_error("basis_vector: index out of range");
    Multivector m(alg);
    m.c_[blade_t{1} << (i - 1)] = 1.0;
    return m;
  }

  static Multivector basis_blade(const Algebra& alg, blade_t mask) {
    if (mask >= alg.size()) throw ga_error("basis_blade: mask out of range");
    Multivector m(alg);
    m.c_[mask] = 1.0;
    return m;
  }

  static Multivector pseudoscalar(const Algebra& alg) {
    return basis_blade(alg, static_cast<blade_t>(alg.size() - 1));
  }

  static Multivector from_vector(const Algebra& alg, const std::vector<double>& comps) {
    if (static_cast<int>(comps.size()) != alg.dim())
      throw ga_error("from_vector: wrong number of components");
    Multivector m(alg);
    for (int i = 0; i < alg.dim(); ++i) m.c_[blade_t{1} << i] = comps[i];
    return m;
  }

  const Algebra& algebra() const { return alg_; }
  std::size_t size() const { return c_.size(); }

  double operator[](blade_t mask) const { return c_[mask]; }
  double& operator[](blade_t mask) { return c_[mask]; }

  // coefficient of generator i (1-based) in the grade-1 part
  double vec(int i) const { return c_[blade_t{1} << (i - 1)]; }
  double& vec(int i) { return c_[blade_t{1} << (i - 1)]; }

  std::vector<double> vector_components() const {
    std::vector<double> out(alg_.dim());
    for (int i = 0; i < alg_.dim(); ++i) out[i] = c_[blade_t{1} << i];
    return out;
  }

  Multivector& operator+=(const Multivector& o) {
    alg_.require_same(o.alg_);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    alg_.require_same(o.alg_);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Multivector& operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
  }
  Multivector& operator/=(double s) { return (*this) *= (1.0 / s); }

  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, double s) { return a *= s; }
  friend Multivector operator*(double s, Multivector a) { return a *= s; }
  friend Multivector operator/(Multivector a, double s) { return a /= s; }
  friend Multivector operator-(Multivector a) { return a *= -1.0; }

  // geometric product
  friend Multivector operator*(const Multivector& a, const Multivector& b) {
    a.alg_.require_same(b.alg_);
    Multivector out(a.alg_);
    const std::size_t n = a.c_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double ca = a.c_[i];
      if (ca == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const double cb = b.c_[j];
        if (cb == 0.0) continue;
        const blade_t mask = static_cast<blade_t>(i ^ j);
        out.c_[mask] += ca * cb *
                        a.alg_.blade_product_sign(static_cast<blade_t>(i), static_cast<blade_t>(j));
      }
    }
    return out;
  }

 private:
  Algebra alg_;
  std::vector<double> c_;
};

inline Multivector outer(const Multivector& a, const Multivector& b) {
  a.algebra().require_same(b.algebra());
  Multivector out(a.algebra());
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double ca = a[static_cast<blade_t>(i)];
    if (ca == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (i & j) continue;  // common generator -> no wedge term
      const double cb = b[static_cast<blade_t>(j)];
      if (cb == 0.0) continue;
      const blade_t mask = static_cast<blade_t>(i | j);
      out[mask] += ca * cb * reorder_sign(static_cast<blade_t>(i), static_cast<blade_t>(j));
    }
  }
  return out;
}

inline Multivector operator^(const Multivector& a, const Multivector& b) { return outer(a, b); }

namespace detail {

// grade-|r-s| part of the geometric product of basis blades; for diagonal metrics a
// blade pair contributes exactly when one factor set contains the other
inline bool contraction_pair(blade_t i, blade_t j) { return (i & j) == i || (i & j) == j; }

inline Multivector graded_dot(const Multivector& a, const Multivector& b, bool hestenes) {
  a.algebra().require_same(b.algebra());
  Multivector out(a.algebra());
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double ca = a[static_cast<blade_t>(i)];
    if (ca == 0.0) continue;
    if (hestenes && i == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (hestenes && j == 0) continue;
      if (!contraction_pair(static_cast<blade_t>(i), static_cast<blade_t>(j))) continue;
      const double cb = b[static_cast<blade_t>(j)];
      if (cb == 0.0) continue;
      const blade_t mask = static_cast<blade_t>(i ^ j);
      out[mask] += ca * cb *
                   a.algebra().blade_product_sign(static_cast<blade_t>(i), static_cast<blade_t>(j));
    }
  }
  return out;
}

}  // namespace detail

// Hestenes inner product: <A_r B_s>_{|r-s|}, zero whenever either factor is scalar
inline Multivector inner(const Multivector& a, const Multivector& b) {
  return detail::graded_dot(a, b, true);
}

// grade-|r-s| part of the geometric product with scalars multiplying through;
// equals inner() whenever both grades are >= 1
inline Multivector fat_dot(const Multivector& a, const Multivector& b) {
  return detail::graded_dot(a, b, false);
}

inline Multivector commutator(const Multivector& a, const Multivector& b) {
  return (a * b - b * a) * 0.5;
}

inline Multivector grade_project(const Multivector& a, int r) {
  Multivector out(a.algebra());
  for (std::size_t i = 0; i < a.size(); ++i)
    if (grade_of(static_cast<blade_t>(i)) == r) out[static_cast<blade_t>(i)] = a[static_cast<blade_t>(i)];
  return out;
}

inline Multivector reverse(const Multivector& a) {
  Multivector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int r = grade_of(static_cast<blade_t>(i));
    if (((r * (r - 1)) / 2) & 1) out[static_cast<blade_t>(i)] = -a[static_cast<blade_t>(i)];
  }
  return out;
}

inline double scalar_part(const Multivector& a) { return a[0]; }

inline double coeff_norm(const Multivector& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double v = a[static_cast<blade_t>(i)];
    s += v * v;
  }
  return std::sqrt(s);
}

inline double max_abs_coeff(const Multivector& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[static_cast<blade_t>(i)]));
  return m;
}

inline std::vector<int> grades_present(const Multivector& a, double tol = 0.0) {
  std::vector<int> out;
  std::vector<bool> seen(static_cast<std::size_t>(a.algebra().dim()) + 1, false);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::fabs(a[static_cast<blade_t>(i)]) > tol) {
      const int r = grade_of(static_cast<blade_t>(i));
      if (!seen[r]) {
        seen[r] = true;
        out.push_back(r);
      }
    }
  }
  return out;
}

inline bool is_homogeneous(const Multivector& a, int* grade_out = nullptr,
                           double rel_tol = 1e-12) {
  const double scale = max_abs_coeff(a);
  const auto g = grades_present(a, scale * rel_tol);
  if (g.size() > 1) return false;
  if (grade_out) *grade_out = g.empty() ? 0 : g.front();
  return true;
}

// |A| = sqrt(|reverse(A)·A|); defined for homogeneous arguments only
inline double magnitude(const Multivector& a) {
  int g = 0;
  if (!is_homogeneous(a, &g))
    throw ga_error("magnitude: argument has mixed grade");
  return std::sqrt(std::fabs(scalar_part(reverse(a) * a)));
}

// inverse of an invertible blade (or any versor): reverse(A) / <A reverse(A)>_0
inline Multivector blade_inverse(const Multivector& a) {
  const Multivector r = reverse(a);
  const double s = scalar_part(a * r);
  if (s == 0.0 || !std::isfinite(1.0 / s)) throw singular_map("blade_inverse: null blade", s);
  return r / s;
}

inline std::string to_string(const Multivector& a, double tol = 0.0) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double v = a[static_cast<blade_t>(i)];
    if (std::fabs(v) <= tol) continue;
    std::snprintf(buf, sizeof buf, "%.12g", v);
    if (!out.empty()) out += v < 0 ? " " : " + ";
    out += buf;
    if (i != 0) {
      out += "*";
      out += blade_name(static_cast<blade_t>(i), a.algebra().dim());
    }
  }
  return out.empty() ? "0" : out;
}

}  // namespace gafield
