#pragma once

// Differentiable point transformations q -> f(q) with differential f_(a;q) = a·∂_q f
// and adjoint differential f¯(b;q) = ∂_q f · b. Jacobians come from analytic closures
// when available, otherwise central finite differences.

#include <functional>
#include <random>
#include <vector>

#include "gafield/linmap.hpp"

namespace gafield {

inline double fd_step(double scale) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, scale);
}

struct PointMap {
  Algebra alg;
  std::function<Multivector(const Multivector&)> forward;
  // optional: analytic Jacobian at q (images of generators under the differential)
  std::function<VectorMap(const Multivector&)> jacobian;
  // optional: directional derivative of the Jacobian, d/de J(q + e dir)|_0
  std::function<VectorMap(const Multivector&, const Multivector&)> jacobian_derivative;
  // optional: analytic inverse; Newton fallback is used when absent
  std::function<Multivector(const Multivector&)> inverse;
};

inline VectorMap jacobian_at(const PointMap& f, const Multivector& q) {
  if (f.jacobian) return f.jacobian(q);
  const double h = fd_step(coeff_norm(q));
  std::vector<Multivector> img;
  img.reserve(f.alg.dim());
  for (int k = 1; k <= f.alg.dim(); ++k) {
    const Multivector e_k = Multivector::basis_vector(f.alg, k);
    img.push_back(grade_project((f.forward(q + e_k * h) - f.forward(q - e_k * h)) / (2.0 * h), 1));
  }
  return VectorMap(f.alg, std::move(img));
}

inline Multivector differential(const PointMap& f, const Multivector& q, const Multivector& a) {
  return jacobian_at(f, q)(a);
}

inline Multivector adjoint_differential(const PointMap& f, const Multivector& q,
                                        const Multivector& b) {
  return adjoint(jacobian_at(f, q))(b);
}

// solve f(x) = target by Newton iteration, seeded at `seed`
inline Multivector invert_point(const PointMap& f, const Multivector& target,
                                const Multivector& seed, double tol = 1e-13, int max_iter = 64) {
  if (f.inverse) return f.inverse(target);
  Multivector x = seed;
  const double stop = tol * std::max(1.0, coeff_norm(target));
  for (int it = 0; it < max_iter; ++it) {
    const Multivector r = target - f.forward(x);
    if (coeff_norm(r) <= stop) return x;
    x += inverse_map(jacobian_at(f, x))(r);
  }
  if (coeff_norm(target - f.forward(x)) <= 100.0 * stop) return x;
  throw ga_error("invert_point: Newton iteration did not converge");
}

//--------------------------------------------------------------------------------------
// Polynomial maps: closed-form Jacobian and Jacobian derivative, handy both as test
// diffeomorphisms and as pure-gauge generators.

struct Monomial {
  double coeff;
  std::vector<int> expo;  // one exponent per coordinate
};

struct PolynomialMap {
  Algebra alg;
  std::vector<std::vector<Monomial>> comps;  // comps[i]: component along e_{i+1}

  Multivector eval(const Multivector& q) const {
    Multivector out(alg);
    const auto x = q.vector_components();
    for (int i = 0; i < alg.dim(); ++i) {
      double v = 0.0;
      for (const auto& m : comps[i]) {
        double t = m.coeff;
        for (int k = 0; k < alg.dim(); ++k)
          for (int p = 0; p < m.expo[k]; ++p) t *= x[k];
        v += t;
      }
      out.vec(i + 1) = v;
    }
    return out;
  }

  // partial derivative of component i along coordinate k (0-based), at x
  double partial(int i, int k, const std::vector<double>& x) const {
    double v = 0.0;
    for (const auto& m : comps[i]) {
      if (m.expo[k] == 0) continue;
      double t = m.coeff * m.expo[k];
      for (int j = 0; j < alg.dim(); ++j) {
        const int e = m.expo[j] - (j == k ? 1 : 0);
        for (int p = 0; p < e; ++p) t *= x[j];
      }
      v += t;
    }
    return v;
  }

  double partial2(int i, int k, int l, const std::vector<double>& x) const {
    double v = 0.0;
    for (const auto& m : comps[i]) {
      const int ek = m.expo[k], el = m.expo[l];
      if (ek == 0 || el == 0 || (k == l && ek < 2)) continue;
      double t = m.coeff * (k == l ? ek * (ek - 1) : ek * el);
      for (int j = 0; j < alg.dim(); ++j) {
        int e = m.expo[j];
        if (j == k) --e;
        if (j == l) --e;
        for (int p = 0; p < e; ++p) t *= x[j];
      }
      v += t;
    }
    return v;
  }

  VectorMap jacobian(const Multivector& q) const {
    const auto x = q.vector_components();
    std::vector<Multivector> img(static_cast<std::size_t>(alg.dim()), Multivector(alg));
    for (int k = 0; k < alg.dim(); ++k)
      for (int i = 0; i < alg.dim(); ++i) img[k].vec(i + 1) = partial(i, k, x);
    return VectorMap(alg, std::move(img));
  }

  VectorMap jacobian_derivative(const Multivector& q, const Multivector& dir) const {
    const auto x = q.vector_components();
    const auto d = dir.vector_components();
    std::vector<Multivector> img(static_cast<std::size_t>(alg.dim()), Multivector(alg));
    for (int k = 0; k < alg.dim(); ++k)
      for (int i = 0; i < alg.dim(); ++i) {
        double v = 0.0;
        for (int l = 0; l < alg.dim(); ++l)
          if (d[l] != 0.0) v += partial2(i, k, l, x) * d[l];
        img[k].vec(i + 1) = v;
      }
    return VectorMap(alg, std::move(img));
  }

  PointMap as_point_map() const {
    PointMap f;
    f.alg = alg;
    auto self = *this;
    f.forward = [self](const Multivector& q) { return self.eval(q); };
    f.jacobian = [self](const Multivector& q) { return self.jacobian(q); };
    f.jacobian_derivative = [self](const Multivector& q, const Multivector& dir) {
      return self.jacobian_derivative(q, dir);
    };
    return f;
  }
};

inline PolynomialMap identity_polynomial_map(const Algebra& alg) {
  PolynomialMap p{alg, {}};
  p.comps.resize(alg.dim());
  for (int i = 0; i < alg.dim(); ++i) {
    Monomial m{1.0, std::vector<int>(alg.dim(), 0)};
    m.expo[i] = 1;
    p.comps[i].push_back(m);
  }
  return p;
}

inline PointMap inverse_point_map(const PointMap& f) {
  PointMap g;
  g.alg = f.alg;
  g.forward = [f](const Multivector& q) { return invert_point(f, q, q); };
  g.jacobian = [f](const Multivector& q) {
    const Multivector pre = invert_point(f, q, q);
    return inverse_map(jacobian_at(f, pre));
  };
  g.inverse = [f](const Multivector& q) { return f.forward(q); };
  return g;
}

}  // namespace gafield
