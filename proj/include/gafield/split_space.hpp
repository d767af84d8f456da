#pragma once

// Configuration space split into a D-dimensional base ("x-space", arbitrary
// signature) and an N-dimensional field space ("y-space", Euclidean). Generators
// 1..D span x, the rest span y.

#include "gafield/multivector.hpp"

namespace gafield {

struct SplitSpace {
  Algebra alg;
  int dim_x = 0;
  blade_t x_mask = 0, y_mask = 0;

  SplitSpace() = default;

  SplitSpace(Algebra a, int dx) : alg(std::move(a)), dim_x(dx) {
    if (dx < 1 || dx > alg.dim()) throw ga_error("SplitSpace: dim_x out of range");
    x_mask = static_cast<blade_t>((blade_t{1} << dx) - 1);
    y_mask = static_cast<blade_t>(((blade_t{1} << alg.dim()) - 1) & ~x_mask);
    for (int i = dx + 1; i <= alg.dim(); ++i)
      if (alg.signature(i) != 1) throw ga_error("SplitSpace: field space must be Euclidean");
  }

  int dim_y() const { return alg.dim() - dim_x; }

  // pseudoscalars of the two factors
  Multivector pseudoscalar_x() const { return Multivector::basis_blade(alg, x_mask); }
  Multivector pseudoscalar_x_inv() const { return blade_inverse(pseudoscalar_x()); }
  Multivector pseudoscalar_y() const {
    if (dim_y() == 0) throw ga_error("SplitSpace: no field-space generators");
    return Multivector::basis_blade(alg, y_mask);
  }
  Multivector pseudoscalar_y_inv() const { return blade_inverse(pseudoscalar_y()); }

  // keep blades lying entirely in one factor (the scalar blade counts as x)
  Multivector project_x(const Multivector& a) const {
    alg.require_same(a.algebra());
    Multivector out(alg);
    for (std::size_t m = 0; m < a.size(); ++m)
      if ((static_cast<blade_t>(m) & ~x_mask) == 0) out[static_cast<blade_t>(m)] = a[static_cast<blade_t>(m)];
    return out;
  }
  Multivector project_y(const Multivector& a) const {
    alg.require_same(a.algebra());
    Multivector out(alg);
    for (std::size_t m = 1; m < a.size(); ++m)
      if ((static_cast<blade_t>(m) & ~y_mask) == 0) out[static_cast<blade_t>(m)] = a[static_cast<blade_t>(m)];
    return out;
  }

  // 1-based generator index helpers
  bool is_x_generator(int i) const { return i >= 1 && i <= dim_x; }
  Multivector x_generator(int mu) const {  // mu in 1..D
    if (!is_x_generator(mu)) throw ga_error("SplitSpace: x generator index out of range");
    return Multivector::basis_vector(alg, mu);
  }
  Multivector y_generator(int a) const {  // a in 1..N
    if (a < 1 || a > dim_y()) throw ga_error("SplitSpace: y generator index out of range");
    return Multivector::basis_vector(alg, dim_x + a);
  }
};

}  // namespace gafield
