#pragma once

// Vector frames and reciprocal frames: e^j = (-1)^{j-1} (e_1^...^ě_j^...^e_n) E_n^{-1},
// so that e^j · e_k = δ^j_k.

#include <vector>

#include "gafield/multivector.hpp"

namespace gafield {

struct Frame {
  std::vector<Multivector> vectors;

  int size() const { return static_cast<int>(vectors.size()); }
  const Multivector& operator[](int j) const { return vectors[j]; }  // 0-based
};

inline Frame generator_frame(const Algebra& alg) {
  Frame f;
  f.vectors.reserve(alg.dim());
  for (int i = 1; i <= alg.dim(); ++i) f.vectors.push_back(Multivector::basis_vector(alg, i));
  return f;
}

// reciprocal of the orthonormal generator frame: e^j = signature_j * e_j
inline Frame generator_reciprocal_frame(const Algebra& alg) {
  Frame f;
  f.vectors.reserve(alg.dim());
  for (int i = 1; i <= alg.dim(); ++i)
    f.vectors.push_back(Multivector::basis_vector(alg, i) * static_cast<double>(alg.signature(i)));
  return f;
}

inline Multivector frame_volume(const Frame& f) {
  if (f.vectors.empty()) throw ga_error("frame_volume: empty frame");
  Multivector vol = f.vectors[0];
  for (int j = 1; j < f.size(); ++j) vol = outer(vol, f.vectors[j]);
  return vol;
}

inline Frame reciprocal_frame(const Frame& f) {
  const int n = f.size();
  if (n == 0) throw ga_error("reciprocal_frame: empty frame");
  const Algebra& alg = f.vectors[0].algebra();
  const Multivector vol = frame_volume(f);
  const double vol2 = scalar_part(vol * reverse(vol));
  double scale = 1.0;
  for (const auto& v : f.vectors) scale *= std::max(coeff_norm(v), 1e-300);
  if (std::fabs(vol2) < 1e-20 * scale * scale)
    throw singular_map("reciprocal_frame: degenerate or null frame volume", vol2);
  const Multivector vol_inv = blade_inverse(vol);

  Frame out;
  out.vectors.reserve(n);
  for (int j = 0; j < n; ++j) {
    Multivector part = Multivector::scalar(alg, (j % 2 == 0) ? 1.0 : -1.0);
    bool any = false;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      part = any ? outer(part, f.vectors[k]) : part * f.vectors[k];
      any = true;
    }
    out.vectors.push_back(grade_project(part * vol_inv, 1));
  }
  return out;
}

}  // namespace gafield
