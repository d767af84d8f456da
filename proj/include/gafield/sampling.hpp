#pragma once

// Deterministic sampling helpers: seeded random multivectors/maps and Halton
// low-discrepancy point sets for field evaluation boxes.

#include <random>
#include <vector>

#include "gafield/gauge.hpp"
#include "gafield/pointmap.hpp"

namespace gafield {

using Rng = std::mt19937_64;

inline double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  std::uint64_t i = index;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

struct Box {
  std::vector<std::pair<double, double>> ranges;  // per coordinate

  static Box cube(int n, double lo, double hi) {
    Box b;
    b.ranges.assign(static_cast<std::size_t>(n), {lo, hi});
    return b;
  }
};

// Halton points (bases 2,3,5,...) mapped into the box; index offset skips the
// degenerate first point and lets callers decorrelate batches
inline std::vector<Multivector> box_points(const Algebra& alg, const Box& box, int count,
                                           std::uint64_t offset = 1) {
  static const int bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  const int n = alg.dim();
  if (static_cast<int>(box.ranges.size()) != n) throw ga_error("box_points: box/algebra mismatch");
  std::vector<Multivector> out;
  out.reserve(count);
  for (int p = 0; p < count; ++p) {
    Multivector q(alg);
    for (int k = 0; k < n; ++k) {
      const double t = halton(offset + static_cast<std::uint64_t>(p), bases[k]);
      q.vec(k + 1) = box.ranges[k].first + t * (box.ranges[k].second - box.ranges[k].first);
    }
    out.push_back(q);
  }
  return out;
}

inline double uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

inline Multivector random_multivector(const Algebra& alg, Rng& rng, double amp = 1.0) {
  Multivector m(alg);
  for (std::size_t i = 0; i < alg.size(); ++i) m[static_cast<blade_t>(i)] = uniform(rng, -amp, amp);
  return m;
}

inline Multivector random_blade_grade(const Algebra& alg, Rng& rng, int grade, double amp = 1.0) {
  Multivector m(alg);
  for (std::size_t i = 0; i < alg.size(); ++i)
    if (grade_of(static_cast<blade_t>(i)) == grade) m[static_cast<blade_t>(i)] = uniform(rng, -amp, amp);
  return m;
}

inline Multivector random_vector(const Algebra& alg, Rng& rng, double amp = 1.0) {
  return random_blade_grade(alg, rng, 1, amp);
}

// identity + perturbation, retried until comfortably invertible
inline VectorMap random_vector_map(const Algebra& alg, Rng& rng, double amp = 0.5) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Multivector> img;
    img.reserve(alg.dim());
    for (int k = 1; k <= alg.dim(); ++k)
      img.push_back(Multivector::basis_vector(alg, k) + random_vector(alg, rng, amp));
    VectorMap m(alg, std::move(img));
    if (std::fabs(determinant(m)) > 0.1) return m;
  }
  throw ga_error("random_vector_map: could not draw an invertible map");
}

// identity + small random polynomial perturbation of the generator images,
// rejected until hbar is comfortably invertible on Halton samples of the box
inline GaugeField random_polynomial_gauge(const Algebra& alg, Rng& rng, double amp,
                                          const Box& box, int max_degree = 2,
                                          int check_points = 32) {
  const int n = alg.dim();
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<PolynomialMap> entries;
    for (int k = 0; k < n; ++k) {
      PolynomialMap p{alg, {}};
      p.comps.resize(n);
      p.comps[k].push_back(Monomial{1.0, std::vector<int>(n, 0)});  // identity part
      for (int i = 0; i < n; ++i) {
        const int extra = 1 + static_cast<int>(rng() % 2);
        for (int t = 0; t < extra; ++t) {
          Monomial m{uniform(rng, -amp, amp), std::vector<int>(n, 0)};
          const int degree = 1 + static_cast<int>(rng() % max_degree);
          for (int d = 0; d < degree; ++d) m.expo[rng() % n]++;
          p.comps[i].push_back(m);
        }
      }
      entries.push_back(std::move(p));
    }
    GaugeField g = polynomial_gauge(alg, std::move(entries));
    bool ok = true;
    for (const auto& q : box_points(alg, box, check_points)) {
      if (std::fabs(determinant(g.hbar_at(q))) < 0.3) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw ga_error("random_polynomial_gauge: could not draw an invertible field; lower the amplitude");
}

// identity + small random cubic terms; rejected until the Jacobian determinant is
// bounded away from zero on Halton samples of the box
inline PolynomialMap random_cubic_diffeo(const Algebra& alg, Rng& rng, double amp,
                                         const Box& box, int check_points = 32) {
  const int n = alg.dim();
  for (int attempt = 0; attempt < 200; ++attempt) {
    PolynomialMap p = identity_polynomial_map(alg);
    for (int i = 0; i < n; ++i) {
      const int extra = 2 + static_cast<int>(rng() % 3);
      for (int t = 0; t < extra; ++t) {
        Monomial m{uniform(rng, -amp, amp), std::vector<int>(n, 0)};
        int degree = 1 + static_cast<int>(rng() % 3);
        for (int d = 0; d < degree; ++d) m.expo[rng() % n]++;
        p.comps[i].push_back(m);
      }
    }
    bool ok = true;
    for (const auto& q : box_points(alg, box, check_points)) {
      if (std::fabs(determinant(p.jacobian(q))) < 0.3) {
        ok = false;
        break;
      }
    }
    if (ok) return p;
  }
  throw ga_error("random_cubic_diffeo: could not draw a diffeomorphism; lower the amplitude");
}

}  // namespace gafield
