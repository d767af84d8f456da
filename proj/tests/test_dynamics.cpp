#include <catch2/catch_amalgamated.hpp>

#include "gafield/dynamics.hpp"
#include "gafield/sampling.hpp"

using namespace gafield;

namespace {

double diff_norm(const Multivector& a, const Multivector& b) { return coeff_norm(a - b); }

// hbar = diag(1, 1/r) so that g = diag(1, r^2): polar coordinates on the plane
GaugeField polar_gauge() {
  const Algebra alg = Algebra::euclidean(2);
  GaugeField g;
  g.alg = alg;
  g.hbar_at = [alg](const Multivector& q) {
    return VectorMap::diagonal(alg, {1.0, 1.0 / q.vec(1)});
  };
  g.dhbar_at = [alg](const Multivector& q, const Multivector& dir) {
    const double r = q.vec(1);
    std::vector<Multivector> img{
        Multivector(alg), Multivector::basis_vector(alg, 2) * (-dir.vec(1) / (r * r))};
    return VectorMap(alg, std::move(img));
  };
  return g;
}

// hbar^{-1} = s(q) Id with s = 1 + 0.25 sin(q1 + 0.5 q2): a smooth conformal metric
GaugeField conformal_gauge() {
  const Algebra alg = Algebra::euclidean(2);
  auto s = [](const Multivector& q) { return 1.0 + 0.25 * std::sin(q.vec(1) + 0.5 * q.vec(2)); };
  auto ds = [](const Multivector& q, const Multivector& dir) {
    return 0.25 * std::cos(q.vec(1) + 0.5 * q.vec(2)) * (dir.vec(1) + 0.5 * dir.vec(2));
  };
  GaugeField g;
  g.alg = alg;
  g.hbar_at = [alg, s](const Multivector& q) {
    return VectorMap::identity(alg) * (1.0 / s(q));
  };
  g.dhbar_at = [alg, s, ds](const Multivector& q, const Multivector& dir) {
    const double sq = s(q);
    return VectorMap::identity(alg) * (-ds(q, dir) / (sq * sq));
  };
  return g;
}

Multivector vec2(const Algebra& alg, double a, double b) {
  Multivector v(alg);
  v.vec(1) = a;
  v.vec(2) = b;
  return v;
}

}  // namespace

TEST_CASE("christoffel symbols: polar worked example and symmetry", "[dynamics]") {
  const auto g = polar_gauge();
  const auto mf = metric_field_from_gauge(g);
  const Algebra alg = g.alg;
  const double r = 1.7;
  const Multivector q = vec2(alg, r, 0.6);

  // metric components diag(1, r^2)
  const auto [lo, up] = metric_from_gauge(g, q, generator_frame(alg));
  CHECK(lo[0][0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(lo[1][1] == Catch::Approx(r * r).margin(1e-12));
  CHECK(lo[0][1] == Catch::Approx(0.0).margin(1e-13));

  const auto C = christoffel_symbols(mf, q);
  for (int mu = 0; mu < 2; ++mu)
    for (int lam = 0; lam < 2; ++lam)
      for (int kap = 0; kap < 2; ++kap) {
        double want = 0.0;
        if (mu == 0 && lam == 1 && kap == 1) want = -r;
        if (mu == 1 && lam != kap) want = 1.0 / r;
        CHECK(C[mu][lam][kap] == Catch::Approx(want).margin(1e-9));
      }

  // constant gauge field: no symbols at all
  GaugeField cg;
  cg.alg = alg;
  cg.hbar_at = [alg](const Multivector&) { return VectorMap::diagonal(alg, {2.0, 0.5}); };
  const auto C0 = christoffel_symbols(metric_field_from_gauge(cg), q);
  for (const auto& plane : C0)
    for (const auto& row : plane)
      for (double x : row) CHECK(std::fabs(x) < 1e-12);

  // lower-index symmetry, and agreement between the gauge route and the
  // component-matrix route with finite differences
  Rng rng(90);
  const Algebra a3 = Algebra::euclidean(3);
  const auto box = Box::cube(3, -0.7, 0.7);
  const auto pg = random_polynomial_gauge(a3, rng, 0.2, box);
  const auto mf3 = metric_field_from_gauge(pg);
  const auto comp_field = metric_field_from_components(a3, [pg, a3](const Multivector& p) {
    return metric_from_gauge(pg, p, generator_frame(a3)).first;
  });
  for (const auto& p : box_points(a3, box, 3)) {
    const auto C3 = christoffel_symbols(mf3, p);
    const auto C3c = christoffel_symbols(comp_field, p);
    for (int mu = 0; mu < 3; ++mu)
      for (int lam = 0; lam < 3; ++lam)
        for (int kap = 0; kap < 3; ++kap) {
          CHECK(C3[mu][lam][kap] == Catch::Approx(C3[mu][kap][lam]).margin(1e-12));
          CHECK(C3[mu][lam][kap] == Catch::Approx(C3c[mu][lam][kap]).margin(1e-6));
        }
  }
}

TEST_CASE("geodesic acceleration equals the component form", "[dynamics]") {
  Rng rng(91);
  for (const auto& alg : {Algebra::euclidean(2), Algebra::minkowski(3)}) {
    const auto box = Box::cube(alg.dim(), -0.7, 0.7);
    const auto g = random_polynomial_gauge(alg, rng, 0.2, box);
    auto g_fd = g;
    g_fd.dhbar_at = nullptr;
    const auto mf = metric_field_from_gauge(g);
    const auto mf_fd = metric_field_from_gauge(g_fd);
    for (const auto& q : box_points(alg, box, 4)) {
      const auto C = christoffel_symbols(mf, q);
      for (int rep = 0; rep < 3; ++rep) {
        const auto U = random_vector(alg, rng);
        Multivector want(alg);
        for (int mu = 1; mu <= alg.dim(); ++mu) {
          double s = 0.0;
          for (int lam = 1; lam <= alg.dim(); ++lam)
            for (int kap = 1; kap <= alg.dim(); ++kap)
              s -= C[mu - 1][lam - 1][kap - 1] * U.vec(lam) * U.vec(kap);
          want.vec(mu) = s;
        }
        CHECK(diff_norm(geodesic_acceleration(mf, q, U), want) < 1e-9);
        CHECK(diff_norm(geodesic_acceleration(mf_fd, q, U), want) < 1e-6);
      }
    }
  }

  // flat space: no acceleration
  const auto id = metric_field_from_gauge(identity_gauge_field(Algebra::euclidean(2)));
  Multivector q0 = vec2(Algebra::euclidean(2), 0.3, -0.4);
  CHECK(coeff_norm(geodesic_acceleration(id, q0, vec2(Algebra::euclidean(2), 0.7, 0.1))) <
        1e-14);
}

TEST_CASE("geodesics: straight lines, exactly and through polar coordinates", "[dynamics]") {
  const Algebra alg = Algebra::euclidean(2);

  // flat metric: the integrator reproduces q0 + tau U0 to machine accuracy
  const auto flat = metric_field_from_gauge(identity_gauge_field(alg));
  const auto qf = vec2(alg, 0.2, -0.3);
  const auto Uf = vec2(alg, 0.7, 0.4);
  const auto line = integrate_geodesic(flat, qf, Uf, 0.05, 40);
  for (const auto& s : line) {
    CHECK(diff_norm(s.q, qf + Uf * s.tau) < 1e-12);
    CHECK(s.norm_residual < 1e-12);
  }

  // polar coordinates: geodesics map to straight lines in the cartesian picture
  const auto mf = metric_field_from_gauge(polar_gauge());
  const double r0 = 1.5, th0 = 0.3;
  const auto q0 = vec2(alg, r0, th0);
  const auto U0 = vec2(alg, 0.2, 0.15);
  const KillingCandidate rot{[alg](const Multivector& p) {
                               (void)p;
                               return Multivector::basis_vector(alg, 2);
                             },
                             nullptr};
  const auto traj = integrate_geodesic(mf, q0, U0, 2e-3, 500, {rot});

  const double x0 = r0 * std::cos(th0), y0 = r0 * std::sin(th0);
  const double vx = U0.vec(1) * std::cos(th0) - r0 * std::sin(th0) * U0.vec(2);
  const double vy = U0.vec(1) * std::sin(th0) + r0 * std::cos(th0) * U0.vec(2);
  for (const auto& s : traj) {
    const double x = s.q.vec(1) * std::cos(s.q.vec(2));
    const double y = s.q.vec(1) * std::sin(s.q.vec(2));
    CHECK(std::fabs(x - (x0 + vx * s.tau)) < 1e-6);
    CHECK(std::fabs(y - (y0 + vy * s.tau)) < 1e-6);
    CHECK(s.norm_residual < 1e-8);
    // angular momentum r^2 dtheta/dtau stays put
    CHECK(std::fabs(s.conserved[0] - traj.front().conserved[0]) < 1e-8);
  }
}

TEST_CASE("integrator convergence is fourth order", "[dynamics]") {
  const auto mf = metric_field_from_gauge(conformal_gauge());
  const Algebra alg = mf.alg;
  const auto q0 = vec2(alg, 0.1, -0.2);
  const auto U0 = vec2(alg, 0.6, 0.3);
  const double T = 0.8;

  auto endpoint = [&](int steps) {
    return integrate_geodesic(mf, q0, U0, T / steps, steps).back().q;
  };
  const auto ref = endpoint(320);
  const double e1 = diff_norm(endpoint(20), ref);
  const double e2 = diff_norm(endpoint(40), ref);
  CHECK(e1 > 1e-12);  // errors stay above roundoff so the ratio is meaningful
  const double ratio = e1 / e2;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("killing residuals: flat catalog, polar rotation, dilation", "[dynamics]") {
  const Algebra e2alg = Algebra::euclidean(2);
  const auto flat = metric_field_from_gauge(identity_gauge_field(e2alg));

  const KillingCandidate rotation{
      [e2alg](const Multivector& p) { return vec2(e2alg, -p.vec(2), p.vec(1)); },
      [e2alg](const Multivector&) {
        return VectorMap(e2alg, {Multivector::basis_vector(e2alg, 2),
                                 Multivector::basis_vector(e2alg, 1) * -1.0});
      }};
  const KillingCandidate translation{
      [e2alg](const Multivector&) { return Multivector::basis_vector(e2alg, 1); }, nullptr};
  const KillingCandidate dilation{[](const Multivector& p) { return p; }, nullptr};

  const auto q = vec2(e2alg, 0.4, -0.7);
  CHECK(killing_residual_norm(flat, rotation, q) < 1e-10);
  CHECK(killing_residual_norm(flat, translation, q) < 1e-10);
  // finite-difference jacobian route stays within tolerance as well
  const KillingCandidate rotation_fd{rotation.at, nullptr};
  CHECK(killing_residual_norm(flat, rotation_fd, q) < 1e-9);
  // the dilation is not a symmetry: K = 2 delta
  const auto Kd = killing_residual_matrix(flat, dilation, q);
  CHECK(Kd[0][0] == Catch::Approx(2.0).margin(1e-9));
  CHECK(Kd[1][1] == Catch::Approx(2.0).margin(1e-9));
  CHECK(Kd[0][1] == Catch::Approx(0.0).margin(1e-9));

  // indefinite signature: the boost mixes the two coordinates and is Killing
  const Algebra m2 = Algebra::minkowski(2);
  const auto flat_m = metric_field_from_gauge(identity_gauge_field(m2));
  const KillingCandidate boost{
      [m2](const Multivector& p) { return vec2(m2, p.vec(2), p.vec(1)); }, nullptr};
  Multivector qm = vec2(m2, 0.3, 0.9);
  CHECK(killing_residual_norm(flat_m, boost, qm) < 1e-9);

  // polar metric: rotation generator survives, radial translation does not
  const auto polar = metric_field_from_gauge(polar_gauge());
  const double r = 1.7;
  const auto qp = vec2(e2alg, r, 0.6);
  const KillingCandidate angular{
      [e2alg](const Multivector&) { return Multivector::basis_vector(e2alg, 2); }, nullptr};
  const KillingCandidate radial{
      [e2alg](const Multivector&) { return Multivector::basis_vector(e2alg, 1); }, nullptr};
  CHECK(killing_residual_norm(polar, angular, qp) < 1e-10);
  const auto Kr = killing_residual_matrix(polar, radial, qp);
  CHECK(Kr[1][1] == Catch::Approx(2.0 * r).margin(1e-8));

  // conserved charge P . v = (sign) Lambda U . g(v)
  const auto e1 = Multivector::basis_vector(e2alg, 1);
  const auto e2v = Multivector::basis_vector(e2alg, 2);
  const KillingCandidate t1{[e1](const Multivector&) { return e1; }, nullptr};
  CHECK(conserved_quantity(flat, q, e1, t1) == Catch::Approx(1.0).margin(1e-14));
  CHECK(conserved_quantity(flat, q, e2v, t1) == Catch::Approx(0.0).margin(1e-14));
  CHECK(conserved_quantity(flat, q, e1, t1, 2.5, -1) == Catch::Approx(-2.5).margin(1e-14));
}

TEST_CASE("symmetry residual equals the killing quadratic form", "[dynamics]") {
  Rng rng(92);
  const Hamiltonian H1 = string_hamiltonian(Algebra::euclidean(2), 1.0);
  // multivector derivative of the membrane Hamiltonian is reverse(P)
  const auto Ptest = random_multivector(Algebra::euclidean(2), rng);
  const auto numeric = multivector_derivative(
      [&](const Multivector& X) { return H1.value(Ptest, X); }, Ptest);
  CHECK(diff_norm(numeric, reverse(Ptest)) < 1e-8);

  for (const auto& alg : {Algebra::euclidean(2), Algebra::minkowski(3)}) {
    const auto box = Box::cube(alg.dim(), -0.7, 0.7);
    const auto g = random_polynomial_gauge(alg, rng, 0.2, box);
    const auto mf = metric_field_from_gauge(g);
    const Hamiltonian H = string_hamiltonian(alg, 1.0);
    // polynomial candidate field with analytic jacobian
    const auto vp = random_cubic_diffeo(alg, rng, 0.3, box);
    const KillingCandidate v{[vp](const Multivector& p) { return vp.eval(p); },
                             [vp](const Multivector& p) { return vp.jacobian(p); }};
    for (const auto& q : box_points(alg, box, 4)) {
      const auto a = random_vector(alg, rng);
      const auto P = metric_eval(mf, q).apply_vector(a);
      const double res = symmetry_condition_residual(g, H, v, q, P);
      const auto K = killing_residual_matrix(mf, v, q);
      double quad = 0.0;
      for (int mu = 1; mu <= alg.dim(); ++mu)
        for (int nu = 1; nu <= alg.dim(); ++nu)
          quad += K[mu - 1][nu - 1] * a.vec(mu) * a.vec(nu);
      CHECK(res == Catch::Approx(-0.5 * quad).margin(1e-8));
    }
  }

  // rigid rotation in the plane: a symmetry of the flat string Hamiltonian even though
  // the Hamiltonian-independent sufficient condition fails
  const Algebra e2alg = Algebra::euclidean(2);
  const auto gid = identity_gauge_field(e2alg);
  const Hamiltonian H = string_hamiltonian(e2alg, 1.0);
  const KillingCandidate rotation{
      [e2alg](const Multivector& p) { return vec2(e2alg, -p.vec(2), p.vec(1)); }, nullptr};
  const KillingCandidate translation{
      [e2alg](const Multivector&) { return Multivector::basis_vector(e2alg, 1); }, nullptr};
  const auto q = vec2(e2alg, 0.4, -0.2);
  const auto P = vec2(e2alg, 0.8, 0.3);
  CHECK(std::fabs(symmetry_condition_residual(gid, H, rotation, q, P)) < 1e-9);
  CHECK(sufficient_symmetry_residual(gid, rotation, q, P) > 1e-2);
  CHECK(sufficient_symmetry_residual(gid, translation, q, P) < 1e-12);
}

TEST_CASE("map-derivative contraction halves into the metric derivative", "[dynamics]") {
  // sum_k e^k (d_k hbar^{-1})(h^{-1} U) . U = (1/2) sum_k e^k (d_k g)(U) . U
  Rng rng(93);
  const Algebra alg = Algebra::euclidean(3);
  const auto box = Box::cube(3, -0.7, 0.7);
  const auto g = random_polynomial_gauge(alg, rng, 0.2, box);
  const auto mf = metric_field_from_gauge(g);
  const Frame rec = generator_reciprocal_frame(alg);
  const Frame gen = generator_frame(alg);
  for (const auto& q : box_points(alg, box, 4)) {
    const auto forms = four_forms(g, q);
    const auto U = random_vector(alg, rng);
    Multivector lhs(alg), rhs(alg);
    for (int k = 0; k < 3; ++k) {
      const VectorMap dhi = dhbar_inv(g, q, gen[k], forms);
      lhs += rec[k] * scalar_part(
                          fat_dot(dhi.apply_vector(forms.h_inv.apply_vector(U)), U));
      rhs += rec[k] *
             (0.5 * scalar_part(fat_dot(metric_derivative(mf, q, gen[k]).apply_vector(U), U)));
    }
    CHECK(diff_norm(lhs, rhs) < 1e-9);
  }
}

TEST_CASE("conserved quantities drift within bounds over a thousand steps", "[dynamics]") {
  const Algebra alg = Algebra::euclidean(2);
  const auto mf = metric_field_from_gauge(polar_gauge());
  const KillingCandidate angular{
      [alg](const Multivector&) { return Multivector::basis_vector(alg, 2); }, nullptr};
  const auto traj = integrate_geodesic(mf, vec2(alg, 1.4, 0.2), vec2(alg, 0.15, 0.2), 1e-3,
                                       1000, {angular}, 100);
  const double c0 = traj.front().conserved[0];
  for (const auto& s : traj) {
    CHECK(std::fabs(s.conserved[0] - c0) < 1e-8);
    CHECK(s.norm_residual < 1e-8);
  }
}
