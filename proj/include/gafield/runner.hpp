#pragma once

// scenario execution: builds gauge fields, metrics, and field configurations from
// expression tables, runs the checks a scenario asks for, and writes deterministic
// CSV tables plus a JSON report. CSV bodies depend only on scenario + seed; wall
// clock and other volatile data live in the report alone.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gafield/dynamics.hpp"
#include "gafield/sampling.hpp"
#include "gafield/scalar_field.hpp"
#include "gafield/scenario.hpp"

namespace gafield {

struct CheckRecord {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct RunOptions {
  std::string out_dir = ".";
  bool has_seed = false;
  std::uint64_t seed = 0;  // overrides the scenario seed when has_seed
  double tolerance_scale = 1.0;
  bool force_fd = false;  // drop analytic derivatives, exercise the FD fallbacks
  bool write_outputs = true;
};

struct Report {
  std::string name;
  std::string kind;
  json scenario;
  std::vector<CheckRecord> checks;
  std::vector<std::string> tables;
  double wall_ms = 0.0;
  long step_count = 0;
  bool pass = true;

  json to_json() const {
    json jc = json::array();
    for (const auto& c : checks)
      jc.push_back({{"name", c.name},
                    {"residual", c.residual},
                    {"tolerance", c.tolerance},
                    {"pass", c.pass}});
    return json{{"name", name},     {"kind", kind},           {"scenario", scenario},
                {"checks", jc},     {"tables", tables},       {"wall_ms", wall_ms},
                {"steps", step_count}, {"pass", pass}};
  }
};

namespace detail {

inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// write-then-rename so a crash never leaves a half-written table behind
inline void write_file_atomic(const std::filesystem::path& path, const std::string& body) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ga_error("cannot write '" + tmp.string() + "'");
    out << body;
    if (!out.flush()) throw ga_error("short write on '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

inline CoordinateExpression entry_expression(const Algebra& alg, const json& v,
                                             const std::string& where) {
  try {
    if (v.is_string()) return CoordinateExpression(alg, v.get<std::string>());
    if (v.is_number()) return CoordinateExpression(alg, csv_num(v.get<double>()));
  } catch (const ga_error& e) {
    throw ga_error("scenario field '" + where + "': " + e.what());
  }
  throw ga_error("scenario field '" + where + "': expected an expression string or number");
}

// square matrix of coordinate expressions; row i, column k gives the e_{i+1}
// coefficient of the image of the k-th generator
struct ExprMatrix {
  Algebra alg{1, {1}};
  std::vector<std::vector<CoordinateExpression>> m;

  VectorMap at(const Multivector& q) const {
    const int n = alg.dim();
    std::vector<Multivector> img;
    img.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      Multivector im(alg);
      for (int i = 0; i < n; ++i)
        im.vec(i + 1) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)](q);
      img.push_back(im);
    }
    return VectorMap(alg, std::move(img));
  }

  VectorMap deriv(const Multivector& q, const Multivector& dir) const {
    const int n = alg.dim();
    std::vector<Multivector> img;
    img.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      Multivector im(alg);
      for (int i = 0; i < n; ++i)
        im.vec(i + 1) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].deriv(q, dir);
      img.push_back(im);
    }
    return VectorMap(alg, std::move(img));
  }

  std::vector<std::vector<double>> values(const Multivector& q) const {
    const int n = alg.dim();
    std::vector<std::vector<double>> out(static_cast<std::size_t>(n),
                                         std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        out[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)](q);
    return out;
  }
};

inline ExprMatrix matrix_from_json(const Algebra& alg, const json& j, const std::string& where) {
  const int n = alg.dim();
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ga_error("scenario field '" + where + "': expected " + std::to_string(n) + " rows");
  ExprMatrix out;
  out.alg = alg;
  for (int i = 0; i < n; ++i) {
    const json& row = j.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ga_error("scenario field '" + where + "': row " + std::to_string(i + 1) + " needs " +
                     std::to_string(n) + " entries");
    std::vector<CoordinateExpression> r;
    for (int k = 0; k < n; ++k)
      r.push_back(entry_expression(alg, row.at(static_cast<std::size_t>(k)), where));
    out.m.push_back(std::move(r));
  }
  return out;
}

struct ExprVector {
  Algebra alg{1, {1}};
  std::vector<CoordinateExpression> comp;

  Multivector at(const Multivector& q) const {
    Multivector out(alg);
    for (std::size_t i = 0; i < comp.size(); ++i) out.vec(static_cast<int>(i) + 1) = comp[i](q);
    return out;
  }

  // column k of the Jacobian holds the k-th partials of every component
  VectorMap jacobian(const Multivector& q) const {
    const int n = alg.dim();
    std::vector<Multivector> img;
    for (int k = 1; k <= n; ++k) {
      Multivector im(alg);
      for (std::size_t i = 0; i < comp.size(); ++i)
        im.vec(static_cast<int>(i) + 1) = comp[i].partial(k)(q);
      img.push_back(im);
    }
    return VectorMap(alg, std::move(img));
  }
};

inline ExprVector vector_exprs_from_json(const Algebra& alg, const json& j,
                                         const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != alg.dim())
    throw ga_error("scenario field '" + where + "': expected " + std::to_string(alg.dim()) +
                   " component expressions");
  ExprVector out;
  out.alg = alg;
  for (const auto& e : j) out.comp.push_back(entry_expression(alg, e, where));
  return out;
}

inline Multivector vector_from_numbers(const Algebra& alg, const json& j,
                                       const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != alg.dim())
    throw ga_error("scenario field '" + where + "': expected " + std::to_string(alg.dim()) +
                   " numbers");
  Multivector out(alg);
  for (int k = 0; k < alg.dim(); ++k) {
    const json& v = j.at(static_cast<std::size_t>(k));
    if (!v.is_number())
      throw ga_error("scenario field '" + where + "': entries must be numbers");
    out.vec(k + 1) = v.get<double>();
  }
  return out;
}

inline GaugeField gauge_from_matrix(const ExprMatrix& M, bool analytic) {
  GaugeField g;
  g.alg = M.alg;
  g.hbar_at = [M](const Multivector& q) { return M.at(q); };
  if (analytic)
    g.dhbar_at = [M](const Multivector& q, const Multivector& dir) { return M.deriv(q, dir); };
  return g;
}

inline KillingCandidate candidate_from_exprs(const ExprVector& V, bool analytic) {
  KillingCandidate v;
  v.at = [V](const Multivector& q) { return V.at(q); };
  if (analytic) v.jacobian = [V](const Multivector& q) { return V.jacobian(q); };
  return v;
}

inline PointMap point_map_from_exprs(const ExprVector& V, bool analytic) {
  PointMap f;
  f.alg = V.alg;
  f.forward = [V](const Multivector& q) { return V.at(q); };
  if (analytic) {
    f.jacobian = [V](const Multivector& q) { return V.jacobian(q); };
    // second partials, precomputed so the closure stays cheap
    const int n = V.alg.dim();
    std::vector<std::vector<CoordinateExpression>> second;  // [k-1][i]: d_k of component i
    for (int k = 1; k <= n; ++k) {
      std::vector<CoordinateExpression> col;
      for (const auto& c : V.comp) col.push_back(c.partial(k));
      second.push_back(std::move(col));
    }
    const Algebra alg = V.alg;
    f.jacobian_derivative = [alg, second](const Multivector& q, const Multivector& dir) {
      std::vector<Multivector> img;
      for (std::size_t k = 0; k < second.size(); ++k) {
        Multivector im(alg);
        for (std::size_t i = 0; i < second[k].size(); ++i)
          im.vec(static_cast<int>(i) + 1) = second[k][i].deriv(q, dir);
        img.push_back(im);
      }
      return VectorMap(alg, std::move(img));
    };
  }
  return f;
}

// rotor-plus-potential field from {plane:[a,b], angle:expr, potential:[[exprs]]};
// the potential rows follow the field-space bivector basis in (a<b) order
inline YangMillsField ym_field_from_json(const SplitSpace& ss, const json& spec, bool analytic,
                                         const std::string& where) {
  const Algebra& alg = ss.alg;
  std::vector<Multivector> biv;
  for (int a = 1; a <= ss.dim_y(); ++a)
    for (int b = a + 1; b <= ss.dim_y(); ++b)
      biv.push_back(outer(ss.y_generator(a), ss.y_generator(b)));

  YangMillsField f;
  f.space = ss;

  if (spec.contains("plane")) {
    const json& pl = spec.at("plane");
    if (!pl.is_array() || pl.size() != 2)
      throw ga_error("scenario field '" + where + ".plane': expected two field-space indices");
    const int a = pl.at(0).get<int>();
    const int b = pl.at(1).get<int>();
    if (a < 1 || b < 1 || a > ss.dim_y() || b > ss.dim_y() || a == b)
      throw ga_error("scenario field '" + where + ".plane': indices outside 1.." +
                     std::to_string(ss.dim_y()));
    const Multivector B = outer(ss.y_generator(a), ss.y_generator(b));
    const CoordinateExpression angle =
        entry_expression(alg, spec.contains("angle") ? spec.at("angle") : json("0"),
                         where + ".angle");
    f.rotor_at = [B, angle](const Multivector& x) { return rotor_from_bivector(B * angle(x)); };
    if (analytic)
      f.drotor_at = [B, angle](const Multivector& x, const Multivector& dx) {
        return B * rotor_from_bivector(B * angle(x)).element * (-0.5 * angle.deriv(x, dx));
      };
  }

  if (spec.contains("potential")) {
    const json& pot = spec.at("potential");
    if (!pot.is_array() || static_cast<int>(pot.size()) != ss.dim_x)
      throw ga_error("scenario field '" + where + ".potential': expected " +
                     std::to_string(ss.dim_x) + " rows");
    std::vector<std::vector<CoordinateExpression>> rows;
    for (int mu = 0; mu < ss.dim_x; ++mu) {
      const json& row = pot.at(static_cast<std::size_t>(mu));
      if (!row.is_array() || row.size() != biv.size())
        throw ga_error("scenario field '" + where + ".potential': row " + std::to_string(mu + 1) +
                       " needs " + std::to_string(biv.size()) + " bivector coefficients");
      std::vector<CoordinateExpression> r;
      for (const auto& e : row) r.push_back(entry_expression(alg, e, where + ".potential"));
      rows.push_back(std::move(r));
    }
    f.potential_at = [biv, rows](const Multivector& x, int mu) {
      Multivector A(x.algebra());
      for (std::size_t i = 0; i < biv.size(); ++i)
        A += biv[i] * rows[static_cast<std::size_t>(mu - 1)][i](x);
      return A;
    };
    if (analytic)
      f.dpotential_at = [biv, rows](const Multivector& x, const Multivector& dx, int mu) {
        Multivector A(x.algebra());
        for (std::size_t i = 0; i < biv.size(); ++i)
          A += biv[i] * rows[static_cast<std::size_t>(mu - 1)][i].deriv(x, dx);
        return A;
      };
  }
  return f;
}

inline double map_diff(const VectorMap& a, const VectorMap& b) {
  double worst = 0.0;
  for (int k = 1; k <= a.algebra().dim(); ++k)
    worst = std::max(worst, coeff_norm(a.image(k) - b.image(k)));
  return worst;
}

// independent component-form torsion through the vielbeins,
// T^rho_{mu nu} = sum_j h_j^rho (d_mu h^j_nu - d_nu h^j_mu)
inline std::vector<std::vector<std::vector<double>>> vielbein_torsion(const GaugeField& g,
                                                                      const FrameField& frame,
                                                                      const Multivector& q) {
  const Algebra& alg = g.alg;
  const int n = alg.dim();
  const Frame gen = generator_frame(alg);
  const Frame gen_rec = generator_reciprocal_frame(alg);

  auto lower = [&](const Multivector& p) {
    const GaugeForms fm = four_forms(g, p);
    const Frame e = frame(p);
    std::vector<std::vector<double>> out(static_cast<std::size_t>(n),
                                         std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int j = 0; j < n; ++j)
      for (int nu = 0; nu < n; ++nu)
        out[static_cast<std::size_t>(j)][static_cast<std::size_t>(nu)] =
            scalar_part(fat_dot(gen_rec[j], fm.h_inv.apply_vector(e[nu])));
    return out;
  };

  const Frame e0 = frame(q);
  const Frame erec = reciprocal_frame(e0);
  const GaugeForms fm0 = four_forms(g, q);
  std::vector<std::vector<double>> upper(static_cast<std::size_t>(n),
                                         std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int j = 0; j < n; ++j)
    for (int rho = 0; rho < n; ++rho)
      upper[static_cast<std::size_t>(j)][static_cast<std::size_t>(rho)] =
          scalar_part(fat_dot(gen[j], fm0.hbar.apply_vector(erec[rho])));

  const double h = fd_step(coeff_norm(q));
  std::vector<std::vector<std::vector<double>>> dlow(static_cast<std::size_t>(n));
  for (int mu = 0; mu < n; ++mu) {
    const auto plus = lower(q + e0[mu] * h);
    const auto minus = lower(q - e0[mu] * h);
    dlow[static_cast<std::size_t>(mu)].assign(static_cast<std::size_t>(n),
                                              std::vector<double>(static_cast<std::size_t>(n)));
    for (int j = 0; j < n; ++j)
      for (int nu = 0; nu < n; ++nu)
        dlow[static_cast<std::size_t>(mu)][static_cast<std::size_t>(j)]
            [static_cast<std::size_t>(nu)] =
                (plus[static_cast<std::size_t>(j)][static_cast<std::size_t>(nu)] -
                 minus[static_cast<std::size_t>(j)][static_cast<std::size_t>(nu)]) /
                (2.0 * h);
  }

  std::vector<std::vector<std::vector<double>>> T(
      static_cast<std::size_t>(n),
      std::vector<std::vector<double>>(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0)));
  for (int rho = 0; rho < n; ++rho)
    for (int mu = 0; mu < n; ++mu)
      for (int nu = 0; nu < n; ++nu) {
        double t = 0.0;
        for (int j = 0; j < n; ++j)
          t += upper[static_cast<std::size_t>(j)][static_cast<std::size_t>(rho)] *
               (dlow[static_cast<std::size_t>(mu)][static_cast<std::size_t>(j)]
                    [static_cast<std::size_t>(nu)] -
                dlow[static_cast<std::size_t>(nu)][static_cast<std::size_t>(j)]
                    [static_cast<std::size_t>(mu)]);
        T[static_cast<std::size_t>(rho)][static_cast<std::size_t>(mu)]
         [static_cast<std::size_t>(nu)] = t;
      }
  return T;
}

// potential over the field components, U(s) over the squared field, or nothing
inline std::function<double(double)> potential_of_s(const json& fields, const std::string& key) {
  if (!fields.contains(key)) return {};
  const json& v = fields.at(key);
  if (!v.is_string()) throw ga_error("scenario field '" + key + "': expected an expression");
  Expression e;
  try {
    e = Expression::parse(v.get<std::string>());
  } catch (const ga_error& err) {
    throw ga_error("scenario field '" + key + "': " + err.what());
  }
  std::vector<std::string> vars;
  e.collect_variables(vars);
  for (const auto& name : vars)
    if (name != "s")
      throw ga_error("scenario field '" + key + "': only the variable 's' is allowed, got '" +
                     name + "'");
  return [e](double s) {
    std::map<std::string, double> v2{{"s", s}};
    return e.eval(v2);
  };
}

inline std::function<double(const Multivector&)> potential_of_y(const SplitSpace& ss,
                                                                const json& fields) {
  if (fields.contains("potential")) {
    const json& v = fields.at("potential");
    if (!v.is_string())
      throw ga_error("scenario field 'potential': expected an expression");
    Expression e;
    try {
      e = Expression::parse(v.get<std::string>());
    } catch (const ga_error& err) {
      throw ga_error(std::string("scenario field 'potential': ") + err.what());
    }
    const int ny = ss.dim_y();
    std::vector<std::string> vars;
    e.collect_variables(vars);
    for (const auto& name : vars) {
      bool ok = name.size() >= 2 && name[0] == 'y';
      int idx = 0;
      for (std::size_t i = 1; ok && i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) ok = false;
        idx = idx * 10 + (name[i] - '0');
      }
      if (!ok || idx < 1 || idx > ny)
        throw ga_error("scenario field 'potential': variable '" + name + "' outside y1..y" +
                       std::to_string(ny));
    }
    const int dim_x = ss.dim_x;
    return [e, ny, dim_x](const Multivector& y) {
      std::map<std::string, double> v2;
      for (int a = 1; a <= ny; ++a) v2["y" + std::to_string(a)] = y.vec(dim_x + a);
      return e.eval(v2);
    };
  }
  if (fields.contains("u")) {
    auto U = potential_of_s(fields, "u");
    return [U](const Multivector& y) { return U(scalar_part(y * y)); };
  }
  return {};
}

}  // namespace detail

class ScenarioRun {
 public:
  ScenarioRun(const Scenario& scn, const RunOptions& opts)
      : scn_(scn), opts_(opts), seed_(opts.has_seed ? opts.seed : scn.seed) {}

  Report run() {
    const auto t0 = std::chrono::steady_clock::now();
    report_.name = scn_.name;
    report_.kind = scn_.kind;
    report_.scenario = scn_.raw;

    if (scn_.kind == "algebra-check")
      run_algebra_check();
    else if (scn_.kind == "gauge-check")
      run_gauge_check();
    else if (scn_.kind == "field-strength")
      run_field_strength();
    else if (scn_.kind == "torsion")
      run_torsion();
    else if (scn_.kind == "geodesic")
      run_geodesic();
    else if (scn_.kind == "killing-scan")
      run_killing_scan();
    else if (scn_.kind == "action-sweep")
      run_action_sweep();
    else if (scn_.kind == "em-equivalence")
      run_em_equivalence();
    else
      throw ga_error("unknown scenario kind '" + scn_.kind + "'");

    report_.pass = true;
    for (const auto& c : report_.checks) report_.pass = report_.pass && c.pass;
    report_.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                                t0)
                          .count();
    if (opts_.write_outputs)
      detail::write_file_atomic(out_path("report.json"), report_.to_json().dump(2) + "\n");
    return report_;
  }

 private:
  Scenario scn_;
  RunOptions opts_;
  std::uint64_t seed_;
  Report report_;

  bool analytic() const { return !opts_.force_fd; }

  // pick the tolerance for whichever derivative route is active, then apply the scale
  double tol(double tol_analytic, double tol_fd) const {
    return (analytic() ? tol_analytic : tol_fd) * opts_.tolerance_scale;
  }
  double tol_fixed(double t) const { return t * opts_.tolerance_scale; }

  void check(const std::string& name, double residual, double tolerance) {
    report_.checks.push_back({name, residual, tolerance, residual <= tolerance});
  }

  std::filesystem::path out_path(const std::string& file) const {
    return std::filesystem::path(opts_.out_dir) / file;
  }

  void write_table(const std::string& file, const std::string& body) {
    if (opts_.write_outputs) detail::write_file_atomic(out_path(file), body);
    report_.tables.push_back(file);
  }

  Box scenario_box(const Algebra& alg) const {
    return Box::cube(alg.dim(), scn_.box_lo, scn_.box_hi);
  }

  // base-space sample points: low-discrepancy in the base coordinates, zero field part
  std::vector<Multivector> base_points(const SplitSpace& ss) const {
    std::vector<Multivector> out;
    for (const auto& q : box_points(ss.alg, scenario_box(ss.alg), scn_.points))
      out.push_back(grade_project(ss.project_x(q), 1));
    return out;
  }

  const json& need(const char* key) const {
    if (!scn_.fields.contains(key))
      throw ga_error("scenario field 'fields." + std::string(key) + "': missing");
    return scn_.fields.at(key);
  }

  GaugeField gauge_from_fields() const {
    return detail::gauge_from_matrix(detail::matrix_from_json(scn_.algebra(), need("hbar"),
                                                              "fields.hbar"),
                                     analytic());
  }

  // ---- kinds ----

  void run_algebra_check() {
    const Algebra alg = scn_.algebra();
    Rng rng(seed_);
    const Multivector I = Multivector::pseudoscalar(alg);
    double r_decomp = 0.0, r_jacobi = 0.0, r_adjoint = 0.0, r_dual = 0.0, r_recip = 0.0;

    for (int it = 0; it < scn_.instances; ++it) {
      const auto a = random_vector(alg, rng);
      const auto b = random_vector(alg, rng);
      r_decomp = std::max(r_decomp, coeff_norm(a * b - (fat_dot(a, b) + outer(a, b))));

      const auto A = random_multivector(alg, rng);
      const auto B = random_multivector(alg, rng);
      const auto C = random_multivector(alg, rng);
      r_jacobi = std::max(r_jacobi, coeff_norm(commutator(A, commutator(B, C)) +
                                               commutator(B, commutator(C, A)) +
                                               commutator(C, commutator(A, B))));

      const auto m = random_vector_map(alg, rng);
      r_adjoint = std::max(
          r_adjoint, std::fabs(scalar_part(fat_dot(a, m.apply_vector(b))) -
                               scalar_part(fat_dot(adjoint(m).apply_vector(a), b))));

      // a vector contracted on the pseudoscalar is the whole geometric product
      r_dual = std::max(r_dual, coeff_norm(fat_dot(a, I) - a * I));
      ++report_.step_count;
    }

    const Frame gen = generator_frame(alg);
    const Frame rec = generator_reciprocal_frame(alg);
    for (int i = 0; i < alg.dim(); ++i)
      for (int j = 0; j < alg.dim(); ++j)
        r_recip = std::max(r_recip, std::fabs(scalar_part(fat_dot(rec[i], gen[j])) -
                                              (i == j ? 1.0 : 0.0)));

    check("vector-product-decomposition", r_decomp, tol_fixed(1e-12));
    check("commutator-jacobi", r_jacobi, tol_fixed(1e-12));
    check("adjoint-pairing", r_adjoint, tol_fixed(1e-12));
    check("pseudoscalar-duality", r_dual, tol_fixed(1e-12));
    check("reciprocal-frame", r_recip, tol_fixed(1e-12));
  }

  void run_gauge_check() {
    const Algebra alg = scn_.algebra();
    const GaugeField g = gauge_from_fields();
    const Frame gen = generator_frame(alg);
    const VectorMap id = VectorMap::identity(alg);

    double r_inverse = 0.0, r_adjoint = 0.0, r_sym = 0.0, r_metric_pair = 0.0, r_det = 0.0,
           r_mult = 0.0;
    bool have_prev = false;
    VectorMap prev = id;
    double prev_det = 1.0;

    for (const auto& q : box_points(alg, scenario_box(alg), scn_.points)) {
      const GaugeForms fm = four_forms(g, q);
      r_inverse = std::max(r_inverse, detail::map_diff(compose(fm.hbar_inv, fm.hbar), id));
      r_inverse = std::max(r_inverse, detail::map_diff(compose(fm.h, fm.h_inv), id));
      r_adjoint = std::max(r_adjoint, detail::map_diff(fm.h, adjoint(fm.hbar)));

      const auto [lo, up] = metric_from_gauge(g, q, gen);
      const int n = alg.dim();
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
          r_sym = std::max(r_sym, std::fabs(lo[static_cast<std::size_t>(mu)]
                                              [static_cast<std::size_t>(nu)] -
                                            lo[static_cast<std::size_t>(nu)]
                                              [static_cast<std::size_t>(mu)]));
          double dot = 0.0;
          for (int k = 0; k < n; ++k)
            dot += lo[static_cast<std::size_t>(mu)][static_cast<std::size_t>(k)] *
                   up[static_cast<std::size_t>(k)][static_cast<std::size_t>(nu)];
          r_metric_pair = std::max(r_metric_pair, std::fabs(dot - (mu == nu ? 1.0 : 0.0)));
        }

      // det g = det(h^{-1})^2, compared through the metric map itself
      const double dh = determinant(fm.h_inv);
      const double dg = determinant(metric_map(fm));
      r_det = std::max(r_det, std::fabs(dg - dh * dh) / std::max(1.0, std::fabs(dg)));

      const double cur_det = determinant(fm.hbar);
      if (have_prev) {
        const double both = determinant(compose(fm.hbar, prev));
        r_mult = std::max(r_mult, std::fabs(both - cur_det * prev_det) /
                                      std::max(1.0, std::fabs(both)));
      }
      prev = fm.hbar;
      prev_det = cur_det;
      have_prev = true;
      ++report_.step_count;
    }

    check("inverse-composition", r_inverse, tol_fixed(1e-10));
    check("adjoint-form", r_adjoint, tol(1e-10, 1e-10));
    check("metric-symmetry", r_sym, tol_fixed(1e-10));
    check("metric-inverse-pairing", r_metric_pair, tol_fixed(1e-10));
    check("determinant-squares", r_det, tol_fixed(1e-10));
    check("determinant-multiplicative", r_mult, tol_fixed(1e-10));
  }

  void run_field_strength() {
    const Algebra alg = scn_.algebra();
    const Box box = scenario_box(alg);
    const auto pts = box_points(alg, box, scn_.points);
    Rng rng(seed_);
    bool ran_any = false;

    // pure-gauge fields: transported identity, the field strength must vanish
    if (scn_.fields.contains("map") || scn_.fields.contains("random_diffeos")) {
      ran_any = true;
      std::vector<PointMap> maps;
      if (scn_.fields.contains("map"))
        maps.push_back(detail::point_map_from_exprs(
            detail::vector_exprs_from_json(alg, scn_.fields.at("map"), "fields.map"),
            analytic()));
      if (scn_.fields.contains("random_diffeos")) {
        const int count = scn_.fields.at("random_diffeos").get<int>();
        const double amp = scn_.fields.value("amplitude", 0.15);
        for (int d = 0; d < count; ++d) {
          PointMap f = random_cubic_diffeo(alg, rng, amp, box).as_point_map();
          if (!analytic()) {
            f.jacobian = nullptr;
            f.jacobian_derivative = nullptr;
          }
          maps.push_back(std::move(f));
        }
      }
      if (maps.empty())
        throw ga_error("scenario field 'fields.random_diffeos': need at least one map");
      const int per = std::max(1, static_cast<int>(pts.size() / maps.size()));
      double worst = 0.0;
      for (const auto& f : maps) {
        const GaugeField g = make_pure_gauge(f);
        for (int i = 0; i < per && i < static_cast<int>(pts.size()); ++i) {
          const auto b = random_vector(alg, rng);
          worst = std::max(worst, coeff_norm(field_strength_vector(g, pts[static_cast<std::size_t>(i)], b)));
          if (alg.dim() >= 2) {
            const auto B = random_blade_grade(alg, rng, 2);
            worst = std::max(worst, coeff_norm(field_strength_multivector(
                                        g, pts[static_cast<std::size_t>(i)], B)));
          }
          ++report_.step_count;
        }
      }
      check("pure-gauge-field-strength", worst, tol(1e-10, 1e-5));
    }

    if (scn_.fields.contains("hbar")) {
      ran_any = true;
      const GaugeField g = gauge_from_fields();
      double r_leibniz = 0.0, r_route = 0.0, r_grade = 0.0, r_pseudo = 0.0;
      for (const auto& q : pts) {
        const GaugeForms fm = four_forms(g, q);
        const auto b = random_vector(alg, rng);

        // independent route through the derivative of the forward form
        Multivector alt(alg);
        const auto binv = fm.hbar_inv.apply_vector(b);
        for (int k = 1; k <= alg.dim(); ++k) {
          const auto dk = dhbar(g, q, Multivector::basis_vector(alg, k));
          alt += outer(fm.hbar.apply_vector(Multivector::basis_vector(alg, k)) * alg.signature(k),
                       dk.apply_vector(binv));
        }
        const auto Fb = field_strength_vector(g, q, b);
        r_route = std::max(r_route, coeff_norm(Fb - alt));

        for (int r = 1; r <= 2; ++r)
          for (int s = 1; s <= 2; ++s) {
            if (r + s > alg.dim()) continue;
            const auto A = random_blade_grade(alg, rng, r);
            const auto B = random_blade_grade(alg, rng, s);
            const auto lhs = field_strength_multivector(g, q, outer(A, B));
            const auto rhs = outer(field_strength_multivector(g, q, A), B) +
                             outer(A, field_strength_multivector(g, q, B)) *
                                 (r % 2 ? -1.0 : 1.0);
            r_leibniz = std::max(r_leibniz, coeff_norm(lhs - rhs));
          }

        r_grade = std::max(r_grade, coeff_norm(Fb - grade_project(Fb, 2)) /
                                        std::max(1.0, coeff_norm(Fb)));
        r_pseudo = std::max(
            r_pseudo, coeff_norm(field_strength_multivector(g, q, Multivector::pseudoscalar(alg))));
        ++report_.step_count;
      }
      check("derivative-route-agreement", r_route, tol(1e-10, 1e-6));
      check("wedge-leibniz", r_leibniz, tol(1e-11, 1e-8));
      check("grade-raising", r_grade, tol_fixed(1e-12));
      check("pseudoscalar-overflow", r_pseudo, tol(1e-11, 1e-8));

      if (scn_.fields.contains("diffeo")) {
        PointMap f = detail::point_map_from_exprs(
            detail::vector_exprs_from_json(alg, scn_.fields.at("diffeo"), "fields.diffeo"),
            analytic());
        double worst = 0.0;
        for (const auto& q : pts) {
          const auto P = random_vector(alg, rng) + random_blade_grade(alg, rng, 2, 0.5);
          worst = std::max(worst, field_strength_gauge_invariance_check(g, f, q, P));
          ++report_.step_count;
        }
        check("transformation-invariance", worst, tol(1e-10, 1e-5));
      }
    }

    if (scn_.fields.contains("ym")) {
      ran_any = true;
      if (scn_.split < 1 || scn_.split >= alg.dim())
        throw ga_error("scenario field 'split': rotor-potential checks need 1 <= split < dim");
      const SplitSpace ss(alg, scn_.split);
      const YangMillsField f =
          detail::ym_field_from_json(ss, scn_.fields.at("ym"), analytic(), "fields.ym");
      const GaugeField g = make_yang_mills_gauge(f);

      double r_base = 0.0, r_comm = 0.0, r_proj = 0.0;
      // smooth field along the fibre for the commutator comparison
      std::vector<CoordinateExpression> ycomp;
      for (int a = 1; a <= ss.dim_y(); ++a) {
        const double c1 = uniform(rng, -0.4, 0.4), c2 = uniform(rng, -0.4, 0.4);
        char buf[96];
        std::snprintf(buf, sizeof buf, "%.17g*q1%+.17g*q1*q2", c1, c2);
        ycomp.emplace_back(alg, buf);
      }
      auto y_of_x = [ycomp, ss](const Multivector& x) {
        Multivector out(x.algebra());
        for (int a = 1; a <= ss.dim_y(); ++a)
          out += ss.y_generator(a) * ycomp[static_cast<std::size_t>(a - 1)](x);
        return out;
      };
      auto dy_of_x = [ycomp, ss](const Multivector& x, int mu) {
        Multivector out(x.algebra());
        for (int a = 1; a <= ss.dim_y(); ++a)
          out += ss.y_generator(a) *
                 ycomp[static_cast<std::size_t>(a - 1)].deriv(x, ss.x_generator(mu));
        return out;
      };

      for (const auto& q : pts) {
        const auto x = ss.project_x(q);
        const auto y = ss.project_y(q);
        const Rotor S = f.rotor_at ? f.rotor_at(x) : Rotor(Multivector::basis_blade(alg, 0u));
        for (int mu = 1; mu <= ss.dim_x; ++mu)
          r_base = std::max(r_base,
                            coeff_norm(field_strength_vector(g, q, ss.x_generator(mu))));
        r_base = std::max(r_base,
                          coeff_norm(field_strength_multivector(g, q, ss.pseudoscalar_x())));

        for (int mu = 1; mu <= ss.dim_x; ++mu)
          for (int nu = mu + 1; nu <= ss.dim_x; ++nu) {
            const auto lhs = ym_covariant_commutator(f, y_of_x, dy_of_x, x, mu, nu);
            const auto rhs = fat_dot(y_of_x(x), ym_field_bivector(f, x, mu, nu));
            r_comm = std::max(r_comm, coeff_norm(lhs - rhs));

            // base-plane projection recovers the curvature acting on the fibre point
            const auto plane = outer(ss.x_generator(mu), ss.x_generator(nu));
            const auto b = random_vector(alg, rng);
            const double pl = scalar_part(fat_dot(plane, field_strength_vector(g, q, b)));
            const double pr =
                scalar_part(fat_dot(fat_dot(y, ym_field_bivector(f, x, mu, nu)), S(b)));
            r_proj = std::max(r_proj, std::fabs(pl - pr));
          }
        ++report_.step_count;
      }
      check("base-annihilation", r_base, tol(1e-10, 1e-6));
      check("covariant-commutator", r_comm, tol_fixed(1e-6));
      check("curvature-projection", r_proj, tol(1e-8, 1e-6));
    }

    if (!ran_any)
      throw ga_error(
          "scenario field 'fields': field-strength needs 'hbar', 'map', 'random_diffeos', or "
          "'ym'");
  }

  void run_torsion() {
    const Algebra alg = scn_.algebra();
    const GaugeField g = gauge_from_fields();
    const FrameField frame = constant_generator_frame(alg);

    double r_oracle = 0.0, r_anti = 0.0;
    for (const auto& q : box_points(alg, scenario_box(alg), scn_.points)) {
      const auto T = torsion_components(g, frame, q);
      const auto Tv = detail::vielbein_torsion(g, frame, q);
      const int n = alg.dim();
      for (int rho = 0; rho < n; ++rho)
        for (int mu = 0; mu < n; ++mu)
          for (int nu = 0; nu < n; ++nu) {
            const double a = T[static_cast<std::size_t>(rho)][static_cast<std::size_t>(mu)]
                              [static_cast<std::size_t>(nu)];
            const double b = Tv[static_cast<std::size_t>(rho)][static_cast<std::size_t>(mu)]
                               [static_cast<std::size_t>(nu)];
            r_oracle = std::max(r_oracle, std::fabs(a - b));
            const double c = T[static_cast<std::size_t>(rho)][static_cast<std::size_t>(nu)]
                              [static_cast<std::size_t>(mu)];
            r_anti = std::max(r_anti, std::fabs(a + c));
          }
      ++report_.step_count;
    }
    check("vielbein-form-agreement", r_oracle, tol_fixed(1e-5));
    check("lower-index-antisymmetry", r_anti, tol_fixed(1e-12));
  }

  MetricField metric_from_fields(GaugeField* gauge_out, bool* have_gauge) const {
    const Algebra alg = scn_.algebra();
    if (scn_.fields.contains("hbar")) {
      const GaugeField g = gauge_from_fields();
      if (gauge_out) *gauge_out = g;
      if (have_gauge) *have_gauge = true;
      return metric_field_from_gauge(g);
    }
    if (scn_.fields.contains("metric")) {
      const detail::ExprMatrix M =
          detail::matrix_from_json(alg, scn_.fields.at("metric"), "fields.metric");
      if (have_gauge) *have_gauge = false;
      return metric_field_from_components(
          alg, [M](const Multivector& q) { return M.values(q); });
    }
    throw ga_error("scenario field 'fields': need 'hbar' or 'metric'");
  }

  std::vector<std::pair<std::string, KillingCandidate>> candidates_from_fields() const {
    std::vector<std::pair<std::string, KillingCandidate>> out;
    if (!scn_.fields.contains("candidates")) return out;
    const json& c = scn_.fields.at("candidates");
    if (!c.is_object()) throw ga_error("scenario field 'fields.candidates': expected an object");
    const Algebra alg = scn_.algebra();
    for (auto it = c.begin(); it != c.end(); ++it)
      out.emplace_back(it.key(),
                       detail::candidate_from_exprs(
                           detail::vector_exprs_from_json(alg, it.value(),
                                                          "fields.candidates." + it.key()),
                           analytic()));
    return out;
  }

  void run_geodesic() {
    const Algebra alg = scn_.algebra();
    GaugeField g;
    bool have_gauge = false;
    const MetricField metric = metric_from_fields(&g, &have_gauge);

    const Multivector q0 = detail::vector_from_numbers(alg, need("q0"), "fields.q0");
    const Multivector U0 = detail::vector_from_numbers(alg, need("U0"), "fields.U0");

    const auto named = candidates_from_fields();
    std::vector<KillingCandidate> cands;
    for (const auto& [name, v] : named) cands.push_back(v);

    const int sample_every = std::max(1, scn_.steps / 200);
    const auto samples =
        integrate_geodesic(metric, q0, U0, scn_.dtau, scn_.steps, cands, sample_every);
    report_.step_count += scn_.steps;

    // trajectory table
    std::string csv = "tau";
    for (int k = 1; k <= alg.dim(); ++k) csv += ",q" + std::to_string(k);
    for (int k = 1; k <= alg.dim(); ++k) csv += ",U" + std::to_string(k);
    csv += ",norm_residual";
    for (const auto& [name, v] : named) csv += "," + name;
    csv += "\n";
    for (const auto& s : samples) {
      csv += detail::csv_num(s.tau);
      for (int k = 1; k <= alg.dim(); ++k) csv += "," + detail::csv_num(s.q.vec(k));
      for (int k = 1; k <= alg.dim(); ++k) csv += "," + detail::csv_num(s.U.vec(k));
      csv += "," + detail::csv_num(s.norm_residual);
      for (const double c : s.conserved) csv += "," + detail::csv_num(c);
      csv += "\n";
    }
    write_table("trajectory.csv", csv);

    // drift bounds follow the integrator's fourth-order error model, floored at 1e-8
    const double drift_tol =
        std::max(1e-8, 10.0 * std::pow(scn_.dtau, 4) * scn_.steps) * opts_.tolerance_scale;
    double worst_norm = 0.0;
    for (const auto& s : samples) worst_norm = std::max(worst_norm, s.norm_residual);
    check("normalization-drift", worst_norm, drift_tol);

    for (std::size_t ci = 0; ci < named.size(); ++ci) {
      double drift = 0.0;
      for (const auto& s : samples)
        drift = std::max(drift, std::fabs(s.conserved[ci] - samples.front().conserved[ci]));
      check("conserved-drift:" + named[ci].first, drift, drift_tol);
    }

    // the dynamics against the explicit connection-coefficient form
    double r_comp = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, samples.size() / 16);
    for (std::size_t i = 0; i < samples.size(); i += stride) {
      const auto& s = samples[i];
      const auto C = christoffel_symbols(metric, s.q);
      Multivector acomp(alg);
      for (int mu = 0; mu < alg.dim(); ++mu) {
        double t = 0.0;
        for (int la = 0; la < alg.dim(); ++la)
          for (int ka = 0; ka < alg.dim(); ++ka)
            t -= C[static_cast<std::size_t>(mu)][static_cast<std::size_t>(la)]
                  [static_cast<std::size_t>(ka)] *
                 s.U.vec(la + 1) * s.U.vec(ka + 1);
        acomp.vec(mu + 1) = t;
      }
      r_comp = std::max(r_comp, coeff_norm(geodesic_acceleration(metric, s.q, s.U) - acomp));
    }
    check("connection-form-agreement", r_comp, tol(1e-8, 1e-6));

    if (scn_.fields.value("straight_line", false)) {
      double r_line = 0.0;
      for (const auto& s : samples)
        r_line = std::max(r_line, coeff_norm(s.q - (q0 + U0 * s.tau)));
      check("straight-line", r_line, tol_fixed(1e-10));
    }

    if (scn_.fields.contains("convergence")) {
      const json& cv = scn_.fields.at("convergence");
      const double T = scn_.dtau * scn_.steps;
      const int n1 = scn_.steps;
      const int nref = cv.value("ref_steps", 16 * n1);
      auto endpoint = [&](int steps) {
        return integrate_geodesic(metric, q0, U0, T / steps, steps, {}, steps).back().q;
      };
      const Multivector ref = endpoint(nref);
      const double e1 = coeff_norm(endpoint(n1) - ref);
      const double e2 = coeff_norm(endpoint(2 * n1) - ref);
      report_.step_count += nref + 3 * n1;
      const double ratio = e2 > 0.0 ? e1 / e2 : 0.0;
      check("convergence-order", std::fabs(ratio - 16.0), 4.0 * opts_.tolerance_scale);
    }
  }

  void run_killing_scan() {
    const Algebra alg = scn_.algebra();
    GaugeField g;
    bool have_gauge = false;
    const MetricField metric = metric_from_fields(&g, &have_gauge);
    const auto named = candidates_from_fields();
    if (named.empty()) throw ga_error("scenario field 'fields.candidates': missing or empty");

    const double threshold = scn_.fields.value("threshold", 1e-8) * opts_.tolerance_scale;
    const auto pts = box_points(alg, scenario_box(alg), scn_.points);
    Rng rng(seed_);
    const Hamiltonian H = string_hamiltonian(alg, scn_.lambda);

    std::string csv = "name,residual,symmetry_residual,is_killing\n";
    const json expected =
        scn_.fields.contains("expected") ? scn_.fields.at("expected") : json::object();

    for (const auto& [name, v] : named) {
      double r = 0.0;
      for (const auto& q : pts) {
        r = std::max(r, killing_residual_norm(metric, v, q));
        ++report_.step_count;
      }
      const bool is_k = r <= threshold;

      double sr = std::numeric_limits<double>::quiet_NaN();
      if (have_gauge) {
        sr = 0.0;
        for (std::size_t i = 0; i < pts.size() && i < 8; ++i) {
          const auto a = random_vector(alg, rng);
          const auto P = metric_eval(metric, pts[i]).apply_vector(a);
          sr = std::max(sr, std::fabs(symmetry_condition_residual(g, H, v, pts[i], P)));
        }
        check("decision-agreement:" + name, ((sr <= threshold) == is_k) ? 0.0 : 1.0, 0.5);
      }

      if (expected.contains(name)) {
        const bool want = expected.at(name).get<bool>();
        check("expected:" + name, (is_k == want) ? 0.0 : 1.0, 0.5);
        if (want) check("killing:" + name, r, threshold);
      }

      csv += name + "," + detail::csv_num(r) + "," + detail::csv_num(sr) + "," +
             (is_k ? "1" : "0") + "\n";
    }
    write_table("killing.csv", csv);
  }

  void run_action_sweep() {
    const Algebra alg = scn_.algebra();
    const SplitSpace ss(alg, scn_.split);

    // field configuration over the base coordinates
    const json& yj = need("y");
    if (!yj.is_array() || static_cast<int>(yj.size()) != ss.dim_y())
      throw ga_error("scenario field 'fields.y': expected " + std::to_string(ss.dim_y()) +
                     " component expressions");
    std::vector<CoordinateExpression> ycomp;
    for (const auto& e : yj) ycomp.push_back(detail::entry_expression(alg, e, "fields.y"));

    FieldConfiguration cfg;
    cfg.space = ss;
    cfg.y_of_x = [ycomp, ss](const Multivector& x) {
      Multivector out(x.algebra());
      for (int a = 1; a <= ss.dim_y(); ++a)
        out += ss.y_generator(a) * ycomp[static_cast<std::size_t>(a - 1)](x);
      return out;
    };
    if (analytic())
      cfg.dy_of_x = [ycomp, ss](const Multivector& x, int mu) {
        Multivector out(x.algebra());
        for (int a = 1; a <= ss.dim_y(); ++a)
          out += ss.y_generator(a) *
                 ycomp[static_cast<std::size_t>(a - 1)].deriv(x, ss.x_generator(mu));
        return out;
      };
    cfg.potential = detail::potential_of_y(ss, scn_.fields);

    // gauge field: bare, base-space block, or rotor-plus-potential
    const json gj = scn_.fields.contains("gauge") ? scn_.fields.at("gauge") : json("identity");
    GaugeField g;
    bool is_ym = false;
    YangMillsField fym;
    if (gj.is_string() && gj.get<std::string>() == "identity") {
      g = identity_gauge_field(alg);
    } else if (gj.is_object() && gj.contains("block")) {
      const detail::ExprMatrix M =
          detail::matrix_from_json(alg, gj.at("block"), "fields.gauge.block");
      if (analytic())
        g = make_gravitational_gauge(
            ss, [M](const Multivector& q) { return M.at(q); },
            [M](const Multivector& q, const Multivector& dir) { return M.deriv(q, dir); });
      else
        g = make_gravitational_gauge(ss, [M](const Multivector& q) { return M.at(q); });
    } else if (gj.is_object() && gj.contains("ym")) {
      is_ym = true;
      fym = detail::ym_field_from_json(ss, gj.at("ym"), analytic(), "fields.gauge.ym");
      g = make_yang_mills_gauge(fym);
    } else {
      throw ga_error(
          "scenario field 'fields.gauge': expected \"identity\", {\"block\": ...}, or "
          "{\"ym\": ...}");
    }

    const std::function<double(double)> U = detail::potential_of_s(scn_.fields, "u");
    const double sign = scn_.sign >= 0 ? 1.0 : -1.0;

    std::string csv;
    for (int mu = 1; mu <= ss.dim_x; ++mu)
      csv += (mu > 1 ? "," : "") + ("x" + std::to_string(mu));
    csv += ",lambda,kinetic,potential,integrand\n";

    double r_reduce = 0.0;
    for (const auto& x : base_points(ss)) {
      const double generic = sign * action_integrand_generic(g, cfg, x);
      const double ref = sign * (is_ym ? ym_action_integrand(fym, cfg, U, x)
                                       : gr_action_integrand(g, cfg, x));
      r_reduce = std::max(r_reduce, std::fabs(generic - ref) / std::max(1.0, std::fabs(ref)));

      // per-term breakdown through the surface element
      const SurfaceElement d = surface_element_at(cfg, x);
      const GaugeForms fm = four_forms(g, d.q);
      const double lam = lambda_from_surface(fm, ss, d);
      double kin = 0.0;
      for (int a = 1; a <= ss.dim_y(); ++a) {
        const Multivector kap = momentum_from_surface(fm, ss, d, a);
        kin += scalar_part(fat_dot(kap, kap));
      }
      kin /= 2.0 * lam;
      const double pot =
          lam * (cfg.potential ? cfg.potential(grade_project(ss.project_y(cfg.y_of_x(x)), 1))
                               : 0.0);

      for (int mu = 1; mu <= ss.dim_x; ++mu)
        csv += (mu > 1 ? "," : "") + detail::csv_num(x.vec(mu));
      csv += "," + detail::csv_num(lam) + "," + detail::csv_num(sign * kin) + "," +
             detail::csv_num(sign * pot) + "," + detail::csv_num(generic) + "\n";
      ++report_.step_count;
    }
    write_table("sweep.csv", csv);
    check(is_ym ? "rotor-potential-reduction" : "block-reduction", r_reduce, tol(1e-8, 1e-7));
  }

  void run_em_equivalence() {
    const Algebra alg = scn_.algebra();
    const SplitSpace ss(alg, scn_.split);
    if (ss.dim_y() != 2)
      throw ga_error("scenario field 'split': the complex form needs exactly two field components");

    const CoordinateExpression phi = detail::entry_expression(alg, need("phi"), "fields.phi");
    const json& aj = need("alpha");
    if (!aj.is_array() || static_cast<int>(aj.size()) != ss.dim_x)
      throw ga_error("scenario field 'fields.alpha': expected " + std::to_string(ss.dim_x) +
                     " expressions");
    std::vector<CoordinateExpression> alpha;
    for (const auto& e : aj) alpha.push_back(detail::entry_expression(alg, e, "fields.alpha"));

    auto phi_at = [phi](const Multivector& x) { return phi(x); };
    auto alpha_at = [alpha](const Multivector& x, int mu) {
      return alpha[static_cast<std::size_t>(mu - 1)](x);
    };
    YangMillsField em;
    if (analytic())
      em = make_em_field(
          ss, phi_at, alpha_at,
          [phi](const Multivector& x, const Multivector& dx) { return phi.deriv(x, dx); },
          [alpha](const Multivector& x, const Multivector& dx, int mu) {
            return alpha[static_cast<std::size_t>(mu - 1)].deriv(x, dx);
          });
    else
      em = make_em_field(ss, phi_at, alpha_at);

    // field configuration shared by the real and complex forms
    const json& yj = need("y");
    if (!yj.is_array() || yj.size() != 2)
      throw ga_error("scenario field 'fields.y': expected two component expressions");
    std::vector<CoordinateExpression> ycomp;
    for (const auto& e : yj) ycomp.push_back(detail::entry_expression(alg, e, "fields.y"));
    FieldConfiguration cfg;
    cfg.space = ss;
    cfg.y_of_x = [ycomp, ss](const Multivector& x) {
      return ss.y_generator(1) * ycomp[0](x) + ss.y_generator(2) * ycomp[1](x);
    };
    if (analytic())
      cfg.dy_of_x = [ycomp, ss](const Multivector& x, int mu) {
        return ss.y_generator(1) * ycomp[0].deriv(x, ss.x_generator(mu)) +
               ss.y_generator(2) * ycomp[1].deriv(x, ss.x_generator(mu));
      };
    const std::function<double(double)> U = detail::potential_of_s(scn_.fields, "u");

    const Multivector Iy = ss.pseudoscalar_y();
    const auto pts = base_points(ss);

    double r_complex = 0.0, r_curv = 0.0;
    std::string csv;
    for (int mu = 1; mu <= ss.dim_x; ++mu)
      csv += (mu > 1 ? "," : "") + ("x" + std::to_string(mu));
    csv += ",real_form,complex_form\n";
    for (const auto& x : pts) {
      const double real_form = ym_action_integrand(em, cfg, U, x);
      const double complex_form = em_action_integrand_complex(cfg, alpha_at, U, x);
      r_complex = std::max(r_complex, std::fabs(real_form - complex_form));

      for (int mu = 1; mu <= ss.dim_x; ++mu)
        for (int nu = mu + 1; nu <= ss.dim_x; ++nu) {
          const double want = alpha[static_cast<std::size_t>(nu - 1)].deriv(x, ss.x_generator(mu)) -
                              alpha[static_cast<std::size_t>(mu - 1)].deriv(x, ss.x_generator(nu));
          r_curv = std::max(r_curv, coeff_norm(ym_field_bivector(em, x, mu, nu) - Iy * want));
        }

      for (int mu = 1; mu <= ss.dim_x; ++mu)
        csv += (mu > 1 ? "," : "") + detail::csv_num(x.vec(mu));
      csv += "," + detail::csv_num(real_form) + "," + detail::csv_num(complex_form) + "\n";
      ++report_.step_count;
    }
    write_table("em.csv", csv);
    check("complex-form-equivalence", r_complex, tol_fixed(1e-10));
    check("abelian-curvature", r_curv, tol(1e-10, 1e-6));

    // phase shift: rotating the fibre adds the angle to phi and subtracts its
    // gradient from the potential
    if (scn_.fields.contains("theta")) {
      const CoordinateExpression theta =
          detail::entry_expression(alg, scn_.fields.at("theta"), "fields.theta");
      const GaugeField g = make_yang_mills_gauge(em);
      const PointMap rot = ym_rotation_point_map(
          ss,
          [Iy, theta](const Multivector& x) { return rotor_from_bivector(Iy * theta(x)); },
          analytic() ? std::function<Multivector(const Multivector&, const Multivector&)>(
                           [Iy, theta](const Multivector& x, const Multivector& dx) {
                             return Iy * rotor_from_bivector(Iy * theta(x)).element *
                                    (-0.5 * theta.deriv(x, dx));
                           })
                     : std::function<Multivector(const Multivector&, const Multivector&)>());
      const GaugeField transported = gauge_transform(g, rot);
      const GaugeField direct = make_yang_mills_gauge(make_em_field(
          ss, [phi, theta](const Multivector& x) { return phi(x) + theta(x); },
          [alpha, theta, ss](const Multivector& x, int mu) {
            return alpha[static_cast<std::size_t>(mu - 1)](x) -
                   theta.deriv(x, ss.x_generator(mu));
          }));
      double r_shift = 0.0;
      for (std::size_t i = 0; i < pts.size() && i < 16; ++i) {
        r_shift = std::max(r_shift,
                           detail::map_diff(transported.hbar_at(pts[i]), direct.hbar_at(pts[i])));
        ++report_.step_count;
      }
      check("phase-shift-rule", r_shift, tol(1e-9, 1e-6));
    }
  }
};

inline Report run_scenario(const Scenario& scn, const RunOptions& opts = {}) {
  return ScenarioRun(scn, opts).run();
}

// ---- preset registry ----

struct Preset {
  const char* name;
  const char* kind;
  const char* topic;
  const char* invariant;
  const char* text;
};

inline const std::vector<Preset>& preset_registry() {
  static const std::vector<Preset> presets = {
      {"algebra-identities", "algebra-check",
       "core product identities across a mixed-signature algebra",
       "a b = a.b + a^b and the commutator Jacobi identity hold to 1e-12",
       R"json({"name":"algebra-identities","kind":"algebra-check",
           "algebra":{"dim":3,"signature":[1,-1,1]},
           "instances":200,"seed":11})json"},

      {"gauge-forms", "gauge-check",
       "mutual consistency of the four forms of a position-dependent linear field",
       "adjoint and inverse forms compose back to the identity within 1e-10",
       R"json({"name":"gauge-forms","kind":"gauge-check",
           "algebra":{"dim":2,"signature":[1,1]},
           "fields":{"hbar":[["1+0.2*q2","0.1*q1"],["0.05*q2","1+0.1*q1"]]},
           "points":64,"seed":12})json"},

      {"pure-gauge-F", "field-strength",
       "field strength vanishes for fields transported from the identity",
       "max |F| <= 1e-5 (finite differences) across random cubic coordinate maps",
       R"json({"name":"pure-gauge-F","kind":"field-strength",
           "algebra":{"dim":3,"signature":[1,1,1]},
           "fields":{"random_diffeos":10,"amplitude":0.15},
           "points":64,"seed":13})json"},

      {"field-strength-extension", "field-strength",
       "multivector extension of the field strength",
       "F(A^B) = F(A)^B + (-1)^r A^F(B) and grade raising r -> r+1",
       R"json({"name":"field-strength-extension","kind":"field-strength",
           "algebra":{"dim":3,"signature":[1,-1,1]},
           "fields":{"hbar":[["1+0.15*sin(q2)","0.1*q3","0"],
                              ["0","1+0.1*q1^2","0.05*q1"],
                              ["0.1*q2","0","1+0.1*q3^2"]]},
           "points":16,"seed":14})json"},

      {"gauge-invariance", "field-strength",
       "the field strength is unchanged by coordinate transformations",
       "transported and direct field strengths agree on transported arguments",
       R"json({"name":"gauge-invariance","kind":"field-strength",
           "algebra":{"dim":2,"signature":[1,1]},
           "fields":{"hbar":[["1+0.2*sin(q1)","0.1*q2"],["0","1+0.1*q1^2"]],
                     "diffeo":["q1+0.1*q2^2","q2+0.08*q1^3"]},
           "points":16,"seed":15})json"},

      {"torsion-vielbein", "torsion",
       "torsion components against the explicit vielbein-derivative form",
       "T^rho_{mu nu} agrees with the component form and is antisymmetric in mu, nu",
       R"json({"name":"torsion-vielbein","kind":"torsion",
           "algebra":{"dim":3,"signature":[1,1,1]},
           "fields":{"hbar":[["1+0.2*q2","0.1*q3","0.05*q1"],
                              ["0.05*q3","1+0.15*q1","0.1*q2"],
                              ["0.1*q1","0.05*q2","1+0.1*q3"]]},
           "points":12,"seed":16})json"},

      {"flat-geodesic", "geodesic",
       "straight lines in a flat metric",
       "the trajectory stays on q0 + tau U0 to 1e-10 and the speed never drifts",
       R"json({"name":"flat-geodesic","kind":"geodesic",
           "algebra":{"dim":2,"signature":[1,1]},
           "fields":{"hbar":[["1","0"],["0","1"]],
                     "q0":[0.2,-0.3],"U0":[0.7,0.4],
                     "candidates":{"momentum-x":["1","0"],"momentum-y":["0","1"]},
                     "straight_line":true},
           "steps":400,"dtau":0.005,"seed":17})json"},

      {"polar-killing", "geodesic",
       "angular momentum along geodesics through polar coordinates",
       "the rotation charge drifts by no more than 1e-8 over a thousand steps",
       R"json({"name":"polar-killing","kind":"geodesic",
           "algebra":{"dim":2,"signature":[1,1]},
           "fields":{"hbar":[["1","0"],["0","1/q1"]],
                     "q0":[1.4,0.2],"U0":[0.15,0.2],
                     "candidates":{"rotation":["0","1"]}},
           "box":{"lo":0.9,"hi":1.9},
           "steps":1000,"dtau":0.001,"seed":18})json"},

      {"convergence-order", "geodesic",
       "step-halving order of the trajectory integrator",
       "halving the step shrinks the endpoint error by a factor in [12, 20]",
       R"json({"name":"convergence-order","kind":"geodesic",
           "algebra":{"dim":2,"signature":[1,1]},
           "fields":{"hbar":[["1/(1+0.25*sin(q1+0.5*q2))","0"],
                              ["0","1/(1+0.25*sin(q1+0.5*q2))"]],
                     "q0":[0.1,-0.2],"U0":[0.6,0.3],
                     "convergence":{"ref_steps":320}},
           "steps":20,"dtau":0.04,"seed":19})json"},

      {"flat-killing-scan", "killing-scan",
       "symmetry-candidate catalog over a flat metric",
       "residual decisions match the closed-form catalog and the momentum-based test",
       R"json({"name":"flat-killing-scan","kind":"killing-scan",
           "algebra":{"dim":2,"signature":[1,1]},
           "fields":{"hbar":[["1","0"],["0","1"]],
                     "candidates":{
                       "translation-x":["1","0"],
                       "translation-y":["0","1"],
                       "rotation":["-q2","q1"],
                       "constant-mix":["1","1"],
                       "dilation":["q1","q2"],
                       "shear-x":["q2","0"],
                       "shear-y":["0","q1"],
                       "boost-like":["q2","q1"],
                       "radial-square":["q1^2","q2^2"],
                       "sine-flow":["sin(q2)","0"],
                       "twist":["q1*q2","-q2^2"]},
                     "expected":{
                       "translation-x":true,"translation-y":true,"rotation":true,
                       "constant-mix":true,"dilation":false,"shear-x":false,
                       "shear-y":false,"boost-like":false,"radial-square":false,
                       "sine-flow":false,"twist":false}},
           "points":32,"seed":20})json"},

      {"scalar-action-sweep", "action-sweep",
       "field action integrand under a base-space block field",
       "the generic multiplier form reduces to the determinant-weighted block form",
       R"json({"name":"scalar-action-sweep","kind":"action-sweep",
           "algebra":{"dim":4,"signature":[1,-1,1,1],"split":2},
           "fields":{"y":["0.4*q1+0.1*q2","0.2*q1*q2"],
                     "potential":"0.2*y1+0.15*y2^2+0.1*y1*y2",
                     "gauge":{"block":[["1+0.1*q2","0.05*q1","0","0"],
                                        ["0.05*q2","1+0.1*q1","0","0"],
                                        ["0","0","1","0"],
                                        ["0","0","0","1"]]}},
           "points":64,"seed":21})json"},

      {"ym-action-sweep", "action-sweep",
       "field action integrand under a rotor-plus-potential field",
       "the generic multiplier form reduces to the covariant-derivative form",
       R"json({"name":"ym-action-sweep","kind":"action-sweep",
           "algebra":{"dim":4,"signature":[1,-1,1,1],"split":2},
           "fields":{"y":["0.4*q1+0.1*q1*q2","0.3*q2"],
                     "u":"0.25*s+0.1*s^2",
                     "gauge":{"ym":{"plane":[1,2],"angle":"0.4*q1*q2",
                                    "potential":[["0.2*q1"],["0.1*q2"]]}}},
           "points":64,"seed":22})json"},

      {"ym-covariant-commutator", "field-strength",
       "commutator of covariant derivatives against the curvature bivectors",
       "[D_mu, D_nu] y equals y contracted on the curvature to 1e-6",
       R"json({"name":"ym-covariant-commutator","kind":"field-strength",
           "algebra":{"dim":5,"signature":[1,-1,1,1,1],"split":2},
           "fields":{"ym":{"plane":[1,2],"angle":"0.5*q1+0.3*q1*q2",
                           "potential":[["0.2*q1","0.1*q2","0.15*q1*q2"],
                                         ["0.1*q1*q2","0.2*q2","0.05*q1"]]}},
           "points":12,"seed":23})json"},

      {"em-complex-equivalence", "em-equivalence",
       "two-component field action in complex variables",
       "the real and complex integrands agree to 1e-10 and phase shifts move the potential",
       R"json({"name":"em-complex-equivalence","kind":"em-equivalence",
           "algebra":{"dim":4,"signature":[1,-1,1,1],"split":2},
           "fields":{"phi":"0.3*q1+0.2*q1*q2",
                     "alpha":["0.2*q2","-0.1*q1"],
                     "y":["0.4*q1+0.1*q2","0.2*q1*q2"],
                     "u":"0.3*s+0.05*s^2",
                     "theta":"0.25*q1*q2"},
           "points":32,"seed":24})json"},
  };
  return presets;
}

inline Scenario preset_scenario(const std::string& name) {
  for (const auto& p : preset_registry())
    if (name == p.name) return scenario_from_string(p.text);
  std::string known;
  for (const auto& p : preset_registry()) known += std::string(" ") + p.name;
  throw ga_error("unknown preset '" + name + "'; available:" + known);
}

}  // namespace gafield
