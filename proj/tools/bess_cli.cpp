// Batch front-end: loads problems from JSON files, runs the library
// pipelines, and emits machine-readable reports.
//
// Commands
//   eval         f at the file's points
//   decompose    phi_k samples at the file's points (plus the base point E)
//   cayley       double Cayley transform at the file's disk points
//   realize      lurking-isometry colligation from the pencil
//   reconstruct  pencil from the file's colligation
//   check        membership report for the pencil
//   realcheck    realness report (function, doubled factors, colligation)
//   demo         two-resistor example end to end, no input file
//
// Exit codes: 0 all checks pass, 1 failed checks, 2 parse/shape errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bess/bess.hpp"

namespace {

using nlohmann::json;
using namespace bess;

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw InvalidInput("matrix must be a nonempty array of rows");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j.at(0).size());
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Index>(row.size()) != cols)
      throw InvalidInput("matrix rows have unequal length");
    for (Index c = 0; c < cols; ++c) {
      const json& e = row.at(static_cast<std::size_t>(c));
      if (!e.is_array() || e.size() != 2)
        throw InvalidInput("complex entries must be [re, im] pairs");
      m(i, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

json point_to_json(const MatrixPoint& z) {
  json out = json::array();
  for (const CMatrix& zk : z.Z) out.push_back(matrix_to_json(zk));
  return out;
}

MatrixPoint point_from_json(const json& j) {
  std::vector<CMatrix> z;
  for (const json& zk : j) z.push_back(matrix_from_json(zk));
  return MatrixPoint(std::move(z));
}

json report_to_json(const Report& r) {
  json checks = json::array();
  for (const CheckResult& c : r.checks)
    checks.push_back(json{{"name", c.name},
                          {"max_residual", c.max_residual},
                          {"threshold", c.threshold},
                          {"pass", c.pass},
                          {"witness", c.witness}});
  return checks;
}

struct Problem {
  std::optional<Shape> shape;
  std::optional<BessFunction> f;
  std::vector<MatrixPoint> points;
  std::vector<MatrixPoint> disk_points;
  std::optional<Colligation> colligation;
  std::optional<Involution> involution_u;
  std::optional<std::vector<Involution>> involutions_m;
  SampleConfig config;
};

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open input file: " + path);
  json j;
  in >> j;
  if (!j.contains("version") || j.at("version").get<std::string>() != "bess/1")
    throw InvalidInput("missing or unsupported version tag (want \"bess/1\")");

  Problem p;
  if (j.contains("shape")) {
    Shape s;
    const json& js = j.at("shape");
    s.n = js.at("n").get<std::vector<Index>>();
    s.m = js.at("m").get<std::vector<Index>>();
    s.u = js.at("u").get<Index>();
    s.h = js.at("h").get<Index>();
    s.validate();
    p.shape = s;
  }
  if (j.contains("pencil")) {
    if (!p.shape) throw InvalidInput("pencil requires a shape");
    std::vector<CMatrix> g;
    for (const json& gk : j.at("pencil")) g.push_back(matrix_from_json(gk));
    p.f = BessFunction(PsdPencil(*p.shape, std::move(g)));
  }
  if (j.contains("points"))
    for (const json& pt : j.at("points")) p.points.push_back(point_from_json(pt));
  if (j.contains("disk_points"))
    for (const json& pt : j.at("disk_points"))
      p.disk_points.push_back(point_from_json(pt));
  if (j.contains("colligation")) {
    const json& jc = j.at("colligation");
    p.colligation = Colligation(jc.at("n").get<std::vector<Index>>(),
                                jc.at("x").get<Index>(), jc.at("u").get<Index>(),
                                matrix_from_json(jc.at("U")));
  }
  if (j.contains("involution_u"))
    p.involution_u = Involution(matrix_from_json(j.at("involution_u")));
  if (j.contains("involutions_m")) {
    std::vector<Involution> invs;
    for (const json& ji : j.at("involutions_m"))
      invs.push_back(Involution(matrix_from_json(ji)));
    p.involutions_m = std::move(invs);
  }
  if (j.contains("config")) {
    const json& jc = j.at("config");
    if (jc.contains("seed")) p.config.seed = jc.at("seed").get<std::uint64_t>();
    if (jc.contains("num_points")) p.config.num_points = jc.at("num_points").get<int>();
    if (jc.contains("num_tuples")) p.config.num_tuples = jc.at("num_tuples").get<int>();
    if (jc.contains("carrier_dim")) p.config.carrier_dim = jc.at("carrier_dim").get<Index>();
    if (jc.contains("margin")) p.config.margin = jc.at("margin").get<double>();
    if (jc.contains("tol_identity"))
      p.config.tol_identity = jc.at("tol_identity").get<double>();
    if (jc.contains("tol_positivity"))
      p.config.tol_positivity = jc.at("tol_positivity").get<double>();
  }
  return p;
}

const BessFunction& require_pencil(const Problem& p) {
  if (!p.f) throw InvalidInput("this command requires a pencil in the input file");
  return *p.f;
}

json colligation_to_json(const Colligation& c) {
  return json{{"n", c.n}, {"x", c.x}, {"u", c.u}, {"U", matrix_to_json(c.U)}};
}

void add_check(Report& r, const std::string& name, double residual,
               double threshold, const std::string& witness = "") {
  r.add({name, residual, threshold, residual <= threshold,
         residual <= threshold ? "" : witness});
}

// realize: symmetric lurking isometry from a seeded disk grid.
Colligation realize_colligation(const BessFunction& f, const SampleConfig& cfg,
                                Report& report) {
  Rng rng(cfg.seed);
  std::vector<MatrixPoint> grid{MatrixPoint::zero(f.shape().n)};
  Rng grid_rng = rng.stream(101);
  for (int i = 0; i < cfg.num_points; ++i)
    grid.push_back(random_disk_point(f.shape().n, grid_rng, 0.05, 0.8));
  const KernelSamples samples = kernel_samples_from_pencil(f, grid);
  LurkingOptions opts;
  opts.symmetric = true;
  const Colligation c = lurking_isometry(samples, opts);

  add_check(report, "unitarity", c.unitary_defect(), 1e-8);
  add_check(report, "selfadjointness", c.selfadjoint_defect(), 1e-8);
  add_check(report, "spectrum-condition", check_spectrum_condition(c) ? 0.0 : 1.0,
            0.5, "1 is in the spectrum of F(0)");
  double training = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    training = std::max(
        training, (transfer_eval(c, samples.points[i]) - samples.F[i]).norm());
  add_check(report, "training-reproduction", training, 1e-8);
  const SchurAglerEvaluator fw = double_cayley(f);
  Rng held_rng = rng.stream(102);
  double held = 0.0;
  for (int i = 0; i < 10; ++i) {
    const MatrixPoint w = random_disk_point(f.shape().n, held_rng, 0.05, 0.8);
    held = std::max(held, (transfer_eval(c, w) - fw.eval(w)).norm());
  }
  add_check(report, "held-out-reproduction", held, 1e-6);
  return c;
}

int run_command(const std::string& command, const std::string& input,
                const std::string& out_path, const SampleConfig& overrides,
                const std::vector<bool>& overridden) {
  Problem p;
  if (command != "demo") p = load_problem(input);
  // Flag overrides: seed, tol, samples, tuples, carrier-dim.
  if (overridden[0]) p.config.seed = overrides.seed;
  if (overridden[1]) p.config.tol_identity = overrides.tol_identity;
  if (overridden[2]) p.config.num_points = overrides.num_points;
  if (overridden[3]) p.config.num_tuples = overrides.num_tuples;
  if (overridden[4]) p.config.carrier_dim = overrides.carrier_dim;

  json out;
  out["version"] = "bess/1";
  out["command"] = command;
  out["seed"] = p.config.seed;
  Report report;

  if (command == "eval") {
    const BessFunction& f = require_pencil(p);
    if (p.points.empty()) throw InvalidInput("eval requires points");
    json values = json::array();
    double positivity = 0.0;
    for (const MatrixPoint& z : p.points) {
      const CMatrix v = eval_f(f, z);
      values.push_back(matrix_to_json(v));
      if (z.in_halfplane())
        positivity = std::max(
            positivity, std::max(0.0, -min_eig_herm(v) / (1.0 + operator_norm(v))));
    }
    out["values"] = std::move(values);
    add_check(report, "halfplane-positivity", positivity, 1e-9);
  } else if (command == "decompose") {
    const BessFunction& f = require_pencil(p);
    std::vector<MatrixPoint> pts{MatrixPoint::identity(f.shape().n)};
    pts.insert(pts.end(), p.points.begin(), p.points.end());
    json samples = json::array();
    double residual = 0.0;
    for (const MatrixPoint& z : pts) {
      const auto phis = phi(f, z);
      json jp = json::array();
      for (const CMatrix& pk : phis) jp.push_back(matrix_to_json(pk));
      samples.push_back(json{{"point", point_to_json(z)}, {"phi", std::move(jp)}});
      // Decomposition residual against the direct evaluation.
      CMatrix sum = CMatrix::Zero(f.u(), f.u());
      for (Index k = 0; k < f.shape().vars(); ++k) {
        const Index mk = f.shape().m[static_cast<std::size_t>(k)];
        if (mk == 0) continue;
        sum += phis[static_cast<std::size_t>(k)].adjoint() *
               kron(z.Z[static_cast<std::size_t>(k)], CMatrix::Identity(mk, mk)) *
               phis[static_cast<std::size_t>(k)];
      }
      const CMatrix fz = eval_f(f, z);
      residual = std::max(residual, (sum - fz).norm() / (1.0 + fz.norm()));
    }
    out["phi_samples"] = std::move(samples);
    add_check(report, "decomposition-residual", residual, p.config.tol_identity);
  } else if (command == "cayley") {
    const BessFunction& f = require_pencil(p);
    if (p.disk_points.empty()) throw InvalidInput("cayley requires disk_points");
    const SchurAglerEvaluator fw = double_cayley(f);
    json values = json::array();
    double contraction = 0.0;
    for (const MatrixPoint& w : p.disk_points) {
      if (!w.in_disk()) throw InvalidInput("cayley: point outside the disk product");
      const CMatrix v = fw.eval(w);
      values.push_back(matrix_to_json(v));
      contraction = std::max(contraction, std::max(0.0, operator_norm(v) - 1.0));
    }
    out["values"] = std::move(values);
    add_check(report, "contractivity", contraction, 1e-9);
  } else if (command == "realize") {
    const Colligation c = realize_colligation(require_pencil(p), p.config, report);
    out["colligation"] = colligation_to_json(c);
  } else if (command == "reconstruct") {
    if (!p.colligation)
      throw InvalidInput("reconstruct requires a colligation in the input file");
    ReconstructionOptions ropts;
    ropts.seed = p.config.seed;
    const BessFunction f = bess_from_colligation(*p.colligation, ropts);
    json g = json::array();
    for (const CMatrix& gk : f.pencil.G) g.push_back(matrix_to_json(gk));
    out["shape"] = json{{"n", f.shape().n},
                        {"m", f.shape().m},
                        {"u", f.shape().u},
                        {"h", f.shape().h}};
    out["pencil"] = std::move(g);
    const SchurAglerEvaluator fw = double_cayley(f);
    Rng rng(p.config.seed);
    Rng held_rng = rng.stream(103);
    double held = 0.0;
    for (int i = 0; i < 10; ++i) {
      const MatrixPoint w = random_disk_point(f.shape().n, held_rng, 0.05, 0.8);
      held = std::max(held,
                      (fw.eval(w) - transfer_eval(*p.colligation, w)).norm());
    }
    add_check(report, "transfer-round-trip", held, 1e-6);
  } else if (command == "check") {
    report = check_membership(require_pencil(p), p.config);
  } else if (command == "realcheck") {
    const BessFunction& f = require_pencil(p);
    const Involution inv_u =
        p.involution_u ? *p.involution_u : Involution::standard(f.u());
    std::vector<Involution> inv_m;
    if (p.involutions_m) {
      inv_m = *p.involutions_m;
    } else {
      for (Index mk : f.shape().m) inv_m.push_back(Involution::standard(mk));
    }
    Rng rng(p.config.seed);
    Rng grid_rng = rng.stream(104);
    double fn_residual = 0.0;
    for (int i = 0; i < p.config.num_points; ++i) {
      const MatrixPoint z = random_halfplane_point(f.shape().n, grid_rng);
      const CMatrix direct = eval_f(f, z);
      const CMatrix sharp = inv_u.matrix() *
                            eval_f(f, z.conjugate()).conjugate() *
                            inv_u.matrix().conjugate();
      fn_residual = std::max(fn_residual,
                             (sharp - direct).norm() / (1.0 + direct.norm()));
    }
    add_check(report, "real-function", fn_residual, 1e-9);
    if (fn_residual <= 1e-9) {
      const RealifiedDecomposition rd = realify_decomposition(f, inv_u, inv_m);
      Rng pair_rng = rng.stream(105);
      double id_res = 0.0, real_res = 0.0;
      for (int i = 0; i < 5; ++i) {
        const MatrixPoint z = random_halfplane_point(f.shape().n, pair_rng);
        const MatrixPoint l = random_halfplane_point(f.shape().n, pair_rng);
        const auto pz = rd.phi_tilde(z);
        const auto pzc = rd.phi_tilde(z.conjugate());
        const auto pl = rd.phi_tilde(l);
        CMatrix sum = CMatrix::Zero(f.u(), f.u());
        for (Index k = 0; k < rd.shape.vars(); ++k) {
          const Index mk = rd.shape.m[static_cast<std::size_t>(k)];
          sum += pl[static_cast<std::size_t>(k)].adjoint() *
                 kron(z.Z[static_cast<std::size_t>(k)], CMatrix::Identity(mk, mk)) *
                 pz[static_cast<std::size_t>(k)];
        }
        const CMatrix fz = eval_f(f, z);
        id_res = std::max(id_res, (sum - fz).norm() / (1.0 + fz.norm()));
        for (Index k = 0; k < rd.shape.vars(); ++k) {
          const CMatrix big =
              kron(CMatrix::Identity(f.shape().n[static_cast<std::size_t>(k)],
                                     f.shape().n[static_cast<std::size_t>(k)]),
                   rd.m_involutions[static_cast<std::size_t>(k)].matrix());
          real_res = std::max(
              real_res,
              (big * pzc[static_cast<std::size_t>(k)].conjugate() *
                   inv_u.matrix().conjugate() -
               pz[static_cast<std::size_t>(k)])
                  .norm());
        }
      }
      add_check(report, "doubled-decomposition", id_res, 1e-9);
      add_check(report, "doubled-realness", real_res, 1e-9);
    }
    if (p.colligation) {
      const bool ok = check_real_colligation(
          *p.colligation, Involution::standard(p.colligation->x),
          Involution::standard(p.colligation->u));
      add_check(report, "real-colligation", ok ? 0.0 : 1.0, 0.5,
                "colligation is not ι-real");
    }
  } else if (command == "demo") {
    // The two-resistor pencil exercised end to end.
    Shape shape{{1, 1}, {1, 1}, 1, 1};
    CMatrix g1(1, 2), g2(1, 2);
    g1 << 1.0, 1.0;
    g2 << 0.0, 1.0;
    const BessFunction f{PsdPencil(shape, {g1, g2})};

    const MatrixPoint ones({CMatrix::Constant(1, 1, 1.0), CMatrix::Constant(1, 1, 1.0)});
    add_check(report, "eval-at-(1,1)",
              std::abs(eval_f(f, ones)(0, 0) - Complex(0.5)), 1e-12);

    const SchurAglerEvaluator fw = double_cayley(f);
    add_check(report, "double-cayley-at-0",
              std::abs(fw.eval(MatrixPoint::zero({1, 1}))(0, 0) + Complex(1.0 / 3.0)),
              1e-12);

    SampleConfig quick = p.config;
    quick.num_points = 10;
    quick.num_tuples = 24;
    for (const CheckResult& c : check_membership(f, quick).checks)
      report.add(c);

    const Colligation c = realize_colligation(f, quick, report);
    const BessFunction g = bess_from_colligation(c);
    Rng rng(quick.seed);
    Rng rt_rng = rng.stream(106);
    double round_trip = 0.0;
    for (int i = 0; i < 5; ++i) {
      const MatrixPoint z = random_halfplane_point({1, 1}, rt_rng);
      const CMatrix want = eval_f(f, z);
      round_trip = std::max(
          round_trip, (eval_f(g, z) - want).norm() / (1.0 + want.norm()));
    }
    add_check(report, "full-round-trip", round_trip, 1e-6);

    // Real structure: the pencil has real factors, so the realized
    // colligation can be kept real as well.
    std::vector<MatrixPoint> grid{MatrixPoint::zero({1, 1})};
    Rng real_rng = rng.stream(107);
    for (int i = 0; i < 6; ++i) {
      const MatrixPoint w = random_disk_point({1, 1}, real_rng);
      grid.push_back(w);
      grid.push_back(w.conjugate());
    }
    const KernelSamples samples = kernel_samples_from_pencil(f, grid);
    LurkingOptions opts;
    opts.symmetric = true;
    opts.real_structure =
        Involution::standard(samples.sum_n() * samples.x + samples.u);
    const Colligation cr = lurking_isometry(samples, opts);
    const bool real_ok = check_real_colligation(
        cr, Involution::standard(cr.x), Involution::standard(cr.u));
    add_check(report, "real-colligation", real_ok ? 0.0 : 1.0, 0.5);
    for (const CheckResult& c2 : report.checks)
      std::cout << (c2.pass ? "[PASS] " : "[FAIL] ") << c2.name
                << " (residual " << c2.max_residual << ", threshold "
                << c2.threshold << ")\n";
  } else {
    throw InvalidInput("unknown command: " + command);
  }

  out["pass"] = report.pass();
  out["checks"] = report_to_json(report);

  if (out_path == "-") {
    std::cout << out.dump(2) << "\n";
  } else {
    std::ofstream os(out_path);
    if (!os) throw InvalidInput("cannot write report file: " + out_path);
    os << out.dump(2) << "\n";
  }
  return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-resolvent pencil toolkit"};
  app.require_subcommand(1);

  std::string input, out_path = "report.json";
  SampleConfig overrides;
  std::vector<bool> overridden(5, false);

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input)
      sub->add_option("input", input, "problem file (JSON)")->required();
    sub->add_option("--out", out_path, "report output path ('-' for stdout)");
    sub->add_option("--seed", overrides.seed, "seed override")
        ->each([&](const std::string&) { overridden[0] = true; });
    sub->add_option("--tol", overrides.tol_identity, "identity tolerance override")
        ->each([&](const std::string&) { overridden[1] = true; });
    sub->add_option("--samples", overrides.num_points, "sample point count")
        ->each([&](const std::string&) { overridden[2] = true; });
    sub->add_option("--tuples", overrides.num_tuples, "operator tuple count")
        ->each([&](const std::string&) { overridden[3] = true; });
    sub->add_option("--carrier-dim", overrides.carrier_dim,
                    "largest carrier dimension for tuple checks")
        ->each([&](const std::string&) { overridden[4] = true; });
  };

  for (const std::string name :
       {"eval", "decompose", "cayley", "realize", "reconstruct", "check",
        "realcheck"})
    add_common(app.add_subcommand(name), true);
  add_common(app.add_subcommand("demo", "run the bundled example"), false);

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run_command(command, input, out_path, overrides, overridden);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: invalid input file: " << e.what() << "\n";
    return 2;
  }
}
