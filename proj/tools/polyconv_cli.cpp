// Command-line front end: convexification exponents, exact convexity
// certificates, sums-of-squares shifts, and the proximity minimizer.

#include "polyconv/convexify.hpp"
#include "polyconv/grid_kernels.hpp"
#include "polyconv/oracles.hpp"
#include "polyconv/proximity.hpp"
#include "polyconv/shift.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <random>
#include <iostream>

using json = nlohmann::ordered_json;
using namespace polyconv;

namespace {

Rat parse_rat_scalar(const std::string& text) {
  auto p = parse_polynomial<Rat>(text, 1);
  if (p.degree() > 0) throw std::invalid_argument("expected a number, got a polynomial: " + text);
  return p.coeff(Mono{0});
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    out.push_back(std::stod(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

int count_vars(const std::string& desc) {
  // ball:cx,cy:r / box:lo..:hi.. infer dimension from the coordinate list
  const std::size_t c1 = desc.find(':');
  const std::size_t c2 = desc.find(':', c1 + 1);
  const std::string coords = desc.substr(c1 + 1, c2 - c1 - 1);
  return 1 + (int)std::count(coords.begin(), coords.end(), ',');
}

ConvexSet parse_set(const std::string& desc, int nvars, double basic_radius) {
  const std::size_t colon = desc.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("set descriptor needs a kind prefix");
  const std::string kind = desc.substr(0, colon);
  const std::string rest = desc.substr(colon + 1);
  if (kind == "ball") {
    const std::size_t sep = rest.rfind(':');
    if (sep == std::string::npos) throw std::invalid_argument("ball:cx,cy,..:r");
    return make_ball(parse_doubles(rest.substr(0, sep)), std::stod(rest.substr(sep + 1)));
  }
  if (kind == "box") {
    const std::size_t sep = rest.find(':');
    if (sep == std::string::npos) throw std::invalid_argument("box:lo1,..:hi1,..");
    return make_box(parse_doubles(rest.substr(0, sep)), parse_doubles(rest.substr(sep + 1)));
  }
  if (kind == "hs") {
    std::vector<std::vector<double>> normals;
    std::vector<double> offsets;
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t next = rest.find(';', pos);
      if (next == std::string::npos) next = rest.size();
      const std::string item = rest.substr(pos, next - pos);
      const std::size_t sep = item.rfind(':');
      if (sep == std::string::npos) throw std::invalid_argument("hs:a11,a12:b1;a21,a22:b2");
      normals.push_back(parse_doubles(item.substr(0, sep)));
      offsets.push_back(std::stod(item.substr(sep + 1)));
      pos = next + 1;
    }
    // find a witness: try the origin, then Dykstra from it
    std::vector<double> w((std::size_t)(normals.empty() ? nvars : (int)normals[0].size()), 0.0);
    Halfspaces probe{normals, offsets, w};
    if (!contains(ConvexSet(probe), w, 1e-9)) {
      ConvexSet tmp(probe);
      w = project(tmp, w);
    }
    return make_halfspaces(std::move(normals), std::move(offsets), std::move(w));
  }
  if (kind == "basic") {
    std::vector<Polynomial<double>> gs;
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t next = rest.find(';', pos);
      if (next == std::string::npos) next = rest.size();
      gs.push_back(parse_polynomial<double>(rest.substr(pos, next - pos), nvars));
      pos = next + 1;
    }
    std::vector<double> w((std::size_t)nvars, 0.0);
    return make_basic_sublevel(std::move(gs), basic_radius, std::move(w));
  }
  throw std::invalid_argument("unknown set kind: " + kind);
}

std::string jnum(double v) { return double_str(v); }
std::string jnum(const Rat& v) { return rat_str(v); }

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump() << "\n";
  } else {
    std::ofstream os(out_path);
    os << j.dump() << "\n";
  }
}

int run_selftest(std::uint64_t seed);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyconv: convexification exponents, s.o.s. shifts, and the proximity minimizer"};
  app.require_subcommand(1);
  app.fallthrough(true);

  std::string mode = "double", out_path, f_text, set_desc, g_text, interval_text, a0_text, xi_text;
  double mesh = 0, epsilon = 0.5, tol_outer = 1e-8, tol_inner = 1e-10, R_in = 1.0, mu_in = 0, C_in = 0;
  long L_in = 0, N_in = -1, max_iter = 10000;
  std::uint64_t seed = 1;

  app.add_option("--mode", mode, "rational|double output mode")->check(CLI::IsMember({"rational", "double"}));
  app.add_option("--out", out_path, "write the primary JSON output to this file");

  auto* cmd_exp = app.add_subcommand("exponent", "certified convexification exponent on a compact set");
  cmd_exp->fallthrough();
  cmd_exp->add_option("--f", f_text, "polynomial")->required();
  cmd_exp->add_option("--set", set_desc, "set descriptor")->required();
  cmd_exp->add_option("--xi", xi_text, "center for phi_{N,xi} (comma separated)");
  cmd_exp->add_option("--mesh", mesh, "grid mesh for the certified lower bound (0 = auto)");

  auto* cmd_cert = app.add_subcommand("certify", "exact univariate convexity certificate");
  cmd_cert->fallthrough();
  cmd_cert->add_option("--f", f_text, "univariate polynomial")->required();
  cmd_cert->add_option("--interval", interval_text, "a,b")->required();
  cmd_cert->add_option("--N", N_in, "certify (1+x^2)^N f instead of f");
  bool non_strict = false;
  cmd_cert->add_flag("--non-strict", non_strict, "decide convexity instead of strict convexity");

  auto* cmd_shift = app.add_subcommand("shift", "sums-of-squares shift construction and verification");
  cmd_shift->fallthrough();
  cmd_shift->add_option("--f", f_text, "objective polynomial")->required();
  cmd_shift->add_option("--g", g_text, "constraints g1;g2;... (X = {g_i >= 0})")->required();
  cmd_shift->add_option("--R", R_in, "ball radius containing X")->required();
  cmd_shift->add_option("--epsilon", epsilon, "target accuracy")->required();
  cmd_shift->add_option("--mu", mu_in, "strongly-concave mode constant");
  cmd_shift->add_option("--C", C_in, "Lojasiewicz constant (with --L)");
  cmd_shift->add_option("--L", L_in, "Lojasiewicz exponent (with --C)");
  cmd_shift->add_option("--mesh", mesh, "verification grid mesh (0 = auto)");

  auto* cmd_min = app.add_subcommand("minimize", "proximity iteration toward a lower critical point");
  cmd_min->fallthrough();
  cmd_min->add_option("--f", f_text, "objective polynomial")->required();
  cmd_min->add_option("--set", set_desc, "set descriptor (ball/box/hs)")->required();
  cmd_min->add_option("--a0", a0_text, "start point (defaults to the set's center)");
  cmd_min->add_option("--N", N_in, "exponent (default 6)");
  cmd_min->add_option("--tol-outer", tol_outer, "outer step tolerance");
  cmd_min->add_option("--tol-inner", tol_inner, "inner residual tolerance");
  cmd_min->add_option("--max-iter", max_iter, "outer iteration cap");
  cmd_min->add_option("--mesh", mesh, "lemma-verification grid mesh (0 = skip)");

  auto* cmd_self = app.add_subcommand("selftest", "run the randomized invariant suites");
  cmd_self->fallthrough();
  cmd_self->add_option("--seed", seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);
  const bool rational = mode == "rational";

  try {
    if (*cmd_exp) {
      const int n = count_vars(set_desc);
      auto f = parse_polynomial<Rat>(f_text, n);
      ConvexSet X = parse_set(set_desc, n, R_in);
      std::vector<double> xi;
      if (!xi_text.empty()) xi = parse_doubles(xi_text);
      ConvexifyOptions opts;
      opts.mesh = mesh;
      auto cert = convexify_on_compact(f, X, xi, opts);
      json j;
      if (rational) {
        j["m"] = jnum(cert.m);
        j["R"] = jnum(cert.R);
        j["D"] = jnum(cert.D);
        j["scriptN"] = jnum(cert.script_N_value);
      } else {
        j["m"] = jnum(to_double(cert.m));
        j["R"] = jnum(to_double(cert.R));
        j["D"] = jnum(to_double(cert.D));
        j["scriptN"] = jnum(to_double(cert.script_N_value));
      }
      j["N"] = cert.N.get_str();
      j["method"] = cert_method_name(cert.method);
      emit(j, out_path);
      return 0;
    }

    if (*cmd_cert) {
      auto f = parse_polynomial<Rat>(f_text, 1);
      auto ab = interval_text;
      const std::size_t comma = ab.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("--interval expects a,b");
      const Rat a = parse_rat_scalar(ab.substr(0, comma));
      const Rat b = parse_rat_scalar(ab.substr(comma + 1));
      bool convex;
      if (N_in >= 0) {
        if (non_strict) {
          convex = is_convex_on_interval(phi_N_univariate(UPoly::from(f), (unsigned)N_in), a, b, false);
        } else {
          UPoly cof = phi_ddot_cofactor(UPoly::from(f), Rat(N_in));
          convex = !cof.is_zero() && is_positive_on_interval(cof, a, b);
        }
      } else {
        convex = is_convex_on_interval(UPoly::from(f), a, b, !non_strict);
      }
      json j;
      j["convex"] = convex;
      j["method"] = "sturm";
      emit(j, out_path);
      return 0;
    }

    if (*cmd_shift) {
      // constraints share the arity of f; infer it from the largest index used
      int n = 1;
      for (const std::string* t : {&f_text, &g_text}) {
        for (std::size_t i = 0; i + 1 < t->size(); ++i)
          if ((*t)[i] == 'x' && std::isdigit((unsigned char)(*t)[i + 1]))
            n = std::max(n, std::atoi(t->c_str() + i + 1));
      }
      auto f = parse_polynomial<Rat>(f_text, n);
      std::vector<Polynomial<Rat>> gs;
      std::size_t pos = 0;
      while (pos < g_text.size()) {
        std::size_t next = g_text.find(';', pos);
        if (next == std::string::npos) next = g_text.size();
        gs.push_back(parse_polynomial<Rat>(g_text.substr(pos, next - pos), n));
        pos = next + 1;
      }
      ShiftMode smode;
      if (mu_in > 0)
        smode = StronglyConcaveMode{rat_from_double(mu_in)};
      else if (C_in > 0 && L_in > 0)
        smode = LojasiewiczMode{rat_from_double(C_in), Int(L_in)};
      else
        throw std::invalid_argument("shift needs --mu or --C with --L");
      ShiftSpec spec = shift_params(f, gs, rat_from_double(R_in), rat_from_double(epsilon), smode);
      LazyShift h = build_shift(spec);

      double m = mesh;
      if (m <= 0) m = 2.0 * R_in / (n == 1 ? 1000.0 : (n == 2 ? 500.0 : 60.0));
      // X grid: lattice over [-R, R]^n filtered by the constraints
      std::vector<std::vector<double>> X_grid, ball_grid;
      {
        std::vector<Polynomial<double>> gd;
        for (const auto& g : gs) gd.push_back(to_double_poly(g));
        const Lattice L = bounding_lattice(make_ball(std::vector<double>((std::size_t)n, 0.0), R_in), m);
        std::vector<double> x((std::size_t)n);
        for (std::int64_t i = 0; i < L.total(); ++i) {
          L.point(i, x);
          double r2 = 0;
          for (double v : x) r2 += v * v;
          if (r2 > R_in * R_in + 1e-12) continue;
          ball_grid.push_back(x);
          bool in = true;
          for (const auto& g : gd)
            if (g.evaluate(std::span<const double>(x)) < -1e-12) in = false;
          if (in) X_grid.push_back(x);
        }
      }
      ShiftReport rep = verify_shift(f, h, spec.epsilon, X_grid, ball_grid, m);
      emit(json::parse(shift_report_json(spec, rep)), out_path);
      return rep.range_ok && rep.dominance_ok && rep.sandwich_ok ? 0 : 1;
    }

    if (*cmd_min) {
      if (rational) throw std::invalid_argument("minimize supports --mode double only");
      const int n = count_vars(set_desc);
      auto f = parse_polynomial<double>(f_text, n);
      ConvexSet X = parse_set(set_desc, n, R_in);
      std::vector<double> a0 = a0_text.empty() ? set_witness(X) : parse_doubles(a0_text);
      ProximityConfig cfg;
      if (N_in >= 1) cfg.N = N_in;
      cfg.tol_outer = tol_outer;
      cfg.tol_inner = tol_inner;
      cfg.max_outer = (int)max_iter;
      auto tr = iterate(f, X, a0, cfg);
      if (mesh > 0) verify_step_lemmas(tr, mesh);
      const std::string lines = trace_jsonl(tr);
      if (!out_path.empty()) {
        std::ofstream os(out_path);
        os << lines;
      } else {
        std::cout << lines;
      }
      json j;
      json astar = json::array();
      for (double v : tr.iterates.back()) astar.push_back(jnum(v));
      j["a_star"] = astar;
      j["f_star"] = jnum(f.evaluate(std::span<const double>(tr.iterates.back())));
      j["critical"] = tr.critical;
      j["status"] = prox_status_name(tr.status);
      j["outer_iterations"] = tr.steps.size();
      std::cout << j.dump() << "\n";
      return tr.status == ProxStatus::Converged && tr.critical ? 0 : 1;
    }

    if (*cmd_self) return run_selftest(seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

namespace {

int run_selftest(std::uint64_t seed) {
  int failures = 0;
  auto report = [&](const char* name, bool ok) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
    if (!ok) ++failures;
  };
  std::mt19937_64 eng(seed);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * ((double)(eng() >> 11) * 0x1.0p-53);
  };
  auto uniform_int = [&](long lo, long hi) { return lo + (long)(eng() % (std::uint64_t)(hi - lo + 1)); };

  // exact formula reproduction
  report("script_N(1,1,1) == 6", script_N(Rat(1), Rat(1), Rat(1)) == 6);
  report("lojasiewicz_exponent_bound(2,2,1) == 162", lojasiewicz_exponent_bound(2, 2, 1) == 162);

  // parse . format identity
  {
    bool ok = true;
    for (int t = 0; t < 20 && ok; ++t) {
      const int n = (int)uniform_int(1, 3);
      Polynomial<Rat> p(n);
      for (int k = 0; k < 5; ++k) {
        Mono m((std::size_t)n, 0);
        for (int i = 0; i < n; ++i) m[(std::size_t)i] = (std::uint32_t)uniform_int(0, 3);
        p.add_term(m, make_rat(uniform_int(-24, 24), 8));
      }
      ok = parse_polynomial<Rat>(format_polynomial(p), n) == p;
    }
    report("parse(format(p)) == p on random polynomials", ok);
  }

  // Sturm count vs the dense sign-scan oracle
  {
    bool ok = true;
    int done = 0;
    while (done < 20 && ok) {
      Polynomial<Rat> p(1);
      for (int k = 0; k < 5; ++k)
        p.add_term(Mono{(std::uint32_t)uniform_int(0, 8)}, Rat(uniform_int(-9, 9)));
      UPoly u = UPoly::from(p);
      if (u.deg() < 1) continue;
      ++done;
      const Rat K = cauchy_K(p);
      ok = count_real_roots(u, -K, K) == oracles::sign_scan_roots(to_double_poly(p), -to_double(K), to_double(K));
    }
    report("count_real_roots agrees with the sign-scan oracle", ok);
  }

  // coefficient bounds dominate sampled values
  {
    bool ok = true;
    for (int t = 0; t < 20 && ok; ++t) {
      Polynomial<double> p(2);
      for (int k = 0; k < 5; ++k) {
        Mono m{(std::uint32_t)uniform_int(0, 3), (std::uint32_t)uniform_int(0, 3)};
        p.add_term(m, uniform(-3.0, 3.0));
      }
      std::vector<double> x{uniform(-2.0, 2.0), uniform(-2.0, 2.0)};
      const double nx = std::sqrt(x[0] * x[0] + x[1] * x[1]);
      if (nx < 1e-9) continue;
      ok = std::fabs(p.evaluate(std::span<const double>(x))) <= bound_A(p, nx) * (1 + 1e-9) + 1e-12;
    }
    report("|p(x)| <= bound_A(p, |x|) on samples", ok);
  }

  // serial and parallel kernels agree
  {
    std::vector<double> data(40000);
    for (auto& v : data) v = uniform(-1e3, 1e3);
    auto at = [&](std::int64_t i) { return data[(std::size_t)i]; };
    const auto s = scan_min_serial((std::int64_t)data.size(), at);
    const auto p = scan_min_parallel((std::int64_t)data.size(), at);
    report("scan_min parallel == serial", s.value == p.value && s.index == p.index);
  }

  // proximity on the linear objective
  {
    auto f = parse_polynomial<double>("x1 + 2", 1);
    auto tr = iterate(f, make_box({-0.5}, {0.5}), std::vector<double>{0.0});
    report("proximity converges to the boundary critical point",
           tr.status == ProxStatus::Converged && std::fabs(tr.iterates.back()[0] + 0.5) < 1e-3);
  }

  std::cout << (failures == 0 ? "selftest: all suites passed\n" : "selftest: FAILURES present\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace
