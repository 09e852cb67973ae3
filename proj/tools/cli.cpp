#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <tuple>

#include <CLI11.hpp>

#include "anosov/errors.hpp"
#include "anosov/flag.hpp"
#include "anosov/hitchin.hpp"
#include "anosov/lemma64.hpp"
#include "anosov/reducible_plane.hpp"
#include "anosov/report_io.hpp"
#include "anosov/surface.hpp"

namespace anosov::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> v;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = text.find(',', pos);
    const std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    double x = 0.0;
    const char* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, x);
    if (tok.empty() || ec != std::errc() || ptr != end || !std::isfinite(x))
      throw UsageError(std::string(flag) + ": cannot parse '" + tok + "' as a number");
    v.push_back(x);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return v;
}

std::vector<double> parse_list(const std::string& text, const char* flag, std::size_t expected) {
  auto v = parse_list(text, flag);
  if (v.size() != expected)
    throw UsageError(std::string(flag) + ": expected " + std::to_string(expected) + " comma-separated values");
  return v;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  f << text;
}

// lemma64

struct Lemma64Args {
  double beta_max = 0.95;
  int beta_phases = 16;
  double d_max = 5.0;
  double d_step = 0.05;
  int z_steps = 64;
  std::string out;
};

// Multiples of 0.1 below beta_max, then beta_max itself.
std::vector<double> beta_moduli(double beta_max) {
  if (!(beta_max >= 0.0 && beta_max < 1.0)) throw UsageError("--beta-max must lie in [0, 1)");
  std::vector<double> v;
  for (int k = 0; k / 10.0 < beta_max - 1e-12; ++k) v.push_back(k / 10.0);
  v.push_back(beta_max);
  return v;
}

int cmd_lemma64(const Lemma64Args& a, std::ostream& out, std::ostream& err) {
  CertGrid g;
  g.beta_moduli = beta_moduli(a.beta_max);
  g.beta_phases = a.beta_phases;
  g.z_phases = a.z_steps;
  g.d_max = a.d_max;
  g.d_step = a.d_step;
  g.validate();
  const CertReport r = sweep(g);
  emit(a.out, to_json(r), out);
  const bool pass = r.min_margin >= -1e-9 && r.oracle_dev <= 1e-10;
  if (!pass)
    err << "lemma64: certificate failed (min_margin " << r.min_margin << ", oracle_dev " << r.oracle_dev << ")\n";
  return pass ? ok : failure;
}

// solve

struct SolveArgs {
  std::string domain = "torus";
  int n = 64;
  double p1 = 1.0;
  double p2 = 1.0;
  double radius = 0.7;
  bool t_zero = false;
  double t_const = 0.0;
  double t_coef = 0.0;
  int t_power = 1;
  std::string boundary;
  double tol = 1e-10;
  int max_iter = 50;
  std::string out;
  std::string field;
  bool has_t_const = false;
  bool has_t_coef = false;
};

int cmd_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const int data = int(a.t_zero) + int(a.has_t_const) + int(a.has_t_coef);
  if (data != 1) throw UsageError("solve needs exactly one of --t-zero, --t-const, --t-coef");

  DomainSpec dom;
  if (a.domain == "torus") {
    if (a.has_t_coef) throw UsageError("--t-coef applies to the disk");
    if (!a.boundary.empty()) throw UsageError("--boundary applies to the disk");
    dom = DomainSpec::torus(a.p1, a.p2, a.n);
  } else if (a.domain == "disk") {
    const bool nonzero_t = a.has_t_coef || (a.has_t_const && a.t_const != 0.0);
    if (nonzero_t && a.boundary.empty()) throw UsageError("disk with nonzero t needs --boundary fuchsian");
    if (!a.boundary.empty() && a.boundary != "fuchsian") throw UsageError("--boundary must be 'fuchsian'");
    dom = DomainSpec::disk(a.radius, a.n);
  } else {
    throw UsageError("--domain must be torus or disk");
  }
  dom.validate();

  HiggsDatum datum = a.t_zero       ? HiggsDatum::zero(dom)
                     : a.has_t_const ? HiggsDatum::constant(dom, a.t_const)
                                     : HiggsDatum::monomial(dom, a.t_coef, a.t_power);
  const ScalarField u0 = dom.kind == DomainSpec::Kind::disk ? fuchsian_profile(dom) : ScalarField(dom.nx(), dom.ny());

  SolveOptions opt;
  opt.tol = a.tol;
  opt.max_iter = a.max_iter;

  ScalarField u;
  SolveReport rep;
  try {
    std::tie(u, rep) = solve(dom, datum, u0, opt);
  } catch (const SolverError& e) {
    rep.converged = false;
    rep.iterations = e.iterations();
    rep.residual_norm = e.last_residual();
    emit(a.out, to_json(rep), out);
    err << "solve: " << e.what() << '\n';
    return failure;
  }

  ReportExtras extras;
  extras.emplace_back("n", a.n);
  if (dom.kind == DomainSpec::Kind::torus && a.has_t_const && a.t_const > 0.0) {
    const double exact = -2.0 / 3.0 * std::log(a.t_const);
    double e = 0.0;
    for (double v : u.v) e = std::max(e, std::abs(v - exact));
    extras.emplace_back("max_error_vs_constant", e);
  }
  if (dom.kind == DomainSpec::Kind::disk && a.t_zero)
    extras.emplace_back("max_error_vs_profile", max_abs_diff_on_unknowns(u, fuchsian_profile(dom), dom));
  if (!a.t_zero) {
    const MaxPrincipleReport mp = max_principle_check(beta_field(u, datum), dom);
    extras.emplace_back("beta_strict", mp.strict ? 1.0 : 0.0);
  }
  emit(a.out, to_json(rep, extras), out);

  if (!a.field.empty()) {
    std::ostringstream os;
    write_csv(os, u);
    emit(a.field, os.str(), out);
  }
  return ok;
}

// gap-scan

struct GapScanArgs {
  std::string family;
  std::string chi;
  int max_len = 5;
  int exhaustive_len = 5;
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  std::string out;
  std::string csv;
};

int cmd_gap_scan(const GapScanArgs& a, std::ostream& out, std::ostream&) {
  const auto fuchsian = octagon_fuchsian();
  Representation rep;
  if (a.family != "barbot" && !a.chi.empty()) throw UsageError("--chi applies to the barbot family");
  if (a.family == "red") {
    rep = make_reducible(fuchsian);
  } else if (a.family == "irr") {
    rep = make_irreducible(fuchsian);
  } else if (a.family == "barbot") {
    if (a.chi.empty()) throw UsageError("the barbot family needs --chi u1,u2,u3,u4");
    const auto c = parse_list(a.chi, "--chi", 4);
    rep = barbot_twist(fuchsian, {c[0], c[1], c[2], c[3]});
  } else {
    throw UsageError("--family must be red, irr or barbot");
  }
  if (a.max_len < 1) throw UsageError("--max-len must be at least 1");
  if (a.exhaustive_len < 1) throw UsageError("--exhaustive-len must be at least 1");

  ScanOptions opt;
  opt.max_len = a.max_len;
  opt.exhaustive_len = a.exhaustive_len;
  opt.sample_budget = a.samples;
  opt.seed = a.seed;
  const GapScan s = gap_scan(rep, opt);

  emit(a.out, to_json(s), out);
  if (!a.csv.empty()) {
    std::ostringstream os;
    write_csv(os, s);
    emit(a.csv, os.str(), out);
  }
  return ok;
}

// certify-flow

struct FlowArgs {
  std::string betas = "0,0.5,0.9";
  std::string times = "0.1,0.5,1,2";
  double axis = 0.0;
  double t_step = 1e-3;
  int samples = 512;
  std::string out;
};

int cmd_certify_flow(const FlowArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.t_step > 0.0) || !std::isfinite(a.t_step)) throw UsageError("--t-step must be positive");
  if (a.samples < 1) throw UsageError("--samples must be positive");
  const auto betas = parse_list(a.betas, "--betas");
  for (double b : betas)
    if (!(std::abs(b) < 1.0)) throw UsageError("--betas values must satisfy |beta| < 1");
  const auto times = parse_list(a.times, "--times");
  for (double t : times)
    if (!(t > 0.0)) throw UsageError("--times values must be positive");

  const FlowReport flow = flow_nesting_certify(a.axis, times);
  std::vector<PushforwardReport> pf;
  bool pass = flow.all_nested;
  for (double b : betas) {
    pf.push_back(pushforward_check(cplx(b, 0.0), a.t_step, a.samples));
    const auto& p = pf.back();
    if (p.inside != p.samples) {
      pass = false;
      err << "certify-flow: beta " << b << " has " << p.samples - p.inside << " samples not strictly inside (worst theta "
          << p.worst_theta << ", log lambda " << p.worst_log_lam << ")\n";
    }
  }
  for (const auto& s : flow.steps)
    if (!s.nested) err << "certify-flow: translate by " << s.t << " is not nested\n";
  emit(a.out, to_json(flow, pf), out);
  return pass ? ok : failure;
}

// fiber

struct FiberArgs {
  int theta_steps = 256;
  std::string point = "1,1,0";
  bool conic_position = false;
  int samples = 1000;
  std::uint64_t seed = 0;
  std::string out;
  std::string report;
};

int cmd_fiber(const FiberArgs& a, std::ostream& out, std::ostream& err) {
  if (a.theta_steps < 1) throw UsageError("--theta-steps must be positive");
  if (a.samples < 1) throw UsageError("--samples must be positive");
  const auto p = parse_list(a.point, "--point", 3);
  PlanePoint X;
  try {
    X = PlanePoint::make(p[0], p[1], p[2]);
  } catch (const InvalidInput& e) {
    throw UsageError(std::string("--point: ") + e.what());
  }

  // Lines of the fiber over X lie on the conic of X: the image of the model
  // conic under the square root of X.
  const Mat3 to_model = sym_sqrt(X.embed().mat());
  const Mat3 to_model_dual = sym_inv_sqrt(X.embed().mat());
  const double pi = std::acos(-1.0);

  std::ostringstream os;
  os << std::setprecision(17);
  os << "theta,x1,x2,x3,y1,y2,y3,conic_eval,dual_conic_eval,criticality\n";
  double worst = 0.0;
  for (int k = 0; k < a.theta_steps; ++k) {
    const double theta = 2.0 * pi * k / a.theta_steps;
    const Flag f = fiber_over_interior(X, theta);
    const Vec3& x = f.line().coords();
    const Vec3& y = f.plane().coords();
    const double c = conic_eval(ProjectivePoint(to_model * x));
    const double cd = dual_conic_eval(ProjectiveCovector(to_model_dual * y));
    worst = std::max({worst, std::abs(c), std::abs(cd)});
    os << theta << ',' << x[0] << ',' << x[1] << ',' << x[2] << ',' << y[0] << ',' << y[1] << ',' << y[2] << ',' << c
       << ',' << cd << ',' << criticality_residual(f, X) << '\n';
  }
  emit(a.out, os.str(), out);
  bool pass = worst <= 1e-12;
  if (!pass) err << "fiber: conic defect " << worst << " exceeds 1e-12\n";

  if (a.conic_position) {
    const ConicReport r =
        conic_position_check(make_reducible(octagon_fuchsian()), a.samples, a.seed);
    emit(a.report, to_json(r), out);
    if (r.lines_outside != r.samples || r.planes_meeting_interior != r.samples || !(r.min_line_margin > 0.0) ||
        !(r.min_plane_margin > 0.0)) {
      pass = false;
      err << "fiber: conic position holds for " << r.lines_outside << " lines and " << r.planes_meeting_interior
          << " planes of " << r.samples << '\n';
    }
  }
  return pass ? ok : failure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical certificates for cyclic Higgs bundles and Anosov representations in SL(3,R)", "anosov"};
  app.require_subcommand(1, 1);

  Lemma64Args l64;
  auto* sl = app.add_subcommand("lemma64", "Sweep the pointing-vector certificate over a (beta, d, z) grid");
  sl->add_option("--beta-max", l64.beta_max, "Largest |beta|; the grid is 0, 0.1, ... below it plus this value")
      ->capture_default_str();
  sl->add_option("--beta-phases", l64.beta_phases, "Number of beta phases")->capture_default_str();
  sl->add_option("--d-max", l64.d_max, "d ranges over [-d_max, d_max]")->capture_default_str();
  sl->add_option("--d-step", l64.d_step, "Step in d")->capture_default_str();
  sl->add_option("--z-steps", l64.z_steps, "Number of z phases")->capture_default_str();
  sl->add_option("--out", l64.out, "JSON report path (stdout if omitted)");

  SolveArgs sv;
  auto* ss = app.add_subcommand("solve", "Solve the scalar Hitchin equation by damped Newton");
  ss->add_option("--domain", sv.domain, "torus or disk")->capture_default_str();
  ss->add_option("--n", sv.n, "Grid resolution")->capture_default_str();
  ss->add_option("--p1", sv.p1, "Torus period in x")->capture_default_str();
  ss->add_option("--p2", sv.p2, "Torus period in y")->capture_default_str();
  ss->add_option("--radius", sv.radius, "Half-width of the disk grid")->capture_default_str();
  ss->add_flag("--t-zero", sv.t_zero, "Take t = 0");
  auto* o_const = ss->add_option("--t-const", sv.t_const, "Constant |t|^2");
  auto* o_coef = ss->add_option("--t-coef", sv.t_coef, "Disk datum t = c z^k with this c");
  ss->add_option("--t-power", sv.t_power, "Exponent k for --t-coef")->capture_default_str();
  ss->add_option("--boundary", sv.boundary, "Disk Dirichlet data: fuchsian (log(1 - |z|^2))");
  ss->add_option("--tol", sv.tol, "Residual tolerance")->capture_default_str();
  ss->add_option("--max-iter", sv.max_iter, "Newton iteration cap")->capture_default_str();
  ss->add_option("--out", sv.out, "JSON report path (stdout if omitted)");
  ss->add_option("--field", sv.field, "CSV path for the solution field");

  GapScanArgs gs;
  auto* sg = app.add_subcommand("gap-scan", "Singular-value gaps over words of the genus-two surface group");
  sg->add_option("--family", gs.family, "red, irr or barbot")->required();
  sg->add_option("--chi", gs.chi, "Barbot twist u1,u2,u3,u4");
  sg->add_option("--max-len", gs.max_len, "Longest word length")->capture_default_str();
  sg->add_option("--exhaustive-len", gs.exhaustive_len, "Longest exhaustively enumerated length")
      ->capture_default_str();
  sg->add_option("--samples", gs.samples, "Random words per length beyond the exhaustive range")
      ->capture_default_str();
  sg->add_option("--seed", gs.seed, "Random seed")->capture_default_str();
  sg->add_option("--out", gs.out, "JSON summary path (stdout if omitted)");
  sg->add_option("--csv", gs.csv, "CSV path for per-length rows");

  FlowArgs fl;
  auto* sf = app.add_subcommand("certify-flow", "Nesting of flowed multicones and boundary pushforwards");
  sf->add_option("--betas", fl.betas, "Comma-separated real beta values")->capture_default_str();
  sf->add_option("--times", fl.times, "Comma-separated flow times for the nesting check")->capture_default_str();
  sf->add_option("--axis", fl.axis, "Axis angle of the model multicone")->capture_default_str();
  sf->add_option("--t-step", fl.t_step, "Flow time for the pushforward check")->capture_default_str();
  sf->add_option("--samples", fl.samples, "Boundary samples per beta")->capture_default_str();
  sf->add_option("--out", fl.out, "JSON report path (stdout if omitted)");

  FiberArgs fb;
  auto* sx = app.add_subcommand("fiber", "Sample the fiber over a plane point and check the conic position");
  sx->add_option("--theta-steps", fb.theta_steps, "Number of fiber samples")->capture_default_str();
  sx->add_option("--point", fb.point, "Plane point a,b,c with ab - c^2 = 1")->capture_default_str();
  sx->add_flag("--conic-position", fb.conic_position, "Also check limit flags against the conic");
  sx->add_option("--samples", fb.samples, "Limit flags for --conic-position")->capture_default_str();
  sx->add_option("--seed", fb.seed, "Random seed")->capture_default_str();
  sx->add_option("--out", fb.out, "CSV path (stdout if omitted)");
  sx->add_option("--report", fb.report, "JSON path for --conic-position (stdout if omitted)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }
  sv.has_t_const = o_const->count() > 0;
  sv.has_t_coef = o_coef->count() > 0;

  try {
    if (sl->parsed()) return cmd_lemma64(l64, out, err);
    if (ss->parsed()) return cmd_solve(sv, out, err);
    if (sg->parsed()) return cmd_gap_scan(gs, out, err);
    if (sf->parsed()) return cmd_certify_flow(fl, out, err);
    return cmd_fiber(fb, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const InvalidInput& e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const PreconditionError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return failure;
  }
}

}  // namespace anosov::cli
