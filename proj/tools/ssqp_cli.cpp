// Command-line front end: solve, verify, gen, bench.
//
// Exit codes: 0 success / certificate passes, 2 parse or validation error,
// 3 numerical failure (including a QP-solve cap violation), 4 certificate fails.

#include <CLI11.hpp>

#include <chrono>
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ssqp/io.hpp"
#include "ssqp/ssqp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitKkt = 4;

using ssqp::Matrix;
using ssqp::Vector;
using json = nlohmann::json;

/// Maps library exceptions onto the exit-code contract.
template<class F>
int guarded(F && body)
{
  try {
    return body();
  } catch (const ssqp::NumericalFailure & e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ssqp::BoundViolation & e) {
    std::cerr << "bound violation: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ssqp::InfeasibleError & e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ssqp::Error & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const json::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

void emit(const std::string & path, const std::string & text)
{
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    ssqp::io::write_text_file(path, text);
  }
}

struct SolveArgs
{
  std::string problem;
  double epsilon = 0.1;
  double sigma = 0.5;
  double eta = 2.0;
  std::string step = "proj";
  std::string lipschitz = "known";
  double L_min = 1e-3;
  double L_0 = 1.0;
  double L_max = 1e3;
  std::string trace;
  std::string report;
  std::uint64_t seed = 0;
  std::uint64_t max_qp_solves = 0;
};

ssqp::SolverConfig make_config(const SolveArgs & a)
{
  ssqp::SolverConfig cfg;
  cfg.epsilon = a.epsilon;
  cfg.sigma = a.sigma;
  cfg.eta = a.eta;
  cfg.L_min = a.L_min;
  cfg.L_0 = a.L_0;
  cfg.L_max = a.L_max;
  cfg.step_mode = ssqp::parse_step_mode(a.step);
  cfg.lipschitz_mode = ssqp::parse_lipschitz_mode(a.lipschitz);
  cfg.max_qp_solves = a.max_qp_solves;
  ssqp::validate(cfg);
  return cfg;
}

int run_solve(const SolveArgs & a)
{
  const ssqp::SolverConfig cfg = make_config(a);
  const ssqp::ProblemSpec p = ssqp::io::read_problem(a.problem);
  const Vector x0 = p.x0 ? *p.x0 : ssqp::project(Vector::Zero(p.dim()), p.X);
  const ssqp::SolveResult r = ssqp::solve(p, x0, cfg);

  if (!a.trace.empty()) {
    std::ofstream out(a.trace, std::ios::binary);
    if (!out) { throw ssqp::ParseError("cannot write '" + a.trace + "'"); }
    ssqp::io::write_trace_csv(out, r.trace);
  }
  json rep = ssqp::io::report_to_json(r);
  rep["seed"] = a.seed;
  rep["step"] = std::string(ssqp::to_string(cfg.step_mode));
  rep["lipschitz"] = std::string(ssqp::to_string(cfg.lipschitz_mode));
  const std::string text = ssqp::io::dump(rep);
  if (!a.report.empty()) { ssqp::io::write_text_file(a.report, text); }
  std::cout << text;
  return r.kkt.pass ? kExitOk : kExitKkt;
}

struct VerifyArgs
{
  std::string problem;
  std::string point;
  double epsilon = 0.1;
  bool clarke = false;
  double mu = 0.0;
};

/// "-" reads stdin, a string starting with '[' or '{' is inline JSON, anything else is a file path.
Vector load_point(const std::string & spec)
{
  std::string text;
  std::string source = spec;
  if (spec == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    source = "<stdin>";
  } else {
    const auto first = spec.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && (spec[first] == '[' || spec[first] == '{')) {
      text = spec;
      source = "--point";
    } else {
      text = ssqp::io::read_text_file(spec);
    }
  }
  const json j = ssqp::io::parse_json_text(text, source);
  if (j.is_object()) { return ssqp::io::decode_vector(ssqp::io::require_key(j, "x_final", source), "x_final"); }
  return ssqp::io::decode_vector(j, source);
}

int run_verify(const VerifyArgs & a)
{
  const ssqp::ProblemSpec p = ssqp::io::read_problem(a.problem);
  const Vector x = load_point(a.point);
  ssqp::detail::require_same(x.size(), p.dim(), "--point");
  if (!(a.epsilon > 0.0 && a.epsilon <= 1.0)) { throw ssqp::PreconditionError("--epsilon must lie in (0, 1]"); }
  if (a.clarke) {
    const double mu = a.mu > 0.0 ? a.mu : a.epsilon;
    const ssqp::ClarkeReport c = ssqp::clarke_kkt_check(p, x, mu, a.epsilon);
    std::cout << ssqp::io::dump(ssqp::io::clarke_to_json(c));
    return c.pass ? kExitOk : kExitKkt;
  }
  const ssqp::KktReport r = ssqp::eps_kkt_check(p, x, a.epsilon);
  std::cout << ssqp::io::dump(ssqp::io::kkt_to_json(r));
  return r.pass ? kExitOk : kExitKkt;
}

std::vector<long> parse_long_list(const std::string & s)
{
  std::vector<long> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) { continue; }
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception &) {
      throw ssqp::ParseError("not an integer: '" + tok + "'");
    }
    if (used != tok.size()) { throw ssqp::ParseError("not an integer: '" + tok + "'"); }
    out.push_back(v);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string & s)
{
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) { continue; }
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception &) {
      throw ssqp::ParseError("not a number: '" + tok + "'");
    }
    if (used != tok.size()) { throw ssqp::ParseError("not a number: '" + tok + "'"); }
    out.push_back(v);
  }
  return out;
}

struct GenArgs
{
  std::string out;
  std::uint64_t seed = 0;
  double q = 0.5;
  double rho = 1.0;
  // svm
  long points = 8;
  long dim = 2;
  // power
  long links = 3;
  // decoding
  long k1 = 6;
  long k2 = 2;
  long corruptions = 1;
  // 3partition
  std::string a;
  long B = 0;
  // random
  long n = 5;
  long m = 8;
  std::string hkind = "quadratic";
  std::string xkind = "box";
};

ssqp::ProblemSpec gen_svm(const GenArgs & g)
{
  if (g.points < 2 || g.dim < 1) { throw ssqp::PreconditionError("svm: need --points >= 2 and --dim >= 1"); }
  std::mt19937_64 rng(g.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> pts;
  std::vector<double> labels;
  for (long i = 0; i < g.points; ++i) {
    const double y = i % 2 == 0 ? 1.0 : -1.0;
    Vector s(g.dim);
    for (long d = 0; d < g.dim; ++d) { s(d) = 1.5 * y + normal(rng); }
    pts.push_back(s);
    labels.push_back(y);
  }
  return ssqp::make_svm(pts, labels, g.rho, g.q);
}

ssqp::ProblemSpec gen_power(const GenArgs & g)
{
  if (g.links < 1) { throw ssqp::PreconditionError("power: --k must be >= 1"); }
  std::mt19937_64 rng(g.seed);
  std::uniform_real_distribution<double> gain(0.0, 0.6);
  std::uniform_real_distribution<double> noise(0.05, 0.5);
  Matrix G(g.links, g.links);
  for (long i = 0; i < g.links; ++i) {
    for (long j = 0; j < g.links; ++j) { G(i, j) = i == j ? 1.0 : gain(rng); }
  }
  Vector nz(g.links);
  for (long i = 0; i < g.links; ++i) { nz(i) = noise(rng); }
  return ssqp::make_power_control(G, nz, g.rho, g.q);
}

ssqp::ProblemSpec gen_decoding(const GenArgs & g)
{
  if (g.k1 < 1 || g.k2 < 1) { throw ssqp::PreconditionError("decoding: --k1 and --k2 must be >= 1"); }
  if (g.corruptions < 0 || g.corruptions > g.k1) { throw ssqp::PreconditionError("decoding: bad --corruptions"); }
  std::mt19937_64 rng(g.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix C(g.k1, g.k2);
  for (long i = 0; i < g.k1; ++i) {
    for (long j = 0; j < g.k2; ++j) { C(i, j) = normal(rng); }
  }
  Vector xt(g.k2);
  for (long j = 0; j < g.k2; ++j) { xt(j) = normal(rng); }
  Vector c = C * xt;
  for (long i = 0; i < g.corruptions; ++i) { c(i) += 3.0 + normal(rng); }
  return ssqp::make_decoding(C, c, g.q);
}

ssqp::ProblemSpec gen_three_partition(const GenArgs & g)
{
  const std::vector<long> a = parse_long_list(g.a);
  return ssqp::make_three_partition(a, g.B, g.q);
}

ssqp::ProblemSpec gen_random(const GenArgs & g)
{
  return ssqp::make_random(g.seed, g.n, g.m, g.q, ssqp::parse_h_kind(g.hkind), ssqp::parse_x_kind(g.xkind));
}

struct BenchArgs
{
  std::string suite;
  std::string epsilons = "0.1,0.05,0.01";
  std::string qs;
  std::string step = "proj";
  std::string lipschitz = "known";
  std::string out;
};

// A suite is either a directory of *.json problems or a text file with one path per line.
std::vector<std::string> read_suite(const std::string & path)
{
  if (std::filesystem::is_directory(path)) {
    std::vector<std::string> found;
    for (const auto & e : std::filesystem::directory_iterator(path)) {
      if (e.is_regular_file() && e.path().extension() == ".json") { found.push_back(e.path().string()); }
    }
    std::sort(found.begin(), found.end());
    return found;
  }
  std::ifstream in(path);
  if (!in) { throw ssqp::ParseError("cannot open suite '" + path + "'"); }
  std::vector<std::string> files;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') { continue; }
    const auto e = line.find_last_not_of(" \t\r");
    files.push_back(line.substr(b, e - b + 1));
  }
  return files;
}

int run_bench(const BenchArgs & a)
{
  const std::vector<std::string> files = read_suite(a.suite);
  if (files.empty()) { throw ssqp::PreconditionError("bench: suite is empty"); }
  const std::vector<double> eps = parse_double_list(a.epsilons);
  if (eps.empty()) { throw ssqp::PreconditionError("bench: --epsilons is empty"); }
  const std::vector<double> qs = parse_double_list(a.qs);
  SolveArgs base;
  base.step = a.step;
  base.lipschitz = a.lipschitz;

  std::vector<ssqp::ProblemSpec> problems;
  for (const auto & f : files) { problems.push_back(ssqp::io::read_problem(f)); }
  for (const double e : eps) {
    base.epsilon = e;
    (void)make_config(base);
  }

  std::ostringstream csv;
  csv << "problem,epsilon,q,qp_solves,bound,final_residual,kkt_pass,status,wall_ms\n";
  csv << std::setprecision(10);
  bool bound_violated = false;
  bool failed = false;
  for (std::size_t f = 0; f < files.size(); ++f) {
    const std::vector<double> qlist = qs.empty() ? std::vector<double>{problems[f].q} : qs;
    for (const double q : qlist) {
      ssqp::ProblemSpec p = problems[f];
      p.q = q;
      p.validate();
      const Vector x0 = p.x0 ? *p.x0 : ssqp::project(Vector::Zero(p.dim()), p.X);
      for (const double e : eps) {
        base.epsilon = e;
        const ssqp::SolverConfig cfg = make_config(base);
        const auto t0 = std::chrono::steady_clock::now();
        std::string status = "ok";
        std::uint64_t solves = 0;
        std::uint64_t bound = 0;
        double resid = 0.0;
        bool pass = false;
        try {
          const ssqp::SolveResult r = ssqp::solve(p, x0, cfg);
          solves = r.qp_solves;
          bound = r.bound;
          resid = r.final_residual;
          pass = r.kkt.pass;
          if (cfg.lipschitz_mode == ssqp::LipschitzMode::known && r.qp_solves > r.bound) {
            status = "bound_violated";
            bound_violated = true;
          } else if (!pass) {
            status = "kkt_fail";
            failed = true;
          }
        } catch (const ssqp::BoundViolation &) {
          status = "bound_violated";
          bound_violated = true;
        } catch (const ssqp::Error & ex) {
          status = "error";
          failed = true;
          std::cerr << files[f] << " eps=" << e << " q=" << q << ": " << ex.what() << '\n';
        }
        const double ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        csv << files[f] << ',' << e << ',' << q << ',' << solves << ',' << bound << ',' << resid << ','
            << (pass ? "true" : "false") << ',' << status << ',' << ms << '\n';
      }
    }
  }
  emit(a.out, csv.str());
  if (bound_violated) { return kExitNumerical; }
  return failed ? kExitKkt : kExitOk;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Smoothing SQP solver for ||max{b - A x, 0}||_q^q + h(x) over a polyhedron"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto * solve = app.add_subcommand("solve", "Run the solver and certify the output");
  solve->add_option("--problem", sa.problem, "Problem JSON file")->required();
  solve->add_option("--epsilon", sa.epsilon, "Target accuracy in (0, 1]");
  solve->add_option("--sigma", sa.sigma, "Smoothing shrink factor in (0, 1)");
  solve->add_option("--eta", sa.eta, "Lipschitz inflation factor > 1");
  solve->add_option("--step", sa.step, "proj | snorm | exact");
  solve->add_option("--lipschitz", sa.lipschitz, "known | adaptive");
  solve->add_option("--L-min", sa.L_min, "Adaptive mode: smallest Lipschitz estimate");
  solve->add_option("--L0", sa.L_0, "Adaptive mode: initial Lipschitz estimate");
  solve->add_option("--L-max", sa.L_max, "Adaptive mode: largest Lipschitz estimate");
  solve->add_option("--max-qp-solves", sa.max_qp_solves, "QP-solve cap (0 selects the default)");
  solve->add_option("--trace", sa.trace, "Trace CSV output path");
  solve->add_option("--report", sa.report, "Report JSON output path (also printed to stdout)");
  solve->add_option("--seed", sa.seed, "Recorded in the report; the solver itself is deterministic");

  VerifyArgs va;
  auto * verify = app.add_subcommand("verify", "Check the epsilon-KKT (or q = 1 Clarke) certificate at a point");
  verify->add_option("--problem", va.problem, "Problem JSON file")->required();
  verify->add_option("--point", va.point, "JSON array, solve report, file path, or - for stdin")->required();
  verify->add_option("--epsilon", va.epsilon, "Accuracy in (0, 1]");
  verify->add_flag("--clarke", va.clarke, "Use the smoothed Clarke check (q = 1 only)");
  verify->add_option("--mu", va.mu, "Smoothing parameter for --clarke (defaults to epsilon)");

  GenArgs ga;
  auto * gen = app.add_subcommand("gen", "Generate a problem file");
  gen->require_subcommand(1);
  auto common = [&](CLI::App * c) {
    c->add_option("--out", ga.out, "Output path (stdout when omitted)");
    c->add_option("--seed", ga.seed, "Random seed");
    c->add_option("--q", ga.q, "Exponent in (0, 1]");
  };
  auto * g_svm = gen->add_subcommand("svm", "Soft-margin SVM on two Gaussian clouds");
  common(g_svm);
  g_svm->add_option("--points", ga.points);
  g_svm->add_option("--dim", ga.dim);
  g_svm->add_option("--rho", ga.rho);
  auto * g_power = gen->add_subcommand("power", "Power and admission control");
  common(g_power);
  g_power->add_option("--k", ga.links, "Number of links");
  g_power->add_option("--rho", ga.rho);
  auto * g_dec = gen->add_subcommand("decoding", "Linear decoding with sparse corruptions");
  common(g_dec);
  g_dec->add_option("--k1", ga.k1);
  g_dec->add_option("--k2", ga.k2);
  g_dec->add_option("--corruptions", ga.corruptions);
  auto * g_3p = gen->add_subcommand("3partition", "Instance built from a 3-partition problem");
  common(g_3p);
  g_3p->add_option("--a", ga.a, "Comma-separated integers a_1..a_3m")->required();
  g_3p->add_option("--B", ga.B, "Bin size")->required();
  auto * g_rand = gen->add_subcommand("random", "Seeded random instance");
  common(g_rand);
  g_rand->add_option("--n", ga.n, "Variables");
  g_rand->add_option("--m", ga.m, "Rows");
  g_rand->add_option("--h-kind", ga.hkind, "zero | linear | quadratic");
  g_rand->add_option("--x-kind", ga.xkind, "box | simplex");

  BenchArgs ba;
  auto * bench = app.add_subcommand("bench", "Sweep a suite over epsilon and q");
  bench->add_option("--suite", ba.suite, "Directory of problem files, or a file listing problem paths one per line")->required();
  bench->add_option("--epsilons", ba.epsilons, "Comma-separated epsilons");
  bench->add_option("--qs", ba.qs, "Comma-separated exponents (default: each problem's own q)");
  bench->add_option("--step", ba.step, "proj | snorm | exact");
  bench->add_option("--lipschitz", ba.lipschitz, "known | adaptive");
  bench->add_option("--out", ba.out, "Summary CSV path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kExitInput;
  }

  if (solve->parsed()) { return guarded([&] { return run_solve(sa); }); }
  if (verify->parsed()) { return guarded([&] { return run_verify(va); }); }
  if (bench->parsed()) { return guarded([&] { return run_bench(ba); }); }
  return guarded([&] {
    ssqp::ProblemSpec p;
    if (g_svm->parsed()) {
      p = gen_svm(ga);
    } else if (g_power->parsed()) {
      p = gen_power(ga);
    } else if (g_dec->parsed()) {
      p = gen_decoding(ga);
    } else if (g_3p->parsed()) {
      p = gen_three_partition(ga);
    } else {
      p = gen_random(ga);
    }
    emit(ga.out, ssqp::io::dump(ssqp::io::problem_to_json(p)));
    return kExitOk;
  });
}
