#include "mixnorm/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fileio.hpp"
#include "mixnorm/constructions.hpp"
#include "mixnorm/errors.hpp"
#include "mixnorm/experiments.hpp"
#include "mixnorm/exponents.hpp"
#include "mixnorm/opnorm.hpp"
#include "mixnorm/parse.hpp"
#include "mixnorm/tensor.hpp"

namespace mixnorm {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct SpecFlags {
  std::size_t m = 0;
  std::string s = "1";
  std::string qcod = "2";
  std::string p;
  std::string field = "real";

  void add(CLI::App* cmd, bool require_m) {
    auto* opt = cmd->add_option("--m", m, "arity");
    if (require_m) opt->required();
    cmd->add_option("--s", s, "codomain source exponent s")->capture_default_str();
    cmd->add_option("--qcod", qcod, "codomain target exponent")->capture_default_str();
    cmd->add_option("--p", p, "domain exponents (default inf in every slot)");
    cmd->add_option("--field", field, "real or complex")->capture_default_str();
  }

  ProblemSpec spec() const {
    ProblemSpec out;
    out.m = m;
    out.p = p.empty() ? ExponentVector::uniform(m, kInf) : parse_exponent_list(p);
    out.s = parse_exponent(s);
    out.q_cod = parse_exponent(qcod);
    out.field = field_from_string(field);
    out.validate();
    return out;
  }
};

CoefficientTensor load_tensor(const std::string& path, TensorFileHeader& header) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open tensor file " + path);
  return read_tensor(is, header);
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_number(z.real());
  std::string out = format_number(z.real());
  if (!std::signbit(z.imag())) out += '+';
  return out + format_number(z.imag()) + "i";
}

std::string join(const std::vector<double>& v, const std::string& sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + format_number(v[i]);
  return out;
}

int cmd_feasible(const SpecFlags& flags, const std::string& q_text, std::ostream& out) {
  const ProblemSpec spec = flags.spec();
  const ExponentVector q = parse_exponent_list(q_text);
  const double lambda = lambda_base(spec);
  double slack = 0.0;
  std::string note;
  try {
    slack = feasibility(q, spec).slack;
  } catch (const RangeViolationError& e) {
    // the sum condition still decides feasibility; the range note is informational
    slack = 0.5 * static_cast<double>(spec.m) + spec.budget_excess() - q.reciprocal_sum();
    note = " below_lambda=q_" + std::to_string(e.index() + 1);
  }
  const bool ok = slack >= -kExponentTol;
  if (std::abs(slack) < kExponentTol) slack = 0.0;
  out << (ok ? "feasible" : "infeasible") << " slack=" << format_number(slack)
      << " lambda=" << format_number(lambda) << " rho=" << format_number(rho_exponent(spec))
      << note << '\n';
  return ok ? kExitOk : kExitFail;
}

int cmd_exponents(const SpecFlags& flags, const std::string& q_text, const std::string& target,
                  double theta, std::ostream& out) {
  const ProblemSpec spec = flags.spec();
  const double lambda = lambda_base(spec);
  const ConstantBounds bounds =
      constant_bounds(spec.m, spec.field, ConstantSpec::defaults(spec.field));
  out << "lambda=" << format_number(lambda) << '\n'
      << "rho=" << format_number(rho_exponent(spec)) << '\n'
      << "bennett_carl_r=" << format_number(bennett_carl_r(spec.s, spec.q_cod)) << '\n'
      << "bh_upper=" << format_number(bounds.bh_upper) << '\n'
      << "mixed_upper=" << format_number(bounds.mixed_upper) << '\n';
  std::vector<double> conj, alpha;
  for (double p : spec.p.values()) {
    conj.push_back(conjugate_exponent(p));
    alpha.push_back(ksz_alpha(p));
  }
  out << "p_conjugate=" << join(conj) << '\n'
      << "ksz_alpha=" << join(alpha) << '\n';
  if (q_text.empty()) return kExitOk;

  const ExponentVector q = parse_exponent_list(q_text);
  if (q.size() != spec.m) throw DomainError("q must have length m");
  try {
    out << "hull_weights=" << join(hull_decompose(q, lambda)) << '\n';
  } catch (const NotOnFaceError& e) {
    out << "hull_weights=none residual=" << format_number(e.residual()) << '\n';
  } catch (const RangeViolationError&) {
    out << "hull_weights=none\n";
  }
  if (!target.empty()) {
    const ExponentVector r = interpolate_exponents(parse_exponent_list(target), q, theta);
    out << "interpolated=" << join({r.values().begin(), r.values().end()}) << '\n';
  }
  return kExitOk;
}

int cmd_mixed_norm(const std::string& path, const std::string& q_text, const std::string& sigma,
                   const std::string& qcod, std::ostream& out) {
  TensorFileHeader header;
  const CoefficientTensor t = load_tensor(path, header);
  MixedNormSpec spec;
  spec.q = parse_exponent_list(q_text);
  if (sigma.empty()) {
    for (std::size_t k = 0; k < t.arity(); ++k) spec.sigma.push_back(k);
  } else {
    for (std::size_t k : parse_size_list(sigma)) spec.sigma.push_back(k - 1);
  }
  if (!qcod.empty()) {
    spec.codomain_q = parse_exponent(qcod);
  } else if (t.has_codomain()) {
    spec.codomain_q = 2.0;
  }
  out << format_number(mixed_norm(t, spec)) << '\n';
  return kExitOk;
}

struct OpnormFlags {
  std::string tensor;
  std::string p;
  std::string s;
  std::string method = "auto";
  std::uint64_t seed = 0;
  std::size_t restarts = 32;
  std::size_t max_iters = 200;
  double budget = kDefaultEnumerationBudget;
};

int cmd_opnorm(const OpnormFlags& f, std::ostream& out) {
  std::ifstream is(f.tensor);
  if (!is) throw ConfigError("cannot open tensor file " + f.tensor);
  MultilinearForm form = read_form(is);
  if (!f.p.empty()) form.p = parse_exponent_list(f.p);
  if (!f.s.empty()) form.codomain_s = parse_exponent(f.s);
  if (form.tensor.is_complex()) form.field = Field::complex;
  form.validate();

  AscentOptions opts;
  opts.seed = f.seed;
  opts.restarts = f.restarts;
  opts.max_iters = f.max_iters;
  NormEstimate est;
  if (form.tensor.is_zero()) {
    est.value = 0.0;
    est.kind = NormKind::exact;
  } else {
    est = estimate_norm(form, norm_method_from_string(f.method), opts, f.budget);
  }
  out << format_number(est.value) << ' ' << to_string(est.kind) << ' ' << est.iterations;
  for (const auto& w : est.witness) {
    out << ' ';
    for (std::size_t i = 0; i < w.size(); ++i) out << (i ? "," : "") << format_complex(w[i]);
  }
  out << '\n';
  return kExitOk;
}

struct GenerateFlags {
  std::string kind = "ksz";
  std::size_t m = 2;
  std::size_t n = 4;
  std::string p;
  std::string s = "1";
  std::uint64_t seed = 0;
  std::size_t trials = 16;
  std::size_t restarts = 32;
  std::string field = "real";
  std::string out;
};

int cmd_generate(const GenerateFlags& g, std::ostream& out) {
  const ExponentVector p = g.p.empty() ? ExponentVector::uniform(g.m, kInf) : parse_exponent_list(g.p);
  if (p.size() != g.m) throw DomainError("p must have length m");
  KszOptions opts;
  opts.trials = g.trials;
  opts.field = field_from_string(g.field);
  opts.ascent.restarts = g.restarts;

  MultilinearForm form;
  if (g.kind == "ksz") {
    form = ksz_random(g.m, g.n, p, g.seed, opts).form;
  } else if (g.kind == "ksz-vector") {
    form = ksz_vector(g.m, g.n, p, parse_exponent(g.s), g.seed, opts).form;
  } else if (g.kind == "sign") {
    form.tensor = random_sign_tensor(Shape(g.m, g.n), g.seed, 0, opts.field);
    form.p = p;
    form.field = opts.field;
  } else if (g.kind == "extremizer") {
    form = littlewood_extremizer();
  } else if (g.kind == "degenerate") {
    form = degenerate_counterexample(g.m, g.n, p, g.seed, opts);
  } else {
    throw ConfigError("unknown generator '" + g.kind + "'");
  }

  std::ostringstream text;
  write_form(text, form, g.kind == "extremizer" ? std::nullopt : std::optional(g.seed));
  if (g.out.empty()) {
    out << text.str();
  } else {
    detail::write_atomically(g.out, text.str());
  }
  return kExitOk;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir, std::ostream& out) {
  const ExperimentConfig config = load_config(config_path);
  const ExperimentReport report = run_experiment(config);
  const OutputPaths paths = write_outputs(report, out_dir);
  out << (report.verdict ? "PASS" : "FAIL") << ' ' << to_string(config.kind);
  if (report.mode != "check") out << " mode=" << report.mode;
  out << ' ' << report.headline << '\n'
      << "csv=" << paths.csv.string() << '\n'
      << "json=" << paths.json.string() << '\n';
  return report.verdict ? kExitOk : kExitFail;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed-norm inequality laboratory", "mixnorm"};
  app.require_subcommand(1);

  SpecFlags feas_flags;
  std::string feas_q;
  auto* feasible = app.add_subcommand("feasible", "feasibility of q with slack, lambda and rho");
  feas_flags.add(feasible, true);
  feasible->add_option("--q", feas_q, "summability exponents")->required();

  SpecFlags exp_flags;
  std::string exp_q, exp_target;
  double theta = 0.5;
  auto* exponents = app.add_subcommand("exponents", "exponent calculus for a problem spec");
  exp_flags.add(exponents, true);
  exponents->add_option("--q", exp_q, "exponents to decompose on the hull face");
  exponents->add_option("--interpolate", exp_target, "second endpoint for interpolation with --q");
  exponents->add_option("--theta", theta, "interpolation parameter in [0,1]")->capture_default_str();

  std::string mn_tensor, mn_q, mn_sigma, mn_qcod;
  auto* mixed = app.add_subcommand("mixed-norm", "nested mixed norm of a tensor file");
  mixed->add_option("--tensor", mn_tensor, "tensor file")->required();
  mixed->add_option("--q", mn_q, "exponents, outermost first")->required();
  mixed->add_option("--sigma", mn_sigma, "axis order, 1-based (default identity)");
  mixed->add_option("--qcod", mn_qcod, "codomain exponent (default 2 when present)");

  OpnormFlags on;
  auto* opnorm = app.add_subcommand("opnorm", "operator norm of a form file");
  opnorm->add_option("--tensor", on.tensor, "form or tensor file")->required();
  opnorm->add_option("--p", on.p, "domain exponents (default from file, else inf)");
  opnorm->add_option("--s", on.s, "codomain exponent for vector-valued forms");
  opnorm->add_option("--method", on.method, "auto, oracle or ascent")->capture_default_str();
  opnorm->add_option("--seed", on.seed, "ascent seed")->capture_default_str();
  opnorm->add_option("--restarts", on.restarts, "ascent restarts")->capture_default_str();
  opnorm->add_option("--max-iters", on.max_iters, "ascent iterations per restart")
      ->capture_default_str();
  opnorm->add_option("--budget", on.budget, "enumeration budget")->capture_default_str();

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "write a constructed form to a file");
  generate->add_option("--kind", gen.kind, "ksz, ksz-vector, sign, extremizer or degenerate")
      ->capture_default_str();
  generate->add_option("--m", gen.m, "arity")->capture_default_str();
  generate->add_option("--n", gen.n, "dimension")->capture_default_str();
  generate->add_option("--p", gen.p, "domain exponents (default inf)");
  generate->add_option("--s", gen.s, "codomain exponent for ksz-vector")->capture_default_str();
  generate->add_option("--seed", gen.seed, "seed")->capture_default_str();
  generate->add_option("--trials", gen.trials, "sign draws to select from")->capture_default_str();
  generate->add_option("--restarts", gen.restarts, "ascent restarts")->capture_default_str();
  generate->add_option("--field", gen.field, "real or complex")->capture_default_str();
  generate->add_option("--out", gen.out, "output file (default stdout)");

  std::string config_path, out_dir = ".";
  auto* experiment = app.add_subcommand("experiment", "run an experiment config");
  experiment->add_option("--config", config_path, "config file")->required();
  experiment->add_option("--out-dir", out_dir, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (feasible->parsed()) return cmd_feasible(feas_flags, feas_q, out);
    if (exponents->parsed()) return cmd_exponents(exp_flags, exp_q, exp_target, theta, out);
    if (mixed->parsed()) return cmd_mixed_norm(mn_tensor, mn_q, mn_sigma, mn_qcod, out);
    if (opnorm->parsed()) return cmd_opnorm(on, out);
    if (generate->parsed()) return cmd_generate(gen, out);
    if (experiment->parsed()) return cmd_experiment(config_path, out_dir, out);
  } catch (const RefusedError& e) {
    err << "refused: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mixnorm
