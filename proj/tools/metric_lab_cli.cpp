// metric_lab: evaluate mixers and co-mixers, estimate Lipschitz constants and
// run certification sweeps.
//
// Exit codes: 0 all checks pass, 1 a bound violation was found, 2 input
// error, 3 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "metric_lab/metric_lab.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;
constexpr int kExitIo = 3;

struct io_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NormOptions {
  std::string p = "2";
  std::string weights;

  mlab::NormSpec spec() const {
    std::string text = p;
    if (!weights.empty()) text += ":weights=" + weights;
    return mlab::parse_norm_spec(text);
  }
};

void add_norm_options(CLI::App* cmd, NormOptions& norm) {
  cmd->add_option("--p", norm.p, "Norm exponent: 1, 1.5, 2, inf (or p1, pinf, p2:weights=...)")
      ->capture_default_str();
  cmd->add_option("--weights", norm.weights, "Positive weights w1,w2,... (one per coordinate)");
}

// Positional arguments, or the lines of --input ("-" for stdin).
std::vector<std::string> gather_lines(const std::vector<std::string>& positional, const std::string& input) {
  std::vector<std::string> lines = positional;
  if (input.empty()) return lines;
  std::ifstream file;
  std::istream* in = &std::cin;
  if (input != "-") {
    file.open(input);
    if (!file) throw io_failure("cannot read " + input);
    in = &file;
  }
  for (std::string line; std::getline(*in, line);) {
    const auto trimmed = mlab::detail::trim(line);
    if (!trimmed.empty() && trimmed.front() != '#') lines.emplace_back(trimmed);
  }
  return lines;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_failure("cannot write " + path);
  out << content;
  out.flush();
  if (!out) throw io_failure("write failed for " + path);
}

std::vector<mlab::IntervalSet> parse_set_list(const std::string& text) {
  std::vector<mlab::IntervalSet> sets;
  for (auto part : mlab::detail::split(text, ";")) sets.push_back(mlab::parse_interval_set(part));
  return sets;
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string op;
  NormOptions norm;
  std::vector<std::string> inputs;
  std::string input_file;
};

int cmd_eval(const EvalArgs& args) {
  const auto lines = gather_lines(args.inputs, args.input_file);
  if (lines.empty()) throw mlab::parse_error("eval: no input triple given");
  for (const auto& line : lines) {
    if (args.op == "setmix" || args.op == "setcomix") {
      const auto sets = parse_set_list(line);
      if (sets.size() != 3) throw mlab::parse_error("eval: expected three ';'-separated interval sets");
      const auto out = args.op == "setmix" ? mlab::set_mixer(sets[0], sets[1], sets[2])
                                           : mlab::set_comixer(sets[0], sets[1], sets[2]);
      std::cout << mlab::format_interval_set(out) << '\n';
    } else if (args.op == "retract") {
      std::cout << mlab::format_subset(mlab::retraction_3_to_2(mlab::parse_subset(line), args.norm.spec()))
                << '\n';
    } else {
      const auto kind = mlab::parse_kind(args.op);
      if (!kind) throw mlab::parse_error("eval: unknown op '" + args.op + "'");
      const auto t = mlab::parse_triple(line);
      const mlab::TernaryOp op(*kind, args.norm.spec());
      std::cout << mlab::format_vector(op(t[0], t[1], t[2])) << '\n';
    }
  }
  return kExitOk;
}

// ---- lipschitz -------------------------------------------------------------

struct LipschitzArgs {
  std::string op = "incenter";
  int arg = 1;
  bool joint = false;
  NormOptions norm;
  std::size_t dim = 2;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 42;
  double radius = 1.0;
  std::optional<double> bound;
};

template <class Point, class Format>
nlohmann::ordered_json report_json(const std::string& op, int arg, const std::string& norm, std::size_t dim,
                                   std::uint64_t seed, const mlab::LipschitzReport<Point>& r, Format fmt) {
  nlohmann::ordered_json j;
  j["op"] = op;
  j["arg_index"] = arg;
  j["norm"] = norm;
  j["dim"] = dim;
  j["seed"] = seed;
  j["samples"] = r.samples_used;
  j["estimate"] = r.estimate;
  j["claimed_bound"] = r.claimed_bound;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  auto& w = j["witness"] = nlohmann::ordered_json::array();
  for (const auto& p : r.witness) w.push_back(fmt(p));
  return j;
}

int cmd_lipschitz(LipschitzArgs args) {
  if (const char* s = std::getenv("METRIC_LAB_SEED")) args.seed = std::stoull(s);
  const mlab::SamplerConfig cfg = mlab::SamplerConfig::make(args.seed, args.samples, args.dim, args.radius);
  cfg.validate();
  nlohmann::ordered_json j;
  bool pass = false;
  const int arg = args.joint ? 0 : args.arg;

  if (args.op == "retraction") {
    const auto spec = args.norm.spec();
    const auto r = mlab::estimate_retraction_lipschitz(cfg, spec, args.bound.value_or(9.0));
    j = report_json("retraction", 0, mlab::format_norm_spec(spec), args.dim, args.seed, r.lipschitz,
                    [](const mlab::FiniteSubset& s) { return mlab::format_subset(s); });
    j["max_forward_ratio"] = r.max_forward_ratio;
    j["max_backward_ratio"] = r.max_backward_ratio;
    j["hull_failures"] = r.hull_failures;
    pass = r.pass(mlab::kRatioTolerance);
  } else if (args.op == "setmix" || args.op == "setcomix" || args.op == "quotient") {
    if (args.joint) throw mlab::parse_error("lipschitz: --joint applies to vector ops only");
    const mlab::SamplerConfig scfg{args.seed, args.samples, 1, 1.0, 1e-9};
    const mlab::IntervalSetSpace sets{6, scfg.min_separation};
    auto fmt = [](const mlab::IntervalSet& s) { return mlab::format_interval_set(s); };
    if (args.op == "quotient") {
      auto op = [](const auto& x, const auto& y, const auto& z) { return mlab::quotient_comixer(x, y, z); };
      const auto r = mlab::estimate_per_arg_lipschitz(mlab::QuotientSpace{sets}, op, arg, scfg,
                                                      args.bound.value_or(1.0), 0.0);
      j = report_json(args.op, arg, "quotient_rho", 0, args.seed, r,
                      [&](const mlab::QuotientClass& x) { return fmt(x.rep()); });
      pass = r.pass;
    } else {
      const bool mixer = args.op == "setmix";
      auto op = [mixer](const auto& a, const auto& b, const auto& c) {
        return mixer ? mlab::set_mixer(a, b, c) : mlab::set_comixer(a, b, c);
      };
      const auto r = mlab::estimate_per_arg_lipschitz(sets, op, arg, scfg, args.bound.value_or(1.0), 0.0);
      j = report_json(args.op, arg, "rho", 0, args.seed, r, fmt);
      pass = r.pass;
    }
  } else {
    const auto kind = mlab::parse_kind(args.op);
    if (!kind) throw mlab::parse_error("lipschitz: unknown op '" + args.op + "'");
    const mlab::TernaryOp op(*kind, args.norm.spec());
    const auto r = args.joint ? mlab::estimate_joint_lipschitz(op, cfg, args.bound)
                              : mlab::estimate_per_arg_lipschitz(op, arg, cfg, args.bound.value_or(1.0));
    j = report_json(args.op, arg, mlab::format_norm_spec(op.spec()), args.dim, args.seed, r,
                    [](const mlab::Vector& v) { return mlab::format_vector(v); });
    pass = r.pass;
  }
  std::cout << j.dump(2) << '\n';
  return pass ? kExitOk : kExitViolation;
}

// ---- certify ---------------------------------------------------------------

struct CertifyArgs {
  std::string config_path;
  std::string output;
  std::string format;
  std::optional<std::uint64_t> samples;
  std::optional<std::uint64_t> seed;
};

int cmd_certify(const CertifyArgs& args) {
  mlab::SweepConfig cfg;
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw io_failure("cannot read " + args.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw mlab::config_error(std::string("config: ") + e.what());
    }
    cfg = mlab::sweep_config_from_json(j);
  }
  if (args.samples) cfg.samples = *args.samples;
  if (args.seed) cfg.seed = *args.seed;
  if (!args.output.empty()) cfg.output_path = args.output;
  if (!args.format.empty()) cfg.format = args.format;
  mlab::apply_env_overrides(cfg);
  cfg.validate();

  const mlab::CertifyOutcome out = mlab::run_certify(cfg);
  const std::string body = cfg.format == "csv" ? mlab::certify_report_csv(out)
                                               : mlab::certify_report_json(cfg, out).dump(2) + "\n";
  write_file(cfg.output_path, body);

  std::size_t failed = 0;
  for (const auto& c : out.checks) {
    if (!c.pass) {
      ++failed;
      std::cerr << "FAIL " << c.check << " op=" << c.op << " arg=" << c.arg_index << " norm=" << c.norm
                << " dim=" << c.dim << " estimate=" << mlab::format_double(c.estimate)
                << " bound=" << mlab::format_double(c.claimed_bound) << '\n';
    }
  }
  std::cout << out.checks.size() - failed << "/" << out.checks.size() << " checks passed; report: "
            << cfg.output_path << '\n';
  return out.all_pass ? kExitOk : kExitViolation;
}

// ---- retract ---------------------------------------------------------------

struct RetractArgs {
  NormOptions norm;
  std::vector<std::string> inputs;
  std::string input_file;
};

int cmd_retract(const RetractArgs& args) {
  const auto spec = args.norm.spec();
  const auto lines = gather_lines(args.inputs, args.input_file);
  std::cout << "pair,hausdorff_in,hausdorff_out,ratio,within_bound\n";
  bool all_ok = true;
  std::size_t index = 0;
  for (const auto& line : lines) {
    const auto parts = mlab::detail::split(line, "||");
    if (parts.size() != 2) throw mlab::parse_error("retract: expected 'E || E2' on each line");
    const auto e = mlab::parse_subset(parts[0]);
    const auto e2 = mlab::parse_subset(parts[1]);
    const double in = mlab::hausdorff_dist(e, e2, spec);
    const double out = mlab::hausdorff_dist(mlab::retraction_3_to_2(e, spec), mlab::retraction_3_to_2(e2, spec), spec);
    std::string ratio;
    bool ok = out <= 9.0 * in + mlab::kRatioTolerance * in;
    if (in > 0.0) ratio = mlab::format_double(out / in);
    all_ok = all_ok && ok;
    std::cout << index++ << ',' << mlab::format_double(in) << ',' << mlab::format_double(out) << ',' << ratio
              << ',' << (ok ? "true" : "false") << '\n';
  }
  return all_ok ? kExitOk : kExitViolation;
}

// ---- measure-algebra -------------------------------------------------------

struct MeasureArgs {
  std::string op;
  std::vector<std::string> operands;
};

int cmd_measure(const MeasureArgs& args) {
  const auto& ops = args.operands;
  auto sets = [&](std::size_t n) {
    if (ops.size() != n) {
      throw mlab::parse_error("measure-algebra " + args.op + ": expected " + std::to_string(n) + " operand(s)");
    }
    std::vector<mlab::IntervalSet> out;
    for (const auto& s : ops) out.push_back(mlab::parse_interval_set(s));
    return out;
  };
  auto numbers = [&](std::size_t n) {
    if (ops.size() != n) {
      throw mlab::parse_error("measure-algebra " + args.op + ": expected " + std::to_string(n) + " number(s)");
    }
    std::vector<double> out;
    for (const auto& s : ops) out.push_back(mlab::parse_double(s));
    return out;
  };
  auto cls = [](const mlab::IntervalSet& s) { return mlab::QuotientClass::of(s); };
  auto print = [](const mlab::IntervalSet& s) { std::cout << mlab::format_interval_set(s) << '\n'; };
  auto print_num = [](double x) { std::cout << mlab::format_double(x) << '\n'; };
  const std::string& op = args.op;

  try {
    if (op == "union") { auto s = sets(2); print(mlab::set_union(s[0], s[1])); }
    else if (op == "intersection") { auto s = sets(2); print(mlab::set_intersection(s[0], s[1])); }
    else if (op == "difference") { auto s = sets(2); print(mlab::set_difference(s[0], s[1])); }
    else if (op == "symdiff") { auto s = sets(2); print(mlab::sym_diff(s[0], s[1])); }
    else if (op == "complement") { print(mlab::complement(sets(1)[0])); }
    else if (op == "measure") { print_num(mlab::measure(sets(1)[0])); }
    else if (op == "rho") { auto s = sets(2); print_num(mlab::rho(s[0], s[1])); }
    else if (op == "setmix") { auto s = sets(3); print(mlab::set_mixer(s[0], s[1], s[2])); }
    else if (op == "setcomix") { auto s = sets(3); print(mlab::set_comixer(s[0], s[1], s[2])); }
    else if (op == "quotient") { print(cls(sets(1)[0]).rep()); }
    else if (op == "qdist") { auto s = sets(2); print_num(mlab::quotient_dist(cls(s[0]), cls(s[1]))); }
    else if (op == "qcomix") {
      auto s = sets(3);
      print(mlab::quotient_comixer(cls(s[0]), cls(s[1]), cls(s[2])).rep());
    }
    else if (op == "geodesic") { print(mlab::geodesic_point(numbers(1)[0])); }
    else if (op == "intertwine") {
      auto n = numbers(3);
      const auto r = mlab::intertwine_check(n[0], n[1], n[2]);
      std::cout << "lhs=" << mlab::format_double(r.lhs) << " rhs=" << mlab::format_double(r.rhs) << '\n';
    }
    else throw mlab::parse_error("measure-algebra: unknown op '" + op + "'");
  } catch (const mlab::domain_error& e) {
    throw mlab::parse_error(e.what());
  }
  return kExitOk;
}

// ---- gap-probe -------------------------------------------------------------

struct GapArgs {
  double x_max = 100.0;
  double step = 0.5;
};

int cmd_gap_probe(const GapArgs& args) {
  const auto rows = mlab::gap_probe(args.x_max, args.step);
  std::cout << "x,f_x,displacement\n";
  bool ok = true;
  for (const auto& r : rows) {
    ok = ok && r.fx <= -1.0 && r.displacement >= r.x + 1.0;
    std::cout << mlab::format_double(r.x) << ',' << mlab::format_double(r.fx) << ','
              << mlab::format_double(r.displacement) << '\n';
  }
  return ok ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metric_lab: mixers, co-mixers and Lipschitz certification"};
  app.require_subcommand(1);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a ternary operation on a triple");
  eval_cmd->add_option("--op", eval.op, "incenter|nagel|median|group1d|setmix|setcomix|retract")->required();
  add_norm_options(eval_cmd, eval.norm);
  eval_cmd->add_option("--input", eval.input_file, "File with one triple per line ('-' for stdin)");
  eval_cmd->add_option("triple", eval.inputs, "\"x1,..;y1,..;z1,..\" or \"0-0.5;0.25-0.75;0.5-1\"");

  LipschitzArgs lip;
  auto* lip_cmd = app.add_subcommand("lipschitz", "Estimate a Lipschitz constant by sampling");
  lip_cmd->add_option("--op", lip.op, "incenter|nagel|median|group1d|setmix|setcomix|quotient|retraction")
      ->capture_default_str();
  lip_cmd->add_option("--arg", lip.arg, "Argument position 1..3")->check(CLI::Range(1, 3))->capture_default_str();
  lip_cmd->add_flag("--joint", lip.joint, "Perturb all three arguments together");
  add_norm_options(lip_cmd, lip.norm);
  lip_cmd->add_option("--dim", lip.dim, "Dimension")->check(CLI::PositiveNumber)->capture_default_str();
  lip_cmd->add_option("--samples", lip.samples, "Number of samples")->check(CLI::PositiveNumber)->capture_default_str();
  lip_cmd->add_option("--seed", lip.seed, "Random seed")->capture_default_str();
  lip_cmd->add_option("--radius", lip.radius, "Sampling box radius")->check(CLI::PositiveNumber)->capture_default_str();
  lip_cmd->add_option("--bound", lip.bound, "Claimed bound to test against");

  CertifyArgs cert;
  auto* cert_cmd = app.add_subcommand("certify", "Run the certification sweep and write a report");
  cert_cmd->add_option("--config", cert.config_path, "Sweep config JSON");
  cert_cmd->add_option("--output", cert.output, "Report path (overrides config)");
  cert_cmd->add_option("--format", cert.format, "json|csv (overrides config)");
  cert_cmd->add_option("--samples", cert.samples, "Samples per check (overrides config)");
  cert_cmd->add_option("--seed", cert.seed, "Seed (overrides config; METRIC_LAB_SEED wins)");

  RetractArgs ret;
  auto* ret_cmd = app.add_subcommand("retract", "Lipschitz ratios of the X(3) -> X(2) retraction on pairs");
  add_norm_options(ret_cmd, ret.norm);
  ret_cmd->add_option("--input", ret.input_file, "File with one 'E || E2' pair per line ('-' for stdin)");
  ret_cmd->add_option("pairs", ret.inputs, "\"x | y | z || x' | y' | z'\"");

  MeasureArgs meas;
  auto* meas_cmd = app.add_subcommand("measure-algebra", "Operations on finite unions of intervals in [0, 1]");
  meas_cmd->add_option("--op", meas.op,
                       "union|intersection|difference|symdiff|complement|measure|rho|setmix|setcomix|"
                       "quotient|qdist|qcomix|geodesic|intertwine")
      ->required();
  meas_cmd->add_option("operands", meas.operands, "Interval sets like \"0-0.25,0.75-1\" or \"empty\"");

  GapArgs gap;
  auto* gap_cmd = app.add_subcommand("gap-probe", "Displacement of the interchange candidate on R \\ (-1, 1)");
  gap_cmd->add_option("--x-max", gap.x_max, "Right end of the grid")->capture_default_str();
  gap_cmd->add_option("--step", gap.step, "Grid step")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*eval_cmd) return cmd_eval(eval);
    if (*lip_cmd) return cmd_lipschitz(lip);
    if (*cert_cmd) return cmd_certify(cert);
    if (*ret_cmd) return cmd_retract(ret);
    if (*meas_cmd) return cmd_measure(meas);
    if (*gap_cmd) return cmd_gap_probe(gap);
  } catch (const io_failure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
