// qresum command line: point evaluation, verification suites, CSV sweeps.
//
// Exit codes: 0 ok, 2 usage, 3 domain error, 4 verification failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qresum/laplace.hpp"
#include "qresum/qcore.hpp"
#include "qresum/series.hpp"
#include "qresum/stokes.hpp"
#include "qresum/uq.hpp"
#include "qresum/verify.hpp"

using namespace qresum;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitVerify = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(Real x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// A complex parameter given as --x, --x-re/--x-im or --x-mod/--x-arg.
struct ComplexArg {
  explicit ComplexArg(std::string n, std::optional<Real> p = std::nullopt) : name(std::move(n)), plain(p) {}

  std::string name;
  std::optional<Real> plain, re, im, mod, arg;

  void attach(CLI::App* app) {
    app->add_option("--" + name, plain, name + " (real)");
    app->add_option("--" + name + "-re", re, "real part of " + name);
    app->add_option("--" + name + "-im", im, "imaginary part of " + name);
    app->add_option("--" + name + "-mod", mod, "modulus of " + name);
    app->add_option("--" + name + "-arg", arg, "argument of " + name + " (radians, unwrapped)");
  }

  bool given() const { return plain || re || im || mod || arg; }

  BranchedComplex branched() const {
    if (!given()) throw UsageError("missing --" + name);
    const bool polar = mod || arg;
    const bool cartesian = plain || re || im;
    if (polar && cartesian) throw UsageError("--" + name + ": mix of polar and cartesian forms");
    if (plain && (re || im)) throw UsageError("--" + name + " given twice");
    if (polar) {
      if (!mod) throw UsageError("--" + name + "-arg needs --" + name + "-mod");
      if (!(*mod > 0.0)) throw UsageError("--" + name + "-mod must be positive");
      return {*mod, arg.value_or(0.0)};
    }
    const Complex v = plain ? Complex(*plain) : Complex(re.value_or(0.0), im.value_or(0.0));
    if (v == Complex(0.0)) return {0.0, 0.0};
    return BranchedComplex::principal(v);
  }

  Complex value() const { return branched().value(); }
};

struct EvalArgs {
  std::string fn;
  ComplexArg z{"z"}, a{"a"}, b{"b"}, lambda{"lambda"};
  std::optional<int> n;
  std::string kind = "E";
  std::string method;
  std::string kernel = "theta";
  int form = 1;
  std::string upper, lower;

  void attach(CLI::App* app) {
    for (ComplexArg* c : {&z, &a, &b, &lambda}) c->attach(app);
    app->add_option("--n", n, "integer order (sw, cf)");
    app->add_option("--kind", kind, "transform kind for uq")->check(CLI::IsMember({"E", "theta", "lambda"}));
    app->add_option("--method", method, "uq representation or pqc method (series|integral)");
    app->add_option("--kernel", kernel, "kernel of y2")->check(CLI::IsMember({"E", "theta"}));
    app->add_option("--form", form, "y2 form: 0 = 2phi1, 1 = 1phi1")->check(CLI::IsMember({0, 1}));
    app->add_option("--upper", upper, "phi/psi upper parameters, comma separated, each re or re:im");
    app->add_option("--lower", lower, "phi/psi lower parameters");
  }
};

const std::vector<std::string> kFunctions = {"uq",  "y2",  "y3", "y4",  "theta_q", "e_q", "p_q",
                                             "pqc", "pqd", "phi", "psi", "sw",      "cf"};

std::vector<Complex> parse_list(const std::string& s, const char* flag) {
  std::vector<Complex> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      const auto colon = item.find(':');
      std::size_t used = 0;
      if (colon == std::string::npos) {
        out.emplace_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } else {
        const std::string re = item.substr(0, colon), im = item.substr(colon + 1);
        std::size_t u2 = 0;
        out.emplace_back(std::stod(re, &used), std::stod(im, &u2));
        if (used != re.size() || u2 != im.size()) throw std::invalid_argument(item);
      }
    } catch (const std::logic_error&) {
      throw UsageError(std::string("malformed entry '") + item + "' in " + flag);
    }
  }
  return out;
}

TransformKind transform_kind(const EvalArgs& e, const QContext& ctx) {
  if (e.kind == "E") return TransformKind::E();
  if (e.kind == "theta") return TransformKind::Theta();
  return TransformKind::Discrete(e.lambda.value(), ctx);
}

int require_n(const EvalArgs& e) {
  if (!e.n) throw UsageError("missing --n");
  return *e.n;
}

using Diagnostics = std::vector<std::pair<std::string, std::string>>;

Complex evaluate(const EvalArgs& e, const QContext& ctx, Diagnostics* diag) {
  auto note = [&](const std::string& k, const std::string& v) {
    if (diag) diag->emplace_back(k, v);
  };
  const std::string& fn = e.fn;
  if (fn == "uq") {
    const UqPoint p{e.a.value(), e.b.value(), e.z.branched(), transform_kind(e, ctx)};
    const UqMethod m = e.method.empty() ? default_method(p) : uq_method_from_string(e.method);
    note("method", to_string(m));
    std::string adm;
    for (UqMethod x : admissible_methods(p, ctx)) adm += (adm.empty() ? "" : ",") + std::string(to_string(x));
    note("admissible", adm);
    return uq(p, m, ctx);
  }
  if (fn == "y2") {
    return y2(e.kernel == "E" ? KernelKind::E : KernelKind::Theta, e.a.value(), e.b.value(), e.z.branched(), ctx,
              e.form);
  }
  if (fn == "y3" || fn == "y4") return y_infinity(fn == "y3" ? 3 : 4, e.a.value(), e.b.value(), e.z.branched(), ctx);
  if (fn == "theta_q") return theta_q(e.z.value(), ctx);
  if (fn == "e_q") return e_q(e.z.branched(), ctx);
  if (fn == "p_q") return p_q(e.z.branched(), ctx);
  if (fn == "pqc") {
    if (!e.method.empty() && e.method != "series" && e.method != "integral") {
      throw UsageError("--method for pqc must be series or integral");
    }
    note("method", e.method.empty() ? "series" : e.method);
    return pqc(e.z.branched(), ctx, e.method == "integral" ? PqcMethod::Integral : PqcMethod::Series);
  }
  if (fn == "pqd") return pqd(e.z.branched(), e.lambda.value(), ctx);
  if (fn == "phi" || fn == "psi") {
    const PhiParams p{parse_list(e.upper, "--upper"), parse_list(e.lower, "--lower")};
    return fn == "phi" ? phi(p, e.z.value(), ctx) : psi(p, e.z.value(), ctx);
  }
  if (fn == "sw") return stieltjes_wigert(require_n(e), e.z.value(), ctx);
  if (fn == "cf") {
    if (e.n) return cf_convergent(*e.n, e.a.value(), e.b.value(), e.z.value(), ctx);
    const auto g = cf_gap(e.a.value(), e.b.value(), e.z.value(), ctx);
    note("odd_limit", num(g.odd_limit.real()) + " " + num(g.odd_limit.imag()));
    note("gap", num(g.gap));
    note("convergents", std::to_string(g.n_used));
    return g.even_limit;
  }
  throw UsageError("unknown function '" + fn + "'");
}

struct Common {
  Real q = 0.5;
  Real eps = 1e-12;
  std::string precision;
  std::string format = "json";
  std::string out;
  bool verbose = false;

  void attach(CLI::App* app, bool with_q = true) {
    if (with_q) app->add_option("--q", q, "base q in (0, 1)")->capture_default_str();
    app->add_option("--eps", eps, "target accuracy")->capture_default_str();
    app->add_option("--precision", precision, "double | extended (default from QRESUM_PRECISION)")
        ->check(CLI::IsMember({"double", "extended"}));
    app->add_option("--format", format, "json | csv | text")
        ->capture_default_str()->check(CLI::IsMember({"json", "csv", "text"}));
    app->add_option("--out", out, "output file (default stdout)");
    app->add_flag("--verbose", verbose, "print diagnostics");
  }

  QContext context(Real qv) const {
    std::string mode = precision;
    if (mode.empty()) {
      const char* env = std::getenv("QRESUM_PRECISION");
      mode = env ? env : "double";
    }
    if (mode != "double" && mode != "extended") throw UsageError("QRESUM_PRECISION must be double or extended");
    if (mode == "extended") std::cerr << "warning: extended precision is not available; computing in double\n";
    return QContext::make(qv, eps);
  }
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  f << text;
}

Json complex_json(Complex v) { return Json{{"re", v.real()}, {"im", v.imag()}}; }

Json point_json(const ParamRecord& p) {
  Json j = Json::object();
  for (const auto& [k, v] : p.entries()) j[k] = v.imag() == 0.0 ? Json(v.real()) : complex_json(v);
  return j;
}

Json report_json(const VerificationReport& r) {
  return Json{{"identity_id", r.identity_id}, {"point", point_json(r.point)}, {"lhs", complex_json(r.lhs)},
              {"rhs", complex_json(r.rhs)},   {"abs_err", r.abs_err},        {"rel_err", r.rel_err},
              {"pass", r.pass},               {"note", r.note}};
}

std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string point_text(const ParamRecord& p) {
  std::string s;
  for (const auto& [k, v] : p.entries()) {
    s += (s.empty() ? "" : ";") + k + "=" + num(v.real());
    if (v.imag() != 0.0) s += (v.imag() < 0 ? "" : "+") + num(v.imag()) + "i";
  }
  return s;
}

int cmd_eval(const EvalArgs& e, const Common& c) {
  const QContext ctx = c.context(c.q);
  Diagnostics diag;
  const Complex v = evaluate(e, ctx, c.verbose ? &diag : nullptr);
  std::string text;
  if (c.format == "json") {
    Json j{{"fn", e.fn}, {"q", c.q}, {"value", complex_json(v)}};
    if (c.verbose) {
      Json d = Json::object();
      for (const auto& [k, s] : diag) d[k] = s;
      j["diagnostics"] = d;
    }
    text = j.dump() + "\n";
  } else if (c.format == "csv") {
    text = "re,im\n" + num(v.real()) + "," + num(v.imag()) + "\n";
  } else {
    text = num(v.real()) + " " + num(v.imag()) + "\n";
    for (const auto& [k, s] : diag) text += k + ": " + s + "\n";
  }
  emit(c.out, text);
  return kExitOk;
}

int cmd_verify(const std::vector<std::string>& ids, const std::vector<Real>& q_grid, int parallel, const Common& c) {
  const QContext ctx = c.context(q_grid.empty() ? 0.5 : q_grid.front());
  std::vector<VerificationReport> all;
  std::ostringstream summary;
  bool ok = true;
  for (const auto& id : ids) {
    const auto r = run_suite(id, ctx, {parallel, q_grid});
    ok = ok && r.summary.failed == 0;
    summary << id << ": " << r.summary.passed << " passed, " << r.summary.failed << " failed\n";
    for (const auto& [name, worst] : r.summary.worst_rel) summary << "  " << name << " worst rel_err " << num(worst) << "\n";
    for (const auto& n : r.summary.notes) summary << "  note: " << n << "\n";
    all.insert(all.end(), r.reports.begin(), r.reports.end());
  }
  std::string text;
  if (c.format == "json") {
    Json arr = Json::array();
    for (const auto& r : all) arr.push_back(report_json(r));
    text = arr.dump(1) + "\n";
  } else if (c.format == "csv") {
    text = "identity_id,point,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,pass,note\n";
    for (const auto& r : all) {
      text += csv_field(r.identity_id) + "," + csv_field(point_text(r.point)) + "," + num(r.lhs.real()) + "," +
              num(r.lhs.imag()) + "," + num(r.rhs.real()) + "," + num(r.rhs.imag()) + "," + num(r.abs_err) + "," +
              num(r.rel_err) + "," + (r.pass ? "true" : "false") + "," + csv_field(r.note) + "\n";
    }
  } else {
    for (const auto& r : all) {
      text += std::string(r.pass ? "PASS " : "FAIL ") + r.identity_id + " " + point_text(r.point) + " rel_err " +
              num(r.rel_err) + (r.note.empty() ? "" : " (" + r.note + ")") + "\n";
    }
  }
  emit(c.out, text);
  std::cerr << summary.str();
  return ok ? kExitOk : kExitVerify;
}

std::vector<Real> parse_grid(std::optional<Real> q, const std::string& grid) {
  if (q) return {*q};
  if (grid.empty()) return {};
  if (grid.rfind("q=", 0) != 0) throw UsageError("--grid must look like q=v1,v2,...");
  std::vector<Real> out;
  for (Complex v : parse_list(grid.substr(2), "--grid")) {
    if (v.imag() != 0.0 || !(v.real() > 0.0 && v.real() < 1.0)) throw UsageError("--grid values must lie in (0, 1)");
    out.push_back(v.real());
  }
  if (out.empty()) throw UsageError("--grid is empty");
  return out;
}

struct Range {
  std::string column;
  std::vector<Real> values;
};

Range parse_range(const std::string& column, const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw UsageError("range '" + spec + "' must be lo:hi:n");
  Real lo = 0.0, hi = 0.0;
  long n = 0;
  try {
    std::size_t u0 = 0, u1 = 0, u2 = 0;
    lo = std::stod(parts[0], &u0);
    hi = std::stod(parts[1], &u1);
    n = std::stol(parts[2], &u2);
    if (u0 != parts[0].size() || u1 != parts[1].size() || u2 != parts[2].size()) throw std::invalid_argument(spec);
  } catch (const std::logic_error&) {
    throw UsageError("malformed range '" + spec + "'");
  }
  if (n < 1) throw UsageError("range '" + spec + "' needs n >= 1");
  if (n > 1'000'000) throw UsageError("range '" + spec + "' has too many points");
  Range r{column, {}};
  for (long i = 0; i < n; ++i) r.values.push_back(n == 1 ? lo : lo + (hi - lo) * Real(i) / Real(n - 1));
  return r;
}

int cmd_table(EvalArgs e, const std::map<std::string, std::string>& specs, const Common& c) {
  std::vector<Range> ranges;
  for (const char* col : {"z_mod", "z_arg", "a", "b", "lambda"}) {
    const auto it = specs.find(col);
    if (it != specs.end() && !it->second.empty()) ranges.push_back(parse_range(col, it->second));
  }
  if (ranges.empty()) throw UsageError("table needs at least one --*-range");
  const bool sweep_z = specs.count("z_mod") && !specs.at("z_mod").empty();
  const bool sweep_arg = specs.count("z_arg") && !specs.at("z_arg").empty();
  Real z_mod = 1.0, z_arg = 0.0;
  if (sweep_z || sweep_arg) {
    if (e.z.plain || e.z.re || e.z.im) throw UsageError("z sweeps take the fixed part from --z-mod/--z-arg");
    z_mod = e.z.mod.value_or(1.0);
    z_arg = e.z.arg.value_or(0.0);
  }
  const QContext ctx = c.context(c.q);

  std::string text;
  for (const auto& r : ranges) text += r.column + ",";
  text += "re,im\n";
  std::vector<std::size_t> idx(ranges.size(), 0);
  int failures = 0;
  std::string first_failure;
  while (true) {
    for (std::size_t k = 0; k < ranges.size(); ++k) {
      const Real v = ranges[k].values[idx[k]];
      const std::string& col = ranges[k].column;
      if (col == "z_mod") z_mod = v;
      if (col == "z_arg") z_arg = v;
      if (col == "a") e.a = ComplexArg{"a", v};
      if (col == "b") e.b = ComplexArg{"b", v};
      if (col == "lambda") e.lambda = ComplexArg{"lambda", v};
      text += num(v) + ",";
    }
    if (sweep_z || sweep_arg) {
      e.z = ComplexArg{"z"};
      e.z.mod = z_mod;
      e.z.arg = z_arg;
    }
    try {
      const Complex v = evaluate(e, ctx, nullptr);
      text += num(v.real()) + "," + num(v.imag()) + "\n";
    } catch (const Error& err) {
      text += "nan,nan\n";
      if (failures++ == 0) first_failure = err.what();
    }
    bool done = true;
    for (std::size_t k = ranges.size(); k-- > 0;) {
      if (++idx[k] < ranges[k].values.size()) {
        done = false;
        break;
      }
      idx[k] = 0;
    }
    if (done) break;
  }
  emit(c.out, text);
  if (failures > 0) {
    std::cerr << "error: " << failures << " sweep point(s) failed; first: " << first_failure << "\n";
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-Borel-Laplace resummation toolkit"};
  app.require_subcommand(1);

  EvalArgs eval_args;
  Common eval_common;
  CLI::App* eval = app.add_subcommand("eval", "evaluate one function at one point");
  eval->add_option("fn", eval_args.fn, "function")->required()->check(CLI::IsMember(kFunctions));
  eval_args.attach(eval);
  eval_common.attach(eval);

  std::string suite;
  bool all = false;
  std::optional<Real> verify_q;
  std::string verify_grid;
  int parallel = 0;
  Common verify_common;
  CLI::App* verify = app.add_subcommand("verify", "run verification suites and write a JSON report");
  auto* suite_opt = verify->add_option("--suite", suite, "suite id");
  auto* all_opt = verify->add_flag("--all", all, "run every suite");
  suite_opt->excludes(all_opt);
  auto* q_opt = verify->add_option("--q", verify_q, "replace the suites' q grids by one value");
  verify->add_option("--grid", verify_grid, "replace the suites' q grids, e.g. q=0.1,0.3")->excludes(q_opt);
  verify->add_option("--parallel", parallel, "worker threads (0 = hardware concurrency)");
  verify_common.attach(verify, false);

  EvalArgs table_args;
  Common table_common;
  table_common.format = "csv";
  std::map<std::string, std::string> specs{{"z_mod", ""}, {"z_arg", ""}, {"a", ""}, {"b", ""}, {"lambda", ""}};
  CLI::App* table = app.add_subcommand("table", "sweep a function and write CSV");
  table->add_option("--fn", table_args.fn, "function")->required()->check(CLI::IsMember(kFunctions));
  table_args.attach(table);
  table_common.attach(table);
  table->add_option("--z-mod-range", specs["z_mod"], "lo:hi:n");
  table->add_option("--z-arg-range", specs["z_arg"], "lo:hi:n");
  table->add_option("--a-range", specs["a"], "lo:hi:n");
  table->add_option("--b-range", specs["b"], "lo:hi:n");
  table->add_option("--lambda-range", specs["lambda"], "lo:hi:n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*eval) return cmd_eval(eval_args, eval_common);
    if (*verify) {
      std::vector<std::string> ids;
      if (all) {
        for (const auto& s : suites()) ids.push_back(s.id);
      } else if (!suite.empty()) {
        suite_info(suite);
        ids.push_back(suite);
      } else {
        throw UsageError("verify needs --suite <id> or --all");
      }
      return cmd_verify(ids, parse_grid(verify_q, verify_grid), parallel, verify_common);
    }
    return cmd_table(table_args, specs, table_common);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    if (e.code() == Errc::UnknownSuite) {
      std::cerr << "usage error: " << e.what() << "\n";
      return kExitUsage;
    }
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}
