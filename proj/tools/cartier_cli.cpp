// Command-line front end. JSON goes to stdout, diagnostics to stderr.
// Exit codes: 0 ok, 2 verification failure, 3 invalid input, 4 cap exceeded.

#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cartier/checks.hpp"
#include "cartier/parse.hpp"
#include "cartier/testmod.hpp"
#include "cartier/vfilt.hpp"

using namespace cartier;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitVerification = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitCap = 4;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::VerificationFailed: return kExitVerification;
    case ErrorCode::CapExceeded: return kExitCap;
    default: return kExitInvalid;
  }
}

struct Options {
  std::uint32_t p = 0;
  std::string vars;
  std::string f;
  std::string twist;
  std::string gens;
  std::string rels;
  std::string c;
  std::string t;
  std::string range = "0..1";
  std::int64_t max_den = 0;
  std::string exponent = "pe";
  std::string path = "auto";
  std::string convention = "a";
  unsigned threads = 1;
  std::uint64_t seed = 1;
  int cases = 20;
  std::string name;
  bool json = false;
  bool timings = false;
};

class Clock {
 public:
  void lap(const std::string& phase) {
    auto now = std::chrono::steady_clock::now();
    laps_.emplace_back(phase, std::chrono::duration<double, std::milli>(now - last_).count());
    last_ = now;
  }
  json to_json() const {
    json out = json::object();
    for (const auto& [k, v] : laps_) out[k] = v;
    return out;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, double>> laps_;
};

// Human output: blocks of aligned columns.
class Table {
 public:
  explicit Table(std::vector<std::string> header = {}) : header_(std::move(header)) {}
  void row(std::vector<std::string> r) { rows_.push_back(std::move(r)); }
  void print(std::ostream& os) const {
    std::vector<std::size_t> w;
    auto widen = [&](const std::vector<std::string>& r) {
      if (w.size() < r.size()) w.resize(r.size(), 0);
      for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
    };
    if (!header_.empty()) widen(header_);
    for (const auto& r : rows_) widen(r);
    auto line = [&](const std::vector<std::string>& r) {
      std::string s;
      for (std::size_t i = 0; i < r.size(); ++i) {
        s += r[i];
        if (i + 1 < r.size()) s += std::string(w[i] - r[i].size() + 2, ' ');
      }
      os << s << "\n";
    };
    if (!header_.empty()) {
      line(header_);
      std::vector<std::string> rule;
      for (std::size_t i = 0; i < header_.size(); ++i) rule.push_back(std::string(w[i], '-'));
      line(rule);
    }
    for (const auto& r : rows_) line(r);
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Report {
  json query = json::object();
  json result = json::object();
  json certified = nullptr;
  json stabilized = nullptr;
  std::vector<Table> human;
  int exit = 0;
};

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ", ") + x;
  return out;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

json strings(const FreeSubmodule& W) { return W.to_strings(); }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (const auto& r : m) {
    json row = json::array();
    for (const auto& c : r) row.push_back(c.to_string());
    rows.push_back(row);
  }
  return rows;
}

// The pair (M, f, c) described by the common flags.
struct Pair {
  Ring ring;
  CartierModule module;
  Polynomial f;
  Polynomial c;
};

Ring make_ring(const Options& o) {
  if (o.p == 0) fail(ErrorCode::InvalidInput, "--p is required");
  return parse_ring(o.p, o.vars);
}

Pair make_pair(const Options& o) {
  Ring R = make_ring(o);
  if (o.f.empty()) fail(ErrorCode::InvalidInput, "--f is required");
  CartierModule M = parse_module(R, o.twist, o.gens, o.rels);
  Polynomial f = parse_polynomial(R, o.f);
  Polynomial c = o.c.empty() ? suggest_test_element(M, f) : parse_polynomial(R, o.c);
  return Pair{R, std::move(M), std::move(f), std::move(c)};
}

json pair_query(const std::string& command, const Pair& P) {
  json q;
  q["command"] = command;
  q["f"] = P.f.to_string();
  q["twist"] = matrix_json(P.module.kappa().matrix());
  q["gens"] = strings(P.module.numerator());
  q["rels"] = strings(P.module.denominator());
  q["c"] = P.c.to_string();
  return q;
}

Table pair_table(const Pair& P) {
  Table t;
  t.row({"f", P.f.to_string()});
  if (P.module.rank() == 1) {
    t.row({"twist", P.module.kappa().matrix()[0][0].to_string()});
  } else {
    for (std::size_t i = 0; i < P.module.rank(); ++i) {
      std::vector<std::string> row;
      for (const auto& c : P.module.kappa().matrix()[i]) row.push_back(c.to_string());
      t.row({i ? "" : "twist", "[" + join(row) + "]"});
    }
  }
  if (!P.module.denominator().is_zero()) t.row({"relations", P.module.denominator().to_string()});
  t.row({"test element", P.c.to_string()});
  return t;
}

std::int64_t default_den(const Options& o) {
  if (o.max_den > 0) return o.max_den;
  const std::int64_t p = o.p;
  return p * p * (p - 1);
}

// -- commands ----------------------------------------------------------------

Report cmd_tau(const Options& o, Clock& clock) {
  Pair P = make_pair(o);
  if (o.t.empty()) fail(ErrorCode::InvalidInput, "--t is required");
  if (o.t.find('.') != std::string::npos)
    fail(ErrorCode::InvalidInput, "t must be an exact fraction a/b, not a decimal");
  Rational t = parse_rational(o.t);
  Convention conv = o.exponent == "pe" ? Convention::CeilPE : Convention::CeilPEMinus1;
  TauPath path = o.path == "root" ? TauPath::Root
                 : o.path == "sum" ? TauPath::Sum
                 : o.path == "both" ? TauPath::Both
                                    : TauPath::Auto;
  clock.lap("parse");
  auto r = tau(PairSpec{P.module, P.f, t, P.c, conv}, path);
  clock.lap("tau");

  Report rep;
  rep.query = pair_query("tau", P);
  rep.query["t"] = to_string(t);
  rep.query["exponent"] = o.exponent;
  rep.query["path"] = o.path;
  rep.result["t"] = to_string(t);
  rep.result["rank"] = P.module.rank();
  rep.result["generators"] = strings(r.value);
  rep.result["path"] = r.path;
  rep.certified = r.certified;
  rep.stabilized = r.stabilized_at_e;
  Table t1 = pair_table(P);
  t1.row({"t", to_string(t)});
  t1.row({"tau", r.value.to_string()});
  t1.row({"path", r.path});
  t1.row({"certified", yes_no(r.certified)});
  t1.row({"stabilized at e", std::to_string(r.stabilized_at_e)});
  rep.human.push_back(std::move(t1));
  return rep;
}

Report cmd_fpt(const Options& o, Clock& clock) {
  Ring R = make_ring(o);
  if (o.f.empty()) fail(ErrorCode::InvalidInput, "--f is required");
  Polynomial f = parse_polynomial(R, o.f);
  clock.lap("parse");
  auto r = fpt(f, o.max_den);
  clock.lap("fpt");
  Report rep;
  rep.query["command"] = "fpt";
  rep.query["f"] = f.to_string();
  rep.query["max_denominator"] = o.max_den;
  rep.result["fpt"] = to_string(r.value);
  json nu = json::array();
  Table t1({"e", "nu_f(p^e)", "bounds"});
  for (const auto& [e, n] : r.nu) {
    nu.push_back(json{{"e", e}, {"nu", n}});
    const std::uint64_t q = prime_power(R.p(), e);
    t1.row({std::to_string(e), std::to_string(n),
            to_string(Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(q))) + " <= fpt <= " +
                to_string(Rational(static_cast<std::int64_t>(n + 1), static_cast<std::int64_t>(q)))});
  }
  rep.result["nu"] = nu;
  rep.certified = true;
  Table t0;
  t0.row({"f", f.to_string()});
  t0.row({"fpt at the origin", to_string(r.value)});
  rep.human.push_back(std::move(t0));
  rep.human.push_back(std::move(t1));
  return rep;
}

json range_json(const Rational& lo, const Rational& hi) {
  return json::array({to_string(lo), to_string(hi)});
}

Report cmd_jumps(const Options& o, Clock& clock) {
  Pair P = make_pair(o);
  auto [lo, hi] = parse_range(o.range);
  std::int64_t den = default_den(o);
  clock.lap("parse");
  TauContext ctx(P.module, P.f, P.c);
  auto scan = jumping_numbers(ctx, lo, hi, den, o.threads);
  clock.lap("scan");

  bool certified = true;
  unsigned stab = 0;
  std::vector<Rational> pts{lo};
  pts.insert(pts.end(), scan.candidates.begin(), scan.candidates.end());
  for (const auto& t : pts) {
    auto r = ctx.tau(t);  // memoized
    certified = certified && r.certified;
    stab = std::max(stab, r.stabilized_at_e);
  }
  Report rep;
  rep.query = pair_query("jumps", P);
  rep.query["range"] = range_json(lo, hi);
  rep.query["max_denominator"] = den;
  json js = json::array(), values = json::array();
  Table t1({"t", "tau"});
  t1.row({to_string(lo), scan.values.front().to_string()});
  for (const auto& j : scan.jumps) {
    js.push_back(to_string(j));
    auto v = ctx.tau(j).value;
    values.push_back(json{{"t", to_string(j)}, {"generators", strings(v)}});
    t1.row({to_string(j), v.to_string()});
  }
  rep.result["jumps"] = js;
  rep.result["tau_at_start"] = strings(scan.values.front());
  rep.result["values"] = values;
  rep.result["candidates"] = scan.candidates.size();
  rep.certified = certified;
  rep.stabilized = stab;
  Table t0 = pair_table(P);
  t0.row({"range", to_string(lo) + ".." + to_string(hi)});
  t0.row({"max denominator", std::to_string(den)});
  t0.row({"candidates", std::to_string(scan.candidates.size())});
  t0.row({"jumps", "{" + join(js.get<std::vector<std::string>>()) + "}"});
  rep.human.push_back(std::move(t0));
  rep.human.push_back(std::move(t1));
  return rep;
}

json axiom_json(const AxiomCheck& a) {
  json j;
  j["tested"] = a.tested;
  j["ok"] = a.ok;
  j["first_failure"] = a.first_failure ? json(to_string(*a.first_failure)) : json(nullptr);
  j["detail"] = a.detail;
  return j;
}

std::string axiom_text(const AxiomCheck& a) {
  if (!a.tested) return "not tested" + (a.detail.empty() ? "" : " (" + a.detail + ")");
  if (a.ok) return "ok";
  return "FAILS at t=" + to_string(*a.first_failure) + ": " + a.detail;
}

FiltrationTable table_from(const Options& o, const Pair& P, Rational& lo, Rational& hi,
                           std::int64_t& den) {
  std::tie(lo, hi) = parse_range(o.range);
  den = default_den(o);
  return compute_vfiltration(P.module, P.f, lo, hi, den, o.c.empty() ? std::nullopt : std::optional(P.c),
                             o.threads);
}

Report cmd_vfilt(const Options& o, Clock& clock) {
  Pair P = make_pair(o);
  clock.lap("parse");
  Rational lo, hi;
  std::int64_t den;
  auto T = table_from(o, P, lo, hi, den);
  clock.lap("filtration");
  auto ax = verify_axioms(T);
  clock.lap("axioms");

  Report rep;
  rep.query = pair_query("vfilt", P);
  rep.query["range"] = range_json(lo, hi);
  rep.query["max_denominator"] = den;
  rep.result["V_start"] = strings(T.V0);
  json js = json::array();
  bool certified = true;
  Table t1({"t", "V^t", "V^(t-eps)", "left certified"});
  t1.row({to_string(lo), T.V0.to_string(), "", ""});
  for (const auto& j : T.jumps) {
    certified = certified && j.left_certified && j.grid_consistent;
    js.push_back(json{{"t", to_string(j.t)},
                      {"generators", strings(j.value)},
                      {"left", strings(j.left)},
                      {"left_certified", j.left_certified},
                      {"grid_consistent", j.grid_consistent}});
    t1.row({to_string(j.t), j.value.to_string(), j.left.to_string(), yes_no(j.left_certified)});
  }
  rep.result["jumps"] = js;
  json axj;
  axj["decreasing"] = axiom_json(ax.decreasing);
  axj["i"] = axiom_json(ax.i);
  axj["ii"] = axiom_json(ax.ii);
  axj["iii"] = axiom_json(ax.iii);
  axj["iv"] = axiom_json(ax.iv);
  rep.result["axioms"] = axj;
  rep.result["axioms_ok"] = ax.all_ok();
  rep.certified = certified;
  Table t0 = pair_table(P);
  t0.row({"range", to_string(lo) + ".." + to_string(hi)});
  t0.row({"max denominator", std::to_string(den)});
  Table t2({"axiom", "result"});
  t2.row({"decreasing", axiom_text(ax.decreasing)});
  t2.row({"(i)", axiom_text(ax.i)});
  t2.row({"(ii)", axiom_text(ax.ii)});
  t2.row({"(iii)", axiom_text(ax.iii)});
  t2.row({"(iv)", axiom_text(ax.iv)});
  rep.human.push_back(std::move(t0));
  rep.human.push_back(std::move(t1));
  rep.human.push_back(std::move(t2));
  if (!ax.all_ok()) rep.exit = kExitVerification;
  return rep;
}

Report cmd_gr(const Options& o, Clock& clock) {
  Pair P = make_pair(o);
  GrConvention conv = o.convention == "b" ? GrConvention::B : GrConvention::A;
  clock.lap("parse");
  Rational lo, hi;
  std::int64_t den;
  auto T = table_from(o, P, lo, hi, den);
  clock.lap("filtration");
  auto pieces = gr_range(T, lo, hi, conv);
  clock.lap("pieces");

  Report rep;
  rep.query = pair_query("gr", P);
  rep.query["range"] = range_json(lo, hi);
  rep.query["max_denominator"] = den;
  rep.query["convention"] = o.convention;
  json ps = json::array();
  Table t1({"t", "exponent", "numerator", "denominator", "crystal zero"});
  for (const auto& g : pieces) {
    bool zero = gr_is_crystal_zero(g);
    ps.push_back(json{{"t", to_string(g.t)},
                      {"exponent", g.exponent},
                      {"numerator", strings(g.module.numerator())},
                      {"denominator", strings(g.module.denominator())},
                      {"twist", matrix_json(g.module.kappa().matrix())},
                      {"crystal_zero", zero}});
    t1.row({to_string(g.t), std::to_string(g.exponent), g.module.numerator().to_string(),
            g.module.denominator().to_string(), yes_no(zero)});
  }
  clock.lap("nilpotence");
  rep.result["convention"] = conv == GrConvention::A ? "A" : "B";
  rep.result["pieces"] = ps;
  bool certified = true;
  for (const auto& j : T.jumps) certified = certified && j.left_certified;
  rep.certified = certified;
  Table t0 = pair_table(P);
  t0.row({"range", to_string(lo) + ".." + to_string(hi)});
  t0.row({"convention", conv == GrConvention::A ? "A: ceil(t(p-1))" : "B: floor(t(p-1)) + 1"});
  t0.row({"nonzero pieces", std::to_string(pieces.size())});
  rep.human.push_back(std::move(t0));
  rep.human.push_back(std::move(t1));
  return rep;
}

Report from_checks(const CheckReport& r) {
  Report rep;
  json items = json::array();
  Table t1;
  for (const auto& i : r.items) {
    items.push_back(json{{"name", i.name}, {"status", status_name(i.status)}, {"detail", i.detail}});
    t1.row({i.name + ": " + status_name(i.status)});
    if (!i.detail.empty() && i.status != CheckStatus::Pass) t1.row({"    " + i.detail});
  }
  rep.result["passed"] = r.passed();
  rep.result["counts"] = json{{"pass", r.count(CheckStatus::Pass)},
                              {"fail", r.count(CheckStatus::Fail)},
                              {"skip", r.count(CheckStatus::Skip)}};
  rep.result["items"] = items;
  Table t2;
  t2.row({std::to_string(r.count(CheckStatus::Pass)) + " passed, " +
          std::to_string(r.count(CheckStatus::Fail)) + " failed, " +
          std::to_string(r.count(CheckStatus::Skip)) + " skipped"});
  rep.human.push_back(std::move(t1));
  rep.human.push_back(std::move(t2));
  rep.certified = r.passed();
  if (!r.passed()) rep.exit = kExitVerification;
  return rep;
}

Report cmd_check(const Options& o, Clock& clock) {
  auto r = run_check(o.name, o.seed, o.cases);
  clock.lap("suite");
  Report rep = from_checks(r);
  rep.query["command"] = "check";
  rep.query["suite"] = o.name;
  rep.query["seed"] = o.seed;
  rep.query["cases"] = o.cases;
  return rep;
}

Report cmd_repro(const Options& o, Clock& clock) {
  auto r = run_repro(o.name);
  clock.lap("repro");
  Report rep = from_checks(r);
  rep.query["command"] = "repro";
  rep.query["target"] = o.name;
  return rep;
}

void emit(const Report& rep, const Options& o, const Clock& clock) {
  if (o.json) {
    json out;
    out["p"] = o.p ? json(o.p) : json(nullptr);
    json vars = json::array();
    if (o.p) vars = parse_ring(o.p, o.vars).vars();
    out["vars"] = vars;
    out["query"] = rep.query;
    out["result"] = rep.result;
    out["certified"] = rep.certified;
    out["stabilized_at_e"] = rep.stabilized;
    out["timings_ms"] = o.timings ? clock.to_json() : json::object();
    std::cout << out.dump() << "\n";
    return;
  }
  if (o.p) {
    Table head;
    head.row({"p", std::to_string(o.p)});
    head.row({"vars", o.vars.empty() ? "(none)" : o.vars});
    head.print(std::cout);
  }
  for (const auto& t : rep.human) {
    std::cout << "\n";
    t.print(std::cout);
  }
  if (o.timings) {
    std::cout << "\n";
    Table t({"phase", "ms"});
    const json laps = clock.to_json();
    for (const auto& [k, v] : laps.items()) {
      std::ostringstream os;
      os.precision(3);
      os << std::fixed << v.get<double>();
      t.row({k, os.str()});
    }
    t.print(std::cout);
  }
}

void report_error(const std::string& code, const std::string& message, int exit,
                  std::optional<std::size_t> column = std::nullopt) {
  json e;
  e["error"] = code;
  e["message"] = message;
  if (column) e["column"] = *column;
  e["exit"] = exit;
  std::cerr << e.dump() << "\n";
}

void add_pair_options(CLI::App* sub, Options& o) {
  sub->add_option("--p", o.p, "prime characteristic")->required();
  sub->add_option("--vars", o.vars, "comma separated variable names");
  sub->add_option("--f", o.f, "the polynomial f")->required();
  sub->add_option("--twist", o.twist, "twist matrix, rows separated by ';', entries by ','");
  sub->add_option("--gens", o.gens, "module generators, ';' between vectors");
  sub->add_option("--rels", o.rels, "relations, ';' between vectors");
  sub->add_option("--c", o.c, "test element (default: suggested)");
}

void add_output_options(CLI::App* sub, Options& o) {
  sub->add_flag("--json", o.json, "single JSON object on stdout");
  sub->add_flag("--timings", o.timings, "report per-phase timings");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Test modules, V-filtrations and Cartier crystals over F_p[x_1..x_n]"};
  app.require_subcommand(1);
  Options o;

  auto* tau_cmd = app.add_subcommand("tau", "test module tau(M, f^t)");
  add_pair_options(tau_cmd, o);
  tau_cmd->add_option("--t", o.t, "exponent as a/b")->required();
  tau_cmd->add_option("--exponent", o.exponent, "ceil(tp^e) or ceil(t(p^e-1))")
      ->check(CLI::IsMember({"pe", "pe-1"}));
  tau_cmd->add_option("--path", o.path, "evaluation path")
      ->check(CLI::IsMember({"auto", "root", "sum", "both"}));

  auto* fpt_cmd = app.add_subcommand("fpt", "F-pure threshold at the origin");
  fpt_cmd->add_option("--p", o.p, "prime characteristic")->required();
  fpt_cmd->add_option("--vars", o.vars, "comma separated variable names");
  fpt_cmd->add_option("--f", o.f, "the polynomial f")->required();
  fpt_cmd->add_option("--max-denominator", o.max_den, "largest candidate denominator");

  std::vector<CLI::App*> scans;
  for (auto [name, help] : {std::pair{"jumps", "F-jumping numbers in a range"},
                            std::pair{"vfilt", "V-filtration table and its axioms"},
                            std::pair{"gr", "graded pieces over a range"}}) {
    auto* sub = app.add_subcommand(name, help);
    add_pair_options(sub, o);
    sub->add_option("--range", o.range, "a..b with rational endpoints");
    sub->add_option("--max-denominator", o.max_den, "largest candidate denominator");
    sub->add_option("--threads", o.threads, "worker threads for the scan")->check(CLI::Range(1u, 64u));
    scans.push_back(sub);
  }
  scans[2]->add_option("--convention", o.convention, "Gr twist convention")
      ->check(CLI::IsMember({"a", "b"}));

  auto* check_cmd = app.add_subcommand("check", "run a named property suite");
  check_cmd->add_option("suite", o.name, "suite name")->required()->check(CLI::IsMember(check_suites()));
  check_cmd->add_option("--seed", o.seed, "random seed");
  check_cmd->add_option("--cases", o.cases, "number of random instances")->check(CLI::Range(1, 100000));

  auto* repro_cmd = app.add_subcommand("repro", "reproduce a worked example");
  repro_cmd->add_option("target", o.name, "example name")->required()->check(CLI::IsMember(repro_targets()));

  for (auto* sub : {tau_cmd, fpt_cmd, scans[0], scans[1], scans[2], check_cmd, repro_cmd})
    add_output_options(sub, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("invalid_input", e.what(), kExitInvalid);
    return kExitInvalid;
  }

  Clock clock;
  try {
    Report rep;
    if (*tau_cmd) rep = cmd_tau(o, clock);
    else if (*fpt_cmd) rep = cmd_fpt(o, clock);
    else if (*scans[0]) rep = cmd_jumps(o, clock);
    else if (*scans[1]) rep = cmd_vfilt(o, clock);
    else if (*scans[2]) rep = cmd_gr(o, clock);
    else if (*check_cmd) rep = cmd_check(o, clock);
    else rep = cmd_repro(o, clock);
    emit(rep, o, clock);
    return rep.exit;
  } catch (const ParseError& e) {
    report_error("invalid_input", e.what(), kExitInvalid, e.column());
    return kExitInvalid;
  } catch (const Error& e) {
    int code = exit_code_for(e.code());
    report_error(error_code_name(e.code()), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    report_error("internal", e.what(), 1);
    return 1;
  }
}
