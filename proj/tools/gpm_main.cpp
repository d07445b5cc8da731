// Command-line front end: check programs, run classical terms, denote types
// and isos in either backend, dump pointwise daggers with a daggerability
// verdict, compare the evaluator against the partial-injection denotation,
// and run the property suites. Every command takes --json for a
// schema-stable machine-readable rendering (see docs/json_schema.md).
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gpm/driver.hpp"
#include "gpm/eval.hpp"
#include "gpm/pretty.hpp"
#include "gpm/props.hpp"
#include "gpm/semantics.hpp"

using nlohmann::json;
using namespace gpm;

namespace {

int env_stage_bound() {
  const char* e = std::getenv("GPM_STAGE_BOUND");
  if (!e || !*e) return 8;
  return std::max(0, std::atoi(e));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CheckError(Errc::ParseError, "cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string shape_str(ShapePtr s) { return show_shape(display_shape(s)); }

json mor_json(const PinjMor& f) {
  json pairs = json::array();
  const auto& se = enumerate_elems(f.src);
  const auto& de = enumerate_elems(f.dst);
  for (const auto& [s, d] : f.pairs)
    pairs.push_back({render_elem(se[(size_t)s]), render_elem(de[(size_t)d])});
  return {{"backend", "pinj"},
          {"src", shape_str(f.src)},
          {"dst", shape_str(f.dst)},
          {"pairs", pairs}};
}

json mor_json(const HilbMor& f) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < f.m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < f.m.cols(); ++c)
      row.push_back({f.m(r, c).real(), f.m(r, c).imag()});
    rows.push_back(row);
  }
  return {{"backend", "hilb"},
          {"src", shape_str(f.src)},
          {"dst", shape_str(f.dst)},
          {"matrix", rows}};
}

json flags_json(const PinjMor& f) {
  return {{"total", Pinj::is_total(f)},
          {"surjective", Pinj::is_surjective(f)},
          {"dagger_mono", Pinj::is_dagger_mono(f)},
          {"dagger_epi", Pinj::is_dagger_epi(f)},
          {"bijective", Pinj::is_dagger_iso(f)}};
}

json flags_json(const HilbMor& f, double tol) {
  return {{"dagger_mono", Hilb::is_dagger_mono(f, tol)},
          {"dagger_epi", Hilb::is_dagger_epi(f, tol)},
          {"unitary", Hilb::is_dagger_iso(f, tol)}};
}

void print_flags(const json& flags) {
  for (auto it = flags.begin(); it != flags.end(); ++it)
    std::cout << "  " << it.key() << ": " << (it.value().get<bool>() ? "yes" : "no")
              << "\n";
}

struct CommonOpts {
  std::string backend = "pinj";
  int stage = -1;       // resolved against GPM_STAGE_BOUND when unset
  int stage_bound = -1; // ditto
  double tol = 1e-9;
  bool as_json = false;
};

int resolve_stage(int flag_value) {
  return flag_value >= 0 ? flag_value : env_stage_bound();
}

// ------------------------------------------------------------------ commands

int cmd_check(const std::string& file, bool as_json) {
  LoadedProgram lp = load_program(slurp(file));
  if (as_json) {
    std::cout << json{{"ok", true}, {"decls", lp.resolved.decls.size()}}.dump(2)
              << "\n";
  } else {
    std::cout << "ok: " << lp.resolved.decls.size() << " declarations\n";
  }
  return 0;
}

int cmd_run(const std::string& file, const std::string& term, int budget,
            bool as_json) {
  LoadedProgram lp = load_program(slurp(file));
  const Decl* d = find_decl(lp.resolved, term);
  if (!d || d->kind != DeclKind::Term)
    throw CheckError(Errc::UnknownName, "no term declaration named '" + term + "'");
  ValuePtr v = eval(d->term, {}, budget, lp.globals);
  if (as_json)
    std::cout << json{{"term", term}, {"budget", budget}, {"value", show_value(v)}}.dump(2)
              << "\n";
  else
    std::cout << show_value(v) << "\n";
  return 0;
}

template <class B>
int denote_type_cmd(const std::string& tysrc, const std::string& filesrc,
                    const CommonOpts& o) {
  // Route the query through a program alias so it is resolved and checked
  // against the file's type declarations exactly like declared code.
  std::string src = filesrc + "\ntype _denote_query = " + tysrc + ";\n";
  LoadedProgram lp = load_program(src);
  const Decl* d = find_decl(lp.resolved, "_denote_query");
  int N = resolve_stage(o.stage);
  Denoter<B> den(lp.globals, o.tol);
  Cochain<B> x = den.type_den(d->type);
  json stages = json::array(), restrs = json::array();
  for (int n = 0; n <= N; ++n)
    stages.push_back({{"stage", n},
                      {"dim", shape_dim(x.shape(n))},
                      {"shape", shape_str(x.shape(n))}});
  for (int n = 0; n < N; ++n)
    restrs.push_back({{"stage", n},
                      {"dagger_epi", mor_is_dagger_epi<B>(x.restr(n), o.tol)}});
  if (o.as_json) {
    std::cout << json{{"backend", B::name},
                      {"type", show_type(d->type)},
                      {"stages", stages},
                      {"restrictions", restrs}}
                     .dump(2)
              << "\n";
    return 0;
  }
  std::cout << "type: " << show_type(d->type) << "\nbackend: " << B::name << "\n";
  for (const auto& s : stages)
    std::cout << "stage " << s["stage"] << ": dim " << s["dim"] << "  shape "
              << s["shape"].get<std::string>() << "\n";
  for (const auto& r : restrs)
    std::cout << "restriction " << r["stage"] << " (stage "
              << (r["stage"].get<int>() + 1) << " -> " << r["stage"]
              << "): dagger epi: " << (r["dagger_epi"].get<bool>() ? "yes" : "no")
              << "\n";
  return 0;
}

template <class B>
int denote_iso_cmd(const std::string& file, const std::string& iso,
                   const CommonOpts& o) {
  LoadedProgram lp = load_program(slurp(file));
  int n = resolve_stage(o.stage);
  Denoter<B> den(lp.globals, o.tol);
  auto m = den.iso_by_name(iso, n);
  json j = mor_json(m);
  j["iso"] = iso;
  j["stage"] = n;
  if constexpr (std::is_same_v<B, Hilb>)
    j["flags"] = flags_json(m, o.tol);
  else
    j["flags"] = flags_json(m);
  if (o.as_json) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  std::cout << "iso " << iso << " at stage " << n << " (" << B::name << "): "
            << shape_str(m.src) << " -> " << shape_str(m.dst) << "\n"
            << B::describe(m) << "\n";
  print_flags(j["flags"]);
  return 0;
}

template <class B>
int cmd_dagger(const std::string& file, const std::string& iso,
               const CommonOpts& o) {
  LoadedProgram lp = load_program(slurp(file));
  int n = resolve_stage(o.stage);
  int N = std::max(n, resolve_stage(o.stage_bound));
  Denoter<B> den(lp.globals, o.tol);
  StagedMor<B> f = den.iso_staged(iso);
  auto dag = B::dagger(f.at(n));
  bool verdict = is_daggerable(f, N, o.tol);
  if (o.as_json) {
    json j = mor_json(dag);
    j["iso"] = iso;
    j["stage"] = n;
    j["daggerable"] = verdict;
    j["daggerable_upto"] = N;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "dagger of " << iso << " at stage " << n << " (" << B::name
              << "):\n"
              << B::describe(dag) << "\ndaggerable up to stage " << N << ": "
              << (verdict ? "yes" : "no") << "\n";
  }
  return verdict ? 0 : 1;
}

int cmd_agree(const std::string& file, const std::string& term,
              const CommonOpts& o) {
  LoadedProgram lp = load_program(slurp(file));
  const Decl* d = find_decl(lp.resolved, term);
  if (!d || d->kind != DeclKind::Term)
    throw CheckError(Errc::UnknownName, "no term declaration named '" + term + "'");
  int n = resolve_stage(o.stage);
  Denoter<Pinj> den(lp.globals);

  PinjMor lhs = den.closed_term(d->term, d->type, n);
  std::optional<std::string> den_elem;
  if (!lhs.pairs.empty())
    den_elem = render_elem(enumerate_elems(lhs.dst)[(size_t)lhs.pairs[0].second]);

  std::optional<std::string> ev_elem;
  std::string ev_note;
  try {
    ValuePtr v = eval(d->term, {}, n, lp.globals);
    PinjMor pt = den.point_mor(v, d->type, n);
    if (!pt.pairs.empty())
      ev_elem = render_elem(enumerate_elems(pt.dst)[(size_t)pt.pairs[0].second]);
    else
      ev_note = "value has no stage-" + std::to_string(n) + " element";
  } catch (const CheckError& e) {
    if (e.diag.code != Errc::StuckMatch && e.diag.code != Errc::Undefined) throw;
    ev_note = e.diag.msg;
  }

  bool ok = den_elem == ev_elem;
  auto show = [](const std::optional<std::string>& x, const std::string& note) {
    return x ? *x : ("undefined" + (note.empty() ? "" : " (" + note + ")"));
  };
  if (o.as_json) {
    json j{{"term", term},
           {"stage", n},
           {"agree", ok},
           {"denotation", den_elem ? json(*den_elem) : json(nullptr)},
           {"evaluator", ev_elem ? json(*ev_elem) : json(nullptr)}};
    std::cout << j.dump(2) << "\n";
  } else if (ok) {
    std::cout << "PASS: " << term << " at stage " << n << ": both sides give "
              << show(den_elem, "") << "\n";
  } else {
    std::cout << "FAIL: " << term << " at stage " << n << ": denotation gives "
              << show(den_elem, "") << ", evaluator gives "
              << show(ev_elem, ev_note) << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_props(const std::string& suite, int stage_bound, uint64_t seed,
              bool as_json) {
  if (!suite.empty()) {
    bool known = false;
    for (const std::string& s : prop_suite_names()) known = known || s == suite;
    if (!known) {
      std::string all;
      for (const std::string& s : prop_suite_names()) all += " " + s;
      throw CheckError(Errc::UnknownName, "no suite named '" + suite + "'; have:" + all);
    }
  }
  PropOptions opt;
  opt.stage_bound = stage_bound;
  opt.seed = seed;
  opt.only = suite;
  std::vector<PropResult> rs = run_prop_suites(opt);
  bool ok = all_passed(rs);
  if (as_json) {
    json suites = json::array();
    for (const auto& r : rs)
      suites.push_back({{"suite", r.suite},
                        {"pass", r.pass},
                        {"fail", r.fail},
                        {"failures", r.failures}});
    std::cout << json{{"stage_bound", stage_bound},
                      {"seed", seed},
                      {"suites", suites},
                      {"ok", ok}}
                     .dump(2)
              << "\n";
    return ok ? 0 : 1;
  }
  for (const auto& r : rs) {
    if (r.fail == 0)
      std::cout << "PASS " << r.suite << ": " << r.pass << " checks\n";
    else {
      std::cout << "FAIL " << r.suite << ": " << r.fail << " of "
                << (r.pass + r.fail) << " checks failed\n";
      for (const auto& w : r.failures) std::cout << "    " << w << "\n";
    }
  }
  std::cout << (ok ? "all suites passed" : "suite failures") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"staged denotations for guarded symmetric pattern matching"};
  app.require_subcommand(1);

  std::string file, term, iso, tysrc, suite;
  CommonOpts o;
  uint64_t seed = 1;
  int budget = -1;

  auto add_backend = [&](CLI::App* c) {
    c->add_option("--backend", o.backend, "pinj or hilb")
        ->check(CLI::IsMember({"pinj", "hilb"}))
        ->default_val("pinj");
  };

  CLI::App* c_check = app.add_subcommand("check", "parse and typecheck a program");
  c_check->add_option("file", file)->required();
  c_check->add_flag("--json", o.as_json);

  CLI::App* c_run = app.add_subcommand("run", "evaluate a classical term");
  c_run->add_option("file", file)->required();
  c_run->add_option("--term", term)->required();
  c_run->add_option("--budget", budget, "forcing depth (default GPM_STAGE_BOUND)");
  c_run->add_flag("--json", o.as_json);

  CLI::App* c_den = app.add_subcommand(
      "denote", "denote a type (all stages up to --stage) or an iso (one stage)");
  c_den->add_option("file", file);
  c_den->add_option("--iso", iso);
  c_den->add_option("--type", tysrc);
  c_den->add_option("--stage", o.stage);
  c_den->add_option("--tol", o.tol);
  add_backend(c_den);
  c_den->add_flag("--json", o.as_json);

  CLI::App* c_dag = app.add_subcommand(
      "dagger", "pointwise dagger of an iso plus a daggerability verdict");
  c_dag->add_option("file", file)->required();
  c_dag->add_option("--iso", iso)->required();
  c_dag->add_option("--stage", o.stage);
  c_dag->add_option("--stage-bound", o.stage_bound,
                    "verdict bound (default GPM_STAGE_BOUND)");
  c_dag->add_option("--tol", o.tol);
  add_backend(c_dag);
  c_dag->add_flag("--json", o.as_json);

  CLI::App* c_agr = app.add_subcommand(
      "agree", "compare evaluator and partial-injection denotation of a term");
  c_agr->add_option("file", file)->required();
  c_agr->add_option("--term", term)->required();
  c_agr->add_option("--stage", o.stage);
  c_agr->add_flag("--json", o.as_json);

  CLI::App* c_pr = app.add_subcommand("props", "run the property suites");
  c_pr->add_option("--suite", suite, "restrict to one suite");
  c_pr->add_option("--stage-bound", o.stage_bound);
  c_pr->add_option("--seed", seed);
  c_pr->add_flag("--json", o.as_json);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_check->parsed()) return cmd_check(file, o.as_json);
    if (c_run->parsed())
      return cmd_run(file, term, budget >= 0 ? budget : env_stage_bound(),
                     o.as_json);
    if (c_den->parsed()) {
      if (tysrc.empty() == iso.empty())
        throw CheckError(Errc::UnknownName,
                         "denote needs exactly one of --type or --iso");
      if (!tysrc.empty()) {
        std::string filesrc = file.empty() ? "" : slurp(file);
        return o.backend == "hilb" ? denote_type_cmd<Hilb>(tysrc, filesrc, o)
                                   : denote_type_cmd<Pinj>(tysrc, filesrc, o);
      }
      if (file.empty())
        throw CheckError(Errc::UnknownName, "denote --iso needs a program file");
      return o.backend == "hilb" ? denote_iso_cmd<Hilb>(file, iso, o)
                                 : denote_iso_cmd<Pinj>(file, iso, o);
    }
    if (c_dag->parsed())
      return o.backend == "hilb" ? cmd_dagger<Hilb>(file, iso, o)
                                 : cmd_dagger<Pinj>(file, iso, o);
    if (c_agr->parsed()) return cmd_agree(file, term, o);
    if (c_pr->parsed())
      return cmd_props(suite, resolve_stage(o.stage_bound), seed, o.as_json);
  } catch (const CheckError& e) {
    if (o.as_json) {
      std::cout << json{{"ok", false},
                        {"error",
                         {{"code", errc_name(e.diag.code)},
                          {"message", e.diag.msg},
                          {"line", e.diag.pos.line},
                          {"col", e.diag.pos.col}}}}
                       .dump(2)
                << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
