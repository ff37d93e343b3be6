#include "structnil/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "structnil/classify.hpp"
#include "structnil/oracle.hpp"
#include "structnil/serialize.hpp"
#include "structnil/witnesses.hpp"

namespace structnil {

namespace {

struct Common {
  std::string field = "gf(5)";
  std::string gram;
  std::string flag;
  std::string kind;
  std::string input;
  std::string output;
  uint64_t budget = 2'000'000;
  size_t samples = 256;
  uint64_t seed = 1;
  unsigned threads = 1;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, what + ": " + e.what());
  }
}

/// A value either given inline as JSON or as a file name.
json json_arg(const std::string& arg, const std::string& what) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return parse_json_text(arg, what);
  return parse_json_text(read_text(arg), what);
}

OperatorSpace load_space(const Common& c) {
  if (c.input.empty()) fail(ErrorCode::ParseError, "--input is required");
  json j = json_arg(c.input, "space");
  if (j.contains("space")) j = j.at("space");
  return space_from_json(j);
}

SweepOptions sweep_options(const Common& c) {
  SweepOptions o;
  o.budget = c.budget;
  o.samples = c.samples;
  o.seed = c.seed;
  o.threads = c.threads;
  return o;
}

OracleOptions oracle_options(const Common& c, bool exhaustive) {
  OracleOptions o;
  o.budget = c.budget;
  o.samples = c.samples;
  o.seed = c.seed;
  o.threads = c.threads;
  o.demand_exhaustive = exhaustive;
  return o;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--field", c.field, "field: gf(p), q or gf(p)(t)");
  app->add_option("--gram", c.gram, "Gram shorthand (hyp:k, diag:a,b, symp:k joined by +) or JSON");
  app->add_option("--flag", c.flag, "std:nu or a JSON flag");
  app->add_option("--kind", c.kind, "space kind (nf, ws, wa) or witness kind (sym, alt)");
  app->add_option("--input", c.input, "input JSON file (or - for stdin, or inline JSON)");
  app->add_option("--output", c.output, "write the JSON result to this file");
  app->add_option("--budget", c.budget, "exhaustive enumeration budget");
  app->add_option("--samples", c.samples, "random elements when not exhaustive");
  app->add_option("--seed", c.seed, "seed of every randomized path");
  app->add_option("--threads", c.threads, "worker threads for sweeps");
}

/// Final JSON output plus the exit code it implies.
struct Result {
  json body;
  int code = 0;
  std::string summary;
};

Result verdict_result(const Verdict& v) {
  Result r{v.to_json(), v.status == VerdictStatus::fail ? 2 : 0, v.check + ": " + to_string(v.status)};
  if (!v.note.empty()) r.summary += " (" + v.note + ")";
  return r;
}

// ---------------------------------------------------------------------------
// subcommand bodies

Result cmd_form(const std::string& action, const Common& c, const std::string& x, const std::string& y) {
  FieldSpec f = FieldSpec::parse(c.field);
  if (c.gram.empty()) fail(ErrorCode::ParseError, "--gram is required");
  BilinearForm raw = parse_gram(c.gram, f);
  if (action == "eval") {
    Vector xv = vector_from_json(json_arg(x, "x"), f), yv = vector_from_json(json_arg(y, "y"), f);
    require(xv.size() == raw.dim() && yv.size() == raw.dim(), ErrorCode::DimensionMismatch, "vector length");
    return {{{"value", raw(xv, yv).to_string()}}, 0, "b(x, y) = " + raw(xv, yv).to_string()};
  }
  BilinearForm b = form_validate(raw.gram(), raw.kind());
  if (action == "validate") {
    json j = to_json(b);
    j["nondegenerate"] = b.is_nondegenerate();
    j["dim"] = b.dim();
    return {j, 0, std::string(b.is_nondegenerate() ? "non-degenerate " : "degenerate ") + to_string(b.kind()) + " form of dimension " + std::to_string(b.dim())};
  }
  if (action == "witt") {
    WittDecomposition wd = witt_decompose(b);
    json j = to_json(wd);
    j["change_of_basis"] = to_json(wd.change_of_basis(f, b.dim()));
    return {j, 0, "Witt index " + std::to_string(wd.witt_index) + (wd.complete ? "" : " (search incomplete)")};
  }
  IsotropicResult r = find_isotropic(b);
  json j = {{"vector", r.vector ? to_json(*r.vector) : json(nullptr)}, {"complete", r.complete}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return {j, 0, r.vector ? "isotropic vector found" : "no isotropic vector found"};
}

Result cmd_space_build(const Common& c, size_t n_opt) {
  FieldSpec f = FieldSpec::parse(c.field);
  if (c.kind.empty()) fail(ErrorCode::ParseError, "--kind is required (nf, ws or wa)");
  SpaceKind k = parse_space_kind(c.kind);
  OperatorSpace v;
  Flag flag;
  if (k == SpaceKind::NF) {
    size_t n = n_opt;
    if (!c.gram.empty()) n = parse_gram(c.gram, f).dim();
    if (n == 0 && !c.flag.empty() && c.flag.rfind("std:", 0) == 0) n = std::stoul(c.flag.substr(4));
    if (n == 0) fail(ErrorCode::ParseError, "NF needs --n (or a std:n flag)");
    flag = c.flag.empty() ? standard_flag(f, n, n) : parse_flag(c.flag, f, n);
    v = build_canonical_space(k, std::nullopt, flag);
  } else {
    if (c.gram.empty()) fail(ErrorCode::ParseError, "--gram is required for ws and wa");
    BilinearForm b = parse_gram(c.gram, f);
    flag = c.flag.empty() ? standard_flag(f, b.dim(), witt_index(b)) : parse_flag(c.flag, f, b.dim());
    v = build_canonical_space(k, b, flag);
  }
  json j = to_json(v);
  j["kind"] = to_string(k);
  j["flag"] = to_json(flag);
  return {j, 0, to_string(k) + " space of dimension " + std::to_string(v.dim())};
}

Result cmd_profile(const Common& c) {
  OperatorSpace v = load_space(c);
  GenericProfile prof = generic_profile(v, sweep_options(c));
  return {to_json(prof), 0,
          "generic nilindex " + std::to_string(prof.p) + " (" + to_string(prof.status) + "), dim K = " +
              std::to_string(prof.K.dim())};
}

Result cmd_check(const Common& c, const std::string& which, const std::vector<size_t>& ks, const std::string& x) {
  OperatorSpace v = load_space(c);
  CheckRequest req;
  req.which = parse_check_kind(which);
  if (!ks.empty()) req.ks = ks;
  if (!x.empty()) req.x = vector_from_json(json_arg(x, "x"), v.field());
  return verdict_result(theorem_check(v, req, sweep_options(c)));
}

Result cmd_classify(const Common& c, bool force) {
  OperatorSpace v = load_space(c);
  ClassifyOptions o;
  o.force = force;
  Classification cl = classify(v, o);
  json j = {{"flag", to_json(cl.flag)},
            {"verified", cl.verified},
            {"kind", to_string(cl.kind)},
            {"hypotheses_met", cl.hypotheses_met},
            {"hypothesis", cl.hypothesis}};
  return {j, 0, "recovered a flag of length " + std::to_string(cl.flag.length()) + " for " + to_string(cl.kind)};
}

Result cmd_witness(const Common& c, const std::string& which, size_t n, size_t nu, int epsilon) {
  WitnessRequest req;
  req.which = parse_witness_kind(which);
  req.field = FieldSpec::parse(c.field);
  req.n = n;
  req.nu = nu;
  req.epsilon = epsilon;
  if (!c.kind.empty()) {
    if (c.kind == "sym") req.kind = TensorKind::sym;
    else if (c.kind == "alt") req.kind = TensorKind::alt;
    else fail(ErrorCode::ParseError, "--kind must be sym or alt for witnesses");
  }
  Witness w = build_witness(req);
  json j = {{"witness", to_string(w.which)}, {"space", to_json(w.space)}, {"certificate", w.certificate}};
  if (w.endo) j["endo"] = to_json(*w.endo);
  if (w.form) j["form"] = to_json(*w.form);
  if (w.flag) j["flag"] = to_json(*w.flag);
  if (w.change_of_basis) j["change_of_basis"] = to_json(*w.change_of_basis);
  return {j, 0, to_string(w.which) + ": certificate verified"};
}

Result cmd_oracle(const std::string& action, const Common& c, const std::string& property, bool exhaustive) {
  OperatorSpace v = load_space(c);
  if (action == "maximality") return verdict_result(maximality_probe(v, oracle_options(c, exhaustive)));
  if (property.empty()) fail(ErrorCode::ParseError, "--property is required");
  return verdict_result(exhaustive_verify(v, parse_oracle_property(property), oracle_options(c, exhaustive)));
}

Result cmd_extend(const Common& c, const std::string& target, size_t checks) {
  OperatorSpace v = load_space(c);
  FieldSpec t = target.empty() ? FieldSpec::gf_t(v.field().characteristic()) : FieldSpec::parse(target);
  ExtensionReport r = extend_scalars(v, t, checks, c.seed);
  json j = {{"field", t.to_string()},
            {"dim", r.extended.dim()},
            {"hypotheses_met", r.hypotheses_met},
            {"hypothesis", r.hypothesis},
            {"checks_run", r.checks_run},
            {"all_nilpotent", r.all_nilpotent},
            {"max_nilindex", r.max_nilindex},
            {"distinguished_nilindex", r.distinguished_nilindex},
            {"distinguished", to_json(r.distinguished)}};
  if (r.failure) j["failure"] = to_json(*r.failure);
  return {j, r.all_nilpotent ? 0 : 2,
          "extension to " + t.to_string() + ": " + (r.all_nilpotent ? "all nilpotent" : "non-nilpotent combination")};
}

void emit(const Result& r, const Common& c, std::ostream& out, std::ostream& err) {
  std::string text = r.body.dump(2) + "\n";
  if (!c.output.empty()) {
    std::ofstream f(c.output);
    if (!f) fail(ErrorCode::ParseError, "cannot write '" + c.output + "'");
    f << text;
  } else {
    out << text;
  }
  if (!r.summary.empty()) err << r.summary << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Nilpotent spaces of b-symmetric and b-alternating endomorphisms", "structnil"};
  app.require_subcommand(1);
  Common c;

  std::string x, y, which, property, target;
  std::vector<size_t> ks;
  size_t n = 0, nu = 0, checks = 50;
  int epsilon = 1;
  bool force = false, exhaustive = false;

  auto* form = app.add_subcommand("form", "bilinear form tools");
  form->require_subcommand(1);
  std::vector<CLI::App*> form_actions;
  for (const char* name : {"validate", "witt", "isotropic", "eval"}) {
    auto* s = form->add_subcommand(name);
    add_common(s, c);
    form_actions.push_back(s);
  }
  form_actions[3]->add_option("--x", x, "vector x (JSON)")->required();
  form_actions[3]->add_option("--y", y, "vector y (JSON)")->required();

  auto* space = app.add_subcommand("space", "canonical spaces");
  space->require_subcommand(1);
  auto* build = space->add_subcommand("build", "build NF, WS or WA");
  add_common(build, c);
  build->add_option("--n", n, "ambient dimension for NF");

  auto* profile = app.add_subcommand("profile", "generic nilindex profile");
  add_common(profile, c);

  auto* check = app.add_subcommand("check", "structural checks");
  add_common(check, c);
  check->add_option("--which", which, "trace, cubes, triple, strong_orthogonality, tangent, reducibility, "
                                      "tensor_orthogonality")
      ->required();
  check->add_option("--k", ks, "exponents for the trace check")->delimiter(',');
  check->add_option("--x", x, "vector (JSON)");

  auto* cls = app.add_subcommand("classify", "recover the flag of a maximal space");
  add_common(cls, c);
  cls->add_flag("--force", force, "skip the dimension check");

  auto* wit = app.add_subcommand("witness", "explicit witness families");
  add_common(wit, c);
  wit->add_option("which", which, "n3, six_dim, wa_max or ws_max")->required();
  wit->add_option("--n", n, "ambient dimension");
  wit->add_option("--nu", nu, "Witt index");
  wit->add_option("--epsilon", epsilon, "form sign for six_dim (1 or -1)");

  auto* orc = app.add_subcommand("oracle", "brute-force verification");
  orc->require_subcommand(1);
  auto* verify = orc->add_subcommand("verify");
  auto* maxi = orc->add_subcommand("maximality");
  for (auto* s : {verify, maxi}) {
    add_common(s, c);
    s->add_option("--space", c.input, "space JSON file (same as --input)");
    s->add_flag("--exhaustive", exhaustive, "fail with BudgetExceeded instead of sampling");
  }
  verify->add_option("--property", property, "property to verify");

  auto* ext = app.add_subcommand("extend", "extension of scalars");
  add_common(ext, c);
  ext->add_option("--target", target, "target field (default gf(p)(t))");
  ext->add_option("--checks", checks, "random combinations to test");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    Result r;
    if (form->parsed()) {
      for (auto* s : form_actions)
        if (s->parsed()) r = cmd_form(s->get_name(), c, x, y);
    } else if (build->parsed()) {
      r = cmd_space_build(c, n);
    } else if (profile->parsed()) {
      r = cmd_profile(c);
    } else if (check->parsed()) {
      r = cmd_check(c, which, ks, x);
    } else if (cls->parsed()) {
      r = cmd_classify(c, force);
    } else if (wit->parsed()) {
      r = cmd_witness(c, which, n, nu, epsilon);
    } else if (verify->parsed() || maxi->parsed()) {
      r = cmd_oracle(verify->parsed() ? "verify" : "maximality", c, property, exhaustive);
    } else {
      r = cmd_extend(c, target, checks);
    }
    emit(r, c, out, err);
    return r.code;
  } catch (const Error& e) {
    json j = {{"error", std::string(error_name(e.code()))}, {"message", e.what()}};
    out << j.dump(2) << "\n";
    err << e.what() << "\n";
    return e.code() == ErrorCode::ParseError ? 1 : 2;
  }
}

}  // namespace structnil
