#include "agv/cli/cli.hpp"

#include "agv/analyses/report.hpp"
#include "agv/engine/check.hpp"
#include "agv/lang/printer.hpp"
#include "agv/model/instance.hpp"
#include "agv/model/library.hpp"
#include "agv/ts/compile.hpp"
#include "agv/ts/obligation.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace agv::cli {

namespace {

constexpr int kUsage = 2;

struct Options {
  std::vector<std::string> inputs;
  std::string root;
  std::string component;
  std::string format = "human";
  int depth = 5;
  engine::CheckConfig cfg;
};

void add_inputs(CLI::App* sub, Options& o) {
  sub->add_option("inputs", o.inputs, "model files or directories")->required();
}

void add_check_options(CLI::App* sub, Options& o) {
  sub->add_option("--solver", o.cfg.solver, "SMT solver command line")->capture_default_str();
  sub->add_option("--max-k", o.cfg.max_k, "largest induction depth")->capture_default_str();
  sub->add_option("--bmc-depth", o.cfg.bmc_depth, "deepest counterexample search")->capture_default_str();
  sub->add_option("--timeout", o.cfg.timeout_s, "seconds per obligation")->capture_default_str();
  sub->add_option("--jobs", o.cfg.jobs, "obligations checked in parallel (0 = all cores)")->capture_default_str();
  sub->add_option("--format", o.format, "report format")
      ->check(CLI::IsMember({"human", "json"}))
      ->capture_default_str();
}

class Command {
 public:
  Command(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

  int parse() {
    if (!load()) return kUsage;
    for (const auto& f : lib_->asts()) out_ << lang::print(*f);
    return 0;
  }

  int lint() {
    for (const auto& in : o_.inputs)
      if (!std::filesystem::exists(in)) {
        err_ << in << ": error: no such file or directory\n";
        return kUsage;
      }
    Diagnostics d;
    auto lib = model::load_library(o_.inputs, d);
    if (o_.format == "json") {
      analyses::Report r;
      r.command = "lint";
      r.lint = d.items();
      out_ << analyses::render_json(r);
    } else {
      out_ << d;
      out_ << d.error_count() << " error(s), " << d.warning_count() << " warning(s)\n";
    }
    return d.has_errors() ? 1 : 0;
  }

  int verify() {
    if (!config_ok() || !load()) return kUsage;
    Diagnostics d;
    const std::string root = model::resolve_root(*lib_, o_.root, d);
    std::unique_ptr<model::Instance> tree;
    if (!root.empty()) tree = model::instantiate(*lib_, root, d);
    if (tree && !tree->impl) d.error("", {}, "component '" + root + "' has no implementation to verify");
    if (d.has_errors() || !tree) return fail(d);
    analyses::Report r = analyses::verify_all(*lib_, *tree, o_.cfg, d);
    if (d.has_errors()) return fail(d);
    r.lint = warnings_;
    return emit(r);
  }

  int contract_check(bool realizability) {
    if (!config_ok() || !load()) return kUsage;
    if (o_.depth < 0) {
      err_ << "error: --depth must not be negative\n";
      return kUsage;
    }
    Diagnostics d;
    std::vector<const model::ComponentType*> targets;
    if (!o_.component.empty()) {
      if (const auto* c = lib_->component(o_.component))
        targets.push_back(c);
      else
        d.error("", {}, "unknown component '" + o_.component + "'");
    } else {
      for (const auto& n : lib_->component_names()) targets.push_back(lib_->component(n));
    }
    if (d.has_errors()) return fail(d);
    analyses::Report r;
    r.command = realizability ? "realizability" : "consistency";
    r.root = o_.component;
    r.lint = warnings_;
    // Consistency asks for a trace of `depth` steps; realizability searches
    // prefixes up to `depth`.
    for (const auto* t : targets) {
      if (realizability)
        r.realizability.push_back(analyses::check_component_realizability(*lib_, *t, o_.depth, o_.cfg, d));
      else
        r.consistency.push_back(analyses::check_component_consistency(*lib_, *t, std::max(o_.depth, 1), o_.cfg, d));
    }
    if (d.has_errors()) return fail(d);
    return emit(r);
  }

  int dump_ts() {
    std::optional<ts::Layer> layer = layer_for_dump();
    if (!layer) return kUsage;
    out_ << ts::dump(*layer->ts);
    return 0;
  }

  int dump_smt() {
    std::optional<ts::Layer> layer = layer_for_dump();
    if (!layer) return kUsage;
    ts::LayerObligations obs = ts::build_obligations(std::move(*layer));
    std::vector<const ts::Obligation*> all;
    for (const auto& l : obs.lemmas) all.push_back(&l);
    for (const auto& a : obs.assumptions) all.push_back(&a);
    all.push_back(&obs.guarantee);
    for (const auto* ob : all) {
      out_ << "; obligation: " << ob->name << "\n";
      out_ << engine::invariant_script(*obs.layer.ts, ob->property, std::max(o_.depth, 0));
      out_ << "(reset)\n";
    }
    return 0;
  }

 private:
  bool config_ok() {
    if (auto bad = engine::validate(o_.cfg)) {
      err_ << "error: " << *bad << '\n';
      return false;
    }
    return true;
  }

  bool load() {
    Diagnostics d;
    lib_ = model::load_library(o_.inputs, d);
    for (const auto& item : d.items())
      if (item.severity != Severity::Error) warnings_.push_back(item);
    if (!lib_) {
      err_ << d;
      return false;
    }
    if (!d.empty()) err_ << d;
    return true;
  }

  int fail(const Diagnostics& d) {
    err_ << d;
    return kUsage;
  }

  int emit(const analyses::Report& r) {
    out_ << (o_.format == "json" ? analyses::render_json(r) : analyses::render_human(r));
    return analyses::exit_code(r);
  }

  // --component picks a contract; otherwise the root implementation layer.
  std::optional<ts::Layer> layer_for_dump() {
    if (!load()) return std::nullopt;
    Diagnostics d;
    std::optional<ts::Layer> layer;
    if (!o_.component.empty()) {
      if (const auto* c = lib_->component(o_.component))
        layer = ts::compile_component(*lib_, *c, d);
      else
        d.error("", {}, "unknown component '" + o_.component + "'");
    } else {
      const std::string root = model::resolve_root(*lib_, o_.root, d);
      if (!root.empty()) {
        if (const auto* impl = lib_->implementation(root); impl && !impl->subcomponents.empty())
          layer = ts::compile_layer(*lib_, *impl, d);
        else
          layer = ts::compile_component(*lib_, *lib_->component(root), d);
      }
    }
    if (d.has_errors()) {
      err_ << d;
      return std::nullopt;
    }
    return layer;
  }

  const Options& o_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<model::Library> lib_;
  std::vector<Diagnostic> warnings_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  if (const char* s = std::getenv("AGV_SOLVER"); s && *s) o.cfg.solver = s;

  CLI::App app{"Compositional assume-guarantee contract checker", "agv"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", "agv 0.1");

  auto* parse = app.add_subcommand("parse", "parse and print models in canonical form");
  add_inputs(parse, o);
  auto* lint = app.add_subcommand("lint", "report errors and warnings");
  add_inputs(lint, o);
  lint->add_option("--format", o.format)->check(CLI::IsMember({"human", "json"}));
  auto* verify = app.add_subcommand("verify", "prove every layer below the root compositionally");
  add_inputs(verify, o);
  verify->add_option("--root", o.root, "root component (Name or Name.impl)");
  add_check_options(verify, o);
  auto* cons = app.add_subcommand("consistency", "look for a trace satisfying a contract");
  auto* real = app.add_subcommand("realizability", "look for inputs no output can answer");
  for (auto* sub : {cons, real}) {
    add_inputs(sub, o);
    sub->add_option("--component", o.component, "component to check (default: all)");
    sub->add_option("--depth", o.depth, "number of steps")->capture_default_str();
    add_check_options(sub, o);
  }
  auto* dts = app.add_subcommand("dump-ts", "print the lowered transition system");
  auto* dsmt = app.add_subcommand("dump-smt", "print SMT-LIB queries for the root layer");
  for (auto* sub : {dts, dsmt}) {
    add_inputs(sub, o);
    sub->add_option("--root", o.root, "root component");
    sub->add_option("--component", o.component, "single component contract");
  }
  dsmt->add_option("--depth", o.depth, "induction depth of the queries");
  o.depth = 5;

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsage;
  }

  Command cmd(o, out, err);
  if (*parse) return cmd.parse();
  if (*lint) return cmd.lint();
  if (*verify) return cmd.verify();
  if (*cons) return cmd.contract_check(false);
  if (*real) return cmd.contract_check(true);
  if (*dts) return cmd.dump_ts();
  if (*dsmt) {
    if (dsmt->count("--depth") == 0) o.depth = 1;
    return cmd.dump_smt();
  }
  return kUsage;
}

}  // namespace agv::cli
