#include "agv/model/library.hpp"

#include "agv/lang/lint.hpp"
#include "agv/lang/parser.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace agv::model {

namespace fs = std::filesystem;
using lang::Direction;
using lang::TypeKind;

const Port* ComponentType::port(const std::string& n) const {
  for (const auto& p : ports)
    if (p.name == n) return &p;
  return nullptr;
}

std::optional<Type> ComponentType::var_type(const std::string& n) const {
  if (const Port* p = port(n)) return p->type;
  for (const auto& eq : eqs)
    for (const auto& v : eq.names)
      if (v == n) return eq.type;
  return std::nullopt;
}

std::vector<std::string> ComponentType::inputs() const {
  std::vector<std::string> out;
  for (const auto& p : ports)
    if (p.dir == Direction::In) out.push_back(p.name);
  return out;
}

std::vector<std::string> ComponentType::outputs() const {
  std::vector<std::string> out;
  for (const auto& p : ports)
    if (p.dir == Direction::Out) out.push_back(p.name);
  return out;
}

const Subcomponent* ComponentImpl::subcomponent(const std::string& n) const {
  for (const auto& s : subcomponents)
    if (s.name == n) return &s;
  return nullptr;
}

const ComponentType* Library::component(const std::string& name) const {
  auto it = components_.find(name);
  return it == components_.end() ? nullptr : &it->second;
}

const ComponentImpl* Library::implementation(const std::string& type_name) const {
  auto it = impls_.find(type_name);
  return it == impls_.end() ? nullptr : &it->second;
}

std::vector<std::string> Library::roots() const {
  std::set<std::string> used;
  for (const auto& [name, impl] : impls_)
    for (const auto& s : impl.subcomponents) used.insert(s.type_name);
  std::vector<std::string> out;
  for (const auto& n : component_order_)
    if (!used.count(n)) out.push_back(n);
  return out;
}

namespace {

void collect_vars(const lang::Expr& e, std::set<std::string>& out) {
  if (e.kind == lang::ExprKind::Id && e.resolved) out.insert(e.resolved->var);
  for (const auto& a : e.args) collect_vars(*a, out);
}

class Loader {
 public:
  explicit Loader(Diagnostics& diags) : diags_(diags) {}

  void run(std::vector<std::unique_ptr<lang::FileAst>>& asts);

  std::shared_ptr<lang::NodeTable> global_nodes = std::make_shared<lang::NodeTable>();
  lang::RecordTable records;
  std::map<std::string, ComponentType> components;
  std::vector<std::string> component_order;
  std::map<std::string, ComponentImpl> impls;

 private:
  void error(const std::string& file, SourceSpan span, std::string msg) { diags_.error(file, span, std::move(msg)); }

  bool known_type(const Type& t, const std::string& file, SourceSpan span) {
    if (t.kind == TypeKind::Record && !records.find(t.record)) {
      error(file, span, "unknown type '" + t.record + "'");
      return false;
    }
    return true;
  }

  void lint(const lang::Expr& e, const std::string& file) {
    lang::lint_pre_guard(e, file, diags_);
    lang::lint_linearity(e, file, diags_);
  }

  void lint_nodes(const std::vector<lang::NodeDef>& nodes, const std::string& file) {
    for (const auto& n : nodes)
      for (const auto& eq : n.body)
        if (eq.rhs) lint(*eq.rhs, file);
  }

  std::shared_ptr<lang::NodeTable> local_nodes(std::vector<lang::NodeDef>& defs, const std::string& file) {
    if (defs.empty()) return global_nodes;
    auto table = std::make_shared<lang::NodeTable>(*global_nodes);
    std::vector<lang::NodeSite> sites;
    std::set<std::string> seen;
    for (auto& n : defs) {
      if (table->find(n.name) && !seen.count(n.name)) {
        error(file, n.span, "node '" + n.name + "' is already defined");
        continue;
      }
      if (!seen.insert(n.name).second) {
        error(file, n.span, "node '" + n.name + "' is already defined");
        continue;
      }
      table->add(&n);
      sites.push_back({&n, file});
    }
    lang::check_nodes(sites, *table, records, diags_);
    lint_nodes(defs, file);
    return table;
  }

  std::optional<Equation> check_eq(const lang::EqDecl& eq, const lang::CheckContext& ctx) {
    Equation out{eq.names, eq.type, nullptr, eq.span};
    if (!eq.def) return out;
    std::vector<Type> targets(eq.names.size(), eq.type);
    out.def = lang::typecheck_definition(eq.def, targets, ctx);
    lint(*eq.def, ctx.file);
    if (!out.def) return std::nullopt;
    return out;
  }

  std::vector<Property> check_props(const std::vector<lang::LabeledExpr>& props, const lang::CheckContext& ctx,
                                    const char* what) {
    std::vector<Property> out;
    std::set<std::string> labels;
    for (const auto& p : props) {
      if (!p.label.empty() && !labels.insert(p.label).second)
        error(ctx.file, p.span, std::string("duplicate ") + what + " label \"" + p.label + "\"");
      lint(*p.expr, ctx.file);
      if (ExprPtr typed = lang::typecheck(p.expr, Type::boolean(), ctx))
        out.push_back(Property{p.label, typed, p.span});
    }
    return out;
  }

  void check_records(const std::string& file, std::vector<lang::RecordDecl>& decls);
  void check_component(lang::ComponentDecl& d, const std::string& file);
  void check_impl(lang::ImplDecl& d, const std::string& file);

  Diagnostics& diags_;
};

void Loader::check_records(const std::string& file, std::vector<lang::RecordDecl>& decls) {
  for (auto& r : decls) {
    if (records.find(r.name)) {
      error(file, r.span, "record '" + r.name + "' is already defined");
      continue;
    }
    std::set<std::string> names;
    for (const auto& f : r.fields)
      if (!names.insert(f.name).second) error(file, r.span, "duplicate field '" + f.name + "' in record '" + r.name + "'");
    records.add(r);
  }
}

void Loader::check_component(lang::ComponentDecl& d, const std::string& file) {
  if (components.count(d.name)) {
    error(file, d.span, "component '" + d.name + "' is already defined");
    return;
  }
  ComponentType ct;
  ct.name = d.name;
  ct.file = file;
  ct.span = d.span;
  ct.nodes = local_nodes(d.nodes, file);

  lang::TypeEnv env;
  env.records = &records;
  env.nodes = ct.nodes.get();
  for (const auto& p : d.ports) {
    known_type(p.type, file, p.span);
    if (!env.vars.emplace(p.name, p.type).second) error(file, p.span, "duplicate port '" + p.name + "'");
    ct.ports.push_back(Port{p.name, p.dir, p.type, p.span});
  }
  for (const auto& eq : d.eqs) {
    known_type(eq.type, file, eq.span);
    for (const auto& n : eq.names)
      if (!env.vars.emplace(n, eq.type).second) error(file, eq.span, "'" + n + "' is already declared");
  }
  lang::CheckContext ctx{env, diags_, file};
  for (const auto& eq : d.eqs)
    if (auto typed = check_eq(eq, ctx)) ct.eqs.push_back(*typed);
  ct.assumptions = check_props(d.assumptions, ctx, "assumption");
  ct.guarantees = check_props(d.guarantees, ctx, "guarantee");

  for (const auto& a : ct.assumptions) {
    std::set<std::string> vars;
    collect_vars(*a.expr, vars);
    for (const auto& v : vars) {
      const Port* p = ct.port(v);
      if (p && p->dir == Direction::Out)
        diags_.warning(file, a.span, "assumption \"" + a.label + "\" reads output '" + v + "'");
    }
  }
  component_order.push_back(ct.name);
  components.emplace(ct.name, std::move(ct));
}

void Loader::check_impl(lang::ImplDecl& d, const std::string& file) {
  auto type_it = components.find(d.type_name);
  if (type_it == components.end()) {
    error(file, d.span, "implementation of unknown component '" + d.type_name + "'");
    return;
  }
  if (impls.count(d.type_name)) {
    error(file, d.span, "component '" + d.type_name + "' already has an implementation");
    return;
  }
  const ComponentType& parent = type_it->second;
  ComponentImpl impl;
  impl.type_name = d.type_name;
  impl.file = file;
  impl.span = d.span;
  impl.nodes = local_nodes(d.nodes, file);

  lang::TypeEnv env;
  env.records = &records;
  env.nodes = impl.nodes.get();
  for (const auto& p : parent.ports) env.vars.emplace(p.name, p.type);
  for (const auto& eq : parent.eqs)
    for (const auto& n : eq.names) env.vars.emplace(n, eq.type);

  std::map<std::string, const ComponentType*> child_types;
  for (const auto& s : d.subcomponents) {
    auto it = components.find(s.type_name);
    if (it == components.end()) {
      error(file, s.span, "unknown component type '" + s.type_name + "'");
      continue;
    }
    if (child_types.count(s.name) || env.vars.count(s.name)) {
      error(file, s.span, "duplicate name '" + s.name + "'");
      continue;
    }
    child_types[s.name] = &it->second;
    impl.subcomponents.push_back(Subcomponent{s.name, s.type_name, s.span});
    env.subcomponents.insert(s.name);
    for (const auto& p : it->second.ports) env.vars.emplace(s.name + "." + p.name, p.type);
    for (const auto& eq : it->second.eqs)
      for (const auto& n : eq.names) env.vars.emplace(s.name + "." + n, eq.type);
  }
  for (const auto& eq : d.eqs) {
    known_type(eq.type, file, eq.span);
    for (const auto& n : eq.names)
      if (!env.vars.emplace(n, eq.type).second || env.subcomponents.count(n))
        error(file, eq.span, "'" + n + "' is already declared");
  }

  // Connections: parent ports by name, child ports as `sub.port`.
  std::set<std::string> driven;
  for (const auto& c : d.connections) {
    struct End {
      std::string name;
      Type type;
      bool ok = false;
      bool can_source = false;
      bool can_target = false;
    };
    auto resolve = [&](const std::vector<std::string>& path) {
      End e;
      std::string text;
      for (std::size_t i = 0; i < path.size(); ++i) text += (i ? "." : "") + path[i];
      e.name = text;
      if (path.size() == 1) {
        const Port* p = parent.port(path[0]);
        if (!p) {
          error(file, c.span, "connection endpoint '" + text + "' is not a port of " + parent.name);
          return e;
        }
        e.type = p->type;
        e.can_source = p->dir == Direction::In;
        e.can_target = p->dir == Direction::Out;
        e.ok = true;
        return e;
      }
      if (path.size() == 2) {
        auto it = child_types.find(path[0]);
        const Port* p = it == child_types.end() ? nullptr : it->second->port(path[1]);
        if (!p) {
          error(file, c.span, "connection endpoint '" + text + "' is not a subcomponent port");
          return e;
        }
        e.type = p->type;
        e.can_source = p->dir == Direction::Out;
        e.can_target = p->dir == Direction::In;
        e.ok = true;
        return e;
      }
      error(file, c.span, "connection endpoint '" + text + "' must be a port or subcomponent port");
      return e;
    };
    End src = resolve(c.source);
    End dst = resolve(c.target);
    if (!src.ok || !dst.ok) continue;
    if (!src.can_source) error(file, c.span, "'" + src.name + "' cannot be a connection source");
    if (!dst.can_target) error(file, c.span, "'" + dst.name + "' cannot be a connection target");
    if (src.type != dst.type) {
      error(file, c.span, "connection type mismatch: " + src.name + " : " + src.type.to_string() + " -> " +
                              dst.name + " : " + dst.type.to_string());
      continue;
    }
    if (!driven.insert(dst.name).second) error(file, c.span, "'" + dst.name + "' has more than one driver");
    impl.connections.push_back(Connection{src.name, dst.name, src.type, c.span});
  }

  lang::CheckContext ctx{env, diags_, file};
  for (const auto& eq : d.eqs)
    if (auto typed = check_eq(eq, ctx)) impl.eqs.push_back(*typed);
  impl.assertions = check_props(d.assertions, ctx, "assertion");
  impl.lemmas = check_props(d.lemmas, ctx, "lemma");
  impls.emplace(impl.type_name, std::move(impl));
}

void Loader::run(std::vector<std::unique_ptr<lang::FileAst>>& asts) {
  for (auto& f : asts) check_records(f->file, f->records);
  for (const auto& [name, r] : records.all()) {
    for (const auto& f : r.fields) known_type(f.type, "", r.span);
  }
  // Record types may not contain themselves.
  std::map<std::string, int> state;
  std::function<bool(const std::string&)> cyclic = [&](const std::string& n) -> bool {
    if (state[n] == 1) return true;
    if (state[n] == 2) return false;
    state[n] = 1;
    if (const auto* r = records.find(n))
      for (const auto& f : r->fields)
        if (f.type.kind == TypeKind::Record && cyclic(f.type.record)) return true;
    state[n] = 2;
    return false;
  };
  for (auto& f : asts)
    for (const auto& r : f->records)
      if (state[r.name] != 2 && cyclic(r.name)) {
        error(f->file, r.span, "record '" + r.name + "' contains itself");
        state.clear();
      }

  std::vector<lang::NodeSite> sites;
  for (auto& f : asts) {
    for (auto& n : f->nodes) {
      if (global_nodes->find(n.name)) {
        error(f->file, n.span, "node '" + n.name + "' is already defined");
        continue;
      }
      global_nodes->add(&n);
      sites.push_back({&n, f->file});
    }
  }
  lang::check_nodes(sites, *global_nodes, records, diags_);
  for (auto& f : asts) lint_nodes(f->nodes, f->file);

  for (auto& f : asts)
    for (auto& c : f->components) check_component(c, f->file);
  for (auto& f : asts)
    for (auto& i : f->impls) check_impl(i, f->file);
}

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::optional<Library> load_library_text(const std::vector<std::pair<std::string, std::string>>& sources,
                                         Diagnostics& diags) {
  Library lib;
  const std::size_t errors_before = diags.error_count();
  for (const auto& [name, text] : sources) {
    lib.files_.push_back(name);
    lib.asts_.push_back(std::make_unique<lang::FileAst>(lang::parse_file(text, name, diags)));
  }
  if (diags.error_count() > errors_before) return std::nullopt;

  Loader loader(diags);
  loader.run(lib.asts_);
  if (diags.error_count() > errors_before) return std::nullopt;
  lib.records_ = std::move(loader.records);
  lib.global_nodes_ = loader.global_nodes;
  lib.components_ = std::move(loader.components);
  lib.component_order_ = std::move(loader.component_order);
  lib.impls_ = std::move(loader.impls);
  return lib;
}

std::optional<Library> load_library(const std::vector<std::string>& paths, Diagnostics& diags) {
  std::vector<std::pair<std::string, std::string>> sources;
  bool ok = true;
  for (const auto& arg : paths) {
    const fs::path p(arg);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(p, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".agv") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      if (files.empty()) {
        diags.error(arg, {}, "directory contains no .agv files");
        ok = false;
      }
      for (const auto& f : files) {
        if (auto text = read_file(f))
          sources.emplace_back(f.string(), std::move(*text));
        else {
          diags.error(f.string(), {}, "cannot read file");
          ok = false;
        }
      }
      continue;
    }
    if (auto text = read_file(p)) {
      sources.emplace_back(arg, std::move(*text));
    } else {
      diags.error(arg, {}, "cannot read file");
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  return load_library_text(sources, diags);
}

std::string resolve_root(const Library& lib, const std::string& root, Diagnostics& diags) {
  if (root.empty()) {
    auto roots = lib.roots();
    if (roots.size() == 1) return roots.front();
    std::string names;
    for (const auto& r : roots) names += (names.empty() ? "" : ", ") + r;
    diags.error("", {}, roots.empty() ? "no root component found" : "several top-level components (" + names +
                                                                         "); choose one with --root");
    return {};
  }
  std::string name = root;
  const bool want_impl = name.size() > 5 && name.compare(name.size() - 5, 5, ".impl") == 0;
  if (want_impl) name.resize(name.size() - 5);
  if (!lib.component(name)) {
    diags.error("", {}, "unknown component '" + name + "'");
    return {};
  }
  if (want_impl && !lib.implementation(name)) {
    diags.error("", {}, "component '" + name + "' has no implementation");
    return {};
  }
  return name;
}

}  // namespace agv::model
