#include "agv/model/instance.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace agv::model {

namespace {

std::unique_ptr<Instance> build(const Library& lib, const std::string& type_name, std::string name,
                                std::string path, std::vector<std::string>& stack, Diagnostics& diags) {
  if (std::find(stack.begin(), stack.end(), type_name) != stack.end()) {
    std::string chain;
    for (const auto& s : stack) chain += s + " -> ";
    const ComponentType* t = lib.component(type_name);
    diags.error(t ? t->file : "", t ? t->span : SourceSpan{}, "instantiation cycle: " + chain + type_name);
    return nullptr;
  }
  auto inst = std::make_unique<Instance>();
  inst->name = std::move(name);
  inst->path = std::move(path);
  inst->type = lib.component(type_name);
  inst->impl = lib.implementation(type_name);
  if (!inst->impl) return inst;

  stack.push_back(type_name);
  for (const auto& sub : inst->impl->subcomponents) {
    auto child = build(lib, sub.type_name, sub.name, inst->path + "." + sub.name, stack, diags);
    if (!child) {
      stack.pop_back();
      return nullptr;
    }
    inst->children.push_back(std::move(child));
  }
  stack.pop_back();
  inst->order = order_subcomponents(*inst->impl);
  return inst;
}

}  // namespace

std::unique_ptr<Instance> instantiate(const Library& lib, const std::string& root, Diagnostics& diags) {
  if (!lib.component(root)) {
    diags.error("", {}, "unknown component '" + root + "'");
    return nullptr;
  }
  std::vector<std::string> stack;
  return build(lib, root, root, root, stack, diags);
}

std::vector<std::size_t> order_subcomponents(const ComponentImpl& impl) {
  const std::size_t n = impl.subcomponents.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[impl.subcomponents[i].name] = i;

  auto owner = [&](const std::string& endpoint) -> std::optional<std::size_t> {
    const auto dot = endpoint.find('.');
    if (dot == std::string::npos) return std::nullopt;
    auto it = index.find(endpoint.substr(0, dot));
    if (it == index.end()) return std::nullopt;
    return it->second;
  };
  std::vector<std::set<std::size_t>> succ(n);
  for (const auto& c : impl.connections) {
    auto w = owner(c.source);
    auto v = owner(c.target);
    if (w && v && *w != *v) succ[*w].insert(*v);
  }

  // Tarjan's algorithm.
  std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0;
  int ncomp = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    idx[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : succ[v]) {
      if (idx[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], idx[w]);
      }
    }
    if (low[v] == idx[v]) {
      while (true) {
        const std::size_t w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = ncomp;
        if (w == v) break;
      }
      ++ncomp;
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (idx[v] < 0) visit(v);

  // Condensation: members and minimum declaration index per component.
  std::vector<std::vector<std::size_t>> members(ncomp);
  for (std::size_t v = 0; v < n; ++v) members[comp[v]].push_back(v);
  std::vector<std::set<int>> csucc(ncomp);
  std::vector<int> indegree(ncomp, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w : succ[v])
      if (comp[v] != comp[w] && csucc[comp[v]].insert(comp[w]).second) ++indegree[comp[w]];

  // Kahn's algorithm, always taking the ready component with the smallest
  // declaration index.
  auto key = [&](int c) { return members[c].front(); };
  auto cmp = [&](int a, int b) { return key(a) > key(b); };
  std::vector<int> ready;
  for (int c = 0; c < ncomp; ++c)
    if (indegree[c] == 0) ready.push_back(c);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::sort(ready.begin(), ready.end(), cmp);
    const int c = ready.back();
    ready.pop_back();
    for (std::size_t m : members[c]) order.push_back(m);
    for (int d : csucc[c])
      if (--indegree[d] == 0) ready.push_back(d);
  }
  return order;
}

std::vector<const Instance*> flatten(const Instance& root) {
  std::vector<const Instance*> out{&root};
  for (const auto& c : root.children) {
    auto sub = flatten(*c);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::string dump(const Instance& root) {
  std::ostringstream os;
  std::function<void(const Instance&, int)> walk = [&](const Instance& inst, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    os << pad << inst.path << " : " << inst.type->name;
    if (inst.impl) os << " (" << inst.type->name << ".impl)";
    os << '\n';
    for (const auto& p : inst.type->ports)
      os << pad << "  " << (p.dir == lang::Direction::In ? "in " : "out ") << p.name << " : " << p.type.to_string()
         << '\n';
    for (const auto& a : inst.type->assumptions) os << pad << "  assume \"" << a.label << "\"\n";
    for (const auto& g : inst.type->guarantees) os << pad << "  guarantee \"" << g.label << "\"\n";
    if (inst.impl) {
      for (const auto& c : inst.impl->connections) os << pad << "  connect " << c.source << " -> " << c.target << '\n';
      os << pad << "  order";
      for (std::size_t i : inst.order) os << ' ' << inst.impl->subcomponents[i].name;
      os << '\n';
    }
    for (const auto& c : inst.children) walk(*c, depth + 1);
  };
  walk(root, 0);
  return os.str();
}

}  // namespace agv::model
