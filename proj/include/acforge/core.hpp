#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acforge/error.hpp"
#include "acforge/rational.hpp"

namespace acforge {

using VarIndex = std::size_t;
using ValueIndex = std::size_t;
using NodeId = std::size_t;

inline constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();

struct Variable {
  std::string name;
  std::vector<std::string> values;

  std::size_t size() const { return values.size(); }

  std::optional<ValueIndex> find_value(std::string_view label) const {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] == label) return i;
    }
    return std::nullopt;
  }

  ValueIndex value_index(std::string_view label) const {
    if (auto v = find_value(label)) return *v;
    throw InputError("value '" + std::string(label) + "' not in domain of " + name);
  }

  friend bool operator==(const Variable&, const Variable&) = default;
};

inline void validate_variable(const Variable& v) {
  if (v.name.empty()) throw InputError("empty variable name");
  if (v.values.size() < 2) {
    throw InputError("variable " + v.name + " needs at least two values");
  }
  std::set<std::string_view> seen;
  for (const auto& label : v.values) {
    if (!seen.insert(label).second) {
      throw InputError("duplicate value '" + label + "' in variable " + v.name);
    }
  }
}

inline void validate_variables(std::span<const Variable> vars) {
  std::set<std::string_view> names;
  for (const auto& v : vars) {
    validate_variable(v);
    if (!names.insert(v.name).second) {
      throw InputError("duplicate variable " + v.name);
    }
  }
}

inline std::optional<VarIndex> find_variable(std::span<const Variable> vars,
                                             std::string_view name) {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].name == name) return i;
  }
  return std::nullopt;
}

// Union of two variable lists, first-appearance order. Same name with a
// different domain is rejected.
inline std::vector<Variable> merge_variables(std::span<const Variable> a,
                                             std::span<const Variable> b) {
  std::vector<Variable> out(a.begin(), a.end());
  for (const auto& v : b) {
    if (auto i = find_variable(out, v.name)) {
      if (out[*i].values != v.values) {
        throw InputError("inconsistent declarations of variable " + v.name);
      }
    } else {
      out.push_back(v);
    }
  }
  return out;
}

// A partial assignment from variable names to value labels.
class Instantiation {
 public:
  using Map = std::map<std::string, std::string, std::less<>>;

  Instantiation() = default;
  Instantiation(std::initializer_list<std::pair<const std::string, std::string>> init)
      : values_(init) {}

  void set(std::string var, std::string value) { values_[std::move(var)] = std::move(value); }
  void erase(std::string_view var) {
    if (auto it = values_.find(var); it != values_.end()) values_.erase(it);
  }

  const std::string* find(std::string_view var) const {
    auto it = values_.find(var);
    return it == values_.end() ? nullptr : &it->second;
  }
  bool contains(std::string_view var) const { return values_.find(var) != values_.end(); }

  // Value x of X is compatible iff X is unassigned or assigned x.
  bool compatible(std::string_view var, std::string_view value) const {
    const std::string* v = find(var);
    return v == nullptr || *v == value;
  }

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  Map::const_iterator begin() const { return values_.begin(); }
  Map::const_iterator end() const { return values_.end(); }

  friend bool operator==(const Instantiation&, const Instantiation&) = default;
  friend auto operator<=>(const Instantiation& a, const Instantiation& b) {
    return a.values_ <=> b.values_;
  }

 private:
  Map values_;
};

// Value index per variable of `vars` (kUnassigned when y leaves it free).
// Assignments to variables outside `vars` are rejected unless allow_extra.
inline std::vector<ValueIndex> assignment_of(std::span<const Variable> vars,
                                             const Instantiation& y,
                                             bool allow_extra = false) {
  std::vector<ValueIndex> idx(vars.size(), kUnassigned);
  for (const auto& [name, value] : y) {
    auto vi = find_variable(vars, name);
    if (!vi) {
      if (allow_extra) continue;
      throw InputError("unknown variable " + name);
    }
    idx[*vi] = vars[*vi].value_index(value);
  }
  return idx;
}

inline Instantiation instantiation_of(std::span<const Variable> vars,
                                      std::span<const ValueIndex> idx) {
  Instantiation out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (idx[i] != kUnassigned) out.set(vars[i].name, vars[i].values[idx[i]]);
  }
  return out;
}

// Number of complete instantiations, or nullopt past SIZE_MAX.
inline std::optional<std::size_t> instantiation_count(std::span<const Variable> vars) {
  std::size_t n = 1;
  for (const auto& v : vars) {
    if (n > std::numeric_limits<std::size_t>::max() / v.size()) return std::nullopt;
    n *= v.size();
  }
  return n;
}

// Visits every complete instantiation in row-major order (last variable
// fastest). fn receives the per-variable value indices.
template <class Fn>
void for_each_instantiation(std::span<const Variable> vars, Fn&& fn) {
  std::vector<ValueIndex> idx(vars.size(), 0);
  while (true) {
    fn(std::as_const(idx));
    std::size_t i = vars.size();
    while (i > 0) {
      --i;
      if (++idx[i] < vars[i].size()) break;
      idx[i] = 0;
      if (i == 0) return;
    }
    if (vars.empty()) return;
  }
}

class Factor {
 public:
  Factor(std::vector<Variable> scope, std::vector<Rational> table)
      : scope_(std::move(scope)), table_(std::move(table)) {
    validate_variables(scope_);
    auto n = instantiation_count(scope_);
    if (!n || *n != table_.size()) {
      throw InputError("factor table has " + std::to_string(table_.size()) +
                       " entries, scope needs " + (n ? std::to_string(*n) : "too many"));
    }
    for (const auto& t : table_) {
      if (t.sign() < 0) throw InputError("negative factor entry " + format_rational(t));
    }
  }

  static Factor constant(std::vector<Variable> scope, const Rational& c) {
    auto n = instantiation_count(scope);
    if (!n) throw LimitError("constant factor too large");
    return Factor(std::move(scope), std::vector<Rational>(*n, c));
  }

  const std::vector<Variable>& scope() const { return scope_; }
  const std::vector<Rational>& table() const { return table_; }

  // Row-major offset of a complete assignment over the scope.
  std::size_t offset(std::span<const ValueIndex> idx) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < scope_.size(); ++i) off = off * scope_[i].size() + idx[i];
    return off;
  }
  const Rational& at(std::span<const ValueIndex> idx) const { return table_[offset(idx)]; }

  friend bool operator==(const Factor&, const Factor&) = default;

 private:
  std::vector<Variable> scope_;
  std::vector<Rational> table_;
};

// Extra assignments outside the scope are ignored.
inline const Rational& factor_value(const Factor& f, const Instantiation& x) {
  auto idx = assignment_of(f.scope(), x, /*allow_extra=*/true);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] == kUnassigned) {
      throw InputError("instantiation does not assign " + f.scope()[i].name);
    }
  }
  return f.at(idx);
}

inline Factor factor_product(std::span<const Factor> fs) {
  if (fs.empty()) throw InputError("factor product of an empty list");
  std::vector<Variable> scope;
  for (const auto& f : fs) scope = merge_variables(scope, f.scope());
  // Position of each input factor's variables inside the joint scope.
  std::vector<std::vector<std::size_t>> where;
  for (const auto& f : fs) {
    auto& w = where.emplace_back();
    for (const auto& v : f.scope()) w.push_back(*find_variable(scope, v.name));
  }
  if (!instantiation_count(scope)) throw LimitError("factor product too large");
  std::vector<Rational> table;
  std::vector<ValueIndex> local;
  for_each_instantiation(scope, [&](const std::vector<ValueIndex>& idx) {
    Rational p = 1;
    for (std::size_t k = 0; k < fs.size(); ++k) {
      local.resize(where[k].size());
      for (std::size_t j = 0; j < where[k].size(); ++j) local[j] = idx[where[k][j]];
      p *= fs[k].at(local);
    }
    table.push_back(std::move(p));
  });
  return Factor(std::move(scope), std::move(table));
}

enum class NodeKind : std::uint8_t { Sum, Product, Indicator, Parameter };

struct Node {
  NodeKind kind = NodeKind::Parameter;
  std::vector<NodeId> children;
  VarIndex var = 0;      // Indicator only
  ValueIndex value = 0;  // Indicator only
  Rational theta;        // Parameter only

  static Node sum(std::vector<NodeId> c) { return {NodeKind::Sum, std::move(c), 0, 0, {}}; }
  static Node product(std::vector<NodeId> c) {
    return {NodeKind::Product, std::move(c), 0, 0, {}};
  }
  static Node indicator(VarIndex v, ValueIndex x) { return {NodeKind::Indicator, {}, v, x, {}}; }
  static Node parameter(Rational t) { return {NodeKind::Parameter, {}, 0, 0, std::move(t)}; }

  bool is_internal() const { return kind == NodeKind::Sum || kind == NodeKind::Product; }

  friend bool operator==(const Node&, const Node&) = default;
};

// Rooted DAG over declared variables. Nodes are stored in topological order:
// every child id is smaller than its parent's id.
class Circuit {
 public:
  Circuit(std::vector<Variable> vars, std::vector<Node> nodes, NodeId root)
      : vars_(std::move(vars)), nodes_(std::move(nodes)), root_(root) {
    validate_variables(vars_);
    if (nodes_.empty()) throw InputError("circuit has no nodes");
    if (root_ >= nodes_.size()) throw InputError("root id out of range");
    for (NodeId id = 0; id < nodes_.size(); ++id) {
      const Node& n = nodes_[id];
      switch (n.kind) {
        case NodeKind::Sum:
        case NodeKind::Product:
          if (n.children.empty()) {
            throw InputError("node " + std::to_string(id) + " has no children");
          }
          for (NodeId c : n.children) {
            if (c >= id) {
              throw InputError("node " + std::to_string(id) + " references child " +
                               std::to_string(c) + " that does not precede it");
            }
          }
          break;
        case NodeKind::Indicator:
          if (n.var >= vars_.size() || n.value >= vars_[n.var].size()) {
            throw InputError("node " + std::to_string(id) + " is an invalid indicator");
          }
          break;
        case NodeKind::Parameter:
          if (n.theta < 0) {
            throw InputError("node " + std::to_string(id) + " has a negative parameter");
          }
          break;
      }
    }
  }

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(NodeId id) const { return nodes_[id]; }
  NodeId root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }

  std::optional<VarIndex> var_index(std::string_view name) const {
    return find_variable(vars_, name);
  }

  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& n : nodes_) e += n.children.size();
    return e;
  }

  // Nodes reachable from the root.
  std::vector<bool> reachable() const { return reachable_from(nodes_, root_); }

  static std::vector<bool> reachable_from(const std::vector<Node>& nodes, NodeId root) {
    std::vector<bool> seen(nodes.size(), false);
    if (root >= nodes.size()) return seen;
    seen[root] = true;
    for (NodeId id = root + 1; id-- > 0;) {
      if (!seen[id]) continue;
      for (NodeId c : nodes[id].children) {
        if (c < nodes.size()) seen[c] = true;
      }
    }
    return seen;
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::vector<Variable> vars_;
  std::vector<Node> nodes_;
  NodeId root_;
};

// Appends nodes in creation order; build() keeps only the part reachable from
// the chosen root and renumbers densely.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(std::vector<Variable> vars) : vars_(std::move(vars)) {}

  const std::vector<Variable>& variables() const { return vars_; }
  const Node& node(NodeId id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  NodeId add(Node n) {
    nodes_.push_back(std::move(n));
    return nodes_.size() - 1;
  }
  NodeId indicator(VarIndex v, ValueIndex x) { return add(Node::indicator(v, x)); }
  NodeId parameter(Rational t) { return add(Node::parameter(std::move(t))); }
  NodeId sum(std::vector<NodeId> c) { return add(Node::sum(std::move(c))); }
  NodeId product(std::vector<NodeId> c) { return add(Node::product(std::move(c))); }

  Circuit build(NodeId root) && {
    auto keep = Circuit::reachable_from(nodes_, root);
    std::vector<NodeId> remap(nodes_.size(), 0);
    std::vector<Node> out;
    for (NodeId id = 0; id < nodes_.size(); ++id) {
      if (!keep[id]) continue;
      remap[id] = out.size();
      Node n = std::move(nodes_[id]);
      for (auto& c : n.children) c = remap[c];
      out.push_back(std::move(n));
    }
    return Circuit(std::move(vars_), std::move(out), remap[root]);
  }

 private:
  std::vector<Variable> vars_;
  std::vector<Node> nodes_;
};

// Indicator assignment Λ: lambda[var][value] ∈ {0,1} for every declared
// indicator, whether or not it occurs in the circuit.
struct CircuitInput {
  std::vector<std::vector<std::uint8_t>> lambda;

  static CircuitInput all_ones(std::span<const Variable> vars) {
    CircuitInput in;
    for (const auto& v : vars) in.lambda.emplace_back(v.size(), 1);
    return in;
  }

  // Input of a complete instantiation: exactly one indicator per variable.
  static CircuitInput of_values(std::span<const Variable> vars,
                                std::span<const ValueIndex> idx) {
    CircuitInput in;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      auto& row = in.lambda.emplace_back(vars[i].size(), 0);
      if (idx[i] == kUnassigned) {
        std::fill(row.begin(), row.end(), 1);
      } else {
        row[idx[i]] = 1;
      }
    }
    return in;
  }

  bool get(VarIndex v, ValueIndex x) const { return lambda[v][x] != 0; }
  void set(VarIndex v, ValueIndex x, bool on) { lambda[v][x] = on ? 1 : 0; }

  friend bool operator==(const CircuitInput&, const CircuitInput&) = default;
};

inline CircuitInput input_from_instantiation(std::span<const Variable> vars,
                                             const Instantiation& y) {
  return CircuitInput::of_values(vars, assignment_of(vars, y));
}

inline CircuitInput input_from_instantiation(const Circuit& circuit, const Instantiation& y) {
  return input_from_instantiation(circuit.variables(), y);
}

// Complete instantiations x of `vars` with λ_x = 1 for every value x sets.
inline std::vector<Instantiation> compatible_instantiations(const CircuitInput& input,
                                                            std::span<const Variable> vars) {
  if (input.lambda.size() != vars.size()) {
    throw InputError("circuit input does not match the variable list");
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (input.lambda[i].size() != vars[i].size()) {
      throw InputError("circuit input does not cover variable " + vars[i].name);
    }
  }
  std::vector<Instantiation> out;
  for_each_instantiation(vars, [&](const std::vector<ValueIndex>& idx) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (!input.get(i, idx[i])) return;
    }
    out.push_back(instantiation_of(vars, idx));
  });
  return out;
}

}  // namespace acforge
