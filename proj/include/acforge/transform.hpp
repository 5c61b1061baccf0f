#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acforge/analysis.hpp"
#include "acforge/core.hpp"
#include "acforge/evaluate.hpp"
#include "acforge/nnf.hpp"

// Circuit-to-circuit rewrites. Inputs are never modified.
namespace acforge {

// For every sum child missing variables of its parent, multiply the child by
// Σ_i λ_{x_i} of each missing variable; variables with no indicator at all
// multiply the root. One Σλ node per variable is built and shared.
inline Circuit smooth(const Circuit& circuit) {
  const auto& vars_decl = circuit.variables();
  auto vars = vars_of(circuit);
  CircuitBuilder b(vars_decl);
  std::vector<NodeId> map(circuit.size());
  std::map<std::pair<VarIndex, ValueIndex>, NodeId> indicator;
  std::vector<std::optional<NodeId>> sigma(vars_decl.size());
  std::map<std::pair<NodeId, VarSet>, NodeId> padded;

  auto sigma_of = [&](VarIndex v) {
    if (!sigma[v]) {
      std::vector<NodeId> ind;
      for (ValueIndex x = 0; x < vars_decl[v].size(); ++x) {
        auto it = indicator.find({v, x});
        ind.push_back(it != indicator.end() ? it->second : b.indicator(v, x));
      }
      sigma[v] = b.sum(std::move(ind));
    }
    return *sigma[v];
  };
  auto pad = [&](NodeId old_child, const VarSet& missing) {
    if (missing.none()) return map[old_child];
    auto key = std::make_pair(old_child, missing);
    if (auto it = padded.find(key); it != padded.end()) return it->second;
    std::vector<NodeId> factors{map[old_child]};
    for (auto v = missing.find_first(); v != VarSet::npos; v = missing.find_next(v)) {
      factors.push_back(sigma_of(v));
    }
    NodeId p = b.product(std::move(factors));
    padded.emplace(std::move(key), p);
    return p;
  };

  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    if (n.kind == NodeKind::Sum) {
      std::vector<NodeId> children;
      for (NodeId c : n.children) children.push_back(pad(c, vars[id] - vars[c]));
      map[id] = b.sum(std::move(children));
    } else {
      Node copy = n;
      for (auto& c : copy.children) c = map[c];
      map[id] = b.add(std::move(copy));
      if (n.kind == NodeKind::Indicator) indicator.emplace(std::make_pair(n.var, n.value), map[id]);
    }
  }
  VarSet all(vars_decl.size());
  all.set();
  NodeId root = pad(circuit.root(), all - vars[circuit.root()]);
  return std::move(b).build(root);
}

// Sums out `sum_out` by replacing their indicators with the constant 1. The
// result is declared over the remaining variables only. Computes the
// projection's marginals when the input is decomposable, smooth and computes
// the marginals of its factor.
inline Circuit project(const Circuit& circuit, std::span<const std::string> sum_out) {
  const auto& decl = circuit.variables();
  std::vector<bool> drop(decl.size(), false);
  for (const auto& name : sum_out) {
    auto v = circuit.var_index(name);
    if (!v) throw InputError("cannot sum out undeclared variable " + name);
    drop[*v] = true;
  }
  std::vector<Variable> kept;
  std::vector<VarIndex> remap(decl.size(), 0);
  for (VarIndex v = 0; v < decl.size(); ++v) {
    if (drop[v]) continue;
    remap[v] = kept.size();
    kept.push_back(decl[v]);
  }
  std::vector<Node> nodes;
  for (const Node& n : circuit.nodes()) {
    if (n.kind == NodeKind::Indicator) {
      nodes.push_back(drop[n.var] ? Node::parameter(1) : Node::indicator(remap[n.var], n.value));
    } else {
      nodes.push_back(n);
    }
  }
  Circuit out(std::move(kept), std::move(nodes), circuit.root());
  if (!check_smooth(out).holds()) return smooth(out);
  return out;
}

// Product of two circuits under one new root. Computes the product factor at
// complete instantiations; marginals are not guaranteed.
inline Circuit multiply(const Circuit& a, const Circuit& b) {
  auto vars = merge_variables(a.variables(), b.variables());
  std::vector<Node> nodes = a.nodes();
  const NodeId offset = nodes.size();
  for (Node n : b.nodes()) {
    for (auto& c : n.children) c += offset;
    if (n.kind == NodeKind::Indicator) n.var = *find_variable(vars, b.variables()[n.var].name);
    nodes.push_back(std::move(n));
  }
  nodes.push_back(Node::product({a.root(), b.root() + offset}));
  NodeId root = nodes.size() - 1;
  return Circuit(std::move(vars), std::move(nodes), root);
}

// Same nodes as the source with every sum node read as a max node.
class MaximizerCircuit {
 public:
  explicit MaximizerCircuit(Circuit source) : circuit_(std::move(source)) {}

  const Circuit& circuit() const { return circuit_; }

  std::vector<Rational> evaluate_nodes(const CircuitInput& input) const {
    return acforge::evaluate_nodes(circuit_, input, /*maximize=*/true);
  }
  Rational evaluate(const CircuitInput& input) const {
    return std::move(evaluate_nodes(input)[circuit_.root()]);
  }
  Rational evaluate(const Instantiation& y) const {
    return evaluate(input_from_instantiation(circuit_, y));
  }

 private:
  Circuit circuit_;
};

inline MaximizerCircuit to_maximizer(const Circuit& circuit) { return MaximizerCircuit(circuit); }

// And -> *, Or -> +, literal -> indicator, true/false -> 1/0. A negative
// literal X != x becomes the sum of the indicators of X's other values.
inline Circuit nnf_to_ac(const NnfCircuit& nnf, bool smooth_result = false) {
  if (auto w = find_nnf_decomposability_violation(nnf)) {
    throw PreconditionError("nnf is not decomposable: and-node " + std::to_string(w->conjunction) +
                            " children " + std::to_string(w->first) + " and " +
                            std::to_string(w->second) + " share variable " +
                            nnf.variables()[w->shared].name);
  }
  CircuitBuilder b(nnf.variables());
  std::vector<NodeId> map(nnf.size());
  for (NodeId id = 0; id < nnf.size(); ++id) {
    const NnfNode& n = nnf.node(id);
    std::vector<NodeId> children;
    for (NodeId c : n.children) children.push_back(map[c]);
    switch (n.kind) {
      case NnfKind::And: map[id] = b.product(std::move(children)); break;
      case NnfKind::Or: map[id] = b.sum(std::move(children)); break;
      case NnfKind::True: map[id] = b.parameter(1); break;
      case NnfKind::False: map[id] = b.parameter(0); break;
      case NnfKind::Literal:
        if (n.positive) {
          map[id] = b.indicator(n.var, n.value);
        } else {
          std::vector<NodeId> others;
          for (ValueIndex x = 0; x < nnf.variables()[n.var].size(); ++x) {
            if (x != n.value) others.push_back(b.indicator(n.var, x));
          }
          map[id] = others.size() == 1 ? others.front() : b.sum(std::move(others));
        }
        break;
    }
  }
  Circuit out = std::move(b).build(map[nnf.root()]);
  return smooth_result ? smooth(out) : out;
}

// * -> And, + -> Or, indicator -> positive literal, positive parameter ->
// true, zero parameter -> false. For a decomposable circuit the result is true
// at x exactly when the circuit value at x is positive.
inline NnfCircuit ac_to_nnf(const Circuit& circuit) {
  std::vector<NnfNode> nodes;
  for (const Node& n : circuit.nodes()) {
    switch (n.kind) {
      case NodeKind::Product: nodes.push_back(NnfNode::conj(n.children)); break;
      case NodeKind::Sum: nodes.push_back(NnfNode::disj(n.children)); break;
      case NodeKind::Indicator: nodes.push_back(NnfNode::literal(n.var, n.value)); break;
      case NodeKind::Parameter: nodes.push_back(NnfNode::constant(n.theta > 0)); break;
    }
  }
  return NnfCircuit(circuit.variables(), std::move(nodes), circuit.root());
}

// Replaces dead nodes with 0 and folds: a zero child zeroes a product and
// drops out of a sum; single-child sums collapse onto the child.
inline Circuit prune_dead(const Circuit& circuit, std::size_t limit = Limits{}.subcircuits) {
  auto dead_list = find_dead_nodes(circuit, limit);
  std::vector<bool> dead(circuit.size(), false);
  for (NodeId id : dead_list) dead[id] = true;
  if (dead_list.empty()) return circuit;

  CircuitBuilder b(circuit.variables());
  std::vector<std::optional<NodeId>> map(circuit.size());  // nullopt = zero
  for (NodeId id = 0; id < circuit.size(); ++id) {
    if (dead[id]) continue;
    const Node& n = circuit.node(id);
    switch (n.kind) {
      case NodeKind::Indicator:
      case NodeKind::Parameter: map[id] = b.add(n); break;
      case NodeKind::Product: {
        std::vector<NodeId> children;
        bool zero = false;
        for (NodeId c : n.children) {
          if (!map[c]) {
            zero = true;
            break;
          }
          children.push_back(*map[c]);
        }
        if (!zero) map[id] = b.product(std::move(children));
        break;
      }
      case NodeKind::Sum: {
        std::vector<NodeId> children;
        for (NodeId c : n.children) {
          if (map[c]) children.push_back(*map[c]);
        }
        if (children.size() == 1) {
          map[id] = children.front();
        } else if (!children.empty()) {
          map[id] = b.sum(std::move(children));
        }
        break;
      }
    }
  }
  const auto& root = map[circuit.root()];
  NodeId r = root ? *root : b.parameter(0);
  return std::move(b).build(r);
}

}  // namespace acforge
