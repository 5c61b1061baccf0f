#pragma once

#include <optional>
#include <string>
#include <vector>

#include "acforge/core.hpp"

namespace acforge {

enum class NnfKind : std::uint8_t { And, Or, Literal, True, False };

// A literal over value x of X is `X = x` when positive and `X != x` otherwise.
struct NnfNode {
  NnfKind kind = NnfKind::True;
  std::vector<NodeId> children;
  VarIndex var = 0;
  ValueIndex value = 0;
  bool positive = true;

  static NnfNode conj(std::vector<NodeId> c) { return {NnfKind::And, std::move(c), 0, 0, true}; }
  static NnfNode disj(std::vector<NodeId> c) { return {NnfKind::Or, std::move(c), 0, 0, true}; }
  static NnfNode literal(VarIndex v, ValueIndex x, bool positive = true) {
    return {NnfKind::Literal, {}, v, x, positive};
  }
  static NnfNode constant(bool value) { return {value ? NnfKind::True : NnfKind::False, {}, 0, 0, true}; }

  friend bool operator==(const NnfNode&, const NnfNode&) = default;
};

class NnfCircuit {
 public:
  NnfCircuit(std::vector<Variable> vars, std::vector<NnfNode> nodes, NodeId root)
      : vars_(std::move(vars)), nodes_(std::move(nodes)), root_(root) {
    validate_variables(vars_);
    if (nodes_.empty()) throw InputError("nnf has no nodes");
    if (root_ >= nodes_.size()) throw InputError("nnf root id out of range");
    for (NodeId id = 0; id < nodes_.size(); ++id) {
      const NnfNode& n = nodes_[id];
      if (n.kind == NnfKind::And || n.kind == NnfKind::Or) {
        if (n.children.empty()) throw InputError("nnf node " + std::to_string(id) + " has no children");
        for (NodeId c : n.children) {
          if (c >= id) throw InputError("nnf node " + std::to_string(id) + " is not topologically ordered");
        }
      } else if (n.kind == NnfKind::Literal) {
        if (n.var >= vars_.size() || n.value >= vars_[n.var].size()) {
          throw InputError("nnf node " + std::to_string(id) + " is an invalid literal");
        }
      }
    }
  }

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<NnfNode>& nodes() const { return nodes_; }
  const NnfNode& node(NodeId id) const { return nodes_[id]; }
  NodeId root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }

  // Truth value under a complete instantiation.
  bool evaluate(std::span<const ValueIndex> x) const {
    std::vector<bool> v(nodes_.size(), false);
    for (NodeId id = 0; id < nodes_.size(); ++id) {
      const NnfNode& n = nodes_[id];
      switch (n.kind) {
        case NnfKind::True: v[id] = true; break;
        case NnfKind::False: v[id] = false; break;
        case NnfKind::Literal: v[id] = (x[n.var] == n.value) == n.positive; break;
        case NnfKind::And:
          v[id] = std::all_of(n.children.begin(), n.children.end(), [&](NodeId c) { return v[c]; });
          break;
        case NnfKind::Or:
          v[id] = std::any_of(n.children.begin(), n.children.end(), [&](NodeId c) { return v[c]; });
          break;
      }
    }
    return v[root_];
  }

  friend bool operator==(const NnfCircuit&, const NnfCircuit&) = default;

 private:
  std::vector<Variable> vars_;
  std::vector<NnfNode> nodes_;
  NodeId root_;
};

struct NnfDecomposabilityWitness {
  NodeId conjunction;
  NodeId first;
  NodeId second;
  VarIndex shared;
};

inline std::optional<NnfDecomposabilityWitness> find_nnf_decomposability_violation(
    const NnfCircuit& nnf) {
  const std::size_t m = nnf.variables().size();
  std::vector<std::vector<bool>> vars(nnf.size(), std::vector<bool>(m, false));
  for (NodeId id = 0; id < nnf.size(); ++id) {
    const NnfNode& n = nnf.node(id);
    if (n.kind == NnfKind::Literal) vars[id][n.var] = true;
    for (NodeId c : n.children) {
      for (std::size_t v = 0; v < m; ++v) {
        if (vars[c][v]) vars[id][v] = true;
      }
    }
    if (n.kind != NnfKind::And) continue;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        for (std::size_t v = 0; v < m; ++v) {
          if (vars[n.children[i]][v] && vars[n.children[j]][v]) {
            return NnfDecomposabilityWitness{id, n.children[j], n.children[i], v};
          }
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace acforge
