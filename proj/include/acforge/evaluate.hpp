#pragma once

#include <vector>

#include "acforge/core.hpp"

namespace acforge {

inline void check_input_covers(const Circuit& circuit, const CircuitInput& input) {
  const auto& vars = circuit.variables();
  if (input.lambda.size() != vars.size()) {
    throw InputError("circuit input covers " + std::to_string(input.lambda.size()) +
                     " variables, circuit declares " + std::to_string(vars.size()));
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (input.lambda[i].size() != vars[i].size()) {
      throw InputError("circuit input does not cover the indicators of " + vars[i].name);
    }
  }
}

// Bottom-up values of every node. When `maximize` is set, sum nodes take the
// maximum of their children instead.
inline std::vector<Rational> evaluate_nodes(const Circuit& circuit, const CircuitInput& input,
                                            bool maximize = false) {
  check_input_covers(circuit, input);
  std::vector<Rational> value(circuit.size());
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    switch (n.kind) {
      case NodeKind::Indicator:
        value[id] = input.get(n.var, n.value) ? 1 : 0;
        break;
      case NodeKind::Parameter:
        value[id] = n.theta;
        break;
      case NodeKind::Product: {
        static const Rational one = 1;
        Rational p = one;
        for (NodeId c : n.children) {
          if (value[c].is_zero()) {
            p = 0;
            break;
          }
          if (value[c] != one) p *= value[c];
        }
        value[id] = std::move(p);
        break;
      }
      case NodeKind::Sum: {
        Rational s = 0;
        if (maximize) {
          for (NodeId c : n.children) {
            if (value[c] > s) s = value[c];
          }
        } else {
          for (NodeId c : n.children) {
            if (!value[c].is_zero()) s += value[c];
          }
        }
        value[id] = std::move(s);
        break;
      }
    }
  }
  return value;
}

inline Rational evaluate(const Circuit& circuit, const CircuitInput& input) {
  return std::move(evaluate_nodes(circuit, input)[circuit.root()]);
}

// Zero/non-zero pattern of every node; exact because parameters are >= 0.
inline std::vector<bool> nonzero_nodes(const Circuit& circuit, const CircuitInput& input) {
  std::vector<bool> nz(circuit.size(), false);
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    switch (n.kind) {
      case NodeKind::Indicator: nz[id] = input.get(n.var, n.value); break;
      case NodeKind::Parameter: nz[id] = n.theta != 0; break;
      case NodeKind::Product:
        nz[id] = std::all_of(n.children.begin(), n.children.end(),
                             [&](NodeId c) { return nz[c]; });
        break;
      case NodeKind::Sum:
        nz[id] = std::any_of(n.children.begin(), n.children.end(),
                             [&](NodeId c) { return nz[c]; });
        break;
    }
  }
  return nz;
}

}  // namespace acforge
