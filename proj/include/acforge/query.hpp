#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "acforge/analysis.hpp"
#include "acforge/core.hpp"
#include "acforge/evaluate.hpp"
#include "acforge/limits.hpp"
#include "acforge/transform.hpp"

namespace acforge {

namespace detail {

inline void require_decomposable_smooth(const Circuit& circuit, const char* what) {
  auto vars = vars_of(circuit);
  if (auto d = check_decomposable(circuit, vars); !d.holds()) {
    const auto& w = *d.witness;
    throw PreconditionError(std::string(what) + " needs a decomposable circuit; product node " +
                            std::to_string(w.product) + " children " + std::to_string(w.first) +
                            " and " + std::to_string(w.second) + " share variable " +
                            circuit.variables()[w.shared].name);
  }
  if (auto s = check_smooth(circuit, vars); !s.holds()) {
    const auto& w = *s.witness;
    std::string where = w.sum ? "child " + std::to_string(*w.child) + " of sum node " +
                                    std::to_string(*w.sum) + " lacks "
                              : std::string("no indicator for ");
    throw PreconditionError(std::string(what) + " needs a smooth circuit; " + where +
                            circuit.variables()[w.missing].name);
  }
}

}  // namespace detail

// Value of f(y) = Σ_z f(y, z), by one evaluation. Exact when the circuit
// computes f and is decomposable and smooth. Partial evidence on a circuit
// that is not smooth is refused since the evaluated value has no meaning
// there; complete instantiations are always answered.
inline Rational marginal(const Circuit& circuit, const Instantiation& y) {
  auto input = input_from_instantiation(circuit, y);
  if (y.size() < circuit.variables().size()) {
    if (auto s = check_smooth(circuit); !s.holds()) {
      throw PreconditionError("marginal of partial evidence needs a smooth circuit; variable " +
                              circuit.variables()[s.witness->missing].name + " is unbalanced");
    }
  }
  return evaluate(circuit, input);
}

struct MpeOptions {
  // Verify determinism semantically before trusting the maximizer.
  bool verify = true;
  std::size_t max_vars = Limits{}.max_vars;
};

struct MpeResult {
  Rational value;
  Instantiation witness;
  std::vector<std::pair<NodeId, NodeId>> trace;  // (max node, chosen child)
  Verdict determinism = Verdict::Skipped;        // as verified before evaluation
};

// Maximizer evaluation plus top-down traceback. At each max node the lowest-id
// child attaining the node's value (and admitting an evidence-compatible
// subcircuit) is taken.
inline MpeResult mpe(const Circuit& circuit, const Instantiation& evidence = {},
                     const MpeOptions& options = {}) {
  detail::require_decomposable_smooth(circuit, "mpe");
  MpeResult result;
  if (options.verify) {
    auto det = check_deterministic(circuit, options.max_vars);
    if (det.verdict == Verdict::No) {
      const auto& w = *det.witness;
      throw PreconditionError("mpe needs a deterministic circuit; sum node " +
                              std::to_string(w.sum) + " has non-zero children " +
                              std::to_string(w.first) + " and " + std::to_string(w.second));
    }
    result.determinism = det.verdict;
  }
  const auto& vars = circuit.variables();
  auto input = input_from_instantiation(circuit, evidence);
  auto value = to_maximizer(circuit).evaluate_nodes(input);
  result.value = value[circuit.root()];

  std::vector<bool> feasible(circuit.size(), false);
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    switch (n.kind) {
      case NodeKind::Indicator: feasible[id] = input.get(n.var, n.value); break;
      case NodeKind::Parameter: feasible[id] = true; break;
      case NodeKind::Product:
        feasible[id] = std::all_of(n.children.begin(), n.children.end(),
                                   [&](NodeId c) { return feasible[c]; });
        break;
      case NodeKind::Sum:
        feasible[id] = std::any_of(n.children.begin(), n.children.end(),
                                   [&](NodeId c) { return feasible[c]; });
        break;
    }
  }

  std::vector<ValueIndex> x = assignment_of(vars, evidence);
  if (feasible[circuit.root()]) {
    std::vector<bool> visited(circuit.size(), false);
    std::vector<NodeId> stack{circuit.root()};
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      if (visited[id]) continue;
      visited[id] = true;
      const Node& n = circuit.node(id);
      if (n.kind == NodeKind::Indicator) {
        x[n.var] = n.value;
      } else if (n.kind == NodeKind::Product) {
        for (NodeId c : n.children) stack.push_back(c);
      } else if (n.kind == NodeKind::Sum) {
        std::optional<NodeId> pick;
        for (NodeId c : n.children) {
          if (feasible[c] && value[c] == value[id] && (!pick || c < *pick)) pick = c;
        }
        result.trace.emplace_back(id, *pick);
        stack.push_back(*pick);
      }
    }
  }
  // No evidence-compatible subcircuit: every compatible x has value 0, so
  // the first compatible one is an argmax.
  for (auto& v : x) {
    if (v == kUnassigned) v = 0;
  }
  std::sort(result.trace.begin(), result.trace.end());
  result.witness = instantiation_of(vars, x);
  return result;
}

struct MapResult {
  Rational value;
  Instantiation witness;
};

// argmax_y of marginal(y) over instantiations y of `over`, one evaluation per
// candidate; ties go to the first y in row-major order (circuit declaration
// order of the variables).
inline MapResult map_bruteforce(const Circuit& circuit, std::span<const std::string> over,
                                std::size_t limit = Limits{}.subcircuits) {
  detail::require_decomposable_smooth(circuit, "map");
  std::vector<VarIndex> pos;
  std::vector<Variable> over_vars;
  const auto& vars = circuit.variables();
  for (VarIndex v = 0; v < vars.size(); ++v) {
    if (std::find(over.begin(), over.end(), vars[v].name) != over.end()) {
      pos.push_back(v);
      over_vars.push_back(vars[v]);
    }
  }
  for (const auto& name : over) {
    if (!circuit.var_index(name)) throw InputError("unknown variable " + name);
  }
  auto count = instantiation_count(over_vars);
  if (!count || *count > limit) {
    throw LimitError("map over " + std::to_string(over_vars.size()) +
                     " variables exceeds the candidate limit " + std::to_string(limit));
  }
  std::optional<MapResult> best;
  std::vector<ValueIndex> full(vars.size(), kUnassigned);
  for_each_instantiation(over_vars, [&](const std::vector<ValueIndex>& y) {
    for (std::size_t i = 0; i < pos.size(); ++i) full[pos[i]] = y[i];
    Rational v = evaluate(circuit, CircuitInput::of_values(vars, full));
    if (!best || v > best->value) best = MapResult{std::move(v), instantiation_of(over_vars, y)};
  });
  return std::move(*best);
}

// Is there a complete x with AC(x) > k? Brute force.
inline bool decide_mpe(const Circuit& circuit, const Rational& k,
                       std::size_t max_vars = Limits{}.max_vars) {
  detail::require_decomposable_smooth(circuit, "decide_mpe");
  require_tabulable(circuit.variables(), max_vars);
  bool found = false;
  for_each_instantiation(circuit.variables(), [&](const std::vector<ValueIndex>& x) {
    if (!found && evaluate(circuit, CircuitInput::of_values(circuit.variables(), x)) > k) {
      found = true;
    }
  });
  return found;
}

}  // namespace acforge
