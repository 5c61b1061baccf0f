#pragma once

#include <boost/dynamic_bitset.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "acforge/core.hpp"
#include "acforge/evaluate.hpp"
#include "acforge/limits.hpp"
#include "acforge/oracle.hpp"

namespace acforge {

using VarSet = boost::dynamic_bitset<>;

// vars(n): variables with some indicator at or under n.
inline std::vector<VarSet> vars_of(const Circuit& circuit) {
  const std::size_t m = circuit.variables().size();
  std::vector<VarSet> vars(circuit.size(), VarSet(m));
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    if (n.kind == NodeKind::Indicator) {
      vars[id].set(n.var);
    } else {
      for (NodeId c : n.children) vars[id] |= vars[c];
    }
  }
  return vars;
}

// ---------------------------------------------------------------------------
// Property checks. A negative answer always carries a witness that can be
// verified in isolation.

enum class Verdict { Yes, No, Skipped };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Skipped: return "skipped";
  }
  return "?";
}

struct DecomposabilityWitness {
  NodeId product;
  NodeId first;
  NodeId second;
  VarIndex shared;
};

struct DecomposabilityCheck {
  std::optional<DecomposabilityWitness> witness;
  bool holds() const { return !witness; }
};

// Either a sum child lacking a variable of its parent, or (sum == nullopt) a
// declared variable with no indicator anywhere in the circuit.
struct SmoothnessWitness {
  std::optional<NodeId> sum;
  std::optional<NodeId> child;
  VarIndex missing;
};

struct SmoothnessCheck {
  std::optional<SmoothnessWitness> witness;
  bool holds() const { return !witness; }
};

struct DeterminismWitness {
  Instantiation at;
  NodeId sum;
  NodeId first;
  NodeId second;
  Rational first_value;
  Rational second_value;
};

struct DeterminismCheck {
  Verdict verdict = Verdict::Yes;
  std::optional<DeterminismWitness> witness;
  bool holds() const { return verdict == Verdict::Yes; }
};

inline DecomposabilityCheck check_decomposable(const Circuit& circuit,
                                               const std::vector<VarSet>& vars) {
  const std::size_t m = circuit.variables().size();
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    if (n.kind != NodeKind::Product) continue;
    VarSet seen(m);
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      const VarSet& cv = vars[n.children[i]];
      if (!cv.intersects(seen)) {
        seen |= cv;
        continue;
      }
      for (std::size_t j = 0; j < i; ++j) {
        VarSet common = cv & vars[n.children[j]];
        if (common.any()) {
          return {DecomposabilityWitness{id, n.children[j], n.children[i], common.find_first()}};
        }
      }
    }
  }
  return {};
}

inline DecomposabilityCheck check_decomposable(const Circuit& circuit) {
  return check_decomposable(circuit, vars_of(circuit));
}

inline SmoothnessCheck check_smooth(const Circuit& circuit, const std::vector<VarSet>& vars) {
  const VarSet& top = vars[circuit.root()];
  for (VarIndex v = 0; v < circuit.variables().size(); ++v) {
    if (!top.test(v)) return {SmoothnessWitness{std::nullopt, std::nullopt, v}};
  }
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    if (n.kind != NodeKind::Sum) continue;
    for (NodeId c : n.children) {
      if (vars[c] != vars[id]) {
        VarSet missing = vars[id] - vars[c];
        return {SmoothnessWitness{id, c, missing.find_first()}};
      }
    }
  }
  return {};
}

inline SmoothnessCheck check_smooth(const Circuit& circuit) {
  return check_smooth(circuit, vars_of(circuit));
}

// Semantic determinism: under every complete instantiation each sum node has
// at most one non-zero child. Skipped when the circuit declares more than
// max_vars variables.
inline DeterminismCheck check_deterministic(const Circuit& circuit,
                                            std::size_t max_vars = Limits{}.max_vars) {
  const auto& vars = circuit.variables();
  if (vars.size() > max_vars) return {Verdict::Skipped, std::nullopt};
  DeterminismCheck result;
  for_each_instantiation(vars, [&](const std::vector<ValueIndex>& idx) {
    if (result.witness) return;
    auto input = CircuitInput::of_values(vars, idx);
    auto nz = nonzero_nodes(circuit, input);
    for (NodeId id = 0; id < circuit.size(); ++id) {
      const Node& n = circuit.node(id);
      if (n.kind != NodeKind::Sum || !nz[id]) continue;
      std::optional<NodeId> first;
      for (NodeId c : n.children) {
        if (!nz[c]) continue;
        if (!first) {
          first = c;
          continue;
        }
        auto value = evaluate_nodes(circuit, input);
        result.verdict = Verdict::No;
        result.witness = DeterminismWitness{instantiation_of(vars, idx), id, *first, c,
                                            value[*first], value[c]};
        return;
      }
    }
  });
  return result;
}

struct PropertyReport {
  DecomposabilityCheck decomposable;
  SmoothnessCheck smooth;
  DeterminismCheck deterministic;
};

inline PropertyReport check_properties(const Circuit& circuit, const Limits& limits = {}) {
  auto vars = vars_of(circuit);
  return {check_decomposable(circuit, vars), check_smooth(circuit, vars),
          check_deterministic(circuit, limits.max_vars)};
}

inline std::string render_summary(const PropertyReport& r) {
  std::string out = "decomposable=";
  out += r.decomposable.holds() ? "yes" : "no";
  out += " smooth=";
  out += r.smooth.holds() ? "yes" : "no";
  out += " deterministic=";
  out += verdict_name(r.deterministic.verdict);
  return out;
}

namespace detail {

inline std::string format_values(const Circuit& c, const Instantiation& x) {
  std::string out;
  for (const auto& v : c.variables()) {
    if (const std::string* value = x.find(v.name)) {
      if (!out.empty()) out += ',';
      out += v.name + "=" + *value;
    }
  }
  return out;
}

}  // namespace detail

// One `property=<name> result=<yes|no|skipped> witness=<...>` line per check.
inline std::string render_lines(const Circuit& c, const PropertyReport& r) {
  std::ostringstream os;
  os << "property=decomposable result=" << (r.decomposable.holds() ? "yes" : "no") << " witness=";
  if (const auto& w = r.decomposable.witness) {
    os << "node:" << w->product << ",children:" << w->first << ":" << w->second
       << ",var:" << c.variables()[w->shared].name;
  } else {
    os << "-";
  }
  os << "\nproperty=smooth result=" << (r.smooth.holds() ? "yes" : "no") << " witness=";
  if (const auto& w = r.smooth.witness) {
    if (w->sum) {
      os << "node:" << *w->sum << ",child:" << *w->child << ",missing:"
         << c.variables()[w->missing].name;
    } else {
      os << "no-indicator:" << c.variables()[w->missing].name;
    }
  } else {
    os << "-";
  }
  os << "\nproperty=deterministic result=" << verdict_name(r.deterministic.verdict)
     << " witness=";
  if (const auto& w = r.deterministic.witness) {
    os << "at:" << detail::format_values(c, w->at) << ";node:" << w->sum
       << ";children:" << w->first << "=" << format_rational(w->first_value) << ":"
       << w->second << "=" << format_rational(w->second_value);
  } else {
    os << "-";
  }
  os << "\n";
  return os.str();
}

inline std::string render_text(const Circuit& c, const PropertyReport& r) {
  std::ostringstream os;
  if (const auto& w = r.decomposable.witness) {
    os << "not decomposable: product node " << w->product << " has children " << w->first
       << " and " << w->second << " sharing variable " << c.variables()[w->shared].name << "\n";
  } else {
    os << "decomposable\n";
  }
  if (const auto& w = r.smooth.witness) {
    if (w->sum) {
      os << "not smooth: child " << *w->child << " of sum node " << *w->sum
         << " does not mention variable " << c.variables()[w->missing].name << "\n";
    } else {
      os << "not smooth: variable " << c.variables()[w->missing].name
         << " has no indicator in the circuit\n";
    }
  } else {
    os << "smooth\n";
  }
  switch (r.deterministic.verdict) {
    case Verdict::Yes: os << "deterministic\n"; break;
    case Verdict::Skipped: os << "determinism not checked (too many variables)\n"; break;
    case Verdict::No: {
      const auto& w = *r.deterministic.witness;
      os << "not deterministic: at " << detail::format_values(c, w.at) << " sum node " << w.sum
         << " has non-zero children " << w.first << " (" << format_rational(w.first_value)
         << ") and " << w.second << " (" << format_rational(w.second_value) << ")\n";
      break;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Complete subcircuits.
//
// A subcircuit is built top-down by picking one child at each visited sum node
// and every child at each visited product node. Subcircuits are counted by
// unfolding: a product contributes the cross product of its children's sets
// and a sum the disjoint union, so a sum node reached along two paths may pick
// a different child on each. `chosen` therefore lists (sum, child) picks as a
// sorted multiset, and the coefficient multiplies parameters with
// multiplicity. For decomposable circuits in which every shared sum node
// mentions a variable the two views coincide.

struct Subcircuit {
  std::vector<std::pair<NodeId, NodeId>> chosen;
  std::vector<std::pair<VarIndex, ValueIndex>> term;  // sorted, unique
  Rational coefficient;
  std::vector<NodeId> nodes;  // sorted, unique

  bool term_compatible(const CircuitInput& input) const {
    for (const auto& [v, x] : term) {
      if (!input.get(v, x)) return false;
    }
    return true;
  }
};

// Number of complete subcircuits rooted at every node.
inline std::vector<BigInt> subcircuit_counts(const Circuit& circuit) {
  std::vector<BigInt> count(circuit.size());
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    switch (n.kind) {
      case NodeKind::Indicator:
      case NodeKind::Parameter: count[id] = 1; break;
      case NodeKind::Product:
        count[id] = 1;
        for (NodeId c : n.children) count[id] *= count[c];
        break;
      case NodeKind::Sum:
        count[id] = 0;
        for (NodeId c : n.children) count[id] += count[c];
        break;
    }
  }
  return count;
}

namespace detail {

template <class T>
std::vector<T> sorted_union(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

template <class T>
std::vector<T> sorted_merge(const std::vector<T>& a, const std::vector<T>& b) {
  std::vector<T> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace detail

inline std::vector<Subcircuit> enumerate_subcircuits(const Circuit& circuit,
                                                     std::size_t limit = Limits{}.subcircuits) {
  auto counts = subcircuit_counts(circuit);
  if (counts[circuit.root()] > limit) {
    throw LimitError("circuit has at least " + counts[circuit.root()].str() +
                     " complete subcircuits, limit is " + std::to_string(limit));
  }
  std::vector<std::vector<Subcircuit>> at(circuit.size());
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    auto& out = at[id];
    switch (n.kind) {
      case NodeKind::Indicator:
        out.push_back({{}, {{n.var, n.value}}, 1, {id}});
        break;
      case NodeKind::Parameter:
        out.push_back({{}, {}, n.theta, {id}});
        break;
      case NodeKind::Sum:
        for (NodeId c : n.children) {
          for (const auto& s : at[c]) {
            Subcircuit copy = s;
            copy.chosen = detail::sorted_merge(copy.chosen, {{id, c}});
            copy.nodes = detail::sorted_union(copy.nodes, {id});
            out.push_back(std::move(copy));
          }
        }
        break;
      case NodeKind::Product: {
        out.push_back({{}, {}, 1, {id}});
        for (NodeId c : n.children) {
          std::vector<Subcircuit> next;
          next.reserve(out.size() * at[c].size());
          for (const auto& left : out) {
            for (const auto& right : at[c]) {
              next.push_back({detail::sorted_merge(left.chosen, right.chosen),
                              detail::sorted_union(left.term, right.term),
                              left.coefficient * right.coefficient,
                              detail::sorted_union(left.nodes, right.nodes)});
            }
          }
          out = std::move(next);
        }
        break;
      }
    }
  }
  // Only the root's list is needed; children lists were shared by value.
  return std::move(at[circuit.root()]);
}

// In a decomposable and smooth circuit every complete
// subcircuit's term assigns exactly one value to each declared variable.
inline bool terms_are_instantiations(const Circuit& circuit,
                                     std::size_t limit = Limits{}.subcircuits) {
  auto vars = vars_of(circuit);
  if (auto d = check_decomposable(circuit, vars); !d.holds()) {
    throw PreconditionError("circuit is not decomposable (product node " +
                            std::to_string(d.witness->product) + ")");
  }
  if (auto s = check_smooth(circuit, vars); !s.holds()) {
    throw PreconditionError("circuit is not smooth");
  }
  const std::size_t m = circuit.variables().size();
  for (const auto& sc : enumerate_subcircuits(circuit, limit)) {
    if (sc.term.size() != m) return false;
    for (std::size_t i = 0; i < m; ++i) {
      if (sc.term[i].first != i) return false;
    }
  }
  return true;
}

// The original, stronger notion: every two complete subcircuits have terms
// that conflict on some variable. Stated over enumerated subcircuits and
// strictly stronger than check_deterministic.
inline bool terms_pairwise_conflicting(const Circuit& circuit,
                                       std::size_t limit = Limits{}.subcircuits) {
  auto subs = enumerate_subcircuits(circuit, limit);
  auto conflict = [](const Subcircuit& a, const Subcircuit& b) {
    for (const auto& [v, x] : a.term) {
      for (const auto& [w, y] : b.term) {
        if (v == w && x != y) return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < subs.size(); ++i) {
    for (std::size_t j = i + 1; j < subs.size(); ++j) {
      if (!conflict(subs[i], subs[j])) return false;
    }
  }
  return true;
}

// A node is dead iff every complete subcircuit containing it has coefficient
// zero. Exact, by enumeration.
inline std::vector<NodeId> find_dead_nodes(const Circuit& circuit,
                                           std::size_t limit = Limits{}.subcircuits) {
  std::vector<bool> live(circuit.size(), false);
  for (const auto& sc : enumerate_subcircuits(circuit, limit)) {
    if (sc.coefficient == 0) continue;
    for (NodeId id : sc.nodes) live[id] = true;
  }
  std::vector<NodeId> dead;
  for (NodeId id = 0; id < circuit.size(); ++id) {
    if (!live[id]) dead.push_back(id);
  }
  return dead;
}

// Contrapositive of parametric incompleteness: a decomposable, smooth,
// dead-free circuit with parameters in {0,1} that computes a Boolean factor
// must be deterministic.
struct IncompletenessVerdict {
  Factor factor;
  bool factor_is_boolean = false;
  DeterminismCheck determinism;

  // False only for a counterexample: a Boolean factor from a non-deterministic circuit.
  bool consistent() const { return !factor_is_boolean || determinism.holds(); }
};

inline IncompletenessVerdict check_parametric_incompleteness(const Circuit& circuit,
                                                             const Limits& limits = {}) {
  for (NodeId id = 0; id < circuit.size(); ++id) {
    const Node& n = circuit.node(id);
    if (n.kind == NodeKind::Parameter && n.theta != 0 && n.theta != 1) {
      throw PreconditionError("parameter " + format_rational(n.theta) + " at node " +
                              std::to_string(id) + " is not in {0,1}");
    }
  }
  auto vars = vars_of(circuit);
  if (!check_decomposable(circuit, vars).holds()) {
    throw PreconditionError("circuit is not decomposable");
  }
  if (!check_smooth(circuit, vars).holds()) throw PreconditionError("circuit is not smooth");
  if (auto dead = find_dead_nodes(circuit, limits.subcircuits); !dead.empty()) {
    throw PreconditionError("circuit has dead node " + std::to_string(dead.front()));
  }
  Factor f = factor_of_circuit(circuit, limits.max_vars);
  bool boolean = std::all_of(f.table().begin(), f.table().end(),
                             [](const Rational& r) { return r == 0 || r == 1; });
  auto det = check_deterministic(circuit, limits.max_vars);
  return {std::move(f), boolean, std::move(det)};
}

}  // namespace acforge
