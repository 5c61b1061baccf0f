#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "acforge/core.hpp"

// Seeded random test data: circuits of controlled shape, factor sets.
namespace acforge::gen {

using Rng = std::mt19937_64;

// Binary variables A, B, C, ... with values "1" then "0".
inline std::vector<Variable> binary_variables(std::size_t n) {
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < n; ++i) {
    vars.push_back({std::string(1, static_cast<char>('A' + i)), {"1", "0"}});
  }
  return vars;
}

enum class ParameterKind { Rational, Boolean };

struct Shape {
  int max_depth = 4;
  int max_children = 3;
  double share = 0.3;       // reuse a node with the same variable set
  double zero = 0.1;        // probability that a parameter is 0
  ParameterKind parameters = ParameterKind::Rational;
};

inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Rational random_parameter(Rng& rng, const Shape& shape) {
  if (coin(rng, shape.zero)) return 0;
  if (shape.parameters == ParameterKind::Boolean) return 1;
  return Rational(static_cast<long>(uniform(rng, 1, 6)), static_cast<long>(uniform(rng, 1, 4)));
}

namespace detail {

inline std::vector<std::size_t> members(std::uint64_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < 64; ++v) {
    if (mask >> v & 1) out.push_back(v);
  }
  return out;
}

// Random partition of `mask` into `blocks` non-empty blocks.
inline std::vector<std::uint64_t> partition(Rng& rng, std::uint64_t mask, std::size_t blocks) {
  auto vs = members(mask);
  std::shuffle(vs.begin(), vs.end(), rng);
  std::vector<std::uint64_t> out(blocks, 0);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::size_t b = i < blocks ? i : uniform(rng, 0, blocks - 1);
    out[b] |= std::uint64_t{1} << vs[i];
  }
  return out;
}

inline std::uint64_t random_submask(Rng& rng, std::uint64_t mask, bool nonempty) {
  auto vs = members(mask);
  std::uint64_t out = 0;
  for (auto v : vs) {
    if (coin(rng, 0.6)) out |= std::uint64_t{1} << v;
  }
  if (nonempty && out == 0 && !vs.empty()) out = std::uint64_t{1} << vs[uniform(rng, 0, vs.size() - 1)];
  return out;
}

enum class Style { Smooth, Unbalanced };

class CircuitGenerator {
 public:
  CircuitGenerator(Rng& rng, std::vector<Variable> vars, Shape shape, Style style)
      : rng_(rng), vars_(vars), b_(std::move(vars)), shape_(shape), style_(style) {}

  Circuit run(std::uint64_t mask) && {
    NodeId root = node(mask, 0);
    return std::move(b_).build(root);
  }

 private:
  NodeId indicator(std::size_t v) { return b_.indicator(v, uniform(rng_, 0, vars_[v].size() - 1)); }

  // A node whose variables are exactly `mask` (Smooth) or a subset of it.
  NodeId node(std::uint64_t mask, int depth) {
    auto& pool = cache_[mask];
    if (!pool.empty() && coin(rng_, shape_.share)) return pool[uniform(rng_, 0, pool.size() - 1)];
    NodeId id = fresh(mask, depth);
    cache_[mask].push_back(id);
    return id;
  }

  NodeId fresh(std::uint64_t mask, int depth) {
    if (mask == 0) return b_.parameter(random_parameter(rng_, shape_));
    auto vs = members(mask);
    const bool bottom = depth >= shape_.max_depth;
    if (vs.size() == 1 && (bottom || coin(rng_, 0.4))) {
      NodeId leaf = indicator(vs.front());
      if (coin(rng_, 0.5)) return b_.product({leaf, b_.parameter(random_parameter(rng_, shape_))});
      return leaf;
    }
    if (!bottom && coin(rng_, 0.5)) {
      std::vector<NodeId> children;
      std::size_t k = uniform(rng_, 2, shape_.max_children);
      for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t sub = style_ == Style::Smooth ? mask : random_submask(rng_, mask, true);
        children.push_back(node(sub, depth + 1));
      }
      return b_.sum(std::move(children));
    }
    std::vector<NodeId> children;
    if (vs.size() == 1) {
      children.push_back(node(mask, bottom ? depth : depth + 1));
    } else {
      std::size_t k = bottom ? vs.size() : uniform(rng_, 2, std::min<std::size_t>(vs.size(), shape_.max_children));
      for (auto block : partition(rng_, mask, k)) children.push_back(node(block, depth + 1));
    }
    if (coin(rng_, 0.5) || vs.size() == 1) children.push_back(b_.parameter(random_parameter(rng_, shape_)));
    return b_.product(std::move(children));
  }

  Rng& rng_;
  std::vector<Variable> vars_;
  CircuitBuilder b_;
  Shape shape_;
  Style style_;
  std::map<std::uint64_t, std::vector<NodeId>> cache_;
};

}  // namespace detail

inline std::uint64_t full_mask(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

// Decomposable and smooth; mentions every declared variable.
inline Circuit smooth_decomposable_circuit(Rng& rng, std::size_t num_vars, const Shape& shape = {}) {
  auto vars = binary_variables(num_vars);
  return detail::CircuitGenerator(rng, vars, shape, detail::Style::Smooth).run(full_mask(num_vars));
}

// Decomposable; sum children and the root may miss variables.
inline Circuit unbalanced_circuit(Rng& rng, std::size_t num_vars, const Shape& shape = {}) {
  auto vars = binary_variables(num_vars);
  std::uint64_t root = detail::random_submask(rng, full_mask(num_vars), true);
  return detail::CircuitGenerator(rng, vars, shape, detail::Style::Unbalanced).run(root);
}

// Decision-style: every sum branches on the values of one variable, each
// branch a product of that value's indicator and a circuit over a random
// subset of the remaining variables. Deterministic and decomposable, usually
// not smooth.
inline Circuit deterministic_circuit(Rng& rng, std::size_t num_vars, const Shape& shape = {}) {
  auto vars = binary_variables(num_vars);
  CircuitBuilder b(vars);
  auto build = [&](auto&& self, std::uint64_t mask) -> NodeId {
    if (mask == 0) return b.parameter(random_parameter(rng, shape));
    auto vs = detail::members(mask);
    std::size_t v = vs[uniform(rng, 0, vs.size() - 1)];
    std::uint64_t rest = mask & ~(std::uint64_t{1} << v);
    std::vector<NodeId> branches;
    for (ValueIndex x = 0; x < vars[v].size(); ++x) {
      NodeId sub = self(self, detail::random_submask(rng, rest, false));
      branches.push_back(b.product({b.indicator(v, x), sub}));
    }
    return b.sum(std::move(branches));
  };
  NodeId root = build(build, detail::random_submask(rng, full_mask(num_vars), true));
  return std::move(b).build(root);
}

// The same circuit declared over only the variables it mentions.
inline Circuit declared_over_mentioned(const Circuit& c) {
  std::vector<bool> used(c.variables().size(), false);
  for (const Node& n : c.nodes()) {
    if (n.kind == NodeKind::Indicator) used[n.var] = true;
  }
  std::vector<Variable> vars;
  std::vector<VarIndex> remap(c.variables().size(), 0);
  for (VarIndex v = 0; v < used.size(); ++v) {
    if (!used[v]) continue;
    remap[v] = vars.size();
    vars.push_back(c.variables()[v]);
  }
  std::vector<Node> nodes = c.nodes();
  for (Node& n : nodes) {
    if (n.kind == NodeKind::Indicator) n.var = remap[n.var];
  }
  return Circuit(std::move(vars), std::move(nodes), c.root());
}

inline Factor random_factor(Rng& rng, std::vector<Variable> scope, unsigned max_entry,
                            bool rational = false) {
  auto n = *instantiation_count(scope);
  std::vector<Rational> table;
  for (std::size_t i = 0; i < n; ++i) {
    long num = static_cast<long>(uniform(rng, 0, max_entry));
    long den = rational ? static_cast<long>(uniform(rng, 1, 3)) : 1;
    table.emplace_back(num, den);
  }
  return Factor(std::move(scope), std::move(table));
}

// 1..max_factors factors over random scopes of 1..max_scope of the variables.
inline std::vector<Factor> random_factor_set(Rng& rng, std::size_t num_vars, std::size_t max_factors,
                                             std::size_t max_scope, unsigned max_entry,
                                             bool rational = false) {
  auto vars = binary_variables(num_vars);
  std::vector<Factor> fs;
  std::size_t k = uniform(rng, 1, max_factors);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<std::size_t> idx(num_vars);
    for (std::size_t j = 0; j < num_vars; ++j) idx[j] = j;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::size_t s = uniform(rng, 1, std::min(max_scope, num_vars));
    idx.resize(s);
    std::sort(idx.begin(), idx.end());
    std::vector<Variable> scope;
    for (auto j : idx) scope.push_back(vars[j]);
    fs.push_back(random_factor(rng, std::move(scope), max_entry, rational));
  }
  return fs;
}

}  // namespace acforge::gen
