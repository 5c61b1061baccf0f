#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "acforge/core.hpp"
#include "acforge/limits.hpp"
#include "acforge/oracle.hpp"
#include "acforge/transform.hpp"

// Construction of circuits from factor sets.
namespace acforge {

struct PolynomialOptions {
  bool drop_zeros = false;
  std::size_t max_vars = Limits{}.max_vars;
};

namespace detail {

// Appends the two-level polynomial of f to the builder; `var_of` maps scope
// positions to builder variable indices.
inline NodeId append_polynomial(CircuitBuilder& b, const Factor& f,
                                std::span<const VarIndex> var_of, bool drop_zeros) {
  const auto& scope = f.scope();
  std::vector<std::vector<NodeId>> ind(scope.size());
  for (std::size_t i = 0; i < scope.size(); ++i) {
    for (ValueIndex x = 0; x < scope[i].size(); ++x) ind[i].push_back(b.indicator(var_of[i], x));
  }
  std::vector<NodeId> terms;
  for_each_instantiation(scope, [&](const std::vector<ValueIndex>& row) {
    const Rational& value = f.at(row);
    if (drop_zeros && value == 0) return;
    std::vector<NodeId> factors{b.parameter(value)};
    for (std::size_t i = 0; i < scope.size(); ++i) factors.push_back(ind[i][row[i]]);
    terms.push_back(b.product(std::move(factors)));
  });
  if (terms.empty()) return b.parameter(0);
  return b.sum(std::move(terms));
}

}  // namespace detail

// Σ_x f(x) Π_{x~x} λ_x as a root sum over one product per row.
inline Circuit compile_polynomial(const Factor& f, const PolynomialOptions& options = {}) {
  require_tabulable(f.scope(), options.max_vars);
  CircuitBuilder b(f.scope());
  std::vector<VarIndex> identity(f.scope().size());
  for (std::size_t i = 0; i < identity.size(); ++i) identity[i] = i;
  NodeId root = detail::append_polynomial(b, f, identity, options.drop_zeros);
  return std::move(b).build(root);
}

// One product node over the polynomial circuit of each factor. Computes the
// product factor but in general not its marginals.
inline Circuit compile_product(std::span<const Factor> fs, const PolynomialOptions& options = {}) {
  if (fs.empty()) throw InputError("compile_product needs at least one factor");
  std::vector<Variable> vars;
  for (const auto& f : fs) {
    require_tabulable(f.scope(), options.max_vars);
    vars = merge_variables(vars, f.scope());
  }
  CircuitBuilder b(vars);
  std::vector<NodeId> roots;
  for (const auto& f : fs) {
    std::vector<VarIndex> var_of;
    for (const auto& v : f.scope()) var_of.push_back(*find_variable(vars, v.name));
    roots.push_back(detail::append_polynomial(b, f, var_of, options.drop_zeros));
  }
  NodeId root = b.product(std::move(roots));
  return std::move(b).build(root);
}

struct OrderedOptions {
  // Variable order by name; empty means first-appearance order over the
  // factor scopes.
  std::vector<std::string> order;
  std::size_t memo_limit = 1'000'000;
};

namespace detail {

// A factor restricted to the not-yet-assigned suffix of the order. Scope
// entries are order positions, ascending; the table is row-major over them and
// holds ids of interned values.
struct Restricted {
  std::vector<std::size_t> scope;
  std::vector<std::uint32_t> table;

  friend bool operator==(const Restricted&, const Restricted&) = default;
  friend auto operator<=>(const Restricted&, const Restricted&) = default;
};

class OrderedCompiler {
 public:
  OrderedCompiler(std::span<const Factor> fs, const OrderedOptions& options)
      : options_(options) {
    std::vector<Variable> uni;
    std::unordered_map<std::string, std::size_t> seen;
    for (const auto& f : fs) {
      for (const auto& v : f.scope()) {
        auto [it, inserted] = seen.try_emplace(v.name, uni.size());
        if (inserted) {
          uni.push_back(v);
        } else if (uni[it->second].values != v.values) {
          throw InputError("inconsistent declarations of variable " + v.name);
        }
      }
    }
    if (options.order.empty()) {
      vars_ = uni;
    } else {
      if (options.order.size() != uni.size()) {
        throw InputError("variable order is not a permutation of the factor variables");
      }
      for (const auto& name : options.order) {
        auto v = find_variable(uni, name);
        if (!v || find_variable(vars_, name)) {
          throw InputError("variable order is not a permutation of the factor variables");
        }
        vars_.push_back(uni[*v]);
      }
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) position_.emplace(vars_[i].name, i);
    builder_.emplace(vars_);
    starts_.resize(vars_.size() + 1);
    intern(0);
    intern(1);
    scalar_ = 1;
    for (const auto& f : fs) add_factor(f);
  }

  Circuit run() {
    NodeId root = scalar_ == 0 ? zero_chain(0) : compile(0, State{intern(scalar_), {}});
    return smooth(std::move(*builder_).build(root));
  }

 private:
  static constexpr std::uint32_t kZero = 0;
  static constexpr std::uint32_t kOne = 1;

  struct State {
    std::uint32_t scalar;
    std::vector<std::uint32_t> touched;  // ids of pending restricted factors, sorted
  };

  // Outcome of restricting a pending factor's leading variable: either a
  // constant (interned value id) or another pending factor.
  struct Step {
    bool constant;
    std::uint32_t id;
  };

  std::uint32_t intern(const Rational& r) {
    if (values_.size() >= 2) {
      if (r.is_zero()) return kZero;
      if (r == values_[kOne]) return kOne;
    }
    auto [it, inserted] = ids_.try_emplace(r, static_cast<std::uint32_t>(values_.size()));
    if (inserted) values_.push_back(r);
    return it->second;
  }

  // Re-lays the factor out over ascending order positions.
  void add_factor(const Factor& f) {
    const auto& scope = f.scope();
    std::vector<std::size_t> pos;
    for (const auto& v : scope) pos.push_back(position_.at(v.name));
    std::vector<std::size_t> perm(scope.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return pos[a] < pos[b]; });
    Restricted r;
    std::vector<Variable> sorted_scope;
    for (std::size_t i : perm) {
      r.scope.push_back(pos[i]);
      sorted_scope.push_back(scope[i]);
    }
    std::vector<ValueIndex> orig(scope.size());
    for_each_instantiation(sorted_scope, [&](const std::vector<ValueIndex>& row) {
      for (std::size_t j = 0; j < perm.size(); ++j) orig[perm[j]] = row[j];
      r.table.push_back(intern(f.at(orig)));
    });
    if (r.scope.empty()) {
      scalar_ *= values_[r.table.front()];
      return;
    }
    starts_[r.scope.front()].push_back(pending(std::move(r)));
  }

  std::uint32_t pending(Restricted r) {
    auto [it, inserted] = pending_ids_.try_emplace(r, static_cast<std::uint32_t>(pending_.size()));
    if (inserted) {
      pending_.push_back(std::move(r));
      steps_.emplace_back();
    }
    return it->second;
  }

  // Restriction of the leading variable to value x: a contiguous slice,
  // collapsed to a constant when all its entries agree. Cached per factor.
  Step restrict_front(std::uint32_t id, ValueIndex x) {
    if (steps_[id].empty()) {
      // Copied: interning below may reallocate pending_.
      const Restricted r = pending_[id];
      const std::size_t domain = vars_[r.scope.front()].size();
      const std::size_t stride = r.table.size() / domain;
      std::vector<Step> out;
      for (ValueIndex v = 0; v < domain; ++v) {
        auto begin = r.table.begin() + v * stride;
        auto end = begin + stride;
        if (std::all_of(begin, end, [&](std::uint32_t t) { return t == *begin; })) {
          out.push_back({true, *begin});
        } else {
          Restricted sub;
          sub.scope.assign(r.scope.begin() + 1, r.scope.end());
          sub.table.assign(begin, end);
          out.push_back({false, pending(std::move(sub))});
        }
      }
      steps_[id] = std::move(out);
    }
    return steps_[id][x];
  }

  // Folds a step into the state. Returns false when the state is identically
  // zero.
  bool absorb(State& s, Step step) {
    if (!step.constant) {
      s.touched.push_back(step.id);
      return true;
    }
    if (step.id == kZero) {
      s.scalar = kZero;
      return false;
    }
    if (step.id != kOne) s.scalar = intern(values_[s.scalar] * values_[step.id]);
    return true;
  }

  static std::string key_of(std::size_t depth, const State& s) {
    std::string key;
    auto put = [&](std::uint32_t v) { key.append(reinterpret_cast<const char*>(&v), sizeof v); };
    put(static_cast<std::uint32_t>(depth));
    put(s.scalar);
    for (auto id : s.touched) put(id);
    return key;
  }

  NodeId sigma(std::size_t pos) {
    auto it = sigma_.find(pos);
    if (it != sigma_.end()) return it->second;
    std::vector<NodeId> ind;
    for (ValueIndex x = 0; x < vars_[pos].size(); ++x) ind.push_back(indicator(pos, x));
    NodeId s = builder_->sum(std::move(ind));
    sigma_.emplace(pos, s);
    return s;
  }

  NodeId indicator(std::size_t pos, ValueIndex x) {
    auto key = std::make_pair(pos, x);
    auto it = indicators_.find(key);
    if (it != indicators_.end()) return it->second;
    NodeId id = builder_->indicator(pos, x);
    indicators_.emplace(key, id);
    return id;
  }

  // 0 times Σλ of every variable from `depth` on: a smooth zero.
  NodeId zero_chain(std::size_t depth) {
    if (zeros_.size() <= depth) zeros_.resize(vars_.size() + 1);
    if (zeros_[depth]) return *zeros_[depth];
    NodeId id = depth == vars_.size()
                    ? builder_->parameter(0)
                    : builder_->product({zero_chain(depth + 1), sigma(depth)});
    zeros_[depth] = id;
    return id;
  }

  NodeId compile(std::size_t depth, const State& s) {
    std::string key = key_of(depth, s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    NodeId result;
    if (depth == vars_.size()) {
      result = builder_->parameter(values_[s.scalar]);
    } else {
      const std::size_t domain = vars_[depth].size();
      std::vector<NodeId> branches;
      const auto& starting = starts_[depth];
      for (ValueIndex x = 0; x < domain; ++x) {
        State next{s.scalar, {}};
        bool live = true;
        for (auto id : s.touched) {
          if (!live) break;
          if (pending_[id].scope.front() == depth) {
            live = absorb(next, restrict_front(id, x));
          } else {
            next.touched.push_back(id);
          }
        }
        for (std::size_t i = 0; live && i < starting.size(); ++i) {
          live = absorb(next, restrict_front(starting[i], x));
        }
        NodeId sub;
        if (live) {
          std::sort(next.touched.begin(), next.touched.end());
          sub = compile(depth + 1, next);
        } else {
          sub = zero_chain(depth + 1);
        }
        branches.push_back(builder_->product({sub, indicator(depth, x)}));
      }
      result = builder_->sum(std::move(branches));
    }
    if (memo_.size() >= options_.memo_limit) {
      throw LimitError("ordered compilation exceeded the memo limit of " +
                       std::to_string(options_.memo_limit) + " entries");
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

  OrderedOptions options_;
  std::vector<Variable> vars_;
  std::unordered_map<std::string, std::size_t> position_;
  std::optional<CircuitBuilder> builder_;
  std::vector<std::vector<std::uint32_t>> starts_;  // input factors by leading position
  Rational scalar_;                              // product of empty-scope factors
  std::vector<Rational> values_;
  std::map<Rational, std::uint32_t> ids_;
  std::vector<Restricted> pending_;
  std::map<Restricted, std::uint32_t> pending_ids_;
  std::vector<std::vector<Step>> steps_;
  std::unordered_map<std::string, NodeId> memo_;
  std::map<std::pair<std::size_t, ValueIndex>, NodeId> indicators_;
  std::map<std::size_t, NodeId> sigma_;
  std::vector<std::optional<NodeId>> zeros_;
};

}  // namespace detail

// Decision-style compilation: branch on the variables in order, each branch
// multiplying one indicator of the branching variable with the circuit of the
// restricted factors. Restricted states that coincide are shared. The result
// is deterministic, decomposable and smooth and computes the marginals of the
// product of the factors.
inline Circuit compile_ordered(std::span<const Factor> fs, const OrderedOptions& options = {}) {
  if (fs.empty()) throw InputError("compile_ordered needs at least one factor");
  return detail::OrderedCompiler(fs, options).run();
}

}  // namespace acforge
