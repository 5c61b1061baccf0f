#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "acforge/compile.hpp"
#include "acforge/core.hpp"
#include "acforge/query.hpp"

// Reduction of "∃x: Π f_i(x) > k" to the positivity of a sum over Boolean
// factors: a gate-level comparator circuit over one-hot selector bits, its
// Tseitin clauses as 0/1 factors, and a compiled circuit whose total value is
// the number of satisfying assignments.
namespace acforge {

// ---------------------------------------------------------------------------
// Integer scaling.

struct ScaledProblem {
  std::vector<Factor> factors;    // integer entries
  std::vector<BigInt> multipliers;  // per factor: lcm of its denominators
  BigInt total_multiplier;        // product of the multipliers
  BigInt threshold;               // floor(k * total_multiplier)
};

inline BigInt lcm_of(const BigInt& a, const BigInt& b) {
  return a / boost::multiprecision::gcd(a, b) * b;
}

// Π f_i(x) > k  iff  Π (m_i f_i)(x) > floor(k Π m_i), since the left side of
// the scaled inequality is an integer.
inline ScaledProblem scale_to_integers(std::span<const Factor> fs, const Rational& k) {
  ScaledProblem out;
  out.total_multiplier = 1;
  for (const auto& f : fs) {
    BigInt m = 1;
    for (const auto& t : f.table()) m = lcm_of(m, boost::multiprecision::denominator(t));
    std::vector<Rational> table;
    for (const auto& t : f.table()) table.emplace_back(t * m);
    out.factors.emplace_back(f.scope(), std::move(table));
    out.multipliers.push_back(m);
    out.total_multiplier *= m;
  }
  out.threshold = floor_of(k * out.total_multiplier);
  return out;
}

// ---------------------------------------------------------------------------
// Gate-level circuits.

enum class GateKind : std::uint8_t { And, Or, Xor, Not, Const };

struct Gate {
  GateKind kind;
  std::size_t a = 0;
  std::size_t b = 0;
  bool value = false;  // Const only
};

struct SelectorBit {
  VarIndex var;
  ValueIndex value;
};

// Wires 0..inputs-1 are the one-hot selector bits, wire inputs+g is the
// output of gate g. Gates only read lower-numbered wires.
struct BoolCircuit {
  std::vector<Variable> variables;
  std::vector<SelectorBit> inputs;
  std::vector<Gate> gates;
  std::size_t output = 0;

  std::size_t wire_count() const { return inputs.size() + gates.size(); }

  std::vector<bool> simulate(const std::vector<bool>& input_bits) const {
    std::vector<bool> w(input_bits);
    w.resize(wire_count());
    for (std::size_t g = 0; g < gates.size(); ++g) {
      const Gate& gate = gates[g];
      bool v = false;
      switch (gate.kind) {
        case GateKind::And: v = w[gate.a] && w[gate.b]; break;
        case GateKind::Or: v = w[gate.a] || w[gate.b]; break;
        case GateKind::Xor: v = w[gate.a] != w[gate.b]; break;
        case GateKind::Not: v = !w[gate.a]; break;
        case GateKind::Const: v = gate.value; break;
      }
      w[inputs.size() + g] = v;
    }
    return w;
  }

  // Selector bits of a complete instantiation given as value indices.
  std::vector<bool> one_hot(std::span<const ValueIndex> x) const {
    std::vector<bool> bits;
    for (const auto& s : inputs) bits.push_back(x[s.var] == s.value);
    return bits;
  }
};

// A wire or a constant, folded while building.
struct Signal {
  enum class Kind : std::uint8_t { False, True, Wire } kind = Kind::False;
  std::size_t wire = 0;

  static Signal constant(bool v) { return {v ? Kind::True : Kind::False, 0}; }
  static Signal of(std::size_t w) { return {Kind::Wire, w}; }
  bool is_const() const { return kind != Kind::Wire; }
  bool const_value() const { return kind == Kind::True; }
  friend bool operator==(const Signal&, const Signal&) = default;
};

// Least-significant bit first.
struct BitVector {
  std::vector<Signal> bits;
  std::size_t width() const { return bits.size(); }
};

class GateBuilder {
 public:
  explicit GateBuilder(BoolCircuit& c) : c_(c) {}

  Signal emit(GateKind kind, std::size_t a = 0, std::size_t b = 0, bool value = false) {
    c_.gates.push_back({kind, a, b, value});
    return Signal::of(c_.wire_count() - 1);
  }

  Signal land(Signal a, Signal b) {
    if (a.is_const()) return a.const_value() ? b : a;
    if (b.is_const()) return b.const_value() ? a : b;
    if (a == b) return a;
    return emit(GateKind::And, a.wire, b.wire);
  }
  Signal lor(Signal a, Signal b) {
    if (a.is_const()) return a.const_value() ? a : b;
    if (b.is_const()) return b.const_value() ? b : a;
    if (a == b) return a;
    return emit(GateKind::Or, a.wire, b.wire);
  }
  Signal lnot(Signal a) {
    if (a.is_const()) return Signal::constant(!a.const_value());
    return emit(GateKind::Not, a.wire);
  }
  Signal lxor(Signal a, Signal b) {
    if (a.is_const()) return a.const_value() ? lnot(b) : b;
    if (b.is_const()) return b.const_value() ? lnot(a) : a;
    if (a == b) return Signal::constant(false);
    return emit(GateKind::Xor, a.wire, b.wire);
  }

  std::size_t wire(Signal s) {
    if (!s.is_const()) return s.wire;
    return emit(GateKind::Const, 0, 0, s.const_value()).wire;
  }

  // Ripple-carry sum of equal-width vectors, truncated to that width.
  BitVector add(const BitVector& x, const BitVector& y) {
    BitVector out;
    Signal carry = Signal::constant(false);
    for (std::size_t i = 0; i < x.width(); ++i) {
      Signal h = lxor(x.bits[i], y.bits[i]);
      out.bits.push_back(lxor(h, carry));
      carry = lor(land(x.bits[i], y.bits[i]), land(carry, h));
    }
    return out;
  }

  // Schoolbook shift-add; the product of widths wx and wy fits in wx + wy.
  BitVector multiply(const BitVector& x, const BitVector& y) {
    const std::size_t w = x.width() + y.width();
    BitVector acc{std::vector<Signal>(w, Signal::constant(false))};
    for (std::size_t j = 0; j < y.width(); ++j) {
      BitVector row{std::vector<Signal>(w, Signal::constant(false))};
      for (std::size_t i = 0; i < x.width(); ++i) row.bits[i + j] = land(x.bits[i], y.bits[j]);
      acc = add(acc, row);
    }
    return acc;
  }

  // value > k for a constant k, scanning from the least significant bit:
  // G_i = p_i | G_{i-1} where k_i = 0 and p_i & G_{i-1} where k_i = 1.
  Signal greater_than(const BitVector& value, const BigInt& k) {
    if (k >= (BigInt(1) << value.width())) return Signal::constant(false);
    Signal g = Signal::constant(false);
    for (std::size_t i = 0; i < value.width(); ++i) {
      bool ki = boost::multiprecision::bit_test(k, static_cast<unsigned>(i));
      g = ki ? land(value.bits[i], g) : lor(value.bits[i], g);
    }
    return g;
  }

 private:
  BoolCircuit& c_;
};

inline std::size_t bit_width(const BigInt& v) {
  return v == 0 ? 1 : boost::multiprecision::msb(v) + 1;
}

struct ComparatorCircuit {
  BoolCircuit circuit;
  std::vector<BitVector> factor_values;  // multiplexer outputs
  BitVector product;
  std::vector<std::size_t> widths;
};

inline BigInt as_integer(const Rational& r) {
  if (!is_integer(r)) throw InputError("expected an integer entry, got " + format_rational(r));
  return boost::multiprecision::numerator(r);
}

// Output is true iff Π f_i(x) > k for every one-hot selector assignment.
inline ComparatorCircuit build_comparator_circuit(std::span<const Factor> fs, const BigInt& k) {
  if (k < 0) throw InputError("comparator threshold must be non-negative");
  if (fs.empty()) throw InputError("comparator needs at least one factor");
  ComparatorCircuit out;
  BoolCircuit& c = out.circuit;
  for (const auto& f : fs) c.variables = merge_variables(c.variables, f.scope());
  std::vector<std::vector<std::size_t>> selector(c.variables.size());
  for (VarIndex v = 0; v < c.variables.size(); ++v) {
    for (ValueIndex x = 0; x < c.variables[v].size(); ++x) {
      selector[v].push_back(c.inputs.size());
      c.inputs.push_back({v, x});
    }
  }
  GateBuilder g(c);
  for (const auto& f : fs) {
    BigInt max_entry = 0;
    for (const auto& t : f.table()) max_entry = std::max(max_entry, as_integer(t));
    const std::size_t w = bit_width(max_entry);
    out.widths.push_back(w);
    std::vector<VarIndex> var_of;
    for (const auto& v : f.scope()) var_of.push_back(*find_variable(c.variables, v.name));
    BitVector bits{std::vector<Signal>(w, Signal::constant(false))};
    for_each_instantiation(f.scope(), [&](const std::vector<ValueIndex>& row) {
      BigInt entry = as_integer(f.at(row));
      if (entry == 0) return;
      Signal sel = Signal::constant(true);
      for (std::size_t i = 0; i < row.size(); ++i) {
        sel = g.land(sel, Signal::of(selector[var_of[i]][row[i]]));
      }
      for (std::size_t j = 0; j < w; ++j) {
        if (boost::multiprecision::bit_test(entry, static_cast<unsigned>(j))) {
          bits.bits[j] = g.lor(bits.bits[j], sel);
        }
      }
    });
    out.factor_values.push_back(std::move(bits));
  }
  out.product = out.factor_values.front();
  for (std::size_t i = 1; i < out.factor_values.size(); ++i) {
    out.product = g.multiply(out.product, out.factor_values[i]);
  }
  c.output = g.wire(g.greater_than(out.product, k));
  return out;
}

// Value carried by a bit vector under simulated wire values.
inline BigInt read_bits(const BitVector& v, const std::vector<bool>& wires) {
  BigInt out = 0;
  for (std::size_t i = v.width(); i-- > 0;) {
    const Signal& s = v.bits[i];
    bool bit = s.is_const() ? s.const_value() : wires[s.wire];
    out = (out << 1) | (bit ? 1 : 0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tseitin encoding as Boolean factors.

struct CnfFactorSet {
  // Selector bits first (one per input wire), then one auxiliary variable
  // per gate. All binary with values "0" and "1".
  std::vector<Variable> variables;
  std::vector<Factor> factors;
  std::vector<std::string> labels;  // per factor: "clause" or "exactly-one"
  std::vector<std::string> wire_descriptions;  // per variable
  std::size_t selector_count = 0;
};

namespace detail {

inline std::string gate_description(const BoolCircuit& bc, const Gate& g,
                                    const std::vector<Variable>& names) {
  auto n = [&](std::size_t w) { return names[w].name; };
  switch (g.kind) {
    case GateKind::And: return "and " + n(g.a) + " " + n(g.b);
    case GateKind::Or: return "or " + n(g.a) + " " + n(g.b);
    case GateKind::Xor: return "xor " + n(g.a) + " " + n(g.b);
    case GateKind::Not: return "not " + n(g.a);
    case GateKind::Const: return g.value ? "const 1" : "const 0";
  }
  (void)bc;
  return "?";
}

}  // namespace detail

using Literal = std::pair<std::size_t, bool>;  // (wire, positive)

inline CnfFactorSet tseitin(const BoolCircuit& bc) {
  CnfFactorSet out;
  out.selector_count = bc.inputs.size();
  const std::vector<std::string> binary{"0", "1"};
  for (const auto& s : bc.inputs) {
    const Variable& v = bc.variables[s.var];
    out.variables.push_back({"sel." + v.name + "." + v.values[s.value], binary});
    out.wire_descriptions.push_back("selector " + v.name + "=" + v.values[s.value]);
  }
  for (std::size_t g = 0; g < bc.gates.size(); ++g) {
    out.variables.push_back({"gate." + std::to_string(g), binary});
  }
  for (const auto& gate : bc.gates) {
    out.wire_descriptions.push_back(detail::gate_description(bc, gate, out.variables));
  }

  // A clause as a factor: 0 on its single falsifying row, 1 elsewhere.
  auto clause = [&](std::vector<Literal> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i) {
      if (lits[i].first == lits[i - 1].first) return;  // tautology
    }
    std::vector<Variable> scope;
    std::vector<ValueIndex> falsifying;
    for (const auto& [w, positive] : lits) {
      scope.push_back(out.variables[w]);
      falsifying.push_back(positive ? 0 : 1);
    }
    Factor f = Factor::constant(scope, 1);
    std::vector<Rational> table = f.table();
    table[f.offset(falsifying)] = 0;
    out.factors.emplace_back(std::move(scope), std::move(table));
    out.labels.push_back("clause");
  };

  // Exactly one selector bit per original variable. Emitted first so that
  // first-appearance order lists every selector bit before any gate.
  for (VarIndex v = 0; v < bc.variables.size(); ++v) {
    std::vector<Variable> scope;
    for (std::size_t w = 0; w < bc.inputs.size(); ++w) {
      if (bc.inputs[w].var == v) scope.push_back(out.variables[w]);
    }
    std::vector<Rational> table;
    for_each_instantiation(scope, [&](const std::vector<ValueIndex>& row) {
      table.emplace_back(std::count(row.begin(), row.end(), 1) == 1 ? 1 : 0);
    });
    out.factors.emplace_back(std::move(scope), std::move(table));
    out.labels.push_back("exactly-one " + bc.variables[v].name);
  }
  for (std::size_t g = 0; g < bc.gates.size(); ++g) {
    const Gate& gate = bc.gates[g];
    const std::size_t y = bc.inputs.size() + g;
    const std::size_t a = gate.a, b = gate.b;
    switch (gate.kind) {
      case GateKind::And:
        clause({{y, false}, {a, true}});
        clause({{y, false}, {b, true}});
        clause({{y, true}, {a, false}, {b, false}});
        break;
      case GateKind::Or:
        clause({{y, true}, {a, false}});
        clause({{y, true}, {b, false}});
        clause({{y, false}, {a, true}, {b, true}});
        break;
      case GateKind::Xor:
        clause({{y, false}, {a, true}, {b, true}});
        clause({{y, false}, {a, false}, {b, false}});
        clause({{y, true}, {a, false}, {b, true}});
        clause({{y, true}, {a, true}, {b, false}});
        break;
      case GateKind::Not:
        clause({{y, false}, {a, false}});
        clause({{y, true}, {a, true}});
        break;
      case GateKind::Const:
        clause({{y, gate.value}});
        break;
    }
  }
  clause({{bc.output, true}});

  return out;
}

// ---------------------------------------------------------------------------
// Decision and value recovery through a marginal-computing compiler.

using Compiler = std::function<Circuit(std::span<const Factor>)>;

inline Circuit default_compiler(std::span<const Factor> fs) { return compile_ordered(fs); }

inline bool decide_mpe_via_pr(std::span<const Factor> fs, const Rational& k,
                              const Compiler& compiler = default_compiler) {
  if (fs.empty()) throw InputError("decide_mpe_via_pr needs at least one factor");
  // Every x has f(x) >= 0 > k.
  if (k < 0) return true;
  ScaledProblem scaled = scale_to_integers(fs, k);
  auto comparator = build_comparator_circuit(scaled.factors, scaled.threshold);
  auto cnf = tseitin(comparator.circuit);
  Circuit g = compiler(cnf.factors);
  return marginal(g, {}) > 0;
}

// Exact MPE value of Π f_i by binary search over integer thresholds of the
// scaled problem, each step one decision through the compiler.
inline Rational mpe_via_compiler(std::span<const Factor> fs,
                                 const Compiler& compiler = default_compiler) {
  if (fs.empty()) throw InputError("mpe_via_compiler needs at least one factor");
  ScaledProblem scaled = scale_to_integers(fs, 0);
  BigInt hi = 1;
  for (const auto& f : scaled.factors) {
    BigInt m = 0;
    for (const auto& t : f.table()) m = std::max(m, as_integer(t));
    hi *= m;
  }
  // Smallest integer k in [0, hi] with no x exceeding it is the maximum.
  BigInt lo = 0;
  while (lo < hi) {
    BigInt mid = (lo + hi) / 2;
    if (decide_mpe_via_pr(scaled.factors, Rational(mid), compiler)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return Rational(lo, scaled.total_multiplier);
}

}  // namespace acforge
