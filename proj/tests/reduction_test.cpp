#include <gtest/gtest.h>

#include "test_support.hpp"

namespace acforge {
namespace {

using testing::binary;

std::vector<Factor> pair() { return {testing::pair_f1(), testing::pair_f2()}; }

// Π f_i(x) over the merged scope, by direct lookup.
std::vector<BigInt> products(std::span<const Factor> fs, const std::vector<Variable>& vars) {
  std::vector<BigInt> out;
  for_each_instantiation(vars, [&](const std::vector<ValueIndex>& x) {
    Instantiation xi = instantiation_of(vars, x);
    BigInt p = 1;
    for (const auto& f : fs) {
      Instantiation sub;
      for (const auto& v : f.scope()) sub.set(v.name, *xi.find(v.name));
      p *= as_integer(factor_value(f, sub));
    }
    out.push_back(p);
  });
  return out;
}

// Truth of every CNF factor under a 0/1 assignment of its variables.
bool satisfies(const CnfFactorSet& cnf, const std::vector<bool>& bits) {
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < cnf.variables.size(); ++i) pos[cnf.variables[i].name] = i;
  for (const auto& f : cnf.factors) {
    std::vector<ValueIndex> row;
    for (const auto& v : f.scope()) row.push_back(bits[pos[v.name]] ? 1 : 0);
    if (f.at(row) == 0) return false;
  }
  return true;
}

// Literals of a clause factor read off its single zero row.
std::set<std::pair<std::string, bool>> literals(const Factor& clause) {
  std::set<std::pair<std::string, bool>> out;
  std::size_t zeros = 0;
  for_each_instantiation(clause.scope(), [&](const std::vector<ValueIndex>& row) {
    if (clause.at(row) != 0) return;
    ++zeros;
    for (std::size_t i = 0; i < row.size(); ++i) out.emplace(clause.scope()[i].name, row[i] == 0);
  });
  EXPECT_EQ(zeros, 1u);
  return out;
}

TEST(Scale, HalvesBecomeIntegers) {
  std::vector<Factor> fs{Factor({binary("A")}, {Rational(1, 2), Rational(3, 2)})};
  auto s = scale_to_integers(fs, 1);
  EXPECT_EQ(s.factors[0].table(), (std::vector<Rational>{1, 3}));
  EXPECT_EQ(s.threshold, 2);
  EXPECT_EQ(s.total_multiplier, 2);
}

TEST(Scale, IntegralUnchanged) {
  auto fs = pair();
  auto s = scale_to_integers(fs, 11);
  EXPECT_EQ(s.factors, fs);
  EXPECT_EQ(s.threshold, 11);
  EXPECT_EQ(s.multipliers, (std::vector<BigInt>{1, 1}));
}

TEST(Scale, FractionalThresholdFloors) {
  std::vector<Factor> fs{Factor({binary("A")}, {Rational(1, 3), 1}), Factor({binary("B")}, {Rational(1, 2), 2})};
  auto s = scale_to_integers(fs, Rational(5, 4));
  EXPECT_EQ(s.total_multiplier, 6);
  EXPECT_EQ(s.threshold, 7);
}

TEST(Scale, PreservesDecision) {
  gen::Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    auto fs = gen::random_factor_set(rng, 3, 3, 2, 5, true);
    Rational k(static_cast<long>(gen::uniform(rng, 0, 40)), static_cast<long>(gen::uniform(rng, 1, 6)));
    auto s = scale_to_integers(fs, k);
    Factor f = factor_product(fs), g = factor_product(s.factors);
    bool original = false, scaled = false;
    for (const auto& t : f.table()) original = original || t > k;
    for (const auto& t : g.table()) scaled = scaled || t > Rational(s.threshold);
    EXPECT_EQ(original, scaled);
  }
}

TEST(Comparator, PairAtThresholdEleven) {
  auto fs = pair();
  auto cc = build_comparator_circuit(fs, 11);
  const auto& bc = cc.circuit;
  std::vector<ValueIndex> not_a_not_b{1, 1};
  auto wires = bc.simulate(bc.one_hot(not_a_not_b));
  EXPECT_TRUE(wires[bc.output]);
  EXPECT_EQ(read_bits(cc.product, wires), 12);
  EXPECT_EQ(read_bits(cc.factor_values[0], wires), 2);
  EXPECT_EQ(read_bits(cc.factor_values[1], wires), 6);
  EXPECT_EQ(cc.widths, (std::vector<std::size_t>{2, 3}));
}

TEST(Comparator, PairAtThresholdTwelve) {
  auto fs = pair();
  auto cc = build_comparator_circuit(fs, 12);
  for_each_instantiation(cc.circuit.variables, [&](const std::vector<ValueIndex>& x) {
    EXPECT_FALSE(cc.circuit.simulate(cc.circuit.one_hot(x))[cc.circuit.output]);
  });
}

TEST(Comparator, ConstantTrue) {
  std::vector<Factor> fs{Factor({}, {1})};
  auto cc = build_comparator_circuit(fs, 0);
  EXPECT_TRUE(cc.circuit.inputs.empty());
  EXPECT_TRUE(cc.circuit.simulate({})[cc.circuit.output]);
}

TEST(Comparator, Errors) {
  auto fs = pair();
  EXPECT_THROW(build_comparator_circuit(fs, -1), InputError);
  EXPECT_THROW(build_comparator_circuit(std::vector<Factor>{}, 0), InputError);
  std::vector<Factor> fractional{Factor({binary("A")}, {Rational(1, 2), 1})};
  EXPECT_THROW(build_comparator_circuit(fractional, 0), InputError);
}

TEST(Comparator, GateFidelity) {
  gen::Rng rng(3);
  for (int i = 0; i < 60; ++i) {
    auto fs = gen::random_factor_set(rng, 3, 3, 3, 7);
    auto cc = build_comparator_circuit(fs, 0);
    auto expected = products(fs, cc.circuit.variables);
    BigInt max = *std::max_element(expected.begin(), expected.end());
    for (BigInt k = 0; k <= max + 1; ++k) {
      auto kc = build_comparator_circuit(fs, k);
      std::size_t row = 0;
      for_each_instantiation(kc.circuit.variables, [&](const std::vector<ValueIndex>& x) {
        auto wires = kc.circuit.simulate(kc.circuit.one_hot(x));
        ASSERT_EQ(read_bits(kc.product, wires), expected[row]);
        ASSERT_EQ(wires[kc.circuit.output], expected[row] > k);
        ++row;
      });
    }
  }
}

TEST(Comparator, GateCountBound) {
  gen::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    auto fs = gen::random_factor_set(rng, 4, 4, 3, 15);
    BigInt k = gen::uniform(rng, 0, 500);
    auto cc = build_comparator_circuit(fs, k);
    std::size_t table_bits = 0, width = 0;
    for (std::size_t j = 0; j < fs.size(); ++j) {
      table_bits += fs[j].table().size() * cc.widths[j];
      width += cc.widths[j];
    }
    EXPECT_LE(cc.circuit.gates.size(), 8 * (table_bits + width * width + bit_width(k)));
  }
}

TEST(Tseitin, SingleAndGate) {
  BoolCircuit bc;
  bc.variables = {binary("X")};
  bc.inputs = {{0, 0}, {0, 1}};
  bc.gates = {{GateKind::And, 0, 1}};
  bc.output = 2;
  auto cnf = tseitin(bc);
  ASSERT_EQ(cnf.variables.size(), 3u);
  EXPECT_EQ(cnf.selector_count, 2u);
  std::vector<std::set<std::pair<std::string, bool>>> clauses;
  for (std::size_t i = 0; i < cnf.factors.size(); ++i) {
    if (cnf.labels[i] == "clause") clauses.push_back(literals(cnf.factors[i]));
  }
  const std::string a = "sel.X.1", b = "sel.X.0", g = "gate.0";
  std::vector<std::set<std::pair<std::string, bool>>> expected{
      {{g, false}, {a, true}}, {{g, false}, {b, true}}, {{g, true}, {a, false}, {b, false}}, {{g, true}}};
  EXPECT_EQ(clauses, expected);
  EXPECT_EQ(std::count(cnf.labels.begin(), cnf.labels.end(), "exactly-one X"), 1);
  // The exactly-one and the output unit contradict the and gate.
  for (unsigned m = 0; m < 8; ++m) EXPECT_FALSE(satisfies(cnf, {bool(m & 1), bool(m & 2), bool(m & 4)}));
}

TEST(Tseitin, FactorsAreBoolean) {
  auto fs = pair();
  auto cnf = tseitin(build_comparator_circuit(fs, 11).circuit);
  for (std::size_t i = 0; i < cnf.factors.size(); ++i) {
    const Factor& f = cnf.factors[i];
    if (cnf.labels[i] == "clause") {
      EXPECT_LE(f.scope().size(), 3u);
    }
    for (const auto& t : f.table()) EXPECT_TRUE(t == 0 || t == 1);
  }
  EXPECT_EQ(cnf.wire_descriptions.size(), cnf.variables.size());
}

// Satisfying assignments are exactly the one-hot encodings of x with
// f(x) > k, each extended by the simulated gate values. Counted by brute force
// over every assignment of the CNF variables.
TEST(Tseitin, ModelsMatchThresholdExactly) {
  std::vector<std::pair<std::vector<Factor>, BigInt>> cases{
      {{Factor({binary("A")}, {1, 2})}, 1},
      {{Factor({binary("A")}, {3, 1})}, 0},
      {{Factor({binary("A")}, {1, 0}), Factor({binary("B")}, {1, 1})}, 0},
  };
  for (const auto& [fs, k] : cases) {
    auto cc = build_comparator_circuit(fs, k);
    auto cnf = tseitin(cc.circuit);
    ASSERT_LE(cnf.variables.size(), 22u);
    const std::size_t n = cnf.variables.size();
    std::size_t models = 0;
    std::set<std::vector<bool>> selector_parts;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
      std::vector<bool> bits(n);
      for (std::size_t i = 0; i < n; ++i) bits[i] = m >> i & 1;
      if (!satisfies(cnf, bits)) continue;
      ++models;
      std::vector<bool> sel(bits.begin(), bits.begin() + cnf.selector_count);
      EXPECT_EQ(cc.circuit.simulate(sel), bits);
      selector_parts.insert(sel);
    }
    std::size_t expected = 0;
    for (const auto& p : products(fs, cc.circuit.variables)) expected += p > k;
    EXPECT_EQ(models, expected);
    EXPECT_EQ(selector_parts.size(), expected);
  }
}

// The same correspondence on larger instances, checked per selector
// assignment: simulated gates satisfy every clause iff the selectors are
// one-hot and the product exceeds k, and flipping any single gate breaks one.
TEST(Tseitin, FunctionalConsistency) {
  gen::Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    auto fs = gen::random_factor_set(rng, 2, 2, 2, 5);
    BigInt k = gen::uniform(rng, 0, 12);
    auto cc = build_comparator_circuit(fs, k);
    auto cnf = tseitin(cc.circuit);
    const std::size_t s = cnf.selector_count;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << s); ++m) {
      std::vector<bool> sel(s);
      for (std::size_t j = 0; j < s; ++j) sel[j] = m >> j & 1;
      auto wires = cc.circuit.simulate(sel);
      bool one_hot = true;
      std::vector<ValueIndex> x(cc.circuit.variables.size(), 0);
      for (VarIndex v = 0; v < cc.circuit.variables.size(); ++v) {
        std::size_t on = 0;
        for (std::size_t j = 0; j < s; ++j) {
          if (cc.circuit.inputs[j].var == v && sel[j]) {
            ++on;
            x[v] = cc.circuit.inputs[j].value;
          }
        }
        one_hot = one_hot && on == 1;
      }
      bool expected = one_hot && wires[cc.circuit.output];
      EXPECT_EQ(satisfies(cnf, wires), expected);
      if (!expected) continue;
      for (std::size_t g = s; g < wires.size(); ++g) {
        auto flipped = wires;
        flipped[g] = !flipped[g];
        EXPECT_FALSE(satisfies(cnf, flipped));
      }
    }
  }
}

TEST(DecideViaPr, Pair) {
  auto fs = pair();
  EXPECT_TRUE(decide_mpe_via_pr(fs, 11));
  EXPECT_FALSE(decide_mpe_via_pr(fs, 12));
  EXPECT_TRUE(decide_mpe_via_pr(fs, 0));
  EXPECT_TRUE(decide_mpe_via_pr(fs, -3));
  EXPECT_TRUE(decide_mpe_via_pr(fs, Rational(23, 2)));
  EXPECT_THROW(decide_mpe_via_pr(std::vector<Factor>{}, 0), InputError);
}

TEST(DecideViaPr, CnfModelCountThroughCompiler) {
  auto fs = pair();
  auto eleven = tseitin(build_comparator_circuit(fs, 11).circuit);
  auto twelve = tseitin(build_comparator_circuit(fs, 12).circuit);
  EXPECT_EQ(marginal(compile_ordered(eleven.factors), {}), 1);
  EXPECT_EQ(marginal(compile_ordered(twelve.factors), {}), 0);
}

TEST(MpeViaCompiler, Examples) {
  EXPECT_EQ(mpe_via_compiler(pair()), 12);
  EXPECT_EQ(mpe_via_compiler(std::vector<Factor>{Factor({binary("A")}, {5, 1})}), 5);
  std::vector<Factor> with_zero{testing::pair_f2(), Factor::constant({binary("B")}, 0)};
  EXPECT_EQ(mpe_via_compiler(with_zero), 0);
  std::vector<Factor> halves{Factor({binary("A")}, {Rational(1, 2), Rational(3, 2)})};
  EXPECT_EQ(mpe_via_compiler(halves), Rational(3, 2));
}

TEST(MpeViaCompiler, UsesTheSuppliedCompiler) {
  std::size_t calls = 0;
  Compiler counting = [&](std::span<const Factor> fs) {
    ++calls;
    return compile_ordered(fs);
  };
  EXPECT_EQ(mpe_via_compiler(pair(), counting), 12);
  // Binary search over [0, 2·6] probes 6, 9, 11.
  EXPECT_EQ(calls, 3u);
}

TEST(MpeViaCompiler, PropagatesCompilerLimits) {
  Compiler tiny = [](std::span<const Factor> fs) { return compile_ordered(fs, OrderedOptions{{}, 3}); };
  EXPECT_THROW(mpe_via_compiler(pair(), tiny), LimitError);
}

TEST(EndToEnd, AgreesWithBruteForce) {
  gen::Rng rng(11);
  for (int i = 0; i < 8; ++i) {
    auto fs = gen::random_factor_set(rng, 3, 2, 2, 3);
    Factor f = factor_product(fs);
    Circuit c = compile_polynomial(f);
    auto expected = oracle_mpe(f).value;
    for (long k = 0; k <= static_cast<long>(as_integer(expected)) + 1; ++k) {
      EXPECT_EQ(decide_mpe_via_pr(fs, k), decide_mpe(c, k));
    }
    EXPECT_EQ(mpe_via_compiler(fs), expected);
  }
}

}  // namespace
}  // namespace acforge
