#include <gtest/gtest.h>

#include "test_support.hpp"

namespace acforge {
namespace {

using testing::binary;

Factor pair_poly() { return testing::pair_product(); }

TEST(FactorOfCircuit, RepeatedIndicator) {
  CircuitBuilder b({binary("X")});
  NodeId x = b.indicator(0, 0);
  NodeId root = b.sum({b.product({b.parameter(2), x}), b.product({b.parameter(1), b.indicator(0, 1)}),
                       b.product({b.parameter(3), x})});
  Circuit c = std::move(b).build(root);
  EXPECT_EQ(factor_of_circuit(c), Factor({binary("X")}, {5, 1}));
}

TEST(FactorOfCircuit, SmoothOr) {
  EXPECT_EQ(factor_of_circuit(testing::smooth_or()).table(), (std::vector<Rational>{1, 0, 1, 1}));
}

TEST(FactorOfCircuit, ZeroParameter) {
  Circuit c({binary("A"), binary("B")}, {Node::parameter(0)}, 0);
  EXPECT_EQ(factor_of_circuit(c), Factor::constant(c.variables(), 0));
}

TEST(FactorOfCircuit, LimitExceeded) {
  Circuit c(gen::binary_variables(3), {Node::parameter(1)}, 0);
  EXPECT_THROW(factor_of_circuit(c, 2), LimitError);
}

TEST(FactorOfCircuit, MatchesNaiveTable) {
  gen::Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    Circuit c = gen::unbalanced_circuit(rng, 4);
    EXPECT_EQ(factor_of_circuit(c).table(), testing::naive_table(c));
  }
}

TEST(OracleMarginal, Examples) {
  EXPECT_EQ(oracle_marginal(pair_poly(), {}), 29);
  EXPECT_EQ(oracle_marginal(pair_poly(), {{"A", "0"}}), 22);
  EXPECT_EQ(oracle_marginal(pair_poly(), {{"A", "0"}, {"B", "1"}}), 10);
}

TEST(OracleMarginal, OutOfDomain) {
  EXPECT_THROW(oracle_marginal(pair_poly(), {{"A", "2"}}), InputError);
  EXPECT_THROW(oracle_marginal(pair_poly(), {{"Z", "1"}}), InputError);
}

TEST(OracleMpe, Examples) {
  auto r = oracle_mpe(pair_poly());
  EXPECT_EQ(r.value, 12);
  EXPECT_EQ(r.witness, (Instantiation{{"A", "0"}, {"B", "0"}}));
  auto s = oracle_mpe(pair_poly(), {{"A", "1"}});
  EXPECT_EQ(s.value, 4);
  EXPECT_EQ(s.witness, (Instantiation{{"A", "1"}, {"B", "0"}}));
}

TEST(OracleMpe, TiesGoToFirstRow) {
  auto r = oracle_mpe(Factor::constant({binary("A"), binary("B")}, 3));
  EXPECT_EQ(r.witness, (Instantiation{{"A", "1"}, {"B", "1"}}));
}

TEST(OracleMap, Examples) {
  std::vector<std::string> a{"A"}, ab{"A", "B"}, none;
  auto r = oracle_map(pair_poly(), a);
  EXPECT_EQ(r.value, 22);
  EXPECT_EQ(r.witness, (Instantiation{{"A", "0"}}));
  auto s = oracle_map(pair_poly(), ab);
  EXPECT_EQ(s.value, 12);
  EXPECT_EQ(s.witness, (Instantiation{{"A", "0"}, {"B", "0"}}));
  auto t = oracle_map(pair_poly(), none);
  EXPECT_EQ(t.value, 29);
  EXPECT_TRUE(t.witness.empty());
}

TEST(OracleMap, RejectsUnknownVariable) {
  std::vector<std::string> z{"Z"};
  EXPECT_THROW(oracle_map(pair_poly(), z), InputError);
}

TEST(ProjectFactor, SumOutB) {
  std::vector<std::string> b{"B"};
  EXPECT_EQ(project_factor(pair_poly(), b), Factor({binary("A")}, {7, 22}));
}

// Marginals agree with the explicitly projected factor, computed here by a
// direct row scan.
TEST(OracleProperties, MarginalMatchesProjection) {
  gen::Rng rng(3);
  auto vars = gen::binary_variables(4);
  for (int i = 0; i < 100; ++i) {
    Factor f = gen::random_factor(rng, vars, 6, true);
    for (const auto& y : testing::all_partial_instantiations(vars)) {
      std::vector<std::string> sum_out;
      for (const auto& v : vars) {
        if (!y.contains(v.name)) sum_out.push_back(v.name);
      }
      Factor g = project_factor(f, sum_out);
      Rational scan = 0;
      for_each_instantiation(vars, [&](const std::vector<ValueIndex>& x) {
        bool ok = true;
        for (VarIndex v = 0; v < vars.size(); ++v) ok = ok && y.compatible(vars[v].name, vars[v].values[x[v]]);
        if (ok) scan += f.table()[f.offset(x)];
      });
      EXPECT_EQ(oracle_marginal(f, y), scan);
      EXPECT_EQ(factor_value(g, y), scan);
    }
  }
}

TEST(OracleProperties, MapOverAllIsMpe) {
  gen::Rng rng(4);
  auto vars = gen::binary_variables(3);
  std::vector<std::string> all{"A", "B", "C"};
  for (int i = 0; i < 100; ++i) {
    Factor f = gen::random_factor(rng, vars, 4);
    auto map = oracle_map(f, all);
    auto mpe = oracle_mpe(f);
    EXPECT_EQ(map.value, mpe.value);
    EXPECT_EQ(map.witness, mpe.witness);
  }
}

}  // namespace
}  // namespace acforge
