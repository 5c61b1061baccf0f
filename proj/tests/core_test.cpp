#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

namespace acforge {
namespace {

using testing::binary;

std::vector<Variable> abc() { return {binary("A"), binary("B"), binary("C")}; }

TEST(Rational, FormatsReducedAndIntegersBare) {
  EXPECT_EQ(format_rational(Rational(6, 4)), "3/2");
  EXPECT_EQ(format_rational(Rational(8, 4)), "2");
  EXPECT_EQ(format_rational(Rational(0, 5)), "0");
}

TEST(Rational, ParsesFractionsAndIntegers) {
  EXPECT_EQ(parse_rational("4/6"), Rational(2, 3));
  EXPECT_EQ(parse_rational("12"), Rational(12));
  EXPECT_EQ(parse_rational("-3/4", true), Rational(-3, 4));
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational("-1"), InputError);
  EXPECT_THROW(parse_rational("x"), InputError);
  EXPECT_THROW(parse_rational(""), InputError);
}

TEST(Rational, FloorRoundsTowardNegativeInfinity) {
  EXPECT_EQ(floor_of(Rational(7, 2)), 3);
  EXPECT_EQ(floor_of(Rational(-7, 2)), -4);
  EXPECT_EQ(floor_of(Rational(4)), 4);
}

TEST(Rational, ArithmeticMatchesIntegerCrossMultiplication) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(0, 1000), den(1, 1000);
  for (int i = 0; i < 2000; ++i) {
    long a = num(rng), b = den(rng), c = num(rng), d = den(rng);
    Rational x(a, b), y(c, d);
    Rational p = x * y, s = x + y;
    // p = ac/bd and s = (ad + cb)/bd, checked by cross-multiplying.
    EXPECT_EQ(BigInt(boost::multiprecision::numerator(p)) * b * d,
              BigInt(a) * c * boost::multiprecision::denominator(p));
    EXPECT_EQ(BigInt(boost::multiprecision::numerator(s)) * b * d,
              (BigInt(a) * d + BigInt(c) * b) * boost::multiprecision::denominator(s));
    EXPECT_EQ(boost::multiprecision::gcd(boost::multiprecision::numerator(s),
                                         boost::multiprecision::denominator(s)) == 1 ||
                  s == 0,
              true);
  }
}

TEST(Variable, RejectsBadDeclarations) {
  EXPECT_THROW(validate_variable({"A", {"1"}}), InputError);
  EXPECT_THROW(validate_variable({"A", {"1", "1"}}), InputError);
  EXPECT_THROW(validate_variable({"", {"1", "0"}}), InputError);
  std::vector<Variable> dup{binary("A"), binary("A")};
  EXPECT_THROW(validate_variables(dup), InputError);
  EXPECT_NO_THROW(validate_variable({"C", {"r", "g", "b"}}));
}

TEST(Instantiation, CompatibilityFollowsAssignment) {
  Instantiation y{{"A", "1"}};
  EXPECT_TRUE(y.compatible("A", "1"));
  EXPECT_FALSE(y.compatible("A", "0"));
  EXPECT_TRUE(y.compatible("B", "0"));
}

TEST(CircuitInput, FromPartialInstantiation) {
  auto vars = std::vector<Variable>{binary("A"), binary("B")};
  auto in = input_from_instantiation(vars, {{"A", "1"}});
  EXPECT_EQ(in.lambda, (std::vector<std::vector<std::uint8_t>>{{1, 0}, {1, 1}}));
}

TEST(CircuitInput, EmptyInstantiationSetsAllIndicators) {
  auto vars = std::vector<Variable>{binary("A"), binary("B")};
  EXPECT_EQ(input_from_instantiation(vars, {}), CircuitInput::all_ones(vars));
}

TEST(CircuitInput, CompleteInstantiation) {
  auto in = input_from_instantiation(abc(), {{"A", "1"}, {"B", "1"}, {"C", "1"}});
  EXPECT_EQ(in.lambda, (std::vector<std::vector<std::uint8_t>>{{1, 0}, {1, 0}, {1, 0}}));
}

TEST(CircuitInput, RejectsUnknownVariablesAndValues) {
  auto vars = std::vector<Variable>{binary("A")};
  EXPECT_THROW(input_from_instantiation(vars, {{"Z", "1"}}), InputError);
  EXPECT_THROW(input_from_instantiation(vars, {{"A", "2"}}), InputError);
}

TEST(CompatibleInstantiations, TwoCompatible) {
  CircuitInput in{{{1, 1}, {1, 0}, {1, 0}}};
  auto xs = compatible_instantiations(in, abc());
  std::vector<Instantiation> expected{{{"A", "1"}, {"B", "1"}, {"C", "1"}},
                                      {{"A", "0"}, {"B", "1"}, {"C", "1"}}};
  EXPECT_EQ(xs, expected);
}

TEST(CompatibleInstantiations, NoneCompatible) {
  CircuitInput in{{{0, 0}, {1, 0}, {1, 0}}};
  EXPECT_TRUE(compatible_instantiations(in, abc()).empty());
}

TEST(CompatibleInstantiations, AllOnesSingleVariable) {
  std::vector<Variable> vars{binary("A")};
  auto xs = compatible_instantiations(CircuitInput::all_ones(vars), vars);
  EXPECT_EQ(xs, (std::vector<Instantiation>{{{"A", "1"}}, {{"A", "0"}}}));
}

TEST(CompatibleInstantiations, RejectsMismatchedInput) {
  CircuitInput in{{{1, 1}}};
  EXPECT_THROW(compatible_instantiations(in, abc()), InputError);
}

TEST(Factor, ValueLookups) {
  EXPECT_EQ(factor_value(testing::pair_product(), {{"A", "0"}, {"B", "1"}}), 10);
  EXPECT_EQ(factor_value(testing::pair_f1(), {{"A", "1"}}), 1);
  EXPECT_EQ(factor_value(testing::pair_f2(), {{"A", "0"}, {"B", "0"}}), 6);
}

TEST(Factor, ValueNeedsCompleteInstantiation) {
  EXPECT_THROW(factor_value(testing::pair_f2(), {{"A", "0"}}), InputError);
}

TEST(Factor, RejectsBadTables) {
  EXPECT_THROW(Factor({binary("A")}, {1, 2, 3}), InputError);
  EXPECT_THROW(Factor({binary("A")}, {1, -1}), InputError);
}

TEST(Factor, RowMajorLastVariableFastest) {
  Factor f = testing::pair_f2();
  EXPECT_EQ(f.offset(std::vector<ValueIndex>{0, 1}), 1u);
  EXPECT_EQ(f.offset(std::vector<ValueIndex>{1, 0}), 2u);
}

TEST(FactorProduct, Pair) {
  std::vector<Factor> fs{testing::pair_f1(), testing::pair_f2()};
  EXPECT_EQ(factor_product(fs), testing::pair_product());
}

TEST(FactorProduct, SingleFactorIsIdentity) {
  std::vector<Factor> fs{testing::pair_f2()};
  EXPECT_EQ(factor_product(fs), testing::pair_f2());
}

TEST(FactorProduct, AllOnesExtendsScope) {
  std::vector<Factor> fs{testing::pair_f1(), Factor::constant({binary("A"), binary("B")}, 1)};
  EXPECT_EQ(factor_product(fs), Factor({binary("A"), binary("B")}, {1, 1, 2, 2}));
}

TEST(FactorProduct, RejectsInconsistentDomains) {
  std::vector<Factor> fs{testing::pair_f1(), Factor({{"A", {"x", "y"}}}, {1, 1})};
  EXPECT_THROW(factor_product(fs), InputError);
}

// Values at every complete instantiation of the union scope, independent of
// the scope order of the product.
Rational value_at(const Factor& f, const Instantiation& x) { return factor_value(f, x); }

TEST(FactorProduct, CommutativeAndAssociative) {
  gen::Rng rng(11);
  auto vars = gen::binary_variables(4);
  for (int trial = 0; trial < 200; ++trial) {
    auto fs = gen::random_factor_set(rng, 4, 3, 3, 5, true);
    while (fs.size() < 3) fs.push_back(gen::random_factor(rng, {vars[trial % 4]}, 5, true));
    std::vector<Factor> abc_order{fs[0], fs[1], fs[2]};
    std::vector<Factor> cba_order{fs[2], fs[1], fs[0]};
    std::vector<Factor> left{fs[0], fs[1]};
    std::vector<Factor> nested{factor_product(left), fs[2]};
    std::vector<Factor> right{fs[1], fs[2]};
    std::vector<Factor> nested_right{fs[0], factor_product(right)};
    Factor p = factor_product(abc_order);
    Factor q = factor_product(cba_order);
    Factor r = factor_product(nested);
    Factor s = factor_product(nested_right);
    for_each_instantiation(p.scope(), [&](const std::vector<ValueIndex>& idx) {
      Instantiation x = instantiation_of(p.scope(), idx);
      Rational expected = 1;
      for (const auto& f : fs) expected *= value_at(f, x);
      EXPECT_EQ(value_at(p, x), expected);
      EXPECT_EQ(value_at(q, x), expected);
      EXPECT_EQ(value_at(r, x), expected);
      EXPECT_EQ(value_at(s, x), expected);
    });
  }
}

TEST(Circuit, RejectsMalformedNodes) {
  std::vector<Variable> vars{binary("A")};
  EXPECT_THROW(Circuit(vars, {}, 0), InputError);
  EXPECT_THROW(Circuit(vars, {Node::sum({})}, 0), InputError);
  EXPECT_THROW(Circuit(vars, {Node::indicator(0, 0), Node::sum({1})}, 1), InputError);
  EXPECT_THROW(Circuit(vars, {Node::indicator(1, 0)}, 0), InputError);
  EXPECT_THROW(Circuit(vars, {Node::indicator(0, 2)}, 0), InputError);
  EXPECT_THROW(Circuit(vars, {Node::parameter(-1)}, 0), InputError);
  EXPECT_THROW(Circuit(vars, {Node::parameter(1)}, 3), InputError);
}

TEST(CircuitBuilder, DropsUnreachableNodesAndRenumbers) {
  CircuitBuilder b({binary("A")});
  b.parameter(5);
  NodeId x = b.indicator(0, 0);
  NodeId y = b.indicator(0, 1);
  NodeId root = b.sum({x, y});
  Circuit c = std::move(b).build(root);
  EXPECT_EQ(c.size(), 3u);
  EXPECT_EQ(c.root(), 2u);
  EXPECT_EQ(c.node(2).children, (std::vector<NodeId>{0, 1}));
  EXPECT_EQ(c.edge_count(), 2u);
}

TEST(Limits, ParsesOverrides) {
  Limits l = Limits::parse("max_vars=5,subcircuits=10");
  EXPECT_EQ(l.max_vars, 5u);
  EXPECT_EQ(l.subcircuits, 10u);
  EXPECT_EQ(Limits::parse("subcircuits=3").max_vars, 20u);
  EXPECT_THROW(Limits::parse("max_vars"), InputError);
  EXPECT_THROW(Limits::parse("max_vars=x"), InputError);
  EXPECT_THROW(Limits::parse("depth=3"), InputError);
}

}  // namespace
}  // namespace acforge
