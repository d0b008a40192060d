#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "lightcone/expression.hpp"

using namespace lightcone;

namespace {
std::mt19937_64 rng(90125);
double uniform(double a, double b) {
  return a + (b - a) * std::ldexp(static_cast<double>(rng() >> 11), -53);
}

double eval_value(const ConformalFactor& f, double x, double y, const ParamMap& p = {}) {
  const std::array<Jet2, 3> vars = {Jet2::variable(x, 0), Jet2::variable(y, 1),
                                    Jet2::constant(0.0)};
  return f.eval<2>(vars, 2, p).value;
}

// Random expression trees over x, y for the print/parse round trip.
expr::NodePtr random_tree(int depth) {
  using expr::Node;
  const int pick = depth <= 0 ? static_cast<int>(rng() % 3) : static_cast<int>(rng() % 8);
  switch (pick) {
    case 0: return Node::make_number(std::round(uniform(-4, 4) * 16) / 16);
    case 1: return Node::make_variable(static_cast<int>(rng() % 2));
    case 2: return Node::make_parameter(rng() % 2 ? "a" : "b");
    case 3: return Node::make_unary(Node::Kind::neg, random_tree(depth - 1));
    case 4:
      return Node::make_binary(static_cast<Node::Kind>(static_cast<int>(Node::Kind::add) +
                                                       static_cast<int>(rng() % 4)),
                               random_tree(depth - 1), random_tree(depth - 1));
    case 5:
      return Node::make_binary(Node::Kind::pow, random_tree(depth - 1), random_tree(depth - 1));
    default: {
      const auto& tbl = expr::function_table();
      auto it = tbl.begin();
      std::advance(it, static_cast<long>(rng() % tbl.size()));
      return Node::make_call(it->second, random_tree(depth - 1));
    }
  }
}
}  // namespace

TEST_CASE("sech-style factor parses and evaluates") {
  const ConformalFactor f = parse_sigma("log(2) - log(cosh(x))");
  // e^sigma = 2 sech x
  for (double x : {-1.0, 0.0, 0.5, 2.0}) {
    const double want = std::log(2.0 / std::cosh(x));
    CHECK(eval_value(f, x, 0.3) == Catch::Approx(want).margin(1e-14));
  }
  CHECK(f.parameters.empty());
}

TEST_CASE("unbalanced parenthesis reports the opening offset") {
  try {
    parse_sigma("x + (");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 4);
    CHECK_FALSE(e.expected.empty());
  }
}

TEST_CASE("parse errors carry offsets and expected sets") {
  try {
    parse_sigma("x + * y");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 4);
  }
  try {
    parse_sigma("cos x");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 4);
    REQUIRE_FALSE(e.expected.empty());
    CHECK(e.expected[0] == "'('");
  }
  CHECK_THROWS_AS(parse_sigma("x + )"), ParseError);
  CHECK_THROWS_AS(parse_sigma(""), ParseError);
}

TEST_CASE("unknown function identifiers are rejected") {
  CHECK_THROWS_AS(parse_sigma("foo(x)"), UnknownIdentifier);
  // bare identifiers become named parameters instead
  const ConformalFactor f = parse_sigma("a*x + b");
  CHECK(f.parameters == std::set<std::string>{"a", "b"});
  CHECK(eval_value(f, 2.0, 0.0, {{"a", 3.0}, {"b", 1.0}}) == Catch::Approx(7.0));
  CHECK_THROWS_AS(eval_value(f, 2.0, 0.0, {{"a", 3.0}}), UnknownIdentifier);
}

TEST_CASE("constant zero factor") {
  const ConformalFactor f = parse_sigma("0");
  CHECK(f.canonical == "0");
  CHECK(eval_value(f, 1.0, 2.0) == 0.0);
}

TEST_CASE("powers") {
  const ConformalFactor f = parse_sigma("x^2 + 2^x");
  CHECK(eval_value(f, 3.0, 0.0) == Catch::Approx(9.0 + 8.0).margin(1e-12));
  const ConformalFactor g = parse_sigma("x^-2");
  CHECK(eval_value(g, 2.0, 0.0) == Catch::Approx(0.25).margin(1e-14));
}

TEST_CASE("pi constant") {
  const ConformalFactor f = parse_sigma("sin(pi/2)");
  CHECK(eval_value(f, 0, 0) == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("canonical printer round trip") {
  const char* sources[] = {
      "log(2) - log(cosh(x))", "x - log(exp(2*x) - 1)", "-x*(y - 1)/(x + 2)",
      "a*sech(x) + b*csc(y)",  "x^2^3",                 "-(x + y)^2",
      "1/(1 + x*x)",           "sin(cos(x*y))",
  };
  for (const char* src : sources) {
    const ConformalFactor f = parse_sigma(src);
    const ConformalFactor g = parse_sigma(f.canonical);
    INFO(src << "  ->  " << f.canonical);
    CHECK(expr::equal(f.root, g.root));
  }
  for (int trial = 0; trial < 300; ++trial) {
    auto tree = random_tree(4);
    const std::string printed = expr::to_string(tree);
    INFO(printed);
    expr::Parser p(printed, {"x", "y", "z"});
    CHECK(expr::equal(tree, p.parse()));
  }
}
