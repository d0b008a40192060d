#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lightcone/errors.hpp"
#include "lightcone/jet.hpp"

namespace lightcone {

/// Parameter bindings for expression evaluation (named constants like a, r).
using ParamMap = std::map<std::string, double>;

namespace expr {

enum class Func { exp, log, sin, cos, sinh, cosh, tanh, sech, csch, sec, csc, sqrt };

inline const std::map<std::string, Func>& function_table() {
  static const std::map<std::string, Func> t = {
      {"exp", Func::exp},   {"log", Func::log},   {"sin", Func::sin},
      {"cos", Func::cos},   {"sinh", Func::sinh}, {"cosh", Func::cosh},
      {"tanh", Func::tanh}, {"sech", Func::sech}, {"csch", Func::csch},
      {"sec", Func::sec},   {"csc", Func::csc},   {"sqrt", Func::sqrt}};
  return t;
}

inline const char* func_name(Func f) {
  for (const auto& [name, fn] : function_table())
    if (fn == f) return name.c_str();
  return "?";
}

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { number, variable, parameter, neg, add, sub, mul, div, pow, call };
  Kind kind;
  double number = 0.0;       // number
  int var = -1;              // variable index
  std::string name;          // parameter name
  Func func = Func::exp;     // call
  NodePtr a, b;              // operands

  static NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::number;
    n->number = v;
    return n;
  }
  static NodePtr make_variable(int idx) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::variable;
    n->var = idx;
    return n;
  }
  static NodePtr make_parameter(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::parameter;
    n->name = std::move(name);
    return n;
  }
  static NodePtr make_unary(Kind k, NodePtr a) {
    // canonical form: negated literals fold into negative numbers
    if (k == Kind::neg && a->kind == Kind::number) return make_number(-a->number);
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    return n;
  }
  static NodePtr make_binary(Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }
  static NodePtr make_call(Func f, NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::call;
    n->func = f;
    n->a = std::move(a);
    return n;
  }
};

inline bool equal(const NodePtr& x, const NodePtr& y) {
  if (!x || !y) return x == y;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case Node::Kind::number: return x->number == y->number;
    case Node::Kind::variable: return x->var == y->var;
    case Node::Kind::parameter: return x->name == y->name;
    case Node::Kind::neg: return equal(x->a, y->a);
    case Node::Kind::call: return x->func == y->func && equal(x->a, y->a);
    default: return equal(x->a, y->a) && equal(x->b, y->b);
  }
}

// ---- tokenizer ----

struct Token {
  enum class Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };
  Kind kind;
  std::size_t offset;
  double number = 0.0;
  std::string text;
};

inline std::vector<Token> tokenize(const std::string& src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t start = i;
      while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.'))
        ++i;
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          ++j;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
          i = j;
        }
      }
      double v = 0.0;
      auto [p, ec] = std::from_chars(src.data() + start, src.data() + i, v);
      if (ec != std::errc() || p != src.data() + i)
        throw ParseError(start, {"number"});
      out.push_back({Token::Kind::number, start, v, src.substr(start, i - start)});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        ++i;
      out.push_back({Token::Kind::ident, start, 0.0, src.substr(start, i - start)});
      continue;
    }
    Token::Kind k;
    switch (c) {
      case '+': k = Token::Kind::plus; break;
      case '-': k = Token::Kind::minus; break;
      case '*': k = Token::Kind::star; break;
      case '/': k = Token::Kind::slash; break;
      case '^': k = Token::Kind::caret; break;
      case '(': k = Token::Kind::lparen; break;
      case ')': k = Token::Kind::rparen; break;
      default: throw ParseError(i, {"operator", "number", "identifier", "'('"});
    }
    out.push_back({k, i, 0.0, std::string(1, c)});
    ++i;
  }
  out.push_back({Token::Kind::end, src.size(), 0.0, ""});
  return out;
}

// ---- parser (recursive descent, '^' binds tightest and right-associative) ----

class Parser {
 public:
  Parser(const std::string& src, std::vector<std::string> variables)
      : tokens_(tokenize(src)), vars_(std::move(variables)) {}

  NodePtr parse() {
    NodePtr e = expression();
    if (peek().kind != Token::Kind::end) fail({"operator", "end of input"});
    return e;
  }

  const std::set<std::string>& parameters() const { return params_; }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<std::string> vars_;
  std::set<std::string> params_;

  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }
  bool accept(Token::Kind k) {
    if (peek().kind == k) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    // Errors at end of input point at the last consumed token.
    std::size_t off = peek().offset;
    if (peek().kind == Token::Kind::end && pos_ > 0) off = tokens_[pos_ - 1].offset;
    throw ParseError(off, std::move(expected));
  }

  NodePtr expression() {
    NodePtr e = term();
    for (;;) {
      if (accept(Token::Kind::plus))
        e = Node::make_binary(Node::Kind::add, e, term());
      else if (accept(Token::Kind::minus))
        e = Node::make_binary(Node::Kind::sub, e, term());
      else
        return e;
    }
  }

  NodePtr term() {
    NodePtr e = unary();
    for (;;) {
      if (accept(Token::Kind::star))
        e = Node::make_binary(Node::Kind::mul, e, unary());
      else if (accept(Token::Kind::slash))
        e = Node::make_binary(Node::Kind::div, e, unary());
      else
        return e;
    }
  }

  NodePtr unary() {
    if (accept(Token::Kind::minus)) return Node::make_unary(Node::Kind::neg, unary());
    if (accept(Token::Kind::plus)) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept(Token::Kind::caret)) return Node::make_binary(Node::Kind::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::number:
        advance();
        return Node::make_number(t.number);
      case Token::Kind::lparen: {
        advance();
        NodePtr e = expression();
        if (!accept(Token::Kind::rparen)) fail({"')'"});
        return e;
      }
      case Token::Kind::ident: {
        advance();
        if (t.text == "pi") return Node::make_number(M_PI);
        auto fn = function_table().find(t.text);
        if (fn != function_table().end()) {
          if (!accept(Token::Kind::lparen)) fail({"'('"});
          NodePtr arg = expression();
          if (!accept(Token::Kind::rparen)) fail({"')'"});
          return Node::make_call(fn->second, arg);
        }
        if (peek().kind == Token::Kind::lparen) throw UnknownIdentifier(t.text);
        for (int i = 0; i < static_cast<int>(vars_.size()); ++i)
          if (vars_[i] == t.text) return Node::make_variable(i);
        params_.insert(t.text);
        return Node::make_parameter(t.text);
      }
      default:
        fail({"number", "identifier", "'('", "'-'"});
    }
  }
};

// ---- evaluation ----

inline bool is_constant(const NodePtr& n, const ParamMap& params, double* out);

template <int N>
Jet<N> eval(const NodePtr& n, const std::array<Jet<N>, 3>& vars, int nvars,
            const ParamMap& params) {
  using K = Node::Kind;
  switch (n->kind) {
    case K::number: return Jet<N>::constant(n->number);
    case K::variable:
      if (n->var >= nvars) throw UnknownIdentifier("variable index out of range");
      return vars[static_cast<std::size_t>(n->var)];
    case K::parameter: {
      auto it = params.find(n->name);
      if (it == params.end()) throw UnknownIdentifier(n->name);
      return Jet<N>::constant(it->second);
    }
    case K::neg: return -eval(n->a, vars, nvars, params);
    case K::add: return eval(n->a, vars, nvars, params) + eval(n->b, vars, nvars, params);
    case K::sub: return eval(n->a, vars, nvars, params) - eval(n->b, vars, nvars, params);
    case K::mul: return eval(n->a, vars, nvars, params) * eval(n->b, vars, nvars, params);
    case K::div: return eval(n->a, vars, nvars, params) / eval(n->b, vars, nvars, params);
    case K::pow: {
      double p = 0.0;
      Jet<N> base = eval(n->a, vars, nvars, params);
      if (is_constant(n->b, params, &p)) return pow_const(base, p);
      return exp(eval(n->b, vars, nvars, params) * log(base));
    }
    case K::call: {
      Jet<N> a = eval(n->a, vars, nvars, params);
      switch (n->func) {
        case Func::exp: return exp(a);
        case Func::log: return log(a);
        case Func::sin: return sin(a);
        case Func::cos: return cos(a);
        case Func::sinh: return sinh(a);
        case Func::cosh: return cosh(a);
        case Func::tanh: return tanh(a);
        case Func::sech: return sech(a);
        case Func::csch: return csch(a);
        case Func::sec: return sec(a);
        case Func::csc: return csc(a);
        case Func::sqrt: return sqrt(a);
      }
    }
  }
  throw Error("unreachable expression kind");
}

inline bool is_constant(const NodePtr& n, const ParamMap& params, double* out) {
  using K = Node::Kind;
  switch (n->kind) {
    case K::number: *out = n->number; return true;
    case K::variable: return false;
    case K::parameter: {
      auto it = params.find(n->name);
      if (it == params.end()) return false;
      *out = it->second;
      return true;
    }
    case K::neg: {
      double a;
      if (!is_constant(n->a, params, &a)) return false;
      *out = -a;
      return true;
    }
    case K::call: {
      double a;
      if (!is_constant(n->a, params, &a)) return false;
      Jet<2> j = eval<2>(n, {}, 0, params);
      *out = j.value;
      return true;
    }
    default: {
      double a, b;
      if (!n->a || !n->b) return false;
      if (!is_constant(n->a, params, &a) || !is_constant(n->b, params, &b)) return false;
      Jet<2> j = eval<2>(n, {}, 0, params);
      *out = j.value;
      return true;
    }
  }
}

// ---- canonical printer ----

inline int precedence(Node::Kind k) {
  switch (k) {
    case Node::Kind::add:
    case Node::Kind::sub: return 1;
    case Node::Kind::mul:
    case Node::Kind::div: return 2;
    case Node::Kind::neg: return 3;
    case Node::Kind::pow: return 4;
    default: return 5;
  }
}

/// Negative literals print with a leading '-', so they bind like a negation.
inline int node_precedence(const NodePtr& n) {
  if (n->kind == Node::Kind::number && std::signbit(n->number)) return 3;
  return precedence(n->kind);
}

inline std::string number_to_string(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

inline void print_node(const NodePtr& n, std::string& out, int parent_prec, bool rhs) {
  const int prec = node_precedence(n);
  const bool need_parens =
      prec < parent_prec || (prec == parent_prec && rhs && prec != 4) ||
      (n->kind == Node::Kind::pow && parent_prec == 4 && !rhs);
  if (need_parens) out += '(';
  using K = Node::Kind;
  switch (n->kind) {
    case K::number: out += number_to_string(n->number); break;
    case K::variable: out += (n->var == 0 ? "x" : n->var == 1 ? "y" : "z"); break;
    case K::parameter: out += n->name; break;
    case K::neg:
      out += '-';
      print_node(n->a, out, 3, true);
      break;
    case K::add:
      print_node(n->a, out, 1, false);
      out += " + ";
      print_node(n->b, out, 1, true);
      break;
    case K::sub:
      print_node(n->a, out, 1, false);
      out += " - ";
      print_node(n->b, out, 1, true);
      break;
    case K::mul:
      print_node(n->a, out, 2, false);
      out += "*";
      print_node(n->b, out, 2, true);
      break;
    case K::div:
      print_node(n->a, out, 2, false);
      out += "/";
      print_node(n->b, out, 2, true);
      break;
    case K::pow:
      print_node(n->a, out, 4, false);
      out += "^";
      print_node(n->b, out, 4, true);
      break;
    case K::call:
      out += func_name(n->func);
      out += '(';
      print_node(n->a, out, 0, false);
      out += ')';
      break;
  }
  if (need_parens) out += ')';
}

inline std::string to_string(const NodePtr& n) {
  std::string out;
  print_node(n, out, 0, false);
  return out;
}

}  // namespace expr

/// A parsed conformal-exponent expression sigma over chart variables
/// x, y (rectangle charts) or x, y, z (sphere charts), numeric constants
/// and named parameters. The surface factor is e^sigma.
struct ConformalFactor {
  expr::NodePtr root;
  std::set<std::string> parameters;   // free identifiers needing bindings
  std::string canonical;              // printer output; parses back to an equal tree

  bool uses_variable(int idx) const { return uses_variable(root, idx); }

  template <int N>
  Jet<N> eval(const std::array<Jet<N>, 3>& vars, int nvars, const ParamMap& params) const {
    return expr::eval<N>(root, vars, nvars, params);
  }

 private:
  static bool uses_variable(const expr::NodePtr& n, int idx) {
    if (!n) return false;
    if (n->kind == expr::Node::Kind::variable) return n->var == idx;
    return uses_variable(n->a, idx) || uses_variable(n->b, idx);
  }
};

/// Parse an expression over chart variables x, y, z. Unknown identifiers in
/// function position are rejected; bare identifiers become named parameters.
inline ConformalFactor parse_sigma(const std::string& source) {
  expr::Parser p(source, {"x", "y", "z"});
  ConformalFactor f;
  f.root = p.parse();
  f.parameters = p.parameters();
  f.canonical = expr::to_string(f.root);
  return f;
}

}  // namespace lightcone
