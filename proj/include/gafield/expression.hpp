#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "gafield/multivector.hpp"

namespace gafield {

// arithmetic expressions over named variables; supports + - * / ^, unary signs,
// the functions sin cos tan sinh cosh tanh exp log sqrt abs pow, and the constant pi
class Expression {
  struct Node;
  using Ptr = std::shared_ptr<const Node>;
  struct Node {
    enum class Kind { number, variable, unary_minus, add, sub, mul, div, pow, call } kind;
    double value = 0.0;
    std::string name;            // variable or function
    Ptr a, b;                    // operands (unary uses a)
    std::vector<Ptr> args;       // call arguments
  };

 public:
  Expression() : root_(number_node(0.0)) {}

  static Expression parse(const std::string& text) {
    Parser p{text, 0};
    Expression e(p.parse_expr());
    p.skip_ws();
    if (p.pos != text.size())
      throw ga_error("expression: unexpected '" + std::string(1, text[p.pos]) +
                     "' at position " + std::to_string(p.pos));
    return e;
  }

  double eval(const std::map<std::string, double>& vars) const { return eval(root_, vars); }

  Expression derivative(const std::string& var) const { return Expression(diff(root_, var)); }

  void collect_variables(std::vector<std::string>& out) const { collect(root_, out); }

  std::string to_string() const { return print(root_); }

 private:
  explicit Expression(Ptr r) : root_(std::move(r)) {}
  Ptr root_;

  // ---- construction with constant folding ----
  static Ptr number_node(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::number;
    n->value = v;
    return n;
  }
  static bool is_number(const Ptr& p, double v) {
    return p->kind == Node::Kind::number && p->value == v;
  }
  static Ptr make(typename Node::Kind k, Ptr a, Ptr b) {
    if (a->kind == Node::Kind::number && b->kind == Node::Kind::number) {
      switch (k) {
        case Node::Kind::add: return number_node(a->value + b->value);
        case Node::Kind::sub: return number_node(a->value - b->value);
        case Node::Kind::mul: return number_node(a->value * b->value);
        case Node::Kind::div: return number_node(a->value / b->value);
        case Node::Kind::pow: return number_node(std::pow(a->value, b->value));
        default: break;
      }
    }
    if (k == Node::Kind::add) {
      if (is_number(a, 0.0)) return b;
      if (is_number(b, 0.0)) return a;
    }
    if (k == Node::Kind::sub && is_number(b, 0.0)) return a;
    if (k == Node::Kind::mul) {
      if (is_number(a, 0.0) || is_number(b, 0.0)) return number_node(0.0);
      if (is_number(a, 1.0)) return b;
      if (is_number(b, 1.0)) return a;
    }
    if (k == Node::Kind::div && is_number(b, 1.0)) return a;
    if (k == Node::Kind::pow && is_number(b, 1.0)) return a;
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }
  static Ptr negate(Ptr a) {
    if (a->kind == Node::Kind::number) return number_node(-a->value);
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::unary_minus;
    n->a = std::move(a);
    return n;
  }
  static Ptr call(std::string name, std::vector<Ptr> args) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::call;
    n->name = std::move(name);
    n->args = std::move(args);
    return n;
  }
  static Ptr variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::variable;
    n->name = std::move(name);
    return n;
  }

  // ---- recursive-descent parser ----
  struct Parser {
    const std::string& s;
    std::size_t pos;

    void skip_ws() {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool consume(char c) {
      skip_ws();
      if (pos < s.size() && s[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }
    [[noreturn]] void fail(const std::string& what) {
      throw ga_error("expression: " + what + " at position " + std::to_string(pos));
    }

    Ptr parse_expr() {
      Ptr left = parse_term();
      for (;;) {
        if (consume('+'))
          left = make(Node::Kind::add, left, parse_term());
        else if (consume('-'))
          left = make(Node::Kind::sub, left, parse_term());
        else
          return left;
      }
    }
    Ptr parse_term() {
      Ptr left = parse_unary();
      for (;;) {
        if (consume('*'))
          left = make(Node::Kind::mul, left, parse_unary());
        else if (consume('/'))
          left = make(Node::Kind::div, left, parse_unary());
        else
          return left;
      }
    }
    Ptr parse_unary() {
      if (consume('-')) return negate(parse_unary());
      if (consume('+')) return parse_unary();
      return parse_power();
    }
    Ptr parse_power() {
      Ptr base = parse_primary();
      if (consume('^')) return make(Node::Kind::pow, base, parse_unary());
      return base;
    }
    Ptr parse_primary() {
      skip_ws();
      if (pos >= s.size()) fail("unexpected end of input");
      const char c = s[pos];
      if (c == '(') {
        ++pos;
        Ptr inner = parse_expr();
        if (!consume(')')) fail("missing ')'");
        return inner;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
      fail(std::string("unexpected '") + c + "'");
    }
    Ptr parse_number() {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s.substr(pos), &used);
      } catch (const std::exception&) {
        fail("malformed number");
      }
      pos += used;
      return number_node(v);
    }
    Ptr parse_ident() {
      const std::size_t start = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
        ++pos;
      std::string name = s.substr(start, pos - start);
      if (name == "pi") return number_node(M_PI);
      if (consume('(')) {
        std::vector<Ptr> args;
        if (!consume(')')) {
          args.push_back(parse_expr());
          while (consume(',')) args.push_back(parse_expr());
          if (!consume(')')) fail("missing ')' in call to " + name);
        }
        const std::size_t want = (name == "pow") ? 2 : 1;
        static const char* known[] = {"sin", "cos",  "tan", "sinh", "cosh", "tanh",
                                      "exp", "log",  "sqrt", "abs",  "pow"};
        bool ok = false;
        for (const char* k : known) ok = ok || (name == k);
        if (!ok) fail("unknown function '" + name + "'");
        if (args.size() != want)
          fail("function '" + name + "' expects " + std::to_string(want) + " argument(s)");
        return call(std::move(name), std::move(args));
      }
      return variable(std::move(name));
    }
  };

  // ---- evaluation ----
  static double eval(const Ptr& n, const std::map<std::string, double>& vars) {
    switch (n->kind) {
      case Node::Kind::number: return n->value;
      case Node::Kind::variable: {
        const auto it = vars.find(n->name);
        if (it == vars.end()) throw ga_error("expression: unbound variable '" + n->name + "'");
        return it->second;
      }
      case Node::Kind::unary_minus: return -eval(n->a, vars);
      case Node::Kind::add: return eval(n->a, vars) + eval(n->b, vars);
      case Node::Kind::sub: return eval(n->a, vars) - eval(n->b, vars);
      case Node::Kind::mul: return eval(n->a, vars) * eval(n->b, vars);
      case Node::Kind::div: return eval(n->a, vars) / eval(n->b, vars);
      case Node::Kind::pow: return std::pow(eval(n->a, vars), eval(n->b, vars));
      case Node::Kind::call: {
        const double x = eval(n->args[0], vars);
        if (n->name == "sin") return std::sin(x);
        if (n->name == "cos") return std::cos(x);
        if (n->name == "tan") return std::tan(x);
        if (n->name == "sinh") return std::sinh(x);
        if (n->name == "cosh") return std::cosh(x);
        if (n->name == "tanh") return std::tanh(x);
        if (n->name == "exp") return std::exp(x);
        if (n->name == "log") return std::log(x);
        if (n->name == "sqrt") return std::sqrt(x);
        if (n->name == "abs") return std::fabs(x);
        if (n->name == "pow") return std::pow(x, eval(n->args[1], vars));
        throw ga_error("expression: unknown function '" + n->name + "'");
      }
    }
    throw ga_error("expression: corrupt node");
  }

  // ---- symbolic differentiation ----
  static Ptr diff(const Ptr& n, const std::string& var) {
    using K = typename Node::Kind;
    switch (n->kind) {
      case K::number: return number_node(0.0);
      case K::variable: return number_node(n->name == var ? 1.0 : 0.0);
      case K::unary_minus: return negate(diff(n->a, var));
      case K::add: return make(K::add, diff(n->a, var), diff(n->b, var));
      case K::sub: return make(K::sub, diff(n->a, var), diff(n->b, var));
      case K::mul:
        return make(K::add, make(K::mul, diff(n->a, var), n->b),
                    make(K::mul, n->a, diff(n->b, var)));
      case K::div:
        return make(K::div,
                    make(K::sub, make(K::mul, diff(n->a, var), n->b),
                         make(K::mul, n->a, diff(n->b, var))),
                    make(K::mul, n->b, n->b));
      case K::pow: return diff_power(n->a, n->b, var);
      case K::call: {
        const Ptr& x = n->args[0];
        const Ptr dx = diff(x, var);
        if (n->name == "pow") return diff_power(n->args[0], n->args[1], var);
        Ptr outer;
        if (n->name == "sin")
          outer = call("cos", {x});
        else if (n->name == "cos")
          outer = negate(call("sin", {x}));
        else if (n->name == "tan")
          outer = make(K::div, number_node(1.0),
                       make(K::mul, call("cos", {x}), call("cos", {x})));
        else if (n->name == "sinh")
          outer = call("cosh", {x});
        else if (n->name == "cosh")
          outer = call("sinh", {x});
        else if (n->name == "tanh")
          outer = make(K::sub, number_node(1.0), make(K::mul, call("tanh", {x}), call("tanh", {x})));
        else if (n->name == "exp")
          outer = call("exp", {x});
        else if (n->name == "log")
          outer = make(K::div, number_node(1.0), x);
        else if (n->name == "sqrt")
          outer = make(K::div, number_node(0.5), call("sqrt", {x}));
        else if (n->name == "abs")
          outer = make(K::div, x, call("abs", {x}));
        else
          throw ga_error("expression: cannot differentiate '" + n->name + "'");
        return make(K::mul, outer, dx);
      }
    }
    throw ga_error("expression: corrupt node");
  }

  static Ptr diff_power(const Ptr& base, const Ptr& expo, const std::string& var) {
    using K = typename Node::Kind;
    if (expo->kind == K::number) {  // d a^c = c a^(c-1) a'
      return make(K::mul,
                  make(K::mul, number_node(expo->value),
                       make(K::pow, base, number_node(expo->value - 1.0))),
                  diff(base, var));
    }
    // general a^b = exp(b log a)
    const Ptr whole = make(K::pow, base, expo);
    const Ptr inner = make(K::add, make(K::mul, diff(expo, var), call("log", {base})),
                           make(K::div, make(K::mul, expo, diff(base, var)), base));
    return make(K::mul, whole, inner);
  }

  static void collect(const Ptr& n, std::vector<std::string>& out) {
    switch (n->kind) {
      case Node::Kind::variable: {
        for (const auto& v : out)
          if (v == n->name) return;
        out.push_back(n->name);
        return;
      }
      case Node::Kind::number: return;
      case Node::Kind::call:
        for (const auto& a : n->args) collect(a, out);
        return;
      default:
        if (n->a) collect(n->a, out);
        if (n->b) collect(n->b, out);
        return;
    }
  }

  static std::string print(const Ptr& n) {
    switch (n->kind) {
      case Node::Kind::number: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", n->value);
        return buf;
      }
      case Node::Kind::variable: return n->name;
      case Node::Kind::unary_minus: return "(-" + print(n->a) + ")";
      case Node::Kind::add: return "(" + print(n->a) + " + " + print(n->b) + ")";
      case Node::Kind::sub: return "(" + print(n->a) + " - " + print(n->b) + ")";
      case Node::Kind::mul: return "(" + print(n->a) + " * " + print(n->b) + ")";
      case Node::Kind::div: return "(" + print(n->a) + " / " + print(n->b) + ")";
      case Node::Kind::pow: return "(" + print(n->a) + " ^ " + print(n->b) + ")";
      case Node::Kind::call: {
        std::string out = n->name + "(";
        for (std::size_t i = 0; i < n->args.size(); ++i)
          out += (i ? ", " : "") + print(n->args[i]);
        return out + ")";
      }
    }
    return "?";
  }
};

// expression bound to the coordinates of an algebra: variables q1..qn
class CoordinateExpression {
 public:
  CoordinateExpression() = default;
  CoordinateExpression(const Algebra& alg, const std::string& text)
      : dim_(alg.dim()), expr_(Expression::parse(text)) {
    std::vector<std::string> vars;
    expr_.collect_variables(vars);
    for (const auto& v : vars) {
      if (v.size() < 2 || v[0] != 'q') throw ga_error("expression: unknown variable '" + v + "'");
      int idx = 0;
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(v[i])))
          throw ga_error("expression: unknown variable '" + v + "'");
        idx = idx * 10 + (v[i] - '0');
      }
      if (idx < 1 || idx > dim_)
        throw ga_error("expression: variable '" + v + "' outside q1..q" + std::to_string(dim_));
    }
    for (int k = 1; k <= dim_; ++k) deriv_.push_back(expr_.derivative("q" + std::to_string(k)));
  }

  double operator()(const Multivector& q) const { return eval_expr(expr_, q); }

  // the k-th partial derivative as an expression of its own (1-based coordinate index)
  CoordinateExpression partial(int k) const {
    if (k < 1 || k > dim_) throw ga_error("expression: partial index out of range");
    return CoordinateExpression(dim_, deriv_[static_cast<std::size_t>(k - 1)]);
  }

  // directional derivative along a vector
  double deriv(const Multivector& q, const Multivector& dir) const {
    double out = 0.0;
    for (int k = 1; k <= dim_; ++k) {
      const double c = dir.vec(k);
      if (c != 0.0) out += c * eval_expr(deriv_[static_cast<std::size_t>(k - 1)], q);
    }
    return out;
  }

 private:
  CoordinateExpression(int dim, Expression e) : dim_(dim), expr_(std::move(e)) {
    for (int k = 1; k <= dim_; ++k) deriv_.push_back(expr_.derivative("q" + std::to_string(k)));
  }

  int dim_ = 0;
  Expression expr_;
  std::vector<Expression> deriv_;

  double eval_expr(const Expression& e, const Multivector& q) const {
    std::map<std::string, double> vars;
    for (int k = 1; k <= dim_; ++k) vars["q" + std::to_string(k)] = q.vec(k);
    return e.eval(vars);
  }
};

}  // namespace gafield
