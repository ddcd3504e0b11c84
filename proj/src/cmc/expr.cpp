#include "cmc/expr.hpp"

#include <cctype>
#include <cstdlib>

namespace cmc {

struct Expression::Node {
  enum class Kind { number, var, add, sub, mul, div, neg, pow, func } kind;
  real value = 0;
  std::string name;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, std::vector<NodePtr> args = {}, real v = 0,
             std::string name = {}) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->args = std::move(args);
  n->value = v;
  n->name = std::move(name);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    auto n = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected trailing input");
    return n;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void error(const std::string& msg) {
    fail(ErrorCode::invalid_config,
         "expression: " + msg + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto n = term();
    for (;;) {
      if (eat('+')) n = make(Kind::add, {n, term()});
      else if (eat('-')) n = make(Kind::sub, {n, term()});
      else return n;
    }
  }
  NodePtr term() {
    auto n = unary();
    for (;;) {
      if (eat('*')) n = make(Kind::mul, {n, unary()});
      else if (eat('/')) n = make(Kind::div, {n, unary()});
      else return n;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Kind::neg, {unary()});
    if (eat('+')) return unary();
    return power();
  }
  NodePtr power() {
    auto base = atom();
    if (eat('^')) return make(Kind::pow, {base, unary()});
    return base;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      long double v = std::strtold(begin, &end);
      if (end == begin) error("bad number");
      pos_ += static_cast<size_t>(end - begin);
      return make(Kind::number, {}, v);
    }
    if (eat('(')) {
      auto n = expr();
      if (!eat(')')) error("expected ')'");
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t b = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string id = s_.substr(b, pos_ - b);
      if (id == "t") return make(Kind::var);
      if (id == "pi") return make(Kind::number, {}, kPi);
      if (id == "e") return make(Kind::number, {}, std::exp(1.0L));
      static const char* funcs[] = {"exp", "log", "sqrt", "sin", "cos",
                                    "sinh", "cosh", "tanh", "pow"};
      bool known = false;
      for (auto f : funcs) known = known || id == f;
      if (!known) error("unknown identifier '" + id + "'");
      if (!eat('(')) error("expected '(' after " + id);
      std::vector<NodePtr> args{expr()};
      if (id == "pow") {
        if (!eat(',')) error("pow takes two arguments");
        args.push_back(expr());
      }
      if (!eat(')')) error("expected ')'");
      if (id == "pow") return make(Kind::pow, std::move(args));
      return make(Kind::func, std::move(args), 0, id);
    }
    error(std::string("unexpected character '") + c + "'");
  }
};

using Jet = Expression::Jet;

bool is_constant(const Jet& j) {
  for (int i = 1; i <= 4; ++i)
    if (j.c[i] != 0) return false;
  return true;
}

Jet eval_node(const Expression::Node& n, real t) {
  switch (n.kind) {
    case Kind::number: return Jet(n.value);
    case Kind::var: return Jet::variable(t);
    case Kind::add: return eval_node(*n.args[0], t) + eval_node(*n.args[1], t);
    case Kind::sub: return eval_node(*n.args[0], t) - eval_node(*n.args[1], t);
    case Kind::mul: return eval_node(*n.args[0], t) * eval_node(*n.args[1], t);
    case Kind::div: return eval_node(*n.args[0], t) / eval_node(*n.args[1], t);
    case Kind::neg: return -eval_node(*n.args[0], t);
    case Kind::pow: {
      Jet b = eval_node(*n.args[0], t);
      Jet p = eval_node(*n.args[1], t);
      if (is_constant(p)) {
        real e = p.c[0];
        if (e == std::round(e) && std::fabs(e) <= 16) {
          Jet r(1.0L);
          for (int i = 0; i < std::abs(static_cast<int>(e)); ++i) r = r * b;
          return e < 0 ? Jet(1.0L) / r : r;
        }
        return pow(b, e);
      }
      return exp(p * log(b));
    }
    case Kind::func: {
      Jet a = eval_node(*n.args[0], t);
      const std::string& f = n.name;
      if (f == "exp") return exp(a);
      if (f == "log") return log(a);
      if (f == "sqrt") return sqrt(a);
      if (f == "sin") return sin(a);
      if (f == "cos") return cos(a);
      if (f == "sinh") return sinh(a);
      if (f == "cosh") return cosh(a);
      if (f == "tanh") return sinh(a) / cosh(a);
      break;
    }
  }
  fail(ErrorCode::invalid_config, "expression: malformed tree");
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(text).run();
  return e;
}

Expression::Jet Expression::eval(real t) const { return eval_node(*root_, t); }

}  // namespace cmc
