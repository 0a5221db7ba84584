#include "huntil/expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>

namespace huntil {

namespace {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum Kind { Num, Coord, Add, Sub, Mul, Div, Pow, Neg, Call } kind;
  double num = 0;
  int coord = -1;
  std::string fname;
  NodePtr a, b;

  double eval(const Vec& x) const {
    switch (kind) {
      case Num: return num;
      case Coord: return x[coord];
      case Add: return a->eval(x) + b->eval(x);
      case Sub: return a->eval(x) - b->eval(x);
      case Mul: return a->eval(x) * b->eval(x);
      case Div: return a->eval(x) / b->eval(x);
      case Pow: return std::pow(a->eval(x), b->eval(x));
      case Neg: return -a->eval(x);
      case Call: {
        double va = a->eval(x);
        if (fname == "abs") return std::abs(va);
        if (fname == "exp") return std::exp(va);
        if (fname == "log") return std::log(va);
        if (fname == "sqrt") return std::sqrt(va);
        if (fname == "min") return std::min(va, b->eval(x));
        if (fname == "max") return std::max(va, b->eval(x));
        throw std::invalid_argument("unknown function: " + fname);
      }
    }
    return 0;
  }
};

class Parser {
 public:
  Parser(const std::string& text, const ExprEnv& env) : s_(text), env_(env) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != s_.size())
      throw std::invalid_argument("trailing input in expression: " + s_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr e = term();
    while (true) {
      if (eat('+')) e = bin(Node::Add, e, term());
      else if (eat('-')) e = bin(Node::Sub, e, term());
      else return e;
    }
  }
  NodePtr term() {
    NodePtr e = factor();
    while (true) {
      if (eat('*')) e = bin(Node::Mul, e, factor());
      else if (eat('/')) e = bin(Node::Div, e, factor());
      else return e;
    }
  }
  NodePtr factor() {  // right-associative power
    NodePtr base = unary();
    if (eat('^')) return bin(Node::Pow, base, factor());
    return base;
  }
  NodePtr unary() {
    if (eat('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Neg;
      n->a = unary();
      return n;
    }
    return primary();
  }
  NodePtr primary() {
    skip_ws();
    if (eat('(')) {
      NodePtr e = expr();
      if (!eat(')')) throw std::invalid_argument("missing ')' in expression");
      return e;
    }
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
    throw std::invalid_argument("unexpected character in expression: " +
                                std::string(1, c));
  }
  NodePtr number() {
    std::size_t end = pos_;
    while (end < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
            s_[end] == 'e' || s_[end] == 'E' ||
            ((s_[end] == '+' || s_[end] == '-') && end > pos_ &&
             (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
      ++end;
    auto n = std::make_shared<Node>();
    n->kind = Node::Num;
    n->num = std::stod(s_.substr(pos_, end - pos_));
    pos_ = end;
    return n;
  }
  NodePtr ident() {
    std::size_t end = pos_;
    while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) ||
                               s_[end] == '_'))
      ++end;
    std::string name = s_.substr(pos_, end - pos_);
    pos_ = end;
    if (peek() == '(') {
      eat('(');
      auto n = std::make_shared<Node>();
      n->kind = Node::Call;
      n->fname = name;
      n->a = expr();
      if ((name == "min" || name == "max")) {
        if (!eat(',')) throw std::invalid_argument(name + " needs two arguments");
        n->b = expr();
      }
      if (!eat(')')) throw std::invalid_argument("missing ')' after " + name);
      return n;
    }
    auto n = std::make_shared<Node>();
    if (auto it = env_.coords.find(name); it != env_.coords.end()) {
      n->kind = Node::Coord;
      n->coord = it->second;
      return n;
    }
    if (auto it = env_.params.find(name); it != env_.params.end()) {
      n->kind = Node::Num;
      n->num = it->second;
      return n;
    }
    throw std::invalid_argument("unknown identifier: " + name);
  }

  static NodePtr bin(Node::Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
  }

  const std::string& s_;
  const ExprEnv& env_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarFn parse_expression(const std::string& text, const ExprEnv& env) {
  NodePtr ast = Parser(text, env).parse();
  return ScalarFn::from_value([ast](const Vec& x) { return ast->eval(x); }, text);
}

Constraint parse_constraint(const std::string& text, const ExprEnv& env) {
  static const std::vector<std::pair<std::string, int>> rels = {
      {"<=", 0}, {">=", 1}, {"==", 2}, {"<", 3}, {">", 4}, {"=", 2}};
  for (const auto& [op, kind] : rels) {
    auto at = text.find(op);
    if (at == std::string::npos) continue;
    ScalarFn lhs = parse_expression(text.substr(0, at), env);
    ScalarFn rhs = parse_expression(text.substr(at + op.size()), env);
    ScalarFn g = lhs - rhs;
    switch (kind) {
      case 0: return le(g);
      case 1: return ge(g);
      case 2: return eq(g);
      case 3: return lt(g);
      case 4: return gt(g);
    }
  }
  throw std::invalid_argument("no relational operator in constraint: " + text);
}

}  // namespace huntil
