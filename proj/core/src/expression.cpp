#include "exitrate/expression.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <numbers>

#include "exitrate/error.hpp"

namespace exitrate {

class Expression::Parser {
 public:
  Parser(Expression& out, std::string_view text,
         const std::map<std::string, double>& parameters)
      : out_(out), text_(text), parameters_(parameters) {}

  int parse_all() {
    int root = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return root;
  }

 private:
  Expression& out_;
  std::string_view text_;
  const std::map<std::string, double>& parameters_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::kParse, msg + " at offset " + std::to_string(pos_) +
                                       " in '" + std::string(text_) + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int push(Node node) {
    out_.nodes_.push_back(node);
    return static_cast<int>(out_.nodes_.size()) - 1;
  }

  int binary(Op op, int lhs, int rhs) {
    Node n;
    n.op = op;
    n.lhs = lhs;
    n.rhs = rhs;
    return push(n);
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Op::kAdd, lhs, parse_term());
      } else if (accept('-')) {
        lhs = binary(Op::kSub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Op::kMul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = binary(Op::kDiv, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept('-')) {
      Node n;
      n.op = Op::kNeg;
      n.lhs = parse_unary();
      return push(n);
    }
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    int base = parse_atom();
    if (accept('^')) return binary(Op::kPow, base, parse_unary());
    return base;
  }

  int parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (accept('(')) {
      int inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
    fail(std::string("unexpected character '") + c + "'");
  }

  int parse_number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    std::string buf(begin, text_.size() - pos_);
    double v = std::strtod(buf.c_str(), &end);
    std::size_t used = static_cast<std::size_t>(end - buf.c_str());
    if (used == 0) fail("malformed number");
    pos_ += used;
    Node n;
    n.op = Op::kConst;
    n.value = v;
    return push(n);
  }

  int parse_name() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name(text_.substr(start, pos_ - start));

    static const std::map<std::string, Fn> kFunctions = {
        {"sin", Fn::kSin}, {"cos", Fn::kCos},   {"tan", Fn::kTan}, {"exp", Fn::kExp},
        {"log", Fn::kLog}, {"sqrt", Fn::kSqrt}, {"abs", Fn::kAbs}};

    if (auto f = kFunctions.find(name); f != kFunctions.end()) {
      if (!accept('(')) fail("expected '(' after " + name);
      Node n;
      n.op = Op::kCall;
      n.fn = f->second;
      n.lhs = parse_expr();
      if (!accept(')')) fail("expected ')' closing " + name);
      return push(n);
    }

    Node n;
    if (name == "x1" || name == "x") {
      n.op = Op::kVar;
      n.var = 0;
    } else if (name == "x2" || name == "y") {
      n.op = Op::kVar;
      n.var = 1;
    } else if (name == "pi") {
      n.value = std::numbers::pi;
    } else if (name == "e") {
      n.value = std::numbers::e;
    } else if (auto p = parameters_.find(name); p != parameters_.end()) {
      n.value = p->second;
    } else {
      fail("unknown identifier '" + name + "'");
    }
    return push(n);
  }
};

Expression Expression::parse(std::string_view text,
                             const std::map<std::string, double>& parameters) {
  Expression e;
  e.source_ = std::string(text);
  Parser parser(e, text, parameters);
  e.root_ = parser.parse_all();
  return e;
}

Expression Expression::constant(double value) {
  Expression e;
  Node n;
  n.value = value;
  e.nodes_.push_back(n);
  e.root_ = 0;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  e.source_ = buf;
  return e;
}

double Expression::evaluate(const Point& x) const { return eval(root_, x); }

double Expression::eval(int idx, const Point& x) const {
  const Node& n = nodes_[static_cast<std::size_t>(idx)];
  switch (n.op) {
    case Op::kConst: return n.value;
    case Op::kVar: return x[static_cast<std::size_t>(n.var)];
    case Op::kNeg: return -eval(n.lhs, x);
    case Op::kAdd: return eval(n.lhs, x) + eval(n.rhs, x);
    case Op::kSub: return eval(n.lhs, x) - eval(n.rhs, x);
    case Op::kMul: return eval(n.lhs, x) * eval(n.rhs, x);
    case Op::kDiv: return eval(n.lhs, x) / eval(n.rhs, x);
    case Op::kPow: return std::pow(eval(n.lhs, x), eval(n.rhs, x));
    case Op::kCall: {
      double a = eval(n.lhs, x);
      switch (n.fn) {
        case Fn::kSin: return std::sin(a);
        case Fn::kCos: return std::cos(a);
        case Fn::kTan: return std::tan(a);
        case Fn::kExp: return std::exp(a);
        case Fn::kLog: return std::log(a);
        case Fn::kSqrt: return std::sqrt(a);
        case Fn::kAbs: return std::abs(a);
      }
    }
  }
  return 0.0;
}

}  // namespace exitrate
