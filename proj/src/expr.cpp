#include "skewspin/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <tuple>

namespace skewspin {
namespace {

bool is_function(Op op) { return op >= Op::Exp; }

const char* function_name(Op op) {
  switch (op) {
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Sqrt: return "sqrt";
    default: return "";
  }
}

std::optional<Op> function_op(std::string_view name) {
  if (name == "exp") return Op::Exp;
  if (name == "log") return Op::Log;
  if (name == "sin") return Op::Sin;
  if (name == "cos") return Op::Cos;
  if (name == "sqrt") return Op::Sqrt;
  return std::nullopt;
}

// ---------------------------------------------------------------- parsing

class Parser {
 public:
  Parser(std::string_view src, const std::set<std::string>* declared) : src_(src), declared_(declared) {}

  Expr parse_all() {
    skip_ws();
    if (pos_ == src_.size()) throw ParseError("empty expression", pos_);
    Expr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = Expr::binary(Op::Add, lhs, term());
      else if (accept('-'))
        lhs = Expr::binary(Op::Sub, lhs, term());
      else
        return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = Expr::binary(Op::Mul, lhs, unary());
      else if (accept('/'))
        lhs = Expr::binary(Op::Div, lhs, unary());
      else
        return lhs;
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(Op::Neg, unary());
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) return Expr::binary(Op::Pow, base, unary());
    return base;
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) throw ParseError("malformed number", start);
    return Expr::number(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    if (auto fn = function_op(name)) {
      skip_ws();
      if (pos_ >= src_.size() || src_[pos_] != '(') throw ParseError("function '" + name + "' needs an argument", pos_);
      expect('(');
      Expr arg = expr();
      expect(')');
      return Expr::unary(*fn, arg);
    }
    if (declared_ && !declared_->count(name)) {
      std::string list;
      for (const auto& s : *declared_) list += (list.empty() ? "" : ", ") + s;
      throw ParseError("unknown identifier '" + name + "' (declared symbols: " + (list.empty() ? "none" : list) + ")",
                       start);
    }
    return Expr::symbol(name);
  }

  std::string_view src_;
  const std::set<std::string>* declared_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- printing

int precedence(const ExprNode& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Number: return (n.number < 0.0 || std::signbit(n.number)) ? 3 : 5;
    default: return 5;
  }
}

void print(const ExprNode& n, std::string& out);

void print_wrapped(const ExprNode& n, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print(n, out);
  if (wrap) out += ')';
}

void print(const ExprNode& n, std::string& out) {
  switch (n.op) {
    case Op::Number: out += format_number(n.number); return;
    case Op::Symbol: out += n.name; return;
    case Op::Neg:
      out += '-';
      print_wrapped(*n.lhs, precedence(*n.lhs) < 3, out);
      return;
    case Op::Add:
    case Op::Sub:
      print_wrapped(*n.lhs, precedence(*n.lhs) < 1, out);
      out += n.op == Op::Add ? " + " : " - ";
      print_wrapped(*n.rhs, precedence(*n.rhs) <= 1, out);
      return;
    case Op::Mul:
    case Op::Div:
      print_wrapped(*n.lhs, precedence(*n.lhs) < 2, out);
      out += n.op == Op::Mul ? '*' : '/';
      print_wrapped(*n.rhs, precedence(*n.rhs) <= 2, out);
      return;
    case Op::Pow:
      print_wrapped(*n.lhs, precedence(*n.lhs) < 5, out);
      out += '^';
      print_wrapped(*n.rhs, precedence(*n.rhs) < 3, out);
      return;
    default:
      out += function_name(n.op);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      return;
  }
}

void collect(const ExprNode& n, std::set<std::string>& out) {
  if (n.op == Op::Symbol) out.insert(n.name);
  if (n.lhs) collect(*n.lhs, out);
  if (n.rhs) collect(*n.rhs, out);
}

bool equal(const ExprNode& a, const ExprNode& b) {
  if (a.op != b.op) return false;
  if (a.op == Op::Number) return a.number == b.number;
  if (a.op == Op::Symbol) return a.name == b.name;
  if (!equal(*a.lhs, *b.lhs)) return false;
  return !a.rhs || equal(*a.rhs, *b.rhs);
}

// ---------------------------------------------------------------- symbolic d/dx

bool is_number(const Expr& e, double v) { return e.node().op == Op::Number && e.node().number == v; }
bool is_number(const Expr& e) { return e.node().op == Op::Number; }

Expr add(const Expr& a, const Expr& b) {
  if (is_number(a, 0.0)) return b;
  if (is_number(b, 0.0)) return a;
  if (is_number(a) && is_number(b)) return Expr::number(a.node().number + b.node().number);
  return Expr::binary(Op::Add, a, b);
}

Expr neg(const Expr& a) {
  if (is_number(a)) return Expr::number(-a.node().number);
  if (a.node().op == Op::Neg) return Expr(a.node().lhs);
  return Expr::unary(Op::Neg, a);
}

Expr sub(const Expr& a, const Expr& b) {
  if (is_number(b, 0.0)) return a;
  if (is_number(a, 0.0)) return neg(b);
  if (is_number(a) && is_number(b)) return Expr::number(a.node().number - b.node().number);
  return Expr::binary(Op::Sub, a, b);
}

Expr mul(const Expr& a, const Expr& b) {
  if (is_number(a, 0.0) || is_number(b, 0.0)) return Expr::number(0.0);
  if (is_number(a, 1.0)) return b;
  if (is_number(b, 1.0)) return a;
  if (is_number(a) && is_number(b)) return Expr::number(a.node().number * b.node().number);
  return Expr::binary(Op::Mul, a, b);
}

Expr div(const Expr& a, const Expr& b) {
  if (is_number(a, 0.0)) return Expr::number(0.0);
  if (is_number(b, 1.0)) return a;
  return Expr::binary(Op::Div, a, b);
}

bool depends_on(const ExprNode& n, const std::string& var) {
  if (n.op == Op::Symbol) return n.name == var;
  if (n.lhs && depends_on(*n.lhs, var)) return true;
  return n.rhs && depends_on(*n.rhs, var);
}

}  // namespace

const std::vector<std::string>& default_coordinates() {
  static const std::vector<std::string> names{"x", "y", "z", "t"};
  return names;
}

Expr Expr::number(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Number;
  n->number = v;
  return Expr(n);
}

Expr Expr::symbol(std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::Symbol;
  n->name = std::move(name);
  return Expr(n);
}

Expr Expr::unary(Op op, const Expr& a) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = a.root();
  return Expr(n);
}

Expr Expr::binary(Op op, const Expr& a, const Expr& b) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->lhs = a.root();
  n->rhs = b.root();
  return Expr(n);
}

std::set<std::string> Expr::free_symbols() const {
  std::set<std::string> out;
  collect(*root_, out);
  return out;
}

std::set<std::string> Expr::coordinates(const std::vector<std::string>& coordinates) const {
  std::set<std::string> out;
  for (const auto& s : free_symbols())
    if (std::find(coordinates.begin(), coordinates.end(), s) != coordinates.end()) out.insert(s);
  return out;
}

std::set<std::string> Expr::parameters(const std::vector<std::string>& coordinates) const {
  std::set<std::string> out;
  for (const auto& s : free_symbols())
    if (std::find(coordinates.begin(), coordinates.end(), s) == coordinates.end()) out.insert(s);
  return out;
}

std::string Expr::str() const { return to_string(*this); }

bool Expr::operator==(const Expr& o) const { return equal(*root_, *o.root_); }

Expr parse(std::string_view src, const std::set<std::string>* declared) { return Parser(src, declared).parse_all(); }

std::string to_string(const Expr& e) {
  std::string out;
  print(e.node(), out);
  return out;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Expr differentiate(const Expr& e, const std::string& var) {
  const ExprNode& n = e.node();
  if (!depends_on(n, var)) return Expr::number(0.0);
  const Expr a = n.lhs ? Expr(n.lhs) : Expr();
  const Expr b = n.rhs ? Expr(n.rhs) : Expr();
  switch (n.op) {
    case Op::Number: return Expr::number(0.0);
    case Op::Symbol: return Expr::number(1.0);
    case Op::Neg: return neg(differentiate(a, var));
    case Op::Add: return add(differentiate(a, var), differentiate(b, var));
    case Op::Sub: return sub(differentiate(a, var), differentiate(b, var));
    case Op::Mul: return add(mul(differentiate(a, var), b), mul(a, differentiate(b, var)));
    case Op::Div:
      return div(sub(mul(differentiate(a, var), b), mul(a, differentiate(b, var))),
                 Expr::binary(Op::Pow, b, Expr::number(2.0)));
    case Op::Pow: {
      if (!depends_on(*n.rhs, var)) {
        const Expr lowered = is_number(b) ? Expr::number(b.node().number - 1.0) : sub(b, Expr::number(1.0));
        return mul(mul(b, Expr::binary(Op::Pow, a, lowered)), differentiate(a, var));
      }
      const Expr inner = add(mul(differentiate(b, var), Expr::unary(Op::Log, a)),
                             div(mul(b, differentiate(a, var)), a));
      return mul(e, inner);
    }
    case Op::Exp: return mul(e, differentiate(a, var));
    case Op::Log: return div(differentiate(a, var), a);
    case Op::Sin: return mul(Expr::unary(Op::Cos, a), differentiate(a, var));
    case Op::Cos: return neg(mul(Expr::unary(Op::Sin, a), differentiate(a, var)));
    case Op::Sqrt: return div(differentiate(a, var), mul(Expr::number(2.0), e));
  }
  return Expr::number(0.0);
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& values) {
  const ExprNode& n = e.node();
  if (n.op == Op::Symbol) {
    auto it = values.find(n.name);
    return it == values.end() ? e : it->second;
  }
  if (n.op == Op::Number) return e;
  if (!n.rhs) return Expr::unary(n.op, substitute(Expr(n.lhs), values));
  return Expr::binary(n.op, substitute(Expr(n.lhs), values), substitute(Expr(n.rhs), values));
}

// ---------------------------------------------------------------- evaluation

namespace {

void compile(const ExprNode& n, const std::vector<std::string>& coords, const std::map<std::string, double>& params,
             std::vector<std::tuple<Op, double, int, const ExprNode*>>& code, bool& uses_coords) {
  if (n.op == Op::Symbol) {
    auto it = std::find(coords.begin(), coords.end(), n.name);
    if (it != coords.end()) {
      uses_coords = true;
      code.emplace_back(Op::Symbol, 0.0, static_cast<int>(it - coords.begin()), &n);
      return;
    }
    auto p = params.find(n.name);
    if (p == params.end()) throw EvalError("unbound symbol '" + n.name + "'", n.name);
    code.emplace_back(Op::Number, p->second, -1, &n);
    return;
  }
  if (n.op == Op::Number) {
    code.emplace_back(Op::Number, n.number, -1, &n);
    return;
  }
  compile(*n.lhs, coords, params, code, uses_coords);
  if (n.rhs) compile(*n.rhs, coords, params, code, uses_coords);
  code.emplace_back(n.op, 0.0, -1, &n);
}

std::string node_text(const ExprNode* n) {
  std::string out;
  print(*n, out);
  return out;
}

double apply(Op op, double a, double b, const ExprNode* n) {
  switch (op) {
    case Op::Neg: return -a;
    case Op::Add: return a + b;
    case Op::Sub: return a - b;
    case Op::Mul: return a * b;
    case Op::Div:
      if (b == 0.0) throw EvalError("division by zero", node_text(n));
      return a / b;
    case Op::Pow:
      if (a < 0.0 && b != std::round(b)) throw EvalError("fractional power of negative value", node_text(n));
      if (a == 0.0 && b < 0.0) throw EvalError("division by zero", node_text(n));
      return std::pow(a, b);
    case Op::Exp: return std::exp(a);
    case Op::Log:
      if (!(a > 0.0)) throw EvalError("log of non-positive value", node_text(n));
      return std::log(a);
    case Op::Sin: return std::sin(a);
    case Op::Cos: return std::cos(a);
    case Op::Sqrt:
      if (a < 0.0) throw EvalError("sqrt of negative value", node_text(n));
      return std::sqrt(a);
    default: return 0.0;
  }
}

Jet apply(Op op, const Jet& a, const Jet& b, const ExprNode* n) {
  try {
    switch (op) {
      case Op::Neg: return -a;
      case Op::Add: return a + b;
      case Op::Sub: return a - b;
      case Op::Mul: return a * b;
      case Op::Div:
        if (b.value() == 0.0) throw EvalError("division by zero", node_text(n));
        return a / b;
      case Op::Pow:
        if (b.is_constant()) {
          if (a.value() == 0.0 && b.value() < 0.0) throw EvalError("division by zero", node_text(n));
          return pow(a, b.value()).truncated(std::min(a.order(), b.order()));
        }
        return pow(a, b);
      case Op::Exp: return exp(a);
      case Op::Log: return log(a);
      case Op::Sin: return sin(a);
      case Op::Cos: return cos(a);
      case Op::Sqrt: return sqrt(a);
      default: return a;
    }
  } catch (const std::domain_error& e) {
    throw EvalError(e.what(), node_text(n));
  }
}

}  // namespace

BoundExpr::BoundExpr(const Expr& e, const std::vector<std::string>& coordinates,
                     const std::map<std::string, double>& params)
    : expr_(e) {
  std::vector<std::tuple<Op, double, int, const ExprNode*>> code;
  compile(e.node(), coordinates, params, code, uses_coords_);
  code_.reserve(code.size());
  for (auto& [op, num, slot, node] : code) code_.push_back({op, num, slot, node});
}

template <class T, class Leaf>
T BoundExpr::run(Leaf&& leaf) const {
  std::vector<T> stack;
  stack.reserve(code_.size());
  for (const Instr& in : code_) {
    if (in.op == Op::Number || in.op == Op::Symbol) {
      stack.push_back(leaf(in));
      continue;
    }
    if (in.op == Op::Neg || is_function(in.op)) {
      stack.back() = apply(in.op, stack.back(), stack.back(), in.node);
      continue;
    }
    T rhs = std::move(stack.back());
    stack.pop_back();
    stack.back() = apply(in.op, stack.back(), rhs, in.node);
  }
  return stack.back();
}

double BoundExpr::eval(const double* point) const {
  return run<double>([&](const Instr& in) { return in.op == Op::Number ? in.number : point[in.slot]; });
}

Jet BoundExpr::eval_jet(const double* point, int order) const {
  return run<Jet>([&](const Instr& in) {
    return in.op == Op::Number ? Jet::constant(in.number, order) : Jet::variable(point[in.slot], in.slot, order);
  });
}

DiffScalar eval_diff(const Expr& e, const std::vector<std::string>& coordinates, const std::vector<double>& point,
                     const std::map<std::string, double>& params) {
  if (point.size() != coordinates.size()) throw std::invalid_argument("point and coordinate list differ in length");
  if (coordinates.size() > static_cast<std::size_t>(kMaxVars)) throw std::invalid_argument("at most three coordinates");
  const BoundExpr bound(e, coordinates, params);
  double p[kMaxVars] = {0.0, 0.0, 0.0};
  std::copy(point.begin(), point.end(), p);
  return DiffScalar::from_jet(bound.eval_jet(p, 2), static_cast<int>(coordinates.size()));
}

}  // namespace skewspin
