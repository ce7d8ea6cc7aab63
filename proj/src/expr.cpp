#include "finsler/expr.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

namespace finsler {

namespace detail {

namespace {
class LocatedDomainError : public DomainError {
 public:
  using DomainError::DomainError;
};
}  // namespace

void rethrow_domain_at(const DomainError& e, SourceLocation where) {
  if (dynamic_cast<const LocatedDomainError*>(&e) != nullptr) throw;
  const std::string what = e.what();
  throw LocatedDomainError(e.guard(), what.substr(e.guard().size() + 2) + " (in expression at line " + std::to_string(where.line) +
                                          ", column " + std::to_string(where.column) + ")");
}

}  // namespace detail

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;
using K = Expr::Kind;

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::string_view text;
  double number = 0;
  SourceLocation where;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    const SourceLocation where{line_, col_};
    if (pos_ >= src_.size()) return {Tok::End, {}, 0, where};
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))))
      return number(where);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const auto start = pos_;
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) advance();
      return {Tok::Ident, src_.substr(start, pos_ - start), 0, where};
    }
    advance();
    switch (c) {
      case '+': return {Tok::Plus, "+", 0, where};
      case '-': return {Tok::Minus, "-", 0, where};
      case '*': return {Tok::Star, "*", 0, where};
      case '/': return {Tok::Slash, "/", 0, where};
      case '^': return {Tok::Caret, "^", 0, where};
      case '(': return {Tok::LParen, "(", 0, where};
      case ')': return {Tok::RParen, ")", 0, where};
      case ',': return {Tok::Comma, ",", 0, where};
      default: break;
    }
    throw ParseError(where, std::string("unexpected character '") + c + "'");
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }
  Token number(SourceLocation where) {
    const auto start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) advance();
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        while (pos_ < look) advance();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
      }
    }
    const auto text = src_.substr(start, pos_ - start);
    double v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) throw ParseError(where, "malformed number '" + std::string(text) + "'");
    return {Tok::Number, text, v, where};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

constexpr int kBpAdd = 10, kBpMul = 20, kBpUnary = 30, kBpPow = 40;

bool has_variable(const Node& n) {
  if (n.kind == K::Variable) return true;
  if (n.lhs && has_variable(*n.lhs)) return true;
  if (n.rhs && has_variable(*n.rhs)) return true;
  return false;
}

double eval_double(const Node& n, std::span<const double> x) {
  switch (n.kind) {
    case K::Number: return n.value;
    case K::Variable:
      if (static_cast<std::size_t>(n.variable) >= x.size()) throw InputError("expression variable beyond chart dimension");
      return x[static_cast<std::size_t>(n.variable)];
    case K::Neg: return -eval_double(*n.lhs, x);
    case K::Add: return eval_double(*n.lhs, x) + eval_double(*n.rhs, x);
    case K::Sub: return eval_double(*n.lhs, x) - eval_double(*n.rhs, x);
    case K::Mul: return eval_double(*n.lhs, x) * eval_double(*n.rhs, x);
    case K::Div: {
      const double d = eval_double(*n.rhs, x);
      if (d == 0) throw DomainError("division", "division by zero in expression");
      return eval_double(*n.lhs, x) / d;
    }
    case K::Pow: {
      const double base = eval_double(*n.lhs, x);
      if (n.value != std::floor(n.value) && !(base > 0)) throw DomainError("pow", "non-integral power of a nonpositive base");
      return std::pow(base, n.value);
    }
    case K::Call: {
      const double a = eval_double(*n.lhs, x);
      switch (n.func) {
        case Expr::Func::Sqrt:
          if (!(a > 0)) throw DomainError("sqrt", "sqrt of a nonpositive value in expression");
          return std::sqrt(a);
        case Expr::Func::Exp: return std::exp(a);
        case Expr::Func::Sin: return std::sin(a);
        case Expr::Func::Cos: return std::cos(a);
      }
    }
  }
  throw InputError("malformed expression tree");
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

  NodePtr parse_all() {
    auto e = expression(0);
    if (tok_.kind != Tok::End) throw ParseError(tok_.where, "unexpected '" + std::string(tok_.text) + "'");
    return e;
  }

 private:
  Token take() {
    auto t = tok_;
    tok_ = lex_.next();
    return t;
  }

  static int infix_bp(Tok t) {
    switch (t) {
      case Tok::Plus:
      case Tok::Minus: return kBpAdd;
      case Tok::Star:
      case Tok::Slash: return kBpMul;
      case Tok::Caret: return kBpPow;
      default: return -1;
    }
  }

  NodePtr expression(int min_bp) {
    auto lhs = prefix();
    for (;;) {
      const int bp = infix_bp(tok_.kind);
      if (bp < 0 || bp <= min_bp) break;
      const auto op = take();
      // ^ is right-associative: its right operand may contain another ^.
      auto rhs = expression(op.kind == Tok::Caret ? bp - 1 : bp);
      auto n = std::make_shared<Node>();
      n->where = op.where;
      n->lhs = lhs;
      n->rhs = rhs;
      switch (op.kind) {
        case Tok::Plus: n->kind = K::Add; break;
        case Tok::Minus: n->kind = K::Sub; break;
        case Tok::Star: n->kind = K::Mul; break;
        case Tok::Slash: n->kind = K::Div; break;
        case Tok::Caret:
          n->kind = K::Pow;
          if (has_variable(*rhs)) throw ParseError(op.where, "exponent of ^ must be a constant expression");
          n->value = eval_double(*rhs, {});
          break;
        default: break;
      }
      lhs = n;
    }
    return lhs;
  }

  NodePtr prefix() {
    const auto t = take();
    auto n = std::make_shared<Node>();
    n->where = t.where;
    switch (t.kind) {
      case Tok::Number:
        n->kind = K::Number;
        n->value = t.number;
        return n;
      case Tok::Minus:
        n->kind = K::Neg;
        n->lhs = expression(kBpUnary);
        return n;
      case Tok::Plus: return expression(kBpUnary);
      case Tok::LParen: {
        auto inner = expression(0);
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: return identifier(t, n);
      case Tok::End: throw ParseError(t.where, "unexpected end of input");
      default: throw ParseError(t.where, "unexpected '" + std::string(t.text) + "'");
    }
  }

  NodePtr identifier(const Token& t, std::shared_ptr<Node> n) {
    const auto name = t.text;
    if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '4') {
      n->kind = K::Variable;
      n->variable = name[1] - '1';
      return n;
    }
    if (name == "pi") {
      n->kind = K::Number;
      n->value = std::numbers::pi;
      return n;
    }
    std::optional<Expr::Func> f;
    if (name == "sqrt") f = Expr::Func::Sqrt;
    if (name == "exp") f = Expr::Func::Exp;
    if (name == "sin") f = Expr::Func::Sin;
    if (name == "cos") f = Expr::Func::Cos;
    if (!f) throw ParseError(t.where, "unknown identifier '" + std::string(name) + "'");
    if (tok_.kind != Tok::LParen) throw ParseError(tok_.where, "function '" + std::string(name) + "' needs a parenthesized argument");
    take();
    if (tok_.kind == Tok::RParen) throw ParseError(tok_.where, "function '" + std::string(name) + "' takes exactly one argument");
    n->kind = K::Call;
    n->func = *f;
    n->lhs = expression(0);
    if (tok_.kind == Tok::Comma) throw ParseError(tok_.where, "function '" + std::string(name) + "' takes exactly one argument");
    expect(Tok::RParen, "')'");
    return n;
  }

  void expect(Tok kind, const char* what) {
    if (tok_.kind != kind) {
      if (tok_.kind == Tok::End) throw ParseError(tok_.where, std::string("expected ") + what + " before end of input");
      throw ParseError(tok_.where, std::string("expected ") + what + ", found '" + std::string(tok_.text) + "'");
    }
    take();
  }

  Lexer lex_;
  Token tok_;
};

int precedence(const Node& n) {
  switch (n.kind) {
    case K::Add:
    case K::Sub: return kBpAdd;
    case K::Mul:
    case K::Div: return kBpMul;
    case K::Neg: return kBpUnary;
    case K::Pow: return kBpPow;
    default: return 100;
  }
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print_node(const Node& n, std::string& out) {
  auto wrapped = [&](const Node& child, bool parens) {
    if (parens) out += '(';
    print_node(child, out);
    if (parens) out += ')';
  };
  switch (n.kind) {
    case K::Number:
      if (n.value == std::numbers::pi) {
        out += "pi";
      } else {
        out += format_number(n.value);
      }
      return;
    case K::Variable:
      out += 'x';
      out += std::to_string(n.variable + 1);
      return;
    case K::Neg:
      out += '-';
      wrapped(*n.lhs, precedence(*n.lhs) < kBpUnary);
      return;
    case K::Call: {
      static constexpr const char* names[] = {"sqrt", "exp", "sin", "cos"};
      out += names[static_cast<int>(n.func)];
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
    }
    default: break;
  }
  const int p = precedence(n);
  const bool right_assoc = n.kind == K::Pow;
  wrapped(*n.lhs, right_assoc ? precedence(*n.lhs) <= p : precedence(*n.lhs) < p);
  switch (n.kind) {
    case K::Add: out += '+'; break;
    case K::Sub: out += '-'; break;
    case K::Mul: out += '*'; break;
    case K::Div: out += '/'; break;
    case K::Pow: out += '^'; break;
    default: break;
  }
  wrapped(*n.rhs, right_assoc ? precedence(*n.rhs) < p : precedence(*n.rhs) <= p);
}

int arity_of(const Node& n) {
  int a = n.kind == K::Variable ? n.variable + 1 : 0;
  if (n.lhs) a = std::max(a, arity_of(*n.lhs));
  if (n.rhs) a = std::max(a, arity_of(*n.rhs));
  return a;
}

bool equal_nodes(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case K::Number: return a.value == b.value;
    case K::Variable: return a.variable == b.variable;
    case K::Call:
      if (a.func != b.func) return false;
      break;
    default: break;
  }
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs) || static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  if (a.lhs && !equal_nodes(*a.lhs, *b.lhs)) return false;
  if (a.rhs && !equal_nodes(*a.rhs, *b.rhs)) return false;
  return true;
}

}  // namespace

Expr Expr::parse(std::string_view text) { return Expr(Parser(text).parse_all()); }

Expr Expr::constant(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->value = v;
  if (v < 0) {
    auto neg = std::make_shared<Node>();
    neg->kind = Kind::Neg;
    n->value = -v;
    neg->lhs = n;
    return Expr(neg);
  }
  return Expr(n);
}

std::string Expr::print() const {
  if (!root_) return {};
  std::string out;
  print_node(*root_, out);
  return out;
}

int Expr::arity() const { return root_ ? arity_of(*root_) : 0; }

bool Expr::structurally_equal(const Expr& other) const {
  if (!root_ || !other.root_) return root_ == other.root_;
  return equal_nodes(*root_, *other.root_);
}

double Expr::eval(std::span<const double> x) const {
  if (!root_) throw InputError("empty expression");
  return eval_double(*root_, x);
}

}  // namespace finsler
