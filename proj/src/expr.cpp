#include "curvlab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace curvlab {

namespace {

ExprPtr node(ExprKind k) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  return n;
}

ExprPtr make_const(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Constant;
  n->value = v;
  return n;
}

ExprPtr make_var(int idx) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Variable;
  n->var = idx;
  return n;
}

ExprPtr make_binary(ExprKind k, ExprPtr a, ExprPtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

ExprPtr make_unary(ExprKind k, ExprPtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = k;
  n->a = std::move(a);
  return n;
}

ExprPtr make_call(FuncId fn, ExprPtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Call;
  n->fn = fn;
  n->a = std::move(a);
  return n;
}

const char* func_name(FuncId f) {
  switch (f) {
    case FuncId::Sin: return "sin";
    case FuncId::Cos: return "cos";
    case FuncId::Tan: return "tan";
    case FuncId::Exp: return "exp";
    case FuncId::Log: return "log";
    case FuncId::Sqrt: return "sqrt";
  }
  return "?";
}

bool lookup_func(const std::string& name, FuncId& out) {
  if (name == "sin") out = FuncId::Sin;
  else if (name == "cos") out = FuncId::Cos;
  else if (name == "tan") out = FuncId::Tan;
  else if (name == "exp") out = FuncId::Exp;
  else if (name == "log") out = FuncId::Log;
  else if (name == "sqrt") out = FuncId::Sqrt;
  else return false;
  return true;
}

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& coords)
      : s_(text), coords_(coords) {}

  ExprPtr run() {
    ExprPtr e = parse_expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw SyntaxError(pos_, msg); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  // expr := term (('+'|'-') term)*
  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (true) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        e = make_binary(ExprKind::Add, e, parse_term());
      } else if (c == '-') {
        ++pos_;
        e = make_binary(ExprKind::Sub, e, parse_term());
      } else {
        return e;
      }
    }
  }

  // term := unary (('*'|'/') unary)*
  ExprPtr parse_term() {
    ExprPtr e = parse_unary();
    while (true) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        e = make_binary(ExprKind::Mul, e, parse_unary());
      } else if (c == '/') {
        ++pos_;
        e = make_binary(ExprKind::Div, e, parse_unary());
      } else {
        return e;
      }
    }
  }

  // unary := '-' unary | power       (^ binds tighter than unary minus)
  ExprPtr parse_unary() {
    if (peek() == '-') {
      ++pos_;
      ExprPtr e = parse_unary();
      // fold literal negation so "-1.5" round-trips as a single constant
      if (e->kind == ExprKind::Constant) return make_const(-e->value);
      return make_unary(ExprKind::Neg, e);
    }
    return parse_power();
  }

  // power := primary ('^' unary)?    (right-associative)
  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (peek() == '^') {
      ++pos_;
      return make_binary(ExprKind::Pow, base, parse_unary());
    }
    return base;
  }

  ExprPtr parse_primary() {
    char c = peek();
    if (c == '\0') fail("unexpected end of input");
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  ExprPtr parse_number() {
    skip_ws();
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    double v = 0.0;
    auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{}) fail("malformed number");
    pos_ += static_cast<std::size_t>(res.ptr - begin);
    return make_const(v);
  }

  ExprPtr parse_ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string name = s_.substr(start, pos_ - start);
    FuncId fn;
    if (lookup_func(name, fn)) {
      if (!consume('(')) throw SyntaxError(pos_, "expected '(' after function name");
      ExprPtr arg = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return make_call(fn, arg);
    }
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] == name) return make_var(static_cast<int>(i));
    throw UnknownIdentifier(start, name);
  }

  const std::string& s_;
  const std::vector<std::string>& coords_;
  std::size_t pos_ = 0;
};

void print_rec(const ExprNode& n, const std::vector<std::string>& coords,
               std::string& out) {
  switch (n.kind) {
    case ExprKind::Constant: {
      char buf[32];
      auto res = std::to_chars(buf, buf + sizeof(buf), n.value);
      out.append(buf, res.ptr);
      return;
    }
    case ExprKind::Variable:
      out += coords[n.var];
      return;
    case ExprKind::Neg:
      out += "(-";
      print_rec(*n.a, coords, out);
      out += ")";
      return;
    case ExprKind::Call:
      out += func_name(n.fn);
      out += "(";
      print_rec(*n.a, coords, out);
      out += ")";
      return;
    default: {
      const char* op = n.kind == ExprKind::Add   ? " + "
                       : n.kind == ExprKind::Sub ? " - "
                       : n.kind == ExprKind::Mul ? " * "
                       : n.kind == ExprKind::Div ? " / "
                                                 : " ^ ";
      out += "(";
      print_rec(*n.a, coords, out);
      out += op;
      print_rec(*n.b, coords, out);
      out += ")";
      return;
    }
  }
}

bool node_equal(const ExprNode& x, const ExprNode& y) {
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case ExprKind::Constant: return x.value == y.value;
    case ExprKind::Variable: return x.var == y.var;
    case ExprKind::Neg: return node_equal(*x.a, *y.a);
    case ExprKind::Call: return x.fn == y.fn && node_equal(*x.a, *y.a);
    default: return node_equal(*x.a, *y.a) && node_equal(*x.b, *y.b);
  }
}

Jet eval_rec(const ExprNode& n, std::span<const double> point,
             const LayoutPtr& layout) {
  switch (n.kind) {
    case ExprKind::Constant:
      return Jet::constant(layout, n.value);
    case ExprKind::Variable:
      return Jet::variable(layout, n.var, point[n.var]);
    case ExprKind::Add:
      return eval_rec(*n.a, point, layout) + eval_rec(*n.b, point, layout);
    case ExprKind::Sub:
      return eval_rec(*n.a, point, layout) - eval_rec(*n.b, point, layout);
    case ExprKind::Mul:
      return eval_rec(*n.a, point, layout) * eval_rec(*n.b, point, layout);
    case ExprKind::Div:
      return eval_rec(*n.a, point, layout) / eval_rec(*n.b, point, layout);
    case ExprKind::Neg:
      return -eval_rec(*n.a, point, layout);
    case ExprKind::Pow: {
      Jet base = eval_rec(*n.a, point, layout);
      Jet ex = eval_rec(*n.b, point, layout);
      bool ex_const = true;
      for (int i = 1; i < ex.size(); ++i)
        if (ex[i] != 0.0) {
          ex_const = false;
          break;
        }
      if (ex_const) {
        double p = ex.value();
        double r = std::round(p);
        if (r == p && std::abs(p) < 1e9)
          return jet_pow_int(base, static_cast<long long>(r));
        return jet_pow_real(base, p);
      }
      // variable exponent: b^e = exp(e log b)
      return jet_exp(ex * jet_log(base));
    }
    case ExprKind::Call: {
      Jet u = eval_rec(*n.a, point, layout);
      switch (n.fn) {
        case FuncId::Sin: return jet_sin(u);
        case FuncId::Cos: return jet_cos(u);
        case FuncId::Tan: return jet_tan(u);
        case FuncId::Exp: return jet_exp(u);
        case FuncId::Log: return jet_log(u);
        case FuncId::Sqrt: return jet_sqrt(u);
      }
    }
  }
  throw std::logic_error("eval_rec: bad node");
}

}  // namespace

Expression::Expression(ExprPtr root, std::vector<std::string> coords)
    : root_(std::move(root)), coords_(std::move(coords)) {}

Expression Expression::parse(const std::string& text,
                             const std::vector<std::string>& coord_names) {
  Parser p(text, coord_names);
  return Expression(p.run(), coord_names);
}

std::string Expression::to_string() const {
  std::string out;
  print_rec(*root_, coords_, out);
  return out;
}

Jet Expression::eval_jet(std::span<const double> point, int order) const {
  if (static_cast<int>(point.size()) != dim())
    throw std::logic_error("eval_jet: point dimension mismatch");
  return eval_rec(*root_, point, JetLayout::get(dim(), order));
}

double Expression::eval_value(std::span<const double> point) const {
  return eval_jet(point, 0).value();
}

bool Expression::structurally_equal(const Expression& o) const {
  return node_equal(*root_, *o.root_);
}

Expression Expression::constant(double v, std::vector<std::string> coords) {
  return Expression(make_const(v), std::move(coords));
}

Expression Expression::variable(int var, std::vector<std::string> coords) {
  return Expression(make_var(var), std::move(coords));
}

Expression operator+(const Expression& a, const Expression& b) {
  return Expression(make_binary(ExprKind::Add, a.root_, b.root_), a.coords_);
}

Expression operator-(const Expression& a, const Expression& b) {
  return Expression(make_binary(ExprKind::Sub, a.root_, b.root_), a.coords_);
}

Expression operator*(const Expression& a, const Expression& b) {
  return Expression(make_binary(ExprKind::Mul, a.root_, b.root_), a.coords_);
}

Expression Expression::scaled(double s) const {
  return Expression(make_binary(ExprKind::Mul, make_const(s), root_), coords_);
}

Expression Expression::exp_of() const {
  return Expression(make_call(FuncId::Exp, root_), coords_);
}

}  // namespace curvlab
