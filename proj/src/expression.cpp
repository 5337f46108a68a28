#include "acsol/expression.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace acsol {

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, std::string message)
    : Error(ErrorKind::ParseError, "cli", "parse_expression",
            "offset " + std::to_string(offset) + ": " + message),
      offset_(offset),
      expected_(std::move(expected)) {}

EvalError::EvalError(ErrorKind kind, std::size_t offset, std::string message)
    : Error(kind, "cli", "eval_expression",
            "subexpression at offset " + std::to_string(offset) + ": " + message),
      offset_(offset) {}

ExpressionAst::ExpressionAst(std::unique_ptr<ExprNode> root, int dim, std::string source)
    : root_(std::move(root)), dim_(dim), source_(std::move(source)) {}

namespace {

void describe_node(const ExprNode& n, std::ostringstream& os) {
  auto unary = [&](const char* name) {
    os << name << '(';
    describe_node(*n.lhs, os);
    os << ')';
  };
  auto binary = [&](const char* name) {
    os << name << '(';
    describe_node(*n.lhs, os);
    os << ',';
    describe_node(*n.rhs, os);
    os << ')';
  };
  switch (n.kind) {
    case NodeKind::Constant: {
      char buf[32];
      const auto res = std::to_chars(buf, buf + sizeof(buf), n.value);
      os << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
      break;
    }
    case NodeKind::Variable: os << 'x' << (n.variable + 1); break;
    case NodeKind::Neg: unary("Neg"); break;
    case NodeKind::Sin: unary("Sin"); break;
    case NodeKind::Cos: unary("Cos"); break;
    case NodeKind::Exp: unary("Exp"); break;
    case NodeKind::Add: binary("Add"); break;
    case NodeKind::Sub: binary("Sub"); break;
    case NodeKind::Mul: binary("Mul"); break;
    case NodeKind::Div: binary("Div"); break;
    case NodeKind::Pow:
      os << "Pow(";
      describe_node(*n.lhs, os);
      os << ',' << n.exponent << ')';
      break;
  }
}

class Parser {
 public:
  Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

  std::unique_ptr<ExprNode> parse() {
    auto root = expr();
    skip_ws();
    if (pos_ != src_.size()) fail({"operator", "end of input"}, "unexpected trailing input");
    return root;
  }

 private:
  std::string_view src_;
  int dim_;
  std::size_t pos_ = 0;
  int nesting_ = 0;

  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& msg) const {
    fail_at(pos_, std::move(expected), msg);
  }

  [[noreturn]] void fail_at(std::size_t at, std::vector<std::string> expected,
                            const std::string& msg) const {
    std::string text = msg + " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) text += (i ? " | " : "") + expected[i];
    text += ")";
    throw ParseError(at, std::move(expected), text);
  }

  void skip_ws() {
    while (pos_ < src_.size() &&
           (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  struct Guard {
    explicit Guard(Parser& p) : p(p) {
      // Bounds recursion; the tree-depth limit is enforced separately in make().
      if (++p.nesting_ > 4 * kMaxExpressionDepth) {
        p.fail({"shallower expression"}, "nesting too deep");
      }
    }
    ~Guard() { --p.nesting_; }
    Parser& p;
  };

  std::unique_ptr<ExprNode> make(NodeKind kind, std::size_t offset, std::unique_ptr<ExprNode> lhs,
                                 std::unique_ptr<ExprNode> rhs = nullptr) {
    auto n = std::make_unique<ExprNode>();
    n->kind = kind;
    n->offset = offset;
    n->depth = 1 + std::max(lhs ? lhs->depth : 0, rhs ? rhs->depth : 0);
    if (n->depth > kMaxExpressionDepth) {
      fail_at(offset, {"shallower expression"},
              "expression tree deeper than " + std::to_string(kMaxExpressionDepth));
    }
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  std::unique_ptr<ExprNode> expr() {
    Guard g(*this);
    skip_ws();
    const std::size_t start = pos_;
    auto lhs = term();
    while (true) {
      if (peek('+')) {
        ++pos_;
        lhs = make(NodeKind::Add, start, std::move(lhs), term());
      } else if (peek('-')) {
        ++pos_;
        lhs = make(NodeKind::Sub, start, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<ExprNode> term() {
    skip_ws();
    const std::size_t start = pos_;
    auto lhs = unary();
    while (true) {
      if (peek('*')) {
        ++pos_;
        lhs = make(NodeKind::Mul, start, std::move(lhs), unary());
      } else if (peek('/')) {
        ++pos_;
        lhs = make(NodeKind::Div, start, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<ExprNode> unary() {
    Guard g(*this);
    skip_ws();
    const std::size_t start = pos_;
    if (peek('-')) {
      ++pos_;
      return make(NodeKind::Neg, start, unary());
    }
    if (peek('+')) {
      ++pos_;
      return unary();
    }
    return power();
  }

  std::unique_ptr<ExprNode> power() {
    skip_ws();
    const std::size_t start = pos_;
    auto base = primary();
    while (peek('^')) {
      ++pos_;
      const int e = exponent();
      base = make(NodeKind::Pow, start, std::move(base));
      base->exponent = e;
    }
    return base;
  }

  int integer_literal() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && src_[pos_] >= '0' && src_[pos_] <= '9') ++pos_;
    if (start == pos_) fail({"integer exponent"}, "exponent must be an integer literal");
    if (pos_ < src_.size() && (src_[pos_] == '.' || src_[pos_] == 'e' || src_[pos_] == 'E')) {
      fail_at(start, {"integer exponent"}, "exponent must be an integer literal");
    }
    int v = 0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || v > 4096) {
      fail_at(start, {"integer exponent <= 4096"}, "exponent out of range");
    }
    return v;
  }

  int exponent() {
    skip_ws();
    if (peek('(')) {
      ++pos_;
      int sign = 1;
      if (peek('-')) {
        sign = -1;
        ++pos_;
      } else if (peek('+')) {
        ++pos_;
      }
      const int v = integer_literal();
      if (!peek(')')) fail({"')'"}, "unterminated exponent");
      ++pos_;
      return sign * v;
    }
    return integer_literal();
  }

  std::unique_ptr<ExprNode> number() {
    const std::size_t start = pos_;
    std::size_t p = pos_;
    auto digits = [&] {
      const std::size_t s = p;
      while (p < src_.size() && src_[p] >= '0' && src_[p] <= '9') ++p;
      return p - s;
    };
    std::size_t nd = digits();
    if (p < src_.size() && src_[p] == '.') {
      ++p;
      nd += digits();
    }
    if (nd == 0) fail_at(start, {"number"}, "malformed number");
    if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      const std::size_t s = q;
      while (q < src_.size() && src_[q] >= '0' && src_[q] <= '9') ++q;
      if (q == s) fail_at(p, {"exponent digits"}, "malformed number");
      p = q;
    }
    double v = 0.0;
    const auto res = std::from_chars(src_.data() + start, src_.data() + p, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + p || !std::isfinite(v)) {
      fail_at(start, {"finite number"}, "number out of range");
    }
    pos_ = p;
    auto n = make(NodeKind::Constant, start, nullptr);
    n->value = v;
    return n;
  }

  std::unique_ptr<ExprNode> primary() {
    Guard g(*this);
    skip_ws();
    const std::size_t start = pos_;
    const std::vector<std::string> expected = {"number", "variable", "pi", "sin", "cos", "exp", "'('"};
    if (pos_ >= src_.size()) fail(expected, "unexpected end of input");
    const char c = src_[pos_];
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (c == '(') {
      ++pos_;
      auto inner = expr();
      if (!peek(')')) fail({"')'"}, "unbalanced parenthesis");
      ++pos_;
      return inner;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      std::size_t p = pos_;
      while (p < src_.size() && ((src_[p] >= 'a' && src_[p] <= 'z') || (src_[p] >= 'A' && src_[p] <= 'Z'))) ++p;
      const std::string_view word = src_.substr(pos_, p - pos_);
      if (word == "x") {
        std::size_t q = p;
        while (q < src_.size() && src_[q] >= '0' && src_[q] <= '9') ++q;
        int k = 0;
        const auto res = std::from_chars(src_.data() + p, src_.data() + q, k);
        if (q == p || res.ec != std::errc() || k < 1 || k > dim_) {
          fail_at(start, {"variable x1..x" + std::to_string(dim_)},
                  "unknown variable '" + std::string(src_.substr(start, q - start)) + "'");
        }
        pos_ = q;
        auto n = make(NodeKind::Variable, start, nullptr);
        n->variable = k - 1;
        return n;
      }
      if (word == "pi") {
        pos_ = p;
        auto n = make(NodeKind::Constant, start, nullptr);
        n->value = std::numbers::pi;
        return n;
      }
      NodeKind fn;
      if (word == "sin") {
        fn = NodeKind::Sin;
      } else if (word == "cos") {
        fn = NodeKind::Cos;
      } else if (word == "exp") {
        fn = NodeKind::Exp;
      } else {
        fail_at(start, expected, "unknown identifier '" + std::string(word) + "'");
      }
      pos_ = p;
      if (!peek('(')) fail({"'('"}, "function call needs parentheses");
      ++pos_;
      auto arg = expr();
      if (!peek(')')) fail({"')'"}, "unbalanced parenthesis");
      ++pos_;
      return make(fn, start, std::move(arg));
    }
    fail(expected, std::string("unexpected character '") + c + "'");
  }
};

double eval_node(const ExprNode& n, std::span<const double> x) {
  auto finite = [&](double v) {
    if (!std::isfinite(v)) {
      throw EvalError(ErrorKind::InvalidArgument, n.offset, "non-finite value");
    }
    return v;
  };
  switch (n.kind) {
    case NodeKind::Constant: return n.value;
    case NodeKind::Variable:
      if (static_cast<std::size_t>(n.variable) >= x.size()) {
        throw EvalError(ErrorKind::InvalidArgument, n.offset,
                        "point has no coordinate x" + std::to_string(n.variable + 1));
      }
      return x[static_cast<std::size_t>(n.variable)];
    case NodeKind::Neg: return -eval_node(*n.lhs, x);
    case NodeKind::Sin: return std::sin(eval_node(*n.lhs, x));
    case NodeKind::Cos: return std::cos(eval_node(*n.lhs, x));
    case NodeKind::Exp: return finite(std::exp(eval_node(*n.lhs, x)));
    case NodeKind::Add: return finite(eval_node(*n.lhs, x) + eval_node(*n.rhs, x));
    case NodeKind::Sub: return finite(eval_node(*n.lhs, x) - eval_node(*n.rhs, x));
    case NodeKind::Mul: return finite(eval_node(*n.lhs, x) * eval_node(*n.rhs, x));
    case NodeKind::Div: {
      const double num = eval_node(*n.lhs, x);
      const double den = eval_node(*n.rhs, x);
      if (den == 0.0) throw EvalError(ErrorKind::DivisionByZero, n.rhs->offset, "zero denominator");
      return finite(num / den);
    }
    case NodeKind::Pow: {
      const double base = eval_node(*n.lhs, x);
      if (base == 0.0 && n.exponent < 0) {
        throw EvalError(ErrorKind::DivisionByZero, n.offset, "zero raised to a negative power");
      }
      return finite(std::pow(base, n.exponent));
    }
  }
  return 0.0;
}

}  // namespace

std::string ExpressionAst::describe() const {
  std::ostringstream os;
  describe_node(*root_, os);
  return os.str();
}

ExpressionAst parse_expression(std::string_view src, int dim) {
  Parser p(src, dim);
  auto root = p.parse();
  return ExpressionAst(std::move(root), dim, std::string(src));
}

double eval_expression(const ExpressionAst& ast, std::span<const double> point) {
  return eval_node(ast.root(), point);
}

}  // namespace acsol
