#include "scalred/expression.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>

namespace scalred {

namespace {

struct Node {
  Expression::Op op = Expression::Op::constant;
  double value = 0.0;
  std::uint32_t index = 0;
  std::vector<std::unique_ptr<Node>> args;

  bool is_constant() const { return op == Expression::Op::constant; }
};

using NodePtr = std::unique_ptr<Node>;

struct Primitive {
  const char* name;
  Expression::Op op;
  std::size_t arity;
};

constexpr Primitive kPrimitives[] = {
    {"exp", Expression::Op::exp, 1},     {"log", Expression::Op::log, 1},      {"sqrt", Expression::Op::sqrt, 1},
    {"sin", Expression::Op::sin, 1},     {"cos", Expression::Op::cos, 1},      {"tan", Expression::Op::tan, 1},
    {"atan", Expression::Op::atan, 1},   {"arctan", Expression::Op::atan, 1},  {"atan2", Expression::Op::atan2, 2},
    {"arctan2", Expression::Op::atan2, 2}, {"pow", Expression::Op::pow, 2},
};

double fold(Expression::Op op, double a, double b) {
  using Op = Expression::Op;
  switch (op) {
    case Op::neg: return -a;
    case Op::add: return a + b;
    case Op::sub: return a - b;
    case Op::mul: return a * b;
    case Op::div: return a * reciprocal(b);
    case Op::pow:
    case Op::pow_const: return pow(a, b);
    case Op::exp: return exp(a);
    case Op::log: return log(a);
    case Op::sqrt: return sqrt(a);
    case Op::sin: return sin(a);
    case Op::cos: return cos(a);
    case Op::tan: return tan(a);
    case Op::atan: return atan(a);
    case Op::atan2: return atan2(a, b);
    default: return a;
  }
}

NodePtr make_constant(double v) {
  auto n = std::make_unique<Node>();
  n->op = Expression::Op::constant;
  n->value = v;
  return n;
}

NodePtr make_op(Expression::Op op, std::vector<NodePtr> args) {
  bool all_const = true;
  for (const auto& a : args) all_const = all_const && a->is_constant();
  if (all_const) {
    const double a = args.empty() ? 0.0 : args[0]->value;
    const double b = args.size() > 1 ? args[1]->value : 0.0;
    return make_constant(fold(op, a, b));
  }
  if (op == Expression::Op::pow && args[1]->is_constant()) {
    auto n = std::make_unique<Node>();
    n->op = Expression::Op::pow_const;
    n->value = args[1]->value;
    n->args.push_back(std::move(args[0]));
    return n;
  }
  auto n = std::make_unique<Node>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

class Parser {
 public:
  Parser(const std::string& src, const std::vector<std::string>& vars, const std::map<std::string, double>& params,
         const std::string& path)
      : src_(src), vars_(vars), params_(params), path_(path) {}

  NodePtr parse() {
    auto n = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SchemaError((path_.empty() ? std::string() : path_ + ": ") + msg + " in expression \"" + src_ +
                      "\" at offset " + std::to_string(pos_));
  }

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
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Expression::Op::add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = binary(Expression::Op::sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Expression::Op::mul, std::move(lhs), unary());
      } else if (accept('/')) {
        lhs = binary(Expression::Op::div, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      std::vector<NodePtr> a;
      a.push_back(unary());
      return make_op(Expression::Op::neg, std::move(a));
    }
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return binary(Expression::Op::pow, std::move(base), unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (accept('(')) {
      auto n = expr();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const char* begin = src_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return make_constant(v);
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string id = src_.substr(start, pos_ - start);
    if (accept('(')) return call(id);
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i] == id) {
        auto n = std::make_unique<Node>();
        n->op = Expression::Op::variable;
        n->index = static_cast<std::uint32_t>(i);
        return n;
      }
    }
    if (auto it = params_.find(id); it != params_.end()) return make_constant(it->second);
    if (id == "pi") return make_constant(std::numbers::pi);
    pos_ = start;
    fail("unknown variable '" + id + "'");
  }

  NodePtr call(const std::string& id) {
    const Primitive* prim = nullptr;
    for (const auto& p : kPrimitives) {
      if (id == p.name) prim = &p;
    }
    if (!prim) fail("unknown primitive '" + id + "'");
    std::vector<NodePtr> args;
    if (!accept(')')) {
      args.push_back(expr());
      while (accept(',')) args.push_back(expr());
      expect(')');
    }
    if (args.size() != prim->arity) {
      fail("primitive '" + id + "' takes " + std::to_string(prim->arity) + " argument(s)");
    }
    return make_op(prim->op, std::move(args));
  }

  NodePtr binary(Expression::Op op, NodePtr a, NodePtr b) {
    std::vector<NodePtr> args;
    args.push_back(std::move(a));
    args.push_back(std::move(b));
    return make_op(op, std::move(args));
  }

  const std::string& src_;
  const std::vector<std::string>& vars_;
  const std::map<std::string, double>& params_;
  const std::string& path_;
  std::size_t pos_ = 0;
};

}  // namespace

class ExpressionCompiler {
 public:
  static void emit(Expression& e, const Node& n, std::size_t depth) {
    for (std::size_t i = 0; i < n.args.size(); ++i) emit(e, *n.args[i], depth + i);
    e.code_.push_back({n.op, n.index, n.value});
    e.max_stack_ = std::max(e.max_stack_, depth + 1);
  }
};

Expression Expression::parse(const std::string& source, const std::vector<std::string>& variables,
                             const std::map<std::string, double>& parameters, const std::string& path) {
  Expression e;
  e.source_ = source;
  e.arity_ = variables.size();
  NodePtr root;
  try {
    root = Parser(source, variables, parameters, path).parse();
  } catch (const NumericError& err) {
    throw SchemaError((path.empty() ? std::string() : path + ": ") + "constant subexpression is undefined (" +
                      err.what() + ")");
  }
  ExpressionCompiler::emit(e, *root, 0);
  return e;
}

ScalarField to_field(const Expression& e) {
  return ScalarField::generic(e.arity(), [e]<class T>(std::span<const T> in) { return e.evaluate<T>(in); });
}

VectorField to_field(const std::vector<Expression>& components) {
  const std::size_t arity = components.empty() ? 0 : components.front().arity();
  for (const auto& c : components) {
    if (c.arity() != arity) throw DimensionError("vector field components take different variables");
  }
  return VectorField::generic(arity, components.size(), [components]<class T>(std::span<const T> in) {
    std::vector<T> out;
    out.reserve(components.size());
    for (const auto& c : components) out.push_back(c.evaluate<T>(in));
    return out;
  });
}

}  // namespace scalred
