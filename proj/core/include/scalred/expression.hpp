#pragma once

// Arithmetic expressions over named variables, compiled to a flat stack
// program that can be evaluated on reals and (nested) hyper-duals.
//
// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// Primitives: exp log sqrt sin cos tan atan arctan atan2 arctan2 pow.
// The name `pi` is predefined unless shadowed by a parameter.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "scalred/diffkit.hpp"

namespace scalred {

class Expression {
 public:
  enum class Op : std::uint8_t {
    constant,
    variable,
    neg,
    add,
    sub,
    mul,
    div,
    pow,
    pow_const,
    exp,
    log,
    sqrt,
    sin,
    cos,
    tan,
    atan,
    atan2,
  };

  struct Instr {
    Op op;
    std::uint32_t index = 0;
    double value = 0.0;
  };

  /// Throws SchemaError (prefixed with `path`) on syntax errors, unknown
  /// names or unknown primitives.
  static Expression parse(const std::string& source, const std::vector<std::string>& variables,
                          const std::map<std::string, double>& parameters = {}, const std::string& path = "");

  const std::string& source() const noexcept { return source_; }
  std::size_t arity() const noexcept { return arity_; }
  std::span<const Instr> program() const noexcept { return code_; }

  template <class T>
  T evaluate(std::span<const T> vars) const;

 private:
  std::string source_;
  std::size_t arity_ = 0;
  std::size_t max_stack_ = 0;
  std::vector<Instr> code_;

  friend class ExpressionCompiler;
};

ScalarField to_field(const Expression& e);
VectorField to_field(const std::vector<Expression>& components);

template <class T>
T Expression::evaluate(std::span<const T> vars) const {
  if (vars.size() != arity_) throw DimensionError("expression expects " + std::to_string(arity_) + " variables");
  std::vector<T> st;
  st.reserve(max_stack_);
  auto pop = [&st] {
    T v = std::move(st.back());
    st.pop_back();
    return v;
  };
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::constant: st.emplace_back(in.value); break;
      case Op::variable: st.push_back(vars[in.index]); break;
      case Op::neg: st.back() = -st.back(); break;
      case Op::add: { T b = pop(); st.back() = st.back() + b; break; }
      case Op::sub: { T b = pop(); st.back() = st.back() - b; break; }
      case Op::mul: { T b = pop(); st.back() = st.back() * b; break; }
      case Op::div: {
        T b = pop();
        st.back() = st.back() * reciprocal(b);
        break;
      }
      case Op::pow: {
        T b = pop();
        T a = pop();
        if (!(value_of(a) > 0.0)) throw NumericError("pow with variable exponent requires a positive base");
        st.push_back(exp(b * log(a)));
        break;
      }
      case Op::pow_const: st.back() = pow(st.back(), in.value); break;
      case Op::exp: st.back() = exp(st.back()); break;
      case Op::log: st.back() = log(st.back()); break;
      case Op::sqrt: st.back() = sqrt(st.back()); break;
      case Op::sin: st.back() = sin(st.back()); break;
      case Op::cos: st.back() = cos(st.back()); break;
      case Op::tan: st.back() = tan(st.back()); break;
      case Op::atan: st.back() = atan(st.back()); break;
      case Op::atan2: {
        T x = pop();
        st.back() = atan2(st.back(), x);
        break;
      }
    }
  }
  return st.back();
}

}  // namespace scalred
