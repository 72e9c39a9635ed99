#include "fraclab/expression.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

#include "fraclab/error.hpp"

namespace fraclab {

namespace {

constexpr std::size_t kMaxStack = 128;

using Op = Expression::Op;
using Instruction = Expression::Instruction;

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

struct Builtin {
  std::string_view name;
  Op op;
  int arity;
};

constexpr std::array<Builtin, 7> kBuiltins{{
    {"sin", Op::sin, 1},
    {"cos", Op::cos, 1},
    {"exp", Op::exp, 1},
    {"abs", Op::abs, 1},
    {"sqrt", Op::sqrt, 1},
    {"min", Op::min, 2},
    {"max", Op::max, 2},
}};

}  // namespace

int VariableUsage::required_dimension() const {
  const bool needs_1d = x_scalar || y_scalar;
  const bool needs_2d = x2 || y2;
  if (needs_1d && needs_2d) return 0;
  return needs_2d ? 2 : 1;
}

bool VariableUsage::compatible_with(int dimension) const {
  if (dimension == 1) return !(x2 || y2);
  if (dimension == 2) return !(x_scalar || y_scalar);
  return false;
}

class ExpressionParser {
 public:
  ExpressionParser(std::string_view src, VariableSet allowed,
                   const Expression::ReferenceTable& refs)
      : src_(src), allowed_(allowed), refs_(refs) {}

  Expression run() {
    Expression e;
    e.source_ = std::string(src_);
    parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    e.code_ = std::move(code_);
    e.usage_ = usage_;
    e.finalize();
    return e;
  }

 private:
  std::string_view src_;
  VariableSet allowed_;
  const Expression::ReferenceTable& refs_;
  std::size_t pos_ = 0;
  std::vector<Instruction> code_;
  VariableUsage usage_;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
    throw ParseError(what, at);
  }

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                  src_[pos_] == '\n' || src_[pos_] == '\r'))
      ++pos_;
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
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }
  void emit(Op op) { code_.push_back({op, 0, 0.0}); }

  void parse_sum() {
    parse_product();
    for (;;) {
      if (accept('+')) {
        parse_product();
        emit(Op::add);
      } else if (accept('-')) {
        parse_product();
        emit(Op::sub);
      } else {
        return;
      }
    }
  }

  void parse_product() {
    parse_unary();
    for (;;) {
      if (accept('*')) {
        parse_unary();
        emit(Op::mul);
      } else if (accept('/')) {
        parse_unary();
        emit(Op::div);
      } else {
        return;
      }
    }
  }

  void parse_unary() {
    if (accept('-')) {
      parse_unary();
      emit(Op::neg);
    } else if (accept('+')) {
      parse_unary();
    } else {
      parse_power();
    }
  }

  // Exponent operands may carry a sign: 2^-1.
  void parse_exponent_operand() {
    if (accept('-')) {
      parse_exponent_operand();
      emit(Op::neg);
    } else if (accept('+')) {
      parse_exponent_operand();
    } else {
      parse_primary();
    }
  }

  void parse_power() {
    parse_primary();
    while (accept('^')) {
      parse_exponent_operand();
      emit(Op::pow);
    }
  }

  void parse_number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    while (end < src_.size() && is_digit(src_[end])) ++end;
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      while (end < src_.size() && is_digit(src_[end])) ++end;
    }
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t e = end + 1;
      if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
      if (e < src_.size() && is_digit(src_[e])) {
        while (e < src_.size() && is_digit(src_[e])) ++e;
        end = e;
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + end, value);
    if (ec != std::errc() || ptr != src_.data() + end) fail_at("malformed number", start);
    pos_ = end;
    code_.push_back({Op::push_const, 0, value});
  }

  void push_variable(std::string_view name, std::size_t at) {
    std::uint8_t var = 0;
    bool is_y = false;
    if (name == "x") {
      usage_.x_scalar = true;
      var = 0;
    } else if (name == "x1") {
      usage_.x1 = true;
      var = 0;
    } else if (name == "x2") {
      usage_.x2 = true;
      var = 1;
    } else if (name == "y") {
      usage_.y_scalar = true;
      var = 2;
      is_y = true;
    } else if (name == "y1") {
      usage_.y1 = true;
      var = 2;
      is_y = true;
    } else if (name == "y2") {
      usage_.y2 = true;
      var = 3;
      is_y = true;
    } else {
      fail_at("unknown identifier '" + std::string(name) + "'", at);
    }
    if (is_y && allowed_ == VariableSet::point)
      fail_at("variable '" + std::string(name) + "' not allowed in a single-point field", at);
    code_.push_back({Op::push_var, var, 0.0});
  }

  // Inline a referenced expression, remapping its x/y slots onto the
  // argument symbols given at the call site.
  void inline_reference(const Expression::Reference& ref, std::string_view name,
                        std::size_t at) {
    std::vector<bool> args_are_y;
    if (!accept(')')) {
      do {
        skip_ws();
        const std::size_t arg_at = pos_;
        std::size_t end = pos_;
        while (end < src_.size() && is_ident_char(src_[end])) ++end;
        const std::string_view arg = src_.substr(pos_, end - pos_);
        if (arg == "x") {
          args_are_y.push_back(false);
        } else if (arg == "y") {
          if (allowed_ == VariableSet::point)
            fail_at("variable 'y' not allowed in a single-point field", arg_at);
          args_are_y.push_back(true);
        } else {
          fail_at("arguments of '" + std::string(name) + "' must be the point symbols x or y",
                  arg_at);
        }
        pos_ = end;
      } while (accept(','));
      expect(')');
    }
    if (static_cast<int>(args_are_y.size()) != ref.arguments)
      fail_at("'" + std::string(name) + "' takes " + std::to_string(ref.arguments) +
                  " argument(s), got " + std::to_string(args_are_y.size()),
              at);

    // Slot map: referenced x-slots (0,1) go to arg 0, y-slots (2,3) to arg 1.
    const std::uint8_t x_base = args_are_y[0] ? 2 : 0;
    const std::uint8_t y_base = ref.arguments == 2 ? (args_are_y[1] ? 2 : 0) : 2;
    const VariableUsage& u = ref.expression->usage();
    auto mark = [&](bool scalar, bool c1, bool c2, std::uint8_t base) {
      const bool y = base == 2;
      if (scalar) (y ? usage_.y_scalar : usage_.x_scalar) = true;
      if (c1) (y ? usage_.y1 : usage_.x1) = true;
      if (c2) (y ? usage_.y2 : usage_.x2) = true;
    };
    mark(u.x_scalar, u.x1, u.x2, x_base);
    mark(u.y_scalar, u.y1, u.y2, y_base);
    for (Instruction ins : ref.expression->code_) {
      if (ins.op == Op::push_var) {
        const std::uint8_t component = ins.var & 1;
        ins.var = static_cast<std::uint8_t>((ins.var < 2 ? x_base : y_base) + component);
      }
      code_.push_back(ins);
    }
  }

  void parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (is_digit(c) || c == '.') {
      parse_number();
      return;
    }
    if (c == '(') {
      ++pos_;
      parse_sum();
      expect(')');
      return;
    }
    if (!is_ident_start(c)) fail("unexpected '" + std::string(1, c) + "'");

    const std::size_t at = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
    const std::string_view name = src_.substr(at, pos_ - at);

    if (!accept('(')) {
      push_variable(name, at);
      return;
    }
    for (const Builtin& b : kBuiltins) {
      if (b.name != name) continue;
      parse_sum();
      for (int k = 1; k < b.arity; ++k) {
        expect(',');
        parse_sum();
      }
      if (b.arity == 1 && accept(','))
        fail_at("'" + std::string(name) + "' takes 1 argument", at);
      expect(')');
      emit(b.op);
      return;
    }
    if (const auto it = refs_.find(name); it != refs_.end()) {
      inline_reference(it->second, name, at);
      return;
    }
    fail_at("unknown function '" + std::string(name) + "'", at);
  }
};

Expression Expression::parse(std::string_view source, VariableSet allowed,
                             const ReferenceTable& references) {
  return ExpressionParser(source, allowed, references).run();
}

Expression Expression::constant(double value) {
  Expression e;
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  e.source_.assign(buf, res.ptr);
  e.code_.push_back({Op::push_const, 0, value});
  e.finalize();
  return e;
}

void Expression::finalize() {
  std::size_t depth = 0;
  stack_depth_ = 0;
  for (const Instruction& ins : code_) {
    switch (ins.op) {
      case Op::push_const:
      case Op::push_var:
        ++depth;
        break;
      case Op::add: case Op::sub: case Op::mul: case Op::div:
      case Op::pow: case Op::min: case Op::max:
        --depth;
        break;
      default:
        break;
    }
    stack_depth_ = std::max(stack_depth_, depth);
  }
  if (stack_depth_ > kMaxStack) throw ParseError("expression nests too deeply", 0);
  constant_ = !usage_.any();
  if (constant_) value_ = (*this)(Point{}, Point{});
}

double Expression::operator()(const Point& x, const Point& y) const noexcept {
  std::array<double, kMaxStack> stack;
  std::size_t top = 0;
  const double vars[4] = {x[0], x[1], y[0], y[1]};
  for (const Instruction& ins : code_) {
    switch (ins.op) {
      case Op::push_const: stack[top++] = ins.value; break;
      case Op::push_var: stack[top++] = vars[ins.var]; break;
      case Op::neg: stack[top - 1] = -stack[top - 1]; break;
      case Op::add: --top; stack[top - 1] += stack[top]; break;
      case Op::sub: --top; stack[top - 1] -= stack[top]; break;
      case Op::mul: --top; stack[top - 1] *= stack[top]; break;
      case Op::div: --top; stack[top - 1] /= stack[top]; break;
      case Op::pow: --top; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
      case Op::min: --top; stack[top - 1] = std::min(stack[top - 1], stack[top]); break;
      case Op::max: --top; stack[top - 1] = std::max(stack[top - 1], stack[top]); break;
      case Op::sin: stack[top - 1] = std::sin(stack[top - 1]); break;
      case Op::cos: stack[top - 1] = std::cos(stack[top - 1]); break;
      case Op::exp: stack[top - 1] = std::exp(stack[top - 1]); break;
      case Op::abs: stack[top - 1] = std::abs(stack[top - 1]); break;
      case Op::sqrt: stack[top - 1] = std::sqrt(stack[top - 1]); break;
    }
  }
  return stack[0];
}

Expression Expression::swapped() const {
  Expression e = *this;
  e.source_ = "swap_xy(" + source_ + ")";
  for (Instruction& ins : e.code_)
    if (ins.op == Op::push_var) ins.var = static_cast<std::uint8_t>(ins.var ^ 2);
  std::swap(e.usage_.x_scalar, e.usage_.y_scalar);
  std::swap(e.usage_.x1, e.usage_.y1);
  std::swap(e.usage_.x2, e.usage_.y2);
  return e;
}

Expression Expression::renamed(std::string source) const {
  Expression e = *this;
  e.source_ = std::move(source);
  return e;
}

}  // namespace fraclab
