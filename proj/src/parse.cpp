#include "abb/parse.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>

#include "abb/errors.hpp"

namespace abb {

namespace {

std::optional<Function> lookup_function(std::string_view name) {
  if (name == "sin") return Function::Sin;
  if (name == "cos") return Function::Cos;
  if (name == "exp") return Function::Exp;
  if (name == "log") return Function::Log;
  if (name == "sqrt") return Function::Sqrt;
  if (name == "abs") return Function::Abs;
  return std::nullopt;
}

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (i_ >= text_.size()) {
        out.push_back({Tok::End, i_, ""});
        return out;
      }
      const char c = text_[i_];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        out.push_back(number());
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        const std::size_t start = i_;
        while (i_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_')) {
          ++i_;
        }
        out.push_back({Tok::Ident, start, std::string(text_.substr(start, i_ - start))});
      } else {
        Tok k;
        switch (c) {
          case '+': k = Tok::Plus; break;
          case '-': k = Tok::Minus; break;
          case '*': k = Tok::Star; break;
          case '/': k = Tok::Slash; break;
          case '^': k = Tok::Caret; break;
          case '(': k = Tok::LParen; break;
          case ')': k = Tok::RParen; break;
          default: throw ParseError(std::string("unexpected character '") + c + "'", i_);
        }
        out.push_back({k, i_, std::string(1, c)});
        ++i_;
      }
    }
  }

 private:
  void skip_space() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
  }

  Token number() {
    const std::size_t start = i_;
    auto digits = [&] {
      std::size_t n = 0;
      while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) {
        ++i_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (i_ < text_.size() && text_[i_] == '.') {
      ++i_;
      n += digits();
    }
    if (n == 0) throw ParseError("malformed number", start);
    if (i_ < text_.size() && (text_[i_] == 'e' || text_[i_] == 'E')) {
      const std::size_t save = i_;
      ++i_;
      if (i_ < text_.size() && (text_[i_] == '+' || text_[i_] == '-')) ++i_;
      if (digits() == 0) {
        // Not an exponent; leave the 'e' for the juxtaposition check.
        i_ = save;
      }
    }
    std::string lexeme(text_.substr(start, i_ - start));
    Token t{Tok::Number, start, lexeme};
    t.number = std::strtod(lexeme.c_str(), nullptr);
    if (!std::isfinite(t.number)) throw ParseError("number out of range", start);
    return t;
  }

  std::string_view text_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const std::vector<std::string>& names)
      : toks_(std::move(tokens)), names_(names) {}

  Expr run() {
    Expr e = expression();
    if (peek().kind != Tok::End) unexpected();
    return e;
  }

 private:
  const Token& peek() const { return toks_[k_]; }
  const Token& take() { return toks_[k_++]; }

  [[noreturn]] void unexpected() const {
    const Token& t = peek();
    if (t.kind == Tok::End) throw ParseError("unexpected end of input", t.pos);
    throw ParseError("unexpected '" + t.text + "'", t.pos);
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      if (peek().kind == Tok::End) throw ParseError(std::string("expected ") + what, peek().pos);
      throw ParseError(std::string("expected ") + what + " but found '" + peek().text + "'",
                       peek().pos);
    }
    ++k_;
  }

  Expr expression() {
    Expr acc = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const bool plus = take().kind == Tok::Plus;
      Expr rhs = term();
      acc = plus ? Expr::add({acc, rhs}) : Expr::sub(acc, rhs);
    }
    return acc;
  }

  Expr term() {
    Expr acc = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const bool star = take().kind == Tok::Star;
      Expr rhs = unary();
      acc = star ? Expr::mul({acc, rhs}) : Expr::div(acc, rhs);
    }
    return acc;
  }

  Expr unary() {
    if (peek().kind == Tok::Minus) {
      take();
      return Expr::neg(unary());
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (peek().kind != Tok::Caret) {
      reject_juxtaposition();
      return base;
    }
    take();
    const std::size_t pos = peek().pos;
    Expr ex = unary();  // right-assoc: covers a^b^c and a^-k
    double k = 0.0;
    if (!free_vars(ex).empty()) throw ParseError("non-integer exponent", pos);
    try {
      k = eval_point(ex, {});
    } catch (const EvalError&) {
      throw ParseError("non-integer exponent", pos);
    }
    if (!std::isfinite(k) || std::floor(k) != k || std::fabs(k) > 1e6) {
      throw ParseError("non-integer exponent", pos);
    }
    const int ki = static_cast<int>(k);
    if (ki < 0) return Expr::div(Expr::constant(1.0), Expr::pow(base, -ki));
    return Expr::pow(base, ki);
  }

  void reject_juxtaposition() const {
    const Tok k = peek().kind;
    if (k == Tok::Number || k == Tok::Ident || k == Tok::LParen) {
      throw ParseError("implicit multiplication is not allowed", peek().pos);
    }
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: take(); return Expr::constant(t.number);
      case Tok::LParen: {
        take();
        Expr e = expression();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        take();
        for (std::size_t i = 0; i < names_.size(); ++i) {
          if (names_[i] == t.text) {
            return Expr::variable(i);
          }
        }
        if (auto fn = lookup_function(t.text)) {
          if (peek().kind != Tok::LParen) {
            throw ParseError("function '" + t.text + "' requires an argument", peek().pos);
          }
          take();
          Expr arg = expression();
          expect(Tok::RParen, "')'");
          return Expr::func(*fn, arg);
        }
        throw ParseError("unknown identifier '" + t.text + "'", t.pos);
      }
      default: unexpected();
    }
  }

  std::vector<Token> toks_;
  const std::vector<std::string>& names_;
  std::size_t k_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const std::vector<std::string>& var_names) {
  Parser p(Lexer(text).run(), var_names);
  return p.run();
}

std::string format_number(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

// Printed precedence levels.
constexpr int kSum = 1;
constexpr int kProduct = 2;
constexpr int kUnary = 3;
constexpr int kPower = 4;
constexpr int kAtom = 5;

class Printer {
 public:
  explicit Printer(const std::vector<std::string>& names) : names_(names) {}

  std::string print(const Expr& e, int required) {
    const int own = level(e);
    std::string s = body(e);
    if (own < required) return "(" + s + ")";
    return s;
  }

 private:
  static bool leading_negative_constant(const Expr& e) {
    return e.kind() == NodeKind::Mul && e.child(0).is_constant() && e.child(0).value() < 0.0;
  }

  static int level(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::Constant: return e.value() < 0.0 ? kUnary : kAtom;
      case NodeKind::Variable:
      case NodeKind::Func: return kAtom;
      case NodeKind::Add:
      case NodeKind::Sub: return kSum;
      case NodeKind::Mul:
        return leading_negative_constant(e) ? std::min(kProduct, kUnary) : kProduct;
      case NodeKind::Div: return kProduct;
      case NodeKind::Neg: return kUnary;
      case NodeKind::Pow: return kPower;
    }
    return kAtom;
  }

  // Term printed after a binary minus in a sum, with its sign stripped.
  std::optional<std::string> negated_term(const Expr& t) {
    if (t.is_constant() && t.value() < 0.0) return format_number(-t.value());
    if (t.kind() == NodeKind::Neg) return print(t.child(0), kProduct);
    if (leading_negative_constant(t)) {
      const double c = -t.child(0).value();
      std::vector<Expr> rest(t.children().begin() + 1, t.children().end());
      if (c == 1.0) return print(Expr::mul(std::move(rest)), kProduct);
      rest.insert(rest.begin(), Expr::constant(c));
      return print(Expr::mul(std::move(rest)), kProduct);
    }
    return std::nullopt;
  }

  std::string body(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::Constant: return format_number(e.value());
      case NodeKind::Variable:
        if (e.index() < names_.size()) return names_[e.index()];
        return "x" + std::to_string(e.index() + 1);
      case NodeKind::Add: {
        std::string s = print(e.child(0), kSum);
        for (std::size_t i = 1; i < e.children().size(); ++i) {
          if (auto neg = negated_term(e.child(i))) {
            s += "-" + *neg;
          } else {
            s += "+" + print(e.child(i), kSum + 1);
          }
        }
        return s;
      }
      case NodeKind::Sub: {
        std::string rhs = print(e.child(1), kProduct);
        if (rhs.front() == '-') rhs = "(" + rhs + ")";
        return print(e.child(0), kSum) + "-" + rhs;
      }
      case NodeKind::Mul: {
        std::string s;
        std::size_t first = 0;
        if (e.child(0).is_constant(-1.0)) {
          s = "-";
          first = 1;
        }
        for (std::size_t i = first; i < e.children().size(); ++i) {
          std::string factor = print(e.child(i), i == first ? kProduct : kUnary);
          if (i > first) {
            s += "*";
            if (factor.front() == '-') factor = "(" + factor + ")";
          }
          s += factor;
        }
        if (first == 1 && e.children().size() == 2) {
          // "-x": the remaining factor must bind at least as tightly as unary minus.
          return "-" + print(e.child(1), kUnary);
        }
        return s;
      }
      case NodeKind::Div: {
        std::string rhs = print(e.child(1), kUnary);
        if (rhs.front() == '-') rhs = "(" + rhs + ")";
        return print(e.child(0), kProduct) + "/" + rhs;
      }
      case NodeKind::Neg: {
        std::string inner = print(e.child(0), kUnary);
        if (inner.front() == '-') inner = "(" + inner + ")";
        return "-" + inner;
      }
      case NodeKind::Pow: {
        std::string base = print(e.child(0), kAtom);
        const int k = e.exponent();
        return base + "^" + (k < 0 ? "(" + std::to_string(k) + ")" : std::to_string(k));
      }
      case NodeKind::Func:
        return std::string(function_name(e.function())) + "(" + print(e.child(0), 0) + ")";
    }
    return "?";
  }

  const std::vector<std::string>& names_;
};

}  // namespace

std::string format(const Expr& e, const std::vector<std::string>& var_names) {
  Printer p(var_names);
  return p.print(e, 0);
}

}  // namespace abb
