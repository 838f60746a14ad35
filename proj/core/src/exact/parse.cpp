#include "mahler/exact/parse.hpp"

#include <algorithm>
#include <cctype>

#include "mahler/exact/errors.hpp"

namespace mahler {

namespace {

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars, std::size_t line,
         std::size_t column)
      : text_(text), vars_(vars), line_(line), column_(column) {}

  RatFunc parse() {
    RatFunc r = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, column_ + pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatFunc expr() {
    RatFunc r = term();
    while (true) {
      if (accept('+')) r = r + term();
      else if (accept('-')) r = r - term();
      else return r;
    }
  }

  RatFunc term() {
    RatFunc r = unary();
    while (true) {
      if (accept('*')) {
        r = r * unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        RatFunc d = unary();
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        r = r / d;
      } else {
        return r;
      }
    }
  }

  RatFunc unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RatFunc power() {
    RatFunc base = atom();
    if (!accept('^')) return base;
    bool negative = accept('-');
    skip_space();
    BigInt e = integer();
    if (!e.fits_slong_p() || e > 1000000) fail("exponent too large");
    long k = e.get_si();
    if (negative) {
      if (base.is_zero()) fail("negative power of zero");
      k = -k;
    }
    return base.pow(k);
  }

  BigInt integer() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (start == pos_) fail("expected integer");
    return BigInt(std::string(text_.substr(start, pos_ - start)), 10);
  }

  RatFunc atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc r = expr();
      if (!accept(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c)))
      return RatFunc::constant(vars_, BigRational(integer()));
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      auto it = std::find(vars_.begin(), vars_.end(), name);
      if (it == vars_.end()) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      return RatFunc(MultiPoly::variable(vars_, static_cast<std::size_t>(it - vars_.begin())));
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t line_;
  std::size_t column_;
  std::size_t pos_ = 0;
};

}  // namespace

RatFunc parse_ratfunc(std::string_view text, const std::vector<std::string>& variables,
                      std::size_t line, std::size_t column) {
  return Parser(text, variables, line, column).parse();
}

MultiPoly parse_polynomial(std::string_view text,
                           const std::vector<std::string>& variables,
                           std::size_t line, std::size_t column) {
  RatFunc r = parse_ratfunc(text, variables, line, column);
  if (!r.is_polynomial()) throw ParseError("expected a polynomial", line, column);
  return r.as_polynomial();
}

}  // namespace mahler
