#include "breuil/intpoly.hpp"

#include <cctype>

#include "breuil/error.hpp"

namespace breuil {

IntPoly IntPoly::constant(int nvars, const mpz_class& c) {
  IntPoly out(nvars);
  out.add_term(Exponents(nvars, 0), c);
  return out;
}

IntPoly IntPoly::variable(int nvars, int index) {
  IntPoly out(nvars);
  Exponents e(nvars, 0);
  e[index] = 1;
  out.add_term(e, 1);
  return out;
}

mpz_class IntPoly::coeff(const Exponents& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? mpz_class(0) : it->second;
}

void IntPoly::add_term(const Exponents& exps, const mpz_class& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(exps, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

int IntPoly::degree_in(int index) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e[index]);
  return d;
}

IntPoly IntPoly::operator+(const IntPoly& other) const {
  IntPoly out = *this;
  for (const auto& [e, c] : other.terms_) out.add_term(e, c);
  return out;
}

IntPoly IntPoly::operator-(const IntPoly& other) const { return *this + (-other); }

IntPoly IntPoly::operator-() const {
  IntPoly out(nvars_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

IntPoly IntPoly::operator*(const IntPoly& other) const {
  IntPoly out(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      Exponents e(nvars_);
      for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

IntPoly IntPoly::pow(unsigned k) const {
  IntPoly result = constant(nvars_, 1);
  IntPoly base = *this;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, const std::vector<std::string>& vars, int line, int column)
      : text_(text), vars_(vars), line_(line), column_(column) {}

  IntPoly parse() {
    skip_ws();
    if (pos_ >= text_.size()) fail("empty polynomial");
    IntPoly out = expr();
    skip_ws();
    if (pos_ < text_.size()) fail(std::string("unexpected character '") + text_[pos_] + "'");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(line_, column_ + static_cast<int>(pos_), message);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  IntPoly expr() {
    IntPoly acc(static_cast<int>(vars_.size()));
    bool first = true;
    while (true) {
      skip_ws();
      int sign = 1;
      if (peek('+')) {
        ++pos_;
      } else if (peek('-')) {
        ++pos_;
        sign = -1;
      } else if (!first) {
        break;
      }
      IntPoly t = term();
      acc = sign > 0 ? acc + t : acc - t;
      first = false;
      skip_ws();
      if (!(peek('+') || peek('-'))) break;
    }
    return acc;
  }

  bool starts_factor() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || std::isalpha(static_cast<unsigned char>(c)) ||
           c == '(';
  }

  IntPoly term() {
    IntPoly acc = factor();
    while (true) {
      if (peek('*')) {
        ++pos_;
        acc = acc * factor();
      } else if (starts_factor()) {
        acc = acc * factor();
      } else {
        break;
      }
    }
    return acc;
  }

  IntPoly factor() {
    IntPoly base = primary();
    if (peek('^')) {
      ++pos_;
      skip_ws();
      size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent after '^'");
      unsigned long k = std::stoul(std::string(text_.substr(start, pos_ - start)));
      if (k > 4096) fail("exponent too large");
      base = base.pow(static_cast<unsigned>(k));
    }
    return base;
  }

  IntPoly primary() {
    skip_ws();
    const int nvars = static_cast<int>(vars_.size());
    if (pos_ >= text_.size()) fail("unexpected end of polynomial");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      IntPoly inner = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return IntPoly::constant(nvars, mpz_class(std::string(text_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      for (int i = 0; i < nvars; ++i) {
        if (vars_[i] == name) return IntPoly::variable(nvars, i);
      }
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  int line_;
  int column_;
  size_t pos_ = 0;
};

}  // namespace

IntPoly parse_int_poly(std::string_view text, const std::vector<std::string>& vars, int line, int column) {
  return PolyParser(text, vars, line, column).parse();
}

}  // namespace breuil
