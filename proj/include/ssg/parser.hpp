#ifndef SSG_PARSER_HPP
#define SSG_PARSER_HPP

// Grammar (whitespace ignored):
//
//   expr    := term (('+' | '-') term)*
//   term    := factor ('*' factor)*
//   factor  := ('+' | '-') factor | power
//   power   := primary ('^' UINT)?
//   primary := NUMBER | 'x' | 'y' | '(' expr ')'
//
// Division, negative or fractional exponents and chained '^' are rejected.

#include <charconv>
#include <cctype>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"

namespace ssg {

namespace detail {

class PolyParser {
public:
  static constexpr int kMaxExponent = 32;

  explicit PolyParser(std::string_view text) : s_(text) {}

  Poly2 run() {
    Poly2 p = expr();
    skip_ws();
    if (pos_ != s_.size()) fail(std::string("unexpected '") + s_[pos_] + "'");
    return p;
  }

private:
  [[noreturn]] void fail(const std::string &msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    if (pos_ >= s_.size()) return '\0';
    if (s_[pos_] == '/') fail("division is not supported");
    return s_[pos_];
  }

  Poly2 expr() {
    Poly2 acc = term();
    for (;;) {
      const char c = peek();
      if (c == '+') {
        ++pos_;
        acc += term();
      } else if (c == '-') {
        ++pos_;
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  Poly2 term() {
    Poly2 acc = factor();
    while (peek() == '*') {
      ++pos_;
      acc = acc * factor();
    }
    return acc;
  }

  Poly2 factor() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      return -factor();
    }
    if (c == '+') {
      ++pos_;
      return factor();
    }
    return power();
  }

  Poly2 power() {
    Poly2 base = primary();
    if (peek() != '^') return base;
    ++pos_;
    const int n = exponent();
    if (peek() == '^') fail("chained exponents are ambiguous; use parentheses");
    return base.pow(n);
  }

  int exponent() {
    const char c = peek();
    if (c == '-') fail("negative exponent");
    if (!std::isdigit(static_cast<unsigned char>(c))) fail("exponent must be a non-negative integer literal");
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E')) {
      pos_ = start;
      fail("non-integer exponent");
    }
    int n = 0;
    std::from_chars(s_.data() + start, s_.data() + pos_, n);
    if (n > kMaxExponent) {
      pos_ = start;
      fail("exponent too large");
    }
    return n;
  }

  Poly2 primary() {
    const char c = peek();
    if (c == 'x') {
      ++pos_;
      return Poly2::x();
    }
    if (c == 'y') {
      ++pos_;
      return Poly2::y();
    }
    if (c == '(') {
      ++pos_;
      Poly2 inner = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return Poly2::constant(number());
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected '") + c + "'");
  }

  double number() {
    const std::size_t start = pos_;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("malformed number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    if (pos_ == start) fail("malformed number");
    return v;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace detail

/// Parse a polynomial expression in x and y into canonical expanded form.
inline Poly2 parse(std::string_view text) { return detail::PolyParser(text).run(); }

/// Canonical text form: terms by descending total degree, then descending x power.
/// parse(to_string(p)) == p.
inline std::string to_string(const Poly2 &p) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<Poly2::Exponents, double>> terms(p.terms().begin(), p.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto &l, const auto &r) {
    const int dl = l.first.first + l.first.second, dr = r.first.first + r.first.second;
    if (dl != dr) return dl > dr;
    return l.first.first > r.first.first;
  });
  std::string out;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto [e, c] = terms[k];
    const double mag = std::abs(c);
    if (k == 0) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    std::string mono;
    auto factor = [&mono](char var, int n) {
      if (n == 0) return;
      if (!mono.empty()) mono += "*";
      mono += var;
      if (n > 1) mono += "^" + std::to_string(n);
    };
    factor('x', e.first);
    factor('y', e.second);
    if (mono.empty()) {
      out += detail::format_double(mag);
    } else if (mag == 1.0) {
      out += mono;
    } else {
      out += detail::format_double(mag) + "*" + mono;
    }
  }
  return out;
}

} // namespace ssg

#endif // SSG_PARSER_HPP
