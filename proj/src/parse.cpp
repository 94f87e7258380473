#include <cctype>

#include "grasslab/expr.hpp"

namespace grasslab {

namespace {

class Parser {
 public:
  Parser(const std::string& s, const VarTable& vt) : s_(s), vt_(vt) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (i_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[i_] + "'", i_);
    return e;
  }

 private:
  const std::string& s_;
  const VarTable& vt_;
  std::size_t i_ = 0;

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool peek(char c) {
    skip();
    return i_ < s_.size() && s_[i_] == c;
  }

  Expr expr() {
    skip();
    Expr e;
    // leading sign belongs to the first term
    if (peek('-') || peek('+')) {
      bool neg = s_[i_] == '-';
      ++i_;
      e = term();
      if (neg) e = -e;
    } else {
      e = term();
    }
    while (peek('+') || peek('-')) {
      bool neg = s_[i_] == '-';
      ++i_;
      Expr t = term();
      e = neg ? e - t : e + t;
    }
    return e;
  }

  Expr term() {
    Expr e = factor();
    while (peek('*') || peek('/')) {
      bool div = s_[i_] == '/';
      std::size_t at = i_;
      ++i_;
      Expr f = factor();
      if (div) {
        if (f.is_zero()) throw ParseError("division by the zero polynomial", at);
        e = e / f;
      } else {
        e = e * f;
      }
    }
    return e;
  }

  Expr factor() {
    Expr b = base();
    if (peek('^')) {
      ++i_;
      skip();
      std::size_t at = i_;
      bool neg = false;
      if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) {
        neg = s_[i_] == '-';
        ++i_;
      }
      std::size_t st = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (st == i_) throw ParseError("expected integer exponent", at);
      int n = std::stoi(s_.substr(st, i_ - st));
      if (neg) {
        if (b.is_zero()) throw ParseError("division by the zero polynomial", at);
        n = -n;
      }
      b = b.pow(n);
    }
    return b;
  }

  Expr base() {
    skip();
    if (i_ >= s_.size()) throw ParseError("unexpected end of input", i_);
    char c = s_[i_];
    if (c == '(') {
      ++i_;
      Expr e = expr();
      if (!peek(')')) throw ParseError("expected ')'", i_);
      ++i_;
      return e;
    }
    if ((c == '-' || c == '+') && i_ + 1 < s_.size() &&
        std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
      ++i_;
      Expr r = base();
      return c == '-' ? -r : r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t st = i_;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      Rat r(mpz_class(s_.substr(st, i_ - st)));
      // a '/' directly followed by digits is a rational literal
      if (i_ + 1 < s_.size() && s_[i_] == '/' && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
        std::size_t at = i_;
        ++i_;
        std::size_t st2 = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        mpz_class d(s_.substr(st2, i_ - st2));
        if (d == 0) throw ParseError("division by the zero polynomial", at);
        r /= Rat(d);
      }
      return Expr(r);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t st = i_;
      while (i_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
        ++i_;
      std::string name = s_.substr(st, i_ - st);
      auto id = vt_.lookup(name);
      if (!id) throw ParseError("unknown identifier '" + name + "'", st);
      return Expr::var(*id);
    }
    throw ParseError(std::string("unexpected '") + c + "'", i_);
  }
};

}  // namespace

Expr parse(const std::string& text, const VarTable& vars) { return Parser(text, vars).run(); }

}  // namespace grasslab
