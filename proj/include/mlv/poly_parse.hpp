#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "poly.hpp"

namespace mlv {

// Grammar (whitespace ignored):
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary | unary)*      juxtaposition multiplies: "2x", "3(x+1)"
//   unary  := ('+'|'-') unary | power
//   power  := atom ('^' digits)?
//   atom   := digits | 'x' | '(' expr ')'
// Division is only by nonzero constants.
class PolyParser {
public:
    explicit PolyParser(std::string_view s) : s_(s) {}

    RationalPoly parse() {
        RationalPoly r = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("polynomial '" + std::string(s_) + "' at " + std::to_string(pos_) + ": " + what);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool starts_atom() {
        char c = peek();
        return std::isdigit(static_cast<unsigned char>(c)) || c == 'x' || c == '(';
    }

    RationalPoly expr() {
        RationalPoly r = term();
        for (;;) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                r += term();
            } else if (c == '-') {
                ++pos_;
                r -= term();
            } else {
                return r;
            }
        }
    }

    RationalPoly term() {
        RationalPoly r = unary();
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++pos_;
                r *= unary();
            } else if (c == '/') {
                ++pos_;
                RationalPoly d = unary();
                if (d.degree() != 0) fail("division by a non-constant or zero");
                r = Rational(1 / d.leading()) * r;
            } else if (starts_atom()) {
                r *= power();
            } else {
                return r;
            }
        }
    }

    RationalPoly unary() {
        char c = peek();
        if (c == '-') {
            ++pos_;
            return -unary();
        }
        if (c == '+') {
            ++pos_;
            return unary();
        }
        return power();
    }

    RationalPoly power() {
        RationalPoly a = atom();
        if (peek() == '^') {
            ++pos_;
            skip();
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (st == pos_) fail("expected exponent");
            if (pos_ - st > 4) fail("exponent too large");
            a = a.pow(static_cast<unsigned>(std::stoul(std::string(s_.substr(st, pos_ - st)))));
        }
        return a;
    }

    RationalPoly atom() {
        char c = peek();
        if (c == 'x') {
            ++pos_;
            return RationalPoly::x();
        }
        if (c == '(') {
            ++pos_;
            RationalPoly r = expr();
            if (peek() != ')') fail("expected ')'");
            ++pos_;
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return RationalPoly(Rational(Integer(std::string(s_.substr(st, pos_ - st)))));
        }
        if (c == '\0') fail("unexpected end of input");
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

inline RationalPoly parse_poly(std::string_view s) { return PolyParser(s).parse(); }

} // namespace mlv
