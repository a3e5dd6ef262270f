#include "qfa/scalar_expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

namespace qfa {

namespace {

// Internal signal: an exact evaluation hit sqrt of a non-square rational.
struct NeedFloat {};

class ExprParser {
  public:
    ExprParser(std::string_view text, bool float_mode) : text_(text), float_mode_(float_mode) {}

    Scalar parse() {
        Scalar v = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input", pos_);
        return v;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;
    bool float_mode_;

    [[noreturn]] void fail(const std::string& what, std::size_t off) {
        throw ParseError("scalar expression: " + what + " at offset " + std::to_string(off), off);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool peek_is(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool eat(char c) {
        if (peek_is(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'", pos_);
    }

    Scalar expr() {
        Scalar v = term();
        for (;;) {
            if (eat('+'))
                v = v + term();
            else if (eat('-'))
                v = v - term();
            else
                return v;
        }
    }

    Scalar term() {
        Scalar v = unary();
        for (;;) {
            if (eat('*')) {
                v = v * unary();
            } else if (eat('/')) {
                std::size_t off = pos_ - 1;
                Scalar d = unary();
                if (d.is_zero()) fail("division by zero", off);
                v = v / d;
            } else {
                return v;
            }
        }
    }

    Scalar unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return primary();
    }

    Scalar primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Scalar v = expr();
            expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (is_word("i")) return float_mode_ ? Scalar::floating(0.0, 1.0) : Scalar::exact(0, 1);
        if (is_word("sqrt")) {
            std::size_t off = pos_ - 4;
            expect('(');
            Scalar arg = expr();
            expect(')');
            return eval_sqrt(arg, off);
        }
        fail("unexpected character", pos_);
    }

    // Consumes `word` if it appears here as a whole identifier.
    bool is_word(std::string_view word) {
        if (text_.substr(pos_, word.size()) != word) return false;
        std::size_t after = pos_ + word.size();
        if (after < text_.size()) {
            char c = text_[after];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return false;
        }
        pos_ = after;
        return true;
    }

    Scalar number() {
        std::size_t start = pos_;
        std::size_t int_digits = 0, frac_digits = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
            ++int_digits;
        }
        bool has_frac = false;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            has_frac = true;
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++frac_digits;
            }
        }
        if (int_digits == 0 || (has_frac && frac_digits == 0)) fail("malformed number", start);
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            std::size_t dstart = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
            if (pos_ == dstart) pos_ = mark;  // 'e' was not an exponent after all
        }
        std::string_view lit = text_.substr(start, pos_ - start);
        if (float_mode_) {
            double d = 0.0;
            auto res = std::from_chars(lit.data(), lit.data() + lit.size(), d);
            if (res.ec != std::errc{} || res.ptr != lit.data() + lit.size())
                fail("malformed number", start);
            return Scalar::floating(d);
        }
        return Scalar::exact(decimal_to_rational(lit, start));
    }

    Rational decimal_to_rational(std::string_view lit, std::size_t start) {
        std::string digits;
        long frac_len = 0, exponent = 0;
        std::size_t i = 0;
        for (; i < lit.size() && std::isdigit(static_cast<unsigned char>(lit[i])); ++i)
            digits += lit[i];
        if (i < lit.size() && lit[i] == '.') {
            for (++i; i < lit.size() && std::isdigit(static_cast<unsigned char>(lit[i])); ++i) {
                digits += lit[i];
                ++frac_len;
            }
        }
        if (i < lit.size() && (lit[i] == 'e' || lit[i] == 'E')) {
            ++i;
            bool neg = false;
            if (i < lit.size() && (lit[i] == '+' || lit[i] == '-')) neg = lit[i++] == '-';
            for (; i < lit.size(); ++i) {
                exponent = exponent * 10 + (lit[i] - '0');
                if (exponent > 100000) fail("exponent out of range", start);
            }
            if (neg) exponent = -exponent;
        }
        if (digits.empty()) fail("malformed number", start);
        mpz_class mantissa(digits, 10);
        long shift = exponent - frac_len;
        mpz_class pow10;
        mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(shift)));
        Rational q = shift >= 0 ? Rational(mantissa * pow10) : Rational(mantissa, pow10);
        q.canonicalize();
        return q;
    }

    Scalar eval_sqrt(const Scalar& arg, std::size_t off) {
        if (float_mode_) {
            FloatComplex v = arg.float_value();
            if (v.imag() != 0.0) fail("sqrt of a non-real value", off);
            if (v.real() < 0.0) fail("sqrt of a negative value", off);
            return Scalar::floating(std::sqrt(v.real()));
        }
        const ExactComplex& v = arg.exact_value();
        if (!v.is_real()) fail("sqrt of a non-real value", off);
        if (sgn(v.re) < 0) fail("sqrt of a negative value", off);
        mpz_class num = v.re.get_num(), den = v.re.get_den();
        if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
            throw NeedFloat{};
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
        Rational r(rn, rd);
        r.canonicalize();
        return Scalar::exact(r);
    }
};

}  // namespace

Scalar parse_scalar(std::string_view text) {
    try {
        return ExprParser(text, /*float_mode=*/false).parse();
    } catch (const NeedFloat&) {
        return ExprParser(text, /*float_mode=*/true).parse();
    }
}

Scalar parse_scalar_as(std::string_view text, Backend b) {
    if (b == Backend::floating) return ExprParser(text, /*float_mode=*/true).parse();
    try {
        return ExprParser(text, /*float_mode=*/false).parse();
    } catch (const NeedFloat&) {
        throw Error("expression '" + std::string(text) +
                    "' is irrational and cannot use the exact backend");
    }
}

}  // namespace qfa
