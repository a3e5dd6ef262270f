#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <variant>

#include "qfa/errors.hpp"

namespace qfa {

// Two scalar backends. Exact holds Gaussian rationals (arbitrary-precision
// integer fractions for the real and imaginary parts); Float holds a pair of
// binary64 components. Arithmetic never crosses backends; mixing is an error.
enum class Backend { exact, floating };

const char* to_string(Backend b);

using Rational = mpq_class;
using FloatComplex = std::complex<double>;

// mpq_class(n, d) does not canonicalize on its own; this does.
Rational make_rational(long num, long den = 1);

// Nearest-even conversion. mpq_get_d truncates toward zero, which breaks
// round-trips through decimal text, so we correct to the closer neighbour.
double rational_to_double(const Rational& q);

// Shortest decimal form that parses back to the same double ("0.5", "1e-09").
std::string double_to_string(double d);

struct ExactComplex {
    Rational re, im;

    ExactComplex() : re(0), im(0) {}
    ExactComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static ExactComplex from_int(long v) { return {Rational(v), Rational(0)}; }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }
    ExactComplex conj() const { return {re, -im}; }
    Rational norm_sq() const { return re * re + im * im; }
    FloatComplex to_float() const { return {rational_to_double(re), rational_to_double(im)}; }
    double abs() const { return std::abs(to_float()); }

    friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend ExactComplex operator-(const ExactComplex& a) { return {-a.re, -a.im}; }
    friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b);
    friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
};

// A single complex number tagged with its backend. Every arithmetic operator
// throws BackendError when the operands disagree; conversions are explicit.
class Scalar {
  public:
    Scalar() : v_(ExactComplex{}) {}
    explicit Scalar(ExactComplex v) : v_(std::move(v)) {}
    explicit Scalar(FloatComplex v) : v_(v) {}

    static Scalar exact(Rational re, Rational im = Rational(0)) {
        return Scalar(ExactComplex{std::move(re), std::move(im)});
    }
    static Scalar exact_int(long v) { return Scalar(ExactComplex::from_int(v)); }
    static Scalar floating(double re, double im = 0.0) { return Scalar(FloatComplex{re, im}); }
    static Scalar zero(Backend b) {
        return b == Backend::exact ? Scalar() : Scalar(FloatComplex{0.0, 0.0});
    }
    static Scalar one(Backend b) {
        return b == Backend::exact ? exact_int(1) : floating(1.0);
    }

    Backend backend() const {
        return std::holds_alternative<ExactComplex>(v_) ? Backend::exact : Backend::floating;
    }
    bool is_exact() const { return backend() == Backend::exact; }

    const ExactComplex& exact_value() const;
    FloatComplex float_value() const;

    // Explicit backend demotion (nearest-even per component).
    Scalar to_float() const;
    FloatComplex as_float_complex() const;  // converts if exact

    bool is_zero() const;
    bool is_real() const;  // imaginary part exactly zero
    double abs() const;
    double real_double() const;
    double imag_double() const;

    Scalar conj() const;

    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a);
    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    // Canonical text form, reparseable by parse_scalar. Exact values print as
    // normalized fractions ("3/4+1/2*i"); float values as shortest
    // round-tripping decimals.
    std::string str() const;

  private:
    std::variant<ExactComplex, FloatComplex> v_;

    static void require_same(const Scalar& a, const Scalar& b, const char* op);
};

}  // namespace qfa
