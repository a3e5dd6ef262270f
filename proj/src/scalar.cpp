#include "qfa/scalar.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>

namespace qfa {

const char* to_string(Backend b) {
    return b == Backend::exact ? "exact" : "float";
}

Rational make_rational(long num, long den) {
    if (den == 0) throw Error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

double rational_to_double(const Rational& q) {
    if (sgn(q) == 0) return 0.0;
    double d0 = q.get_d();  // truncated toward zero
    if (!std::isfinite(d0)) return d0;
    double d1 = std::nextafter(d0, sgn(q) < 0 ? -std::numeric_limits<double>::infinity()
                                              : std::numeric_limits<double>::infinity());
    if (!std::isfinite(d1)) return d0;
    Rational e0 = abs(q - Rational(d0));
    Rational e1 = abs(q - Rational(d1));
    if (e0 < e1) return d0;
    if (e1 < e0) return d1;
    // exact halfway: round to the candidate with an even mantissa
    std::uint64_t bits;
    std::memcpy(&bits, &d0, sizeof bits);
    return (bits & 1u) == 0 ? d0 : d1;
}

std::string double_to_string(double d) {
    if (d == 0.0) return "0";  // also scrubs -0.0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), d);
    return std::string(buf, res.ptr);
}

ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) {
    Rational den = b.norm_sq();
    if (sgn(den) == 0) throw Error("division by zero");
    // a / b = a * conj(b) / |b|^2
    ExactComplex num = a * b.conj();
    return {num.re / den, num.im / den};
}

const ExactComplex& Scalar::exact_value() const {
    if (const auto* p = std::get_if<ExactComplex>(&v_)) return *p;
    throw BackendError("expected an exact scalar, got float");
}

FloatComplex Scalar::float_value() const {
    if (const auto* p = std::get_if<FloatComplex>(&v_)) return *p;
    throw BackendError("expected a float scalar, got exact");
}

Scalar Scalar::to_float() const {
    if (const auto* p = std::get_if<ExactComplex>(&v_)) return Scalar(p->to_float());
    return *this;
}

FloatComplex Scalar::as_float_complex() const {
    if (const auto* p = std::get_if<ExactComplex>(&v_)) return p->to_float();
    return std::get<FloatComplex>(v_);
}

bool Scalar::is_zero() const {
    if (const auto* p = std::get_if<ExactComplex>(&v_)) return p->is_zero();
    return std::get<FloatComplex>(v_) == FloatComplex{0.0, 0.0};
}

bool Scalar::is_real() const {
    if (const auto* p = std::get_if<ExactComplex>(&v_)) return p->is_real();
    return std::get<FloatComplex>(v_).imag() == 0.0;
}

double Scalar::abs() const {
    if (const auto* p = std::get_if<ExactComplex>(&v_)) return p->abs();
    return std::abs(std::get<FloatComplex>(v_));
}

double Scalar::real_double() const {
    if (const auto* p = std::get_if<ExactComplex>(&v_)) return rational_to_double(p->re);
    return std::get<FloatComplex>(v_).real();
}

double Scalar::imag_double() const {
    if (const auto* p = std::get_if<ExactComplex>(&v_)) return rational_to_double(p->im);
    return std::get<FloatComplex>(v_).imag();
}

Scalar Scalar::conj() const {
    if (const auto* p = std::get_if<ExactComplex>(&v_)) return Scalar(p->conj());
    return Scalar(std::conj(std::get<FloatComplex>(v_)));
}

void Scalar::require_same(const Scalar& a, const Scalar& b, const char* op) {
    if (a.backend() != b.backend())
        throw BackendError(std::string("backend mismatch in scalar ") + op + ": " +
                           to_string(a.backend()) + " vs " + to_string(b.backend()));
}

Scalar operator+(const Scalar& a, const Scalar& b) {
    Scalar::require_same(a, b, "addition");
    if (a.is_exact()) return Scalar(a.exact_value() + b.exact_value());
    return Scalar(a.float_value() + b.float_value());
}

Scalar operator-(const Scalar& a, const Scalar& b) {
    Scalar::require_same(a, b, "subtraction");
    if (a.is_exact()) return Scalar(a.exact_value() - b.exact_value());
    return Scalar(a.float_value() - b.float_value());
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    Scalar::require_same(a, b, "multiplication");
    if (a.is_exact()) return Scalar(a.exact_value() * b.exact_value());
    return Scalar(a.float_value() * b.float_value());
}

Scalar operator/(const Scalar& a, const Scalar& b) {
    Scalar::require_same(a, b, "division");
    if (a.is_exact()) return Scalar(a.exact_value() / b.exact_value());
    FloatComplex d = b.float_value();
    if (d == FloatComplex{0.0, 0.0}) throw Error("division by zero");
    return Scalar(a.float_value() / d);
}

Scalar operator-(const Scalar& a) {
    if (a.is_exact()) return Scalar(-a.exact_value());
    return Scalar(-a.float_value());
}

bool operator==(const Scalar& a, const Scalar& b) {
    Scalar::require_same(a, b, "comparison");
    if (a.is_exact()) return a.exact_value() == b.exact_value();
    return a.float_value() == b.float_value();
}

namespace {

// "3/4+1/2*i" form shared by both backends; the parts arrive pre-formatted.
std::string join_complex(const std::string& re, const std::string& im,
                         bool re_zero, bool im_zero, bool im_negative) {
    if (re_zero && im_zero) return "0";
    std::string imag;
    if (!im_zero) {
        std::string mag = im_negative ? im.substr(1) : im;
        imag = (im_negative ? "-" : re_zero ? "" : "+");
        imag += (mag == "1") ? "i" : mag + "*i";
    }
    if (re_zero) return imag;
    if (im_zero) return re;
    return re + imag;
}

}  // namespace

std::string Scalar::str() const {
    if (const auto* p = std::get_if<ExactComplex>(&v_)) {
        return join_complex(p->re.get_str(), p->im.get_str(), sgn(p->re) == 0,
                            sgn(p->im) == 0, sgn(p->im) < 0);
    }
    const FloatComplex& c = std::get<FloatComplex>(v_);
    return join_complex(double_to_string(c.real()), double_to_string(c.imag()),
                        c.real() == 0.0, c.imag() == 0.0, std::signbit(c.imag()) && c.imag() != 0.0);
}

}  // namespace qfa
