#pragma once

// Double-double arithmetic: an unevaluated sum hi + lo of two doubles with
// |lo| <= ulp(hi)/2, giving about 31 significant decimal digits. Built from
// the error-free transformations two_sum and two_prod (via fma).

#include <complex>
#include <iosfwd>
#include <string>

namespace epsens::wide {

struct DD {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DD() = default;
    constexpr DD(double x) : hi(x), lo(0.0) {}  // NOLINT: implicit widening is intended
    constexpr DD(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

DD two_sum(double a, double b);
DD two_prod(double a, double b);

DD operator+(DD a, DD b);
DD operator-(DD a, DD b);
DD operator-(DD a);
DD operator*(DD a, DD b);
DD operator/(DD a, DD b);
inline DD& operator+=(DD& a, DD b) { return a = a + b; }
inline DD& operator-=(DD& a, DD b) { return a = a - b; }
inline DD& operator*=(DD& a, DD b) { return a = a * b; }
inline DD& operator/=(DD& a, DD b) { return a = a / b; }

bool operator<(DD a, DD b);
bool operator>(DD a, DD b);
bool operator<=(DD a, DD b);
bool operator>=(DD a, DD b);
bool operator==(DD a, DD b);
bool operator!=(DD a, DD b);

DD sqrt(DD a);
DD abs(DD a);

/// Decimal rendering with `digits` significant digits.
std::string to_string(DD a, int digits = 32);

/// 2^-104, the unit roundoff of the format.
inline constexpr double kEpsilon = 4.93038065763132e-32;

/// Complex number with double-double parts.
struct WideScalar {
    DD re;
    DD im;

    WideScalar() = default;
    WideScalar(DD r, DD i = DD()) : re(r), im(i) {}  // NOLINT
    WideScalar(double r) : re(r) {}                   // NOLINT
    WideScalar(std::complex<double> z) : re(z.real()), im(z.imag()) {}  // NOLINT

    std::complex<double> to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

WideScalar operator+(const WideScalar& a, const WideScalar& b);
WideScalar operator-(const WideScalar& a, const WideScalar& b);
WideScalar operator-(const WideScalar& a);
WideScalar operator*(const WideScalar& a, const WideScalar& b);
WideScalar operator/(const WideScalar& a, const WideScalar& b);
inline WideScalar& operator+=(WideScalar& a, const WideScalar& b) { return a = a + b; }
inline WideScalar& operator-=(WideScalar& a, const WideScalar& b) { return a = a - b; }
inline WideScalar& operator*=(WideScalar& a, const WideScalar& b) { return a = a * b; }
inline WideScalar& operator/=(WideScalar& a, const WideScalar& b) { return a = a / b; }
bool operator==(const WideScalar& a, const WideScalar& b);

WideScalar conj(const WideScalar& a);
DD norm(const WideScalar& a);  // |a|^2
DD abs(const WideScalar& a);
WideScalar sqrt(const WideScalar& a);

std::ostream& operator<<(std::ostream& os, const WideScalar& a);

}  // namespace epsens::wide
