#include "epsens/double_double.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace epsens::wide {

namespace {

DD quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

}  // namespace

DD two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DD two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

DD operator+(DD a, DD b) {
    DD s = two_sum(a.hi, b.hi);
    const DD t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

DD operator-(DD a) { return {-a.hi, -a.lo}; }

DD operator-(DD a, DD b) { return a + (-b); }

DD operator*(DD a, DD b) {
    DD p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

DD operator/(DD a, DD b) {
    const double q1 = a.hi / b.hi;
    DD r = a - DD(q1) * b;
    const double q2 = r.hi / b.hi;
    r = r - DD(q2) * b;
    const double q3 = r.hi / b.hi;
    return quick_two_sum(q1, q2) + DD(q3);
}

bool operator<(DD a, DD b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
bool operator>(DD a, DD b) { return b < a; }
bool operator<=(DD a, DD b) { return !(b < a); }
bool operator>=(DD a, DD b) { return !(a < b); }
bool operator==(DD a, DD b) { return a.hi == b.hi && a.lo == b.lo; }
bool operator!=(DD a, DD b) { return !(a == b); }

DD sqrt(DD a) {
    if (a.hi <= 0.0) return DD();
    const DD x(std::sqrt(a.hi));
    return x + (a - x * x) / (DD(2.0) * x);
}

DD abs(DD a) { return a.hi < 0.0 ? -a : a; }

std::string to_string(DD a, int digits) {
    // hi and lo printed separately would not round correctly; scale the
    // value into [1, 10) and peel off one digit at a time instead.
    if (a.hi == 0.0) return "0";
    if (!std::isfinite(a.hi)) return std::to_string(a.hi);
    std::string out;
    if (a.hi < 0.0) {
        out += '-';
        a = -a;
    }
    int exp10 = static_cast<int>(std::floor(std::log10(a.hi)));
    DD scaled = a;
    const DD ten(10.0);
    if (exp10 > 0)
        for (int i = 0; i < exp10; ++i) scaled = scaled / ten;
    else
        for (int i = 0; i < -exp10; ++i) scaled = scaled * ten;
    while (scaled.hi >= 10.0) {
        scaled = scaled / ten;
        ++exp10;
    }
    while (scaled.hi < 1.0) {
        scaled = scaled * ten;
        --exp10;
    }
    std::string mant;
    for (int i = 0; i < digits; ++i) {
        int d = static_cast<int>(std::floor(scaled.hi));
        if (d < 0) d = 0;
        if (d > 9) d = 9;
        mant += static_cast<char>('0' + d);
        scaled = (scaled - DD(static_cast<double>(d))) * ten;
        if (scaled.hi < 0.0) scaled = DD();
        if (i == 0) mant += '.';
    }
    char buf[16];
    std::snprintf(buf, sizeof buf, "e%+03d", exp10);
    return out + mant + buf;
}

WideScalar operator+(const WideScalar& a, const WideScalar& b) { return {a.re + b.re, a.im + b.im}; }
WideScalar operator-(const WideScalar& a, const WideScalar& b) { return {a.re - b.re, a.im - b.im}; }
WideScalar operator-(const WideScalar& a) { return {-a.re, -a.im}; }

WideScalar operator*(const WideScalar& a, const WideScalar& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

WideScalar operator/(const WideScalar& a, const WideScalar& b) {
    // scale by the larger component of b to keep the denominator O(1)
    const DD s = abs(b.re) > abs(b.im) ? abs(b.re) : abs(b.im);
    const DD br = b.re / s;
    const DD bi = b.im / s;
    const DD den = br * br + bi * bi;
    return {(a.re * br + a.im * bi) / den / s, (a.im * br - a.re * bi) / den / s};
}

bool operator==(const WideScalar& a, const WideScalar& b) { return a.re == b.re && a.im == b.im; }

WideScalar conj(const WideScalar& a) { return {a.re, -a.im}; }

DD norm(const WideScalar& a) { return a.re * a.re + a.im * a.im; }

DD abs(const WideScalar& a) {
    const DD x = abs(a.re);
    const DD y = abs(a.im);
    const DD big = x > y ? x : y;
    if (big.hi == 0.0) return DD();
    const DD xs = x / big;
    const DD ys = y / big;
    return big * sqrt(xs * xs + ys * ys);
}

WideScalar sqrt(const WideScalar& a) {
    // principal branch
    const DD r = abs(a);
    if (r.hi == 0.0) return {};
    const DD half(0.5);
    DD re = sqrt((r + a.re) * half);
    DD im = sqrt((r - a.re) * half);
    if (a.im.hi < 0.0) im = -im;
    return {re, im};
}

std::ostream& operator<<(std::ostream& os, const WideScalar& a) {
    return os << '(' << to_string(a.re) << ", " << to_string(a.im) << ')';
}

}  // namespace epsens::wide
