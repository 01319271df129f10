#pragma once

#include <cmath>

namespace chebsolve {

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2, giving roughly 32
/// significant decimal digits. Used as reference arithmetic for Newton
/// polishing and for checking double-precision recurrences; all primitives
/// are the classic Dekker/Bailey error-free transformations built on fma.
struct Dd {
    double hi = 0.0;
    double lo = 0.0;

    Dd() = default;
    Dd(double h) : hi(h) {}
    Dd(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

inline Dd quick_two_sum(double a, double b) {  // requires |a| >= |b| or a == 0
    double s = a + b;
    return {s, b - (s - a)};
}

inline Dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline Dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline Dd operator+(Dd a, Dd b) {
    Dd s = two_sum(a.hi, b.hi);
    return quick_two_sum(s.hi, s.lo + a.lo + b.lo);
}

inline Dd operator-(Dd a) { return {-a.hi, -a.lo}; }
inline Dd operator-(Dd a, Dd b) { return a + (-b); }

inline Dd operator*(Dd a, Dd b) {
    Dd p = two_prod(a.hi, b.hi);
    return quick_two_sum(p.hi, p.lo + a.hi * b.lo + a.lo * b.hi);
}

inline Dd operator/(Dd a, Dd b) {
    double q1 = a.hi / b.hi;
    Dd r = a - b * Dd(q1);
    double q2 = (r.hi + r.lo) / b.hi;
    r = r - b * Dd(q2);
    double q3 = (r.hi + r.lo) / b.hi;
    return quick_two_sum(q1, q2) + Dd(q3);
}

inline Dd& operator+=(Dd& a, Dd b) { return a = a + b; }
inline Dd& operator-=(Dd& a, Dd b) { return a = a - b; }
inline Dd& operator*=(Dd& a, Dd b) { return a = a * b; }
inline Dd& operator/=(Dd& a, Dd b) { return a = a / b; }

inline bool operator<(Dd a, Dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(Dd a, Dd b) { return b < a; }
inline bool operator==(Dd a, Dd b) { return a.hi == b.hi && a.lo == b.lo; }

inline Dd abs(Dd a) { return a.hi < 0 || (a.hi == 0 && a.lo < 0) ? -a : a; }

inline Dd sqrt(Dd a) {
    if (a.hi == 0) return {0.0, 0.0};
    double y = std::sqrt(a.hi);
    // one Newton step in the residual form doubles the working precision
    Dd r = a - two_prod(y, y);
    return quick_two_sum(y, (r.hi + r.lo) / (2 * y));
}

}  // namespace chebsolve
