#include "gtau/jet.hpp"

#include <algorithm>

namespace gtau {

namespace {

struct FactorialTable {
    std::array<double, 2 * kJetCapacity + 2> v{};
    FactorialTable() {
        v[0] = 1.0;
        for (std::size_t k = 1; k < v.size(); ++k) v[k] = v[k - 1] * double(k);
    }
};

const FactorialTable& table() {
    static const FactorialTable t;
    return t;
}

} // namespace

double factorial(int k) { return table().v[static_cast<std::size_t>(k)]; }

Jet& Jet::operator+=(const Jet& o) {
    n_ = std::min(n_, o.n_);
    for (int k = 0; k <= n_; ++k) c_[k] += o.c_[k];
    for (int k = n_ + 1; k <= kJetCapacity; ++k) c_[k] = 0.0;
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    n_ = std::min(n_, o.n_);
    for (int k = 0; k <= n_; ++k) c_[k] -= o.c_[k];
    for (int k = n_ + 1; k <= kJetCapacity; ++k) c_[k] = 0.0;
    return *this;
}

Jet& Jet::operator*=(double s) {
    for (int k = 0; k <= n_; ++k) c_[k] *= s;
    return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator-(Jet a) { return a *= -1.0; }
Jet operator*(double s, Jet a) { return a *= s; }

Jet operator+(double s, Jet a) {
    a[0] += s;
    return a;
}

Jet operator*(const Jet& a, const Jet& b) {
    int n = std::min(a.order(), b.order());
    Jet r = Jet::constant(0.0, n);
    for (int k = 0; k <= n; ++k) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j) s += a[j] * b[k - j];
        r[k] = s;
    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    int n = std::min(a.order(), b.order());
    Jet q = Jet::constant(0.0, n);
    double b0 = b[0];
    for (int k = 0; k <= n; ++k) {
        double s = a[k];
        for (int j = 1; j <= k; ++j) s -= b[j] * q[k - j];
        q[k] = s / b0;
    }
    return q;
}

Jet exp(const Jet& t) {
    int n = t.order();
    Jet e = Jet::constant(std::exp(t[0]), n);
    for (int k = 1; k <= n; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * t[j] * e[k - j];
        e[k] = s / k;
    }
    return e;
}

void sincos(const Jet& t, Jet& s, Jet& c) {
    int n = t.order();
    s = Jet::constant(std::sin(t[0]), n);
    c = Jet::constant(std::cos(t[0]), n);
    for (int k = 1; k <= n; ++k) {
        double ss = 0.0, cc = 0.0;
        for (int j = 1; j <= k; ++j) {
            ss += j * t[j] * c[k - j];
            cc -= j * t[j] * s[k - j];
        }
        s[k] = ss / k;
        c[k] = cc / k;
    }
}

Jet sin(const Jet& t) {
    Jet s, c;
    sincos(t, s, c);
    return s;
}

Jet cos(const Jet& t) {
    Jet s, c;
    sincos(t, s, c);
    return c;
}

Jet sinc(const Jet& t) {
    if (std::abs(t[0]) > 0.5) {
        Jet s, c;
        sincos(t, s, c);
        return s / t;
    }
    // series in t^2, 14 terms is far below rounding for |t| <= 0.5 + jet spread
    Jet t2 = t * t;
    Jet r = Jet::constant(0.0, t.order());
    for (int m = 13; m >= 0; --m) {
        double coef = ((m % 2) ? -1.0 : 1.0) / factorial(2 * m + 1);
        r = t2 * r;
        r[0] += coef;
    }
    return r;
}

Jet erf(const Jet& t) {
    int n = t.order();
    Jet g = exp(-(t * t));
    g *= 2.0 / std::sqrt(M_PI);
    Jet e = Jet::constant(std::erf(t[0]), n);
    for (int k = 1; k <= n; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * t[j] * g[k - j];
        e[k] = s / k;
    }
    return e;
}

Jet ipow(const Jet& t, int n) {
    Jet r = Jet::constant(1.0, t.order());
    Jet b = t;
    while (n > 0) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

Jet differentiate(const Jet& f, int k) {
    int n = std::max(0, f.order() - k);
    Jet r = Jet::constant(0.0, n);
    if (f.order() < k) return r;
    for (int j = 0; j <= n; ++j) r[j] = f[j + k] * factorial(j + k) / factorial(j);
    return r;
}

} // namespace gtau
