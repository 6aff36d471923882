#pragma once

// Truncated Taylor series in one variable; coefficient k is f^(k)/k!.

#include <array>
#include <cmath>

namespace gtau {

constexpr int kJetCapacity = 24;

double factorial(int k);

class Jet {
public:
    Jet() : n_(0) { c_.fill(0.0); }

    static Jet constant(double v, int order) {
        Jet j;
        j.n_ = order;
        j.c_[0] = v;
        return j;
    }
    static Jet variable(double x, int order) {
        Jet j = constant(x, order);
        if (order > 0) j.c_[1] = 1.0;
        return j;
    }

    int order() const { return n_; }
    void truncate(int order) {
        for (int k = order + 1; k <= n_; ++k) c_[k] = 0.0;
        if (order < n_) n_ = order;
    }

    double operator[](int k) const { return c_[k]; }
    double& operator[](int k) { return c_[k]; }
    double value() const { return c_[0]; }
    double derivative(int k) const { return c_[k] * factorial(k); }

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(double s);

private:
    int n_;
    std::array<double, kJetCapacity + 1> c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator-(Jet a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator*(double s, Jet a);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(double s, Jet a);

Jet exp(const Jet& t);
void sincos(const Jet& t, Jet& s, Jet& c);
Jet sin(const Jet& t);
Jet cos(const Jet& t);
Jet sinc(const Jet& t); // sin(t)/t
Jet erf(const Jet& t);
Jet ipow(const Jet& t, int n);

// d/dx shift: returns the Taylor jet of f^(k), order reduced by k
Jet differentiate(const Jet& f, int k);

} // namespace gtau
