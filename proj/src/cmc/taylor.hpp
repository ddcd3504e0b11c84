#pragma once

// Truncated univariate Taylor arithmetic. Coefficients are normalized:
// c[k] = f^(k)(x0) / k!.

#include <array>
#include <cmath>

namespace cmc {

template <class T, int N>
struct Taylor {
  std::array<T, N + 1> c{};

  Taylor() = default;
  Taylor(T v) { c[0] = v; }  // NOLINT: implicit from scalars is intended

  static Taylor variable(T x0) {
    Taylor r(x0);
    if constexpr (N >= 1) r.c[1] = 1;
    return r;
  }

  T value() const { return c[0]; }
  // k-th derivative
  T d(int k) const {
    T f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return c[k] * f;
  }

  Taylor operator-() const {
    Taylor r;
    for (int i = 0; i <= N; ++i) r.c[i] = -c[i];
    return r;
  }
  Taylor& operator+=(const Taylor& o) {
    for (int i = 0; i <= N; ++i) c[i] += o.c[i];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (int i = 0; i <= N; ++i) c[i] -= o.c[i];
    return *this;
  }
  Taylor& operator*=(const Taylor& o) { return *this = *this * o; }
  Taylor& operator/=(const Taylor& o) { return *this = *this / o; }

  friend Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
  friend Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
  friend Taylor operator*(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (int i = 0; i <= N; ++i) {
      T s = 0;
      for (int j = 0; j <= i; ++j) s += a.c[j] * b.c[i - j];
      r.c[i] = s;
    }
    return r;
  }
  friend Taylor operator/(const Taylor& a, const Taylor& b) {
    Taylor r;
    for (int i = 0; i <= N; ++i) {
      T s = a.c[i];
      for (int j = 1; j <= i; ++j) s -= b.c[j] * r.c[i - j];
      r.c[i] = s / b.c[0];
    }
    return r;
  }
  friend Taylor operator+(Taylor a, T b) { a.c[0] += b; return a; }
  friend Taylor operator+(T b, Taylor a) { a.c[0] += b; return a; }
  friend Taylor operator-(Taylor a, T b) { a.c[0] -= b; return a; }
  friend Taylor operator-(T b, const Taylor& a) { return Taylor(b) - a; }
  friend Taylor operator*(Taylor a, T b) {
    for (auto& x : a.c) x *= b;
    return a;
  }
  friend Taylor operator*(T b, Taylor a) { return a * b; }
  friend Taylor operator/(Taylor a, T b) {
    for (auto& x : a.c) x /= b;
    return a;
  }
  friend Taylor operator/(T b, const Taylor& a) { return Taylor(b) / a; }
};

template <class T, int N>
Taylor<T, N> exp(const Taylor<T, N>& a) {
  using std::exp;
  Taylor<T, N> r;
  r.c[0] = exp(a.c[0]);
  for (int i = 1; i <= N; ++i) {
    T s = 0;
    for (int j = 1; j <= i; ++j) s += j * a.c[j] * r.c[i - j];
    r.c[i] = s / i;
  }
  return r;
}

template <class T, int N>
Taylor<T, N> log(const Taylor<T, N>& a) {
  using std::log;
  Taylor<T, N> r;
  r.c[0] = log(a.c[0]);
  for (int i = 1; i <= N; ++i) {
    T s = i * a.c[i];
    for (int j = 1; j < i; ++j) s -= j * r.c[j] * a.c[i - j];
    r.c[i] = s / (i * a.c[0]);
  }
  return r;
}

template <class T, int N>
Taylor<T, N> sqrt(const Taylor<T, N>& a) {
  using std::sqrt;
  Taylor<T, N> r;
  r.c[0] = sqrt(a.c[0]);
  for (int i = 1; i <= N; ++i) {
    T s = a.c[i];
    for (int j = 1; j < i; ++j) s -= r.c[j] * r.c[i - j];
    r.c[i] = s / (2 * r.c[0]);
  }
  return r;
}

// sin and cos share one recurrence.
template <class T, int N>
void sincos(const Taylor<T, N>& a, Taylor<T, N>& s, Taylor<T, N>& co) {
  using std::cos;
  using std::sin;
  s.c[0] = sin(a.c[0]);
  co.c[0] = cos(a.c[0]);
  for (int i = 1; i <= N; ++i) {
    T ss = 0, cc = 0;
    for (int j = 1; j <= i; ++j) {
      ss += j * a.c[j] * co.c[i - j];
      cc -= j * a.c[j] * s.c[i - j];
    }
    s.c[i] = ss / i;
    co.c[i] = cc / i;
  }
}

template <class T, int N>
Taylor<T, N> sin(const Taylor<T, N>& a) {
  Taylor<T, N> s, c;
  sincos(a, s, c);
  return s;
}

template <class T, int N>
Taylor<T, N> cos(const Taylor<T, N>& a) {
  Taylor<T, N> s, c;
  sincos(a, s, c);
  return c;
}

template <class T, int N>
Taylor<T, N> pow(const Taylor<T, N>& a, T p) {
  using std::pow;
  Taylor<T, N> r;
  r.c[0] = pow(a.c[0], p);
  for (int i = 1; i <= N; ++i) {
    T s = 0;
    for (int j = 1; j <= i; ++j) s += (p * j - (i - j)) * a.c[j] * r.c[i - j];
    r.c[i] = s / (i * a.c[0]);
  }
  return r;
}

template <class T, int N>
Taylor<T, N> cosh(const Taylor<T, N>& a) {
  auto e = exp(a);
  return (e + T(1) / e) * T(0.5);
}

template <class T, int N>
Taylor<T, N> sinh(const Taylor<T, N>& a) {
  auto e = exp(a);
  return (e - T(1) / e) * T(0.5);
}

// Series of f' (top coefficient is dropped).
template <class T, int N>
Taylor<T, N> derivative(const Taylor<T, N>& a) {
  Taylor<T, N> r;
  for (int i = 0; i < N; ++i) r.c[i] = (i + 1) * a.c[i + 1];
  return r;
}

// Antiderivative with constant term c0; the inverse of derivative().
template <class T, int N>
Taylor<T, N> integrate(const Taylor<T, N>& a, T c0) {
  Taylor<T, N> r(c0);
  for (int i = 1; i <= N; ++i) r.c[i] = a.c[i - 1] / i;
  return r;
}

template <class T, int N>
Taylor<T, N> atan2(const Taylor<T, N>& y, const Taylor<T, N>& x) {
  using std::atan2;
  auto num = x * derivative(y) - y * derivative(x);
  return integrate(num / (x * x + y * y), T(atan2(y.c[0], x.c[0])));
}

template <class T, int N>
Taylor<T, N> acosh(const Taylor<T, N>& a) {
  using std::acosh;
  return integrate(derivative(a) / sqrt(a * a - T(1)), T(acosh(a.c[0])));
}

// Compose a scalar function with known derivatives f^(k)(a.c[0]), k=0..N,
// with the series a.
template <class T, int N>
Taylor<T, N> compose(const std::array<T, N + 1>& fd, const Taylor<T, N>& a) {
  Taylor<T, N> h = a;
  h.c[0] = 0;
  Taylor<T, N> r(fd[0]);
  Taylor<T, N> hp(T(1));
  T fact = 1;
  for (int k = 1; k <= N; ++k) {
    hp = hp * h;
    fact *= k;
    r += hp * (fd[k] / fact);
  }
  return r;
}

}  // namespace cmc
