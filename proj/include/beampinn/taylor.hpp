#pragma once

// Truncated Taylor-coefficient recurrences shared by scalar jets, tape
// variables and batched Eigen arrays. Coefficient k holds f^(k)(a) / k!.
//
// The element type T only needs +, -, * (with T and double) and, for the
// value coefficient, an ADL-visible tanh/exp. That covers double, Var and
// Eigen::ArrayXXd alike, so every path runs the same recurrence.

#include <array>
#include <cmath>
#include <cstddef>

namespace beampinn::taylor {

inline constexpr int kMaxOrder = 4;

template <class T>
using Coeffs = std::array<T, kMaxOrder + 1>;

/// c = a * b (Leibniz / Cauchy product), coefficients 0..order.
template <class T>
void mul(const T* a, const T* b, T* c, int order) {
  for (int k = 0; k <= order; ++k) {
    T acc = a[0] * b[k];
    for (int j = 1; j <= k; ++j) acc = acc + a[j] * b[k - j];
    c[k] = acc;
  }
}

/// u = tanh(s) and w = 1 - u^2, using u' = w * s' degree by degree.
/// w is written for indices 0..order-1 (all the recurrence consumes).
template <class T>
void tanh_forward(const T* s, T* u, T* w, int order) {
  using std::tanh;
  u[0] = tanh(s[0]);
  for (int k = 1; k <= order; ++k) {
    const int m = k - 1;
    if (m == 0) {
      w[0] = 1.0 - u[0] * u[0];
    } else {
      T acc = u[0] * u[m];
      for (int j = 1; j <= m; ++j) acc = acc + u[j] * u[m - j];
      w[m] = -1.0 * acc;
    }
    T acc = s[1] * w[k - 1];
    for (int j = 2; j <= k; ++j) acc = acc + (static_cast<double>(j) * s[j]) * w[k - j];
    u[k] = acc * (1.0 / k);
  }
  if (order == 0) w[0] = 1.0 - u[0] * u[0];
}

/// Reverse of tanh_forward: given the adjoint of u, accumulate the adjoint of s.
/// `ub` is consumed as scratch. `w` must hold indices 0..max(order-1, 0).
template <class T>
void tanh_pullback(const T* s, const T* u, const T* w, T* ub, T* sb, int order) {
  Coeffs<T> wb;
  for (int m = 0; m < order; ++m) wb[m] = 0.0 * w[m];
  for (int k = order; k >= 1; --k) {
    const double inv_k = 1.0 / k;
    for (int j = 1; j <= k; ++j) {
      const double c = j * inv_k;
      sb[j] = sb[j] + (c * ub[k]) * w[k - j];
      wb[k - j] = wb[k - j] + (c * ub[k]) * s[j];
    }
    const int m = k - 1;
    if (m == 0) {
      ub[0] = ub[0] - 2.0 * wb[0] * u[0];
    } else {
      for (int j = 0; j <= m; ++j) {
        ub[j] = ub[j] - wb[m] * u[m - j];
        ub[m - j] = ub[m - j] - wb[m] * u[j];
      }
    }
  }
  sb[0] = sb[0] + ub[0] * w[0];
}

/// e = exp(s) via e' = e * s'.
template <class T>
void exp_forward(const T* s, T* e, int order) {
  using std::exp;
  e[0] = exp(s[0]);
  for (int k = 1; k <= order; ++k) {
    T acc = s[1] * e[k - 1];
    for (int j = 2; j <= k; ++j) acc = acc + (static_cast<double>(j) * s[j]) * e[k - j];
    e[k] = acc * (1.0 / k);
  }
}

/// k! for k in 0..kMaxOrder.
constexpr double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace beampinn::taylor
