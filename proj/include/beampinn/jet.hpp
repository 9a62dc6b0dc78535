#pragma once

// Univariate truncated Taylor jets.
//
// A Jet<T> seated at a point `a` carries f(a), f'(a), f''(a)/2!, ... up to a
// runtime order of at most taylor::kMaxOrder. Arithmetic on jets yields the
// truncated expansion of the composed function, so pushing a seed variable
// through a network gives exact input derivatives of its output.

#include <array>
#include <string>

#include "beampinn/errors.hpp"
#include "beampinn/taylor.hpp"

namespace beampinn {

template <class T>
class Jet {
 public:
  Jet() = default;

  static Jet variable(const T& value, int order) {
    Jet j = constant(value, order);
    j.coeffs_[1] = T(1.0);
    return j;
  }

  static Jet constant(const T& value, int order) {
    check_order(order);
    Jet j;
    j.order_ = order;
    for (auto& c : j.coeffs_) c = T(0.0);
    j.coeffs_[0] = value;
    return j;
  }

  static Jet from_coeffs(const taylor::Coeffs<T>& coeffs, int order) {
    check_order(order);
    Jet j;
    j.order_ = order;
    j.coeffs_ = coeffs;
    return j;
  }

  int order() const noexcept { return order_; }
  const T& value() const noexcept { return coeffs_[0]; }
  const T& operator[](int k) const { return coeffs_[k]; }
  const taylor::Coeffs<T>& coeffs() const noexcept { return coeffs_; }

  /// k-th derivative, k! * coeffs[k].
  T derivative(int k) const {
    if (k < 0 || k > order_)
      throw UsageError("jet derivative index " + std::to_string(k) + " outside 0.." +
                       std::to_string(order_));
    return coeffs_[k] * taylor::factorial(k);
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    same_order(a, b);
    Jet r = a;
    for (int k = 0; k <= a.order_; ++k) r.coeffs_[k] = a.coeffs_[k] + b.coeffs_[k];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    same_order(a, b);
    Jet r = a;
    for (int k = 0; k <= a.order_; ++k) r.coeffs_[k] = a.coeffs_[k] - b.coeffs_[k];
    return r;
  }
  friend Jet operator-(const Jet& a) { return a * T(-1.0); }
  friend Jet operator*(const Jet& a, const Jet& b) {
    same_order(a, b);
    Jet r = a;
    taylor::mul(a.coeffs_.data(), b.coeffs_.data(), r.coeffs_.data(), a.order_);
    return r;
  }

  // Mixed jet/scalar forms: a scalar is a constant jet.
  friend Jet operator*(const Jet& a, const T& s) {
    Jet r = a;
    for (int k = 0; k <= a.order_; ++k) r.coeffs_[k] = a.coeffs_[k] * s;
    return r;
  }
  friend Jet operator*(const T& s, const Jet& a) { return a * s; }
  friend Jet operator+(const Jet& a, const T& s) {
    Jet r = a;
    r.coeffs_[0] = a.coeffs_[0] + s;
    return r;
  }
  friend Jet operator+(const T& s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, const T& s) {
    Jet r = a;
    r.coeffs_[0] = a.coeffs_[0] - s;
    return r;
  }

  Jet& operator+=(const Jet& b) { return *this = *this + b; }

  friend Jet tanh(const Jet& s) {
    Jet u = s;
    taylor::Coeffs<T> w;
    taylor::tanh_forward(s.coeffs_.data(), u.coeffs_.data(), w.data(), s.order_);
    return u;
  }
  friend Jet exp(const Jet& s) {
    Jet e = s;
    taylor::exp_forward(s.coeffs_.data(), e.coeffs_.data(), s.order_);
    return e;
  }
  friend Jet square(const Jet& a) { return a * a; }

 private:
  static void check_order(int order) {
    if (order < 1 || order > taylor::kMaxOrder)
      throw ConfigError("unsupported jet order " + std::to_string(order) +
                        " (supported: 1.." + std::to_string(taylor::kMaxOrder) + ")");
  }
  static void same_order(const Jet& a, const Jet& b) {
    if (a.order_ != b.order_)
      throw UsageError("jet order mismatch: " + std::to_string(a.order_) + " vs " +
                       std::to_string(b.order_));
  }

  int order_ = 1;
  taylor::Coeffs<T> coeffs_{};
};

/// Operation selector mirroring the jet arithmetic surface (used by bindings and tests).
enum class JetOp { kAdd, kSub, kMul, kScale, kTanh, kExp, kSquare };

/// Applies `op` to `a` (and `b` for binary kinds). kScale multiplies by `factor`.
template <class T>
Jet<T> jet_apply(JetOp op, const Jet<T>& a, const Jet<T>* b = nullptr, double factor = 1.0) {
  auto need_b = [&]() -> const Jet<T>& {
    if (b == nullptr) throw UsageError("binary jet operation requires a second operand");
    return *b;
  };
  switch (op) {
    case JetOp::kAdd: return a + need_b();
    case JetOp::kSub: return a - need_b();
    case JetOp::kMul: return a * need_b();
    case JetOp::kScale: return a * T(factor);
    case JetOp::kTanh: return tanh(a);
    case JetOp::kExp: return exp(a);
    case JetOp::kSquare: return square(a);
  }
  throw UsageError("unknown jet operation");
}

}  // namespace beampinn
