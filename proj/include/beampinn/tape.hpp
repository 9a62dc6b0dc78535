#pragma once

// Scalar reverse-mode differentiation on a Wengert list.
//
// Var is a value plus a slot on a Tape; every elementary operation records at
// most two (parent, partial) pairs. Jet<Var> therefore records the full Taylor
// recurrence, and one reverse sweep yields d(loss)/d(parameter) for a loss
// built from jet coefficients.

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace beampinn {

class Tape;

class Var {
 public:
  Var() = default;
  Var(double value) : value_(value) {}  // NOLINT: constants convert implicitly

  double value() const noexcept { return value_; }
  std::int64_t index() const noexcept { return index_; }
  Tape* tape() const noexcept { return tape_; }

  friend Var operator+(const Var& a, const Var& b);
  friend Var operator-(const Var& a, const Var& b);
  friend Var operator*(const Var& a, const Var& b);
  friend Var operator/(const Var& a, const Var& b);
  friend Var operator-(const Var& a);
  friend Var tanh(const Var& a);
  friend Var exp(const Var& a);

 private:
  friend class Tape;
  Var(double value, std::int64_t index, Tape* tape) : value_(value), index_(index), tape_(tape) {}

  double value_ = 0.0;
  std::int64_t index_ = -1;
  Tape* tape_ = nullptr;
};

class Tape {
 public:
  /// Registers an independent variable.
  Var variable(double value);

  /// Records a node with up to two parents; constants (index < 0) are skipped.
  Var record(double value, const Var& a, double da, const Var& b, double db);
  Var record(double value, const Var& a, double da);

  /// Adjoints of every node after seeding d(output)/d(output) = 1.
  std::vector<double> adjoints(const Var& output) const;

  std::size_t size() const noexcept { return nodes_.size(); }
  void clear() { nodes_.clear(); }

 private:
  struct Node {
    std::int64_t a;
    std::int64_t b;
    double da;
    double db;
  };
  std::vector<Node> nodes_;
};

/// Scalar loss over a parameter vector, expressed on tape variables.
using TapeLoss = std::function<Var(std::span<const Var>)>;

/// Exact gradient of `evaluate` at `params` by one reverse sweep.
/// Throws TrainingError if the loss value is not finite.
std::vector<double> loss_gradient(const TapeLoss& evaluate, std::span<const double> params);

}  // namespace beampinn
