#include "beampinn/tape.hpp"

#include <cmath>

#include "beampinn/errors.hpp"

namespace beampinn {
namespace {

Tape* tape_of(const Var& a, const Var& b) { return a.tape() != nullptr ? a.tape() : b.tape(); }

}  // namespace

Var Tape::variable(double value) {
  nodes_.push_back({-1, -1, 0.0, 0.0});
  return Var(value, static_cast<std::int64_t>(nodes_.size()) - 1, this);
}

Var Tape::record(double value, const Var& a, double da, const Var& b, double db) {
  nodes_.push_back({a.index(), b.index(), da, db});
  return Var(value, static_cast<std::int64_t>(nodes_.size()) - 1, this);
}

Var Tape::record(double value, const Var& a, double da) {
  nodes_.push_back({a.index(), -1, da, 0.0});
  return Var(value, static_cast<std::int64_t>(nodes_.size()) - 1, this);
}

std::vector<double> Tape::adjoints(const Var& output) const {
  std::vector<double> adj(nodes_.size(), 0.0);
  if (output.index() < 0) return adj;
  adj[static_cast<std::size_t>(output.index())] = 1.0;
  for (std::int64_t i = output.index(); i >= 0; --i) {
    const double g = adj[static_cast<std::size_t>(i)];
    if (g == 0.0) continue;
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.a >= 0) adj[static_cast<std::size_t>(n.a)] += g * n.da;
    if (n.b >= 0) adj[static_cast<std::size_t>(n.b)] += g * n.db;
  }
  return adj;
}

Var operator+(const Var& a, const Var& b) {
  Tape* t = tape_of(a, b);
  if (t == nullptr) return Var(a.value_ + b.value_);
  return t->record(a.value_ + b.value_, a, 1.0, b, 1.0);
}

Var operator-(const Var& a, const Var& b) {
  Tape* t = tape_of(a, b);
  if (t == nullptr) return Var(a.value_ - b.value_);
  return t->record(a.value_ - b.value_, a, 1.0, b, -1.0);
}

Var operator*(const Var& a, const Var& b) {
  Tape* t = tape_of(a, b);
  if (t == nullptr) return Var(a.value_ * b.value_);
  return t->record(a.value_ * b.value_, a, b.value_, b, a.value_);
}

Var operator/(const Var& a, const Var& b) {
  Tape* t = tape_of(a, b);
  const double q = a.value_ / b.value_;
  if (t == nullptr) return Var(q);
  return t->record(q, a, 1.0 / b.value_, b, -q / b.value_);
}

Var operator-(const Var& a) {
  if (a.tape_ == nullptr) return Var(-a.value_);
  return a.tape_->record(-a.value_, a, -1.0);
}

Var tanh(const Var& a) {
  const double u = std::tanh(a.value_);
  if (a.tape_ == nullptr) return Var(u);
  return a.tape_->record(u, a, 1.0 - u * u);
}

Var exp(const Var& a) {
  const double e = std::exp(a.value_);
  if (a.tape_ == nullptr) return Var(e);
  return a.tape_->record(e, a, e);
}

std::vector<double> loss_gradient(const TapeLoss& evaluate, std::span<const double> params) {
  Tape tape;
  std::vector<Var> vars;
  vars.reserve(params.size());
  for (double p : params) vars.push_back(tape.variable(p));
  const Var loss = evaluate(vars);
  if (!std::isfinite(loss.value()))
    throw TrainingError("non-finite loss during gradient evaluation");
  const std::vector<double> adj = tape.adjoints(loss);
  std::vector<double> grad(params.size(), 0.0);
  for (std::size_t i = 0; i < vars.size(); ++i)
    grad[i] = adj[static_cast<std::size_t>(vars[i].index())];
  return grad;
}

}  // namespace beampinn
