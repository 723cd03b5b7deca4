// Finite state histories and the delayed one-step dynamics built on them.
//
// A History stores the segment x(k-Delta..k) of a trajectory as Delta+1
// vector slots addressed by a non-positive offset theta in [-Delta, 0],
// where at(0) is the newest sample.
#pragma once

#include <functional>
#include <vector>

#include "mjds/types.hpp"

namespace mjds {

class History {
 public:
  // Slots ordered oldest first: slots[j] is the value at theta = j - delta.
  History(int delta, std::vector<Vector> slots);

  static History zero(int delta, int dim);
  static History constant(int delta, const Vector& value);

  const Vector& at(int theta) const;  // theta in [-delta, 0]
  int delta() const { return delta_; }
  int dim() const { return dim_; }

  bool operator==(const History& other) const;

 private:
  int delta_ = 0;
  int dim_ = 0;
  std::vector<Vector> slots_;
};

// Largest Euclidean slot norm, i.e. the sup norm of the segment.
double sup_norm(const History& phi);

// One delay pattern: the lags fed to the dynamics beyond the current state.
struct DelayVector {
  std::vector<int> entries;

  bool operator==(const DelayVector& other) const { return entries == other.entries; }
  std::string str() const;
};

// Dynamics update x(k+1) = f(x(k), x(k-d_1), ..., x(k-d_r)).
// The callable receives r+1 arguments: current state first, then the
// delayed states in pattern order.
using Dynamics = std::function<Vector(const std::vector<Vector>&)>;

class DelayModel {
 public:
  // Validates: entries of every pattern lie in [0, delta], patterns are
  // distinct, and f maps the origin to the origin (within 1e-12).
  DelayModel(int dim, int delta, std::vector<DelayVector> alphabet, Dynamics f);

  int dim() const { return dim_; }
  int arity() const { return arity_; }      // r, number of delayed arguments
  int delta() const { return delta_; }
  const std::vector<DelayVector>& alphabet() const { return alphabet_; }
  bool in_alphabet(const DelayVector& d) const;

  // Evaluates f on already-assembled arguments; checks output shape and
  // finiteness (NumericFault on NaN/Inf).
  Vector apply(const std::vector<Vector>& args) const;

 private:
  int dim_;
  int arity_;
  int delta_;
  std::vector<DelayVector> alphabet_;
  Dynamics f_;
};

// Next state f(phi(0), phi(-d_1), ..., phi(-d_r)).  Rejects histories whose
// shape does not match the model and patterns outside the alphabet.
Vector raw_step(const DelayModel& model, const History& phi, const DelayVector& d);

// Shifted successor history: newest slot is raw_step(model, phi, d), every
// older slot moves back by one.
History lift_step(const DelayModel& model, const History& phi, const DelayVector& d);

}  // namespace mjds
