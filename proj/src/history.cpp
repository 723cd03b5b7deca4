#include "mjds/history.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace mjds {

History::History(int delta, std::vector<Vector> slots) : delta_(delta), slots_(std::move(slots)) {
  if (delta_ < 0) throw ValidationError("history horizon must be >= 0");
  if (static_cast<int>(slots_.size()) != delta_ + 1)
    throw ValidationError("history needs " + std::to_string(delta_ + 1) + " slots, got " +
                          std::to_string(slots_.size()));
  if (slots_.empty() || slots_.front().size() == 0)
    throw ValidationError("history slots must be non-empty vectors");
  dim_ = static_cast<int>(slots_.front().size());
  for (std::size_t j = 0; j < slots_.size(); ++j) {
    if (slots_[j].size() != dim_)
      throw ValidationError("history slot " + std::to_string(j) + " has dimension " +
                            std::to_string(slots_[j].size()) + ", expected " +
                            std::to_string(dim_));
  }
}

History History::zero(int delta, int dim) {
  if (dim <= 0) throw ValidationError("history dimension must be positive");
  return History(delta, std::vector<Vector>(delta + 1, Vector::Zero(dim)));
}

History History::constant(int delta, const Vector& value) {
  return History(delta, std::vector<Vector>(delta + 1, value));
}

const Vector& History::at(int theta) const {
  if (theta > 0 || theta < -delta_)
    throw ValidationError("history offset " + std::to_string(theta) + " outside [-" +
                          std::to_string(delta_) + ", 0]");
  return slots_[static_cast<std::size_t>(theta + delta_)];
}

bool History::operator==(const History& other) const {
  if (delta_ != other.delta_ || dim_ != other.dim_) return false;
  for (std::size_t j = 0; j < slots_.size(); ++j)
    if (slots_[j] != other.slots_[j]) return false;
  return true;
}

double sup_norm(const History& phi) {
  double best = 0.0;
  for (int theta = -phi.delta(); theta <= 0; ++theta) best = std::max(best, phi.at(theta).norm());
  return best;
}

std::string DelayVector::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t j = 0; j < entries.size(); ++j) {
    if (j) os << ',';
    os << entries[j];
  }
  os << ']';
  return os.str();
}

DelayModel::DelayModel(int dim, int delta, std::vector<DelayVector> alphabet, Dynamics f)
    : dim_(dim), delta_(delta), alphabet_(std::move(alphabet)), f_(std::move(f)) {
  if (dim_ <= 0) throw ValidationError("state dimension must be positive");
  if (delta_ < 0) throw ValidationError("maximum delay must be >= 0");
  if (alphabet_.empty()) throw ValidationError("delay alphabet must be non-empty");
  if (!f_) throw ValidationError("dynamics callable must be set");
  arity_ = static_cast<int>(alphabet_.front().entries.size());
  if (arity_ < 1) throw ValidationError("delay patterns need at least one entry");
  for (std::size_t a = 0; a < alphabet_.size(); ++a) {
    const auto& d = alphabet_[a];
    if (static_cast<int>(d.entries.size()) != arity_)
      throw ValidationError("delay pattern " + d.str() + " has arity " +
                            std::to_string(d.entries.size()) + ", expected " +
                            std::to_string(arity_));
    for (int e : d.entries)
      if (e < 0 || e > delta_)
        throw ValidationError("delay pattern " + d.str() + " has entry outside [0, " +
                              std::to_string(delta_) + "]");
    for (std::size_t b = 0; b < a; ++b)
      if (alphabet_[b] == d)
        throw ValidationError("duplicate delay pattern " + d.str() + " in alphabet");
  }
  // The origin must be a fixed point; everything downstream assumes it.
  std::vector<Vector> zeros(static_cast<std::size_t>(arity_) + 1, Vector::Zero(dim_));
  Vector at_origin = apply(zeros);
  if (at_origin.norm() > 1e-12)
    throw ValidationError("dynamics do not fix the origin: |f(0,...,0)| = " +
                          std::to_string(at_origin.norm()));
}

bool DelayModel::in_alphabet(const DelayVector& d) const {
  for (const auto& a : alphabet_)
    if (a == d) return true;
  return false;
}

Vector DelayModel::apply(const std::vector<Vector>& args) const {
  if (static_cast<int>(args.size()) != arity_ + 1)
    throw ValidationError("dynamics expect " + std::to_string(arity_ + 1) + " arguments, got " +
                          std::to_string(args.size()));
  Vector out = f_(args);
  if (out.size() != dim_)
    throw ValidationError("dynamics returned dimension " + std::to_string(out.size()) +
                          ", expected " + std::to_string(dim_));
  if (!out.allFinite()) throw NumericFault("dynamics produced a non-finite state");
  return out;
}

Vector raw_step(const DelayModel& model, const History& phi, const DelayVector& d) {
  if (phi.dim() != model.dim())
    throw ValidationError("history dimension " + std::to_string(phi.dim()) +
                          " does not match model dimension " + std::to_string(model.dim()));
  if (phi.delta() != model.delta())
    throw ValidationError("history horizon " + std::to_string(phi.delta()) +
                          " does not match model horizon " + std::to_string(model.delta()));
  if (!model.in_alphabet(d))
    throw AlphabetViolation("delay pattern " + d.str() + " is not in the model alphabet");
  std::vector<Vector> args;
  args.reserve(static_cast<std::size_t>(model.arity()) + 1);
  args.push_back(phi.at(0));
  for (int e : d.entries) args.push_back(phi.at(-e));
  return model.apply(args);
}

History lift_step(const DelayModel& model, const History& phi, const DelayVector& d) {
  Vector next = raw_step(model, phi, d);
  std::vector<Vector> slots;
  slots.reserve(static_cast<std::size_t>(phi.delta()) + 1);
  for (int theta = -phi.delta() + 1; theta <= 0; ++theta) slots.push_back(phi.at(theta));
  slots.push_back(std::move(next));
  return History(phi.delta(), std::move(slots));
}

}  // namespace mjds
