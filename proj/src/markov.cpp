#include "mjds/markov.hpp"

#include <cmath>

namespace mjds {

double Tpm::p(int i, int j) const {
  if (i < 1 || i > size() || j < 1 || j > size())
    throw ValidationError("transition index (" + std::to_string(i) + "," + std::to_string(j) +
                          ") outside 1.." + std::to_string(size()));
  return rows_(i - 1, j - 1);
}

Tpm validate_tpm(const Matrix& rows) {
  if (rows.rows() == 0 || rows.rows() != rows.cols())
    throw ValidationError("transition matrix must be square and non-empty, got " +
                          std::to_string(rows.rows()) + "x" + std::to_string(rows.cols()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      double v = rows(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw ValidationError("transition row " + std::to_string(i + 1) +
                              " has entry outside [0,1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw ValidationError("transition row " + std::to_string(i + 1) + " sums to " +
                            std::to_string(sum) + ", expected 1");
  }
  return Tpm(rows);
}

const DelayVector& DelayBijection::delay_of(int mode) const {
  if (mode < 1 || mode > size())
    throw ValidationError("mode " + std::to_string(mode) + " outside 1.." + std::to_string(size()));
  return alphabet_[static_cast<std::size_t>(mode - 1)];
}

int DelayBijection::mode_of(const DelayVector& d) const {
  for (int i = 0; i < size(); ++i)
    if (alphabet_[static_cast<std::size_t>(i)] == d) return i + 1;
  throw AlphabetViolation("delay pattern " + d.str() + " is not in the alphabet");
}

DelayBijection build_bijection(std::vector<DelayVector> alphabet) {
  if (alphabet.empty()) throw ValidationError("alphabet must be non-empty");
  for (std::size_t a = 0; a < alphabet.size(); ++a)
    for (std::size_t b = 0; b < a; ++b)
      if (alphabet[a] == alphabet[b])
        throw ValidationError("duplicate delay pattern " + alphabet[a].str() + " in alphabet");
  return DelayBijection(std::move(alphabet));
}

MarkovDelayChain::MarkovDelayChain(Tpm t, DelayBijection b)
    : tpm(std::move(t)), bijection(std::move(b)) {
  if (tpm.size() != bijection.size())
    throw ValidationError("transition matrix order " + std::to_string(tpm.size()) +
                          " does not match alphabet size " + std::to_string(bijection.size()));
}

std::vector<std::pair<DelayVector, DelayVector>> edge_set(const MarkovDelayChain& chain) {
  std::vector<std::pair<DelayVector, DelayVector>> edges;
  for (int i = 1; i <= chain.size(); ++i)
    for (int j = 1; j <= chain.size(); ++j)
      if (chain.tpm.p(i, j) > 0.0)
        edges.emplace_back(chain.bijection.delay_of(i), chain.bijection.delay_of(j));
  return edges;
}

int sample_next(const MarkovDelayChain& chain, int mode, Rng& rng) {
  const int s = chain.size();
  if (mode < 1 || mode > s)
    throw ValidationError("mode " + std::to_string(mode) + " outside 1.." + std::to_string(s));
  const double u = rng.uniform01();
  double cum = 0.0;
  int last_positive = 0;
  for (int j = 1; j <= s; ++j) {
    const double pj = chain.tpm.p(mode, j);
    if (pj <= 0.0) continue;  // impossible transitions can never be picked
    cum += pj;
    last_positive = j;
    if (u <= cum) return j;
  }
  // Round-off can leave cum marginally below 1; fall back to the last
  // reachable target.
  if (last_positive == 0) throw ValidationError("transition row has no positive entry");
  return last_positive;
}

int sample_uniform_mode(int s, Rng& rng) {
  if (s < 1) throw ValidationError("mode count must be >= 1");
  const double u = rng.uniform01();
  const double p = 1.0 / static_cast<double>(s);
  double cum = 0.0;
  for (int j = 1; j < s; ++j) {
    cum += p;
    if (u <= cum) return j;
  }
  return s;
}

}  // namespace mjds
