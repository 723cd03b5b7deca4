// Mode process: transition matrix, mode <-> delay-pattern bijection, sampling.
//
// Modes are 1-based throughout, matching the usual indexing for chain states.
#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "mjds/history.hpp"
#include "mjds/types.hpp"

namespace mjds {

// Row-stochastic transition matrix.  Construct through validate_tpm.
class Tpm {
 public:
  int size() const { return static_cast<int>(rows_.rows()); }
  double p(int i, int j) const;  // 1-based
  const Matrix& matrix() const { return rows_; }

 private:
  friend Tpm validate_tpm(const Matrix& rows);
  explicit Tpm(Matrix rows) : rows_(std::move(rows)) {}
  Matrix rows_;
};

// Checks squareness, entries in [0,1], and unit row sums (within 1e-12);
// errors name the offending row.
Tpm validate_tpm(const Matrix& rows);

// Bijection between delay patterns and mode indices 1..s, in pattern order.
class DelayBijection {
 public:
  int size() const { return static_cast<int>(alphabet_.size()); }
  const DelayVector& delay_of(int mode) const;   // 1-based
  int mode_of(const DelayVector& d) const;
  const std::vector<DelayVector>& alphabet() const { return alphabet_; }

 private:
  friend DelayBijection build_bijection(std::vector<DelayVector> alphabet);
  explicit DelayBijection(std::vector<DelayVector> alphabet) : alphabet_(std::move(alphabet)) {}
  std::vector<DelayVector> alphabet_;
};

DelayBijection build_bijection(std::vector<DelayVector> alphabet);

struct MarkovDelayChain {
  Tpm tpm;
  DelayBijection bijection;

  MarkovDelayChain(Tpm t, DelayBijection b);
  int size() const { return tpm.size(); }
};

// Directed edges (d_i, d_j) with p_ij > 0, ordered by (i, j).  The zero test
// is exact: an entry counts as an edge iff it is strictly positive.
std::vector<std::pair<DelayVector, DelayVector>> edge_set(const MarkovDelayChain& chain);

// Deterministic uniform stream.  substream(seed, t) derives the independent
// stream for trajectory t; results never depend on thread scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  static Rng substream(std::uint64_t seed, std::uint64_t index) { return Rng(seed ^ index); }

  // 53-bit uniform in [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

// Inversion sampling of the next mode from row i.  The cumulative sum is
// scanned left to right; a draw landing exactly on a boundary picks the lower
// index, and zero-probability targets are never selected.
int sample_next(const MarkovDelayChain& chain, int mode, Rng& rng);

// Uniform mode in 1..s by the same inversion scheme (one draw).
int sample_uniform_mode(int s, Rng& rng);

}  // namespace mjds
