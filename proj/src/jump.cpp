#include "mjds/jump.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace mjds {
namespace {

// Neumaier compensated accumulator; totals do not drift with block merges.
struct Acc {
  double s = 0.0, c = 0.0;
  void add(double v) {
    double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double total() const { return s + c; }
};

// Trajectories are processed in fixed blocks.  Each block owns its partial
// sums; partials are merged in block order afterwards, so totals are
// independent of how blocks land on threads.
constexpr int kBlock = 64;

struct Partial {
  std::vector<Acc> v, v2;
  std::vector<double> mn, mx;
  explicit Partial(int len)
      : v(len), v2(len), mn(len, std::numeric_limits<double>::infinity()),
        mx(len, -std::numeric_limits<double>::infinity()) {}
};

constexpr double kZ99 = 2.5758293035489004;  // two-sided 99% normal quantile

}  // namespace

JumpSystem::JumpSystem(DelayModel m, MarkovDelayChain c)
    : model(std::move(m)), chain(std::move(c)) {
  const auto& ma = model.alphabet();
  const auto& ca = chain.bijection.alphabet();
  if (ma.size() != ca.size())
    throw ValidationError("model alphabet size " + std::to_string(ma.size()) +
                          " does not match chain alphabet size " + std::to_string(ca.size()));
  for (std::size_t i = 0; i < ma.size(); ++i)
    if (!(ma[i] == ca[i]))
      throw ValidationError("model and chain alphabets disagree at position " +
                            std::to_string(i + 1));
}

Trajectory simulate(const JumpSystem& sys, const History& xi0, int eta0, int horizon, Rng& rng) {
  if (horizon < 0) throw ValidationError("horizon must be >= 0");
  if (eta0 < 1 || eta0 > sys.modes())
    throw ValidationError("initial mode " + std::to_string(eta0) + " outside 1.." +
                          std::to_string(sys.modes()));
  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(horizon) + 1);
  traj.modes.reserve(static_cast<std::size_t>(horizon));
  History h = xi0;
  traj.states.push_back(h.at(0));
  int mode = eta0;
  for (int k = 0; k < horizon; ++k) {
    traj.modes.push_back(mode);
    h = lift_step(sys.model, h, sys.delay_of(mode));
    traj.states.push_back(h.at(0));
    if (k + 1 < horizon) mode = sample_next(sys.chain, mode, rng);
  }
  return traj;
}

EnsembleStats simulate_ensemble(const JumpSystem& sys, const History& xi0,
                                const InitialMode& eta0, int horizon, int n_runs,
                                std::uint64_t seed, int threads, int retain) {
  if (horizon < 0) throw ValidationError("horizon must be >= 0");
  if (n_runs < 1) throw ValidationError("run count must be >= 1");
  if (threads < 1) throw ValidationError("thread count must be >= 1");
  if (retain < 0 || retain > n_runs)
    throw ValidationError("retained trajectory count must lie in 0..n_runs");
  if (eta0.pinned && (*eta0.pinned < 1 || *eta0.pinned > sys.modes()))
    throw ValidationError("initial mode " + std::to_string(*eta0.pinned) + " outside 1.." +
                          std::to_string(sys.modes()));
  // Shape errors should surface before any thread is spawned.
  if (xi0.dim() != sys.model.dim() || xi0.delta() != sys.model.delta())
    throw ValidationError("initial history shape (" + std::to_string(xi0.dim()) + ", " +
                          std::to_string(xi0.delta()) + ") does not match model (" +
                          std::to_string(sys.model.dim()) + ", " +
                          std::to_string(sys.model.delta()) + ")");

  const int len = horizon + 1;
  const int n_blocks = (n_runs + kBlock - 1) / kBlock;
  std::vector<Partial> partials(static_cast<std::size_t>(n_blocks), Partial(len));

  EnsembleStats out;
  out.horizon = horizon;
  out.n_runs = n_runs;
  out.seed = seed;
  out.eta0 = eta0.str();
  out.retained.resize(static_cast<std::size_t>(retain));

  std::atomic<int> next_block{0};
  std::vector<std::exception_ptr> block_error(static_cast<std::size_t>(n_blocks));

  auto worker = [&]() {
    for (;;) {
      const int b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        Partial& part = partials[static_cast<std::size_t>(b)];
        const int t_begin = b * kBlock;
        const int t_end = std::min(n_runs, t_begin + kBlock);
        for (int t = t_begin; t < t_end; ++t) {
          Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(t));
          Trajectory* keep = (t < retain) ? &out.retained[static_cast<std::size_t>(t)] : nullptr;
          History h = xi0;
          auto record = [&](int k, const History& cur) {
            const double nrm = cur.at(0).norm();
            const double sq = nrm * nrm;
            if (!std::isfinite(sq) || !std::isfinite(sq * sq))
              throw NumericFault("squared state norm overflow at step " + std::to_string(k));
            part.v[static_cast<std::size_t>(k)].add(sq);
            part.v2[static_cast<std::size_t>(k)].add(sq * sq);
            part.mn[static_cast<std::size_t>(k)] =
                std::min(part.mn[static_cast<std::size_t>(k)], nrm);
            part.mx[static_cast<std::size_t>(k)] =
                std::max(part.mx[static_cast<std::size_t>(k)], nrm);
            if (keep) keep->states.push_back(cur.at(0));
          };
          record(0, h);
          if (horizon == 0) continue;
          int mode = eta0.pinned ? *eta0.pinned : sample_uniform_mode(sys.modes(), rng);
          for (int k = 0; k < horizon; ++k) {
            if (keep) keep->modes.push_back(mode);
            h = lift_step(sys.model, h, sys.delay_of(mode));
            record(k + 1, h);
            if (k + 1 < horizon) mode = sample_next(sys.chain, mode, rng);
          }
        }
      } catch (...) {
        block_error[static_cast<std::size_t>(b)] = std::current_exception();
      }
    }
  };

  const int n_threads = std::max(1, std::min(threads, n_blocks));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& err : block_error)
    if (err) std::rethrow_exception(err);

  out.mean_sq.resize(static_cast<std::size_t>(len));
  out.min_norm.resize(static_cast<std::size_t>(len));
  out.max_norm.resize(static_cast<std::size_t>(len));
  out.std_dev.resize(static_cast<std::size_t>(len));
  out.ci99.resize(static_cast<std::size_t>(len));
  const double n = static_cast<double>(n_runs);
  for (int k = 0; k < len; ++k) {
    Acc sum, sum2;
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    for (const Partial& part : partials) {  // fixed merge order
      sum.add(part.v[static_cast<std::size_t>(k)].s);
      sum.add(part.v[static_cast<std::size_t>(k)].c);
      sum2.add(part.v2[static_cast<std::size_t>(k)].s);
      sum2.add(part.v2[static_cast<std::size_t>(k)].c);
      mn = std::min(mn, part.mn[static_cast<std::size_t>(k)]);
      mx = std::max(mx, part.mx[static_cast<std::size_t>(k)]);
    }
    const double mean = sum.total() / n;
    if (!std::isfinite(mean)) throw NumericFault("ensemble mean overflow at step " + std::to_string(k));
    double sd = 0.0;
    if (n_runs > 1) {
      const double var = (sum2.total() - n * mean * mean) / (n - 1.0);
      sd = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    out.mean_sq[static_cast<std::size_t>(k)] = mean;
    out.min_norm[static_cast<std::size_t>(k)] = mn;
    out.max_norm[static_cast<std::size_t>(k)] = mx;
    out.std_dev[static_cast<std::size_t>(k)] = sd;
    out.ci99[static_cast<std::size_t>(k)] = kZ99 * sd / std::sqrt(n);
  }
  return out;
}

}  // namespace mjds
