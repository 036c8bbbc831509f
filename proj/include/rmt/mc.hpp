#pragma once

#include "rmt/equilibrium.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace rmt {

class AcceptanceRateError : public std::runtime_error
{
public:
  AcceptanceRateError(double rate, std::string const &what) : std::runtime_error(what), rate_(rate) {}
  double rate() const { return rate_; }

private:
  double rate_;
};

struct SampleBatch
{
  int                              beta = 2;
  int                              n    = 0;
  int                              N    = 0;
  std::uint64_t                    seed = 0;
  std::vector<std::vector<double>> eigenvalue_sets; // each sorted, length n

  // Metropolis only: acceptance after burn-in, averaged over chains.
  double acceptance_rate = 0.0;
  // GSE only: largest gap between the two copies of an embedded eigenvalue.
  double pair_mismatch = 0.0;
};

// Generator for stream `index` of `seed`; streams do not depend on the worker count.
std::mt19937_64 stream_generator(std::uint64_t seed, std::uint64_t index);

// Dense GOE / GUE / GSE with off-diagonal E|H_ij|^2 = 1/n and diagonal variance
// 2/(beta n), so every beta fills [-2, 2]. GSE goes through the 2n x 2n complex
// embedding. workers = 0 uses the hardware concurrency.
SampleBatch sample_gaussian(int beta, int n, int count, std::uint64_t seed, int workers = 1);

// beta sum_{i<j} log|x_i - x_j| - N sum V(x_j), plus the |x|^{2 alpha} factor
// of a singular potential; -inf off the support.
double invariant_log_density(Potential const &V, int beta, int N, std::vector<double> const &x);

// Random-walk Metropolis over one coordinate at a time.
class MetropolisChain
{
public:
  MetropolisChain(Potential V, int beta, int N, std::vector<double> x, std::uint64_t seed);

  // Metropolis test for moving x_i to `value`; returns whether it was accepted.
  bool try_move(int i, double value);
  // One proposal per coordinate with Gaussian steps of size `width`; returns accepted count.
  int sweep(double width);

  std::vector<double> const &state() const { return x_; }
  double                     log_density() const;
  std::mt19937_64           &generator() { return rng_; }

private:
  double coordinate_term(int i, double value) const;

  Potential           V_;
  int                 beta_, N_;
  std::vector<double> x_;
  std::mt19937_64     rng_;
};

// Eight independent chains, each run for `steps` sweeps with burn-in steps/2.
// The proposal width is tuned towards 0.3 acceptance during burn-in and frozen
// afterwards; draws are spread evenly across the second half.
SampleBatch sample_invariant(Potential const &V, int beta, int n, int N, int count, int steps, std::uint64_t seed,
                             int workers = 1);

struct Histogram
{
  double              lo = 0.0, hi = 0.0;
  std::vector<double> density; // per bin, normalized by the total number of eigenvalues
  double              outside = 0.0; // fraction of eigenvalues outside [lo, hi)

  double              width() const { return (hi - lo) / static_cast<double>(density.size()); }
  std::vector<double> centers() const;
  double              mass() const; // sum density * width, plus outside
};

Histogram empirical_density(SampleBatch const &batch, int bins, double lo, double hi);

// Interval of the spectrum and the density used to unfold it.
struct SpacingWindow
{
  double lo = 0.0, hi = 0.0;
  double density = 0.0; // rho_V at the centre
};

// Consecutive spacings with both ends in the window, times n * density.
std::vector<double> local_statistics(SampleBatch const &batch, SpacingWindow const &window);

// Independent points drawn from `rho` on [lo, hi] by rejection, n per set.
SampleBatch poisson_resample(SampleBatch const &batch, std::function<double(double)> const &rho, double lo, double hi,
                             std::uint64_t seed);

struct KernelDistance
{
  double sup = 0.0;
  double l1  = 0.0;
};

// std::invalid_argument when the grid sizes differ.
KernelDistance compare_to_kernel(Histogram const &empirical, std::vector<double> const &predicted);

} // namespace rmt
