#include "rmt/mc.hpp"

#include "rmt/detail/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rmt {

namespace {

constexpr int kChains = 8;

void check_beta(int beta)
{
  if (beta != 1 && beta != 2 && beta != 4) { throw std::invalid_argument("beta must be 1, 2 or 4"); }
}

std::vector<double> goe(int n, std::mt19937_64 &rng)
{
  std::normal_distribution<double> g;
  double const                     s = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXd                  h(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = std::sqrt(2.0) * s * g(rng);
    for (int j = i + 1; j < n; ++j) { h(i, j) = h(j, i) = s * g(rng); }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + n};
}

std::vector<double> gue(int n, std::mt19937_64 &rng)
{
  std::normal_distribution<double> g;
  double const                     s = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXcd                 h(n, n);
  for (int i = 0; i < n; ++i) {
    h(i, i) = s * g(rng);
    for (int j = i + 1; j < n; ++j) {
      double const re = g(rng), im = g(rng);
      h(i, j)         = std::complex<double>(re, im) * (s / std::sqrt(2.0));
      h(j, i)         = std::conj(h(i, j));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + n};
}

// Quaternion a + b i + c j + d k as [[a + i b, c + i d], [-c + i d, a - i b]].
std::vector<double> gse(int n, std::mt19937_64 &rng, double &mismatch)
{
  using cd = std::complex<double>;
  std::normal_distribution<double> g;
  double const                     s = 0.5 / std::sqrt(static_cast<double>(n));
  Eigen::MatrixXcd                 h(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    double const a     = std::sqrt(2.0) * s * g(rng);
    h.block<2, 2>(2 * i, 2 * i) << a, 0.0, 0.0, a;
    for (int j = i + 1; j < n; ++j) {
      double const    qa = s * g(rng), qb = s * g(rng), qc = s * g(rng), qd = s * g(rng);
      Eigen::Matrix2cd q;
      q << cd(qa, qb), cd(qc, qd), cd(-qc, qd), cd(qa, -qb);
      h.block<2, 2>(2 * i, 2 * j) = q;
      h.block<2, 2>(2 * j, 2 * i) = q.adjoint();
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  auto const                                      &ev = es.eigenvalues();
  std::vector<double>                              out(n);
  for (int k = 0; k < n; ++k) {
    mismatch = std::max(mismatch, std::abs(ev(2 * k + 1) - ev(2 * k)));
    out[k]   = 0.5 * (ev(2 * k) + ev(2 * k + 1));
  }
  return out;
}

double singular_term(Potential const &V, double x)
{
  if (V.singularity_alpha == 0.0) { return 0.0; }
  double const l = std::log(std::abs(x));
  return (V.hard_edge ? 1.0 : 2.0) * V.singularity_alpha * l;
}

} // namespace

std::mt19937_64 stream_generator(std::uint64_t seed, std::uint64_t index)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

SampleBatch sample_gaussian(int beta, int n, int count, std::uint64_t seed, int workers)
{
  check_beta(beta);
  if (n < 1 || n > 512) { throw std::invalid_argument("n must lie in [1, 512]"); }
  if (count < 1 || count > 10000) { throw std::invalid_argument("count must lie in [1, 10000]"); }

  SampleBatch batch{beta, n, n, seed, std::vector<std::vector<double>>(count)};
  std::vector<double> mismatch(count, 0.0);
  detail::parallel_for(count, workers, [&](int k) {
    auto rng = stream_generator(seed, static_cast<std::uint64_t>(k));
    switch (beta) {
    case 1: batch.eigenvalue_sets[k] = goe(n, rng); break;
    case 2: batch.eigenvalue_sets[k] = gue(n, rng); break;
    default: batch.eigenvalue_sets[k] = gse(n, rng, mismatch[k]); break;
    }
  });
  batch.pair_mismatch = *std::max_element(mismatch.begin(), mismatch.end());
  return batch;
}

double invariant_log_density(Potential const &V, int beta, int N, std::vector<double> const &x)
{
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (V.hard_edge && x[i] < 0.0) { return -std::numeric_limits<double>::infinity(); }
    s += -N * V(x[i]) + singular_term(V, x[i]);
    for (std::size_t j = i + 1; j < x.size(); ++j) { s += beta * std::log(std::abs(x[i] - x[j])); }
  }
  return s;
}

MetropolisChain::MetropolisChain(Potential V, int beta, int N, std::vector<double> x, std::uint64_t seed)
    : V_(std::move(V)), beta_(beta), N_(N), x_(std::move(x)), rng_(stream_generator(seed, 0))
{
  check_beta(beta);
}

double MetropolisChain::coordinate_term(int i, double value) const
{
  if (V_.hard_edge && value < 0.0) { return -std::numeric_limits<double>::infinity(); }
  double s = -N_ * V_(value) + singular_term(V_, value);
  for (int j = 0; j < static_cast<int>(x_.size()); ++j) {
    if (j != i) { s += beta_ * std::log(std::abs(value - x_[j])); }
  }
  return s;
}

bool MetropolisChain::try_move(int i, double value)
{
  double const delta = coordinate_term(i, value) - coordinate_term(i, x_[i]);
  if (delta >= 0.0 || std::log(std::uniform_real_distribution<double>()(rng_)) < delta) {
    x_[i] = value;
    return true;
  }
  return false;
}

int MetropolisChain::sweep(double width)
{
  std::normal_distribution<double> g;
  int                              accepted = 0;
  for (int i = 0; i < static_cast<int>(x_.size()); ++i) { accepted += try_move(i, x_[i] + width * g(rng_)); }
  return accepted;
}

double MetropolisChain::log_density() const { return invariant_log_density(V_, beta_, N_, x_); }

SampleBatch sample_invariant(Potential const &V, int beta, int n, int N, int count, int steps, std::uint64_t seed,
                             int workers)
{
  check_beta(beta);
  V.validate();
  if (n < 1 || n > 128) { throw std::invalid_argument("n must lie in [1, 128]"); }
  if (N < 1) { throw std::invalid_argument("N must be positive"); }
  if (count < 1) { throw std::invalid_argument("count must be positive"); }
  if (steps < 2) { throw std::invalid_argument("steps must be at least 2"); }

  int const                                     chains = std::min(kChains, count);
  std::vector<std::vector<std::vector<double>>> draws(chains);
  std::vector<double>                           rates(chains);

  detail::parallel_for(chains, workers, [&](int c) {
    int const per = count / chains + (c < count % chains ? 1 : 0);

    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
      double const t = (i + 0.5) / n;
      x[i]           = V.hard_edge ? 2.0 * t : 2.0 * t - 1.0;
    }
    MetropolisChain chain(V, beta, N, std::move(x), seed + static_cast<std::uint64_t>(c) * 0x9E3779B97F4A7C15ull);

    double     log_width = std::log(1.0 / n);
    int const  burn      = steps / 2;
    for (int t = 0; t < burn; ++t) {
      double const rate = static_cast<double>(chain.sweep(std::exp(log_width))) / n;
      log_width += (rate - 0.3) / std::pow(1.0 + t, 0.6);
    }

    double const width   = std::exp(log_width);
    int const    spacing = std::max(1, (steps - burn) / per);
    long         accepted = 0, proposals = 0;
    for (int k = 0; k < per; ++k) {
      for (int s = 0; s < spacing; ++s) {
        accepted += chain.sweep(width);
        proposals += n;
      }
      auto state = chain.state();
      std::sort(state.begin(), state.end());
      draws[c].push_back(std::move(state));
    }
    rates[c] = static_cast<double>(accepted) / static_cast<double>(proposals);
  });

  SampleBatch batch{beta, n, N, seed, {}};
  for (int c = 0; c < chains; ++c) {
    if (rates[c] < 0.1 || rates[c] > 0.6) {
      throw AcceptanceRateError(rates[c], "Metropolis acceptance rate " + std::to_string(rates[c]) +
                                              " left [0.1, 0.6] in chain " + std::to_string(c));
    }
    batch.acceptance_rate += rates[c] / chains;
    for (auto &d : draws[c]) { batch.eigenvalue_sets.push_back(std::move(d)); }
  }
  return batch;
}

std::vector<double> Histogram::centers() const
{
  std::vector<double> c(density.size());
  for (std::size_t i = 0; i < c.size(); ++i) { c[i] = lo + (i + 0.5) * width(); }
  return c;
}

double Histogram::mass() const
{
  double m = 0.0;
  for (double d : density) { m += d; }
  return m * width() + outside;
}

Histogram empirical_density(SampleBatch const &batch, int bins, double lo, double hi)
{
  if (bins < 1 || bins > 1000) { throw std::invalid_argument("bins must lie in [1, 1000]"); }
  if (!(lo < hi)) { throw std::invalid_argument("empty histogram range"); }

  Histogram           h{lo, hi, std::vector<double>(bins, 0.0), 0.0};
  std::vector<long>   counts(bins, 0);
  long                total = 0, outside = 0;
  for (auto const &set : batch.eigenvalue_sets) {
    for (double x : set) {
      ++total;
      int const k = static_cast<int>(std::floor((x - lo) / (hi - lo) * bins));
      if (x < lo || x >= hi || k < 0 || k >= bins) {
        ++outside;
      } else {
        ++counts[k];
      }
    }
  }
  if (total == 0) { throw std::invalid_argument("empty batch"); }
  for (int k = 0; k < bins; ++k) {
    h.density[k] = static_cast<double>(counts[k]) / (static_cast<double>(total) * h.width());
  }
  h.outside = static_cast<double>(outside) / static_cast<double>(total);
  return h;
}

std::vector<double> local_statistics(SampleBatch const &batch, SpacingWindow const &window)
{
  if (!(window.density > 0.0)) { throw std::invalid_argument("window density must be positive"); }
  std::vector<double> s;
  double const        unfold = batch.n * window.density;
  for (auto const &set : batch.eigenvalue_sets) {
    for (std::size_t i = 0; i + 1 < set.size(); ++i) {
      if (set[i] >= window.lo && set[i + 1] <= window.hi) { s.push_back((set[i + 1] - set[i]) * unfold); }
    }
  }
  if (s.empty()) { throw std::runtime_error("no spacings inside the window"); }
  return s;
}

SampleBatch poisson_resample(SampleBatch const &batch, std::function<double(double)> const &rho, double lo, double hi,
                             std::uint64_t seed)
{
  double envelope = 0.0;
  for (int i = 0; i <= 512; ++i) { envelope = std::max(envelope, rho(lo + (hi - lo) * i / 512.0)); }
  if (!(envelope > 0.0)) { throw std::invalid_argument("density vanishes on the range"); }
  envelope *= 1.1;

  SampleBatch out = batch;
  for (std::size_t k = 0; k < out.eigenvalue_sets.size(); ++k) {
    auto                                   rng = stream_generator(seed, k);
    std::uniform_real_distribution<double> ux(lo, hi), uy(0.0, envelope);
    auto                                  &set = out.eigenvalue_sets[k];
    for (double &x : set) {
      do { x = ux(rng); } while (uy(rng) > rho(x));
    }
    std::sort(set.begin(), set.end());
  }
  out.seed = seed;
  return out;
}

KernelDistance compare_to_kernel(Histogram const &empirical, std::vector<double> const &predicted)
{
  if (predicted.size() != empirical.density.size()) { throw std::invalid_argument("grid mismatch"); }
  KernelDistance d;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    double const e = std::abs(empirical.density[i] - predicted[i]);
    d.sup          = std::max(d.sup, e);
    d.l1 += e * empirical.width();
  }
  return d;
}

} // namespace rmt
