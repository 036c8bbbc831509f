#include "command.hpp"

#include "rmt/mc.hpp"
#include "rmt/rh.hpp"
#include "rmt/serialize.hpp"
#include "rmt/universality.hpp"

#include <Eigen/LU>

#include <chrono>
#include <memory>
#include <sstream>

namespace rmt::cli {

namespace {

Grid default_grid(ScalingMode mode)
{
  switch (mode) {
  case ScalingMode::Bulk: return {-2.0, 2.0, 41};
  case ScalingMode::Edge: return {-4.0, 4.0, 41};
  case ScalingMode::Hard: return {0.2, 8.0, 40};
  case ScalingMode::Origin: return {0.075, 3.0, 40};
  }
  return {};
}

double fraction_below(std::vector<double> const &s, double t)
{
  return static_cast<double>(std::count_if(s.begin(), s.end(), [t](double v) { return v < t; })) /
         static_cast<double>(s.size());
}

} // namespace

Runner add_converge(CLI::App &sub)
{
  struct Options
  {
    PotentialOptions      potential;
    std::string           mode, n = "32,64,128", grid;
    std::optional<double> x_star;
    bool                  no_timing = false;
  };
  auto o = std::make_shared<Options>();
  o->potential.add(sub, "", false);
  sub.add_option("--mode,-m", o->mode, "bulk, edge, hard or origin")->required();
  sub.add_option("--n,-n", o->n, "Comma-separated sizes")->capture_default_str();
  sub.add_option("--grid,-g", o->grid, "u = v grid lo:hi:count; a default per mode");
  sub.add_option("--x-star", o->x_star, "Bulk point; defaults to the middle of the support");
  sub.add_flag("--no-timing", o->no_timing, "Write runtime_seconds as 0 for byte-identical output");

  return [o](Common const &common) {
    auto const mode = parse_scaling_mode(o->mode);
    if (!mode) { throw ValidationError("unknown mode '" + o->mode + "'"); }
    Potential const V = o->potential.text.empty() ? default_potential(*mode, o->potential.alpha)
                                                  : o->potential.parse();
    auto const ns = parse_int_list(o->n);
    for (int n : ns) {
      if (n > 512) { throw ValidationError("n must not exceed 512"); }
    }
    Grid const g    = o->grid.empty() ? default_grid(*mode) : parse_grid(o->grid);
    auto const grid = g.points();

    Report r;
    r.config = Json{{"potential", potential_json(V)}, {"mode", std::string(to_string(*mode))}, {"n", ns},
                    {"grid", g.str()}, {"timing", !o->no_timing}};
    if (o->x_star) { r.config["x_star"] = *o->x_star; }

    auto const mu = cached_measure(V);
    // fail on a bad window before any expensive work
    universality_window(mu, *mode, grid, o->x_star);

    r.csv_columns = "n,mode,sup_error,l1_error,runtime_seconds";
    r.results     = Json::array();
    Json   ratios = Json::array();
    double previous = 0.0;
    bool   decreasing = true;
    for (int n : ns) {
      auto const       start = std::chrono::steady_clock::now();
      WeightSpec const w{V, n};
      auto const       t = cached_table(w, n);
      auto const       e = universality_error(t, w, mu, *mode, n, grid, o->x_star, common.workers);
      double const     seconds =
          o->no_timing ? 0.0 : std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      row(r.csv_rows, {std::to_string(n), std::string(to_string(*mode)), num(e.sup), num(e.l1), num(seconds)});
      r.results.push_back(Json{{"n", n}, {"sup_error", e.sup}, {"l1_error", e.l1}, {"runtime_seconds", seconds}});
      if (previous > 0.0) {
        ratios.push_back(e.sup / previous);
        decreasing = decreasing && e.sup < previous;
      }
      previous = e.sup;
    }
    r.diagnostics["sup_ratios"]          = ratios;
    r.diagnostics["strictly_decreasing"] = decreasing;
    return r;
  };
}

Runner add_rh(CLI::App &sub)
{
  struct Options
  {
    PotentialOptions potential;
    std::string      n = "64,128";
    double           delta = 0.0;
  };
  auto o = std::make_shared<Options>();
  o->potential.add(sub, "0,0,0.5", false);
  sub.add_option("--n,-n", o->n, "Comma-separated sizes")->capture_default_str();
  sub.add_option("--delta", o->delta, "Endpoint disk radius; 0 chooses it")->capture_default_str();

  return [o](Common const &) {
    Potential const V  = o->potential.parse();
    auto const      ns = parse_int_list(o->n);
    auto const      mu = cached_measure(V);

    Report r;
    r.config = Json{{"potential", potential_json(V)}, {"n", ns}, {"delta", o->delta}};

    r.csv_columns = "n,endpoint,matching_error,ratio";
    r.results     = Json::array();
    double prev[2] = {0.0, 0.0};
    for (int n : ns) {
      auto const ctx = make_descent_context(mu, n, o->delta);
      for (int side = 0; side < 2; ++side) {
        auto const   at    = side == 0 ? Endpoint::Right : Endpoint::Left;
        double const e     = matching_error(ctx, at);
        std::string  ratio = prev[side] > 0.0 ? num(e / prev[side]) : "";
        row(r.csv_rows, {std::to_string(n), side == 0 ? "right" : "left", num(e), ratio});
        Json entry{{"n", n}, {"endpoint", side == 0 ? "right" : "left"}, {"matching_error", e}};
        if (prev[side] > 0.0) { entry["ratio"] = e / prev[side]; }
        r.results.push_back(entry);
        prev[side] = e;
      }
    }

    // identity checks at the first size
    auto const ctx = make_descent_context(mu, ns.front(), o->delta);
    double const a = mu.a, b = mu.b, half = 0.5 * (b - a);
    using cd       = std::complex<double>;
    double det_m = 0.0, det_a = 0.0, jumps = 0.0, t_jump = 0.0;
    for (cd z : {cd(a + 0.6 * half, 0.3 * half), cd(a - half, 0.1 * half), cd(b + 0.2 * half, -0.5 * half)}) {
      det_m = std::max(det_m, std::abs(outer_parametrix(ctx, z).determinant() - 1.0));
    }
    for (cd z : {cd(1, 1), cd(-2, 0.5), cd(-1, -3), cd(0.3, -0.2)}) {
      det_a = std::max(det_a, std::abs(airy_model(z).determinant() - 1.0));
    }
    for (int ray = 0; ray < 4; ++ray) {
      for (double rad : {0.7, 2.0}) { jumps = std::max(jumps, airy_model_jump_residual(ray, rad)); }
    }
    for (double t : {0.2, 0.5, 0.8}) { t_jump = std::max(t_jump, t_jump_factorization_residual(ctx, a + t * (b - a))); }
    auto const [a_inf, b_inf] = asymptotic_recurrence(ctx);

    r.diagnostics["delta"]                    = ctx.delta;
    r.diagnostics["lens_height"]              = ctx.lens_height;
    r.diagnostics["det_outer_max_error"]      = det_m;
    r.diagnostics["det_airy_max_error"]       = det_a;
    r.diagnostics["airy_jump_max_residual"]   = jumps;
    r.diagnostics["t_jump_max_residual"]      = t_jump;
    r.diagnostics["prefactor_residue"]        = prefactor_residue(ctx, ctx.delta / 2);
    r.diagnostics["airy_asymptotic_residual"] = Json{{"10", airy_model_asymptotic_residual(10.0)},
                                                     {"20", airy_model_asymptotic_residual(20.0)},
                                                     {"40", airy_model_asymptotic_residual(40.0)}};
    r.diagnostics["a_inf"]                    = a_inf;
    r.diagnostics["b_inf"]                    = b_inf;
    return r;
  };
}

Runner add_sample(CLI::App &sub)
{
  struct Options
  {
    PotentialOptions potential;
    std::string      ensemble = "gaussian", hist = "-2.2:2.2:44", window = "-0.5:0.5";
    std::string      batch_out, batch_csv;
    int              beta = 2, n = 0, N = 0, count = 0, steps = 2000;
    std::uint64_t    seed = 0;
  };
  auto o = std::make_shared<Options>();
  o->potential.add(sub, "0,0,0.5", false);
  sub.add_option("--ensemble,-e", o->ensemble, "gaussian or invariant")
      ->capture_default_str()
      ->check(CLI::IsMember({"gaussian", "invariant"}));
  sub.add_option("--beta,-b", o->beta, "1, 2 or 4")->capture_default_str()->check(CLI::IsMember({1, 2, 4}));
  sub.add_option("--n,-n", o->n, "Matrix size")->required()->check(CLI::Range(1, 512));
  sub.add_option("--N", o->N, "Potential scale for the invariant ensemble; defaults to n")->check(CLI::PositiveNumber);
  sub.add_option("--count,-c", o->count, "Number of draws")->required()->check(CLI::Range(1, 10000));
  sub.add_option("--seed,-s", o->seed, "Random seed")->capture_default_str();
  sub.add_option("--steps", o->steps, "Metropolis sweeps per chain")->capture_default_str()->check(CLI::Range(2, 10000000));
  sub.add_option("--hist", o->hist, "Histogram lo:hi:bins")->capture_default_str();
  sub.add_option("--window", o->window, "Spacing window lo:hi")->capture_default_str();
  sub.add_option("--batch-out", o->batch_out, "Binary batch record");
  sub.add_option("--batch-csv", o->batch_csv, "Batch as csv (draw, index, value)");

  return [o](Common const &common) {
    Potential const V = o->potential.parse();
    Grid const      h = parse_grid(o->hist);
    if (h.count > 1000) { throw ValidationError("at most 1000 histogram bins"); }
    auto const [w_lo, w_hi] = parse_interval(o->window);
    bool const invariant = o->ensemble == "invariant";
    int const  N         = o->N > 0 ? o->N : o->n;
    if (invariant && o->n > 128) { throw ValidationError("the invariant sampler takes n <= 128"); }

    Report r;
    r.config = Json{{"ensemble", o->ensemble}, {"beta", o->beta}, {"n", o->n}, {"count", o->count}, {"seed", o->seed},
                    {"hist", h.str()}, {"window", {w_lo, w_hi}}};
    if (invariant) {
      r.config["potential"] = potential_json(V);
      r.config["N"]         = N;
      r.config["steps"]     = o->steps;
    }

    auto const batch = invariant ? sample_invariant(V, o->beta, o->n, N, o->count, o->steps, o->seed, common.workers)
                                 : sample_gaussian(o->beta, o->n, o->count, o->seed, common.workers);

    // The limiting density: the Gaussian ensembles all fill [-2, 2]; the
    // invariant one follows the potential 2 N V / (beta n).
    Potential limit = invariant ? V : Potential{{0.0, 0.0, 0.5}};
    if (invariant) {
      for (double &c : limit.coefficients) { c *= 2.0 * N / (o->beta * o->n); }
    }
    auto const mu = cached_measure(limit);

    auto const          hist = empirical_density(batch, h.count, h.lo, h.hi);
    std::vector<double> target;
    for (double c : hist.centers()) { target.push_back(density(mu, c)); }
    auto const dist = compare_to_kernel(hist, target);

    SpacingWindow const window{w_lo, w_hi, density(mu, 0.5 * (w_lo + w_hi))};
    auto const          spacings = local_statistics(batch, window);
    auto const poisson = poisson_resample(batch, [&](double x) { return density(mu, x); }, mu.a, mu.b, o->seed + 1);
    auto const null_spacings = local_statistics(poisson, window);
    double     mean          = 0.0;
    for (double s : spacings) { mean += s; }
    mean /= static_cast<double>(spacings.size());

    r.csv_columns = "bin_center,density";
    auto const centers = hist.centers();
    for (std::size_t i = 0; i < centers.size(); ++i) { row(r.csv_rows, {num(centers[i]), num(hist.density[i])}); }
    r.results = Json{{"histogram", Json{{"bin_center", centers}, {"density", hist.density}, {"outside", hist.outside}}},
                     {"density_distance", Json{{"sup", dist.sup}, {"l1", dist.l1}}},
                     {"spacings", Json{{"count", spacings.size()},
                                       {"mean", mean},
                                       {"fraction_below_0.05", fraction_below(spacings, 0.05)},
                                       {"fraction_below_0.2", fraction_below(spacings, 0.2)}}},
                     {"poisson_spacings", Json{{"count", null_spacings.size()},
                                               {"fraction_below_0.05", fraction_below(null_spacings, 0.05)},
                                               {"fraction_below_0.2", fraction_below(null_spacings, 0.2)}}}};
    if (invariant) { r.diagnostics["acceptance_rate"] = batch.acceptance_rate; }
    if (o->beta == 4 && !invariant) { r.diagnostics["pair_mismatch"] = batch.pair_mismatch; }
    r.diagnostics["unfolding_density"] = window.density;

    if (!o->batch_out.empty()) {
      std::ostringstream s;
      write_batch(s, batch);
      r.files.push_back({o->batch_out, s.str(), false});
    }
    if (!o->batch_csv.empty()) {
      std::ostringstream s;
      write_batch_csv(s, batch);
      r.files.push_back({o->batch_csv, s.str(), true});
    }
    return r;
  };
}

} // namespace rmt::cli
