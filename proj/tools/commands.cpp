#include "command.hpp"

#include "rmt/detail/parallel.hpp"
#include "rmt/kernels.hpp"
#include "rmt/serialize.hpp"
#include "rmt/universality.hpp"

#include <memory>

namespace rmt::cli {

Runner add_eqm(CLI::App &sub)
{
  struct Options
  {
    PotentialOptions potential;
    std::string      grid;
    int              oracle = 0;
  };
  auto o = std::make_shared<Options>();
  o->potential.add(sub, "", true);
  sub.add_option("--grid", o->grid, "Density table grid lo:hi:count; defaults to the support with 201 points");
  sub.add_option("--oracle", o->oracle, "Grid size of the discrete energy cross-check, 0 to skip")
      ->capture_default_str()
      ->check(CLI::Range(0, 4000));

  return [o](Common const &) {
    Potential const V  = o->potential.parse();
    auto const      mu = cached_measure(V);
    Grid const      g  = o->grid.empty() ? Grid{mu.a, mu.b, 201} : parse_grid(o->grid);

    Report r;
    r.config = Json{{"potential", potential_json(V)}, {"grid", g.str()}, {"oracle", o->oracle}};

    Json points = Json::array();
    for (auto const &p : classify(mu, V)) {
      points.push_back(Json{{"location", p.location}, {"type", to_string(p.type)}, {"k", p.k}});
    }
    std::vector<double> xs = g.points(), rho;
    r.csv_columns          = "x,density";
    for (double x : xs) {
      rho.push_back(density(mu, x));
      row(r.csv_rows, {num(x), num(rho.back())});
    }
    r.results = Json{{"support", {mu.a, mu.b}},
                     {"h", mu.h},
                     {"moments", mu.moments},
                     {"ell", mu.ell},
                     {"singular_points", points},
                     {"density", Json{{"x", xs}, {"value", rho}}},
                     {"record", Json(to_record(mu))}};
    r.diagnostics["iterations"] = mu.iterations;

    if (o->oracle > 0) {
      double const pad = 0.1 * (mu.b - mu.a);
      double const lo  = V.hard_edge ? 0.0 : mu.a - pad;
      auto const   dm  = grid_energy_minimize(V, o->oracle, lo, mu.b + pad);
      double       sup = 0.0;
      for (std::size_t i = 0; i < dm.nodes.size(); ++i) {
        sup = std::max(sup, std::abs(dm.density_at(i) - density(mu, dm.nodes[i])));
      }
      r.diagnostics["oracle_sup_error"]  = sup;
      r.diagnostics["oracle_iterations"] = dm.iterations;
    }
    return r;
  };
}

Runner add_kernel(CLI::App &sub)
{
  struct Options
  {
    std::string family, grid, ygrid;
    double      alpha = 0.0, s = 0.0;
  };
  auto o = std::make_shared<Options>();
  sub.add_option("--family,-f", o->family,
                 "sine, airy, bessel-hard, bessel-origin, pearcey, sine-beta1, sine-beta4, airy-beta1, airy-beta4")
      ->required();
  sub.add_option("--grid,-g", o->grid, "x grid lo:hi:count")->required();
  sub.add_option("--ygrid", o->ygrid, "y grid lo:hi:count; defaults to the x grid");
  sub.add_option("--alpha", o->alpha, "Bessel parameter")->capture_default_str();
  sub.add_option("--s", o->s, "Pearcey parameter")->capture_default_str();

  return [o](Common const &common) {
    auto const family = parse_kernel_family(o->family);
    if (!family) { throw ValidationError("unknown kernel family '" + o->family + "'"); }
    Grid const gx = parse_grid(o->grid);
    Grid const gy = o->ygrid.empty() ? gx : parse_grid(o->ygrid);

    auto const handle = [&] {
      switch (*family) {
      case KernelFamily::Sine: return KernelHandle::sine();
      case KernelFamily::Airy: return KernelHandle::airy();
      case KernelFamily::BesselHard: return KernelHandle::bessel_hard(o->alpha);
      case KernelFamily::BesselOrigin: return KernelHandle::bessel_origin(o->alpha);
      case KernelFamily::Pearcey: return KernelHandle::pearcey(o->s);
      case KernelFamily::SineBeta1: return KernelHandle::sine_beta(1);
      case KernelFamily::SineBeta4: return KernelHandle::sine_beta(4);
      case KernelFamily::AiryBeta1: return KernelHandle::airy_beta(1);
      case KernelFamily::AiryBeta4: return KernelHandle::airy_beta(4);
      }
      throw ValidationError("unsupported family");
    }();
    bool const matrix = handle.arity() == KernelArity::Matrix2x2;

    Report r;
    r.config = Json{{"family", std::string(to_string(*family))}, {"grid", gx.str()}, {"ygrid", gy.str()}};
    if (handle.alpha()) { r.config["alpha"] = *handle.alpha(); }
    if (handle.s()) { r.config["s"] = *handle.s(); }

    auto const xs = gx.points(), ys = gy.points();
    int const  m  = static_cast<int>(xs.size());
    std::vector<std::string> text(m);
    std::vector<Json>        values(m);
    detail::parallel_for(m, common.workers, [&](int i) {
      Json line = Json::array();
      for (double y : ys) {
        if (matrix) {
          Eigen::Matrix2d const k = handle.matrix(xs[i], y);
          row(text[i], {num(xs[i]), num(y), num(k(0, 0)), num(k(0, 1)), num(k(1, 0)), num(k(1, 1))});
          line.push_back({k(0, 0), k(0, 1), k(1, 0), k(1, 1)});
        } else {
          double const k = handle(xs[i], y);
          row(text[i], {num(xs[i]), num(y), num(k)});
          line.push_back(k);
        }
      }
      values[i] = std::move(line);
    });

    r.csv_columns = matrix ? "x,y,k11,k12,k21,k22" : "x,y,value";
    for (auto const &t : text) { r.csv_rows += t; }
    r.results = Json{{"x", xs}, {"y", ys}, {"values", values}};
    r.diagnostics["points"] = xs.size() * ys.size();
    return r;
  };
}

Runner add_oppoly(CLI::App &sub)
{
  struct Options
  {
    PotentialOptions potential;
    int              n = 0, N = 0, n_max = 0;
    double           truncation = 0.0;
    std::string      mode, grid;
    std::optional<double> x_star;
  };
  auto o = std::make_shared<Options>();
  o->potential.add(sub, "0,0,0.5", false);
  sub.add_option("--n,-n", o->n, "Kernel size n")->required()->check(CLI::Range(1, 512));
  sub.add_option("--N", o->N, "Weight exp(-N V); defaults to n")->check(CLI::Range(1, 100000));
  sub.add_option("--n-max", o->n_max, "Table length; defaults to n")->check(CLI::Range(1, 512));
  sub.add_option("--truncation", o->truncation, "Window [-L, L]; 0 chooses it")->capture_default_str();
  sub.add_option("--mode", o->mode, "Emit the rescaled kernel for bulk, edge, hard or origin");
  sub.add_option("--grid,-g", o->grid, "u = v grid lo:hi:count for --mode");
  sub.add_option("--x-star", o->x_star, "Bulk point; defaults to the middle of the support");

  return [o](Common const &common) {
    Potential const  V = o->potential.parse();
    int const        N = o->N > 0 ? o->N : o->n;
    int const        n_max = o->n_max > 0 ? o->n_max : o->n;
    if (n_max < o->n) { throw ValidationError("--n-max must be at least --n"); }
    WeightSpec const w{V, N, o->truncation};

    Report r;
    r.config = Json{{"potential", potential_json(V)}, {"n", o->n}, {"N", N}, {"n_max", n_max},
                    {"truncation", o->truncation}};
    if (o->mode.empty()) {
      if (!o->grid.empty()) { throw ValidationError("--grid needs --mode"); }
      auto const t = cached_table(w, n_max);
      r.csv_columns = "k,a,b,gamma_sq";
      for (int k = 0; k <= n_max; ++k) { row(r.csv_rows, {std::to_string(k), num(t.a[k]), num(t.b[k]), num(t.gamma_sq[k])}); }
      r.results                    = Json(to_record(t));
      r.diagnostics["truncation"]  = t.truncation;
      return r;
    }

    auto const mode = parse_scaling_mode(o->mode);
    if (!mode) { throw ValidationError("unknown mode '" + o->mode + "'"); }
    if (o->grid.empty()) { throw ValidationError("--mode needs --grid"); }
    Grid const g = parse_grid(o->grid);
    r.config["mode"] = std::string(to_string(*mode));
    r.config["grid"] = g.str();
    if (o->x_star) { r.config["x_star"] = *o->x_star; }

    auto const mu     = cached_measure(V);
    auto const t      = cached_table(w, n_max);
    auto const window = universality_window(mu, *mode, g.points(), o->x_star);
    auto const us     = g.points();
    int const  m      = static_cast<int>(us.size());
    std::vector<std::vector<double>> values(m);
    detail::parallel_for(m, common.workers, [&](int i) {
      ScalingWindow one = window;
      one.u             = {us[i]};
      values[i]         = rescaled_kernel(t, w, o->n, one);
    });

    r.csv_columns = "u,v,value,limit";
    Json limits   = Json::array();
    for (int i = 0; i < m; ++i) {
      Json line = Json::array();
      for (int j = 0; j < m; ++j) {
        double const lim = universal_kernel(*mode, V.singularity_alpha, us[i], us[j]);
        row(r.csv_rows, {num(us[i]), num(us[j]), num(values[i][j]), num(lim)});
        line.push_back(lim);
      }
      limits.push_back(std::move(line));
    }
    r.results = Json{{"u", us}, {"values", values}, {"limit", limits}};
    r.diagnostics["center"]      = window.center;
    r.diagnostics["c"]           = window.c;
    r.diagnostics["exponent"]    = window.exponent;
    r.diagnostics["scale"]       = window.scale(o->n);
    r.diagnostics["truncation"]  = t.truncation;
    return r;
  };
}

} // namespace rmt::cli
