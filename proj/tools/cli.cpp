#include "cli.hpp"

#include "command.hpp"
#include "rmt/mc.hpp"
#include "rmt/serialize.hpp"
#include "rmt/universality.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>

namespace rmt::cli {

namespace fs = std::filesystem;

std::string num(double x)
{
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

namespace {

double parse_double(std::string const &s, std::string const &what)
{
  double v       = 0.0;
  auto const *b  = s.data();
  auto const *e  = s.data() + s.size();
  if (!s.empty() && *b == '+') { ++b; }
  auto const [p, ec] = std::from_chars(b, e, v);
  if (s.empty() || ec != std::errc() || p != e || !std::isfinite(v)) {
    throw ValidationError("malformed number '" + s + "' in " + what);
  }
  return v;
}

std::vector<std::string> split(std::string const &text, char sep)
{
  std::vector<std::string> parts;
  std::string              item;
  std::istringstream       in(text);
  while (std::getline(in, item, sep)) { parts.push_back(item); }
  if (!text.empty() && text.back() == sep) { parts.emplace_back(); }
  return parts;
}

} // namespace

std::vector<double> Grid::points() const { return linspace(lo, hi, count); }

std::string Grid::str() const { return num(lo) + ":" + num(hi) + ":" + std::to_string(count); }

Grid parse_grid(std::string const &text)
{
  auto const parts = split(text, ':');
  if (parts.size() != 3) { throw ValidationError("grid '" + text + "' is not lo:hi:count"); }
  Grid         g{parse_double(parts[0], "grid"), parse_double(parts[1], "grid"), 0};
  double const c = parse_double(parts[2], "grid");
  if (c != std::floor(c) || c < 1 || c > 100000) { throw ValidationError("grid count must be an integer in [1, 1e5]"); }
  g.count = static_cast<int>(c);
  if (!(g.lo < g.hi) && !(g.count == 1 && g.lo == g.hi)) { throw ValidationError("grid needs lo < hi"); }
  return g;
}

std::pair<double, double> parse_interval(std::string const &text)
{
  auto const parts = split(text, ':');
  if (parts.size() != 2) { throw ValidationError("interval '" + text + "' is not lo:hi"); }
  double const lo = parse_double(parts[0], "interval"), hi = parse_double(parts[1], "interval");
  if (!(lo < hi)) { throw ValidationError("interval needs lo < hi"); }
  return {lo, hi};
}

std::vector<double> parse_list(std::string const &text)
{
  std::vector<double> v;
  for (auto const &p : split(text, ',')) { v.push_back(parse_double(p, "'" + text + "'")); }
  if (v.empty()) { throw ValidationError("empty list"); }
  return v;
}

std::vector<int> parse_int_list(std::string const &text)
{
  std::vector<int> v;
  for (double x : parse_list(text)) {
    if (x != std::floor(x) || x < 1 || x > 1e6) { throw ValidationError("'" + text + "' must list positive integers"); }
    v.push_back(static_cast<int>(x));
  }
  return v;
}

Potential parse_potential(std::string const &text, bool hard_edge, double alpha)
{
  Potential V{parse_list(text), hard_edge, alpha};
  try {
    V.validate();
  } catch (std::invalid_argument const &e) {
    throw ValidationError(std::string("potential: ") + e.what());
  }
  return V;
}

Json potential_json(Potential const &V)
{
  return Json{{"coefficients", V.coefficients}, {"hard_edge", V.hard_edge}, {"alpha", V.singularity_alpha}};
}

namespace {

std::optional<fs::path> cache_file(std::string const &key, char const *kind)
{
  char const *dir = std::getenv("RMT_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') { return std::nullopt; }
  char name[64];
  std::snprintf(name, sizeof name, "%s-%016zx.json", kind, std::hash<std::string>{}(key));
  return fs::path(dir) / name;
}

std::optional<nlohmann::json> cache_load(fs::path const &file, std::string const &key)
{
  std::ifstream in(file);
  if (!in) { return std::nullopt; }
  auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || j.value("key", "") != key) { return std::nullopt; }
  return j.at("record");
}

void cache_store(fs::path const &file, std::string const &key, nlohmann::json record)
{
  std::error_code ec;
  fs::create_directories(file.parent_path(), ec);
  auto const    tmp = fs::path(file).concat(".tmp");
  std::ofstream out(tmp);
  if (!out) { return; }
  out << nlohmann::json{{"key", key}, {"record", std::move(record)}}.dump() << '\n';
  out.close();
  fs::rename(tmp, file, ec);
}

} // namespace

EquilibriumMeasure cached_measure(Potential const &V)
{
  std::string const key  = Json{{"potential", potential_json(V)}}.dump();
  auto const        file = cache_file(key, "measure");
  if (file) {
    if (auto r = cache_load(*file, key)) {
      try {
        return measure_from_record(*r);
      } catch (FormatError const &) {
      }
    }
  }
  auto mu = solve_equilibrium(V);
  if (file) { cache_store(*file, key, to_record(mu)); }
  return mu;
}

RecurrenceTable cached_table(WeightSpec const &w, int n_max)
{
  std::string const key =
      Json{{"potential", potential_json(w.potential)}, {"N", w.N}, {"n_max", n_max}, {"truncation", w.truncation}}
          .dump();
  auto const file = cache_file(key, "table");
  if (file) {
    if (auto r = cache_load(*file, key)) {
      try {
        return table_from_record(*r);
      } catch (FormatError const &) {
      }
    }
  }
  auto t = recurrence_table(w, n_max);
  if (file) { cache_store(*file, key, to_record(t)); }
  return t;
}

namespace {

std::string timestamp()
{
  std::time_t const now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm           utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", &utc);
  return buf;
}

Json resolved_config(Report const &r, std::string const &command)
{
  Json config       = r.config;
  config["command"] = command;
  config["version"] = RMT_VERSION;
  return config;
}

std::string csv_header(Json const &config)
{
  return "# rmtlab " + std::string(RMT_VERSION) + "\n# config: " + config.dump() + "\n# timestamp: " + timestamp() +
         "\n";
}

std::string render(Report const &r, Json const &config, std::string const &format)
{
  if (format == "json") {
    Json diagnostics         = r.diagnostics;
    diagnostics["timestamp"] = timestamp();
    Json doc{{"config", config}, {"results", r.results}, {"diagnostics", diagnostics}};
    return doc.dump(2) + "\n";
  }
  return csv_header(config) + r.csv_columns + "\n" + r.csv_rows;
}

// Writes through a temporary file so a failed run leaves nothing behind.
void write_output(std::string const &path, std::string const &text, std::ostream &out)
{
  if (path == "-") {
    out << text;
    return;
  }
  auto const    tmp = path + ".tmp";
  std::ofstream f(tmp, std::ios::binary);
  if (!f) { throw ValidationError("cannot open '" + path + "' for writing"); }
  f << text;
  f.close();
  if (!f) { throw ValidationError("failed writing '" + path + "'"); }
  fs::rename(tmp, path);
}

} // namespace

int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Random-matrix universality lab", "rmtlab"};
  app.set_version_flag("--version", std::string(RMT_VERSION));
  app.require_subcommand(1);

  Common                                                common;
  std::vector<std::pair<CLI::App *, Runner>> commands;
  struct Entry
  {
    char const *name, *description;
    Runner (*add)(CLI::App &);
  };
  Entry const entries[] = {
      {"eqm", "Equilibrium measure and singular-point report", add_eqm},
      {"kernel", "Universal kernel tables", add_kernel},
      {"oppoly", "Recurrence tables and finite-n kernels", add_oppoly},
      {"converge", "Rescaled kernel against its universal limit across n", add_converge},
      {"rh", "Riemann-Hilbert parametrix diagnostics", add_rh},
      {"sample", "Monte Carlo batches, histograms and spacings", add_sample},
  };
  for (auto const &entry : entries) {
    auto *sub    = app.add_subcommand(entry.name, entry.description);
    auto  runner = entry.add(*sub);
    sub->add_option("--out,-o", common.out, "Output path, - for stdout")->capture_default_str();
    sub->add_option("--format", common.format, "csv or json; defaults from the output extension")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", common.workers, "Worker threads, 0 for all cores")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    commands.emplace_back(sub, std::move(runner));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (CLI::ParseError const &e) {
    int const code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto const &[sub, runner] : commands) {
      if (!sub->parsed()) { continue; }
      std::string format = common.format;
      if (format.empty()) { format = fs::path(common.out).extension() == ".json" ? "json" : "csv"; }
      Report const r      = runner(common);
      Json const   config = resolved_config(r, sub->get_name());
      for (auto const &f : r.files) { write_output(f.path, f.csv ? csv_header(config) + f.content : f.content, out); }
      write_output(common.out, render(r, config, format), out);
    }
    return 0;
  } catch (ValidationError const &e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (std::invalid_argument const &e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (std::domain_error const &e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (std::out_of_range const &e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (MultiCutError const &e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (std::exception const &e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}

} // namespace rmt::cli
