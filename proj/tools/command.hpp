#pragma once

#include "rmt/equilibrium.hpp"
#include "rmt/orthopoly.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rmt::cli {

using Json = nlohmann::ordered_json;

// Bad user input; maps to exit code 2.
class ValidationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Grid
{
  double lo = 0.0, hi = 0.0;
  int    count = 0;

  std::vector<double> points() const;
  std::string         str() const;
};

Grid                parse_grid(std::string const &text);
std::pair<double, double> parse_interval(std::string const &text);
std::vector<double> parse_list(std::string const &text);
std::vector<int>    parse_int_list(std::string const &text);
Potential           parse_potential(std::string const &text, bool hard_edge, double alpha);
Json                potential_json(Potential const &V);

// What a command hands back: the resolved config, the results and diagnostics
// for json, and a csv table.
struct Report
{
  Json        config;
  Json        results;
  Json        diagnostics = Json::object();
  std::string csv_columns;
  std::string csv_rows;

  // Side outputs written next to the main one. Csv files get the same header block.
  struct File
  {
    std::string path, content;
    bool        csv = true;
  };
  std::vector<File> files;
};

struct Common
{
  std::string out    = "-";
  std::string format = "";
  int         workers = 0;
};

// Cached through RMT_CACHE_DIR when it is set.
EquilibriumMeasure cached_measure(Potential const &V);
RecurrenceTable    cached_table(WeightSpec const &w, int n_max);

using Runner = std::function<Report(Common const &)>;

// Each registers its options on the subcommand and returns the function that runs it.
Runner add_eqm(CLI::App &sub);
Runner add_kernel(CLI::App &sub);
Runner add_oppoly(CLI::App &sub);
Runner add_converge(CLI::App &sub);
Runner add_rh(CLI::App &sub);
Runner add_sample(CLI::App &sub);

// Shortest text that reads back to the same double.
std::string num(double x);

// Options shared by the commands that take a potential.
struct PotentialOptions
{
  std::string text;
  bool        hard_edge = false;
  double      alpha     = 0.0;

  void add(CLI::App &sub, std::string default_text, bool required)
  {
    text     = std::move(default_text);
    auto opt = sub.add_option("--potential,-p", text, "Ascending coefficients, e.g. 0,0,0.5");
    if (required) {
      opt->required();
    } else {
      opt->capture_default_str();
    }
    sub.add_flag("--hard-edge", hard_edge, "Restrict the support to [0, inf)");
    sub.add_option("--alpha", alpha, "Exponent of |x|^{2 alpha} (x^alpha at a hard edge)")->capture_default_str();
  }

  Potential parse() const { return parse_potential(text, hard_edge, alpha); }
};

inline void row(std::string &out, std::initializer_list<std::string> cells)
{
  bool first = true;
  for (auto const &c : cells) {
    if (!first) { out += ','; }
    out += c;
    first = false;
  }
  out += '\n';
}

} // namespace rmt::cli
