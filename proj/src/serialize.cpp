#include "rmt/serialize.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <iomanip>
#include <istream>
#include <ostream>

namespace rmt {

namespace {

constexpr int  kRecordVersion = 1;
constexpr char kMagic[4]      = {'R', 'M', 'T', 'B'};

void check_header(nlohmann::json const &j, char const *kind)
{
  if (!j.is_object() || j.value("kind", "") != kind) { throw FormatError(std::string("expected a ") + kind + " record"); }
  if (j.value("version", 0) != kRecordVersion) { throw FormatError("unsupported record version"); }
}

nlohmann::json potential_record(Potential const &V)
{
  return {{"coefficients", V.coefficients}, {"hard_edge", V.hard_edge}, {"alpha", V.singularity_alpha}};
}

Potential potential_from(nlohmann::json const &j)
{
  return Potential{j.at("coefficients").get<std::vector<double>>(), j.at("hard_edge").get<bool>(),
                   j.at("alpha").get<double>()};
}

template <class T>
void put(std::ostream &out, T v)
{
  auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(v);
  if constexpr (std::endian::native == std::endian::big) { std::reverse(bytes.begin(), bytes.end()); }
  out.write(bytes.data(), bytes.size());
}

template <class T>
T get(std::istream &in)
{
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), bytes.size())) { throw FormatError("truncated batch record"); }
  if constexpr (std::endian::native == std::endian::big) { std::reverse(bytes.begin(), bytes.end()); }
  return std::bit_cast<T>(bytes);
}

} // namespace

nlohmann::json to_record(EquilibriumMeasure const &mu)
{
  return {{"kind", "equilibrium_measure"},
          {"version", kRecordVersion},
          {"potential", potential_record(mu.potential)},
          {"support", {mu.a, mu.b}},
          {"h", mu.h},
          {"moments", mu.moments},
          {"ell", mu.ell},
          {"iterations", mu.iterations}};
}

nlohmann::json to_record(RecurrenceTable const &t)
{
  return {{"kind", "recurrence_table"},
          {"version", kRecordVersion},
          {"N", t.N},
          {"n_max", t.n_max},
          {"truncation", t.truncation},
          {"a", t.a},
          {"b", t.b},
          {"gamma_sq", t.gamma_sq},
          {"log_gamma_sq", t.log_gamma_sq}};
}

EquilibriumMeasure measure_from_record(nlohmann::json const &j)
{
  check_header(j, "equilibrium_measure");
  try {
    EquilibriumMeasure mu;
    mu.potential  = potential_from(j.at("potential"));
    mu.a          = j.at("support").at(0).get<double>();
    mu.b          = j.at("support").at(1).get<double>();
    mu.h          = j.at("h").get<std::vector<double>>();
    mu.moments    = j.at("moments").get<std::vector<double>>();
    mu.ell        = j.at("ell").get<double>();
    mu.iterations = j.at("iterations").get<int>();
    return mu;
  } catch (nlohmann::json::exception const &e) {
    throw FormatError(e.what());
  }
}

RecurrenceTable table_from_record(nlohmann::json const &j)
{
  check_header(j, "recurrence_table");
  try {
    RecurrenceTable t;
    t.N            = j.at("N").get<int>();
    t.n_max        = j.at("n_max").get<int>();
    t.truncation   = j.at("truncation").get<double>();
    t.a            = j.at("a").get<std::vector<double>>();
    t.b            = j.at("b").get<std::vector<double>>();
    t.gamma_sq     = j.at("gamma_sq").get<std::vector<double>>();
    t.log_gamma_sq = j.at("log_gamma_sq").get<std::vector<double>>();
    auto const size = static_cast<std::size_t>(t.n_max) + 1;
    if (t.a.size() != size || t.b.size() != size || t.gamma_sq.size() != size || t.log_gamma_sq.size() != size) {
      throw FormatError("recurrence table sizes disagree with n_max");
    }
    return t;
  } catch (nlohmann::json::exception const &e) {
    throw FormatError(e.what());
  }
}

void write_batch(std::ostream &out, SampleBatch const &batch)
{
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kRecordVersion);
  put<std::int32_t>(out, batch.beta);
  put<std::int32_t>(out, batch.n);
  put<std::int32_t>(out, batch.N);
  put<std::uint64_t>(out, batch.seed);
  put<std::uint64_t>(out, batch.eigenvalue_sets.size());
  for (auto const &set : batch.eigenvalue_sets) {
    if (static_cast<int>(set.size()) != batch.n) { throw std::invalid_argument("eigenvalue set of wrong length"); }
    for (double x : set) { put(out, x); }
  }
}

SampleBatch read_batch(std::istream &in)
{
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) { throw FormatError("not a batch record"); }
  if (get<std::uint32_t>(in) != kRecordVersion) { throw FormatError("unsupported batch version"); }
  SampleBatch b;
  b.beta           = get<std::int32_t>(in);
  b.n              = get<std::int32_t>(in);
  b.N              = get<std::int32_t>(in);
  b.seed           = get<std::uint64_t>(in);
  auto const count = get<std::uint64_t>(in);
  if (b.n < 0 || count > 100'000'000) { throw FormatError("implausible batch header"); }
  b.eigenvalue_sets.assign(count, std::vector<double>(b.n));
  for (auto &set : b.eigenvalue_sets) {
    for (double &x : set) { x = get<double>(in); }
  }
  return b;
}

void write_batch_csv(std::ostream &out, SampleBatch const &batch)
{
  out << "draw,index,value\n" << std::setprecision(17);
  for (std::size_t k = 0; k < batch.eigenvalue_sets.size(); ++k) {
    auto const &set = batch.eigenvalue_sets[k];
    for (std::size_t i = 0; i < set.size(); ++i) { out << k << ',' << i << ',' << set[i] << '\n'; }
  }
}

void write_histogram_csv(std::ostream &out, Histogram const &h)
{
  out << "bin_center,density\n" << std::setprecision(17);
  auto const c = h.centers();
  for (std::size_t i = 0; i < c.size(); ++i) { out << c[i] << ',' << h.density[i] << '\n'; }
}

} // namespace rmt
