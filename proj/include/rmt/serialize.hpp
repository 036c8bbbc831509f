#pragma once

#include "rmt/equilibrium.hpp"
#include "rmt/mc.hpp"
#include "rmt/orthopoly.hpp"

#include <json.hpp>

#include <iosfwd>
#include <stdexcept>

namespace rmt {

class FormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Versioned text records. Doubles are written with round-trip precision.
nlohmann::json     to_record(EquilibriumMeasure const &mu);
nlohmann::json     to_record(RecurrenceTable const &t);
EquilibriumMeasure measure_from_record(nlohmann::json const &j);
RecurrenceTable    table_from_record(nlohmann::json const &j);

// Binary batch: "RMTB", u32 version, i32 beta, i32 n, i32 N, u64 seed,
// u64 count, then count * n little-endian doubles.
void        write_batch(std::ostream &out, SampleBatch const &batch);
SampleBatch read_batch(std::istream &in);

// CSV: draw, index, value.
void write_batch_csv(std::ostream &out, SampleBatch const &batch);
// CSV: bin_center, density.
void write_histogram_csv(std::ostream &out, Histogram const &h);

} // namespace rmt
