#include "doctest.h"
#include "rmt/serialize.hpp"

#include <sstream>

using namespace rmt;

TEST_CASE("equilibrium record round trip")
{
  auto const mu   = solve_equilibrium(Potential{{0, 0.2, 0.5, 0, 0.05}});
  auto const text = to_record(mu).dump();
  auto const back = measure_from_record(nlohmann::json::parse(text));
  CHECK(back.a == mu.a);
  CHECK(back.b == mu.b);
  CHECK(back.h == mu.h);
  CHECK(back.moments == mu.moments);
  CHECK(back.ell == mu.ell);
  CHECK(back.potential.coefficients == mu.potential.coefficients);
  CHECK_THROWS_AS(table_from_record(nlohmann::json::parse(text)), FormatError);
}

TEST_CASE("recurrence record round trip")
{
  auto const t    = recurrence_table(WeightSpec{Potential{{0, 0, 0.5}}, 16}, 20);
  auto       j    = nlohmann::json::parse(to_record(t).dump());
  auto const back = table_from_record(j);
  CHECK(back.a == t.a);
  CHECK(back.b == t.b);
  CHECK(back.gamma_sq == t.gamma_sq);
  CHECK(back.truncation == t.truncation);
  j["version"] = 2;
  CHECK_THROWS_AS(table_from_record(j), FormatError);
}

TEST_CASE("binary batch round trip")
{
  auto const        batch = sample_gaussian(1, 5, 7, 42);
  std::stringstream s;
  write_batch(s, batch);
  CHECK(s.str().size() == 4 + 4 + 12 + 16 + 7 * 5 * 8);
  auto const back = read_batch(s);
  CHECK(back.beta == 1);
  CHECK(back.n == 5);
  CHECK(back.seed == 42);
  CHECK(back.eigenvalue_sets == batch.eigenvalue_sets);

  std::stringstream cut(s.str().substr(0, 50));
  CHECK_THROWS_AS(read_batch(cut), FormatError);

  std::ostringstream csv;
  write_batch_csv(csv, batch);
  CHECK(csv.str().rfind("draw,index,value\n", 0) == 0);
}
