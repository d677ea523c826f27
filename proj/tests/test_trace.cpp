#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sepdec/rng.hpp"
#include "sepdec/trace.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <sstream>

using namespace sepdec;

TEST_CASE("doubles survive formatting bit for bit") {
  Rng rng(51);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::ldexp(rng.normal(), static_cast<int>(rng.uniform(-300, 300)));
    const double back = std::strtod(format_double(x).c_str(), nullptr);
    CHECK(std::memcmp(&x, &back, sizeof x) == 0);
  }
  for (double x : {0.0, 1.0, 0.1, 1e-300, std::numeric_limits<double>::denorm_min(),
                   std::numeric_limits<double>::max()})
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
}

TEST_CASE("trace columns per schema") {
  CHECK(trace_columns(TraceSchema::gradient) ==
        std::vector<std::string>{"k", "t", "lambda", "g", "alpha", "sigma", "cF", "ms"});
  CHECK(trace_columns(TraceSchema::fast) ==
        std::vector<std::string>{"k", "phase", "t", "lambda", "g", "alpha", "theta", "rho", "ms"});
}

TEST_CASE("trace CSV reads back") {
  std::vector<TraceRow> rows(3);
  for (int i = 0; i < 3; ++i) {
    rows[i].k = i;
    rows[i].phase = i < 2 ? 1 : 2;
    rows[i].t = 1.0 / (i + 3);
    rows[i].lambda = std::exp(-i * 1.7);
    rows[i].g = -0.1 * i;
    rows[i].alpha = 1e-3 / (i + 1);
    rows[i].theta = 2.0 / (i + 2);
    rows[i].rho = 0.25 * i;
    rows[i].ms = 0.5 * i;
  }
  for (TraceSchema schema : {TraceSchema::gradient, TraceSchema::fast}) {
    std::stringstream buffer;
    write_trace_csv(buffer, rows, schema);
    const CsvTable table = CsvTable::read(buffer);
    CHECK(table.header() == trace_columns(schema));
    REQUIRE(table.size() == 3);
    const std::vector<double> t = table.numbers("t"), lambda = table.numbers("lambda");
    for (int i = 0; i < 3; ++i) {
      CHECK(t[i] == rows[i].t);
      CHECK(lambda[i] == rows[i].lambda);
    }
    if (schema == TraceSchema::fast) CHECK(table.numbers("phase") == std::vector<double>{1, 1, 2});
  }
}

TEST_CASE("CSV tables") {
  CsvTable table({"a", "b"});
  table.add_row({"1", "inf"});
  table.add_row({"nan", "-2.5"});
  table.add_row({"4.9406564584124654e-324", "0"});
  CHECK(table.column_index("b") == 1);
  CHECK(table.column_index("c") == -1);
  CHECK(std::isinf(table.numbers("b")[0]));
  CHECK(std::isnan(table.numbers("a")[1]));
  CHECK(table.numbers("a")[2] == std::numeric_limits<double>::denorm_min());
  std::stringstream buffer;
  table.write(buffer);
  const CsvTable back = CsvTable::read(buffer);
  CHECK(back.header() == table.header());
  CHECK(back.rows() == table.rows());

  table.add_row({"2", "1x"});
  CHECK_THROWS_AS(table.numbers("b"), std::runtime_error);
  std::stringstream ragged("a,b\n1,2\n3\n");
  CHECK_THROWS_AS(CsvTable::read(ragged), std::runtime_error);
  CHECK(to_string(RunStatus::converged) == std::string("converged"));
}
