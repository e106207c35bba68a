#include <doctest.h>

#include <cstdint>
#include <fstream>
#include <stdexcept>

#include "core/io.hpp"
#include "test_util.hpp"

using namespace paircraft;
using test_util::scratch;

TEST_SUITE_BEGIN("io");

TEST_CASE("xy csv round trip") {
  XySeries s;
  s.x = {-3.0e-12, 0.0, 1.25e-12, 7.5};
  s.y = {12.0, 0.0, 1e-9, 52600.0};
  auto path = scratch("xy.csv");
  write_xy_csv(path, "delay_s", "rate", s);

  XySeries back = read_xy_csv(path, "delay_s", "rate");
  REQUIRE(back.x.size() == s.x.size());
  for (size_t i = 0; i < s.x.size(); ++i) {
    CHECK(back.x[i] == s.x[i]);
    CHECK(back.y[i] == s.y[i]);
  }

  // header mismatch names file and line
  CHECK_THROWS_WITH_AS(read_xy_csv(path, "phi_rad", "rate"), doctest::Contains("xy.csv"),
                       std::runtime_error);

  XySeries any = read_xy_csv_any(path);
  CHECK(any.x == back.x);
  CHECK(any.y == back.y);
}

TEST_CASE("malformed csv is rejected with location") {
  auto path = scratch("bad.csv");
  {
    std::ofstream out(path);
    out << "a,b\n1.0,2.0\nnope,3.0\n";
  }
  CHECK_THROWS_WITH_AS(read_xy_csv_any(path), doctest::Contains(":3"), std::runtime_error);
  CHECK_THROWS_AS(read_xy_csv(scratch("does_not_exist.csv"), "a", "b"), std::runtime_error);

  auto short_path = scratch("short.csv");
  {
    std::ofstream out(short_path);
    out << "a,b\n1.0\n";
  }
  CHECK_THROWS_AS(read_xy_csv_any(short_path), std::runtime_error);
}

TEST_CASE("event stream csv is written sorted") {
  std::vector<TimeTagEvent> ev = {{0, 500}, {1, -20}, {0, 100}, {1, 100}};
  auto path = scratch("events.csv");
  write_events_csv(path, ev);
  auto back = read_events_csv(path);
  REQUIRE(back.size() == 4);
  for (size_t i = 1; i < back.size(); ++i)
    CHECK(back[i - 1].timestamp_ps <= back[i].timestamp_ps);
  CHECK(back.front().timestamp_ps == -20);
  CHECK(back.front().channel == 1);
  CHECK(back.back().timestamp_ps == 500);
}

TEST_CASE("histogram csv round trip") {
  std::vector<std::int64_t> delay = {-600, -300, 0, 300};
  std::vector<double> count = {1.0, 0.0, 917.0, 2.0};
  auto path = scratch("hist.csv");
  write_histogram_csv(path, delay, count);
  std::vector<std::int64_t> d2;
  std::vector<double> c2;
  read_histogram_csv(path, d2, c2);
  CHECK(d2 == delay);
  CHECK(c2 == count);
}

TEST_CASE("power sweep csv uses its fixed header") {
  XySeries s;
  s.x = {0.05, 0.273, 1.0};
  s.y = {100.0, 52300.0, 7.01e5};
  auto path = scratch("sweep.csv");
  write_power_sweep_csv(path, s);
  {
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "power_mw,counts_hz");
  }
  XySeries back = read_power_sweep_csv(path);
  CHECK(back.x == s.x);
  CHECK(back.y == s.y);
}

TEST_CASE("density matrix json round trip") {
  Rng rng(99);
  DensityMatrix rho = test_util::random_density(rng, Basis::freqbin);
  auto j = density_matrix_to_json(rho);
  CHECK(j.at("basis") == "freqbin");
  DensityMatrix back = density_matrix_from_json(j);
  CHECK(back.basis() == Basis::freqbin);
  CHECK(test_util::frobenius(back.matrix(), rho.matrix()) < 1e-15);

  auto path = scratch("rho.json");
  write_density_matrix(path, rho);
  DensityMatrix from_file = read_density_matrix(path);
  CHECK(test_util::frobenius(from_file.matrix(), rho.matrix()) < 1e-15);

  auto broken = j;
  broken.erase("im");
  CHECK_THROWS(density_matrix_from_json(broken));
}

TEST_CASE("small csv helpers") {
  CHECK(trim("  a b \t") == "a b");
  CHECK(trim("") == "");
  auto cells = split_csv_line("a, b ,,1.5");
  REQUIRE(cells.size() == 4);
  CHECK(cells[0] == "a");
  CHECK(cells[1] == "b");  // cells are trimmed
  CHECK(cells[2] == "");
  CHECK(cells[3] == "1.5");
}

TEST_SUITE_END();
