#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "gnsphere/io.hpp"

using namespace gnsphere;

TEST_CASE("doubles round-trip through text") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 1.7063651234567891}) {
    CHECK(std::strtod(io::format_double(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("csv builder") {
  io::CsvTable t({"a", "b"});
  t.row().cell(1.5).cell(std::string("x"));
  t.row().cell(0.1).cell(std::string("y"));
  std::istringstream in(t.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "a,b");
  std::getline(in, line);
  CHECK(line == "1.5,x");
  std::getline(in, line);
  CHECK(std::strtod(line.c_str(), nullptr) == 0.1);
}

TEST_CASE("atomic writes replace the target") {
  auto dir = std::filesystem::temp_directory_path() / "gnsphere_io_test";
  std::filesystem::create_directories(dir);
  auto path = dir / "out.txt";
  io::write_atomic(path, "first");
  io::write_atomic(path, "second");
  std::ifstream f(path);
  std::string s;
  std::getline(f, s);
  CHECK(s == "second");
  int files = 0;
  for ([[maybe_unused]] auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("json rendering keeps full precision and handles non-finite values") {
  nlohmann::json j = {{"x", 0.1}, {"bad", std::numeric_limits<double>::infinity()}};
  auto back = nlohmann::json::parse(io::dump_json(j));
  CHECK(back["x"].get<double>() == 0.1);
  CHECK_FALSE(back["bad"].is_number_float());
}
