#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gnsphere::io {

/// Decimal form with 17 significant digits; round-trips exactly.
std::string format_double(double x);

/// Writes to a temporary sibling and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Small CSV builder; numeric cells use format_double.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row();
  CsvTable& cell(double x);
  CsvTable& cell(const std::string& s);
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// JSON rendering with every floating-point number at 17 significant digits.
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace gnsphere::io
