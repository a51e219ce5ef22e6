#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace weakkam {

/// Minimal CSV writer: `.` decimals, reals with 17 significant digits.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  CsvWriter& cell(double value);
  CsvWriter& cell(long value);
  CsvWriter& cell(int value) { return cell(static_cast<long>(value)); }
  CsvWriter& cell(const std::string& value);
  void end_row();
  /// Comment line, used to mark a run that stopped early.
  void marker(const std::string& text);
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
  bool row_started_ = false;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// Creates the directory if needed.
std::filesystem::path ensure_dir(const std::string& dir);

}  // namespace weakkam
