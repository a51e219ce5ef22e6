#include "weakkam/io.hpp"

#include "weakkam/errors.hpp"
#include "weakkam/format.hpp"

namespace weakkam {

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary) {
  if (!out_) throw invalid_input("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(double value) { return cell(format_real(value)); }

CsvWriter& CsvWriter::cell(long value) { return cell(std::to_string(value)); }

CsvWriter& CsvWriter::cell(const std::string& value) {
  if (row_started_) out_ << ',';
  out_ << value;
  row_started_ = true;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
}

void CsvWriter::marker(const std::string& text) {
  if (row_started_) end_row();
  out_ << "# " << text << '\n';
  out_.flush();
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw invalid_input("cannot write " + path.string());
  f << doc.dump(2) << '\n';
}

std::filesystem::path ensure_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw invalid_input("cannot create output directory " + dir + ": " + ec.message());
  return p;
}

}  // namespace weakkam
