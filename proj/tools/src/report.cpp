#include "pmic_cli/report.hpp"

#include <charconv>
#include <cmath>

#include "pmic/error.hpp"
#include "pmic/version.hpp"

namespace pmic::cli {

nlohmann::json report_header(const RunConfig& config) {
  return {{"tool", "pmi-curation"},
          {"version", kToolVersion},
          {"build_id", kBuildId},
          {"seed", config.seed},
          {"config", to_json(config)}};
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::filesystem::path output_file(const RunConfig& config, const std::filesystem::path& name) {
  if (name.is_absolute()) throw ValidationError("output name must be relative: " + name.string());
  for (const auto& part : name) {
    if (part == "..") throw ValidationError("output name escapes the output directory: " + name.string());
  }
  const auto path = config.output_dir / name;
  std::filesystem::create_directories(path.parent_path());
  return path;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     std::initializer_list<std::string_view> columns)
    : out_(path, std::ios::binary | std::ios::trunc), columns_(columns.size()), path_(path) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  for (auto column : columns) cell(column);
  end_row();
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  if (filled_ == columns_) throw std::logic_error("csv row overflow in " + path_.string());
  if (filled_++ > 0) out_ << ',';
  out_ << text;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("csv row underflow in " + path_.string());
  out_ << '\n';
  filled_ = 0;
  if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

}  // namespace pmic::cli
