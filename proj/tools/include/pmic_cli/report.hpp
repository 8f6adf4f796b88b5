#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "pmic_cli/config.hpp"

namespace pmic::cli {

/// Tool version, build id, seed and the resolved config.
nlohmann::json report_header(const RunConfig& config);

/// Shortest decimal that round-trips the double; "nan"/"inf"/"-inf" otherwise.
std::string format_double(double value);

/// `name` inside the output directory. Rejects absolute names and "..".
std::filesystem::path output_file(const RunConfig& config, const std::filesystem::path& name);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> columns);
  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(double value) { return cell(format_double(value)); }
  CsvWriter& cell(std::size_t value) { return cell(std::to_string(value)); }
  void end_row();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
  std::filesystem::path path_;
};

}  // namespace pmic::cli
