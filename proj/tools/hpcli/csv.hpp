#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <variant>

namespace hpcli {

/// Comma-separated output with a header row and LF line endings.
/// Reals print with 10 significant digits so reruns are byte-identical.
class CsvWriter {
 public:
  using Cell = std::variant<long long, double, std::string>;

  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header);

  void row(std::initializer_list<Cell> cells);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

std::string format_real(double v);

}  // namespace hpcli
