#include "csv.hpp"

#include <cstdio>

#include "hprec/error.hpp"

namespace hpcli {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string> header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) hprec::fail(hprec::ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  bool first = true;
  for (const auto& h : header) {
    out_ << (first ? "" : ",") << h;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<Cell> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out_ << ',';
    first = false;
    if (const auto* i = std::get_if<long long>(&c)) {
      out_ << *i;
    } else if (const auto* d = std::get_if<double>(&c)) {
      out_ << format_real(*d);
    } else {
      out_ << std::get<std::string>(c);
    }
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) hprec::fail(hprec::ErrorCode::IoError, "write failed for '" + path_.string() + "'");
  out_.close();
}

}  // namespace hpcli
