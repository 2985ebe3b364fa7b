#include "qswitch/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qswitch {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string csv_join(const std::vector<std::string>& fields) {
  std::string line;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line;
}

void CsvWriter::header(const std::vector<std::string>& names) {
  buffer += csv_join(names);
  buffer += '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  buffer += csv_join(fields);
  buffer += '\n';
}

void CsvWriter::save(const std::string& path) const {
  if (path == "-") {
    std::fwrite(buffer.data(), 1, buffer.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw std::invalid_argument("failed writing output file: " + path);
}

}  // namespace qswitch
