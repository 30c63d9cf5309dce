#include "io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace raf::cli {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Csv::Csv(std::vector<std::string> header) : width_(header.size()) { add(std::move(header)); }

void Csv::add(std::vector<std::string> cells) {
  if (cells.size() != width_) throw Error("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

nlohmann::json Manifest::to_json() const {
  return nlohmann::json{{"cmd", cmd},       {"kernel", kernel},   {"rhs", rhs},
                        {"n", n},           {"backend", backend}, {"tolerances", tolerances},
                        {"outputs", outputs}, {"wall_ms", wall_ms}, {"version", RAF_VERSION}};
}

std::filesystem::path write_manifest(const std::filesystem::path& out, const Manifest& m) {
  auto path = out;
  path += ".manifest.json";
  write_file(path, m.to_json().dump(2) + "\n");
  return path;
}

}  // namespace raf::cli
