#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "raf/error.hpp"

namespace raf::cli {

class IoError : public Error {
 public:
  using Error::Error;
};

/// Shortest round-trip decimal form, locale independent.
std::string num(double x);

/// Rows are buffered and written in one go with LF line endings.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  template <class... T>
  void row(const T&... cells) {
    std::vector<std::string> r;
    (r.push_back(cell(cells)), ...);
    add(std::move(r));
  }
  void add(std::vector<std::string> cells);
  std::string str() const { return text_; }

 private:
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  static std::string cell(std::string_view s) { return std::string(s); }
  static std::string cell(double x) { return num(x); }
  static std::string cell(std::int64_t x) { return std::to_string(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(std::size_t x) { return std::to_string(x); }
  static std::string cell(bool b) { return b ? "true" : "false"; }

  std::size_t width_;
  std::string text_;
};

void write_file(const std::filesystem::path& path, std::string_view content);

struct Manifest {
  std::string cmd;
  std::string kernel;
  std::string rhs;
  std::int64_t n = 0;
  std::string backend;
  nlohmann::json tolerances = nlohmann::json::object();
  std::vector<std::string> outputs;
  double wall_ms = 0.0;

  nlohmann::json to_json() const;
};

/// Writes <out>.manifest.json next to the output file.
std::filesystem::path write_manifest(const std::filesystem::path& out, const Manifest& m);

}  // namespace raf::cli
