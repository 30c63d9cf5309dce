#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace raf {

/// Tiers are cumulative: asymptotic runs the exact checks too, full runs everything.
enum class Suite { exact, asymptotic, full };

Suite parse_suite(std::string_view text);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<Check> run_suite(Suite suite, const std::filesystem::path& sieve_cache = {},
                             const std::function<void(const Check&)>& on_result = {});

}  // namespace raf
