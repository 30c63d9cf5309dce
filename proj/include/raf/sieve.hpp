#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace raf {

struct SieveOptions {
  /// Upper bound on the bytes a table may occupy.
  std::uint64_t max_bytes = std::uint64_t{4} << 30;
};

/// Möbius values, Mertens prefix sums and smallest prime factors for
/// 0..limit. Immutable once built; safe to share across threads.
class MobiusTable {
 public:
  std::int64_t limit() const noexcept { return limit_; }

  int mu(std::int64_t n) const;
  std::int64_t mertens(std::int64_t x) const;
  std::uint32_t spf(std::int64_t n) const;
  bool is_prime(std::int64_t n) const;

  std::span<const std::int8_t> mu_values() const noexcept { return mu_; }
  std::span<const std::int64_t> mertens_values() const noexcept { return mertens_; }
  std::span<const std::uint32_t> primes() const noexcept { return primes_; }

  /// Bytes needed by a table of the given limit.
  static std::uint64_t footprint(std::int64_t limit);

 private:
  friend MobiusTable sieve(std::int64_t, const SieveOptions&);
  friend MobiusTable load_sieve_cache(const std::filesystem::path&, const SieveOptions&);

  void check(std::int64_t n) const;

  std::int64_t limit_ = 0;
  std::vector<std::int8_t> mu_;
  std::vector<std::int64_t> mertens_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

/// Linear (Euler) sieve in O(limit) time.
MobiusTable sieve(std::int64_t limit, const SieveOptions& options = {});

/// Ascending divisors of n from its spf factorization.
std::vector<std::int64_t> divisors(std::int64_t n, const MobiusTable& table);

/// Euler's totient for 0..limit (entry 0 is 0).
std::vector<std::int64_t> totient_table(std::int64_t limit, const SieveOptions& options = {});

/// Cache layout: "RAFSIEVE1", little-endian u64 limit, limit+1 signed bytes of mu.
void save_sieve_cache(const MobiusTable& table, const std::filesystem::path& path);
MobiusTable load_sieve_cache(const std::filesystem::path& path, const SieveOptions& options = {});

/// Reuses the cache at `path` when it covers `limit`, otherwise sieves and
/// rewrites it. An empty path just sieves.
MobiusTable sieve_cached(std::int64_t limit, const std::filesystem::path& path,
                         const SieveOptions& options = {});

}  // namespace raf
