#include "raf/sieve.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <string>

#include "raf/error.hpp"

namespace raf {
namespace {

constexpr std::array<char, 9> kMagic = {'R', 'A', 'F', 'S', 'I', 'E', 'V', 'E', '1'};

void check_limit(std::int64_t limit, const SieveOptions& options) {
  if (limit < 1) throw CapacityError("sieve limit must be at least 1");
  if (limit > std::int64_t{0xFFFFFFFF}) throw CapacityError("sieve limit exceeds 32-bit spf storage");
  if (MobiusTable::footprint(limit) > options.max_bytes)
    throw CapacityError("sieve to " + std::to_string(limit) + " exceeds the memory budget of " +
                        std::to_string(options.max_bytes) + " bytes");
}

// Fills spf and primes with a linear sieve; optionally also mu.
void linear_sieve(std::int64_t limit, std::vector<std::uint32_t>& spf,
                  std::vector<std::uint32_t>& primes, std::vector<std::int8_t>* mu) {
  spf.assign(static_cast<std::size_t>(limit) + 1, 0);
  primes.clear();
  if (mu) {
    mu->assign(static_cast<std::size_t>(limit) + 1, 0);
    (*mu)[1] = 1;
  }
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
      if (mu) (*mu)[i] = -1;
    }
    const std::uint32_t si = spf[i];
    for (const std::uint32_t p : primes) {
      const std::int64_t m = i * p;
      if (p > si || m > limit) break;
      spf[m] = p;
      if (mu) (*mu)[m] = (p == si) ? 0 : static_cast<std::int8_t>(-(*mu)[i]);
    }
  }
}

void fill_mertens(const std::vector<std::int8_t>& mu, std::vector<std::int64_t>& mertens) {
  mertens.assign(mu.size(), 0);
  std::int64_t acc = 0;
  for (std::size_t x = 1; x < mu.size(); ++x) {
    acc += mu[x];
    mertens[x] = acc;
  }
}

}  // namespace

std::uint64_t MobiusTable::footprint(std::int64_t limit) {
  const auto n = static_cast<std::uint64_t>(limit) + 1;
  return n * (sizeof(std::int8_t) + sizeof(std::int64_t) + sizeof(std::uint32_t));
}

void MobiusTable::check(std::int64_t n) const {
  if (n < 0 || n > limit_)
    throw RangeError("index " + std::to_string(n) + " outside sieved range [0, " +
                     std::to_string(limit_) + "]");
}

int MobiusTable::mu(std::int64_t n) const {
  check(n);
  return mu_[static_cast<std::size_t>(n)];
}

std::int64_t MobiusTable::mertens(std::int64_t x) const {
  check(x);
  return mertens_[static_cast<std::size_t>(x)];
}

std::uint32_t MobiusTable::spf(std::int64_t n) const {
  check(n);
  return spf_[static_cast<std::size_t>(n)];
}

bool MobiusTable::is_prime(std::int64_t n) const {
  check(n);
  return n >= 2 && spf_[static_cast<std::size_t>(n)] == n;
}

MobiusTable sieve(std::int64_t limit, const SieveOptions& options) {
  check_limit(limit, options);
  MobiusTable t;
  t.limit_ = limit;
  linear_sieve(limit, t.spf_, t.primes_, &t.mu_);
  fill_mertens(t.mu_, t.mertens_);
  return t;
}

std::vector<std::int64_t> divisors(std::int64_t n, const MobiusTable& table) {
  if (n < 1) throw DomainError("divisors of a non-positive integer");
  if (n > table.limit())
    throw RangeError("divisors(" + std::to_string(n) + ") beyond table limit " +
                     std::to_string(table.limit()));
  std::vector<std::int64_t> out{1};
  std::int64_t m = n;
  while (m > 1) {
    const std::int64_t p = table.spf(m);
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    const std::size_t base = out.size();
    std::int64_t pk = 1;
    for (int i = 1; i <= e; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::int64_t> totient_table(std::int64_t limit, const SieveOptions& options) {
  check_limit(limit, options);
  std::vector<std::int64_t> phi(static_cast<std::size_t>(limit) + 1, 0);
  std::vector<std::uint32_t> primes;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  phi[1] = 1;
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (!composite[i]) {
      primes.push_back(static_cast<std::uint32_t>(i));
      phi[i] = i - 1;
    }
    for (const std::uint32_t p : primes) {
      const std::int64_t m = i * p;
      if (m > limit) break;
      composite[m] = true;
      if (i % p == 0) {
        phi[m] = phi[i] * p;
        break;
      }
      phi[m] = phi[i] * (p - 1);
    }
  }
  return phi;
}

void save_sieve_cache(const MobiusTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open sieve cache for writing: " + path.string());
  out.write(kMagic.data(), kMagic.size());
  const auto limit = static_cast<std::uint64_t>(table.limit());
  std::array<unsigned char, 8> le{};
  for (int i = 0; i < 8; ++i) le[i] = static_cast<unsigned char>((limit >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(le.data()), le.size());
  const auto mu = table.mu_values();
  out.write(reinterpret_cast<const char*>(mu.data()), static_cast<std::streamsize>(mu.size()));
  if (!out) throw Error("failed writing sieve cache: " + path.string());
}

MobiusTable load_sieve_cache(const std::filesystem::path& path, const SieveOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open sieve cache: " + path.string());
  std::array<char, 9> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw FormatError("bad sieve cache magic in " + path.string());
  std::array<unsigned char, 8> le{};
  in.read(reinterpret_cast<char*>(le.data()), le.size());
  if (!in) throw FormatError("truncated sieve cache header in " + path.string());
  std::uint64_t limit = 0;
  for (int i = 0; i < 8; ++i) limit |= static_cast<std::uint64_t>(le[i]) << (8 * i);
  check_limit(static_cast<std::int64_t>(limit), options);

  MobiusTable t;
  t.limit_ = static_cast<std::int64_t>(limit);
  t.mu_.resize(limit + 1);
  in.read(reinterpret_cast<char*>(t.mu_.data()), static_cast<std::streamsize>(limit + 1));
  if (!in) throw FormatError("truncated sieve cache body in " + path.string());
  for (const std::int8_t v : t.mu_) {
    if (v < -1 || v > 1) throw FormatError("mu value out of {-1,0,1} in " + path.string());
  }
  if (t.mu_[0] != 0 || t.mu_[1] != 1) throw FormatError("corrupt sieve cache " + path.string());
  linear_sieve(t.limit_, t.spf_, t.primes_, nullptr);
  fill_mertens(t.mu_, t.mertens_);
  return t;
}

MobiusTable sieve_cached(std::int64_t limit, const std::filesystem::path& path,
                         const SieveOptions& options) {
  if (path.empty()) return sieve(limit, options);
  std::error_code ec;
  if (std::filesystem::exists(path, ec)) {
    MobiusTable cached = load_sieve_cache(path, options);
    if (cached.limit() >= limit) return cached;
  }
  MobiusTable fresh = sieve(limit, options);
  save_sieve_cache(fresh, path);
  return fresh;
}

}  // namespace raf
