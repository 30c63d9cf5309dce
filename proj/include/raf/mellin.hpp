#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "raf/kernel.hpp"

namespace raf {

using Complex = std::complex<double>;

struct ConvergenceReport {
  std::int64_t n = 0;
  Complex at_n;
  Complex at_2n;
  double change = 0.0;  // |at_2n - at_n|
};

struct TransformResult {
  enum class Method { closed, limit };
  Complex value;
  Method method = Method::closed;
  std::int64_t n = 0;          // truncation, limit method only
  std::string condition_note;  // e.g. "near pole at z=1"
  std::optional<ConvergenceReport> convergence;
};

/// Riemann zeta on ℜs > -10, |ℑs| <= 100.
Complex zeta(Complex s);

/// log Γ(z) for ℜz >= 1/2 via Lanczos (g=7, 9 terms); reflection below.
Complex log_gamma(Complex z);

/// Closed-form transform of the kernel at z.
TransformResult closed_transform(const Kernel& kernel, Complex z);

/// (-z/n)·Σ_{k≤n} G(n,k)(k/n)^{-z-1}, with the 2n value attached. Needs ℜz < 0.
TransformResult limit_transform(const Kernel& kernel, Complex z, std::int64_t n);

/// f(n)^z·Σ_{k≤n} (f(k)^{-z} - f(k-1)^{-z})·g(f(k)/f(n)) for an FGV kernel g.
TransformResult limit_transform_wrt_f(const Kernel& kernel, const FSpec& f, Complex z, std::int64_t n);

/// Zeros of the scaled Ingham transform for f(x)=q^x+1 with ℑz in [t_lo, t_hi], sorted by ℑz.
std::vector<Complex> phi_f_zeros(int q, double t_lo, double t_hi);

}  // namespace raf
