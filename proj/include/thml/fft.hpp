#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace thml {

/// In-place unnormalized radix-2 transform; sign = -1 forward, +1 backward.
/// data.size() must be a power of two.
void fft_pow2(std::span<std::complex<double>> data, int sign);

/// Arbitrary-length DFT y_k = sum_j x_j exp(sign * 2 pi i j k / n) via
/// Bluestein's chirp-z factorization over a power-of-two convolution.
/// The plan caches the chirp and the transformed kernel for reuse.
class DftPlan {
 public:
  DftPlan(std::size_t n, int sign);

  std::size_t size() const { return n_; }
  std::vector<std::complex<double>> operator()(std::span<const std::complex<double>> input) const;
  std::vector<std::complex<double>> operator()(std::span<const double> input) const;

  /// A priori bound on max_k |computed y_k - exact y_k| for an input of the
  /// given Euclidean norm, in double arithmetic.
  double error_bound(double input_l2) const;

 private:
  std::size_t n_;
  int sign_;
  std::size_t conv_size_ = 0;  // zero when n is a power of two
  std::vector<std::complex<double>> chirp_;
  std::vector<std::complex<double>> kernel_hat_;
};

inline std::vector<std::complex<double>> dft(std::span<const std::complex<double>> input, int sign) {
  return DftPlan(input.size(), sign)(input);
}

}  // namespace thml
