#include "thml/fft.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace thml {

namespace {

std::complex<double> unit(double turns_numerator, double turns_denominator, int sign) {
  const double angle = sign * 2.0 * std::numbers::pi * turns_numerator / turns_denominator;
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

void fft_pow2(std::span<std::complex<double>> data, int sign) {
  const std::size_t n = data.size();
  if (n <= 1) return;
  if (!std::has_single_bit(n)) throw std::invalid_argument("fft_pow2: length is not a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  std::vector<std::complex<double>> twiddle(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) twiddle[k] = unit(static_cast<double>(k), static_cast<double>(n), sign);

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const auto u = data[start + k];
        const auto v = data[start + k + half] * twiddle[k * stride];
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
  }
}

DftPlan::DftPlan(std::size_t n, int sign) : n_(n), sign_(sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("DftPlan: sign must be +1 or -1");
  if (n <= 1 || std::has_single_bit(n)) return;

  conv_size_ = std::bit_ceil(2 * n - 1);
  chirp_.resize(n);
  // exp(sign * pi i j^2 / n), reducing j^2 mod 2n exactly first.
  const std::size_t two_n = 2 * n;
  for (std::size_t j = 0; j < n; ++j) {
    const auto r = static_cast<std::size_t>((static_cast<unsigned __int128>(j) * j) % two_n);
    chirp_[j] = unit(static_cast<double>(r), static_cast<double>(two_n), sign);
  }
  kernel_hat_.assign(conv_size_, {0.0, 0.0});
  kernel_hat_[0] = std::conj(chirp_[0]);
  for (std::size_t m = 1; m < n; ++m) {
    kernel_hat_[m] = std::conj(chirp_[m]);
    kernel_hat_[conv_size_ - m] = std::conj(chirp_[m]);
  }
  fft_pow2(kernel_hat_, -1);
}

std::vector<std::complex<double>> DftPlan::operator()(std::span<const std::complex<double>> input) const {
  if (input.size() != n_) throw std::invalid_argument("DftPlan: input length mismatch");
  std::vector<std::complex<double>> out(input.begin(), input.end());
  if (n_ <= 1) return out;
  if (conv_size_ == 0) {
    fft_pow2(out, sign_);
    return out;
  }
  std::vector<std::complex<double>> work(conv_size_, {0.0, 0.0});
  for (std::size_t j = 0; j < n_; ++j) work[j] = input[j] * chirp_[j];
  fft_pow2(work, -1);
  for (std::size_t k = 0; k < conv_size_; ++k) work[k] *= kernel_hat_[k];
  fft_pow2(work, 1);
  const double scale = 1.0 / static_cast<double>(conv_size_);
  for (std::size_t k = 0; k < n_; ++k) out[k] = work[k] * chirp_[k] * scale;
  return out;
}

std::vector<std::complex<double>> DftPlan::operator()(std::span<const double> input) const {
  std::vector<std::complex<double>> z(input.begin(), input.end());
  return (*this)(z);
}

double DftPlan::error_bound(double input_l2) const {
  // Normwise radix-2 bound ||dy||_2 <= c log2(L) u ||y||_2 with ||y||_2 = sqrt(n) ||x||_2,
  // applied to three length-L transforms plus the chirp and kernel products.
  const double u = std::numeric_limits<double>::epsilon() / 2;
  const double length = static_cast<double>(conv_size_ == 0 ? std::max<std::size_t>(n_, 2) : conv_size_);
  const double stages = std::log2(length);
  const double growth = conv_size_ == 0 ? 1.0 : 3.0;
  return (growth * 8.0 * stages + 16.0) * u * std::sqrt(static_cast<double>(n_)) * input_l2 *
         (conv_size_ == 0 ? 1.0 : std::sqrt(length / static_cast<double>(n_)) * 2.0);
}

}  // namespace thml
