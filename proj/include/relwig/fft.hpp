#pragma once

#include <complex>
#include <cstddef>

namespace relwig {

/// Owning FFTW plan for an unnormalised complex transform. Plans are created
/// under a global lock (the FFTW planner is not re-entrant); execute() is safe
/// to call concurrently on distinct arrays.
class Fft {
 public:
  enum class Direction { Forward, Backward };

  /// 1-D transform of length n.
  Fft(std::size_t n, Direction dir);
  /// 2-D transform of a rows x cols row-major array.
  Fft(std::size_t rows, std::size_t cols, Direction dir);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&& o) noexcept;
  Fft& operator=(Fft&& o) noexcept;

  std::size_t size() const { return size_; }
  /// Out-of-place only: out must not alias in.
  void execute(const std::complex<double>* in, std::complex<double>* out) const;

 private:
  void* plan_ = nullptr;
  std::size_t size_ = 0;
};

/// Signed frequency index of FFT bin i for length n (bins past n/2 are negative).
inline long fft_signed_index(std::size_t i, std::size_t n) {
  return i < (n + 1) / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
}

}  // namespace relwig
