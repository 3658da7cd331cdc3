#include "relwig/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <vector>

namespace relwig {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr unsigned plan_flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

}  // namespace

Fft::Fft(std::size_t n, Direction dir) : size_(n) {
  std::vector<std::complex<double>> in(n), out(n);
  auto* bi = reinterpret_cast<fftw_complex*>(in.data());
  auto* bo = reinterpret_cast<fftw_complex*>(out.data());
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft_1d(static_cast<int>(n), bi, bo,
                           dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD, plan_flags);
  if (!plan_) throw std::runtime_error("FFTW failed to create a 1-D plan");
}

Fft::Fft(std::size_t rows, std::size_t cols, Direction dir) : size_(rows * cols) {
  std::vector<std::complex<double>> in(rows * cols), out(rows * cols);
  auto* bi = reinterpret_cast<fftw_complex*>(in.data());
  auto* bo = reinterpret_cast<fftw_complex*>(out.data());
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), bi, bo,
                           dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD, plan_flags);
  if (!plan_) throw std::runtime_error("FFTW failed to create a 2-D plan");
}

Fft::~Fft() {
  if (plan_) {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
}

Fft::Fft(Fft&& o) noexcept : plan_(o.plan_), size_(o.size_) { o.plan_ = nullptr; }

Fft& Fft::operator=(Fft&& o) noexcept {
  if (this != &o) {
    this->~Fft();
    plan_ = o.plan_;
    size_ = o.size_;
    o.plan_ = nullptr;
  }
  return *this;
}

void Fft::execute(const std::complex<double>* in, std::complex<double>* out) const {
  if (in == out) throw std::invalid_argument("Fft::execute: plans are out-of-place");
  // FFTW's new-array execute takes non-const input; it does not write to it
  // for out-of-place complex transforms.
  fftw_execute_dft(static_cast<fftw_plan>(plan_),
                   reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace relwig
