#include "perifact/fft.hpp"

#include <cstring>
#include <mutex>

#include <fftw3.h>

namespace perifact {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft3::Fft3(int n1, int n2, int n3) : n1_(n1), n2_(n2), n3_(n3), n_(n1 * n2 * n3) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_complex* buf = fftw_alloc_complex(static_cast<size_t>(n_));
  buf_ = buf;
  fwd_ = fftw_plan_dft_3d(n1, n2, n3, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_3d(n1, n2, n3, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft3::~Fft3() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(static_cast<fftw_complex*>(buf_));
}

void Fft3::forward(std::vector<Complex>& data) const {
  auto* buf = static_cast<fftw_complex*>(buf_);
  std::memcpy(buf, data.data(), sizeof(Complex) * n_);
  fftw_execute(static_cast<fftw_plan>(fwd_));
  std::memcpy(data.data(), buf, sizeof(Complex) * n_);
}

void Fft3::backward(std::vector<Complex>& data) const {
  auto* buf = static_cast<fftw_complex*>(buf_);
  std::memcpy(buf, data.data(), sizeof(Complex) * n_);
  fftw_execute(static_cast<fftw_plan>(bwd_));
  const Real scale = 1.0 / static_cast<Real>(n_);
  for (int i = 0; i < n_; ++i)
    data[static_cast<size_t>(i)] = Complex(buf[i][0], buf[i][1]) * scale;
}

Fft2::Fft2(int n1, int n2) : n1_(n1), n2_(n2), n_(n1 * n2) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_complex* buf = fftw_alloc_complex(static_cast<size_t>(n_));
  buf_ = buf;
  fwd_ = fftw_plan_dft_2d(n1, n2, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_2d(n1, n2, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2::~Fft2() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(static_cast<fftw_complex*>(buf_));
}

void Fft2::forward(std::vector<Complex>& data) const {
  auto* buf = static_cast<fftw_complex*>(buf_);
  std::memcpy(buf, data.data(), sizeof(Complex) * n_);
  fftw_execute(static_cast<fftw_plan>(fwd_));
  std::memcpy(data.data(), buf, sizeof(Complex) * n_);
}

void Fft2::backward(std::vector<Complex>& data) const {
  auto* buf = static_cast<fftw_complex*>(buf_);
  std::memcpy(buf, data.data(), sizeof(Complex) * n_);
  fftw_execute(static_cast<fftw_plan>(bwd_));
  const Real scale = 1.0 / static_cast<Real>(n_);
  for (int i = 0; i < n_; ++i)
    data[static_cast<size_t>(i)] = Complex(buf[i][0], buf[i][1]) * scale;
}

}  // namespace perifact
