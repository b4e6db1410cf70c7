/* fft.hpp — thin FFTW wrapper for the 3-D and 2-D complex transforms used by
 * the spectral solver.  Plans are created once per object (FFTW_ESTIMATE, so
 * results are run-to-run deterministic) and executed on an internal buffer. */

#pragma once

#include <vector>

#include "perifact/types.hpp"

namespace perifact {

/// In-place 3-D complex DFT, layout (i1, i2, i3) with i3 fastest.
/// forward: unnormalized, kernel exp(-i 2 pi j k / n);
/// backward: normalized by 1/(n1 n2 n3) so backward(forward(x)) == x.
class Fft3 {
 public:
  Fft3(int n1, int n2, int n3);
  ~Fft3();
  Fft3(const Fft3&) = delete;
  Fft3& operator=(const Fft3&) = delete;

  void forward(std::vector<Complex>& data) const;
  void backward(std::vector<Complex>& data) const;

  int size() const { return n_; }

 private:
  int n1_, n2_, n3_, n_;
  void* buf_;
  void* fwd_;
  void* bwd_;
};

/// Same contract for a single 2-D plane (i1, i2), i2 fastest.
class Fft2 {
 public:
  Fft2(int n1, int n2);
  ~Fft2();
  Fft2(const Fft2&) = delete;
  Fft2& operator=(const Fft2&) = delete;

  void forward(std::vector<Complex>& data) const;
  void backward(std::vector<Complex>& data) const;

 private:
  int n1_, n2_, n_;
  void* buf_;
  void* fwd_;
  void* bwd_;
};

}  // namespace perifact
