// Copyright 2026 The INP-X Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// 2-D discrete Fourier transforms backed by FFTW.
//
// Convention: the forward transform is unnormalized,
//   F(u, v) = sum_{x,y} f(x, y) exp(-2 pi i (u x / W + v y / H)),
// so sum |F|^2 = W H sum |f|^2. The inverse divides by W H.

#ifndef INPX_FFT_HPP_
#define INPX_FFT_HPP_

#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "inpx/error.hpp"
#include "inpx/image.hpp"

namespace inpx {

/// Row-major H x W complex spectrum.
struct Spectrum {
  int width = 0;
  int height = 0;
  std::vector<std::complex<double>> bins;

  std::complex<double>& at(int u, int v) {
    return bins[static_cast<std::size_t>(v) * width + u];
  }
  const std::complex<double>& at(int u, int v) const {
    return bins[static_cast<std::size_t>(v) * width + u];
  }
};

namespace detail {

// The FFTW planner is not re-entrant; execution of an existing plan is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

inline void run_dft(int width, int height, std::complex<double>* data, int sign) {
  static_assert(sizeof(std::complex<double>) == sizeof(fftw_complex));
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_2d(height, width, buf, buf, sign,
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  if (plan == nullptr) throw Error("fftw: planning failed");
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace detail

inline Spectrum fft2d(const Plane& plane) {
  Spectrum s{plane.width(), plane.height(), {}};
  s.bins.assign(plane.values().begin(), plane.values().end());
  detail::run_dft(s.width, s.height, s.bins.data(), FFTW_FORWARD);
  return s;
}

/// Inverse transform, returning the real part.
inline Plane ifft2d_real(Spectrum spectrum) {
  detail::run_dft(spectrum.width, spectrum.height, spectrum.bins.data(),
                  FFTW_BACKWARD);
  Plane out(spectrum.width, spectrum.height);
  const double scale = 1.0 / static_cast<double>(spectrum.bins.size());
  auto v = out.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = spectrum.bins[i].real() * scale;
  return out;
}

/// Signed frequency of bin `k` out of `n`, in cycles per sample, in
/// [-0.5, 0.5).
inline double bin_frequency(int k, int n) {
  return (k <= (n - 1) / 2 ? k : k - n) / static_cast<double>(n);
}

/// Moves the zero-frequency bin to the centre (index n / 2 per axis).
template <typename T>
Grid<T> fftshift(const Grid<T>& g) {
  const int w = g.width(), h = g.height();
  Grid<T> out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at((x + w / 2) % w, (y + h / 2) % h) = g.at(x, y);
  return out;
}

}  // namespace inpx

#endif  // INPX_FFT_HPP_
