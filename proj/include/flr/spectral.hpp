#pragma once

// FFT utilities on the periodic torus: Poisson solve, spectral derivatives,
// exact constant-vector shifts of 2D grids, and gyroangle phase shifts of
// 4D distributions. All based on FFTW r2c/c2r transforms.

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

#include "flr/core.hpp"

namespace flr {

// FFTW planning is not thread-safe; execution of independent plans is.
inline std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

// Integer wavenumber of bin i on an n-point grid over [0, 2*pi).
inline int fft_mode(int i, int n) { return (i <= n / 2) ? i : i - n; }

// 2D real-to-complex transform pair on an n0 x n1 grid with helpers for
// the operations the solvers need. One instance per grid size; reuse it,
// plan creation is the expensive part.
class Fft2D {
 public:
  Fft2D(int n0, int n1) : n0_(n0), n1_(n1), n1c_(n1 / 2 + 1) {
    real_.resize(static_cast<std::size_t>(n0_) * n1_);
    spec_.resize(static_cast<std::size_t>(n0_) * n1c_);
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fwd_ = fftw_plan_dft_r2c_2d(n0_, n1_, real_.data(),
                                reinterpret_cast<fftw_complex*>(spec_.data()),
                                FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_2d(n0_, n1_, reinterpret_cast<fftw_complex*>(spec_.data()),
                                real_.data(), FFTW_ESTIMATE);
  }
  ~Fft2D() {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  int n0() const { return n0_; }
  int n1() const { return n1_; }

  std::vector<std::complex<double>> forward(const Array2& a) {
    for (std::size_t i = 0; i < real_.size(); ++i) real_[i] = a.data()[i];
    fftw_execute(fwd_);
    return spec_;
  }

  // Inverse transform with 1/(n0*n1) normalization.
  Array2 backward(const std::vector<std::complex<double>>& s) {
    spec_ = s;
    fftw_execute(bwd_);
    Array2 out(n0_, n1_);
    const double norm = 1.0 / (static_cast<double>(n0_) * n1_);
    for (std::size_t i = 0; i < real_.size(); ++i) out.data()[i] = real_[i] * norm;
    return out;
  }

  // Samples the trigonometric interpolant at x + d: out(x) = in(x + d).
  // Exact (to roundoff) when d is a grid multiple.
  Array2 shift_sample(const Array2& a, double d0, double d1) {
    auto s = forward(a);
    apply_shift_phase(s, d0, d1);
    return backward(s);
  }

  void apply_shift_phase(std::vector<std::complex<double>>& s, double d0, double d1) const {
    for (int i = 0; i < n0_; ++i) {
      const int m0 = fft_mode(i, n0_);
      const std::complex<double> p0 = std::polar(1.0, m0 * d0);
      for (int j = 0; j < n1c_; ++j) {
        const int m1 = j;  // half spectrum: m1 = 0..n1/2
        s[static_cast<std::size_t>(i) * n1c_ + j] *= p0 * std::polar(1.0, m1 * d1);
      }
    }
  }

  // Spectral partial derivative along the given axis (0 = x1, 1 = x2).
  Array2 deriv(const Array2& a, int axis) {
    auto s = forward(a);
    for (int i = 0; i < n0_; ++i) {
      const int m0 = fft_mode(i, n0_);
      for (int j = 0; j < n1c_; ++j) {
        const int m1 = j;
        int m = (axis == 0) ? m0 : m1;
        // Zero the unmatched Nyquist mode: its derivative is not
        // representable on the real grid.
        if (axis == 0 && n0_ % 2 == 0 && i == n0_ / 2) m = 0;
        if (axis == 1 && n1_ % 2 == 0 && j == n1_ / 2) m = 0;
        s[static_cast<std::size_t>(i) * n1c_ + j] *= std::complex<double>(0.0, m);
      }
    }
    return backward(s);
  }

 private:
  int n0_, n1_, n1c_;
  std::vector<double> real_;
  std::vector<std::complex<double>> spec_;
  fftw_plan fwd_{}, bwd_{};
};

// Spectral shift along the gyroangle axis of a 4D distribution:
// out(..., alpha) = in(..., alpha + theta). Grid-aligned thetas take the
// exact index-rotation path and are bitwise-reproducible.
class AlphaShifter {
 public:
  explicit AlphaShifter(int n_alpha) : na_(n_alpha), nac_(n_alpha / 2 + 1) {
    real_.resize(na_);
    spec_.resize(nac_);
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(na_, real_.data(),
                                reinterpret_cast<fftw_complex*>(spec_.data()),
                                FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r_1d(na_, reinterpret_cast<fftw_complex*>(spec_.data()),
                                real_.data(), FFTW_ESTIMATE);
  }
  ~AlphaShifter() {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }
  AlphaShifter(const AlphaShifter&) = delete;
  AlphaShifter& operator=(const AlphaShifter&) = delete;

  void shift(Array4& f, double theta) {
    if (f.n3() != na_) throw SolverError("AlphaShifter: alpha extent mismatch");
    const double dalpha = two_pi / na_;
    const double steps = theta / dalpha;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) < 1e-12 * (1.0 + std::abs(steps))) {
      rotate_indices(f, static_cast<long>(rounded));
      return;
    }
    const std::size_t rows = f.size() / na_;
    const double norm = 1.0 / na_;
    std::vector<std::complex<double>> phase(nac_);
    for (int m = 0; m < nac_; ++m) phase[m] = std::polar(1.0, m * theta);
    // The unpaired Nyquist mode has no well-defined phase shift for real data;
    // modulate it by cos so the result stays real (exact for aligned shifts).
    if (na_ % 2 == 0) phase[nac_ - 1] = std::cos((nac_ - 1) * theta);
    for (std::size_t r = 0; r < rows; ++r) {
      double* row = f.data() + r * na_;
      for (int l = 0; l < na_; ++l) real_[l] = row[l];
      fftw_execute(fwd_);
      for (int m = 0; m < nac_; ++m) spec_[m] *= phase[m];
      fftw_execute(bwd_);
      for (int l = 0; l < na_; ++l) row[l] = real_[l] * norm;
    }
  }

 private:
  // out(l) = in(l + s mod n): rotation of the alpha axis.
  void rotate_indices(Array4& f, long s) const {
    long sh = ((s % na_) + na_) % na_;
    if (sh == 0) return;
    const std::size_t rows = f.size() / na_;
    std::vector<double> tmp(na_);
    for (std::size_t r = 0; r < rows; ++r) {
      double* row = f.data() + r * na_;
      for (int l = 0; l < na_; ++l) tmp[l] = row[(l + sh) % na_];
      for (int l = 0; l < na_; ++l) row[l] = tmp[l];
    }
  }

  int na_, nac_;
  std::vector<double> real_;
  std::vector<std::complex<double>> spec_;
  fftw_plan fwd_{}, bwd_{};
};

}  // namespace flr
