#pragma once

// Core containers and error types shared by the whole library.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace flr {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Error hierarchy used across the toolkit. The CLI maps these onto
// distinct exit codes.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CompatibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CutoffError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reduce an angle or coordinate into [0, 2*pi).
inline double wrap_2pi(double a) {
  double r = std::fmod(a, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}

// Dense row-major 2D array of doubles.
class Array2 {
 public:
  Array2() = default;
  Array2(int n0, int n1, double fill = 0.0)
      : n0_(n0), n1_(n1), d_(static_cast<std::size_t>(n0) * n1, fill) {}

  int n0() const { return n0_; }
  int n1() const { return n1_; }
  std::size_t size() const { return d_.size(); }

  double& operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * n1_ + j]; }
  double operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * n1_ + j]; }

  double* data() { return d_.data(); }
  const double* data() const { return d_.data(); }

  void fill(double v) { d_.assign(d_.size(), v); }

 private:
  int n0_ = 0, n1_ = 0;
  std::vector<double> d_;
};

// Dense row-major 3D array (x1, x2, k).
class Array3 {
 public:
  Array3() = default;
  Array3(int n0, int n1, int n2, double fill = 0.0)
      : n0_(n0), n1_(n1), n2_(n2),
        d_(static_cast<std::size_t>(n0) * n1 * n2, fill) {}

  int n0() const { return n0_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  std::size_t size() const { return d_.size(); }

  double& operator()(int i, int j, int k) {
    return d_[(static_cast<std::size_t>(i) * n1_ + j) * n2_ + k];
  }
  double operator()(int i, int j, int k) const {
    return d_[(static_cast<std::size_t>(i) * n1_ + j) * n2_ + k];
  }

  double* data() { return d_.data(); }
  const double* data() const { return d_.data(); }
  void fill(double v) { d_.assign(d_.size(), v); }

 private:
  int n0_ = 0, n1_ = 0, n2_ = 0;
  std::vector<double> d_;
};

// Dense row-major 4D array (x1, x2, k, alpha); alpha is the fastest axis.
class Array4 {
 public:
  Array4() = default;
  Array4(int n0, int n1, int n2, int n3, double fill = 0.0)
      : n0_(n0), n1_(n1), n2_(n2), n3_(n3),
        d_(static_cast<std::size_t>(n0) * n1 * n2 * n3, fill) {}

  int n0() const { return n0_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int n3() const { return n3_; }
  std::size_t size() const { return d_.size(); }

  double& operator()(int i, int j, int k, int l) {
    return d_[((static_cast<std::size_t>(i) * n1_ + j) * n2_ + k) * n3_ + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return d_[((static_cast<std::size_t>(i) * n1_ + j) * n2_ + k) * n3_ + l];
  }

  double* data() { return d_.data(); }
  const double* data() const { return d_.data(); }
  void fill(double v) { d_.assign(d_.size(), v); }

 private:
  int n0_ = 0, n1_ = 0, n2_ = 0, n3_ = 0;
  std::vector<double> d_;
};

}  // namespace flr
