#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string_view>

namespace qfiber {

// FNV-1a mix used to derive independent per-check streams from one base seed.
inline uint64_t derive_seed(uint64_t base, std::string_view tag) {
  uint64_t h = 14695981039346656037ull;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h ^ (base * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull);
}

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(uint64_t seed) : eng(seed) {}

  double normal() {
    std::normal_distribution<double> d(0.0, 1.0);
    return d(eng);
  }
  double uniform(double a, double b) {
    std::uniform_real_distribution<double> d(a, b);
    return d(eng);
  }
  int uniform_int(int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    return d(eng);
  }

  Eigen::VectorXd gaussian_vec(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = normal();
    return v;
  }
  Eigen::MatrixXd gaussian_mat(int r, int c) {
    Eigen::MatrixXd m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = normal();
    return m;
  }
  Eigen::MatrixXcd gaussian_cmat(int r, int c) {
    Eigen::MatrixXcd m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = std::complex<double>(normal(), normal());
    return m;
  }

  // Haar-like unitary via QR with positive diagonal phase fix.
  Eigen::MatrixXcd unitary(int n) {
    Eigen::MatrixXcd a = gaussian_cmat(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
      std::complex<double> d = r(i, i);
      q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : 1.0);
    }
    return q;
  }

  // Symmetric positive definite with eigenvalues in [lo, hi].
  Eigen::MatrixXd spd(int n, double lo = 0.5, double hi = 2.0) {
    Eigen::MatrixXd a = gaussian_mat(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd ev(n);
    for (int i = 0; i < n; ++i) ev(i) = uniform(lo, hi);
    return q * ev.asDiagonal() * q.transpose();
  }
};

}  // namespace qfiber
