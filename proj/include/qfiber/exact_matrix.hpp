#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "qfiber/exact.hpp"

namespace qfiber {

// Dense matrix over Exact scalars, row-major.  Sized for spinor algebra
// (hundreds of rows at most), not for large numerics.
struct ExactMat {
  int rows = 0, cols = 0;
  std::vector<Exact> a;

  ExactMat() = default;
  ExactMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  Exact& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Exact& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static ExactMat identity(int n) {
    ExactMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Exact(1);
    return m;
  }

  ExactMat operator-() const {
    ExactMat m(rows, cols);
    for (size_t k = 0; k < a.size(); ++k) m.a[k] = -a[k];
    return m;
  }
  friend ExactMat operator+(const ExactMat& x, const ExactMat& y) {
    check_same(x, y);
    ExactMat m(x.rows, x.cols);
    for (size_t k = 0; k < x.a.size(); ++k) m.a[k] = x.a[k] + y.a[k];
    return m;
  }
  friend ExactMat operator-(const ExactMat& x, const ExactMat& y) {
    check_same(x, y);
    ExactMat m(x.rows, x.cols);
    for (size_t k = 0; k < x.a.size(); ++k) m.a[k] = x.a[k] - y.a[k];
    return m;
  }
  friend ExactMat operator*(const ExactMat& x, const ExactMat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("ExactMat: shape mismatch");
    ExactMat m(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int k = 0; k < x.cols; ++k) {
        if (x.at(i, k).is_zero()) continue;
        for (int j = 0; j < y.cols; ++j) {
          if (y.at(k, j).is_zero()) continue;
          m.at(i, j) += x.at(i, k) * y.at(k, j);
        }
      }
    return m;
  }
  ExactMat scaled(const Exact& s) const {
    ExactMat m(rows, cols);
    for (size_t k = 0; k < a.size(); ++k) m.a[k] = a[k] * s;
    return m;
  }
  ExactMat adjoint() const {
    ExactMat m(cols, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m.at(j, i) = at(i, j).conj();
    return m;
  }
  static ExactMat kron(const ExactMat& x, const ExactMat& y) {
    ExactMat m(x.rows * y.rows, x.cols * y.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int j = 0; j < x.cols; ++j) {
        if (x.at(i, j).is_zero()) continue;
        for (int p = 0; p < y.rows; ++p)
          for (int q = 0; q < y.cols; ++q)
            m.at(i * y.rows + p, j * y.cols + q) = x.at(i, j) * y.at(p, q);
      }
    return m;
  }
  static ExactMat block_diag(const ExactMat& x, const ExactMat& y) {
    ExactMat m(x.rows + y.rows, x.cols + y.cols);
    for (int i = 0; i < x.rows; ++i)
      for (int j = 0; j < x.cols; ++j) m.at(i, j) = x.at(i, j);
    for (int i = 0; i < y.rows; ++i)
      for (int j = 0; j < y.cols; ++j) m.at(x.rows + i, x.cols + j) = y.at(i, j);
    return m;
  }

  friend bool operator==(const ExactMat& x, const ExactMat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
  bool is_zero() const {
    for (const auto& s : a)
      if (!s.is_zero()) return false;
    return true;
  }

  Eigen::MatrixXcd to_complex() const {
    Eigen::MatrixXcd m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = at(i, j).to_complex();
    return m;
  }

 private:
  static void check_same(const ExactMat& x, const ExactMat& y) {
    if (x.rows != y.rows || x.cols != y.cols)
      throw std::invalid_argument("ExactMat: shape mismatch");
  }
};

}  // namespace qfiber
