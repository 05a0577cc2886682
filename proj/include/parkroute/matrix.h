#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace parkroute {

// Dense row-major square matrix of minutes.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int size, double fill = 0.0)
      : size_(size), data_(static_cast<std::size_t>(size) * size, fill) {}

  int size() const { return size_; }
  bool empty() const { return size_ == 0; }

  double operator()(int row, int col) const { return data_[index(row, col)]; }
  double& operator()(int row, int col) { return data_[index(row, col)]; }

  std::span<const double> row(int r) const {
    return {data_.data() + index(r, 0), static_cast<std::size_t>(size_)};
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * size_ + col;
  }

  int size_ = 0;
  std::vector<double> data_;
};

}  // namespace parkroute
