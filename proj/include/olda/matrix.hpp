#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

namespace olda {

// Dense row-major matrix of doubles. Rows are the unit of access throughout
// (a topic is a row over the vocabulary), so only row views are exposed.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// beta: every row is a distribution over terms (sums to 1).
// lambda: strictly positive variational topic parameters.
// Same layout; the ops producing them enforce the distinction.
using TopicMatrix = Matrix;
using VariationalTopics = Matrix;

}  // namespace olda
