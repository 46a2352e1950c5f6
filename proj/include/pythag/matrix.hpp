#ifndef PYTHAG_MATRIX_HPP_
#define PYTHAG_MATRIX_HPP_

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pythag {

/// Dense row-major matrix.
template <typename T> class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T &operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  T &at(std::size_t r, std::size_t c) {
    check(r, c);
    return (*this)(r, c);
  }
  const T &at(std::size_t r, std::size_t c) const {
    check(r, c);
    return (*this)(r, c);
  }

  T row_sum(std::size_t r) const {
    T s{};
    for (std::size_t c = 0; c < cols_; ++c) {
      s += (*this)(r, c);
    }
    return s;
  }

  T col_sum(std::size_t c) const {
    T s{};
    for (std::size_t r = 0; r < rows_; ++r) {
      s += (*this)(r, c);
    }
    return s;
  }

  const std::vector<T> &data() const { return data_; }

  bool operator==(const Matrix &) const = default;

private:
  void check(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
      throw std::out_of_range("Matrix index out of range");
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using MatrixD = Matrix<double>;

} // namespace pythag

#endif // PYTHAG_MATRIX_HPP_
