#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace wildgrid {

/// Dense row-major 2-D array, indexed (entity, year) throughout the planner.
template <class T>
class Grid2 {
 public:
  Grid2() = default;
  Grid2(std::size_t n0, std::size_t n1, T init = T{}) : n0_(n0), n1_(n1), data_(n0 * n1, init) {}

  T& operator()(std::size_t i, std::size_t j) {
    assert(i < n0_ && j < n1_);
    return data_[i * n1_ + j];
  }
  const T& operator()(std::size_t i, std::size_t j) const {
    assert(i < n0_ && j < n1_);
    return data_[i * n1_ + j];
  }

  std::size_t rows() const { return n0_; }
  std::size_t cols() const { return n1_; }
  const std::vector<T>& data() const { return data_; }
  bool operator==(const Grid2&) const = default;

 private:
  std::size_t n0_ = 0, n1_ = 0;
  std::vector<T> data_;
};

/// Dense 3-D array, indexed (entity, scenario, year).
template <class T>
class Grid3 {
 public:
  Grid3() = default;
  Grid3(std::size_t n0, std::size_t n1, std::size_t n2, T init = T{})
      : n0_(n0), n1_(n1), n2_(n2), data_(n0 * n1 * n2, init) {}

  T& operator()(std::size_t i, std::size_t s, std::size_t y) {
    assert(i < n0_ && s < n1_ && y < n2_);
    return data_[(i * n1_ + s) * n2_ + y];
  }
  const T& operator()(std::size_t i, std::size_t s, std::size_t y) const {
    assert(i < n0_ && s < n1_ && y < n2_);
    return data_[(i * n1_ + s) * n2_ + y];
  }

  std::size_t dim0() const { return n0_; }
  std::size_t dim1() const { return n1_; }
  std::size_t dim2() const { return n2_; }
  std::size_t size() const { return data_.size(); }
  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }
  bool operator==(const Grid3&) const = default;

 private:
  std::size_t n0_ = 0, n1_ = 0, n2_ = 0;
  std::vector<T> data_;
};

}  // namespace wildgrid
