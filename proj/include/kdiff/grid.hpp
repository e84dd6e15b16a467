#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace kdiff {

using cdouble = std::complex<double>;

enum class Domain : std::uint8_t { Image, KSpace };

const char *to_string(Domain d);

struct Shape {
  std::size_t height = 0;
  std::size_t width = 0;

  std::size_t size() const { return height * width; }
  // Zero-frequency / mask center, floor division on both axes.
  std::size_t center_row() const { return height / 2; }
  std::size_t center_col() const { return width / 2; }

  friend bool operator==(const Shape &, const Shape &) = default;
};

std::string to_string(const Shape &s);

/// H x W complex array, row-major, tagged with the domain it lives in.
class ComplexGrid {
public:
  ComplexGrid() = default;
  ComplexGrid(Shape shape, Domain domain);
  ComplexGrid(Shape shape, Domain domain, std::vector<cdouble> data);

  const Shape &shape() const { return shape_; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }
  std::size_t size() const { return data_.size(); }
  Domain domain() const { return domain_; }
  void set_domain(Domain d) { domain_ = d; }

  cdouble &operator()(std::size_t row, std::size_t col) { return data_[row * shape_.width + col]; }
  const cdouble &operator()(std::size_t row, std::size_t col) const {
    return data_[row * shape_.width + col];
  }
  cdouble &operator[](std::size_t i) { return data_[i]; }
  const cdouble &operator[](std::size_t i) const { return data_[i]; }

  std::span<cdouble> data() { return data_; }
  std::span<const cdouble> data() const { return data_; }

  bool all_finite() const;
  double norm() const; // l2 over all 2*H*W real components

  ComplexGrid &operator+=(const ComplexGrid &o);
  ComplexGrid &operator-=(const ComplexGrid &o);
  ComplexGrid &operator*=(cdouble s);

  friend bool operator==(const ComplexGrid &, const ComplexGrid &) = default;

private:
  Shape shape_;
  Domain domain_ = Domain::Image;
  std::vector<cdouble> data_;
};

ComplexGrid operator+(ComplexGrid a, const ComplexGrid &b);
ComplexGrid operator-(ComplexGrid a, const ComplexGrid &b);
ComplexGrid operator*(cdouble s, ComplexGrid a);

/// H x W real array (magnitude images, weights, masks on disk).
class RealGrid {
public:
  RealGrid() = default;
  explicit RealGrid(Shape shape, double fill = 0.0);
  RealGrid(Shape shape, std::vector<double> data);

  const Shape &shape() const { return shape_; }
  std::size_t height() const { return shape_.height; }
  std::size_t width() const { return shape_.width; }
  std::size_t size() const { return data_.size(); }

  double &operator()(std::size_t row, std::size_t col) { return data_[row * shape_.width + col]; }
  double operator()(std::size_t row, std::size_t col) const { return data_[row * shape_.width + col]; }
  double &operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double max() const;
  double min() const;

  friend bool operator==(const RealGrid &, const RealGrid &) = default;

private:
  Shape shape_;
  std::vector<double> data_;
};

/// H x W {0,1} array. Used both for undersampling patterns and virtual masks.
class BinaryMask {
public:
  BinaryMask() = default;
  explicit BinaryMask(Shape shape, bool fill = false);

  const Shape &shape() const { return shape_; }
  std::size_t size() const { return bits_.size(); }

  bool operator()(std::size_t row, std::size_t col) const { return bits_[row * shape_.width + col] != 0; }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t row, std::size_t col, bool v) { bits_[row * shape_.width + col] = v ? 1 : 0; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }

  std::size_t popcount() const;
  BinaryMask complement() const;
  BinaryMask operator|(const BinaryMask &o) const;
  BinaryMask operator&(const BinaryMask &o) const;
  RealGrid to_real() const;
  static BinaryMask from_real(const RealGrid &g); // exact 0/1 required

  friend bool operator==(const BinaryMask &, const BinaryMask &) = default;

private:
  Shape shape_;
  std::vector<std::uint8_t> bits_;
};

/// C >= 1 coil grids sharing shape and domain.
class CoilStack {
public:
  CoilStack() = default;
  explicit CoilStack(std::vector<ComplexGrid> coils);

  std::size_t count() const { return coils_.size(); }
  bool empty() const { return coils_.empty(); }
  const ComplexGrid &operator[](std::size_t c) const { return coils_[c]; }
  const std::vector<ComplexGrid> &coils() const { return coils_; }

private:
  std::vector<ComplexGrid> coils_;
};

// Validation helpers shared by all modules; throw kdiff::Error.
void require_finite(const ComplexGrid &g, const char *module, const char *param);
void require_domain(const ComplexGrid &g, Domain d, const char *module, const char *param);
void require_shape(const Shape &a, const Shape &b, const char *module, const char *param);

} // namespace kdiff
