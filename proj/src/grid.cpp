#include "kdiff/grid.hpp"

#include "kdiff/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kdiff {

const char *to_string(Domain d) { return d == Domain::Image ? "image" : "kspace"; }

std::string to_string(const Shape &s) {
  return std::to_string(s.height) + "x" + std::to_string(s.width);
}

namespace {

void require_nonempty(const Shape &s, const char *module) {
  if (s.height == 0 || s.width == 0)
    throw Error(module, "shape", "height and width must be positive, got " + to_string(s));
}

} // namespace

ComplexGrid::ComplexGrid(Shape shape, Domain domain)
    : shape_(shape), domain_(domain), data_(shape.size()) {
  require_nonempty(shape, "kspace-core");
}

ComplexGrid::ComplexGrid(Shape shape, Domain domain, std::vector<cdouble> data)
    : shape_(shape), domain_(domain), data_(std::move(data)) {
  require_nonempty(shape, "kspace-core");
  if (data_.size() != shape.size())
    throw Error("kspace-core", "data", "length " + std::to_string(data_.size()) +
                                           " does not match " + to_string(shape));
}

bool ComplexGrid::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cdouble &v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

double ComplexGrid::norm() const {
  double acc = 0.0;
  for (const auto &v : data_) acc += std::norm(v);
  return std::sqrt(acc);
}

ComplexGrid &ComplexGrid::operator+=(const ComplexGrid &o) {
  require_shape(shape_, o.shape_, "kspace-core", "rhs");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexGrid &ComplexGrid::operator-=(const ComplexGrid &o) {
  require_shape(shape_, o.shape_, "kspace-core", "rhs");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexGrid &ComplexGrid::operator*=(cdouble s) {
  for (auto &v : data_) v *= s;
  return *this;
}

ComplexGrid operator+(ComplexGrid a, const ComplexGrid &b) { return a += b; }
ComplexGrid operator-(ComplexGrid a, const ComplexGrid &b) { return a -= b; }
ComplexGrid operator*(cdouble s, ComplexGrid a) { return a *= s; }

RealGrid::RealGrid(Shape shape, double fill) : shape_(shape), data_(shape.size(), fill) {
  require_nonempty(shape, "kspace-core");
}

RealGrid::RealGrid(Shape shape, std::vector<double> data) : shape_(shape), data_(std::move(data)) {
  require_nonempty(shape, "kspace-core");
  if (data_.size() != shape.size())
    throw Error("kspace-core", "data", "length " + std::to_string(data_.size()) +
                                           " does not match " + to_string(shape));
}

double RealGrid::max() const { return *std::max_element(data_.begin(), data_.end()); }
double RealGrid::min() const { return *std::min_element(data_.begin(), data_.end()); }

BinaryMask::BinaryMask(Shape shape, bool fill) : shape_(shape), bits_(shape.size(), fill ? 1 : 0) {
  require_nonempty(shape, "masks-weights");
}

std::size_t BinaryMask::popcount() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryMask BinaryMask::complement() const {
  BinaryMask out = *this;
  for (auto &b : out.bits_) b ^= 1;
  return out;
}

BinaryMask BinaryMask::operator|(const BinaryMask &o) const {
  require_shape(shape_, o.shape_, "masks-weights", "mask");
  BinaryMask out = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] |= o.bits_[i];
  return out;
}

BinaryMask BinaryMask::operator&(const BinaryMask &o) const {
  require_shape(shape_, o.shape_, "masks-weights", "mask");
  BinaryMask out = *this;
  for (std::size_t i = 0; i < bits_.size(); ++i) out.bits_[i] &= o.bits_[i];
  return out;
}

RealGrid BinaryMask::to_real() const {
  RealGrid g(shape_);
  for (std::size_t i = 0; i < bits_.size(); ++i) g[i] = bits_[i];
  return g;
}

BinaryMask BinaryMask::from_real(const RealGrid &g) {
  BinaryMask m(g.shape());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] != 0.0 && g[i] != 1.0)
      throw Error("masks-weights", "mask", "value at index " + std::to_string(i) + " is not 0 or 1");
    m.bits_[i] = g[i] == 1.0 ? 1 : 0;
  }
  return m;
}

CoilStack::CoilStack(std::vector<ComplexGrid> coils) : coils_(std::move(coils)) {
  if (coils_.empty()) throw Error("kspace-core", "coils", "coil stack must hold at least one coil");
  for (const auto &c : coils_) {
    require_shape(coils_.front().shape(), c.shape(), "kspace-core", "coils");
    if (c.domain() != coils_.front().domain())
      throw Error("kspace-core", "coils", "coils disagree on domain");
  }
}

void require_finite(const ComplexGrid &g, const char *module, const char *param) {
  if (!g.all_finite()) throw Error(module, param, "grid contains non-finite values");
}

void require_domain(const ComplexGrid &g, Domain d, const char *module, const char *param) {
  if (g.domain() != d)
    throw Error(module, param, std::string("expected ") + to_string(d) + " domain, got " +
                                   to_string(g.domain()));
}

void require_shape(const Shape &a, const Shape &b, const char *module, const char *param) {
  if (!(a == b))
    throw Error(module, param, "shape mismatch: " + to_string(a) + " vs " + to_string(b));
}

} // namespace kdiff
