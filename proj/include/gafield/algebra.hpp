#pragma once

// Dense geometric algebra over R^n with a diagonal metric (signature entries +1/-1).
// Basis blades are indexed by bitmask: bit i set <=> generator e_{i+1} is a factor,
// factors ordered by ascending index (e1^e2 lives at mask 0b11 with coefficient +1).

#include <bit>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace gafield {

using blade_t = std::uint32_t;

inline constexpr int max_dim = 12;

struct ga_error : std::runtime_error {
  explicit ga_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct algebra_mismatch : ga_error {
  explicit algebra_mismatch(const std::string& msg) : ga_error(msg) {}
};

struct singular_map : ga_error {
  double det;
  singular_map(const std::string& msg, double d) : ga_error(msg), det(d) {}
};

// Parity of the bubble sort that merges two ascending factor lists.
inline int reorder_sign(blade_t a, blade_t b) {
  int swaps = 0;
  a >>= 1;
  while (a) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

class Algebra {
 public:
  Algebra() = default;

  Algebra(int dim, std::vector<int> signature) {
    if (dim < 1 || dim > max_dim)
      throw ga_error("algebra dimension must be in [1," + std::to_string(max_dim) + "]");
    if (static_cast<int>(signature.size()) != dim)
      throw ga_error("signature length does not match dimension");
    for (int s : signature)
      if (s != 1 && s != -1) throw ga_error("signature entries must be +1 or -1");
    d_ = std::make_shared<const Data>(Data{dim, std::move(signature)});
  }

  static Algebra euclidean(int dim) { return Algebra(dim, std::vector<int>(dim, 1)); }

  // (+,-,-,...,-): generator 1 is timelike
  static Algebra minkowski(int dim) {
    std::vector<int> s(dim, -1);
    s[0] = 1;
    return Algebra(dim, s);
  }

  bool valid() const { return d_ != nullptr; }
  int dim() const { return d_->dim; }
  std::size_t size() const { return std::size_t{1} << d_->dim; }
  int signature(int i) const {  // i is 1-based generator index
    if (i < 1 || i > d_->dim) throw ga_error("generator index out of range");
    return d_->sig[i - 1];
  }
  const std::vector<int>& signatures() const { return d_->sig; }

  bool same(const Algebra& o) const {
    if (d_ == o.d_) return true;
    if (!d_ || !o.d_) return false;
    return d_->dim == o.d_->dim && d_->sig == o.d_->sig;
  }

  void require_same(const Algebra& o) const {
    if (!same(o)) throw algebra_mismatch("operands belong to different algebras");
  }

  // geometric product of two basis blades: result mask is a^b, returned value is the
  // reordering parity times the metric factor from contracted common generators
  double blade_product_sign(blade_t a, blade_t b) const {
    double s = reorder_sign(a, b);
    blade_t common = a & b;
    while (common) {
      int i = std::countr_zero(common);
      s *= d_->sig[i];
      common &= common - 1;
    }
    return s;
  }

  // scalar square e_J e_J of a basis blade
  double blade_square(blade_t mask) const { return blade_product_sign(mask, mask); }

 private:
  struct Data {
    int dim;
    std::vector<int> sig;
  };
  std::shared_ptr<const Data> d_;
};

inline int grade_of(blade_t mask) { return std::popcount(mask); }

inline std::string blade_name(blade_t mask, int dim) {
  if (mask == 0) return "1";
  std::string out = "e";
  bool sep = dim > 9;
  bool first = true;
  for (int i = 0; i < dim; ++i) {
    if (mask & (blade_t{1} << i)) {
      if (!first && sep) out += ',';
      out += std::to_string(i + 1);
      first = false;
    }
  }
  return out;
}

}  // namespace gafield
