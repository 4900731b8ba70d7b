#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lncd/model.hpp"

namespace lncd::gf {

using Element = std::uint16_t;
using CoefficientVector = std::vector<Element>;

// Default reduction polynomial for GF(2^q), bit i = coefficient of x^i.
// Degree 8 is the AES polynomial x^8+x^4+x^3+x+1.
std::uint32_t default_polynomial(unsigned exponent);

// Exhaustive trial division by every polynomial of degree <= q/2.
bool is_irreducible(std::uint32_t polynomial);

// Carry-less multiply followed by reduction, bit by bit.
Element mul_shift_reduce(Element a, Element b, std::uint32_t polynomial, unsigned exponent);

// GF(2^q) arithmetic with log/antilog tables. Immutable after construction.
class FieldContext {
 public:
  explicit FieldContext(unsigned exponent);
  FieldContext(unsigned exponent, std::uint32_t polynomial);

  // Shared context for the default polynomial; built once per exponent.
  static const FieldContext& standard(unsigned exponent);

  unsigned exponent() const noexcept { return exponent_; }
  std::uint32_t polynomial() const noexcept { return polynomial_; }
  std::uint32_t order() const noexcept { return 1u << exponent_; }

  Element mul(Element a, Element b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Element inv(Element a) const;

  // dst[k] ^= c * src[k] for all k.
  void axpy(Element c, std::span<const Element> src, std::span<Element> dst) const noexcept;
  // v[k] = c * v[k] for all k.
  void scale(Element c, std::span<Element> v) const noexcept;

 private:
  void build_tables();

  unsigned exponent_;
  std::uint32_t polynomial_;
  std::vector<std::uint32_t> log_;
  std::vector<Element> exp_;  // doubled so log sums need no reduction
  std::vector<Element> product_;  // full c*x table, q <= 8 only
};

// Row-reduced basis of a subspace of GF(2^q)^n.
class RankTracker {
 public:
  explicit RankTracker(std::size_t dimension);

  static RankTracker full(std::size_t dimension);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t rank() const noexcept { return rows_.size(); }
  bool complete() const noexcept { return rank() == dimension_; }

  // Returns true iff v was outside the span; the basis absorbs it if so.
  bool insert(const FieldContext& field, CoefficientVector v);

  // True iff v lies in the span (tracker unchanged).
  bool contains(const FieldContext& field, CoefficientVector v) const;

  std::span<const CoefficientVector> basis() const noexcept { return rows_; }
  std::span<const std::size_t> pivots() const noexcept { return pivots_; }

 private:
  void reduce(const FieldContext& field, CoefficientVector& v) const;

  std::size_t dimension_;
  std::vector<CoefficientVector> rows_;
  std::vector<std::size_t> pivots_;  // pivot column of rows_[k]
};

// sum_k c_k * stored[k] with each c_k uniform over the field.
CoefficientVector random_combination(const FieldContext& field,
                                     std::span<const CoefficientVector> stored,
                                     RandomStream& stream);

}  // namespace lncd::gf
