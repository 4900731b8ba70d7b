#include "lncd/gf.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <memory>
#include <mutex>
#include <sstream>

namespace lncd::gf {

namespace {

// Irreducible reduction polynomials. All are primitive except degree 8, which
// is the AES polynomial; there x has order 51 and the tables use 0x03.
constexpr std::array<std::uint32_t, 17> kDefaultPolynomials = {
    0,
    0x3,      // x + 1
    0x7,      // x^2 + x + 1
    0xB,      // x^3 + x + 1
    0x13,     // x^4 + x + 1
    0x25,     // x^5 + x^2 + 1
    0x43,     // x^6 + x + 1
    0x89,     // x^7 + x^3 + 1
    0x11B,    // x^8 + x^4 + x^3 + x + 1
    0x211,    // x^9 + x^4 + 1
    0x409,    // x^10 + x^3 + 1
    0x805,    // x^11 + x^2 + 1
    0x1053,   // x^12 + x^6 + x^4 + x + 1
    0x201B,   // x^13 + x^4 + x^3 + x + 1
    0x4443,   // x^14 + x^10 + x^6 + x + 1
    0x8003,   // x^15 + x + 1
    0x1100B,  // x^16 + x^12 + x^3 + x + 1
};

int degree(std::uint64_t poly) { return poly == 0 ? -1 : 63 - std::countl_zero(poly); }

std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
  const int dm = degree(m);
  for (int da = degree(a); da >= dm; da = degree(a)) a ^= m << (da - dm);
  return a;
}

void check_exponent(unsigned exponent) {
  if (exponent < kMinFieldExponent || exponent > kMaxFieldExponent) {
    std::ostringstream msg;
    msg << "field_exponent: must be in [" << kMinFieldExponent << ", " << kMaxFieldExponent
        << "] (got " << exponent << ")";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

}  // namespace

std::uint32_t default_polynomial(unsigned exponent) {
  check_exponent(exponent);
  return kDefaultPolynomials[exponent];
}

bool is_irreducible(std::uint32_t polynomial) {
  const int d = degree(polynomial);
  if (d < 1) return false;
  for (std::uint64_t f = 2; degree(f) <= d / 2; ++f) {
    if (poly_mod(polynomial, f) == 0) return false;
  }
  return true;
}

Element mul_shift_reduce(Element a, Element b, std::uint32_t polynomial, unsigned exponent) {
  std::uint32_t acc = 0;
  std::uint32_t x = a;
  for (std::uint32_t y = b; y != 0; y >>= 1) {
    if (y & 1u) acc ^= x;
    x <<= 1;
    if (x >> exponent) x ^= polynomial;
  }
  return static_cast<Element>(acc);
}

FieldContext::FieldContext(unsigned exponent)
    : FieldContext(exponent, default_polynomial(exponent)) {}

const FieldContext& FieldContext::standard(unsigned exponent) {
  if (exponent < 1 || exponent > 16) {
    std::ostringstream msg;
    msg << "field_exponent: must lie in 1..16 (got " << exponent << ")";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
  static std::array<std::once_flag, 17> once;
  static std::array<std::unique_ptr<FieldContext>, 17> cache;
  std::call_once(once[exponent],
                 [exponent] { cache[exponent] = std::make_unique<FieldContext>(exponent); });
  return *cache[exponent];
}

FieldContext::FieldContext(unsigned exponent, std::uint32_t polynomial)
    : exponent_(exponent), polynomial_(polynomial) {
  check_exponent(exponent);
  if (degree(polynomial) != static_cast<int>(exponent))
    throw Error(ErrorCode::InvalidArgument, "reduction polynomial degree must equal field exponent");
  if (!is_irreducible(polynomial))
    throw Error(ErrorCode::InvalidArgument, "reduction polynomial is not irreducible over GF(2)");
  build_tables();
}

void FieldContext::build_tables() {
  const std::uint32_t size = order();
  const std::uint32_t group = size - 1;
  log_.assign(size, 0);
  exp_.assign(2 * static_cast<std::size_t>(group) + 1, 1);
  if (group == 1) return;  // GF(2)

  // x generates the group for the primitive defaults; an irreducible override
  // that is not primitive needs a search.
  for (std::uint32_t g = 2; g < size; ++g) {
    Element v = 1;
    std::uint32_t k = 0;
    do {
      exp_[k] = v;
      log_[v] = k;
      v = mul_shift_reduce(v, static_cast<Element>(g), polynomial_, exponent_);
      ++k;
    } while (v != 1);
    if (k == group) break;
  }
  for (std::uint32_t k = group; k < exp_.size(); ++k) exp_[k] = exp_[k - group];

  if (exponent_ <= 8) {
    product_.assign(static_cast<std::size_t>(size) * size, 0);
    for (std::uint32_t a = 1; a < size; ++a)
      for (std::uint32_t b = 1; b < size; ++b)
        product_[(a << exponent_) | b] = exp_[log_[a] + log_[b]];
  }
}

Element FieldContext::inv(Element a) const {
  if (a == 0) throw Error(ErrorCode::ZeroInverse, "field_inv: zero has no inverse");
  const std::uint32_t group = order() - 1;
  return exp_[(group - log_[a]) % group];
}

void FieldContext::axpy(Element c, std::span<const Element> src,
                        std::span<Element> dst) const noexcept {
  if (c == 0) return;
  if (c == 1) {
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] ^= src[k];
    return;
  }
  if (!product_.empty()) {
    const Element* row = product_.data() + (static_cast<std::size_t>(c) << exponent_);
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] ^= row[src[k]];
    return;
  }
  const std::uint32_t lc = log_[c];
  for (std::size_t k = 0; k < dst.size(); ++k) {
    const Element s = src[k];
    if (s != 0) dst[k] ^= exp_[lc + log_[s]];
  }
}

void FieldContext::scale(Element c, std::span<Element> v) const noexcept {
  if (c == 1) return;
  if (c == 0) {
    std::fill(v.begin(), v.end(), Element{0});
    return;
  }
  const std::uint32_t lc = log_[c];
  for (auto& x : v)
    if (x != 0) x = exp_[lc + log_[x]];
}

RankTracker::RankTracker(std::size_t dimension) : dimension_(dimension) {}

RankTracker RankTracker::full(std::size_t dimension) {
  RankTracker tracker(dimension);
  for (std::size_t i = 0; i < dimension; ++i) {
    CoefficientVector e(dimension, 0);
    e[i] = 1;
    tracker.rows_.push_back(std::move(e));
    tracker.pivots_.push_back(i);
  }
  return tracker;
}

void RankTracker::reduce(const FieldContext& field, CoefficientVector& v) const {
  // Rows are fully reduced, so eliminating one pivot never disturbs another.
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const Element c = v[pivots_[k]];
    if (c != 0) field.axpy(c, rows_[k], v);
  }
}

bool RankTracker::insert(const FieldContext& field, CoefficientVector v) {
  if (v.size() != dimension_) {
    std::ostringstream msg;
    msg << "rank_insert: vector length " << v.size() << " does not match dimension " << dimension_;
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  if (complete()) return false;
  reduce(field, v);
  const auto lead = std::find_if(v.begin(), v.end(), [](Element x) { return x != 0; });
  if (lead == v.end()) return false;

  const std::size_t pivot = static_cast<std::size_t>(lead - v.begin());
  field.scale(field.inv(*lead), v);
  for (auto& row : rows_) {
    const Element c = row[pivot];
    if (c != 0) field.axpy(c, v, row);
  }
  pivots_.push_back(pivot);
  rows_.push_back(std::move(v));
  return true;
}

bool RankTracker::contains(const FieldContext& field, CoefficientVector v) const {
  if (v.size() != dimension_)
    throw Error(ErrorCode::DimensionMismatch, "contains: vector length does not match dimension");
  reduce(field, v);
  return std::all_of(v.begin(), v.end(), [](Element x) { return x == 0; });
}

CoefficientVector random_combination(const FieldContext& field,
                                     std::span<const CoefficientVector> stored,
                                     RandomStream& stream) {
  if (stored.empty())
    throw Error(ErrorCode::EmptyStorage, "random_combination: node has nothing stored");
  CoefficientVector out(stored.front().size(), 0);
  for (const auto& row : stored) {
    const auto c = static_cast<Element>(stream.bits(field.exponent()));
    field.axpy(c, row, out);
  }
  return out;
}

}  // namespace lncd::gf
