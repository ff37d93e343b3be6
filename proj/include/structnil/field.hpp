#pragma once

// Exact scalars: prime fields F_p, the rationals Q (GMP), and rational
// functions F_p(t).  Every value is kept in canonical form, so structural
// equality is field equality.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "structnil/error.hpp"

namespace structnil {

class Scalar;

namespace modp {

inline uint32_t add(uint32_t a, uint32_t b, uint32_t p) {
  uint32_t s = a + b;
  return s >= p ? s - p : s;
}
inline uint32_t sub(uint32_t a, uint32_t b, uint32_t p) {
  return a >= b ? a - b : a + p - b;
}
inline uint32_t mul(uint32_t a, uint32_t b, uint32_t p) {
  return static_cast<uint32_t>(static_cast<uint64_t>(a) * b % p);
}
inline uint32_t neg(uint32_t a, uint32_t p) { return a == 0 ? 0 : p - a; }
uint32_t pow(uint32_t a, uint64_t e, uint32_t p);
uint32_t inv(uint32_t a, uint32_t p);
uint32_t reduce(long long v, uint32_t p);
bool is_prime(uint64_t p);
bool is_square(uint32_t a, uint32_t p);
/// Smallest quadratic non-residue modulo an odd prime.
uint32_t least_nonsquare(uint32_t p);

}  // namespace modp

/// Dense univariate polynomial over F_p, lowest coefficient first, with no
/// trailing zero coefficients.
class Poly {
 public:
  explicit Poly(uint32_t p) : p_(p) {}
  Poly(uint32_t p, std::vector<uint32_t> coeffs);

  static Poly constant(uint32_t p, uint32_t c);
  static Poly variable(uint32_t p);

  uint32_t modulus() const { return p_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  uint32_t lead() const { return c_.empty() ? 0 : c_.back(); }
  const std::vector<uint32_t>& coeffs() const { return c_; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator-() const;
  Poly scaled(uint32_t c) const;
  Poly monic() const;
  /// Euclidean division; divisor must be nonzero.
  std::pair<Poly, Poly> divmod(const Poly& d) const;
  uint32_t eval(uint32_t t0) const;

  bool operator==(const Poly& o) const { return p_ == o.p_ && c_ == o.c_; }

  std::string to_string() const;

 private:
  void trim();

  uint32_t p_;
  std::vector<uint32_t> c_;
};

Poly gcd(Poly a, Poly b);

/// Reduced fraction num/den over F_p[t] with monic denominator.
class RatFunc {
 public:
  explicit RatFunc(uint32_t p) : num_(p), den_(Poly::constant(p, 1)) {}
  explicit RatFunc(Poly num);
  RatFunc(Poly num, Poly den);

  uint32_t modulus() const { return num_.modulus(); }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator-() const;
  RatFunc inv() const;

  /// Value at t0, or nullopt when t0 is a root of the denominator.
  std::optional<uint32_t> eval(uint32_t t0) const;

  bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
  std::string to_string() const;

 private:
  void normalize();

  Poly num_;
  Poly den_;
};

class FieldSpec {
 public:
  enum class Kind { prime, rationals, rational_functions };

  FieldSpec() = default;  // Q

  static FieldSpec gf(uint32_t p);
  static FieldSpec rationals() { return FieldSpec(); }
  static FieldSpec gf_t(uint32_t p);
  /// Accepts "gf(p)", "q" and "gf(p)(t)".
  static FieldSpec parse(std::string_view text);

  Kind kind() const { return kind_; }
  uint32_t characteristic() const { return p_; }
  bool is_finite() const { return kind_ == Kind::prime; }
  /// |F| for finite fields, nullopt otherwise.
  std::optional<uint64_t> order() const;
  /// True when |F| >= bound (always true for infinite fields).
  bool has_at_least(uint64_t bound) const;

  std::string to_string() const;

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(long long v) const;
  Scalar parse_scalar(std::string_view text) const;
  /// The i-th element of a finite field in the fixed enumeration order 0,1,...,p-1.
  Scalar element(uint64_t i) const;

  bool operator==(const FieldSpec& o) const { return kind_ == o.kind_ && p_ == o.p_; }
  bool operator!=(const FieldSpec& o) const { return !(*this == o); }

 private:
  FieldSpec(Kind k, uint32_t p) : kind_(k), p_(p) {}

  Kind kind_ = Kind::rationals;
  uint32_t p_ = 0;
};

class Scalar {
 public:
  struct Residue {
    uint32_t value;
    uint32_t p;
  };

  explicit Scalar(Residue r) : rep_(r) {}
  explicit Scalar(mpq_class q) : rep_(std::move(q)) { std::get<mpq_class>(rep_).canonicalize(); }
  explicit Scalar(RatFunc f) : rep_(std::move(f)) {}

  FieldSpec field() const;

  bool is_zero() const;
  bool is_one() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const { return *this * o.inv(); }
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar inv() const;

  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  std::string to_string() const;

  bool is_residue() const { return std::holds_alternative<Residue>(rep_); }
  uint32_t residue() const { return std::get<Residue>(rep_).value; }
  const mpq_class& rational() const { return std::get<mpq_class>(rep_); }
  const RatFunc& ratfunc() const { return std::get<RatFunc>(rep_); }

 private:
  std::variant<Residue, mpq_class, RatFunc> rep_;
};

enum class ArithOp { add, sub, mul, inv, neg, eq };

/// Checked arithmetic entry point: validates that operands belong to `spec`.
/// Comparisons return one() for true and zero() for false.
Scalar field_arithmetic(const FieldSpec& spec, ArithOp op, const Scalar& a,
                        const std::optional<Scalar>& b = std::nullopt);

// Hot path for prime fields stays inline.
inline Scalar Scalar::operator+(const Scalar& o) const {
  if (auto* a = std::get_if<Residue>(&rep_)) {
    auto* b = std::get_if<Residue>(&o.rep_);
    if (!b || b->p != a->p) fail(ErrorCode::FieldMismatch, "add");
    return Scalar(Residue{modp::add(a->value, b->value, a->p), a->p});
  }
  if (auto* a = std::get_if<mpq_class>(&rep_)) {
    auto* b = std::get_if<mpq_class>(&o.rep_);
    if (!b) fail(ErrorCode::FieldMismatch, "add");
    return Scalar(mpq_class(*a + *b));
  }
  auto* b = std::get_if<RatFunc>(&o.rep_);
  if (!b || b->modulus() != std::get<RatFunc>(rep_).modulus()) fail(ErrorCode::FieldMismatch, "add");
  return Scalar(std::get<RatFunc>(rep_) + *b);
}

inline Scalar Scalar::operator*(const Scalar& o) const {
  if (auto* a = std::get_if<Residue>(&rep_)) {
    auto* b = std::get_if<Residue>(&o.rep_);
    if (!b || b->p != a->p) fail(ErrorCode::FieldMismatch, "mul");
    return Scalar(Residue{modp::mul(a->value, b->value, a->p), a->p});
  }
  if (auto* a = std::get_if<mpq_class>(&rep_)) {
    auto* b = std::get_if<mpq_class>(&o.rep_);
    if (!b) fail(ErrorCode::FieldMismatch, "mul");
    return Scalar(mpq_class(*a * *b));
  }
  auto* b = std::get_if<RatFunc>(&o.rep_);
  if (!b || b->modulus() != std::get<RatFunc>(rep_).modulus()) fail(ErrorCode::FieldMismatch, "mul");
  return Scalar(std::get<RatFunc>(rep_) * *b);
}

inline bool Scalar::is_zero() const {
  if (auto* a = std::get_if<Residue>(&rep_)) return a->value == 0;
  if (auto* a = std::get_if<mpq_class>(&rep_)) return sgn(*a) == 0;
  return std::get<RatFunc>(rep_).is_zero();
}

}  // namespace structnil
