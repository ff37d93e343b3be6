#include "structnil/field.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace structnil {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::CharTwoUnsupported: return "CharTwoUnsupported";
    case ErrorCode::DegenerateForm: return "DegenerateForm";
    case ErrorCode::NonIsotropicVector: return "NonIsotropicVector";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotNilpotent: return "NotNilpotent";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::FlagNotSingular: return "FlagNotSingular";
    case ErrorCode::FlagNotMaximal: return "FlagNotMaximal";
    case ErrorCode::UnsupportedExtension: return "UnsupportedExtension";
    case ErrorCode::HypothesisUnmet: return "HypothesisUnmet";
    case ErrorCode::CommonKernelEmpty: return "CommonKernelEmpty";
    case ErrorCode::NoIsotropicCommonKernelVector: return "NoIsotropicCommonKernelVector";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::BadParameters: return "BadParameters";
    case ErrorCode::CertificateFailed: return "CertificateFailed";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// modular helpers

namespace modp {

uint32_t pow(uint32_t a, uint64_t e, uint32_t p) {
  uint64_t r = 1 % p, b = a % p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<uint32_t>(r);
}

uint32_t inv(uint32_t a, uint32_t p) {
  if (a % p == 0) fail(ErrorCode::DivisionByZero, "inverse of 0 mod " + std::to_string(p));
  // extended Euclid keeps this valid for any prime, including 2
  int64_t t = 0, nt = 1, r = p, nr = a % p;
  while (nr) {
    int64_t q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  if (t < 0) t += p;
  return static_cast<uint32_t>(t);
}

uint32_t reduce(long long v, uint32_t p) {
  long long r = v % static_cast<long long>(p);
  if (r < 0) r += p;
  return static_cast<uint32_t>(r);
}

bool is_prime(uint64_t p) {
  if (p < 2) return false;
  for (uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

bool is_square(uint32_t a, uint32_t p) {
  a %= p;
  if (a == 0 || p == 2) return true;
  return pow(a, (p - 1) / 2, p) == 1;
}

uint32_t least_nonsquare(uint32_t p) {
  if (p == 2) fail(ErrorCode::CharTwoUnsupported, "every element of F_2 is a square");
  for (uint32_t a = 2; a < p; ++a)
    if (!is_square(a, p)) return a;
  fail(ErrorCode::BadParameters, "no non-square");
}

}  // namespace modp

// ---------------------------------------------------------------------------
// Poly

Poly::Poly(uint32_t p, std::vector<uint32_t> coeffs) : p_(p), c_(std::move(coeffs)) {
  for (auto& c : c_) c %= p_;
  trim();
}

Poly Poly::constant(uint32_t p, uint32_t c) { return Poly(p, {c}); }
Poly Poly::variable(uint32_t p) { return Poly(p, {0, 1}); }

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<uint32_t> r(std::max(c_.size(), o.c_.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    uint32_t a = i < c_.size() ? c_[i] : 0;
    uint32_t b = i < o.c_.size() ? o.c_[i] : 0;
    r[i] = modp::add(a, b, p_);
  }
  return Poly(p_, std::move(r));
}

Poly Poly::operator-() const {
  std::vector<uint32_t> r(c_);
  for (auto& c : r) c = modp::neg(c, p_);
  return Poly(p_, std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  if (is_zero() || o.is_zero()) return Poly(p_);
  std::vector<uint64_t> acc(c_.size() + o.c_.size() - 1, 0);
  for (size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    for (size_t j = 0; j < o.c_.size(); ++j) acc[i + j] = (acc[i + j] + uint64_t(c_[i]) * o.c_[j]) % p_;
  }
  std::vector<uint32_t> r(acc.begin(), acc.end());
  return Poly(p_, std::move(r));
}

Poly Poly::scaled(uint32_t c) const {
  std::vector<uint32_t> r(c_);
  for (auto& x : r) x = modp::mul(x, c, p_);
  return Poly(p_, std::move(r));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(modp::inv(lead(), p_));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
  if (d.is_zero()) fail(ErrorCode::DivisionByZero, "polynomial division by zero");
  std::vector<uint32_t> rem(c_);
  const int dd = d.degree();
  if (degree() < dd) return {Poly(p_), *this};
  std::vector<uint32_t> q(static_cast<size_t>(degree() - dd + 1), 0);
  const uint32_t li = modp::inv(d.lead(), p_);
  for (int k = degree(); k >= dd; --k) {
    uint32_t c = rem[static_cast<size_t>(k)];
    if (!c) continue;
    uint32_t f = modp::mul(c, li, p_);
    q[static_cast<size_t>(k - dd)] = f;
    for (int j = 0; j <= dd; ++j) {
      auto& slot = rem[static_cast<size_t>(k - dd + j)];
      slot = modp::sub(slot, modp::mul(f, d.c_[static_cast<size_t>(j)], p_), p_);
    }
  }
  return {Poly(p_, std::move(q)), Poly(p_, std::move(rem))};
}

uint32_t Poly::eval(uint32_t t0) const {
  uint32_t r = 0;
  for (size_t i = c_.size(); i-- > 0;) r = modp::add(modp::mul(r, t0, p_), c_[i], p_);
  return r;
}

std::string Poly::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  for (size_t i = c_.size(); i-- > 0;) {
    uint32_t c = c_[i];
    if (!c) continue;
    if (!out.empty()) out += "+";
    if (i == 0) {
      out += std::to_string(c);
      continue;
    }
    if (c != 1) out += std::to_string(c) + "*";
    out += "t";
    if (i > 1) out += "^" + std::to_string(i);
  }
  return out;
}

Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// ---------------------------------------------------------------------------
// RatFunc

RatFunc::RatFunc(Poly num) : num_(std::move(num)), den_(Poly::constant(num_.modulus(), 1)) {}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) fail(ErrorCode::DivisionByZero, "rational function with zero denominator");
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = Poly::constant(num_.modulus(), 1);
    return;
  }
  if (!den_.is_one()) {
    Poly g = gcd(num_, den_);
    if (!g.is_one()) {
      num_ = num_.divmod(g).first;
      den_ = den_.divmod(g).first;
    }
    uint32_t li = modp::inv(den_.lead(), den_.modulus());
    num_ = num_.scaled(li);
    den_ = den_.scaled(li);
  }
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (den_ == o.den_) return RatFunc(num_ + o.num_, den_);
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-() const {
  RatFunc r(*this);
  r.num_ = -r.num_;
  return r;
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
  if (is_zero() || o.is_zero()) return RatFunc(modulus());
  if (den_.is_one() && o.den_.is_one()) return RatFunc(num_ * o.num_);
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::inv() const {
  if (is_zero()) fail(ErrorCode::DivisionByZero, "inverse of the zero rational function");
  return RatFunc(den_, num_);
}

std::optional<uint32_t> RatFunc::eval(uint32_t t0) const {
  uint32_t d = den_.eval(t0);
  if (d == 0) return std::nullopt;
  return modp::mul(num_.eval(t0), modp::inv(d, modulus()), modulus());
}

std::string RatFunc::to_string() const {
  if (den_.is_one()) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

// ---------------------------------------------------------------------------
// FieldSpec

FieldSpec FieldSpec::gf(uint32_t p) {
  if (!modp::is_prime(p)) fail(ErrorCode::BadParameters, "gf(p) requires p prime, got " + std::to_string(p));
  return FieldSpec(Kind::prime, p);
}

FieldSpec FieldSpec::gf_t(uint32_t p) {
  if (!modp::is_prime(p)) fail(ErrorCode::BadParameters, "gf(p)(t) requires p prime, got " + std::to_string(p));
  return FieldSpec(Kind::rational_functions, p);
}

FieldSpec FieldSpec::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "q") return rationals();
  auto bad = [&]() -> void { fail(ErrorCode::ParseError, "field spec '" + std::string(text) + "' (expected gf(p), q or gf(p)(t))"); };
  if (s.rfind("gf(", 0) != 0) bad();
  auto close = s.find(')');
  if (close == std::string::npos) bad();
  uint32_t p = 0;
  auto digits = std::string_view(s).substr(3, close - 3);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), p);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) bad();
  auto rest = std::string_view(s).substr(close + 1);
  if (rest.empty()) return gf(p);
  if (rest == "(t)") return gf_t(p);
  fail(ErrorCode::ParseError, "field spec '" + std::string(text) + "' (expected gf(p), q or gf(p)(t))");
}

std::optional<uint64_t> FieldSpec::order() const {
  if (kind_ == Kind::prime) return p_;
  return std::nullopt;
}

bool FieldSpec::has_at_least(uint64_t bound) const {
  auto q = order();
  return !q || *q >= bound;
}

std::string FieldSpec::to_string() const {
  switch (kind_) {
    case Kind::prime: return "gf(" + std::to_string(p_) + ")";
    case Kind::rationals: return "q";
    case Kind::rational_functions: return "gf(" + std::to_string(p_) + ")(t)";
  }
  return "?";
}

Scalar FieldSpec::zero() const { return from_int(0); }
Scalar FieldSpec::one() const { return from_int(1); }

Scalar FieldSpec::from_int(long long v) const {
  switch (kind_) {
    case Kind::prime: return Scalar(Scalar::Residue{modp::reduce(v, p_), p_});
    case Kind::rationals: return Scalar(mpq_class(mpz_class(static_cast<long>(v))));
    case Kind::rational_functions: return Scalar(RatFunc(Poly::constant(p_, modp::reduce(v, p_))));
  }
  fail(ErrorCode::BadParameters, "unknown field");
}

Scalar FieldSpec::element(uint64_t i) const {
  if (kind_ != Kind::prime) fail(ErrorCode::BadParameters, "element enumeration needs a finite field");
  return Scalar(Scalar::Residue{static_cast<uint32_t>(i % p_), p_});
}

namespace {

// Recursive-descent parser for scalar literals:
//   expr := term (('+'|'-') term)*;  term := unary (('*'|'/') unary)*;
//   unary := '-' unary | power;  power := atom ('^' integer)?;
//   atom := integer | 't' | '(' expr ')'
class ScalarParser {
 public:
  ScalarParser(const FieldSpec& f, std::string_view s) : f_(f), s_(s) {}

  Scalar run() {
    Scalar v = expr();
    skip();
    if (i_ != s_.size()) error("trailing characters");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& why) {
    fail(ErrorCode::ParseError, "scalar '" + std::string(s_) + "' over " + f_.to_string() + ": " + why);
  }
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  Scalar expr() {
    Scalar v = term();
    for (;;) {
      if (eat('+')) v = v + term();
      else if (eat('-')) v = v - term();
      else return v;
    }
  }
  Scalar term() {
    Scalar v = unary();
    for (;;) {
      if (eat('*')) v = v * unary();
      else if (eat('/')) {
        Scalar d = unary();
        if (d.is_zero()) fail(ErrorCode::DivisionByZero, "in scalar literal '" + std::string(s_) + "'");
        v = v / d;
      } else return v;
    }
  }
  Scalar unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Scalar power() {
    Scalar base = atom();
    if (!eat('^')) return base;
    skip();
    std::string digits = integer_digits();
    if (digits.empty()) error("exponent must be a non-negative integer");
    unsigned long e = std::stoul(digits);
    Scalar r = f_.one();
    for (unsigned long k = 0; k < e; ++k) r = r * base;
    return r;
  }
  std::string integer_digits() {
    std::string d;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) d += s_[i_++];
    return d;
  }
  Scalar atom() {
    skip();
    if (eat('(')) {
      Scalar v = expr();
      if (!eat(')')) error("missing ')'");
      return v;
    }
    if (i_ < s_.size() && s_[i_] == 't') {
      ++i_;
      if (f_.kind() != FieldSpec::Kind::rational_functions) error("'t' only exists in gf(p)(t)");
      return Scalar(RatFunc(Poly::variable(f_.characteristic())));
    }
    std::string digits = integer_digits();
    if (digits.empty()) error("expected a number");
    if (f_.kind() == FieldSpec::Kind::rationals) return Scalar(mpq_class(mpz_class(digits)));
    uint32_t p = f_.characteristic();
    uint64_t r = 0;
    for (char c : digits) r = (r * 10 + static_cast<uint64_t>(c - '0')) % p;
    return f_.from_int(static_cast<long long>(r));
  }

  const FieldSpec& f_;
  std::string_view s_;
  size_t i_ = 0;
};

}  // namespace

Scalar FieldSpec::parse_scalar(std::string_view text) const { return ScalarParser(*this, text).run(); }

// ---------------------------------------------------------------------------
// Scalar

FieldSpec Scalar::field() const {
  if (auto* a = std::get_if<Residue>(&rep_)) return FieldSpec::gf(a->p);
  if (std::holds_alternative<mpq_class>(rep_)) return FieldSpec::rationals();
  return FieldSpec::gf_t(std::get<RatFunc>(rep_).modulus());
}

bool Scalar::is_one() const {
  if (auto* a = std::get_if<Residue>(&rep_)) return a->value == 1;
  if (auto* a = std::get_if<mpq_class>(&rep_)) return *a == 1;
  const auto& f = std::get<RatFunc>(rep_);
  return f.num().is_one() && f.den().is_one();
}

Scalar Scalar::operator-() const {
  if (auto* a = std::get_if<Residue>(&rep_)) return Scalar(Residue{modp::neg(a->value, a->p), a->p});
  if (auto* a = std::get_if<mpq_class>(&rep_)) return Scalar(mpq_class(-*a));
  return Scalar(-std::get<RatFunc>(rep_));
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::inv() const {
  if (is_zero()) fail(ErrorCode::DivisionByZero, "inverse of 0");
  if (auto* a = std::get_if<Residue>(&rep_)) return Scalar(Residue{modp::inv(a->value, a->p), a->p});
  if (auto* a = std::get_if<mpq_class>(&rep_)) return Scalar(mpq_class(1 / *a));
  return Scalar(std::get<RatFunc>(rep_).inv());
}

bool Scalar::operator==(const Scalar& o) const {
  if (rep_.index() != o.rep_.index()) fail(ErrorCode::FieldMismatch, "comparison across fields");
  if (auto* a = std::get_if<Residue>(&rep_)) {
    const auto& b = std::get<Residue>(o.rep_);
    if (a->p != b.p) fail(ErrorCode::FieldMismatch, "comparison across fields");
    return a->value == b.value;
  }
  if (auto* a = std::get_if<mpq_class>(&rep_)) return *a == std::get<mpq_class>(o.rep_);
  const auto& fa = std::get<RatFunc>(rep_);
  const auto& fb = std::get<RatFunc>(o.rep_);
  if (fa.modulus() != fb.modulus()) fail(ErrorCode::FieldMismatch, "comparison across fields");
  return fa == fb;
}

std::string Scalar::to_string() const {
  if (auto* a = std::get_if<Residue>(&rep_)) return std::to_string(a->value);
  if (auto* a = std::get_if<mpq_class>(&rep_)) return a->get_str();
  return std::get<RatFunc>(rep_).to_string();
}

Scalar field_arithmetic(const FieldSpec& spec, ArithOp op, const Scalar& a, const std::optional<Scalar>& b) {
  if (a.field() != spec) fail(ErrorCode::FieldMismatch, "operand is not in " + spec.to_string());
  const bool binary = op == ArithOp::add || op == ArithOp::sub || op == ArithOp::mul || op == ArithOp::eq;
  if (binary) {
    if (!b) fail(ErrorCode::BadParameters, "binary operation needs two operands");
    if (b->field() != spec) fail(ErrorCode::FieldMismatch, "operand is not in " + spec.to_string());
  }
  switch (op) {
    case ArithOp::add: return a + *b;
    case ArithOp::sub: return a - *b;
    case ArithOp::mul: return a * *b;
    case ArithOp::inv: return a.inv();
    case ArithOp::neg: return -a;
    case ArithOp::eq: return a == *b ? spec.one() : spec.zero();
  }
  fail(ErrorCode::BadParameters, "unknown operation");
}

}  // namespace structnil
