// Copyright 2026 The rooksafe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Exact integers and fractions. Every probability and moment in rooksafe is a
// Rational; conversion to binary64 happens only at output boundaries and is
// correctly rounded (nearest, ties to even).

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <concepts>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace rooksafe {

using BigInt = mpz_class;

class Rational {
 public:
  Rational() = default;

  template <std::integral T>
  Rational(T value) : value_(to_big(value)) {}  // NOLINT(google-explicit-constructor)

  Rational(const BigInt& value) : value_(value) {}  // NOLINT(google-explicit-constructor)

  Rational(const BigInt& numerator, const BigInt& denominator) {
    if (denominator == 0) {
      throw std::invalid_argument("Rational: zero denominator");
    }
    value_.get_num() = numerator;
    value_.get_den() = denominator;
    value_.canonicalize();
  }

  /// Exact value of a finite double (every binary64 is a dyadic rational).
  static Rational from_double(double x) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("Rational::from_double: non-finite input");
    }
    Rational r;
    mpq_set_d(r.value_.get_mpq_t(), x);
    return r;
  }

  /// Parses "num/den" or a bare integer.
  static Rational parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
      if (slash == std::string::npos) {
        return Rational(BigInt(text));
      }
      return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("Rational::parse: malformed fraction '" + text + "'");
    }
  }

  const BigInt& numerator() const { return value_.get_num(); }
  const BigInt& denominator() const { return value_.get_den(); }

  // Always "num/den", including integers ("3/1") and zero ("0/1").
  std::string str() const { return numerator().get_str() + "/" + denominator().get_str(); }

  int sign() const { return sgn(value_); }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.value_ == 0) {
      throw std::domain_error("Rational: division by zero");
    }
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(Rational a) {
    a.value_ = -a.value_;
    return a;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  template <std::integral T>
  static BigInt to_big(T value) {
    if constexpr (std::is_signed_v<T>) {
      return BigInt(static_cast<long>(value));
    } else {
      return BigInt(static_cast<unsigned long>(value));
    }
  }

  mpq_class value_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// Nearest binary64 to r, ties to even, with gradual underflow and overflow to
/// infinity.
inline double to_double(const Rational& r) {
  if (r.sign() == 0) {
    return 0.0;
  }
  const bool negative = r.sign() < 0;
  BigInt p = r.numerator();
  if (negative) {
    p = -p;
  }
  const BigInt& q = r.denominator();

  // e = floor(log2(p/q)).
  long e = static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2));
  {
    BigInt lhs = p;
    BigInt rhs = q;
    if (e >= 0) {
      mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    } else {
      mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    }
    if (lhs < rhs) {
      --e;
    }
  }
  if (e > std::numeric_limits<double>::max_exponent - 1) {
    return negative ? -std::numeric_limits<double>::infinity()
                    : std::numeric_limits<double>::infinity();
  }

  // Weight of the last kept bit: 2^(e-52) for normals, 2^-1074 for subnormals.
  const long ulp_exp = std::max(e - 52, -1074L);
  BigInt num = p;
  BigInt den = q;
  if (ulp_exp >= 0) {
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(ulp_exp));
  } else {
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(-ulp_exp));
  }
  BigInt quotient;
  BigInt remainder;
  mpz_fdiv_qr(quotient.get_mpz_t(), remainder.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  const int half = cmp(BigInt(remainder * 2), den);
  if (half > 0 || (half == 0 && mpz_odd_p(quotient.get_mpz_t()))) {
    quotient += 1;
  }
  // quotient <= 2^53, so get_d is exact and ldexp only shifts the exponent.
  const double magnitude = std::ldexp(quotient.get_d(), static_cast<int>(ulp_exp));
  return negative ? -magnitude : magnitude;
}

}  // namespace rooksafe
