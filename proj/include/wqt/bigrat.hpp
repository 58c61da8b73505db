#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wqt {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary-precision rational. Thin value wrapper around
// boost::multiprecision::cpp_rational; the backend keeps the canonical
// form (denominator > 0, gcd(num, den) = 1) after every operation.
class BigRat {
public:
  BigRat() : v_(0) {}
  BigRat(long n) : v_(n) {}
  BigRat(const BigInt& n) : v_(n) {}
  BigRat(long n, long d) {
    if (d == 0) throw std::domain_error("BigRat: zero denominator");
    v_ = cpp_rat(BigInt(n));
    v_ /= cpp_rat(BigInt(d));
  }
  BigRat(const BigInt& n, const BigInt& d) {
    if (d == 0) throw std::domain_error("BigRat: zero denominator");
    v_ = cpp_rat(n);
    v_ /= cpp_rat(d);
  }

  static BigRat from_string(const std::string& s) {
    BigRat r;
    r.v_.assign(s);
    return r;
  }

  BigInt num() const { return numerator(v_); }
  BigInt den() const { return denominator(v_); }

  bool is_zero() const { return v_.is_zero(); }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return denominator(v_) == 1; }
  int sign() const { return v_.sign(); }

  BigRat operator-() const { return BigRat(cpp_rat(-v_)); }

  BigRat& operator+=(const BigRat& o) { v_ += o.v_; return *this; }
  BigRat& operator-=(const BigRat& o) { v_ -= o.v_; return *this; }
  BigRat& operator*=(const BigRat& o) { v_ *= o.v_; return *this; }
  BigRat& operator/=(const BigRat& o) {
    if (o.is_zero()) throw std::domain_error("BigRat: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend BigRat operator+(BigRat a, const BigRat& b) { return a += b; }
  friend BigRat operator-(BigRat a, const BigRat& b) { return a -= b; }
  friend BigRat operator*(BigRat a, const BigRat& b) { return a *= b; }
  friend BigRat operator/(BigRat a, const BigRat& b) { return a /= b; }

  friend bool operator==(const BigRat& a, const BigRat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const BigRat& a, const BigRat& b) { return a.v_ != b.v_; }
  friend bool operator<(const BigRat& a, const BigRat& b) { return a.v_ < b.v_; }
  friend bool operator<=(const BigRat& a, const BigRat& b) { return a.v_ <= b.v_; }
  friend bool operator>(const BigRat& a, const BigRat& b) { return a.v_ > b.v_; }
  friend bool operator>=(const BigRat& a, const BigRat& b) { return a.v_ >= b.v_; }

  BigRat inv() const {
    if (is_zero()) throw std::domain_error("BigRat: inverse of zero");
    return BigRat(cpp_rat(1 / v_));
  }

  // Integer power, negative exponents allowed for nonzero values.
  BigRat pow(std::int64_t e) const {
    if (e == 0) return BigRat(1);
    if (is_zero()) {
      if (e < 0) throw std::domain_error("BigRat: 0 to negative power");
      return BigRat(0);
    }
    BigRat base = e < 0 ? inv() : *this;
    std::uint64_t n = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
    BigRat acc(1);
    while (n) {
      if (n & 1) acc *= base;
      base *= base;
      n >>= 1;
    }
    return acc;
  }

  std::string str() const {
    if (is_integer()) return num().str();
    return num().str() + "/" + den().str();
  }

  // Conversion with scaling so huge numerators/denominators cannot
  // overflow: only the leading 64 bits of each side feed the division.
  double to_double() const {
    if (is_zero()) return 0.0;
    BigInt n = num(), d = den();
    auto bits = [](const BigInt& x) { return static_cast<long>(msb(abs(x))) + 1; };
    BigInt ns = n, ds = d;
    long excess_n = bits(n) - 64;
    if (excess_n > 0) ns >>= excess_n; else ns <<= -excess_n;
    long excess_d = bits(d) - 64;
    if (excess_d > 0) ds >>= excess_d; else ds <<= -excess_d;
    double approx = ns.convert_to<double>() / ds.convert_to<double>();
    return std::ldexp(approx, static_cast<int>(excess_n - excess_d));
  }

private:
  using cpp_rat = boost::multiprecision::cpp_rational;
  explicit BigRat(const cpp_rat& v) : v_(v) {}
  cpp_rat v_;
};

inline BigRat operator*(long a, const BigRat& b) { return BigRat(a) * b; }
inline BigRat operator+(long a, const BigRat& b) { return BigRat(a) + b; }
inline BigRat operator-(long a, const BigRat& b) { return BigRat(a) - b; }

}  // namespace wqt
