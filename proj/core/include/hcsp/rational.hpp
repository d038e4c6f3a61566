#ifndef HCSP_RATIONAL_HPP
#define HCSP_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hcsp {

// Exact rational over machine integers. Sample times and periods are kept
// rational so that GCD arithmetic is well defined; everything else in the
// tool uses doubles.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(std::int64_t n) : num_(n), den_(1) {}
  Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) { normalize(); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  bool is_zero() const { return num_ == 0; }
  bool is_positive() const { return num_ > 0; }
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }

  // gcd(p/q, r/s) = gcd(p, r) / lcm(q, s): the largest rational that divides
  // both arguments an integer number of times.
  static Rational gcd(const Rational& a, const Rational& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    std::int64_t n = std::gcd(std::abs(a.num_), std::abs(b.num_));
    std::int64_t l = a.den_ / std::gcd(a.den_, b.den_) * b.den_;
    return Rational(n, l);
  }

  // Parses "3", "0.045" or "9/200" exactly.
  static Rational parse(const std::string& text);

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  void normalize() {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(std::abs(num_), den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_;
  std::int64_t den_;
};

inline Rational Rational::parse(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Rational(std::stoll(text.substr(0, slash)),
                    std::stoll(text.substr(slash + 1)));
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(text));
  std::string whole = text.substr(0, dot);
  std::string frac = text.substr(dot + 1);
  bool neg = !whole.empty() && whole[0] == '-';
  std::int64_t w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
  std::int64_t n = std::abs(w) * den + f;
  return Rational(neg || w < 0 ? -n : n, den);
}

}  // namespace hcsp

#endif
