#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

namespace jrs {

// Exact rational in lowest terms, denominator positive.
class BigRational {
 public:
  BigRational() = default;
  BigRational(long v) : q_(v) {}  // NOLINT(google-explicit-constructor)
  BigRational(const mpz_class& num, const mpz_class& den);
  explicit BigRational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  // Parses "a" or "a/b".
  static BigRational parse(std::string_view text);

  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }
  double to_double() const { return q_.get_d(); }
  std::string to_string() const;  // always "num/den"

  BigRational operator-() const { return BigRational(mpq_class(-q_)); }
  BigRational& operator+=(const BigRational& o) { q_ += o.q_; return *this; }
  BigRational& operator-=(const BigRational& o) { q_ -= o.q_; return *this; }
  BigRational& operator*=(const BigRational& o) { q_ *= o.q_; return *this; }
  BigRational& operator/=(const BigRational& o);

  friend BigRational operator+(BigRational a, const BigRational& b) { return a += b; }
  friend BigRational operator-(BigRational a, const BigRational& b) { return a -= b; }
  friend BigRational operator*(BigRational a, const BigRational& b) { return a *= b; }
  friend BigRational operator/(BigRational a, const BigRational& b) { return a /= b; }
  friend bool operator==(const BigRational& a, const BigRational& b) { return a.q_ == b.q_; }
  friend bool operator<(const BigRational& a, const BigRational& b) { return a.q_ < b.q_; }

 private:
  mpq_class q_;
};

BigRational pow(const BigRational& base, unsigned e);

// Sums of exponents are bounded by this when bringing series to a common scale.
inline constexpr std::int64_t kMaxSeriesScale = std::int64_t{1} << 20;

// Formal series sum c_e q^{e/scale}, known exactly for e <= truncation.
class QSeries {
 public:
  QSeries(std::int64_t scale, std::int64_t truncation);

  std::int64_t scale() const { return scale_; }
  std::int64_t truncation() const { return trunc_; }
  const std::map<std::int64_t, BigRational>& terms() const { return coeffs_; }

  // Throws std::out_of_range beyond the truncation.
  BigRational coeff(std::int64_t e) const;
  void set(std::int64_t e, const BigRational& c);
  void add_to(std::int64_t e, const BigRational& c);

  bool is_zero() const { return coeffs_.empty(); }
  // Smallest exponent with nonzero coefficient; truncation + 1 for the zero series.
  std::int64_t valuation() const;

  QSeries rescaled(std::int64_t new_scale) const;
  QSeries truncated(std::int64_t t) const;
  QSeries scaled(const BigRational& c) const;
  // Substitutes q -> q^f (exponents multiplied by f at the same scale).
  QSeries dilated(std::int64_t f) const;

  std::string serialize() const;
  static QSeries parse(std::string_view text);

  friend bool operator==(const QSeries& a, const QSeries& b);

 private:
  std::int64_t scale_;
  std::int64_t trunc_;
  std::map<std::int64_t, BigRational> coeffs_;
};

QSeries operator+(const QSeries& a, const QSeries& b);
QSeries operator-(const QSeries& a, const QSeries& b);
QSeries operator*(const QSeries& a, const QSeries& b);

BigRational bernoulli_number(unsigned n);
mpz_class divisor_sigma(unsigned nu, std::int64_t n);
QSeries elliptic_eisenstein(int k, std::int64_t prec);
// (E4^3 - E6^2)/1728.
QSeries ramanujan_delta(std::int64_t prec);

// Kronecker symbol (a/n).
int kronecker(std::int64_t a, std::int64_t n);
// Writes -N = d0 * f^2 with d0 a fundamental discriminant; requires N > 0, N = 0,3 mod 4.
void fundamental_decomposition(std::int64_t N, std::int64_t& d0, std::int64_t& f);
BigRational cohen_H(unsigned r, std::int64_t N);

}  // namespace jrs
