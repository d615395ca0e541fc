#include "jrs/bigq.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace jrs {

BigRational::BigRational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::domain_error("BigRational: zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

BigRational BigRational::parse(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return BigRational(mpz_class(s), mpz_class(1));
    return BigRational(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("BigRational: cannot parse '" + s + "'");
  }
}

std::string BigRational::to_string() const {
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

BigRational& BigRational::operator/=(const BigRational& o) {
  if (o.is_zero()) throw std::domain_error("BigRational: division by zero");
  q_ /= o.q_;
  return *this;
}

BigRational pow(const BigRational& base, unsigned e) {
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), base.num().get_mpz_t(), e);
  mpz_pow_ui(d.get_mpz_t(), base.den().get_mpz_t(), e);
  return BigRational(n, d);
}

// ---------------------------------------------------------------- QSeries

QSeries::QSeries(std::int64_t scale, std::int64_t truncation) : scale_(scale), trunc_(truncation) {
  if (scale <= 0) throw std::invalid_argument("QSeries: scale must be positive");
  if (scale > kMaxSeriesScale) throw std::overflow_error("QSeries: scale overflow");
}

BigRational QSeries::coeff(std::int64_t e) const {
  if (e > trunc_) {
    throw std::out_of_range("QSeries: exponent " + std::to_string(e) + " beyond truncation " +
                            std::to_string(trunc_));
  }
  auto it = coeffs_.find(e);
  return it == coeffs_.end() ? BigRational() : it->second;
}

void QSeries::set(std::int64_t e, const BigRational& c) {
  if (e > trunc_) throw std::out_of_range("QSeries: set beyond truncation");
  if (c.is_zero()) {
    coeffs_.erase(e);
  } else {
    coeffs_[e] = c;
  }
}

void QSeries::add_to(std::int64_t e, const BigRational& c) {
  if (c.is_zero()) return;
  if (e > trunc_) throw std::out_of_range("QSeries: add beyond truncation");
  auto [it, inserted] = coeffs_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

std::int64_t QSeries::valuation() const {
  return coeffs_.empty() ? trunc_ + 1 : coeffs_.begin()->first;
}

QSeries QSeries::rescaled(std::int64_t new_scale) const {
  if (new_scale % scale_ != 0) throw std::invalid_argument("QSeries: rescale must be a multiple");
  std::int64_t f = new_scale / scale_;
  if (trunc_ > 0 && f > INT64_MAX / trunc_) throw std::overflow_error("QSeries: scale overflow");
  QSeries out(new_scale, trunc_ * f);
  for (const auto& [e, c] : coeffs_) out.coeffs_.emplace(e * f, c);
  return out;
}

QSeries QSeries::truncated(std::int64_t t) const {
  QSeries out(scale_, std::min(t, trunc_));
  for (const auto& [e, c] : coeffs_) {
    if (e > out.trunc_) break;
    out.coeffs_.emplace(e, c);
  }
  return out;
}

QSeries QSeries::scaled(const BigRational& c) const {
  QSeries out(scale_, trunc_);
  if (c.is_zero()) return out;
  for (const auto& [e, v] : coeffs_) out.coeffs_.emplace(e, v * c);
  return out;
}

QSeries QSeries::dilated(std::int64_t f) const {
  if (f <= 0) throw std::invalid_argument("QSeries: dilation factor must be positive");
  QSeries out(scale_, trunc_ * f);
  for (const auto& [e, c] : coeffs_) out.coeffs_.emplace(e * f, c);
  // Exponents between multiples of f are exact zeros up to trunc_*f.
  return out;
}

std::string QSeries::serialize() const {
  std::ostringstream os;
  os << "scale=" << scale_ << " trunc=" << trunc_ << "\n";
  for (const auto& [e, c] : coeffs_) os << e << " " << c.to_string() << "\n";
  return os.str();
}

QSeries QSeries::parse(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("QSeries: empty input");
  long long scale = 0, trunc = 0;
  if (std::sscanf(line.c_str(), "scale=%lld trunc=%lld", &scale, &trunc) != 2) {
    throw std::invalid_argument("QSeries: bad header '" + line + "'");
  }
  QSeries out(scale, trunc);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    long long e;
    std::string c;
    if (!(ls >> e >> c)) throw std::invalid_argument("QSeries: bad line '" + line + "'");
    out.set(e, BigRational::parse(c));
  }
  return out;
}

bool operator==(const QSeries& a, const QSeries& b) {
  return a.scale_ == b.scale_ && a.trunc_ == b.trunc_ && a.coeffs_ == b.coeffs_;
}

namespace {

std::int64_t common_scale(const QSeries& a, const QSeries& b) {
  std::int64_t l = std::lcm(a.scale(), b.scale());
  if (l > kMaxSeriesScale) throw std::overflow_error("QSeries: scale overflow");
  return l;
}

QSeries add_impl(const QSeries& a, const QSeries& b, int sign) {
  std::int64_t l = common_scale(a, b);
  QSeries ra = a.scale() == l ? a : a.rescaled(l);
  QSeries rb = b.scale() == l ? b : b.rescaled(l);
  QSeries out = ra.truncated(std::min(ra.truncation(), rb.truncation()));
  for (const auto& [e, c] : rb.terms()) {
    if (e > out.truncation()) break;
    out.add_to(e, sign > 0 ? c : -c);
  }
  return out;
}

// Integer numerators over a common denominator.
struct IntegerForm {
  std::vector<std::pair<std::int64_t, mpz_class>> terms;
  mpz_class den{1};
};

IntegerForm integer_form(const QSeries& s, std::int64_t limit) {
  IntegerForm f;
  for (const auto& [e, c] : s.terms()) {
    if (e > limit) break;
    mpz_lcm(f.den.get_mpz_t(), f.den.get_mpz_t(), c.den().get_mpz_t());
  }
  for (const auto& [e, c] : s.terms()) {
    if (e > limit) break;
    f.terms.emplace_back(e, c.num() * (f.den / c.den()));
  }
  return f;
}

}  // namespace

QSeries operator+(const QSeries& a, const QSeries& b) { return add_impl(a, b, 1); }
QSeries operator-(const QSeries& a, const QSeries& b) { return add_impl(a, b, -1); }

QSeries operator*(const QSeries& a, const QSeries& b) {
  std::int64_t l = common_scale(a, b);
  QSeries ra = a.scale() == l ? a : a.rescaled(l);
  QSeries rb = b.scale() == l ? b : b.rescaled(l);
  std::int64_t t = std::min(ra.truncation(), rb.truncation());
  QSeries out(l, t);
  if (ra.is_zero() || rb.is_zero()) return out;
  std::int64_t base = ra.valuation() + rb.valuation();
  if (base > t) return out;
  IntegerForm fa = integer_form(ra, t - rb.valuation());
  IntegerForm fb = integer_form(rb, t - ra.valuation());
  std::vector<mpz_class> acc(static_cast<std::size_t>(t - base + 1));
  for (const auto& [ea, ca] : fa.terms) {
    for (const auto& [eb, cb] : fb.terms) {
      std::int64_t e = ea + eb;
      if (e > t) break;
      mpz_addmul(acc[e - base].get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    }
  }
  mpz_class den = fa.den * fb.den;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (acc[i] != 0) out.set(base + static_cast<std::int64_t>(i), BigRational(acc[i], den));
  }
  return out;
}

// ---------------------------------------------------------------- arithmetic functions

BigRational bernoulli_number(unsigned n) {
  static std::mutex mu;
  static std::vector<mpq_class> cache{mpq_class(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (cache.size() <= n) {
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    unsigned m = static_cast<unsigned>(cache.size());
    mpq_class s = 0;
    mpz_class binom = 1;  // C(m+1, j)
    for (unsigned j = 0; j < m; ++j) {
      s += binom * cache[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    mpq_class b = -s / mpq_class(m + 1);
    b.canonicalize();
    cache.push_back(b);
  }
  return BigRational(cache[n]);
}

mpz_class divisor_sigma(unsigned nu, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("divisor_sigma: n must be positive");
  mpz_class s = 0, p;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), nu);
    s += p;
    std::int64_t e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(e), nu);
      s += p;
    }
  }
  return s;
}

QSeries elliptic_eisenstein(int k, std::int64_t prec) {
  if (k != 4 && k != 6) throw std::invalid_argument("elliptic_eisenstein: k must be 4 or 6");
  if (prec < 0) throw std::invalid_argument("elliptic_eisenstein: prec must be nonnegative");
  QSeries e(1, prec);
  e.set(0, BigRational(1));
  const long c = k == 4 ? 240 : -504;
  const unsigned nu = k == 4 ? 3 : 5;
  for (std::int64_t n = 1; n <= prec; ++n) {
    e.set(n, BigRational(divisor_sigma(nu, n) * c, 1));
  }
  return e;
}

QSeries ramanujan_delta(std::int64_t prec) {
  QSeries e4 = elliptic_eisenstein(4, prec);
  QSeries e6 = elliptic_eisenstein(6, prec);
  return (e4 * e4 * e4 - e6 * e6).scaled(BigRational(mpz_class(1), mpz_class(1728)));
}

int kronecker(std::int64_t a, std::int64_t n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  while (n % 2 == 0) {
    n /= 2;
    if (a % 2 == 0) return 0;
    std::int64_t r = ((a % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  // Jacobi symbol (a/n), n odd positive.
  a %= n;
  if (a < 0) a += n;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      std::int64_t r = n % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

void fundamental_decomposition(std::int64_t N, std::int64_t& d0, std::int64_t& f) {
  if (N <= 0 || (N % 4 != 0 && N % 4 != 3)) {
    throw std::invalid_argument("fundamental_decomposition: need N > 0, N = 0,3 mod 4");
  }
  for (std::int64_t g = static_cast<std::int64_t>(std::sqrt(static_cast<double>(N))) + 1; g >= 1; --g) {
    if (g * g > N || N % (g * g) != 0) continue;
    std::int64_t d = -(N / (g * g));
    std::int64_t r = ((d % 4) + 4) % 4;
    if (r == 0 || r == 1) {
      d0 = d;
      f = g;
      return;
    }
  }
  throw std::logic_error("fundamental_decomposition: unreachable");
}

namespace {

int moebius(std::int64_t n) {
  int s = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    s = -s;
  }
  if (n > 1) s = -s;
  return s;
}

// sum_{a=1}^{f} chi(a) a^i for i = 0..r.
std::vector<mpz_class> character_power_sums(std::int64_t d0, unsigned r) {
  const std::int64_t f = -d0;
  std::vector<mpz_class> sums(r + 1, 0);
  const bool fits = (r + 1) * std::log2(static_cast<double>(f) + 1.0) < 120.0;
  if (fits) {
    std::vector<__int128> acc(r + 1, 0);
    for (std::int64_t a = 1; a <= f; ++a) {
      int chi = kronecker(d0, a);
      if (chi == 0) continue;
      __int128 p = 1;
      for (unsigned i = 0; i <= r; ++i) {
        acc[i] += chi > 0 ? p : -p;
        p *= a;
      }
    }
    for (unsigned i = 0; i <= r; ++i) {
      bool neg = acc[i] < 0;
      unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(acc[i]) : acc[i];
      mpz_class hi(static_cast<unsigned long>(mag >> 64)), lo(static_cast<unsigned long>(mag));
      mpz_class v = (hi << 64) + lo;
      sums[i] = neg ? mpz_class(-v) : v;
    }
    return sums;
  }
  mpz_class p;
  for (std::int64_t a = 1; a <= f; ++a) {
    int chi = kronecker(d0, a);
    if (chi == 0) continue;
    p = 1;
    for (unsigned i = 0; i <= r; ++i) {
      if (chi > 0) sums[i] += p; else sums[i] -= p;
      p *= a;
    }
  }
  return sums;
}

// L(1 - r, chi_{d0}) = -B_{r,chi}/r with B_{r,chi} = sum_j C(r,j) B_j f^{j-1} S_{r-j}.
BigRational l_value_at_negative(std::int64_t d0, unsigned r) {
  const std::int64_t f = -d0;
  std::vector<mpz_class> s = character_power_sums(d0, r);
  BigRational b;
  mpz_class binom = 1, fpow;
  for (unsigned j = 0; j <= r; ++j) {
    BigRational term = bernoulli_number(j) * BigRational(binom * s[r - j], 1);
    if (j == 0) {
      term /= BigRational(f);
    } else {
      mpz_ui_pow_ui(fpow.get_mpz_t(), static_cast<unsigned long>(f), j - 1);
      term *= BigRational(fpow, 1);
    }
    b += term;
    binom = binom * (r - j) / (j + 1);
  }
  return -b / BigRational(static_cast<long>(r));
}

}  // namespace

BigRational cohen_H(unsigned r, std::int64_t N) {
  if (r < 1) throw std::invalid_argument("cohen_H: r must be positive");
  if (N < 0) throw std::invalid_argument("cohen_H: N must be nonnegative");
  if (N == 0) {
    // zeta(1 - 2r) = -B_{2r}/(2r)
    return -bernoulli_number(2 * r) / BigRational(static_cast<long>(2 * r));
  }
  if (N % 4 == 1 || N % 4 == 2) return BigRational();
  std::int64_t d0, f;
  fundamental_decomposition(N, d0, f);
  BigRational l = l_value_at_negative(d0, r);
  mpz_class corr = 0, dp;
  for (std::int64_t d = 1; d <= f; ++d) {
    if (f % d != 0) continue;
    int mu = moebius(d);
    int chi = kronecker(d0, d);
    if (mu == 0 || chi == 0) continue;
    mpz_ui_pow_ui(dp.get_mpz_t(), static_cast<unsigned long>(d), r - 1);
    mpz_class term = dp * divisor_sigma(2 * r - 1, f / d);
    if (mu * chi > 0) corr += term; else corr -= term;
  }
  return l * BigRational(corr, 1);
}

}  // namespace jrs
