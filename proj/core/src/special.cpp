#include "jrs/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace jrs {

namespace {

constexpr Complex kI{0.0, 1.0};
const double kLogTwoPi = std::log(2.0 * kPi);

double bernoulli_double(unsigned n) {
  static const std::vector<double> table = [] {
    std::vector<double> t;
    for (unsigned j = 0; j <= 80; ++j) t.push_back(bernoulli_number(j).to_double());
    return t;
  }();
  return table.at(n);
}

// log sin(pi z), stable for large |Im z|.
Complex log_sin_pi(Complex z) {
  if (std::fabs(z.imag()) < 60.0) return std::log(std::sin(kPi * z));
  // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i; keep the dominant exponential.
  if (z.imag() > 0) {
    return -kI * kPi * z + std::log(1.0 - std::exp(2.0 * kI * kPi * z)) - std::log(-2.0 * kI);
  }
  return kI * kPi * z + std::log(1.0 - std::exp(-2.0 * kI * kPi * z)) - std::log(2.0 * kI);
}

}  // namespace

ModularPoint::ModularPoint(double u_, double v_) : u(u_), v(v_) {
  if (!(v_ > 0.0) || !std::isfinite(u_) || !std::isfinite(v_)) {
    throw std::domain_error("ModularPoint: need finite u and v > 0");
  }
}

Complex checked(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::domain_error(std::string(what) + ": non-finite result");
  }
  return z;
}

// ---------------------------------------------------------------- Gamma

Complex log_gamma(Complex z) {
  if (z.real() < 0.5) {
    if (z.imag() == 0.0 && z.real() == std::floor(z.real())) throw std::domain_error("log_gamma: pole");
    return std::log(kPi) - log_sin_pi(z) - log_gamma(1.0 - z);
  }
  Complex prod = 1.0;
  bool shifted = false;
  while (z.real() < 17.0) {
    prod *= z;
    z += 1.0;
    shifted = true;
  }
  const Complex shift = shifted ? std::log(prod) : Complex(0.0);
  const Complex zinv = 1.0 / z;
  const Complex zinv2 = zinv * zinv;
  Complex series = 0.0;
  Complex p = zinv;
  for (unsigned j = 1; j <= 12; ++j) {
    series += bernoulli_double(2 * j) / (2.0 * j * (2.0 * j - 1.0)) * p;
    p *= zinv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * kLogTwoPi + series - shift;
}

Complex gamma_fn(Complex z) {
  if (z.real() > 0.5) return checked(std::exp(log_gamma(z)), "gamma_fn");
  if (z.imag() == 0.0 && z.real() == std::floor(z.real())) throw std::domain_error("gamma_fn: pole");
  return checked(kPi / (std::sin(kPi * z) * std::exp(log_gamma(1.0 - z))), "gamma_fn");
}

// ---------------------------------------------------------------- zeta and xi

namespace {

Complex zeta_euler_maclaurin(Complex s) {
  const int N = 20 + static_cast<int>(std::ceil(std::abs(s)));
  Complex sum = 0.0;
  for (int n = N - 1; n >= 1; --n) sum += std::exp(-s * std::log(static_cast<double>(n)));
  const double logN = std::log(static_cast<double>(N));
  const Complex Ns = std::exp(-s * logN);
  sum += Ns * static_cast<double>(N) / (s - 1.0) + 0.5 * Ns;
  // sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
  Complex rising = s;  // s (s+1) ... (s+2j-2)
  Complex npow = Ns / static_cast<double>(N);
  double fact = 2.0;  // (2j)!
  for (unsigned j = 1; j <= 30; ++j) {
    Complex term = bernoulli_double(2 * j) / fact * rising * npow;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    rising *= (s + (2.0 * j - 1.0)) * (s + 2.0 * j);
    npow /= static_cast<double>(N) * N;
    fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
  }
  return sum;
}

}  // namespace

Complex zeta(Complex s) {
  if (s == Complex(1.0, 0.0)) throw std::domain_error("zeta: pole at 1");
  if (s.real() >= 0.0) return checked(zeta_euler_maclaurin(s), "zeta");
  if (s.imag() == 0.0 && s.real() == std::floor(s.real()) && std::fmod(-s.real(), 2.0) == 0.0) return 0.0;
  // zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
  Complex f = std::exp(s * std::log(2.0) + (s - 1.0) * std::log(kPi) + log_gamma(1.0 - s)) * std::sin(kPi * s / 2.0);
  return checked(f * zeta_euler_maclaurin(1.0 - s), "zeta");
}

Complex xi_completed(Complex s) {
  if (s == Complex(0.0, 0.0) || s == Complex(1.0, 0.0)) throw std::domain_error("xi_completed: pole at 0 or 1");
  if (s.real() < 0.5) s = 1.0 - s;
  return checked(std::exp(-0.5 * s * std::log(kPi) + log_gamma(0.5 * s)) * zeta_euler_maclaurin(s), "xi_completed");
}

// ---------------------------------------------------------------- K-Bessel

// K_nu(x) = (1/2) int_R exp(-x cosh(w) + nu w) dw along w = t + i alpha, trapezoid rule.
Complex bessel_K(Complex nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("bessel_K: x must be positive");
  if (!std::isfinite(nu.real()) || !std::isfinite(nu.imag())) throw std::domain_error("bessel_K: non-finite order");
  if (nu.real() < 0.0) nu = -nu;
  const double lim = kPi / 2.0 - 0.2;
  const double alpha = std::clamp(std::asinh(nu / x).imag(), -lim, lim);
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  auto exponent = [&](double t) {
    return Complex(-x * std::cosh(t) * ca, -x * std::sinh(t) * sa) + nu * Complex(t, alpha);
  };
  const double tstar = std::asinh(nu.real() / (x * ca));
  const double curvature = x * std::cosh(tstar) * ca;
  const double sigma = 1.0 / std::sqrt(curvature);
  const double strip = kPi / 2.0 - std::fabs(alpha);
  const double h = std::min({0.1, sigma / 1.5, 2.0 * kPi * strip / 42.0});
  const Complex e0 = exponent(tstar);
  const double peak = e0.real();
  Complex sum = std::exp(e0 - peak);
  for (int dir : {1, -1}) {
    for (int j = 1; j < 200000; ++j) {
      const Complex e = exponent(tstar + dir * j * h);
      if (e.real() - peak < -46.0) break;
      sum += std::exp(e - peak);
    }
  }
  return checked(0.5 * h * sum * std::exp(peak), "bessel_K");
}

double bessel_K(double nu, double x) { return bessel_K(Complex(nu, 0.0), x).real(); }

// ---------------------------------------------------------------- words

Reduction reduce_to_fundamental(ModularPoint tau) {
  Reduction r;
  Complex z = tau.tau();
  for (int iter = 0; iter < 10000; ++iter) {
    const double n = std::round(z.real());
    if (n != 0.0) {
      z -= n;
      r.word.push_back({WordStep::T, static_cast<int>(n)});
    }
    if (std::norm(z) < 1.0 - 1e-15) {
      z = -1.0 / z;
      r.word.push_back({WordStep::S, 1});
    } else {
      r.point = ModularPoint(z);
      return r;
    }
  }
  throw std::runtime_error("reduce_to_fundamental: no convergence");
}

ModularPoint apply_word(const ModularWord& word, ModularPoint tau) {
  Complex z = tau.tau();
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (it->kind == WordStep::T) {
      z += static_cast<double>(it->power);
    } else {
      z = -1.0 / z;
    }
  }
  return ModularPoint(z);
}

std::array<long long, 4> word_matrix(const ModularWord& word) {
  std::array<long long, 4> g{1, 0, 0, 1};
  for (const auto& st : word) {
    std::array<long long, 4> s = st.kind == WordStep::T ? std::array<long long, 4>{1, st.power, 0, 1}
                                                         : std::array<long long, 4>{0, -1, 1, 0};
    g = {g[0] * s[0] + g[1] * s[2], g[0] * s[1] + g[1] * s[3], g[2] * s[0] + g[3] * s[2], g[2] * s[1] + g[3] * s[3]};
  }
  return g;
}

ModularWord inverse_word(const ModularWord& word) {
  ModularWord inv;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    inv.push_back(it->kind == WordStep::T ? WordStep{WordStep::T, -it->power} : WordStep{WordStep::S, 1});
  }
  return inv;
}

// ---------------------------------------------------------------- Eisenstein

EisensteinEvaluator::EisensteinEvaluator(Complex s, double tol, int term_budget)
    : s_(s), tol_(tol), budget_(term_budget) {
  if (!(tol > 0.0)) throw std::invalid_argument("EisensteinEvaluator: tol must be positive");
  if (std::abs(s - 1.0) < 1e-14 || std::abs(s) < 1e-14) throw std::domain_error("EisensteinEvaluator: pole at s = 0 or 1");
  checked(s, "EisensteinEvaluator");
  centre_ = std::abs(s - 0.5) < 1e-4;
  if (!centre_) {
    xi_a_ = xi_completed(2.0 * s);
    xi_b_ = xi_completed(2.0 * s - 1.0);
  }
}

Complex EisensteinEvaluator::coefficient(int n) const {
  // n^{s-1/2} sigma_{1-2s}(n) = sum_{ab = n} (a/b)^{s-1/2}
  const Complex nu = s_ - 0.5;
  Complex c = 0.0;
  for (int a = 1; a <= n; ++a) {
    if (n % a != 0) continue;
    c += std::exp(nu * std::log(static_cast<double>(a) * a / n));
  }
  return c;
}

EisensteinEvaluator::Value EisensteinEvaluator::evaluate_regular(ModularPoint tau) const {
  const double v = tau.v;
  const double logv = std::log(v);
  const Complex nu = s_ - 0.5;
  const Complex c1 = xi_a_ * std::exp(s_ * logv);
  const Complex c2 = xi_b_ * std::exp((1.0 - s_) * logv);
  Value out{c1 + c2, 0.0, std::abs(c1) + std::abs(c2), 0};
  const double pref = 4.0 * std::sqrt(v);
  const double ratio = std::exp(-2.0 * kPi * v);
  for (int n = 1; n <= budget_; ++n) {
    const double x = 2.0 * kPi * n * v;
    const Complex coef = coefficient(n);
    const Complex term = pref * coef * bessel_K(nu, x) * std::cos(2.0 * kPi * n * tau.u);
    out.value += term;
    out.terms = n;
    out.magnitude += std::abs(term);
    // Beyond x > max(2, |nu|^2) the majorant |coef| K_{|Re nu|}(x) decays at least geometrically
    // with ratio about e^{-2 pi v} times the polynomial growth of the coefficients.
    if (x > std::max(2.0, std::norm(nu)) && n > 1) {
      const double mag = pref * std::abs(coef) * bessel_K(std::fabs(nu.real()), x);
      const double r = ratio * std::pow(static_cast<double>(n + 1) / n, std::fabs(nu.real()) + 2.0);
      if (r < 1.0) {
        const double bound = 2.0 * mag * r / (1.0 - r);
        if (bound < tol_ * std::max(out.magnitude, 1e-300)) {
          out.error_bound = bound;
          return out;
        }
      }
    }
  }
  throw std::runtime_error("eisenstein_lambda: tol unachievable within term budget");
}

EisensteinEvaluator::Value EisensteinEvaluator::evaluate(ModularPoint tau) const {
  if (!centre_) return evaluate_regular(tau);
  // The series is even about s = 1/2; extrapolate from s = 1/2 +- h (two levels, error O(h^4)).
  const double h1 = 2e-3, h2 = 1e-3;
  const Complex offset = s_ - 0.5;
  EisensteinEvaluator a(0.5 + Complex(h1, 0.0) + offset, tol_, budget_);
  EisensteinEvaluator b(0.5 + Complex(h2, 0.0) + offset, tol_, budget_);
  Value va = a.evaluate_regular(tau), vb = b.evaluate_regular(tau);
  Value out = vb;
  out.value = (4.0 * vb.value - va.value) / 3.0;
  out.error_bound = vb.error_bound + std::abs(vb.value - va.value) * 1e-3;
  return out;
}

Complex eisenstein_lambda(Complex s, ModularPoint tau, double tol) {
  return EisensteinEvaluator(s, tol).evaluate(tau).value;
}

Complex eisenstein_residue(ModularPoint tau, double tol) {
  const int M = 32;
  const double radius = 0.25;
  Complex acc = 0.0;
  for (int j = 0; j < M; ++j) {
    const Complex w = radius * std::exp(kI * (2.0 * kPi * (j + 0.5) / M));
    acc += eisenstein_lambda(1.0 + w, tau, tol) * w;
  }
  return acc / static_cast<double>(M);
}

// ---------------------------------------------------------------- components

NumericComponents::NumericComponents(const ThetaComponents& h)
    : m_(h.m), k_(h.k), vector_valued_(true), scale_(4 * h.m) {
  if (static_cast<int>(h.h.size()) != 2 * h.m) throw std::invalid_argument("NumericComponents: need 2m components");
  prec_ = std::numeric_limits<std::int64_t>::max();
  leading_ = std::numeric_limits<double>::infinity();
  growth_c_ = -std::numeric_limits<double>::infinity();
  for (const auto& s : h.h) {
    prec_ = std::min(prec_, s.truncation());
    std::vector<std::pair<std::int64_t, double>> terms;
    for (const auto& [D, c] : s.terms()) {
      const double cd = c.to_double();
      terms.emplace_back(D, cd);
      leading_ = std::min(leading_, static_cast<double>(D) / scale_);
      if (D > 0) growth_c_ = std::max(growth_c_, std::log(std::fabs(cd)) - 0.5 * k_ * std::log(static_cast<double>(D)));
    }
    comps_.push_back(std::move(terms));
  }
  if (!std::isfinite(growth_c_)) growth_c_ = 0.0;
}

NumericComponents NumericComponents::elliptic(const QSeries& f, int k) {
  if (f.scale() != 1) throw std::invalid_argument("NumericComponents::elliptic: need scale 1");
  ThetaComponents dummy;
  NumericComponents out;
  out.m_ = 1;
  out.k_ = k;
  out.vector_valued_ = false;
  out.scale_ = 1;
  out.prec_ = f.truncation();
  out.leading_ = std::numeric_limits<double>::infinity();
  out.growth_c_ = -std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::int64_t, double>> terms;
  for (const auto& [n, c] : f.terms()) {
    const double cd = c.to_double();
    terms.emplace_back(n, cd);
    out.leading_ = std::min(out.leading_, static_cast<double>(n));
    if (n > 0) out.growth_c_ = std::max(out.growth_c_, std::log(std::fabs(cd)) - 0.5 * k * std::log(static_cast<double>(n)));
  }
  if (!std::isfinite(out.growth_c_)) out.growth_c_ = 0.0;
  out.comps_.push_back(std::move(terms));
  return out;
}

std::vector<Complex> NumericComponents::series(ModularPoint tau) const {
  const Complex q = 2.0 * kPi * kI * tau.tau() / static_cast<double>(scale_);
  const double a = 2.0 * kPi * tau.v / static_cast<double>(scale_);
  const double half_k = 0.5 * k_;
  std::vector<Complex> out(comps_.size(), 0.0);
  double magnitude = 0.0;
  bool converged_all = true;
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    bool converged = comps_[i].empty();
    for (const auto& [D, c] : comps_[i]) {
      const Complex term = c * std::exp(q * static_cast<double>(D));
      out[i] += term;
      magnitude += std::abs(term);
      if (D > half_k / a) {
        // majorant C D^{k/2} e^{-a D}, summed geometrically over the remaining exponents
        const double bound = std::exp(growth_c_ + half_k * std::log(static_cast<double>(D)) - a * D) / (1.0 - std::exp(-a));
        if (bound < 1e-17 * std::max(magnitude, 1e-300)) {
          converged = true;
          break;
        }
      }
    }
    if (!converged) {
      const double D = static_cast<double>(prec_);
      const double bound = std::exp(growth_c_ + half_k * std::log(D) - a * D) / (1.0 - std::exp(-a));
      if (bound > 1e-12 * std::max(magnitude, 1e-300)) converged_all = false;
    }
  }
  if (!converged_all) {
    throw std::out_of_range("NumericComponents: stored precision too short at v = " + std::to_string(tau.v));
  }
  return out;
}

// ---------------------------------------------------------------- Weil representation

namespace {

Complex e_frac(double x) { return std::exp(2.0 * kPi * kI * x); }

std::vector<Complex> apply_S(int m, Complex c, const std::vector<Complex>& v) {
  const int n = 2 * m;
  std::vector<Complex> out(n, 0.0);
  const Complex pref = c / std::sqrt(2.0 * m);
  for (int mu = 0; mu < n; ++mu) {
    Complex acc = 0.0;
    for (int nu = 0; nu < n; ++nu) acc += e_frac(static_cast<double>((mu * nu) % n) / n) * v[nu];
    out[mu] = pref * acc;
  }
  return out;
}

std::vector<Complex> transport_with(const NumericComponents& h, const ModularWord& word, Complex p,
                                    std::vector<Complex> vals, Complex c) {
  const int m = h.m();
  const double kappa = h.vector_valued() ? h.k() - 0.5 : static_cast<double>(h.k());
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (it->kind == WordStep::T) {
      if (h.vector_valued()) {
        for (int mu = 0; mu < 2 * m; ++mu) {
          const long long num = -static_cast<long long>(it->power) * mu * mu;
          const long long den = 4LL * m;
          vals[mu] *= e_frac(static_cast<double>(((num % den) + den) % den) / den);
        }
      }
      p += static_cast<double>(it->power);
    } else {
      const Complex factor = std::exp(kappa * std::log(p));
      if (h.vector_valued()) {
        vals = apply_S(m, c, vals);
      }
      for (auto& x : vals) x *= factor;
      p = -1.0 / p;
    }
  }
  return vals;
}

double relative_residual(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

WeilCalibration calibrate_weil_normalization(const NumericComponents& h, ModularPoint probe) {
  if (!h.vector_valued()) throw std::invalid_argument("calibrate_weil_normalization: need theta components");
  const ModularWord s_word{{WordStep::S, 1}};
  const ModularPoint image = apply_word(s_word, probe);
  const std::vector<Complex> direct = h.series(image);
  const std::vector<Complex> base = h.series(probe);
  WeilCalibration cal;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 8; ++j) {
    const auto moved = transport_with(h, s_word, probe.tau(), base, e_frac(j / 8.0));
    cal.candidate_residuals[j] = relative_residual(moved, direct);
    if (cal.candidate_residuals[j] < best) {
      best = cal.candidate_residuals[j];
      cal.eighth_root = j;
    }
  }
  cal.residual = best;
  return cal;
}

const WeilCalibration& weil_normalization() {
  static const WeilCalibration cal = [] {
    auto forms = cusp_forms_index1(240);
    NumericComponents h(theta_decompose(forms.first));
    WeilCalibration c = calibrate_weil_normalization(h, ModularPoint(0.2, 1.0));
    if (c.residual > 1e-9) {
      throw std::runtime_error("weil_normalization: unnormalized representation (calibration residual " +
                               std::to_string(c.residual) + ")");
    }
    return c;
  }();
  return cal;
}

WeilMatrix weil_action(int m, const ModularWord& word) {
  const int n = 2 * m;
  const Complex c = e_frac(weil_normalization().eighth_root / 8.0);
  WeilMatrix out{m, std::vector<Complex>(static_cast<std::size_t>(n) * n, 0.0)};
  for (int i = 0; i < n; ++i) out.entries[static_cast<std::size_t>(i) * n + i] = 1.0;
  // Multiply on the right by the generator images in order.
  for (const auto& st : word) {
    std::vector<Complex> g(static_cast<std::size_t>(n) * n, 0.0);
    if (st.kind == WordStep::T) {
      for (int mu = 0; mu < n; ++mu) {
        const long long num = -static_cast<long long>(st.power) * mu * mu;
        const long long den = 4LL * m;
        g[static_cast<std::size_t>(mu) * n + mu] = e_frac(static_cast<double>(((num % den) + den) % den) / den);
      }
    } else {
      for (int mu = 0; mu < n; ++mu) {
        for (int nu = 0; nu < n; ++nu) {
          g[static_cast<std::size_t>(mu) * n + nu] = c / std::sqrt(2.0 * m) * e_frac(static_cast<double>((mu * nu) % n) / n);
        }
      }
    }
    std::vector<Complex> prod(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) prod[static_cast<std::size_t>(i) * n + j] += out.at(i, l) * g[static_cast<std::size_t>(l) * n + j];
    out.entries = std::move(prod);
  }
  return out;
}

std::vector<Complex> weil_transport(const NumericComponents& h, const ModularWord& word, ModularPoint tau,
                                    std::vector<Complex> values) {
  const Complex c = h.vector_valued() ? e_frac(weil_normalization().eighth_root / 8.0) : Complex(1.0);
  return transport_with(h, word, tau.tau(), std::move(values), c);
}

std::vector<Complex> h_eval(const NumericComponents& h, ModularPoint tau) {
  const Reduction r = reduce_to_fundamental(tau);
  return weil_transport(h, r.word, r.point, h.series(r.point));
}

// ---------------------------------------------------------------- theta orthogonality

namespace {

std::vector<Complex> theta_torus_matrix(int m, ModularPoint tau, int N) {
  const int n = 2 * m;
  const double v = tau.v;
  std::vector<Complex> mat(static_cast<std::size_t>(n) * n, 0.0);
  const double width = std::sqrt(50.0 * 4.0 * m / (2.0 * kPi * v)) + 2.0 * m + 2.0;
  const int pmax = static_cast<int>(std::ceil(width));
  std::vector<Complex> theta(n);
  for (int iy = 0; iy < N; ++iy) {
    const double y = v * iy / N;
    const double weight = std::exp(-4.0 * kPi * m * y * y / v);
    for (int ix = 0; ix < N; ++ix) {
      const double x = static_cast<double>(ix) / N;
      const Complex z(x, y);
      std::fill(theta.begin(), theta.end(), Complex(0.0));
      for (int p = -pmax - 2 * m; p <= pmax; ++p) {
        const Complex arg = 2.0 * kPi * kI * (static_cast<double>(p) * p * tau.tau() / (4.0 * m) + static_cast<double>(p) * z);
        theta[((p % n) + n) % n] += std::exp(arg);
      }
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) mat[static_cast<std::size_t>(a) * n + b] += theta[a] * std::conj(theta[b]) * weight;
    }
  }
  const double cell = v / (static_cast<double>(N) * N);
  for (auto& x : mat) x *= cell;
  return mat;
}

}  // namespace

std::vector<Complex> theta_orthogonality_check(int m, ModularPoint tau, double quad_tol, int* nodes_used) {
  if (m < 1) throw std::invalid_argument("theta_orthogonality_check: m must be positive");
  if (!(quad_tol > 0.0)) throw std::invalid_argument("theta_orthogonality_check: tol must be positive");
  int N = 8;
  std::vector<Complex> prev = theta_torus_matrix(m, tau, N);
  while (N < 1024) {
    N *= 2;
    std::vector<Complex> cur = theta_torus_matrix(m, tau, N);
    double diff = 0.0;
    for (std::size_t i = 0; i < cur.size(); ++i) diff = std::max(diff, std::abs(cur[i] - prev[i]));
    if (diff < quad_tol) {
      if (nodes_used) *nodes_used = N;
      return cur;
    }
    prev = std::move(cur);
  }
  throw std::runtime_error("theta_orthogonality_check: quadrature failure");
}

}  // namespace jrs
