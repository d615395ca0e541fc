#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "jrs/jacobi.hpp"

namespace jrs {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Working precision of every floating-point routine (IEEE double).
inline constexpr int kWorkingDigits = 15;

struct ModularPoint {
  double u = 0.0;
  double v = 1.0;
  ModularPoint() = default;
  ModularPoint(double u_, double v_);
  explicit ModularPoint(Complex tau) : ModularPoint(tau.real(), tau.imag()) {}
  Complex tau() const { return {u, v}; }
};

// Throws std::domain_error on NaN or infinity.
Complex checked(Complex z, const char* what);

Complex log_gamma(Complex z);
Complex gamma_fn(Complex z);
Complex zeta(Complex s);
Complex xi_completed(Complex s);

// K_nu(x) for complex order and x > 0.
Complex bessel_K(Complex nu, double x);
double bessel_K(double nu, double x);

// ---------------------------------------------------------------- SL2(Z) words

struct WordStep {
  enum Kind { T, S } kind;
  int power = 1;  // T^power; ignored for S
};
using ModularWord = std::vector<WordStep>;

struct Reduction {
  ModularWord word;  // tau = word[0](word[1](...word[L-1](point)))
  ModularPoint point;
};

Reduction reduce_to_fundamental(ModularPoint tau);
ModularPoint apply_word(const ModularWord& word, ModularPoint tau);
// Matrix {a, b, c, d} acting as the word.
std::array<long long, 4> word_matrix(const ModularWord& word);
ModularWord inverse_word(const ModularWord& word);

// ---------------------------------------------------------------- Eisenstein series

// Completed real-analytic Eisenstein series
//   xi(2s) v^s + xi(2s-1) v^{1-s} + 4 sqrt(v) sum_n n^{s-1/2} sigma_{1-2s}(n) K_{s-1/2}(2 pi n v) cos(2 pi n u),
// summed at the given point without reduction.
class EisensteinEvaluator {
 public:
  EisensteinEvaluator(Complex s, double tol, int term_budget = 20000);

  struct Value {
    Complex value;
    double error_bound;  // truncation bound
    double magnitude;    // sum of absolute values of all terms used
    int terms;
  };

  Complex s() const { return s_; }
  double tol() const { return tol_; }
  Value evaluate(ModularPoint tau) const;
  Complex operator()(ModularPoint tau) const { return evaluate(tau).value; }

 private:
  Value evaluate_regular(ModularPoint tau) const;
  Complex coefficient(int n) const;

  Complex s_;
  double tol_;
  int budget_;
  bool centre_ = false;  // s within 1e-4 of 1/2: evaluated by symmetric extrapolation
  Complex xi_a_, xi_b_;
};

Complex eisenstein_lambda(Complex s, ModularPoint tau, double tol);
// (1/2 pi i) times the contour integral of the series around s = 1.
Complex eisenstein_residue(ModularPoint tau, double tol);

// ---------------------------------------------------------------- theta components as functions

// Floating-point copy of a component vector for evaluation. For the elliptic case a single
// component of scale 1 with trivial multiplier.
class NumericComponents {
 public:
  explicit NumericComponents(const ThetaComponents& h);
  static NumericComponents elliptic(const QSeries& f, int k);

  int m() const { return m_; }
  int k() const { return k_; }
  bool vector_valued() const { return vector_valued_; }
  std::int64_t scale() const { return scale_; }
  std::size_t size() const { return comps_.size(); }
  // Smallest exponent (over scale) present; governs decay e^{-2 pi v D/scale}.
  double leading_exponent() const { return leading_; }

  // Direct summation of the q-series. Throws if the stored precision is too short at this v.
  std::vector<Complex> series(ModularPoint tau) const;

 private:
  NumericComponents() = default;
  int m_ = 1;
  int k_ = 0;
  bool vector_valued_ = true;
  std::int64_t scale_ = 4;
  std::int64_t prec_ = 0;
  double leading_ = 0.0;
  double growth_c_ = 0.0;  // log of max |c_D| / D^{k/2}
  std::vector<std::vector<std::pair<std::int64_t, double>>> comps_;
};

struct WeilMatrix {
  int m = 1;
  std::vector<Complex> entries;  // row-major 2m x 2m
  Complex at(int i, int j) const { return entries[static_cast<std::size_t>(i) * 2 * m + j]; }
};

// Scalar c with h(-1/tau) = tau^{k-1/2} c (2m)^{-1/2} U h(tau), U = (e(mu nu / 2m)).
struct WeilCalibration {
  int eighth_root = 0;  // c = e(eighth_root / 8)
  double residual = 0.0;
  std::array<double, 8> candidate_residuals{};
};

WeilCalibration calibrate_weil_normalization(const NumericComponents& h, ModularPoint probe);
// Calibrated once against phi_{10,1}; throws if the best residual exceeds 1e-9.
const WeilCalibration& weil_normalization();

// Product of generator images rho(T) = diag(e(-mu^2/4m)), rho(S) = c (2m)^{-1/2} U.
WeilMatrix weil_action(int m, const ModularWord& word);

// Values at word(tau) from values at tau, step by step with principal-branch automorphy factors.
std::vector<Complex> weil_transport(const NumericComponents& h, const ModularWord& word, ModularPoint tau,
                                    std::vector<Complex> values);
std::vector<Complex> h_eval(const NumericComponents& h, ModularPoint tau);

// Matrix of torus integrals of theta_{m,mu} conj(theta_{m,nu}) e^{-4 pi m y^2 / v}.
std::vector<Complex> theta_orthogonality_check(int m, ModularPoint tau, double quad_tol, int* nodes_used = nullptr);

}  // namespace jrs
