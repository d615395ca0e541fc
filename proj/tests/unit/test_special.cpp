#include <boost/math/special_functions/bessel.hpp>
#include <random>

#include "doctest.h"
#include "jrs/special.hpp"

using namespace jrs;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

// Borwein's alternating-series algorithm for eta(s), zeta = eta / (1 - 2^{1-s}).
Complex zeta_borwein(Complex s) {
  const int n = 60;
  std::vector<long double> d(n + 1);
  long double term = 1.0L / n, sum = term;
  d[0] = sum;
  for (int i = 1; i <= n; ++i) {
    term *= static_cast<long double>(n + i - 1) * 4.0L * (n - i + 1) / ((2.0L * i - 1) * (2.0L * i));
    sum += term;
    d[i] = sum;
  }
  std::complex<long double> acc = 0.0L;
  const std::complex<long double> ss(s.real(), s.imag());
  for (int k = 0; k < n; ++k) {
    std::complex<long double> t = (d[k] - d[n]) * std::exp(-ss * std::log(static_cast<long double>(k + 1)));
    acc += (k % 2 == 0) ? t : -t;
  }
  acc = -acc / d[n];
  const std::complex<long double> eta = acc;
  const std::complex<long double> f = 1.0L - std::exp((1.0L - ss) * std::log(2.0L));
  const std::complex<long double> z = eta / f;
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

const NumericComponents& phi10_components() {
  static const NumericComponents h(theta_decompose(cusp_forms_index1(400).first));
  return h;
}

ModularWord random_word(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len), pw(-2, 2), coin(0, 1);
  ModularWord w;
  const int L = len(rng);
  for (int i = 0; i < L; ++i) {
    if (coin(rng)) {
      w.push_back({WordStep::S, 1});
    } else {
      int p = pw(rng);
      w.push_back({WordStep::T, p == 0 ? 1 : p});
    }
  }
  return w;
}

}  // namespace

TEST_SUITE("special") {
  TEST_CASE("Gamma function") {
    CHECK(rel(gamma_fn(12.0), 39916800.0) < 1e-14);
    CHECK(rel(gamma_fn(0.5), std::sqrt(kPi)) < 1e-14);
    CHECK(rel(gamma_fn(Complex(0.3, 4.0)), Complex(0.001164643684811490564, 0.0033525598880352024374)) < 1e-12);
    CHECK(rel(gamma_fn(Complex(-4.7, 1.1)), Complex(-0.00112323590441651868, -0.0028541096060534494539)) < 1e-12);
    for (double x = 0.1; x < 30.0; x += 0.37) CHECK(rel(gamma_fn(x), std::tgamma(x)) < 1e-13);
    const Complex z(2.3, -7.9);
    CHECK(rel(gamma_fn(z + 1.0), z * gamma_fn(z)) < 1e-13);
    CHECK_THROWS(gamma_fn(-3.0));
  }

  TEST_CASE("zeta by Euler-Maclaurin against the alternating series") {
    CHECK(rel(zeta(2.0), kPi * kPi / 6.0) < 1e-14);
    CHECK(rel(zeta(-1.0), -1.0 / 12.0) < 1e-13);
    CHECK(rel(zeta(-3.0), 1.0 / 120.0) < 1e-13);
    CHECK(rel(zeta(Complex(0.5, 30.0)), Complex(-0.12064228759004369991, -0.58369121476370628876)) < 1e-12);
    CHECK(rel(zeta(Complex(-7.3, 2.0)), Complex(0.039600612781817853023, 0.00069972127676034923687)) < 1e-12);
    for (Complex s : {Complex(0.7, 3.0), Complex(2.5, -1.0), Complex(4.0, 0.0), Complex(1.3, 12.0), Complex(7.0, 5.0)}) {
      CHECK(rel(zeta(s), zeta_borwein(s)) < 1e-12);
    }
    CHECK_THROWS(zeta(1.0));
  }

  TEST_CASE("completed zeta") {
    CHECK(rel(xi_completed(2.0), kPi / 6.0) < 1e-14);
    CHECK(rel(xi_completed(4.0), kPi * kPi / 90.0) < 1e-14);
    const Complex s(0.3, 0.7);
    CHECK(std::abs(xi_completed(s) - xi_completed(1.0 - s)) < 1e-14);
    // independent assembly from the oracle zeta
    for (Complex t : {Complex(3.3, 4.0), Complex(0.8, 20.0), Complex(10.0, -30.0), Complex(-20.0, 10.0)}) {
      Complex w = t.real() < 0.5 ? 1.0 - t : t;
      Complex expected = std::exp(-0.5 * w * std::log(kPi)) * gamma_fn(0.5 * w) * zeta_borwein(w);
      CHECK(rel(xi_completed(t), expected) < 1e-12);
    }
    CHECK_THROWS(xi_completed(0.0));
    CHECK_THROWS(xi_completed(1.0));
  }

  TEST_CASE("K-Bessel of real order against Boost") {
    CHECK(std::fabs(bessel_K(0.5, 1.0) / (std::sqrt(kPi / 2.0) * std::exp(-1.0)) - 1.0) < 1e-14);
    CHECK(std::fabs(bessel_K(0.5, 1.0) - 0.4610685044478946) < 1e-15);
    CHECK(bessel_K(-3.3, 2.0) == bessel_K(3.3, 2.0));
    CHECK(std::fabs(bessel_K(0.0, 30.0) * std::exp(30.0) * std::sqrt(60.0 / kPi) - 1.0) < 0.02);
    double worst = 0.0;
    for (double nu : {0.0, 0.25, 1.0, 2.5, 7.0, 13.3, 25.0, 40.0, 60.0}) {
      for (double x : {1e-3, 0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 50.0, 200.0, 700.0}) {
        const double ref = boost::math::cyl_bessel_k(nu, x);
        if (!std::isfinite(ref) || ref == 0.0) continue;
        worst = std::max(worst, std::fabs(bessel_K(nu, x) / ref - 1.0));
      }
    }
    CHECK(worst < 1e-12);
    CHECK_THROWS(bessel_K(1.0, 0.0));
  }

  TEST_CASE("K-Bessel of complex order") {
    struct Row { Complex nu; double x; Complex ref; };
    const Row rows[] = {
        {{2.5, 3.0}, 1.7, {-0.14508608234288504419, -0.055650529712937604183}},
        {{0.3, -7.0}, 2.0, {0.000017358123151828125387, -5.7660885935796406055e-6}},
        {{6.2, 10.0}, 5.0, {0.00022750337348612280417, -0.00023364596201482627755}},
        {{1.0, 25.0}, 30.0, {2.2697133570757767273e-19, 3.1510602235234699703e-19}},
        {{-3.5, 2.0}, 0.05, {-346739.45364432181857, 102875.03286713788535}},
    };
    for (const auto& r : rows) CHECK(rel(bessel_K(r.nu, r.x), r.ref) < 1e-11);
    // K_{nu-1} - K_{nu+1} = -(2 nu / x) K_nu
    for (Complex nu : {Complex(1.5, 2.0), Complex(4.0, -6.0), Complex(0.7, 0.3)}) {
      for (double x : {0.3, 2.0, 9.0}) {
        Complex lhs = bessel_K(nu - 1.0, x) - bessel_K(nu + 1.0, x);
        Complex rhs = -(2.0 * nu / x) * bessel_K(nu, x);
        CHECK(rel(lhs, rhs) < 1e-9);
      }
    }
  }

  TEST_CASE("reduction to the fundamental domain") {
    Reduction r = reduce_to_fundamental(ModularPoint(0.0, 1.0));
    CHECK(r.word.empty());
    Reduction r2 = reduce_to_fundamental(ModularPoint(0.5, 0.01));
    CHECK(r2.point.v > 0.5);
    CHECK(reduce_to_fundamental(r2.point).word.empty());
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-3.0, 3.0), V(-6.0, 0.5);
    for (int i = 0; i < 200; ++i) {
      ModularPoint t(U(rng), std::pow(10.0, V(rng)));
      Reduction red = reduce_to_fundamental(t);
      CHECK(std::abs(red.point.tau()) >= 1.0 - 1e-14);
      CHECK(std::fabs(red.point.u) <= 0.5 + 1e-14);
      CHECK(std::abs(apply_word(red.word, red.point).tau() - t.tau()) < 1e-12 * std::max(1.0, std::abs(t.tau())));
    }
  }

  TEST_CASE("Eisenstein series: invariance, reflection, residue") {
    const Complex s(1.7, 0.4);
    const ModularPoint tau(0.3, 1.2);
    const ModularPoint stau(-1.0 / tau.tau());
    const Complex a = eisenstein_lambda(s, tau, 1e-14), b = eisenstein_lambda(s, stau, 1e-14);
    CHECK(rel(a, b) < 1e-10);
    CHECK(rel(eisenstein_lambda(1.0 - s, tau, 1e-14), a) < 1e-10);
    // at s = 2 the series is xi(4) E(2, tau); E(2, i) from the lattice sum (1/2) sum' v^2/|m tau + n|^4
    const ModularPoint i(0.0, 1.0);
    double lattice = 0.0;
    for (int m = -400; m <= 400; ++m)
      for (int n = -400; n <= 400; ++n)
        if (m != 0 || n != 0) lattice += 1.0 / std::pow(double(m) * m + double(n) * n, 2);
    lattice *= 0.5 / zeta(4.0).real();  // Eisenstein series over coprime pairs
    CHECK(std::fabs(eisenstein_lambda(2.0, i, 1e-14).real() / (xi_completed(4.0).real() * lattice) - 1.0) < 1e-4);
    for (ModularPoint t : {ModularPoint(0.0, 1.0), ModularPoint(0.4, 0.8), ModularPoint(-0.2, 3.0)}) {
      CHECK(std::abs(eisenstein_residue(t, 1e-14) - 0.5) < 1e-8);
    }
    CHECK_THROWS(eisenstein_lambda(1.0, i, 1e-10));
    // centre of the functional equation
    const Complex c = eisenstein_lambda(Complex(0.5, 0.0), tau, 1e-14);
    const Complex near = eisenstein_lambda(Complex(0.5 + 1e-3, 0.0), tau, 1e-14);
    CHECK(std::abs(c - near) < 1e-4 * std::abs(c));
  }

  TEST_CASE("Weil representation: calibration and unitarity") {
    const WeilCalibration& cal = weil_normalization();
    CHECK(cal.eighth_root == 1);
    CHECK(cal.residual < 1e-9);
    for (int j = 0; j < 8; ++j)
      if (j != cal.eighth_root) CHECK(cal.candidate_residuals[j] > 0.1);
    std::mt19937_64 rng(9);
    for (int m : {1, 2, 3}) {
      for (int rep = 0; rep < 5; ++rep) {
        WeilMatrix w = weil_action(m, random_word(rng, 8));
        const int n = 2 * m;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            Complex acc = 0.0;
            for (int l = 0; l < n; ++l) acc += w.at(i, l) * std::conj(w.at(j, l));
            CHECK(std::abs(acc - (i == j ? 1.0 : 0.0)) < 1e-12);
          }
      }
    }
  }

  TEST_CASE("h_eval modularity") {
    const NumericComponents& h = phi10_components();
    const ModularPoint high(0.17, 2.3);
    auto direct = h.series(high);
    auto via = h_eval(h, high);
    for (std::size_t i = 0; i < direct.size(); ++i) CHECK(std::abs(via[i] - direct[i]) <= 1e-12 * std::abs(direct[i]));

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(-0.5, 0.5), V(0.7, 2.0);
    int tested = 0;
    double worst = 0.0;
    while (tested < 50) {
      const ModularWord w = random_word(rng, 12);
      const ModularPoint t(U(rng), V(rng));
      const ModularPoint gt = apply_word(w, t);
      if (gt.v < 1e-3) continue;
      const auto lhs = h_eval(h, gt);
      const auto rhs = weil_transport(h, w, t, h.series(t));
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < lhs.size(); ++i) {
        num += std::norm(lhs[i] - rhs[i]);
        den += std::norm(rhs[i]);
      }
      worst = std::max(worst, std::sqrt(num / den));
      // the per-step automorphy product agrees with (c tau + d)^{k-1/2} up to a sign
      const auto g = word_matrix(w);
      const Complex j = std::exp(9.5 * std::log(double(g[2]) * t.tau() + double(g[3])));
      const Complex rho = std::abs(rhs[1]) > 0 ? rhs[1] / j : 1.0;
      CHECK(std::isfinite(std::abs(rho)));
      ++tested;
    }
    CHECK(worst <= 1e-9);
  }

  TEST_CASE("two routes to the same point agree") {
    const NumericComponents& h = phi10_components();
    const ModularPoint t(0.21, 1.1);
    // S T S T^{-1} S applied to t, and the same point reached by reduction
    const ModularWord w{{WordStep::S, 1}, {WordStep::T, 1}, {WordStep::S, 1}, {WordStep::T, -1}, {WordStep::S, 1}};
    const ModularPoint p = apply_word(w, t);
    const auto a = weil_transport(h, w, t, h.series(t));
    const auto b = h_eval(h, p);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10 * std::abs(b[i]));
  }

  TEST_CASE("theta orthogonality") {
    auto check = [](int m, ModularPoint tau, double tol) {
      auto mat = theta_orthogonality_check(m, tau, 1e-12);
      const int n = 2 * m;
      const double expected = std::sqrt(tau.v) / std::sqrt(4.0 * m);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          CHECK(std::abs(mat[a * n + b] - (a == b ? expected : 0.0)) < tol);
          CHECK(std::abs(mat[a * n + b] - std::conj(mat[b * n + a])) < 1e-14);
        }
    };
    check(1, ModularPoint(0.0, 1.0), 1e-8);
    check(2, ModularPoint(0.0, 2.0), 1e-8);
    check(1, ModularPoint(0.3, 1.4), 1e-8);
    check(2, ModularPoint(0.3, 1.4), 1e-8);
    auto m1 = theta_orthogonality_check(1, ModularPoint(0.0, 1.0), 1e-12);
    CHECK(std::abs(m1[0] - 0.5) < 1e-8);
    // spectral convergence: the error at a coarse grid shrinks by many orders when refined
    int nodes = 0;
    theta_orthogonality_check(1, ModularPoint(0.0, 0.5), 1e-3, &nodes);
    int nodes_fine = 0;
    theta_orthogonality_check(1, ModularPoint(0.0, 0.5), 1e-12, &nodes_fine);
    CHECK(nodes_fine <= 4 * nodes);
  }
}
