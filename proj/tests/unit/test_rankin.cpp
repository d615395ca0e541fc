#include <cmath>

#include "doctest.h"
#include "jrs/rankin.hpp"

using namespace jrs;

namespace {

struct Data {
  JacobiFormTable phi10, phi12, v2;
  QSeries delta;
};

const Data& data() {
  static const Data d = [] {
    auto f = cusp_forms_index1(4000);
    return Data{f.first, f.second, hecke_V(f.first, 2), ramanujan_delta(4000)};
  }();
  return d;
}

const RankinPair& phi_pair() {
  static const RankinPair p = RankinPair::jacobi(data().phi10, data().phi10);
  return p;
}

const RankinIntegrator& phi_engine() {
  static const RankinIntegrator e(phi_pair());
  return e;
}

Complex xi_by_hand(Complex z) { return std::exp(-0.5 * z * std::log(kPi)) * gamma_fn(0.5 * z) * zeta(z); }

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("rankin") {
  TEST_CASE("gamma factor instances") {
    SeriesParams p;  // n = t = r = 1, k = 10, det M = 1
    const Complex s(12.0, 0.0);
    const double fact11 = 39916800.0;
    const Complex expect = std::pow(4.0 * kPi, -12.0) * fact11 * xi_by_hand(7.0);
    CHECK(rel(gamma_factor(p, s), expect) < 1e-13);
    p.detM = BigRational(2);
    CHECK(rel(gamma_factor(p, s), 4096.0 * expect) < 1e-13);

    SeriesParams e;  // classical completion Gamma(s) xi(2s - 2k + 2) (4 pi)^{-s}
    e.r = 0;
    e.k = 12;
    const Complex z(13.3, 2.1);
    CHECK(rel(gamma_factor(e, z), std::exp(-z * std::log(4.0 * kPi)) * gamma_fn(z) * xi_by_hand(2.0 * z - 22.0)) < 1e-12);

    SeriesParams two;  // t = 2: both products non-empty
    two.n = 2;
    two.t = 2;
    two.k = 10;
    const Complex w(14.2, 0.5);
    const Complex by_hand = std::exp(-2.0 * w * std::log(4.0 * kPi)) * gamma_fn(w) * xi_by_hand(2.0 * w - 16.0) *
                            gamma_fn(w - 0.5) * xi_by_hand(2.0 * w - 17.0) *
                            xi_by_hand(4.0 * w - 34.0);
    CHECK(rel(gamma_factor(two, w), by_hand) < 1e-12);

    SeriesParams half;
    half.half = true;
    CHECK(rel(gamma_factor(half, s), std::pow(4.0, 12.0) * expect) < 1e-13);
    CHECK_THROWS_AS(gamma_factor(p, Complex(9.0, 0.0)), std::domain_error);
  }

  TEST_CASE("reflection points") {
    SeriesParams p;
    CHECK(reflection_point(p, 9.7) == Complex(8.3, 0.0));
    p.r = 0;
    p.k = 12;
    CHECK(reflection_point(p, 3.0) == Complex(20.0, 0.0));
  }

  TEST_CASE("raw series bookkeeping") {
    const auto& phi = data().phi10;
    for (const auto& o : enumerate_orbits(1, 200)) CHECK(o.eps == 2);
    const auto& terms = phi_pair().terms();
    CHECK(terms.front().det == BigRational(mpz_class(3), mpz_class(4)));
    CHECK(terms.front().weight == BigRational(mpz_class(1), mpz_class(2)));
    CHECK(terms[1].weight == BigRational(2));  // c(4)^2 / 2 = 4 / 2

    const JacobiFormTable zero(10, 1, 200, true);
    const RankinPair zp = RankinPair::jacobi(zero, zero);
    CHECK(dirichlet_raw(zp, 13.0, 200).value == Complex(0.0));
    CHECK_THROWS_AS(dirichlet_raw(phi_pair(), 10.0, 200), std::domain_error);
    CHECK_THROWS_AS(RankinPair::jacobi(phi, data().phi12), std::invalid_argument);

    const QSeries& d = data().delta;
    const RankinPair dp = RankinPair::elliptic(d, d, 12);
    const Complex s(14.0, 1.0);
    Complex by_hand = 0.0;
    for (std::int64_t n = 1; n <= 500; ++n) by_hand += 0.5 * std::pow(d.coeff(n).to_double(), 2) * std::exp(-s * std::log(double(n)));
    CHECK(rel(dirichlet_raw(dp, s, 500).value, by_hand) < 1e-13);
  }

  TEST_CASE("raw tail estimate covers doubling the range") {
    const Complex s(12.0, 0.0);
    for (const RankinPair* p : {&phi_pair()}) {
      const RawSum a = dirichlet_raw(*p, s, 2000), b = dirichlet_raw(*p, s, 4000);
      CHECK(std::abs(a.value - b.value) < a.tail_estimate);
      CHECK(b.tail_estimate < a.tail_estimate);
    }
  }

  TEST_CASE("sum and integral agree in the convergent region") {
    const auto& e = phi_engine();
    for (Complex s : {Complex(12.0, 0.0), Complex(11.5, 0.7)}) {
      const auto a = dirichlet_sum(phi_pair(), s, 4000);
      const auto b = e.evaluate(s);
      CHECK(rel(a.completed, b.completed) < 1e-6);
      CHECK(b.error_estimate < 1e-9 * std::abs(b.completed));
      REQUIRE(b.raw.has_value());
      CHECK(rel(*b.raw, *a.raw) < 1e-6);
    }
    const RankinPair v2 = RankinPair::jacobi(data().v2, data().v2);
    CHECK(v2.params().detM == BigRational(2));
    CHECK(rel(dirichlet_sum(v2, 12.0, 4000).completed, RankinIntegrator(v2).evaluate(12.0).completed) < 1e-6);
  }

  TEST_CASE("conjugate symmetry and exclusion") {
    const auto& e = phi_engine();
    const Complex s(9.2, 1.7);
    CHECK(std::abs(e.evaluate(std::conj(s)).completed - std::conj(e.evaluate(s).completed)) <
          1e-12 * std::abs(e.evaluate(s).completed));
    CHECK(e.eisenstein_argument(9.5) == Complex(1.0, 0.0));
    CHECK_THROWS_AS(e.evaluate(9.505), std::domain_error);
    CHECK_THROWS_AS(e.evaluate(8.495), std::domain_error);
  }

  TEST_CASE("functional equation") {
    const auto& e = phi_engine();
    const auto mixed = functional_equation_residual(e, Complex(12.5, 0.8));
    CHECK(mixed.at_s.method == "sum");
    CHECK(mixed.at_star.method == "integral");
    CHECK(mixed.s_star == Complex(5.5, -0.8));
    CHECK(mixed.residual < 1e-8);
    CHECK(functional_equation_residual(e, 9.0).residual < 1e-10);
    CHECK(functional_equation_residual(e, Complex(9.7, 1.3)).residual < 1e-6);
  }

  TEST_CASE("residue at the right edge, both routes") {
    const auto r = residue_at_right_edge(phi_engine());
    CHECK(r.s0 == doctest::Approx(9.5));
    CHECK(r.agreement < 1e-3);
    const auto norm = petersson_jacobi_direct(data().phi10, data().phi10);
    CHECK(rel(r.route_a, norm.value) < 1e-4);
    CHECK(rel(r.route_b, norm.value) < 1e-4);
  }

  TEST_CASE("pole scan finds the two poles only") {
    const RankinPair dp = RankinPair::elliptic(data().delta, data().delta, 12);
    QuadratureSpec scan;
    scan.order = 8;
    scan.cells_u = 2;
    scan.cells_v = 2;
    const auto ps = pole_scan(dp, 10.0, 13.0, 0.025, scan);
    REQUIRE(ps.detected.size() == 2);
    CHECK(ps.detected[0] == doctest::Approx(11.0));
    CHECK(ps.detected[1] == doctest::Approx(12.0));
    for (double s : ps.large) CHECK((std::fabs(s - 11.0) < 0.05 || std::fabs(s - 12.0) < 0.05));
  }

  TEST_CASE("half relation pairs every term; the measured ratio is 1") {
    const auto& phi = data().phi10;
    const auto rep = half_relation_check(phi, phi, 400, {Complex(12.0, 0.0), Complex(11.0, 3.0)});
    CHECK(rep.unpaired.empty());
    CHECK(rep.pairs == 200);
    CHECK(rep.det_scaling_exact);
    CHECK(rep.claimed == BigRational(2));
    REQUIRE(rep.measured.has_value());
    CHECK(*rep.measured == BigRational(1));
    CHECK(rep.mismatched.size() == rep.pairs);
    CHECK_FALSE(rep.identity_holds());
    for (const auto& s : rep.samples) CHECK(s.residual == doctest::Approx(0.5).epsilon(1e-12));

    const JacobiFormTable zero(10, 1, 400, true);
    const auto z = half_relation_check(zero, zero, 400);
    CHECK(z.pairs == 0);
    CHECK(z.unpaired.empty());

    PlusFormTable bad = iota_plus(phi);
    bad.set(19, bad.coeff(19) + BigRational(1));
    const auto m = half_relation_check(phi, phi, iota_plus(phi), bad, 400);
    REQUIRE(m.inconsistent.size() == 1);
    CHECK(m.inconsistent[0] == 19);
    CHECK_FALSE(m.measured.has_value());
  }

  TEST_CASE("plus-space residue against the Gamma_0(4) product") {
    const PlusFormTable F = iota_plus(data().phi10.truncated(600));
    const auto c = corollary_residue_check(F, F);
    CHECK(c.kappa == BigRational(1));
    CHECK(c.rel_error < 1e-3);
    const auto c2 = corollary_residue_check(F.scaled(3), F);
    CHECK(rel(c2.residue, 3.0 * c.residue) < 1e-10);
    CHECK(rel(c2.expected, 3.0 * c.expected) < 1e-10);
  }
}
