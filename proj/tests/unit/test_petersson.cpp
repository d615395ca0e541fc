#include <cmath>

#include "doctest.h"
#include "jrs/petersson.hpp"

using namespace jrs;

namespace {

const std::pair<JacobiFormTable, JacobiFormTable>& forms() {
  static const auto f = cusp_forms_index1(300);
  return f;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("petersson") {
  TEST_CASE("fundamental domain rule integrates the hyperbolic area") {
    QuadratureSpec spec;
    const auto nodes = fundamental_domain_nodes(spec, 60.0);
    double area = 0.0;
    for (const auto& n : nodes) area += n.w / (n.v * n.v);
    // pi/3 minus the cut-off tail int_60^inf v^{-2} dv
    CHECK(std::fabs(area - (kPi / 3.0 - 1.0 / 60.0)) < 1e-12);
    double sum_u = 0.0;
    for (const auto& n : nodes) sum_u += n.w * n.u;
    CHECK(std::fabs(sum_u) < 1e-13);
  }

  TEST_CASE("elliptic norm of Delta") {
    const QSeries delta = ramanujan_delta(200);
    const auto r = petersson_elliptic(delta, delta, 12);
    CHECK(r.value.real() > 0.0);
    CHECK(std::fabs(r.value.imag()) <= r.error_estimate + 1e-30);
    CHECK(std::fabs(r.value.real() / 1.03536205680432e-6 - 1.0) < 1e-9);
    const auto r3 = petersson_elliptic(delta.scaled(3), delta, 12);
    CHECK(rel(r3.value, 3.0 * r.value) < 1e-12);
  }

  TEST_CASE("elliptic Hermitian symmetry and Cauchy-Schwarz in weight 24") {
    const QSeries delta = ramanujan_delta(200);
    const QSeries e4 = elliptic_eisenstein(4, 200);
    const QSeries f = delta * delta;
    const QSeries g = delta * e4 * e4 * e4;
    const auto fg = petersson_elliptic(f, g, 24);
    const auto gf = petersson_elliptic(g, f, 24);
    const auto ff = petersson_elliptic(f, f, 24);
    const auto gg = petersson_elliptic(g, g, 24);
    CHECK(std::abs(fg.value - std::conj(gf.value)) <= fg.error_estimate + gf.error_estimate + 1e-14 * std::abs(fg.value));
    CHECK(std::norm(fg.value) < ff.value.real() * gg.value.real());
    // f and g are independent, so the inequality is strict
    CHECK(std::norm(fg.value) / (ff.value.real() * gg.value.real()) < 0.999);
  }

  TEST_CASE("direct and unfolded Jacobi products agree") {
    const auto& phi = forms().first;
    const auto d = petersson_jacobi_direct(phi, phi);
    const auto u = petersson_jacobi_unfolded(phi, phi);
    CHECK(d.value.real() > 0.0);
    CHECK(std::fabs(u.value.imag()) <= u.error_estimate + 1e-30);
    CHECK(rel(d.value, u.value) <= std::max(1e-9, (d.error_estimate + u.error_estimate) / std::abs(u.value)));
    CHECK(d.method == "direct");
    CHECK(u.method == "unfolded");
  }

  TEST_CASE("unfolding constant gate and index 2") {
    const auto& phi = forms().first;
    const auto v = validate_unfolding_constant(phi);
    CHECK(std::fabs(v.ratio - 1.0) < 1e-8);
    CHECK(unfolding_constant(1) == doctest::Approx(0.25));
    const JacobiFormTable v2 = hecke_V(phi, 2);
    const auto d = petersson_jacobi_direct(v2, v2);
    const auto u = petersson_jacobi_unfolded(v2, v2);
    CHECK(rel(d.value, u.value) < 1e-8);
  }

  TEST_CASE("sesquilinearity and weight mismatch") {
    const auto& [phi10, phi12] = forms();
    const JacobiFormTable twice = phi10.scaled(2);
    const auto a = petersson_jacobi_unfolded(twice, phi10);
    const auto b = petersson_jacobi_unfolded(phi10, phi10);
    CHECK(rel(a.value, 2.0 * b.value) < 1e-12);
    CHECK_THROWS_AS(petersson_jacobi_unfolded(phi10, phi12), std::invalid_argument);
    CHECK_THROWS_AS(petersson_jacobi_direct(phi10, phi12), std::invalid_argument);
  }

  TEST_CASE("unfolded value is stable under doubling the cutoff") {
    const auto& phi = forms().first;
    QuadratureSpec spec;
    const auto base = petersson_jacobi_unfolded(phi, phi, spec);
    spec.v_max = 12.0;
    const auto a = petersson_jacobi_unfolded(phi, phi, spec);
    spec.v_max = 24.0;
    const auto b = petersson_jacobi_unfolded(phi, phi, spec);
    CHECK(rel(a.value, b.value) < 1e-9);
    CHECK(rel(base.value, b.value) < 1e-9);
  }

  TEST_CASE("Gamma_0(4) product is well defined") {
    const PlusFormTable F = iota_plus(forms().first);
    const auto a = petersson_halfintegral(F, F);
    const auto b = petersson_halfintegral(F, F, {}, gamma0_four_cosets_alternate());
    CHECK(a.value.real() > 0.0);
    CHECK(std::fabs(a.value.imag()) <= a.error_estimate + 1e-30);
    CHECK(rel(a.value, b.value) < 1e-6);
    for (const auto& g : gamma0_four_cosets_alternate()) {
      CHECK(g.a * g.d - g.b * g.c == 1);
    }
    const PlusFormTable G = F.scaled(5);
    CHECK(rel(petersson_halfintegral(G, F).value, 5.0 * a.value) < 1e-12);
  }

  TEST_CASE("plus form value agrees with its q-expansion at large height") {
    const PlusFormTable F = iota_plus(forms().first);
    const NumericComponents h(plus_to_theta(F));
    const ModularPoint tau(0.17, 1.3);
    Complex direct = 0.0;
    for (const auto& [D, c] : F.coeffs()) direct += c.to_double() * std::exp(Complex(0, 2 * kPi * D) * tau.tau());
    CHECK(rel(plus_form_value(h, tau), direct) < 1e-12);
  }

  TEST_CASE("norm relation for weights 10 and 12") {
    const auto& [phi10, phi12] = forms();
    const auto r10 = check_norm_relation(phi10, phi10);
    CHECK(r10.expected == doctest::Approx(131072.0));
    CHECK(r10.rel_error < 1e-3);
    const auto r12 = check_norm_relation(phi12, phi12);
    CHECK(r12.expected == doctest::Approx(2097152.0));
    CHECK(r12.rel_error < 1e-3);
    const auto r7 = check_norm_relation(phi10.scaled(7), phi10.scaled(7));
    CHECK(std::fabs(r7.ratio / r10.ratio - 1.0) < 1e-10);
  }
}
