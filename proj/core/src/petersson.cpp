#include "jrs/petersson.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace jrs {

namespace {

constexpr Complex kI(0.0, 1.0);

struct GaussRule {
  std::vector<double> x, w;  // on [-1, 1]
};

// Newton iteration on the Legendre recurrence.
GaussRule gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  GaussRule r{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  cache.emplace(n, r);
  return r;
}

std::vector<double> upper_breaks(const QuadratureSpec& spec, double v_max, double lambda) {
  std::vector<double> br{spec.v_split};
  const double cap = lambda > 0.0 ? 8.0 / lambda : 1e300;
  while (br.back() < v_max * (1.0 - 1e-12)) {
    const double a = br.back();
    br.push_back(std::min(v_max, a + std::min(a * (spec.panel_growth - 1.0), cap)));
  }
  return br;
}

std::vector<QuadNode> nodes_with(const QuadratureSpec& spec, double v_max, double lambda) {
  if (spec.cells_u < 1 || spec.cells_v < 1 || spec.order < 2) throw std::invalid_argument("QuadratureSpec: bad grid");
  if (!(v_max > spec.v_split)) throw std::invalid_argument("QuadratureSpec: v_max must exceed v_split");
  const GaussRule g = gauss_legendre(spec.order);
  std::vector<std::pair<double, double>> us;  // (u, weight)
  for (int c = 0; c < spec.cells_u; ++c) {
    const double a = -0.5 + static_cast<double>(c) / spec.cells_u, h = 1.0 / spec.cells_u;
    for (int i = 0; i < spec.order; ++i) us.emplace_back(a + 0.5 * h * (g.x[i] + 1.0), 0.5 * h * g.w[i]);
  }
  std::vector<QuadNode> out;
  for (const auto& [u, wu] : us) {
    const double b = std::sqrt(1.0 - u * u), len = spec.v_split - b;
    for (int c = 0; c < spec.cells_v; ++c) {
      const double a = static_cast<double>(c) / spec.cells_v, h = 1.0 / spec.cells_v;
      for (int i = 0; i < spec.order; ++i) {
        const double t = a + 0.5 * h * (g.x[i] + 1.0);
        out.push_back({u, b + len * t, wu * 0.5 * h * g.w[i] * len});
      }
    }
  }
  const auto br = upper_breaks(spec, v_max, lambda);
  for (const auto& [u, wu] : us) {
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
      const double a = br[p], h = br[p + 1] - br[p];
      for (int i = 0; i < spec.order; ++i) out.push_back({u, a + 0.5 * h * (g.x[i] + 1.0), wu * 0.5 * h * g.w[i]});
    }
  }
  return out;
}

double resolve_vmax(const QuadratureSpec& spec, double lambda, double p) {
  if (spec.v_max > 0.0) return spec.v_max;
  return choose_vmax(lambda, p, std::min(spec.target, 1e-6) * 1e-3, spec.v_split);
}

QuadratureSpec coarse_of(const QuadratureSpec& spec) {
  QuadratureSpec c = spec;
  c.order = std::max(4, spec.order - 4);
  c.torus_nodes = std::max(8, spec.torus_nodes * 3 / 4);
  return c;
}

void require_same_shape(const JacobiFormTable& a, const JacobiFormTable& b, const char* what) {
  if (a.weight() != b.weight() || a.index() != b.index()) {
    throw std::invalid_argument(std::string(what) + ": forms must share weight and index");
  }
  if (!a.cuspidal() || !b.cuspidal()) throw std::invalid_argument(std::string(what) + ": cusp forms required");
}

// Sum over nodes in fixed order for a given rule; the integrand sees the node and its weight.
template <class F>
Complex sum_nodes(const std::vector<QuadNode>& nodes, F&& f) {
  Complex acc = 0.0;
  for (const auto& n : nodes) acc += n.w * f(ModularPoint(n.u, n.v));
  return acc;
}

double tail_certificate(const std::function<Complex(ModularPoint)>& f, double v_max, double lambda, double p) {
  double c = 0.0;
  for (int j = 0; j <= 16; ++j) {
    const double u = -0.5 + j / 16.0;
    c = std::max(c, std::abs(f(ModularPoint(u, v_max))));
  }
  const double rate = lambda - p / v_max;
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  // int_V^inf v^p e^{-lambda v} <= V^p e^{-lambda V} / (lambda - p/V) for p >= 0
  return c / rate;
}

}  // namespace

std::vector<QuadNode> fundamental_domain_nodes(const QuadratureSpec& spec, double v_max, double lambda) {
  return nodes_with(spec, v_max, lambda);
}

QuadratureSpec coarse_spec(const QuadratureSpec& spec) { return coarse_of(spec); }

double choose_vmax(double lambda, double p, double rel, double v_split) {
  if (!(lambda > 0.0)) throw std::invalid_argument("choose_vmax: decay rate must be positive");
  const double v0 = std::sqrt(3.0) / 2.0;
  const double goal = -std::log(rel);
  double V = v_split + 0.5;
  while (V < 1e4) {
    const double drop = lambda * (V - v0) - p * std::log(V / v0);
    if (drop >= goal && V > 2.0 * p / lambda) return V;
    V += 0.25;
  }
  throw std::runtime_error("choose_vmax: no admissible cutoff");
}

DomainIntegral integrate_fundamental_domain(const std::function<Complex(ModularPoint)>& f, const QuadratureSpec& spec,
                                            double lambda, double p) {
  DomainIntegral out;
  out.v_max = resolve_vmax(spec, lambda, p);
  const auto fine = nodes_with(spec, out.v_max, lambda);
  const auto coarse = nodes_with(coarse_of(spec), out.v_max, lambda);
  out.value = sum_nodes(fine, f);
  out.quad_error = std::abs(out.value - sum_nodes(coarse, f));
  out.tail_bound = tail_certificate(f, out.v_max, lambda, std::max(p, 0.0));
  return out;
}

// ---------------------------------------------------------------- Jacobi products

double unfolding_constant(int m) {
  if (m < 1) throw std::invalid_argument("unfolding_constant: index must be positive");
  return 0.25 / std::sqrt(static_cast<double>(m));
}

namespace {

struct DirectEvaluator {
  struct Entry {
    std::int64_t D;
    std::int64_t R;  // representative in [0, 2m), shifted over R + 2m j
    double c;
  };
  int m, k;
  std::vector<Entry> entries;  // ascending D
  double growth;               // log max |c| / D^{k/2}

  explicit DirectEvaluator(const JacobiFormTable& phi) : m(phi.index()), k(phi.weight()) {
    growth = -1e300;
    for (const auto& [key, c] : phi.coeffs()) {
      if (c.is_zero()) continue;
      if (key.mu > m && key.mu < 2 * m) continue;  // -mu handled by symmetry of the R loop
      const double cd = c.to_double();
      entries.push_back({key.D, key.mu, cd});
      growth = std::max(growth, std::log(std::fabs(cd)) - 0.5 * k * std::log(static_cast<double>(key.D)));
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      return a.D != b.D ? a.D < b.D : a.R < b.R;
    });
  }

  int r_max(double v) const { return 2 * m + static_cast<int>(std::ceil(std::sqrt(2.0 * m * 45.0 / (kPi * v)))); }

  std::int64_t d_limit(double v, std::int64_t prec) const {
    for (std::int64_t D = 1; D <= prec; ++D) {
      const double lg = growth + 0.5 * k * std::log(static_cast<double>(D)) - kPi * v * D / (2.0 * m);
      if (D > k * m / (kPi * v) && lg < -45.0) return D;
    }
    throw std::out_of_range("petersson_jacobi_direct: table precision too short");
  }

  // A_R(tau) = sum_N c(N, R) q^N for |R| <= rmax; index R + rmax.
  std::vector<Complex> fourier(ModularPoint tau, int rmax, std::int64_t dlim) const {
    std::vector<Complex> A(2 * rmax + 1, 0.0);
    const Complex t = tau.tau();
    for (const auto& e : entries) {
      if (e.D > dlim) break;
      const bool self_pair = (e.R == 0 || e.R == m);
      for (int sgn : {1, -1}) {
        if (sgn == -1 && self_pair) break;
        const std::int64_t r0 = sgn * e.R;
        // all R = r0 (mod 2m) with |R| <= rmax
        std::int64_t R = r0 - 2LL * m * ((r0 + rmax) / (2 * m) + 1);
        for (; R <= rmax; R += 2 * m) {
          if (R < -rmax) continue;
          const std::int64_t num = e.D + R * R;
          const double N = static_cast<double>(num) / (4.0 * m);
          A[R + rmax] += e.c * std::exp(2.0 * kPi * kI * N * t);
        }
      }
    }
    return A;
  }
};

// v^{k-3} times the torus integral over z = a tau + b of phi conj(psi) exp(-4 pi m y^2 / v), dx dy = v da db.
Complex torus_integrand(const DirectEvaluator& ea, const DirectEvaluator& eb, std::int64_t prec, ModularPoint tau,
                        int nodes) {
  const int m = ea.m;
  const double v = tau.v;
  const int rmax = ea.r_max(v);
  const std::int64_t dlim = std::min(prec, std::max(ea.d_limit(v, prec), eb.d_limit(v, prec)));
  const auto A = ea.fourier(tau, rmax, dlim);
  const auto B = (&ea == &eb) ? A : eb.fourier(tau, rmax, dlim);
  const int nb = std::max(nodes, 2 * rmax + 2);
  std::vector<Complex> wa(2 * rmax + 1), wb(2 * rmax + 1), roots(nb);
  for (int j = 0; j < nb; ++j) roots[j] = std::exp(2.0 * kPi * kI * (static_cast<double>(j) / nb));
  Complex total = 0.0;
  for (int ia = 0; ia < nodes; ++ia) {
    const double a = static_cast<double>(ia) / nodes;
    const double y = a * v;
    const double gauss = std::exp(-4.0 * kPi * m * y * y / v);
    for (int R = -rmax; R <= rmax; ++R) {
      // zeta^R at b = 0
      const Complex zr = std::exp(2.0 * kPi * kI * static_cast<double>(R) * a * tau.tau());
      wa[R + rmax] = A[R + rmax] * zr;
      wb[R + rmax] = B[R + rmax] * zr;
    }
    Complex row = 0.0;
    for (int ib = 0; ib < nb; ++ib) {
      Complex fa = 0.0, fb = 0.0;
      for (int R = -rmax; R <= rmax; ++R) {
        const Complex w = roots[((static_cast<long long>(R) * ib) % nb + nb) % nb];
        fa += wa[R + rmax] * w;
        fb += wb[R + rmax] * w;
      }
      row += fa * std::conj(fb);
    }
    total += row * gauss / static_cast<double>(nb);
  }
  total /= static_cast<double>(nodes);
  return total * v * std::pow(v, ea.k - 3);
}

Complex unfolded_integrand(const NumericComponents& ha, const NumericComponents& hb, ModularPoint tau) {
  const auto a = ha.series(tau);
  const auto b = (&ha == &hb) ? a : hb.series(tau);
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s * std::pow(tau.v, ha.k() - 2.5);
}

InnerProductResult finish(const DomainIntegral& I, double scale, const char* method) {
  return {I.value * scale, (I.quad_error + I.tail_bound) * scale, method};
}

DomainIntegral unfolded_raw(const JacobiFormTable& phi, const JacobiFormTable& psi, const QuadratureSpec& spec) {
  const NumericComponents ha(theta_decompose(phi));
  const NumericComponents hb(theta_decompose(psi));
  const bool same = (&phi == &psi);
  const NumericComponents& hbr = same ? ha : hb;
  const double lambda = 2.0 * kPi * (ha.leading_exponent() + hbr.leading_exponent());
  return integrate_fundamental_domain([&](ModularPoint t) { return unfolded_integrand(ha, hbr, t); }, spec, lambda,
                                      phi.weight() - 2.5);
}

}  // namespace

InnerProductResult petersson_jacobi_direct(const JacobiFormTable& phi, const JacobiFormTable& psi,
                                           const QuadratureSpec& spec) {
  require_same_shape(phi, psi, "petersson_jacobi_direct");
  const DirectEvaluator ea(phi);
  const DirectEvaluator eb(psi);
  const bool same = (&phi == &psi);
  const DirectEvaluator& ebr = same ? ea : eb;
  const std::int64_t prec = std::min(phi.prec(), psi.prec());
  const double lead_a = ea.entries.empty() ? 1.0 : ea.entries.front().D / (4.0 * phi.index());
  const double lead_b = ebr.entries.empty() ? 1.0 : ebr.entries.front().D / (4.0 * phi.index());
  const double lambda = 2.0 * kPi * (lead_a + lead_b);
  const double p = phi.weight() - 2.5;
  DomainIntegral I;
  I.v_max = resolve_vmax(spec, lambda, p);
  const auto fine = nodes_with(spec, I.v_max, lambda);
  const QuadratureSpec cs = coarse_of(spec);
  const auto coarse = nodes_with(cs, I.v_max, lambda);
  auto at = [&](int nodes) {
    return [&, nodes](ModularPoint t) { return torus_integrand(ea, ebr, prec, t, nodes); };
  };
  I.value = sum_nodes(fine, at(spec.torus_nodes));
  I.quad_error = std::abs(I.value - sum_nodes(coarse, at(cs.torus_nodes)));
  I.tail_bound = tail_certificate(at(spec.torus_nodes), I.v_max, lambda, p);
  return finish(I, 0.5, "direct");
}

InnerProductResult petersson_jacobi_unfolded(const JacobiFormTable& phi, const JacobiFormTable& psi,
                                             const QuadratureSpec& spec) {
  require_same_shape(phi, psi, "petersson_jacobi_unfolded");
  static std::once_flag validated;
  std::call_once(validated, [] {
    // Gate the frozen constant once against the four-dimensional definition.
    const auto forms = cusp_forms_index1(400);
    (void)validate_unfolding_constant(forms.first);
  });
  return finish(unfolded_raw(phi, psi, spec), unfolding_constant(phi.index()), "unfolded");
}

UnfoldingValidation validate_unfolding_constant(const JacobiFormTable& phi) {
  UnfoldingValidation out;
  out.direct = petersson_jacobi_direct(phi, phi);
  out.unfolded = finish(unfolded_raw(phi, phi, {}), unfolding_constant(phi.index()), "unfolded");
  out.ratio = out.direct.value.real() / out.unfolded.value.real();
  if (!(std::fabs(out.ratio - 1.0) <= 1e-2)) {
    throw std::runtime_error("validate_unfolding_constant: direct/unfolded ratio " + std::to_string(out.ratio));
  }
  return out;
}

// ---------------------------------------------------------------- Gamma_0(4)

std::vector<CosetRep> gamma0_four_cosets() {
  return {{1, 0, 0, 1}, {0, -1, 1, 0}, {0, -1, 1, 1}, {0, -1, 1, 2}, {0, -1, 1, 3}, {1, 0, 2, 1}};
}

std::vector<CosetRep> gamma0_four_cosets_alternate() {
  // left factors in Gamma_0(4), alternating
  const CosetRep left[2] = {{1, 1, 4, 5}, {-3, 1, -4, 1}};
  std::vector<CosetRep> out;
  const auto reps = gamma0_four_cosets();
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const CosetRep& l = left[i % 2];
    const CosetRep& g = reps[i];
    out.push_back({l.a * g.a + l.b * g.c, l.a * g.b + l.b * g.d, l.c * g.a + l.d * g.c, l.c * g.b + l.d * g.d});
  }
  return out;
}

Complex plus_form_value(const NumericComponents& h, ModularPoint tau) {
  const auto vals = h_eval(h, ModularPoint(4.0 * tau.u, 4.0 * tau.v));
  Complex s = 0.0;
  for (const auto& x : vals) s += x;
  return s;
}

InnerProductResult petersson_halfintegral(const PlusFormTable& F, const PlusFormTable& G, const QuadratureSpec& spec,
                                          const std::vector<CosetRep>& cosets) {
  if (F.k() != G.k()) throw std::invalid_argument("petersson_halfintegral: weights differ");
  if (cosets.size() != 6) throw std::invalid_argument("petersson_halfintegral: need 6 coset representatives");
  const NumericComponents hf(plus_to_theta(F));
  const NumericComponents hg(plus_to_theta(G));
  const bool same = (&F == &G);
  const NumericComponents& hgr = same ? hf : hg;
  const double kappa = F.k() - 0.5;
  // The slowest cusp is 0 (width 4): |F(-1/tau)|^2 decays like exp(-2 pi v (a + b) / 4).
  const double lambda = 0.5 * kPi * (hf.leading_exponent() + hgr.leading_exponent());
  const double p = kappa - 2.0;
  Complex total = 0.0;
  double err = 0.0;
  for (const auto& g : cosets) {
    if (g.a * g.d - g.b * g.c != 1) throw std::invalid_argument("petersson_halfintegral: coset rep not in SL2(Z)");
    auto f = [&](ModularPoint t) -> Complex {
      const Complex tau = t.tau();
      const Complex w = (static_cast<double>(g.a) * tau + static_cast<double>(g.b)) /
                        (static_cast<double>(g.c) * tau + static_cast<double>(g.d));
      const ModularPoint wp(w);
      const Complex a = plus_form_value(hf, wp);
      const Complex b = same ? a : plus_form_value(hgr, wp);
      return a * std::conj(b) * std::pow(wp.v, kappa) / (t.v * t.v);
    };
    const DomainIntegral I = integrate_fundamental_domain(f, spec, lambda, p);
    total += I.value;
    err += I.quad_error + I.tail_bound;
  }
  return {total / 6.0, err / 6.0, "gamma0four"};
}

InnerProductResult petersson_elliptic(const QSeries& f, const QSeries& g, int k, const QuadratureSpec& spec) {
  if (f.valuation() < 1 || g.valuation() < 1) throw std::invalid_argument("petersson_elliptic: cusp forms required");
  const NumericComponents a = NumericComponents::elliptic(f, k);
  const NumericComponents b = NumericComponents::elliptic(g, k);
  const double lambda = 2.0 * kPi * (a.leading_exponent() + b.leading_exponent());
  auto fn = [&](ModularPoint t) -> Complex {
    return a.series(t)[0] * std::conj(b.series(t)[0]) * std::pow(t.v, k - 2.0);
  };
  const DomainIntegral I = integrate_fundamental_domain(fn, spec, lambda, k - 2.0);
  return finish(I, 1.0, "elliptic");
}

NormRelationReport check_norm_relation(const JacobiFormTable& phi, const JacobiFormTable& psi,
                                       const QuadratureSpec& spec) {
  if (phi.index() != 1 || psi.index() != 1) throw std::invalid_argument("check_norm_relation: index must be 1");
  NormRelationReport r;
  r.jacobi = petersson_jacobi_unfolded(phi, psi, spec);
  const PlusFormTable F = iota_plus(phi), G = iota_plus(psi);
  r.plus = petersson_halfintegral(F, G, spec);
  r.ratio = std::abs(r.jacobi.value / r.plus.value);
  r.expected = 0.5 * std::ldexp(1.0, 2 * (phi.weight() - 1));
  r.rel_error = std::fabs(r.ratio / r.expected - 1.0);
  return r;
}

}  // namespace jrs
