#include "jrs/rankin.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace jrs {

namespace {

double log_of(const BigRational& q) {
  // num and den may exceed double range only for huge D; fine here
  return std::log(q.num().get_d()) - std::log(q.den().get_d());
}

Complex power_of(const BigRational& base, Complex s) { return std::exp(s * log_of(base)); }

}  // namespace

Complex gamma_factor(const SeriesParams& p, Complex s) {
  if (p.t < 1 || p.t > p.n || p.r < 0) throw std::invalid_argument("gamma_factor: need 1 <= t <= n, r >= 0");
  if (p.detM.sign() <= 0) throw std::invalid_argument("gamma_factor: det M must be positive");
  const double base = p.half ? kPi : 4.0 * kPi;
  Complex out = std::exp(-static_cast<double>(p.t) * s * std::log(base)) * power_of(p.detM, s);
  for (int j = 1; j <= p.t; ++j) {
    const Complex z = s - 0.5 * (j - 1);
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real())) {
      throw std::domain_error("gamma_factor: Gamma pole");
    }
    out *= gamma_fn(z) * xi_completed(2.0 * s - static_cast<double>(2 * p.k - 2 * p.n - p.r - 2 + p.t + j));
  }
  for (int j = 1; j <= p.t / 2; ++j) out *= xi_completed(4.0 * s - static_cast<double>(4 * p.k - 2 * p.n - 2 * p.r - 2 + 2 * j));
  return out;
}

Complex reflection_point(const SeriesParams& p, Complex s) {
  return 2.0 * p.k - p.n - p.r + 0.5 * (p.t - 1) - s;
}

// ---------------------------------------------------------------- pairs

RankinPair RankinPair::jacobi(const JacobiFormTable& phi, const JacobiFormTable& psi) {
  if (phi.weight() != psi.weight() || phi.index() != psi.index()) {
    throw std::invalid_argument("RankinPair: forms must share weight and index");
  }
  if (!phi.cuspidal() || !psi.cuspidal()) throw std::invalid_argument("RankinPair: cusp forms required");
  RankinPair p;
  const int m = phi.index();
  p.params_.k = phi.weight();
  p.params_.r = 1;
  p.params_.detM = BigRational(m);
  p.prec_ = std::min(phi.prec(), psi.prec());
  for (const auto& o : enumerate_orbits(m, p.prec_)) {
    const BigRational w = phi.coeff(o.D, o.mu) * psi.coeff(o.D, o.mu) / BigRational(o.eps);
    if (!w.is_zero()) p.terms_.push_back({o.det_N, w});
  }
  p.a_.emplace(theta_decompose(phi));
  p.b_.emplace(theta_decompose(psi));
  p.decay_ = 2.0 * kPi * (p.a_->leading_exponent() + p.b_->leading_exponent());
  return p;
}

RankinPair RankinPair::elliptic(const QSeries& f, const QSeries& g, int k) {
  if (f.scale() != 1 || g.scale() != 1) throw std::invalid_argument("RankinPair: elliptic forms need scale 1");
  if (f.valuation() < 1 || g.valuation() < 1) throw std::invalid_argument("RankinPair: cusp forms required");
  RankinPair p;
  p.params_.k = k;
  p.params_.r = 0;
  p.params_.detM = BigRational(1);
  p.prec_ = std::min(f.truncation(), g.truncation());
  // B_{1,0}(Z) = {+-1} fixes every n, so each term carries eps = 2
  for (std::int64_t n = 1; n <= p.prec_; ++n) {
    const BigRational w = f.coeff(n) * g.coeff(n) / BigRational(2);
    if (!w.is_zero()) p.terms_.push_back({BigRational(n), w});
  }
  p.a_.emplace(NumericComponents::elliptic(f, k));
  p.b_.emplace(NumericComponents::elliptic(g, k));
  p.decay_ = 2.0 * kPi * (p.a_->leading_exponent() + p.b_->leading_exponent());
  return p;
}

Complex RankinPair::pairing(ModularPoint tau) const {
  const auto x = a_->series(tau);
  const auto y = b_->series(tau);
  Complex s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

RawSum dirichlet_raw(const RankinPair& pair, Complex s, std::int64_t D_max) {
  const auto& p = pair.params();
  if (!(s.real() > p.k)) throw std::domain_error("dirichlet_raw: Re(s) too small for certified convergence");
  if (D_max > pair.prec()) throw std::out_of_range("dirichlet_raw: D_max beyond the table precision");
  const BigRational to_D = p.r == 1 ? BigRational(4) : BigRational(1);
  RawSum out{0.0, 0.0, 0};
  double block_lo = 0.0, block_hi = 0.0;  // |terms| with D in (D_max/4, D_max/2] and (D_max/2, D_max]
  for (const auto& t : pair.terms()) {
    const double D = (t.det * to_D).to_double();
    if (D > D_max) break;
    const Complex term = t.weight.to_double() * std::exp(-s * log_of(t.det));
    out.value += term;
    ++out.terms;
    if (D > 0.5 * D_max) {
      block_hi += std::abs(term);
    } else if (D > 0.25 * D_max) {
      block_lo += std::abs(term);
    }
  }
  const double rho = block_lo > 0.0 ? block_hi / block_lo : 1.0;
  out.tail_estimate = rho < 1.0 ? 2.0 * block_hi * rho / (1.0 - rho) : std::numeric_limits<double>::infinity();
  return out;
}

DirichletEvaluation dirichlet_sum(const RankinPair& pair, Complex s, std::int64_t D_max) {
  const RawSum raw = dirichlet_raw(pair, s, D_max);
  const Complex g = gamma_factor(pair.params(), s);
  DirichletEvaluation out;
  out.s = s;
  out.raw = raw.value;
  out.completed = g * raw.value;
  out.method = "sum";
  out.error_estimate = std::abs(g) * raw.tail_estimate + 1e-15 * std::abs(out.completed);
  return out;
}

// ---------------------------------------------------------------- integral route

RankinIntegrator::RankinIntegrator(const RankinPair& pair, QuadratureSpec spec, double exclusion, double eis_tol)
    : pair_(pair), spec_(spec), exclusion_(exclusion), eis_tol_(eis_tol) {
  if (!(exclusion > 0.0)) throw std::invalid_argument("RankinIntegrator: exclusion radius must be positive");
  const auto& p = pair_.params();
  const double base_power = p.k - 0.5 * p.r - 2.0;
  max_arg_ = 8.0;
  const double lambda = pair_.decay();
  v_max_ = spec_.v_max > 0.0 ? spec_.v_max
                             : choose_vmax(lambda, base_power + max_arg_, std::min(spec_.target, 1e-6) * 1e-3,
                                           spec_.v_split);
  auto build = [&](const QuadratureSpec& sp) {
    std::vector<Node> out;
    for (const auto& n : fundamental_domain_nodes(sp, v_max_, lambda)) {
      const ModularPoint tau(n.u, n.v);
      out.push_back({tau, n.w * pair_.pairing(tau) * std::pow(n.v, base_power)});
    }
    return out;
  };
  fine_ = build(spec_);
  coarse_ = build(coarse_spec(spec_));
  for (int j = 0; j <= 16; ++j) {
    const double u = -0.5 + j / 16.0;
    edge_.emplace_back(u, pair_.pairing(ModularPoint(u, v_max_)) * std::pow(v_max_, base_power));
  }
}

Complex RankinIntegrator::eisenstein_argument(Complex s) const {
  const auto& p = pair_.params();
  // s - k + n - (t - r - 1)/2 at n = t = 1
  return s - static_cast<double>(p.k) + 1.0 + 0.5 * p.r;
}

std::pair<double, double> RankinIntegrator::poles() const {
  const auto& p = pair_.params();
  const double right = p.k - 0.5 * p.r;
  return {right - 1.0, right};
}

Complex RankinIntegrator::integrate(const std::vector<Node>& nodes, const EisensteinEvaluator& eis,
                                    double* eis_err) const {
  Complex acc = 0.0;
  double err = 0.0;
  for (const auto& n : nodes) {
    const auto e = eis.evaluate(n.tau);
    acc += n.weight * e.value;
    err += std::abs(n.weight) * (e.error_bound + 1e-15 * e.magnitude);
  }
  if (eis_err) *eis_err = err;
  return acc;
}

DirichletEvaluation RankinIntegrator::evaluate(Complex s) const {
  const auto [left, right] = poles();
  if (std::abs(s - left) < exclusion_ || std::abs(s - right) < exclusion_) {
    throw std::domain_error("dirichlet_integral: s within the exclusion radius of a pole");
  }
  const Complex sp = eisenstein_argument(s);
  const double grow = std::max(sp.real(), 1.0 - sp.real());
  if (grow > max_arg_) throw std::domain_error("dirichlet_integral: s outside the strip covered by the cutoff");
  const EisensteinEvaluator eis(sp, eis_tol_);
  double eis_err = 0.0;
  const Complex fine = integrate(fine_, eis, &eis_err);
  const Complex coarse = integrate(coarse_, eis, nullptr);
  double c = 0.0;
  for (const auto& [u, w] : edge_) c = std::max(c, std::abs(w * eis(ModularPoint(u, v_max_))));
  const auto& p = pair_.params();
  const double power = p.k - 0.5 * p.r - 2.0 + grow;
  const double rate = pair_.decay() - std::max(power, 0.0) / v_max_;
  const double tail = rate > 0.0 ? c / rate : std::numeric_limits<double>::infinity();

  DirichletEvaluation out;
  out.s = s;
  out.completed = 0.5 * fine;
  out.method = "integral";
  out.error_estimate = 0.5 * (std::abs(fine - coarse) + tail + eis_err);
  try {
    const Complex g = gamma_factor(p, s);
    if (std::abs(g) > 0.0) out.raw = out.completed / g;
  } catch (const std::domain_error&) {
  }
  return out;
}

std::pair<Complex, double> RankinIntegrator::weight_integral() const {
  Complex fine = 0.0, coarse = 0.0;
  for (const auto& n : fine_) fine += n.weight;
  for (const auto& n : coarse_) coarse += n.weight;
  double c = 0.0;
  for (const auto& e : edge_) c = std::max(c, std::abs(e.second));
  const auto& p = pair_.params();
  const double rate = pair_.decay() - std::max(p.k - 0.5 * p.r - 2.0, 0.0) / v_max_;
  return {fine, std::abs(fine - coarse) + c / rate};
}

DirichletEvaluation dirichlet_integral(const RankinPair& pair, Complex s, double tol) {
  QuadratureSpec spec;
  spec.target = tol;
  return RankinIntegrator(pair, spec).evaluate(s);
}

FunctionalEquationCheck functional_equation_residual(const RankinIntegrator& engine, Complex s, std::int64_t D_max) {
  const auto& pair = engine.pair();
  const auto& p = pair.params();
  auto eval = [&](Complex z) {
    if (z.real() > p.k + 1.0 && D_max <= pair.prec()) return dirichlet_sum(pair, z, D_max);
    return engine.evaluate(z);
  };
  FunctionalEquationCheck out;
  out.s = s;
  out.s_star = reflection_point(p, s);
  out.at_s = eval(s);
  out.at_star = eval(out.s_star);
  out.residual = std::abs(out.at_s.completed - out.at_star.completed) / std::max(std::abs(out.at_s.completed), 1e-30);
  return out;
}

ResidueReport residue_at_right_edge(const RankinIntegrator& engine) {
  ResidueReport out;
  out.s0 = engine.poles().second;
  const auto [I, err] = engine.weight_integral();
  // Res_{s'=1} E = 1/2 and ds'/ds = 1, times the 1/2 in front of the integral
  out.route_a = 0.25 * I;
  out.route_a_error = 0.25 * err;
  auto g = [&](double eps) {
    const Complex up = engine.evaluate(out.s0 + eps).completed;
    const Complex down = engine.evaluate(out.s0 - eps).completed;
    return 0.5 * eps * (up - down);
  };
  const Complex g1 = g(0.1), g2 = g(0.05), g3 = g(0.025);
  const Complex r12 = (4.0 * g2 - g1) / 3.0, r23 = (4.0 * g3 - g2) / 3.0;
  out.route_b = (16.0 * r23 - r12) / 15.0;
  out.agreement = std::abs(out.route_a - out.route_b) / std::abs(out.route_a);
  return out;
}

PoleScan pole_scan(const RankinPair& pair, double lo, double hi, double step, const QuadratureSpec& spec) {
  if (!(step > 0.0) || !(hi > lo)) throw std::invalid_argument("pole_scan: bad segment");
  const RankinIntegrator engine(pair, spec, 0.25 * step);
  PoleScan out;
  for (double s = lo + 0.5 * step; s < hi; s += step) {
    out.grid.push_back(s);
    out.values.push_back(engine.evaluate(Complex(s, 0.0)).completed.real());
  }
  std::vector<double> mags;
  for (double v : out.values) mags.push_back(std::fabs(v));
  std::vector<double> sorted = mags;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  out.threshold = 10.0 * sorted[sorted.size() / 2];
  for (std::size_t j = 0; j < out.grid.size(); ++j) {
    if (mags[j] > out.threshold) out.large.push_back(out.grid[j]);
    if (out.grid[j] > engine.poles().second) out.max_right = std::max(out.max_right, mags[j]);
    if (j + 1 < out.grid.size() && out.values[j] * out.values[j + 1] < 0.0 &&
        std::min(mags[j], mags[j + 1]) > out.threshold) {
      out.detected.push_back(0.5 * (out.grid[j] + out.grid[j + 1]));
    }
  }
  return out;
}

// ---------------------------------------------------------------- half-integral relation

HalfRelationReport half_relation_check(const JacobiFormTable& phi, const JacobiFormTable& psi, const PlusFormTable& F,
                                       const PlusFormTable& G, std::int64_t D_max,
                                       const std::vector<Complex>& s_samples) {
  if (phi.index() != 1 || psi.index() != 1) throw std::invalid_argument("half_relation_check: index must be 1");
  if (phi.weight() != psi.weight() || F.k() != phi.weight() || G.k() != phi.weight()) {
    throw std::invalid_argument("half_relation_check: weights differ");
  }
  if (D_max > std::min({phi.prec(), psi.prec(), F.prec(), G.prec()})) {
    throw std::out_of_range("half_relation_check: D_max beyond the table precision");
  }
  const int n = 1, t = 1, r = 1, k = phi.weight();
  HalfRelationReport rep;
  rep.D_max = D_max;
  // (1 + delta_{1,r}) 2^{-2(k-1)(n-t)}
  rep.claimed = BigRational(r == 1 ? 2 : 1) / pow(BigRational(2), static_cast<unsigned>(2 * (k - 1) * (n - t)));

  struct Side {
    BigRational det, weight;
  };
  std::map<std::int64_t, Side> jac, half;
  for (const auto& o : enumerate_orbits(1, D_max)) {
    const BigRational w = phi.coeff(o.D, o.mu) * psi.coeff(o.D, o.mu) / BigRational(o.eps);
    if (!w.is_zero()) jac[o.D] = {o.det_N, w};
  }
  for (std::int64_t D = 1; D <= D_max; ++D) {
    if (D % 4 == 1 || D % 4 == 2) continue;
    // epsilon_{1,0}: elements g of GL_1(Z) with g D g = D
    int eps = 0;
    for (int g : {1, -1})
      if (g * D * g == D) ++eps;
    const BigRational w = F.coeff(D) * G.coeff(D) / BigRational(eps);
    if (!w.is_zero()) half[D] = {BigRational(D), w};
  }

  rep.det_scaling_exact = true;
  const BigRational det_factor = pow(BigRational(2), static_cast<unsigned>(2 * (r + t - 1)));
  std::map<std::int64_t, BigRational> ratio;
  std::vector<std::int64_t> keys;
  for (const auto& [D, s] : jac) keys.push_back(D);
  for (const auto& [D, s] : half)
    if (!jac.count(D)) keys.push_back(D);
  std::sort(keys.begin(), keys.end());
  for (std::int64_t D : keys) {
    const auto a = half.find(D);
    const auto b = jac.find(D);
    if (a == half.end() || b == jac.end()) {
      rep.unpaired.push_back(D);
      continue;
    }
    ++rep.pairs;
    if (!(a->second.det == det_factor * b->second.det)) rep.det_scaling_exact = false;
    ratio.emplace(D, a->second.weight / b->second.weight);
    if (!(ratio.at(D) == rep.claimed)) rep.mismatched.push_back(D);
  }
  // most common ratio, earliest on ties
  std::map<std::string, std::pair<int, BigRational>> counts;
  std::string mode_key;
  int best = 0;
  for (const auto& [D, q] : ratio) {
    auto& slot = counts.try_emplace(q.to_string(), 0, q).first->second;
    if (++slot.first > best) {
      best = slot.first;
      mode_key = q.to_string();
    }
  }
  if (!ratio.empty()) {
    const BigRational mode = counts.at(mode_key).second;
    for (const auto& [D, q] : ratio)
      if (!(q == mode)) rep.inconsistent.push_back(D);
    if (rep.inconsistent.empty() && rep.unpaired.empty()) rep.measured = mode;
  }

  const double claimed = rep.claimed.to_double();
  for (const Complex& s : s_samples) {
    Complex hs = 0.0, js = 0.0;
    for (const auto& [D, side] : half) hs += side.weight.to_double() * std::exp(-s * log_of(side.det));
    for (const auto& [D, side] : jac) js += side.weight.to_double() * std::exp(-s * log_of(side.det));
    const Complex cs = claimed * std::exp(-s * std::log(det_factor.to_double())) * js;
    rep.samples.push_back({s, hs, cs, std::abs(hs - cs) / std::max(std::abs(cs), 1e-300)});
  }
  return rep;
}

HalfRelationReport half_relation_check(const JacobiFormTable& phi, const JacobiFormTable& psi, std::int64_t D_max,
                                       const std::vector<Complex>& s_samples) {
  return half_relation_check(phi, psi, iota_plus(phi), iota_plus(psi), D_max, s_samples);
}

CorollaryReport corollary_residue_check(const PlusFormTable& F, const PlusFormTable& G, double tol) {
  if (F.k() != G.k()) throw std::invalid_argument("corollary_residue_check: weights differ");
  const std::int64_t prec = std::min(F.prec(), G.prec());
  const JacobiFormTable phi = theta_reconstruct(plus_to_theta(F), prec);
  const JacobiFormTable psi = theta_reconstruct(plus_to_theta(G), prec);
  const auto rel = half_relation_check(phi, psi, F, G, std::min<std::int64_t>(prec, 400));
  if (!rel.measured) throw std::runtime_error("corollary_residue_check: no common termwise ratio");
  CorollaryReport out;
  out.kappa = *rel.measured;
  QuadratureSpec spec;
  spec.target = tol;
  const RankinIntegrator engine(RankinPair::jacobi(phi, psi), spec);
  const Complex route_a = 0.25 * engine.weight_integral().first;
  out.residue = out.kappa.to_double() * route_a;
  out.transported = rel.claimed.to_double() * route_a;
  out.plus_product = petersson_halfintegral(F, G).value;
  out.expected = 0.5 * std::ldexp(1.0, 2 * (F.k() - 1)) * out.plus_product;
  out.ratio = std::abs(out.residue / out.expected);
  out.rel_error = std::fabs(out.ratio - 1.0);
  return out;
}

}  // namespace jrs
