#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jrs/jacobi.hpp"
#include "jrs/special.hpp"

namespace jrs {

// Tensor Gauss-Legendre on the fundamental domain, split at v = v_split:
// curved cells below (v from sqrt(1-u^2) to v_split) and geometric panels above up to v_max.
struct QuadratureSpec {
  int cells_u = 4;
  int cells_v = 4;
  int order = 16;
  double v_split = 2.0;
  double v_max = 0.0;     // 0: chosen from the integrand decay
  double panel_growth = 1.5;
  double target = 1e-10;  // relative accuracy target
  int torus_nodes = 32;   // per axis, direct Jacobi product only
};

struct QuadNode {
  double u, v, w;  // weight for du dv
};

// lambda > 0 caps the upper panels at width 8/lambda.
std::vector<QuadNode> fundamental_domain_nodes(const QuadratureSpec& spec, double v_max, double lambda = 0.0);
// Same grid with order - 4 and 3/4 of the torus nodes, for error estimates.
QuadratureSpec coarse_spec(const QuadratureSpec& spec);

// Smallest V >= v_split with V^p e^{-lambda V} below rel * e^{-lambda sqrt(3)/2}.
double choose_vmax(double lambda, double p, double rel, double v_split = 2.0);

struct DomainIntegral {
  Complex value;
  double quad_error;  // fine vs coarse rule
  double tail_bound;  // integrand beyond v_max, bounded by C v^p e^{-lambda v}
  double v_max;
};

// Integral over the fundamental domain of f(tau) du dv, where |f| <= C v^p e^{-lambda v} for large v.
DomainIntegral integrate_fundamental_domain(const std::function<Complex(ModularPoint)>& f, const QuadratureSpec& spec,
                                            double lambda, double p);

struct InnerProductResult {
  Complex value;
  double error_estimate;
  std::string method;  // direct | unfolded | gamma0four | elliptic
};

// Product on SL2(Z) ltimes Z^2 \ H x C: half of the integral over tau in F and z = a tau + b, a, b in [0,1),
// because -1 acts on the torus by z -> -z.
InnerProductResult petersson_jacobi_direct(const JacobiFormTable& phi, const JacobiFormTable& psi,
                                           const QuadratureSpec& spec = {});
// c_unfold * int_F sum_mu h_mu conj(g_mu) v^{k-1/2} v^{-2} du dv with c_unfold = 1/(4 sqrt(m)).
InnerProductResult petersson_jacobi_unfolded(const JacobiFormTable& phi, const JacobiFormTable& psi,
                                             const QuadratureSpec& spec = {});
double unfolding_constant(int m);

// Direct/unfolded ratio for one form; throws when it differs from 1 by more than 1e-2.
struct UnfoldingValidation {
  double ratio;
  InnerProductResult direct, unfolded;
};
UnfoldingValidation validate_unfolding_constant(const JacobiFormTable& phi);

struct CosetRep {
  long long a, b, c, d;
};
std::vector<CosetRep> gamma0_four_cosets();
// Each representative left-multiplied by an element of Gamma_0(4).
std::vector<CosetRep> gamma0_four_cosets_alternate();

// (1/6) sum over cosets of int_F F(g tau) conj(G(g tau)) Im(g tau)^{k-1/2} v^{-2} du dv.
InnerProductResult petersson_halfintegral(const PlusFormTable& F, const PlusFormTable& G, const QuadratureSpec& spec = {},
                                          const std::vector<CosetRep>& cosets = gamma0_four_cosets());
// F(tau) = sum_mu h_mu(4 tau), evaluated through h_eval.
Complex plus_form_value(const NumericComponents& h, ModularPoint tau);

InnerProductResult petersson_elliptic(const QSeries& f, const QSeries& g, int k, const QuadratureSpec& spec = {});

struct NormRelationReport {
  InnerProductResult jacobi, plus;
  double ratio;
  double expected;  // (1/2) 2^{2(k-1)}
  double rel_error;
};
NormRelationReport check_norm_relation(const JacobiFormTable& phi, const JacobiFormTable& psi,
                                       const QuadratureSpec& spec = {});

}  // namespace jrs
