#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jrs/jacobi.hpp"
#include "jrs/petersson.hpp"
#include "jrs/special.hpp"

namespace jrs {

struct SeriesParams {
  int n = 1;
  int t = 1;
  int r = 1;
  int k = 10;
  BigRational detM = BigRational(1);  // 1 when r = 0
  bool half = false;                  // pi^{-ts} prefactor of the half-integral completion
};

// (4 pi)^{-ts} (det M)^s prod_{j=1}^t Gamma(s-(j-1)/2) xi(2s-2k+2n+r+2-t-j) prod_{j=1}^{[t/2]} xi(4s-4k+2n+2r+2-2j).
// Throws std::domain_error at a pole of a factor.
Complex gamma_factor(const SeriesParams& p, Complex s);
// 2k - n - r + (t-1)/2 - s
Complex reflection_point(const SeriesParams& p, Complex s);

struct SeriesTerm {
  BigRational det;     // D/4 (r = 1) or n (r = 0)
  BigRational weight;  // c_phi conj(c_psi) / eps
};

// The pair (phi, psi) feeding D_1: index-m Jacobi cusp forms (r = 1) or elliptic cusp forms (r = 0).
class RankinPair {
 public:
  static RankinPair jacobi(const JacobiFormTable& phi, const JacobiFormTable& psi);
  static RankinPair elliptic(const QSeries& f, const QSeries& g, int k);

  const SeriesParams& params() const { return params_; }
  std::int64_t prec() const { return prec_; }
  // Ascending det, one entry per orbit with a nonzero product.
  const std::vector<SeriesTerm>& terms() const { return terms_; }

  // sum_mu h_mu conj(g_mu), or f conj(g) for r = 0.
  Complex pairing(ModularPoint tau) const;
  // |pairing| decays like exp(-decay() v).
  double decay() const { return decay_; }

 private:
  RankinPair() = default;
  SeriesParams params_;
  std::int64_t prec_ = 0;
  std::vector<SeriesTerm> terms_;
  std::optional<NumericComponents> a_, b_;
  double decay_ = 0.0;
};

struct RawSum {
  Complex value;
  double tail_estimate;  // from the observed decay of the last two dyadic blocks
  std::size_t terms;
};

// sum over orbits with D <= D_max (r = 1: D = 4 det, r = 0: n = det) of weight * det^{-s}; needs Re s > k.
RawSum dirichlet_raw(const RankinPair& pair, Complex s, std::int64_t D_max);

struct DirichletEvaluation {
  Complex s;
  std::optional<Complex> raw;
  Complex completed;
  std::string method;  // sum | integral
  double error_estimate = 0.0;
};

// gamma_factor * dirichlet_raw.
DirichletEvaluation dirichlet_sum(const RankinPair& pair, Complex s, std::int64_t D_max);

// (1/2) int_F P(tau) v^{k-r/2} E(s - k + 1 + r/2; tau) v^{-2} du dv, with P from the pair.
class RankinIntegrator {
 public:
  explicit RankinIntegrator(const RankinPair& pair, QuadratureSpec spec = {}, double exclusion = 1e-2,
                            double eis_tol = 1e-13);

  const RankinPair& pair() const { return pair_; }
  Complex eisenstein_argument(Complex s) const;
  // k - r/2 - 1 and k - r/2
  std::pair<double, double> poles() const;
  double exclusion() const { return exclusion_; }

  // Throws std::domain_error within the exclusion radius of a pole.
  DirichletEvaluation evaluate(Complex s) const;
  // int_F P v^{k-r/2} v^{-2} du dv, with its quadrature error.
  std::pair<Complex, double> weight_integral() const;

 private:
  struct Node {
    ModularPoint tau;
    Complex weight;  // quadrature weight * P * v^{k-r/2-2}
  };
  Complex integrate(const std::vector<Node>& nodes, const EisensteinEvaluator& eis, double* eis_err) const;

  RankinPair pair_;
  QuadratureSpec spec_;
  double exclusion_;
  double eis_tol_;
  double v_max_;
  double max_arg_;  // admissible |Re s'| for the chosen cutoff
  std::vector<Node> fine_, coarse_;
  std::vector<std::pair<double, Complex>> edge_;  // (u, P v^{k-r/2-2}) at v_max
};

DirichletEvaluation dirichlet_integral(const RankinPair& pair, Complex s, double tol);

// |D(s) - D(s*)| / max(|D(s)|, 1e-30); each side by the sum when Re > k + 1, else by the integral.
struct FunctionalEquationCheck {
  Complex s, s_star;
  DirichletEvaluation at_s, at_star;
  double residual;
};
FunctionalEquationCheck functional_equation_residual(const RankinIntegrator& engine, Complex s,
                                                     std::int64_t D_max = 4000);

struct ResidueReport {
  double s0;
  Complex route_a;  // Res E = 1/2 times (1/2) times the weight integral
  Complex route_b;  // Richardson of eps D(s0 + eps), symmetric in eps
  double route_a_error;
  double agreement;  // |a - b| / |a|
};
ResidueReport residue_at_right_edge(const RankinIntegrator& engine);

struct PoleScan {
  std::vector<double> grid;
  std::vector<double> values;    // Re D(s) on the real grid
  std::vector<double> detected;  // midpoints of blow-up sign changes
  std::vector<double> large;     // grid points with |D| above the blow-up threshold
  double threshold = 0.0;
  double max_right = 0.0;  // max |D| on grid points right of k - r/2
};
// Grid lo + step/2 + j step, so poles at lo + j step fall halfway between neighbours.
PoleScan pole_scan(const RankinPair& pair, double lo, double hi, double step, const QuadratureSpec& spec);

struct HalfRelationReport {
  std::int64_t D_max = 0;
  std::size_t pairs = 0;
  std::vector<std::int64_t> unpaired;      // D with a term on one side only
  bool det_scaling_exact = false;          // det of the half-integral class = 4 det of the Jacobi class
  BigRational claimed;                     // (1 + delta_{1,r}) 2^{-2(k-1)(n-t)}
  std::optional<BigRational> measured;     // common ratio, when all pairs share one
  std::vector<std::int64_t> mismatched;    // D where the ratio differs from the claimed one
  std::vector<std::int64_t> inconsistent;  // D where the ratio differs from the most common one
  struct Sample {
    Complex s;
    Complex half_side, claimed_side;
    double residual;
  };
  std::vector<Sample> samples;
  bool identity_holds() const { return unpaired.empty() && det_scaling_exact && mismatched.empty(); }
};

// Termwise comparison of D_1(F, G; s) with the claimed multiple of 2^{-2s} D_1(phi, psi; s).
HalfRelationReport half_relation_check(const JacobiFormTable& phi, const JacobiFormTable& psi, const PlusFormTable& F,
                                       const PlusFormTable& G, std::int64_t D_max,
                                       const std::vector<Complex>& s_samples = {});
HalfRelationReport half_relation_check(const JacobiFormTable& phi, const JacobiFormTable& psi, std::int64_t D_max,
                                       const std::vector<Complex>& s_samples = {});

struct CorollaryReport {
  BigRational kappa;     // measured D(F,G;s) / (4^{-s} D(phi,psi;s))
  Complex residue;       // kappa * Res D_1(phi, psi) at k - 1/2
  Complex plus_product;  // <F, G> on Gamma_0(4)
  Complex expected;      // (1/2) 2^{2(k-1)} <F, G>
  double ratio;          // |residue / expected|
  double rel_error;
  Complex transported;   // claimed-constant residue: 2 * Res D_1(phi, psi)
};
CorollaryReport corollary_residue_check(const PlusFormTable& F, const PlusFormTable& G, double tol = 1e-10);

}  // namespace jrs
