#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "jrs/bigq.hpp"

namespace jrs {

struct DiscKey {
  std::int64_t D;
  std::int64_t mu;  // residue in [0, 2m)
  auto operator<=>(const DiscKey&) const = default;
};

// Fourier coefficients of a degree-1 Jacobi form of even weight and scalar index,
// keyed by discriminant D = 4Nm - R^2 and mu = R mod 2m.
class JacobiFormTable {
 public:
  JacobiFormTable(int weight, int index, std::int64_t prec, bool cuspidal);

  int weight() const { return k_; }
  int index() const { return m_; }
  std::int64_t prec() const { return prec_; }
  bool cuspidal() const { return cuspidal_; }
  const std::map<DiscKey, BigRational>& coeffs() const { return coeffs_; }

  // Zero for D < 0 (and D = 0 on cusp forms); throws beyond prec or off the support congruence.
  BigRational coeff(std::int64_t D, std::int64_t mu) const;
  // c(N, R) in the usual (N, R) labelling.
  BigRational coeff_nr(std::int64_t N, std::int64_t R) const;
  // Sets c(D, mu) and c(D, -mu).
  void set(std::int64_t D, std::int64_t mu, const BigRational& c);

  bool supports(std::int64_t D, std::int64_t mu) const;
  std::int64_t reduce_mu(std::int64_t mu) const;

  JacobiFormTable scaled(const BigRational& c) const;
  JacobiFormTable truncated(std::int64_t prec) const;
  bool is_zero() const;

  friend bool operator==(const JacobiFormTable& a, const JacobiFormTable& b);
  friend JacobiFormTable operator+(const JacobiFormTable& a, const JacobiFormTable& b);

 private:
  int k_;
  int m_;
  std::int64_t prec_;
  bool cuspidal_;
  std::map<DiscKey, BigRational> coeffs_;
};

struct ThetaComponents {
  int m = 1;
  int k = 0;
  std::vector<QSeries> h;  // h[mu] for mu in [0, 2m), scale 4m
};

// Plus-space form of weight k - 1/2 on Gamma_0(4); c(D) for 0 <= D <= prec.
class PlusFormTable {
 public:
  PlusFormTable(int k, std::int64_t prec, bool cuspidal = true);

  int k() const { return k_; }
  BigRational half_weight() const { return BigRational(mpz_class(2 * k_ - 1), mpz_class(2)); }
  std::int64_t prec() const { return prec_; }
  bool cuspidal() const { return cuspidal_; }
  const std::map<std::int64_t, BigRational>& coeffs() const { return coeffs_; }

  BigRational coeff(std::int64_t D) const;
  void set(std::int64_t D, const BigRational& c);  // throws off the plus-space support
  PlusFormTable scaled(const BigRational& c) const;

  friend bool operator==(const PlusFormTable& a, const PlusFormTable& b) {
    return a.k_ == b.k_ && a.prec_ == b.prec_ && a.coeffs_ == b.coeffs_;
  }

 private:
  int k_;
  std::int64_t prec_;
  bool cuspidal_;
  std::map<std::int64_t, BigRational> coeffs_;
};

struct OrbitClass {
  std::int64_t D;
  std::int64_t mu;
  std::int64_t N;
  int eps;
  BigRational det_N;  // D/4
};

struct BoundEntry {
  std::int64_t D;
  double ratio;        // max_mu |c(D,mu)| / (D/4)^{k/2}
  double running_max;  // max over D' <= D
};

struct BoundReport {
  std::vector<BoundEntry> entries;  // only D with some nonzero coefficient
  double max_ratio = 0.0;
  std::int64_t argmax_D = 0;
};

JacobiFormTable jacobi_eisenstein_index1(int k, std::int64_t prec);
// (phi_{10,1}, phi_{12,1}).
std::pair<JacobiFormTable, JacobiFormTable> cusp_forms_index1(std::int64_t prec);
JacobiFormTable hecke_V(const JacobiFormTable& phi, int l);

ThetaComponents theta_decompose(const JacobiFormTable& phi);
JacobiFormTable theta_reconstruct(const ThetaComponents& h, std::int64_t prec);

PlusFormTable iota_plus(const JacobiFormTable& phi);
// h_0(tau) = sum_{D = 0 mod 4} c(D) q^{D/4}, h_1 = sum_{D = 3 mod 4} c(D) q^{D/4}.
ThetaComponents plus_to_theta(const PlusFormTable& F);

// Representatives mu in [0, m]: the B_{1,1}(Z) action R -> +-R + 2m x identifies mu with -mu.
std::vector<OrbitClass> enumerate_orbits(int m, std::int64_t D_max);
int stabilizer_order(int m, std::int64_t D, std::int64_t mu);

BoundReport coefficient_bound_report(const JacobiFormTable& phi, std::int64_t D_max);

// Exports.
std::string table_to_json(const JacobiFormTable& phi);
std::string plus_to_json(const PlusFormTable& F);
std::string orbits_to_csv(const std::vector<OrbitClass>& orbits);
std::string theta_to_text(const ThetaComponents& h);
ThetaComponents theta_from_text(const std::string& text, int k);

}  // namespace jrs
