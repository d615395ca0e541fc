#include "jrs/jacobi.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace jrs {

namespace {

std::int64_t mod(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

// ---------------------------------------------------------------- JacobiFormTable

JacobiFormTable::JacobiFormTable(int weight, int index, std::int64_t prec, bool cuspidal)
    : k_(weight), m_(index), prec_(prec), cuspidal_(cuspidal) {
  if (weight <= 0 || weight % 2 != 0) throw std::invalid_argument("JacobiFormTable: weight must be even and positive");
  if (index <= 0) throw std::invalid_argument("JacobiFormTable: index must be positive");
  if (prec < 0) throw std::invalid_argument("JacobiFormTable: prec must be nonnegative");
  const std::int64_t d_min = cuspidal ? 1 : 0;
  for (std::int64_t D = d_min; D <= prec; ++D) {
    for (std::int64_t mu = 0; mu < 2 * m_; ++mu) {
      if (mod(D + mu * mu, 4 * m_) == 0) coeffs_.emplace(DiscKey{D, mu}, BigRational());
    }
  }
}

std::int64_t JacobiFormTable::reduce_mu(std::int64_t mu) const { return mod(mu, 2 * m_); }

bool JacobiFormTable::supports(std::int64_t D, std::int64_t mu) const {
  return mod(D + mu * mu, 4 * m_) == 0;
}

BigRational JacobiFormTable::coeff(std::int64_t D, std::int64_t mu) const {
  if (!supports(D, mu)) {
    throw std::invalid_argument("JacobiFormTable: D=" + std::to_string(D) + " is not -mu^2 mod 4m for mu=" +
                                std::to_string(mu));
  }
  if (D > prec_) throw std::out_of_range("JacobiFormTable: D=" + std::to_string(D) + " beyond prec");
  if (D < 0 || (D == 0 && cuspidal_)) return BigRational();
  return coeffs_.at(DiscKey{D, reduce_mu(mu)});
}

BigRational JacobiFormTable::coeff_nr(std::int64_t N, std::int64_t R) const {
  return coeff(4 * N * m_ - R * R, R);
}

void JacobiFormTable::set(std::int64_t D, std::int64_t mu, const BigRational& c) {
  if (!supports(D, mu)) throw std::invalid_argument("JacobiFormTable: support congruence violated");
  if (D > prec_) throw std::out_of_range("JacobiFormTable: D beyond prec");
  if (D < 0 || (D == 0 && cuspidal_)) {
    if (!c.is_zero()) throw std::invalid_argument("JacobiFormTable: nonzero coefficient outside the support");
    return;
  }
  coeffs_[DiscKey{D, reduce_mu(mu)}] = c;
  coeffs_[DiscKey{D, reduce_mu(-mu)}] = c;
}

JacobiFormTable JacobiFormTable::scaled(const BigRational& c) const {
  JacobiFormTable out = *this;
  for (auto& [key, v] : out.coeffs_) v *= c;
  return out;
}

JacobiFormTable JacobiFormTable::truncated(std::int64_t prec) const {
  if (prec > prec_) throw std::out_of_range("JacobiFormTable: cannot extend precision");
  JacobiFormTable out(k_, m_, prec, cuspidal_);
  for (auto& [key, v] : out.coeffs_) v = coeffs_.at(key);
  return out;
}

bool JacobiFormTable::is_zero() const {
  for (const auto& [key, v] : coeffs_) {
    if (!v.is_zero()) return false;
  }
  return true;
}

bool operator==(const JacobiFormTable& a, const JacobiFormTable& b) {
  return a.k_ == b.k_ && a.m_ == b.m_ && a.prec_ == b.prec_ && a.coeffs_ == b.coeffs_;
}

JacobiFormTable operator+(const JacobiFormTable& a, const JacobiFormTable& b) {
  if (a.k_ != b.k_ || a.m_ != b.m_) throw std::invalid_argument("JacobiFormTable: weight/index mismatch");
  JacobiFormTable out(a.k_, a.m_, std::min(a.prec_, b.prec_), a.cuspidal_ && b.cuspidal_);
  for (auto& [key, v] : out.coeffs_) v = a.coeff(key.D, key.mu) + b.coeff(key.D, key.mu);
  return out;
}

// ---------------------------------------------------------------- PlusFormTable

PlusFormTable::PlusFormTable(int k, std::int64_t prec, bool cuspidal) : k_(k), prec_(prec), cuspidal_(cuspidal) {
  if (k <= 0 || k % 2 != 0) throw std::invalid_argument("PlusFormTable: k must be even and positive");
  for (std::int64_t D = cuspidal ? 1 : 0; D <= prec; ++D) coeffs_.emplace(D, BigRational());
}

BigRational PlusFormTable::coeff(std::int64_t D) const {
  if (D > prec_) throw std::out_of_range("PlusFormTable: D beyond prec");
  auto it = coeffs_.find(D);
  return it == coeffs_.end() ? BigRational() : it->second;
}

void PlusFormTable::set(std::int64_t D, const BigRational& c) {
  if (D > prec_) throw std::out_of_range("PlusFormTable: D beyond prec");
  if (c.is_zero()) {
    if (coeffs_.count(D)) coeffs_[D] = c;
    return;
  }
  if (D % 4 == 1 || D % 4 == 2) throw std::invalid_argument("PlusFormTable: D = 1,2 mod 4 outside the plus space");
  if (D < 0 || (D == 0 && cuspidal_)) throw std::invalid_argument("PlusFormTable: coefficient outside the support");
  coeffs_[D] = c;
}

PlusFormTable PlusFormTable::scaled(const BigRational& c) const {
  PlusFormTable out = *this;
  for (auto& [D, v] : out.coeffs_) v *= c;
  return out;
}

// ---------------------------------------------------------------- constructors

JacobiFormTable jacobi_eisenstein_index1(int k, std::int64_t prec) {
  if (k < 4 || k % 2 != 0) throw std::invalid_argument("jacobi_eisenstein_index1: k must be even and >= 4");
  JacobiFormTable e(k, 1, prec, false);
  const unsigned r = static_cast<unsigned>(k - 1);
  const BigRational zeta = cohen_H(r, 0);  // zeta(3 - 2k)
  for (std::int64_t D = 0; D <= prec; ++D) {
    if (D % 4 == 1 || D % 4 == 2) continue;
    e.set(D, D % 4 == 0 ? 0 : 1, cohen_H(r, D) / zeta);
  }
  return e;
}

std::pair<JacobiFormTable, JacobiFormTable> cusp_forms_index1(std::int64_t prec) {
  if (prec < 4) throw std::invalid_argument("cusp_forms_index1: prec must be >= 4");
  const std::int64_t ell_prec = prec / 4 + 1;
  QSeries e4 = elliptic_eisenstein(4, ell_prec);
  QSeries e6 = elliptic_eisenstein(6, ell_prec);
  QSeries e4sq = e4 * e4;
  ThetaComponents h41 = theta_decompose(jacobi_eisenstein_index1(4, prec));
  ThetaComponents h61 = theta_decompose(jacobi_eisenstein_index1(6, prec));
  const BigRational inv144(mpz_class(1), mpz_class(144));
  ThetaComponents h10{1, 10, {}}, h12{1, 12, {}};
  for (int mu = 0; mu < 2; ++mu) {
    h10.h.push_back((e6 * h41.h[mu] - e4 * h61.h[mu]).scaled(inv144).truncated(prec));
    h12.h.push_back((e4sq * h41.h[mu] - e6 * h61.h[mu]).scaled(inv144).truncated(prec));
  }
  for (int mu = 0; mu < 2; ++mu) {
    if (!h10.h[mu].coeff(0).is_zero() || !h12.h[mu].coeff(0).is_zero()) {
      throw std::logic_error("cusp_forms_index1: constant term did not cancel");
    }
  }
  return {theta_reconstruct(h10, prec), theta_reconstruct(h12, prec)};
}

JacobiFormTable hecke_V(const JacobiFormTable& phi, int l) {
  if (l < 1) throw std::invalid_argument("hecke_V: l must be positive");
  const int m = phi.index();
  const int mp = m * l;
  const int k = phi.weight();
  JacobiFormTable out(k, mp, phi.prec(), phi.cuspidal());
  for (const auto& [key, unused] : out.coeffs()) {
    const std::int64_t r = key.mu;
    const std::int64_t n = (key.D + r * r) / (4 * mp);
    const std::int64_t g = std::gcd(std::gcd(n, r), static_cast<std::int64_t>(l));
    BigRational c;
    mpz_class ap;
    for (std::int64_t a = 1; a <= g; ++a) {
      if (g % a != 0) continue;
      const std::int64_t N = n * l / (a * a);
      const std::int64_t R = r / a;
      mpz_ui_pow_ui(ap.get_mpz_t(), static_cast<unsigned long>(a), static_cast<unsigned long>(k - 1));
      c += BigRational(ap, 1) * phi.coeff_nr(N, R);
    }
    if (key.mu <= mp) out.set(key.D, key.mu, c);
  }
  return out;
}

ThetaComponents theta_decompose(const JacobiFormTable& phi) {
  const int m = phi.index();
  ThetaComponents out{m, phi.weight(), {}};
  for (int mu = 0; mu < 2 * m; ++mu) out.h.emplace_back(4 * m, phi.prec());
  for (const auto& [key, c] : phi.coeffs()) out.h[key.mu].set(key.D, c);
  return out;
}

JacobiFormTable theta_reconstruct(const ThetaComponents& h, std::int64_t prec) {
  const int m = h.m;
  if (static_cast<int>(h.h.size()) != 2 * m) throw std::invalid_argument("theta_reconstruct: need 2m components");
  bool cuspidal = true;
  for (int mu = 0; mu < 2 * m; ++mu) {
    const QSeries& s = h.h[mu];
    if (s.scale() != 4 * m) throw std::invalid_argument("theta_reconstruct: component scale must be 4m");
    if (s.truncation() < prec) throw std::out_of_range("theta_reconstruct: components truncated below prec");
    for (const auto& [D, c] : s.terms()) {
      if (D > prec) break;
      if (mod(D + mu * mu, 4 * m) != 0 || D < 0) {
        throw std::invalid_argument("theta_reconstruct: inconsistent component supports");
      }
      if (D == 0) cuspidal = false;
    }
    const QSeries& t = h.h[mod(-mu, 2 * m)];
    if (!(s.truncated(prec) == t.truncated(prec))) {
      throw std::invalid_argument("theta_reconstruct: inconsistent component supports (h_mu != h_-mu)");
    }
  }
  JacobiFormTable out(h.k, m, prec, cuspidal);
  for (int mu = 0; mu <= m; ++mu) {
    for (const auto& [D, c] : h.h[mu].terms()) {
      if (D > prec) break;
      out.set(D, mu, c);
    }
  }
  return out;
}

PlusFormTable iota_plus(const JacobiFormTable& phi) {
  if (phi.index() != 1) throw std::invalid_argument("iota_plus: index must be 1");
  PlusFormTable F(phi.weight(), phi.prec(), phi.cuspidal());
  for (std::int64_t D = 0; D <= phi.prec(); ++D) {
    if (D % 4 == 1 || D % 4 == 2) continue;
    F.set(D, phi.coeff(D, D % 2));
  }
  return F;
}

ThetaComponents plus_to_theta(const PlusFormTable& F) {
  ThetaComponents out{1, F.k(), {QSeries(4, F.prec()), QSeries(4, F.prec())}};
  for (const auto& [D, c] : F.coeffs()) {
    if (D % 4 == 0) out.h[0].set(D, c);
    if (D % 4 == 3) out.h[1].set(D, c);
  }
  return out;
}

// ---------------------------------------------------------------- orbits

int stabilizer_order(int m, std::int64_t D, std::int64_t mu) {
  const std::int64_t R = mu;
  const std::int64_t N = (D + R * R) / (4 * m);
  int count = 0;
  for (int u : {1, -1}) {
    for (std::int64_t x = -2 * m; x <= 2 * m; ++x) {
      const std::int64_t R2 = u * R + 2 * m * x;
      const std::int64_t N2 = N + u * x * R + x * x * m;
      if (R2 == R && N2 == N) ++count;
    }
  }
  return count;
}

std::vector<OrbitClass> enumerate_orbits(int m, std::int64_t D_max) {
  if (m < 1) throw std::invalid_argument("enumerate_orbits: m must be positive");
  std::vector<OrbitClass> out;
  for (std::int64_t D = 1; D <= D_max; ++D) {
    for (std::int64_t mu = 0; mu <= m; ++mu) {
      if (mod(D + mu * mu, 4 * m) != 0) continue;
      out.push_back(OrbitClass{D, mu, (D + mu * mu) / (4 * m), stabilizer_order(m, D, mu),
                               BigRational(mpz_class(D), mpz_class(4))});
    }
  }
  return out;
}

BoundReport coefficient_bound_report(const JacobiFormTable& phi, std::int64_t D_max) {
  if (!phi.cuspidal()) throw std::invalid_argument("coefficient_bound_report: form is not cuspidal");
  if (D_max > phi.prec()) throw std::out_of_range("coefficient_bound_report: D_max beyond prec");
  BoundReport rep;
  const double half_k = phi.weight() / 2.0;
  std::int64_t D_cur = -1;
  double best = 0.0;
  auto flush = [&]() {
    if (D_cur < 0 || best == 0.0) return;
    const double ratio = best / std::pow(D_cur / 4.0, half_k);
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.argmax_D = D_cur;
    }
    rep.entries.push_back(BoundEntry{D_cur, ratio, rep.max_ratio});
  };
  for (const auto& [key, c] : phi.coeffs()) {
    if (key.D > D_max) break;
    if (key.D != D_cur) {
      flush();
      D_cur = key.D;
      best = 0.0;
    }
    best = std::max(best, std::fabs(c.to_double()));
  }
  flush();
  return rep;
}

// ---------------------------------------------------------------- export

namespace {

nlohmann::ordered_json integer_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

}  // namespace

std::string table_to_json(const JacobiFormTable& phi) {
  nlohmann::ordered_json j;
  j["weight"] = phi.weight();
  j["index"] = phi.index();
  j["prec"] = phi.prec();
  j["cuspidal"] = phi.cuspidal();
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [key, c] : phi.coeffs()) {
    arr.push_back({{"D", key.D}, {"mu", key.mu}, {"num", integer_json(c.num())}, {"den", integer_json(c.den())}});
  }
  j["coeffs"] = std::move(arr);
  return j.dump(1);
}

std::string plus_to_json(const PlusFormTable& F) {
  nlohmann::ordered_json j;
  j["weight"] = std::to_string(2 * F.k() - 1) + "/2";
  j["prec"] = F.prec();
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [D, c] : F.coeffs()) {
    arr.push_back({{"D", D}, {"num", integer_json(c.num())}, {"den", integer_json(c.den())}});
  }
  j["coeffs"] = std::move(arr);
  return j.dump(1);
}

std::string orbits_to_csv(const std::vector<OrbitClass>& orbits) {
  std::ostringstream os;
  os << "D,mu,N,eps,det4\n";
  for (const auto& o : orbits) os << o.D << "," << o.mu << "," << o.N << "," << o.eps << "," << o.D << "\n";
  return os.str();
}

std::string theta_to_text(const ThetaComponents& h) {
  std::ostringstream os;
  for (std::size_t mu = 0; mu < h.h.size(); ++mu) {
    os << "# mu=" << mu << " m=" << h.m << " k=" << h.k << "\n" << h.h[mu].serialize();
  }
  return os.str();
}

ThetaComponents theta_from_text(const std::string& text, int k) {
  ThetaComponents out{1, k, {}};
  std::istringstream is(text);
  std::string line, block;
  bool have = false;
  auto finish = [&]() {
    if (have) out.h.push_back(QSeries::parse(block));
    block.clear();
  };
  while (std::getline(is, line)) {
    if (line.rfind("# mu=", 0) == 0) {
      finish();
      have = true;
      int mu = 0, m = 0, kk = 0;
      if (std::sscanf(line.c_str(), "# mu=%d m=%d k=%d", &mu, &m, &kk) == 3) {
        out.m = m;
        out.k = kk;
      }
      continue;
    }
    block += line + "\n";
  }
  finish();
  if (static_cast<int>(out.h.size()) != 2 * out.m) throw std::invalid_argument("theta_from_text: wrong component count");
  return out;
}

}  // namespace jrs
