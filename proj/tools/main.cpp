#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "jrs/pairs.hpp"
#include "jrs/suite.hpp"

using Json = nlohmann::ordered_json;
using namespace jrs;

namespace {

struct Globals {
  int precision = kWorkingDigits;
  std::int64_t dmax = 0;  // 0: command default
  double tol = 1e-10;
  std::string out = ".";
};

void validate(const Globals& g) {
  if (g.precision < 15) throw std::invalid_argument("--precision must be at least 15 digits");
  if (g.precision > 16) throw std::invalid_argument("--precision above 16 digits exceeds the double working precision");
  if (!(g.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
  if (g.dmax < 0) throw std::invalid_argument("--dmax must be positive");
}

std::int64_t dmax_or(const Globals& g, std::int64_t fallback) { return g.dmax > 0 ? g.dmax : fallback; }

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw std::invalid_argument("expected re,im but got '" + text + "'");
  }
}

Json cjson(Complex z) { return Json::array({z.real(), z.imag()}); }

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + p.string());
}

// Integers when they fit, decimal strings otherwise.
Json zjson(const mpz_class& z) { return z.fits_slong_p() ? Json(z.get_si()) : Json(z.get_str()); }

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

Json qseries_json(const QSeries& f) {
  Json coeffs = Json::array();
  for (const auto& [n, c] : f.terms())
    coeffs.push_back({{"n", n}, {"num", zjson(c.num())}, {"den", zjson(c.den())}});
  return {{"scale", f.scale()}, {"truncation", f.truncation()}, {"coeffs", coeffs}};
}

const JacobiFormTable& jacobi_of(const NamedPair& p) {
  if (!p.phi) throw std::invalid_argument("pair '" + p.name + "' is not a Jacobi form");
  return *p.phi;
}

// ---------------------------------------------------------------- forms, theta, plus

void forms_build(const Globals& g, const std::string& pair) {
  const NamedPair& p = named_pair(pair, dmax_or(g, 400));
  const std::filesystem::path dir(g.out);
  std::filesystem::create_directories(dir);
  const auto coeffs = dir / (pair + ".coeffs.json");
  const auto theta = dir / (pair + ".theta.txt");
  const auto plus = dir / (pair + ".plus.json");
  if (p.phi) {
    write_file(coeffs, table_to_json(*p.phi));
    write_file(theta, theta_to_text(theta_decompose(*p.phi)));
    if (p.m == 1)
      write_file(plus, plus_to_json(iota_plus(*p.phi)));
    else
      write_file(plus, Json({{"pair", pair}, {"available", false}, {"reason", "the plus-space map needs index 1"}}).dump(2) + "\n");
  } else {
    write_file(coeffs, qseries_json(*p.f).dump(2) + "\n");
    write_file(theta, p.f->serialize() + "\n");
    write_file(plus, Json({{"pair", pair}, {"available", false}, {"reason", "elliptic form"}}).dump(2) + "\n");
  }
  emit({{"pair", pair}, {"dmax", p.rankin.prec()}, {"files", {coeffs.string(), theta.string(), plus.string()}}});
}

void forms_coeffs(const Globals& g, const std::string& pair, std::int64_t D, std::optional<std::int64_t> mu) {
  const NamedPair& p = named_pair(pair, std::max<std::int64_t>(16, std::max(D, dmax_or(g, 16))));
  if (!p.phi) {
    const BigRational c = p.f->coeff(D);
    emit({{"n", D}, {"num", zjson(c.num())}, {"den", zjson(c.den())}});
    return;
  }
  const JacobiFormTable& phi = *p.phi;
  Json out = Json::array();
  for (std::int64_t m = 0; m <= phi.index(); ++m) {
    if (mu && phi.reduce_mu(*mu) != phi.reduce_mu(m)) continue;
    if (!phi.supports(D, m)) continue;
    const BigRational c = phi.coeff(D, m);
    out.push_back({{"D", D}, {"mu", m}, {"num", zjson(c.num())}, {"den", zjson(c.den())}});
  }
  if (out.empty()) throw std::invalid_argument("no coefficient class with D=" + std::to_string(D));
  emit(out.size() == 1 ? out[0] : out);
}

void theta_cmd(const Globals& g, const std::string& pair) {
  const NamedPair& p = named_pair(pair, dmax_or(g, 400));
  std::cout << theta_to_text(theta_decompose(jacobi_of(p)));
}

void plus_cmd(const Globals& g, const std::string& pair) {
  const NamedPair& p = named_pair(pair, dmax_or(g, 400));
  std::cout << plus_to_json(iota_plus(jacobi_of(p)));
}

// ---------------------------------------------------------------- numerics

void petersson_cmd(const Globals& g, const std::string& form_a, const std::string& form_b, const std::string& method) {
  const NamedPair& a = named_pair(form_a, dmax_or(g, 400));
  const NamedPair& b = named_pair(form_b, dmax_or(g, 400));
  QuadratureSpec spec;
  spec.target = g.tol;
  InnerProductResult r;
  if (!a.phi || !b.phi) {
    if (!a.f || !b.f) throw std::invalid_argument("cannot pair a Jacobi form with an elliptic form");
    r = petersson_elliptic(*a.f, *b.f, a.k, spec);
  } else if (method == "direct") {
    r = petersson_jacobi_direct(*a.phi, *b.phi);
  } else if (method == "unfolded") {
    r = petersson_jacobi_unfolded(*a.phi, *b.phi, spec);
  } else if (method == "plus") {
    r = petersson_halfintegral(iota_plus(*a.phi), iota_plus(*b.phi), spec);
  } else {
    throw std::invalid_argument("unknown method '" + method + "'");
  }
  emit({{"value_re", r.value.real()}, {"value_im", r.value.imag()}, {"error", r.error_estimate}, {"method", r.method}});
}

Json evaluation_json(const DirichletEvaluation& e) {
  Json j{{"s", cjson(e.s)}};
  j["raw"] = e.raw ? cjson(*e.raw) : Json(nullptr);
  j["completed"] = cjson(e.completed);
  j["method"] = e.method;
  j["error"] = e.error_estimate;
  return j;
}

int dseries_cmd(const Globals& g, const std::string& action, const std::string& pair, const std::string& s_text) {
  const std::int64_t D_max = dmax_or(g, 4000);
  if (action == "half-check") {
    const JacobiFormTable& phi = jacobi_of(named_pair(pair, std::min<std::int64_t>(D_max, 400)));
    const auto rep = half_relation_check(phi, phi, phi.prec());
    emit({{"pair", pair},
          {"dmax", rep.D_max},
          {"pairs", rep.pairs},
          {"unpaired", rep.unpaired},
          {"det_scaling_exact", rep.det_scaling_exact},
          {"claimed", rep.claimed.to_string()},
          {"measured", rep.measured ? Json(rep.measured->to_string()) : Json(nullptr)},
          {"mismatched", rep.mismatched.size()},
          {"identity_holds", rep.identity_holds()}});
    return rep.identity_holds() ? 0 : 1;
  }
  const NamedPair& p = named_pair(pair, D_max);
  QuadratureSpec spec;
  spec.target = g.tol;
  const RankinIntegrator engine(p.rankin, spec);
  if (action == "eval") {
    const Complex s = parse_complex(s_text);
    DirichletEvaluation e =
        s.real() > p.k + 1.0 ? dirichlet_sum(p.rankin, s, D_max) : engine.evaluate(s);
    Json j = evaluation_json(e);
    j["residual"] = nullptr;
    emit(j);
  } else if (action == "fe-check") {
    const auto fe = functional_equation_residual(engine, parse_complex(s_text), D_max);
    Json j = evaluation_json(fe.at_s);
    j["s_star"] = cjson(fe.s_star);
    j["completed_star"] = cjson(fe.at_star.completed);
    j["method_star"] = fe.at_star.method;
    j["residual"] = fe.residual;
    emit(j);
  } else if (action == "residue") {
    const auto r = residue_at_right_edge(engine);
    emit({{"s", cjson(r.s0)},
          {"raw", nullptr},
          {"completed", cjson(r.route_a)},
          {"method", "residue"},
          {"route_b", cjson(r.route_b)},
          {"residual", r.agreement},
          {"error", r.route_a_error}});
  }
  return 0;
}

void eisenstein_cmd(const Globals& g, const std::string& s_text, const std::string& tau_text) {
  const Complex s = parse_complex(s_text);
  const ModularPoint tau(parse_complex(tau_text));
  const auto v = EisensteinEvaluator(s, std::min(g.tol, 1e-10)).evaluate(tau);
  emit({{"s", cjson(s)}, {"tau", cjson(tau.tau())}, {"value", cjson(v.value)}, {"error", v.error_bound}, {"terms", v.terms}});
}

int suite_cmd(const Globals& g, bool quick, const std::string& criterion) {
  SuiteConfig cfg;
  cfg.quick = quick;
  if (!criterion.empty()) cfg.criterion = criterion;
  if (g.dmax > 0) cfg.dmax = g.dmax;
  const SuiteReport rep = run_suite(cfg);
  const std::filesystem::path dir(g.out);
  std::filesystem::create_directories(dir);
  write_file(dir / "acceptance_report.json", report_json(rep));
  write_file(dir / "acceptance_timings.json", timings_json(rep));
  for (const auto& r : rep.results)
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.id << ": " << r.summary << "\n";
  return rep.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jacobi forms, Petersson products and Rankin-Selberg Dirichlet series"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--precision", g.precision, "working precision in digits (15 or 16)");
  app.add_option("--dmax", g.dmax, "coefficient precision / summation range");
  app.add_option("--tol", g.tol, "quadrature tolerance");
  app.add_option("--out", g.out, "output directory");

  std::string pair = "phi10";
  std::string s_text = "12,0";
  std::string tau_text = "0,1";
  std::string method = "unfolded";
  std::string criterion;
  std::int64_t D = 0;
  std::optional<std::int64_t> mu;
  bool quick = false;
  int status = 0;
  const auto pair_opt = [&](CLI::App* c) { c->add_option("--pair", pair, "phi10 | phi12 | v2-phi10 | delta"); };

  auto* forms = app.add_subcommand("forms", "exact form tables");
  forms->require_subcommand(1);
  auto* build = forms->add_subcommand("build", "write coefficient, theta and plus-space files");
  pair_opt(build);
  build->callback([&] { validate(g); forms_build(g, pair); });
  auto* coeffs = forms->add_subcommand("coeffs", "print one coefficient");
  pair_opt(coeffs);
  coeffs->add_option("--D", D, "discriminant (or n for an elliptic form)")->required();
  coeffs->add_option("--mu", mu, "residue class of R");
  coeffs->callback([&] { validate(g); forms_coeffs(g, pair, D, mu); });

  auto* theta = app.add_subcommand("theta", "theta components as text");
  pair_opt(theta);
  theta->callback([&] { validate(g); theta_cmd(g, pair); });

  auto* plus = app.add_subcommand("plus", "plus-space image of an index-1 form");
  pair_opt(plus);
  plus->callback([&] { validate(g); plus_cmd(g, pair); });

  std::string form_b = "phi10";
  auto* pet = app.add_subcommand("petersson", "Petersson product of two named forms");
  pet->add_option("--form-a", pair, "phi10 | phi12 | v2-phi10 | delta");
  pet->add_option("--form-b", form_b, "phi10 | phi12 | v2-phi10 | delta");
  pet->add_option("--method", method, "direct | unfolded | plus (ignored for delta)");
  pet->callback([&] { validate(g); petersson_cmd(g, pair, form_b, method); });

  auto* ds = app.add_subcommand("dseries", "completed Dirichlet series");
  ds->require_subcommand(1);
  for (const char* action : {"eval", "fe-check", "residue", "half-check"}) {
    auto* c = ds->add_subcommand(action);
    pair_opt(c);
    c->add_option("--s", s_text, "re,im");
    const std::string a = action;
    c->callback([&, a] { validate(g); status = dseries_cmd(g, a, pair, s_text); });
  }

  auto* special = app.add_subcommand("special", "special-function spot checks");
  special->require_subcommand(1);
  auto* eis = special->add_subcommand("eval-eisenstein", "completed Eisenstein series at (s, tau)");
  eis->add_option("--s", s_text, "re,im");
  eis->add_option("--tau", tau_text, "u,v");
  eis->callback([&] { validate(g); eisenstein_cmd(g, s_text, tau_text); });

  auto* suite = app.add_subcommand("suite", "acceptance suite");
  suite->require_subcommand(1);
  auto* acc = suite->add_subcommand("acceptance", "run the acceptance criteria");
  acc->add_flag("--quick", quick, "fewer random samples");
  acc->add_option("--criterion", criterion, "run a single criterion");
  acc->callback([&] { validate(g); status = suite_cmd(g, quick, criterion); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return status;
}
