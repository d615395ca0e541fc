#include <random>

#include "doctest.h"
#include "jrs/bigq.hpp"

using namespace jrs;

namespace {

BigRational q(long a, long b = 1) { return BigRational(mpz_class(a), mpz_class(b)); }

// Akiyama-Tanigawa; yields B_1 = +1/2.
mpq_class akiyama_tanigawa(unsigned n) {
  std::vector<mpq_class> a(n + 1);
  for (unsigned m = 0; m <= n; ++m) {
    a[m] = mpq_class(1, m + 1);
    for (unsigned j = m; j >= 1; --j) {
      a[j - 1] = j * (a[j - 1] - a[j]);
      a[j - 1].canonicalize();
    }
  }
  return a[0];
}

// Hurwitz class number by counting reduced forms of discriminant -N.
mpq_class hurwitz_by_forms(long N) {
  mpq_class h = 0;
  for (long a = 1; 3 * a * a <= N; ++a) {
    for (long b = -a + 1; b <= a; ++b) {
      long num = b * b + N;
      if (num % (4 * a) != 0) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      if (a == b && b == c) {
        h += mpq_class(1, 3);
      } else if (a == c && b == 0) {
        h += mpq_class(1, 2);
      } else {
        h += 1;
      }
    }
  }
  h.canonicalize();
  return h;
}

}  // namespace

TEST_SUITE("bigq") {
  TEST_CASE("rational canonical form and parsing") {
    BigRational r(mpz_class(6), mpz_class(-4));
    CHECK(r.to_string() == "-3/2");
    CHECK(BigRational::parse("10/4") == q(5, 2));
    CHECK(BigRational::parse("-7") == q(-7));
    CHECK_THROWS(BigRational(mpz_class(1), mpz_class(0)));
    CHECK_THROWS(q(1) / q(0));
  }

  TEST_CASE("rational field axioms on random triples") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> d(-1000, 1000), p(1, 1000);
    for (int i = 0; i < 200; ++i) {
      BigRational a = q(d(rng), p(rng)), b = q(d(rng), p(rng)), c = q(d(rng), p(rng));
      CHECK((a + b) + c == a + (b + c));
      CHECK(a * b == b * a);
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a * b) * c == a * (b * c));
    }
  }

  TEST_CASE("bernoulli numbers against Akiyama-Tanigawa") {
    CHECK(bernoulli_number(0) == q(1));
    CHECK(bernoulli_number(1) == q(-1, 2));
    CHECK(bernoulli_number(12) == q(-691, 2730));
    for (unsigned n = 2; n <= 40; ++n) {
      CHECK(bernoulli_number(n) == BigRational(akiyama_tanigawa(n)));
      if (n % 2 == 1) CHECK(bernoulli_number(n).is_zero());
    }
  }

  TEST_CASE("divisor sums by enumeration") {
    CHECK(divisor_sigma(3, 1) == 1);
    CHECK(divisor_sigma(3, 2) == 9);
    CHECK(divisor_sigma(5, 4) == 1057);
    for (long n = 1; n <= 300; ++n) {
      mpz_class s = 0;
      for (long d = 1; d <= n; ++d)
        if (n % d == 0) s += d * d * d;
      CHECK(divisor_sigma(3, n) == s);
    }
  }

  TEST_CASE("elliptic Eisenstein series") {
    QSeries e4 = elliptic_eisenstein(4, 2), e6 = elliptic_eisenstein(6, 2);
    CHECK(e4.coeff(0) == q(1));
    CHECK(e4.coeff(1) == q(240));
    CHECK(e6.coeff(1) == q(-504));
    CHECK_THROWS_AS(e4.coeff(3), std::out_of_range);
    CHECK_THROWS(elliptic_eisenstein(8, 2));
  }

  TEST_CASE("Delta expansion matches the eta product") {
    const long P = 60;
    QSeries delta = ramanujan_delta(P);
    CHECK(delta.coeff(0).is_zero());
    // q prod (1 - q^n)^24 by repeated multiplication with integers
    std::vector<mpz_class> prod(P + 1, 0);
    prod[0] = 1;
    for (long n = 1; n <= P; ++n)
      for (int rep = 0; rep < 24; ++rep)
        for (long e = P; e >= n; --e) prod[e] -= prod[e - n];
    for (long e = 1; e <= P; ++e) CHECK(delta.coeff(e) == BigRational(prod[e - 1], 1));
    CHECK(delta.coeff(2) == q(-24));
    CHECK(delta.coeff(11) == q(534612));
  }

  TEST_CASE("series arithmetic") {
    QSeries a(1, 5), b(1, 5);
    a.set(0, q(1));
    a.set(1, q(1));
    b.set(0, q(1));
    b.set(1, q(-1));
    QSeries p = a * b;
    CHECK(p.coeff(0) == q(1));
    CHECK(p.coeff(1).is_zero());
    CHECK(p.coeff(2) == q(-1));
    CHECK(p.terms().size() == 2);
    CHECK(a + QSeries(1, 9) == a);
    QSeries c(2, 7);
    c.set(1, q(3));
    QSeries s = a + c;
    CHECK(s.scale() == 2);
    CHECK(s.truncation() == 7);
    CHECK(s.coeff(1) == q(3));
    CHECK(s.coeff(2) == q(1));
    CHECK_THROWS_AS(QSeries(kMaxSeriesScale, 1) + QSeries(3, 1), std::overflow_error);
  }

  TEST_CASE("truncating after the product equals the product of truncations") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> d(-50, 50);
    for (int rep = 0; rep < 20; ++rep) {
      const long p = 5 + rep, qq = p + 7;
      QSeries a(3, qq), b(3, qq);
      for (long e = 0; e <= qq; ++e) {
        a.set(e, q(d(rng), 7));
        b.set(e, q(d(rng), 3));
      }
      CHECK((a * b).truncated(p) == a.truncated(p) * b.truncated(p));
    }
  }

  TEST_CASE("text round trip is bit exact") {
    QSeries s(4, 40);
    s.set(3, q(1));
    s.set(4, q(-2, 7));
    s.set(39, BigRational::parse("123456789012345678901234567890/7"));
    const std::string text = s.serialize();
    CHECK(text.rfind("scale=4 trunc=40\n", 0) == 0);
    CHECK(QSeries::parse(text) == s);
    CHECK(QSeries::parse(text).serialize() == text);
  }

  TEST_CASE("Kronecker symbol spot values") {
    CHECK(kronecker(-4, 3) == -1);
    CHECK(kronecker(-3, 2) == -1);
    CHECK(kronecker(-8, 3) == 1);
    CHECK(kronecker(5, 2) == -1);
    CHECK(kronecker(-7, 2) == 1);
    CHECK(kronecker(6, 4) == 0);
  }

  TEST_CASE("Cohen H against the reduced-forms counter") {
    CHECK(cohen_H(1, 5).is_zero());
    CHECK(cohen_H(1, 3) == q(1, 3));
    CHECK(cohen_H(1, 0) == q(-1, 12));
    CHECK(cohen_H(1, 4) == q(1, 2));
    for (long N = 1; N <= 200; ++N) {
      BigRational h = cohen_H(1, N);
      CHECK(h == BigRational(hurwitz_by_forms(N)));
      CHECK(h.sign() >= 0);
    }
  }

  TEST_CASE("Cohen H at r = 3 equals L(-2, chi_{-3}) by hand") {
    // B_{3,chi} = 9 (B_3(1/3) - B_3(2/3)) = 2/3, L(-2, chi) = -2/9
    CHECK(cohen_H(3, 3) == q(-2, 9));
    CHECK(cohen_H(3, 0) == q(1, 252) * q(-1));
  }
}
