#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "midp/exact_pmf.hpp"
#include "midp/pvalues.hpp"
#include "midp/rng.hpp"

using namespace midp;

namespace {

// Independent reference for (l, e): double loop over the support comparing
// exact numerators, no shared code with the library scan.
std::pair<Rational, Rational> brute_tails(const ExactPmf& pmf, int x0) {
  Rational l(0), e(0);
  BigInt f0 = pmf.numerator(x0);
  for (int x = pmf.min_support(); x <= pmf.max_support(); ++x) {
    if (pmf.numerator(x) < f0) l += pmf.mass(x);
    else if (pmf.numerator(x) == f0) e += pmf.mass(x);
  }
  return {l, e};
}

int sample_point(const ExactPmf& pmf, double u) {
  for (int x = pmf.min_support(); x < pmf.max_support(); ++x)
    if (u <= pmf.cdf_double(x)) return x;
  return pmf.max_support();
}

}  // namespace

TEST_CASE("tail quantities on small distributions") {
  ExactPmf b4 = ExactPmf::binomial_half(4);
  auto [l0, e0] = tail_quantities(b4, 0);
  CHECK(l0 == 0);
  CHECK(e0 == make_rational(2, 16));
  auto [l1, e1] = tail_quantities(b4, 1);
  CHECK(l1 == make_rational(2, 16));
  CHECK(e1 == make_rational(8, 16));

  ExactPmf h = ExactPmf::hypergeometric(3, 3, 2);
  auto [lh, eh] = tail_quantities(h, 1);
  CHECK(lh == make_rational(6, 15));
  CHECK(eh == make_rational(9, 15));

  CHECK_THROWS_AS(tail_quantities(b4, 5), std::invalid_argument);
  CHECK_THROWS_AS(tail_quantities(b4, -1), std::invalid_argument);
  ExactPmf skew = ExactPmf::hypergeometric(5, 2, 6);
  CHECK_THROWS_AS(tail_quantities(skew, 3), std::invalid_argument);
}

TEST_CASE("tail quantities agree with brute force") {
  for (int n = 1; n <= 30; ++n) {
    ExactPmf pmf = ExactPmf::binomial_half(n);
    for (int x = 0; x <= n; ++x) CHECK(tail_quantities(pmf, x) == brute_tails(pmf, x));
  }
  for (int n1 = 1; n1 <= 7; ++n1)
    for (int n2 = 1; n2 <= 7; ++n2)
      for (int m = 1; m <= n1 + n2; ++m) {
        ExactPmf pmf = ExactPmf::hypergeometric(n1, n2, m);
        for (int x = pmf.min_support(); x <= pmf.max_support(); ++x)
          CHECK(tail_quantities(pmf, x) == brute_tails(pmf, x));
      }
}

TEST_CASE("pvalue record assembles the three flavors") {
  ExactPmf b4 = ExactPmf::binomial_half(4);
  PValueRecord r0 = pvalue_record(b4, 0);
  CHECK(r0.conventional == make_rational(1, 8));
  CHECK(r0.mid == make_rational(1, 16));
  PValueRecord r2 = pvalue_record(b4, 2);
  CHECK(r2.conventional == 1);
  CHECK(r2.mid == make_rational(13, 16));
  CHECK(r2.lower == make_rational(10, 16));
  CHECK(r2.tied == make_rational(6, 16));

  PValueRecord mode = pvalue_record(ExactPmf::binomial_half(2), 1);
  CHECK(mode.conventional == 1);
  CHECK(mode.mid == make_rational(3, 4));
}

TEST_CASE("pvalue record invariants across a sweep") {
  for (int n = 1; n <= 25; ++n) {
    ExactPmf pmf = ExactPmf::binomial_half(n);
    for (int x = 0; x <= n; ++x) {
      PValueRecord r = pvalue_record(pmf, x);
      CHECK(r.conventional == r.lower + r.tied);
      CHECK(r.mid == r.lower + r.tied / 2);
      CHECK(r.lower >= 0);
      CHECK(r.tied > 0);
      CHECK(r.lower < r.conventional);
      CHECK(r.mid < r.conventional);
      CHECK(r.conventional <= 1);
    }
  }
}

TEST_CASE("randomized pvalue interpolates between tails") {
  ExactPmf b4 = ExactPmf::binomial_half(4);
  CHECK(randomized_pvalue(b4, 0, 1.0) == 0.0);
  CHECK(randomized_pvalue(b4, 0, 0.0) == 0.125);
  CHECK(randomized_pvalue(b4, 0, 0.5) == 0.0625);
  CHECK_THROWS_AS(randomized_pvalue(b4, 0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(randomized_pvalue(b4, 0, 1.5), std::invalid_argument);
}

TEST_CASE("randomized pvalue mean recovers the mid pvalue") {
  // average of l + (1-U)e over k uniforms, three standard errors of slack
  ExactPmf pmf = ExactPmf::binomial_half(10);
  PValueRecord rec = pvalue_record(pmf, 3);
  const int k = 100000;
  RngStream rng(814);
  double sum = 0;
  for (int i = 0; i < k; ++i) sum += randomized_pvalue(pmf, 3, rng.uniform());
  double tol = 3.0 * rec.tied_double() / std::sqrt(12.0 * k);
  CHECK(std::fabs(sum / k - rec.mid_double()) < tol);
}

TEST_CASE("randomized pvalue is marginally uniform under the null") {
  ExactPmf pmf = ExactPmf::binomial_half(11);
  const int k = 100000;
  RngStream rng(2718);
  std::vector<double> rho(k);
  for (int i = 0; i < k; ++i) {
    int x = sample_point(pmf, rng.uniform());
    rho[i] = randomized_pvalue(pmf, x, rng.uniform());
  }
  std::sort(rho.begin(), rho.end());
  double ks = 0;
  for (int i = 0; i < k; ++i) {
    ks = std::max(ks, std::fabs(rho[i] - (i + 1.0) / k));
    ks = std::max(ks, std::fabs(rho[i] - static_cast<double>(i) / k));
  }
  CHECK(ks < 1.628 / std::sqrt(static_cast<double>(k)));  // 99% KS band
}

TEST_CASE("pvalue support groups tie classes") {
  PValueSupport s4 = pvalue_support(ExactPmf::binomial_half(4));
  REQUIRE(s4.entries.size() == 3);
  CHECK(s4.entries[0].mass == make_rational(2, 16));
  CHECK(s4.entries[1].mass == make_rational(8, 16));
  CHECK(s4.entries[2].mass == make_rational(6, 16));
  CHECK(s4.entries[0].mid == make_rational(1, 16));
  CHECK(s4.entries[1].mid == make_rational(6, 16));
  CHECK(s4.entries[2].mid == make_rational(13, 16));
  CHECK(s4.entries[0].points == std::vector<int>{0, 4});
  CHECK(s4.entries[1].points == std::vector<int>{1, 3});
  CHECK(s4.entries[2].points == std::vector<int>{2});

  PValueSupport s1 = pvalue_support(ExactPmf::binomial_half(1));
  REQUIRE(s1.entries.size() == 1);
  CHECK(s1.entries[0].mass == 1);
  CHECK(s1.entries[0].mid == make_rational(1, 2));

  PValueSupport sh = pvalue_support(ExactPmf::hypergeometric(3, 3, 2));
  REQUIRE(sh.entries.size() == 2);
  CHECK(sh.entries[0].mid == make_rational(1, 5));
  CHECK(sh.entries[0].mass == make_rational(2, 5));
  CHECK(sh.entries[1].mid == make_rational(7, 10));
  CHECK(sh.entries[1].mass == make_rational(3, 5));
}

TEST_CASE("cumulative mass of a support entry equals its conventional pvalue") {
  // the identity that makes the mid pvalue analysis work, checked over the
  // full exhaustive range
  auto check_pmf = [](const ExactPmf& pmf) {
    PValueSupport s = pvalue_support(pmf);
    Rational cum(0), prev(-1);
    for (const PValueClass& cls : s.entries) {
      cum += cls.mass;
      CHECK(cum == cls.conventional);
      CHECK(cls.mid > prev);       // strictly increasing
      CHECK(cls.mid < cum);        // strict sub-uniformity at support points
      prev = cls.mid;
    }
    CHECK(cum == 1);
  };
  for (int n = 1; n <= 60; ++n) check_pmf(ExactPmf::binomial_half(n));
  for (int n = 1; n <= 20; ++n)
    for (int m = 1; m <= 2 * n; ++m) check_pmf(ExactPmf::hypergeometric(n, n, m));
}

TEST_CASE("boundary points pick the largest achievable pvalue below t") {
  ExactPmf b4 = ExactPmf::binomial_half(4);
  CHECK(boundary_points(b4, 0.05, PValueFlavor::Conventional).empty());
  CHECK(boundary_points(b4, 0.5, PValueFlavor::Conventional) == std::vector<int>{0, 4});
  ExactPmf b8 = ExactPmf::binomial_half(8);
  CHECK(boundary_points(b8, 0.05, PValueFlavor::Conventional) == std::vector<int>{0, 8});

  // mid flavor reaches lower: smallest mid of binomial_half(4) is 1/16
  CHECK(boundary_points(b4, make_rational(1, 16), PValueFlavor::Mid) ==
        std::vector<int>{0, 4});
  CHECK(boundary_points(b4, 0.05, PValueFlavor::Mid).empty());

  // property: every member has P <= t and no achievable value sits between
  for (int n = 1; n <= 18; ++n) {
    ExactPmf pmf = ExactPmf::binomial_half(n);
    PValueSupport s = pvalue_support(pmf);
    for (int k = 1; k <= 19; ++k) {
      Rational t = make_rational(k, 20);
      for (PValueFlavor fl : {PValueFlavor::Conventional, PValueFlavor::Mid}) {
        std::vector<int> pts = boundary_points(pmf, t, fl);
        Rational best(-1);
        bool any = false;
        for (const PValueClass& cls : s.entries) {
          Rational v = fl == PValueFlavor::Mid ? cls.mid : cls.conventional;
          if (v <= t && v > best) { best = v; any = true; }
        }
        if (!any) {
          CHECK(pts.empty());
        } else {
          REQUIRE(!pts.empty());
          PValueRecord r = pvalue_record(pmf, pts.front());
          CHECK((fl == PValueFlavor::Mid ? r.mid : r.conventional) == best);
        }
      }
    }
  }
}

TEST_CASE("cdf boundary finds the left tail crossing") {
  ExactPmf b4 = ExactPmf::binomial_half(4);
  CHECK(!cdf_boundary(b4, 0.05).has_value());
  CHECK(cdf_boundary(b4, 0.10) == 0);
  CHECK(cdf_boundary(ExactPmf::binomial_half(8), 0.5) == 3);

  for (int n = 1; n <= 24; ++n) {
    ExactPmf pmf = ExactPmf::binomial_half(n);
    int mode = pmf.lower_mode();
    for (int k = 1; k <= 19; ++k) {
      Rational t = make_rational(k, 20);
      std::optional<int> y = cdf_boundary(pmf, t);
      if (!y) {
        CHECK(pmf.cdf(pmf.min_support()) > t);
      } else {
        CHECK(*y <= mode);
        CHECK(pmf.cdf(*y) <= t);
        if (*y < mode) CHECK(pmf.cdf(*y + 1) > t);
      }
    }
  }
}

TEST_CASE("pvalue cdf matches direct enumeration") {
  for (int n = 1; n <= 20; ++n) {
    ExactPmf pmf = ExactPmf::binomial_half(n);
    for (int k = 1; k <= 9; ++k) {
      Rational t = make_rational(k, 10);
      for (PValueFlavor fl : {PValueFlavor::Conventional, PValueFlavor::Mid}) {
        Rational direct(0);
        for (int x = 0; x <= n; ++x) {
          PValueRecord r = pvalue_record(pmf, x);
          if ((fl == PValueFlavor::Mid ? r.mid : r.conventional) <= t)
            direct += pmf.mass(x);
        }
        CHECK(pvalue_cdf(pmf, t, fl) == direct);
      }
    }
  }
}

TEST_CASE("left tail mass bound holds on a fine grid") {
  // The mass of sub-mode points with mid p <= t never exceeds t/2 + f(y(t)+1).
  // Only the strict lower tail obeys this; the full two-sided mass does not
  // (the acceptance suite documents where the stronger claim breaks).
  for (int n = 1; n <= 25; ++n) {
    ExactPmf pmf = ExactPmf::binomial_half(n);
    int mode = pmf.lower_mode();
    std::vector<Rational> mid(static_cast<std::size_t>(n) + 1);
    for (int x = 0; x <= n; ++x) mid[static_cast<std::size_t>(x)] = pvalue_record(pmf, x).mid;
    for (int k = 1; k <= 999; ++k) {
      Rational t = make_rational(k, 1000);
      std::optional<int> y = cdf_boundary(pmf, t);
      Rational edge = y ? pmf.mass(*y + 1) : pmf.mass(pmf.min_support());
      Rational lower_tail(0);
      for (int x = 0; x < mode; ++x)
        if (mid[static_cast<std::size_t>(x)] <= t) lower_tail += pmf.mass(x);
      CHECK(lower_tail <= t / 2 + edge);
    }
  }
}

TEST_CASE("binomial test pvalues from count pairs") {
  PValueRecord a = bt_pvalues(0, 4);
  CHECK(a.conventional == make_rational(1, 8));
  CHECK(a.mid == make_rational(1, 16));
  PValueRecord b = bt_pvalues(2, 2);
  CHECK(b.conventional == 1);
  CHECK(b.mid == make_rational(13, 16));
  PValueRecord c = bt_pvalues(1, 0);
  CHECK(c.conventional == 1);
  CHECK(c.mid == make_rational(1, 2));
  CHECK(c.observation == 1);
  CHECK_THROWS_AS(bt_pvalues(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(bt_pvalues(-1, 2), std::invalid_argument);
}

TEST_CASE("fisher exact pvalues from tables") {
  PValueRecord a = fet_pvalues(0, 2, 3, 3);
  CHECK(a.conventional == make_rational(2, 5));
  CHECK(a.mid == make_rational(1, 5));
  PValueRecord b = fet_pvalues(1, 1, 3, 3);
  CHECK(b.conventional == 1);
  CHECK(b.mid == make_rational(7, 10));
  PValueRecord c = fet_pvalues(1, 0, 1, 1);
  CHECK(c.conventional == 1);
  CHECK(c.mid == make_rational(1, 2));

  CHECK_THROWS_AS(fet_pvalues(0, 0, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(fet_pvalues(4, 0, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(fet_pvalues(0, 4, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(fet_pvalues(1, 1, 0, 3), std::invalid_argument);
}
