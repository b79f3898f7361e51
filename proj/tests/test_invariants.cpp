#include <gtest/gtest.h>

#include "support.hpp"

using namespace modeq;
using modeq::testing::R;
using modeq::testing::RationalSource;

namespace {

GDPoly g() { return gd::g(); }
GDPoly d() { return gd::d(); }
GDPoly k(const Rational& r) { return GDPoly(r); }
GDPoly gamma_() { return g() * g(); }

}  // namespace

TEST(SvcProfile, WorkedEntries) {
  auto e = svc_profile(SeriesSpec(R(-2), 3), {R(0), R(0)});
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].i, 2);
  EXPECT_EQ(e[0].j, 0);
  EXPECT_TRUE(e[0].is_zero);

  auto r2 = svc_profile(SeriesSpec(R(0), 2), {R(1, 3), R(1, 3)});
  ASSERT_EQ(r2.size(), 1u);
  EXPECT_TRUE(r2[0].resonant);
  EXPECT_TRUE(r2[0].is_zero);

  auto five = svc_profile(SeriesSpec(R(-5), 5), {R(1), R(3)});
  ASSERT_EQ(five.size(), 6u);
  for (const auto& x : five) EXPECT_FALSE(x.is_zero) << x.i << "," << x.j;
}

TEST(SvcProfile, LacunaryPatternsSkipGapOne) {
  auto p = svc_profile(SeriesSpec(R(1), {0, 2, 3, 5}), {R(1, 3), R(2)});
  std::vector<std::pair<int, int>> got;
  for (const auto& x : p) got.push_back({x.i, x.j});
  std::vector<std::pair<int, int>> want = {{2, 0}, {3, 0}, {5, 2}, {5, 3}};
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
}

TEST(Invariants, IdenticallyOneAtResonantN5) {
  for (const Rational& n : {R(-1, 2), R(-5, 2)}) {
    RatioForm f = invariant_form(InvariantKind::I, n);
    EXPECT_EQ(f.num, f.den);
  }
  for (const Rational& n : {R(0), R(-3)}) {
    RatioForm f = invariant_form(InvariantKind::J, n);
    EXPECT_EQ(f.num, f.den);
  }
  RationalSource src(2);
  for (int t = 0; t < 5; ++t) {
    DensityPair p = src.pair();
    auto v = invariant(InvariantKind::I, R(-1, 2), p).value;
    if (v) {
      EXPECT_EQ(*v, QSqrt3(1));
    }
  }
}

TEST(Invariants, RWorkedValuesAndUndefined) {
  auto r = invariant(InvariantKind::R, R(-1), {R(1, 2), R(5, 2)});
  ASSERT_TRUE(r.defined());
  EXPECT_EQ(*r.value, QSqrt3(R(12, 13)));
  EXPECT_EQ(*invariant(InvariantKind::R, R(-1), {R(1), R(3)}).value, QSqrt3(R(27, 28)));
  // R does not depend on n
  EXPECT_EQ(*invariant(InvariantKind::R, R(4), {R(1), R(3)}).value, QSqrt3(R(27, 28)));
  // J at a point where B_{n+4,n+1} B_{n+3,n} = 0: gamma = 0
  EXPECT_FALSE(invariant(InvariantKind::J, R(1), {R(1, 2), R(1, 2)}).defined());
}

TEST(Invariants, KIsJOverI) {
  RationalSource src(7);
  for (int t = 0; t < 10; ++t) {
    DensityPair p = src.pair();
    Rational n = src.next();
    auto I = invariant(InvariantKind::I, n, p).value, J = invariant(InvariantKind::J, n, p).value,
         K = invariant(InvariantKind::K, n, p).value;
    if (I && J && K && !I->is_zero()) {
      EXPECT_EQ(*K, *J / *I);
    }
  }
}

TEST(Invariants, RTildeFormula) {
  RationalSource src(9);
  for (int t = 0; t < 10; ++t) {
    DensityPair p = src.pair();
    auto R_ = invariant(InvariantKind::R, R(-1), p).value, Rt = invariant(InvariantKind::Rtilde, R(-1), p).value;
    if (R_ && Rt && *R_ != QSqrt3(1)) {
      EXPECT_EQ(*Rt, *R_ / (QSqrt3(1) - *R_));
    }
  }
}

TEST(AuxCombinations, DisplayedClosedForms) {
  RationalSource src(31);
  for (int t = 0; t < 6; ++t) {
    Rational n = src.next();
    Rational N5 = N_of(n, 5), N6 = N_of(n, 6);
    if (N5 * N5 == R(1) || N5 * N5 == R(9, 4) || N6.is_zero()) continue;
    for (auto kind : {AuxKind::B420, AuxKind::B4310, AuxKind::Bminus43210, AuxKind::Bplus43210, AuxKind::B5320})
      EXPECT_EQ(aux_combination(kind, n), forms::aux_display(kind, n));
  }
  EXPECT_THROW(aux_combination(AuxKind::B420, R(-1, 2)), DomainError);
  EXPECT_THROW(aux_combination(AuxKind::B5320, R(-2)), DomainError);
}

TEST(AuxCombinations, DivisibilityWitness) {
  using detail::Bij;
  Rational n = R(-1, 2);  // N5 = 1
  EXPECT_TRUE((Bij(n, 4, 0) - Bij(n, 4, 2) * Bij(n, 2, 0)).is_zero());
  Rational m = R(0);  // N5 = 3/2
  EXPECT_TRUE((Bij(m, 4, 0) * Bij(m, 3, 1) - Bij(m, 4, 1) * Bij(m, 3, 0)).is_zero());
  Rational z = R(-2);  // N6 = 0
  EXPECT_TRUE((Bij(z, 5, 2) * Bij(z, 2, 0) - Bij(z, 5, 3) * Bij(z, 3, 0)).is_zero());
}

TEST(Invariants, TildeFormsMatchDisplays) {
  RationalSource src(41);
  for (int t = 0; t < 5; ++t) {
    Rational n = src.next();
    Rational N5 = N_of(n, 5);
    if (N5 * N5 == R(1) || N5 * N5 == R(9, 4)) continue;
    GDPoly a = k(Rational(2) * N5) * d() + k(N5 * N5 + R(7, 4));
    GDPoly num = gamma_() * gamma_() - k(2) * gamma_() * a + (a * a - k(4) * (d() + k(N5)) * (d() + k(N5)));
    RatioForm f = invariant_form(InvariantKind::Itilde, n);
    EXPECT_EQ(f.num, num);
    EXPECT_EQ(f.den, aux_combination(AuxKind::B420, n));
  }
}

TEST(GeneralRatio, SpecialisesToJAndK) {
  Rational n = R(-5);
  DensityPair a{R(1), R(3)}, b{R(0), R(3)};
  std::array<QSqrt3, 3> e1{QSqrt3(1), QSqrt3(0), QSqrt3(0)}, e2{QSqrt3(0), QSqrt3(1), QSqrt3(0)},
      e3{QSqrt3(0), QSqrt3(0), QSqrt3(1)};
  EXPECT_EQ(*general_ratio(e2, e1, n, a).value, *invariant(InvariantKind::J, n, a).value);
  EXPECT_EQ(*general_ratio(e3, e1, n, a).value, *invariant(InvariantKind::K, n, a).value);
  // equal on a Bol pair
  std::array<QSqrt3, 3> x{QSqrt3(2), QSqrt3(-1), QSqrt3(R(1, 3))}, y{QSqrt3(1), QSqrt3(1), QSqrt3(5)};
  EXPECT_EQ(*general_ratio(x, y, n, a).value, *general_ratio(x, y, n, b).value);
  EXPECT_THROW(general_ratio(x, x, n, a), DomainError);
}

TEST(Invariants, KindNamesRoundTrip) {
  for (auto kk : {InvariantKind::I, InvariantKind::J, InvariantKind::K, InvariantKind::M, InvariantKind::R,
                  InvariantKind::Itilde, InvariantKind::Jtilde, InvariantKind::Mtilde, InvariantKind::Rtilde})
    EXPECT_EQ(invariant_kind_from_string(to_string(kk)), kk);
  EXPECT_FALSE(invariant_kind_from_string("Q").has_value());
}
