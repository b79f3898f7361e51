#include <gtest/gtest.h>

#include "support.hpp"

using namespace modeq;
using modeq::testing::R;

TEST(Rational, ParsesIntegersFractionsAndDecimals) {
  EXPECT_EQ(Rational::parse("3"), R(3));
  EXPECT_EQ(Rational::parse("-4/6"), R(-2, 3));
  EXPECT_EQ(Rational::parse("+5/10"), R(1, 2));
  EXPECT_EQ(Rational::parse("6.35"), R(127, 20));
  EXPECT_EQ(Rational::parse("-.5"), R(-1, 2));
  EXPECT_THROW(Rational::parse("1/0"), ParseError);
  EXPECT_THROW(Rational::parse("abc"), ParseError);
  EXPECT_THROW(Rational::parse(""), ParseError);
  EXPECT_THROW(Rational::parse("1/2/3"), ParseError);
}

TEST(Rational, CanonicalStringsAndArithmetic) {
  EXPECT_EQ(R(6, -4).str(), "-3/2");
  EXPECT_EQ(R(8, 4).str(), "2");
  EXPECT_EQ(R(1, 3) + R(1, 6), R(1, 2));
  EXPECT_EQ(R(2, 3) * R(3, 4), R(1, 2));
  EXPECT_THROW(R(1) / R(0), DivisionByZero);
  EXPECT_TRUE(R(-3, 2).is_half_integer());
  EXPECT_FALSE(R(1, 3).is_half_integer());
  EXPECT_LT(R(-1, 2), R(1, 3));
}

TEST(QSqrt3, FieldOperations) {
  QSqrt3 x(R(1), R(2)), y(R(-3, 2), R(1, 3));
  EXPECT_EQ(x * x.inverse(), QSqrt3(1));
  EXPECT_EQ((x * y) / y, x);
  EXPECT_EQ(QSqrt3::sqrt3() * QSqrt3::sqrt3(), QSqrt3(3));
  EXPECT_EQ(x.norm(), R(1) - R(12));
  EXPECT_THROW(QSqrt3().inverse(), DivisionByZero);
}

TEST(QSqrt3, SignOfMixedTerms) {
  EXPECT_EQ(QSqrt3(R(2), R(-1)).sign(), 1);   // 2 - 1.732
  EXPECT_EQ(QSqrt3(R(1), R(-1)).sign(), -1);  // 1 - 1.732
  EXPECT_EQ(QSqrt3(R(-7), R(4)).sign(), -1);  // -7 + 6.93
  EXPECT_EQ(QSqrt3().sign(), 0);
}

TEST(Pochhammer, FallingFactorial) {
  EXPECT_EQ(pochhammer(R(7, 3), 0), R(1));
  EXPECT_EQ(pochhammer(R(5), 2), R(20));
  EXPECT_EQ(pochhammer(R(4), 5), R(0));
  GDPoly d = gd::d();
  GDPoly expect = d * d - GDPoly(3) * d + GDPoly(2);
  EXPECT_EQ(pochhammer(d - GDPoly(1), 2), expect);
}

TEST(Binomial, GeneralizedCoefficients) {
  EXPECT_EQ(gen_binomial(R(11, 3), 0), R(1));
  EXPECT_EQ(gen_binomial(R(1, 2), 2), R(-1, 8));
  EXPECT_EQ(gen_binomial(R(4), 5), R(0));
  EXPECT_EQ(gen_binomial(R(6), 2), R(15));
}

TEST(ThreePowHalf, ExactValues) {
  EXPECT_EQ(three_pow_half(0), QSqrt3(1));
  EXPECT_EQ(three_pow_half(2), QSqrt3(3));
  EXPECT_EQ(three_pow_half(3), QSqrt3(R(0), R(3)));
  EXPECT_EQ(three_pow_half(-3) * three_pow_half(3), QSqrt3(1));
}

TEST(SparsePoly, ParitySplit) {
  GDPoly g = gd::g(), d = gd::d();
  auto [e1, o1] = parity_split(g * g + d);
  EXPECT_EQ(e1, g * g + d);
  EXPECT_TRUE(o1.is_zero());
  auto [e2, o2] = parity_split(g * g * g - GDPoly(3) * g);
  EXPECT_TRUE(e2.is_zero());
  EXPECT_EQ(o2, g * g * g - GDPoly(3) * g);
  auto [e3, o3] = parity_split(B_symbolic(R(0), 3));
  EXPECT_TRUE(e3.is_zero());
  EXPECT_FALSE(o3.is_zero());
}

TEST(SparsePoly, SubstitutionDerivativeAndComposition) {
  GDPoly g = gd::g(), d = gd::d();
  GDPoly p = g * g * d + GDPoly(R(1, 2)) * d * d - GDPoly(4);
  EXPECT_EQ(p.derivative(1), g * g + d);
  EXPECT_EQ(p.derivative(0), GDPoly(2) * g * d);
  EXPECT_EQ(gd::substitute_d(p, QSqrt3(2)), GDPoly(2) * g * g - GDPoly(2));
  EXPECT_EQ(gd::eval(p, QSqrt3(R(0), R(1)), QSqrt3(R(1, 3))), QSqrt3(R(1) + R(1, 18) - R(4)));
  GDPoly shifted = p.compose(1, d + GDPoly(1));
  EXPECT_EQ(gd::eval(shifted, QSqrt3(2), QSqrt3(0)), gd::eval(p, QSqrt3(2), QSqrt3(1)));
  EXPECT_EQ(gd::negate_g(gd::negate_g(p)), p);
  EXPECT_EQ((g * d).divide_by_variable(0), d);
}

TEST(SparsePoly, EvenEvaluationAtNonSquareGamma) {
  GDPoly g = gd::g(), d = gd::d();
  GDPoly p = g * g * g * g - GDPoly(3) * g * g * d;
  EXPECT_EQ(gd::eval_even(p, R(2), QSqrt3(R(1, 2))), QSqrt3(R(4) - R(3)));
  EXPECT_THROW(gd::eval_even(g, R(2), QSqrt3(0)), Error);
}

TEST(UPoly, DerivativeAndEvaluation) {
  UPoly u = UPoly::u();
  UPoly p = u * u * u - UPoly(R(1, 2)) * u + UPoly(7);
  EXPECT_EQ(p.degree(), 3);
  EXPECT_EQ(p.derivative(), UPoly(3) * u * u - UPoly(R(1, 2)));
  EXPECT_EQ(p.eval(QSqrt3(2)), QSqrt3(R(14)));
}
