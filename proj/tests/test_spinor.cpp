#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "jaynes/spinor.hpp"

using namespace jaynes;
using namespace jaynes::spinor;

namespace {

using R = Rational;
using M = Matrix4<R>;

M scalar(const R& s) { return s * identity4<R>(); }

}  // namespace

TEST(Rational, Arithmetic) {
  EXPECT_EQ(R(2, 4), R(1, 2));
  EXPECT_EQ(R(3, -6), R(-1, 2));
  EXPECT_EQ(R(1, 2) + R(1, 3), R(5, 6));
  EXPECT_EQ(R(1, 2) - R(1, 3), R(1, 6));
  EXPECT_EQ(R(2, 3) * R(9, 4), R(3, 2));
  EXPECT_EQ(R(2, 3) / R(4, 9), R(3, 2));
  EXPECT_EQ(R(0, 5), R(0));
  EXPECT_EQ(R(0, 5).den(), 1);
  EXPECT_EQ(R(-3, 4).to_string(), "-3/4");
  EXPECT_EQ(R(7).to_string(), "7");
  EXPECT_DOUBLE_EQ(R(1, 8).to_double(), 0.125);
  EXPECT_THROW(R(1, 0), ValidationError);
  EXPECT_THROW(R(1) / R(0), ValidationError);
  const auto big = std::numeric_limits<std::int64_t>::max();
  EXPECT_THROW(R(big) + R(1), std::overflow_error);
  EXPECT_THROW(R(big) * R(2), std::overflow_error);
}

TEST(Gamma, CliffordRelationExact) {
  const auto g = build_gamma();
  EXPECT_TRUE(anticommutators_match_metric(g));
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) {
      const R expect = m == n ? R(g.signature[m]) : R(0);
      EXPECT_EQ(half_anticommutator(g, m, n), scalar(expect)) << m << n;
    }
}

TEST(Gamma, FloatingPointAgrees) {
  const auto g = build_gamma<double>();
  EXPECT_TRUE(anticommutators_match_metric(g));
}

TEST(Gamma, RepresentationEntries) {
  const auto g = build_gamma();
  const Complex<R> i{R(0), R(1)}, mi{R(0), R(-1)}, one{R(1), R(0)};
  EXPECT_EQ(g.matrices[0][2][2], (Complex<R>{R(-1), R(0)}));
  EXPECT_EQ(g.matrices[2][0][3], mi);  // sigma_2 upper right
  EXPECT_EQ(g.matrices[2][3][0], mi);  // -sigma_2 lower left: -(i)
  EXPECT_EQ(g.matrices[2][1][2], i);
  EXPECT_EQ(g.matrices[3][0][2], one);
}

TEST(Gamma, WrongSignatureIsDetected) {
  auto g = build_gamma();
  g.signature = {-1, 1, 1, 1};
  EXPECT_FALSE(anticommutators_match_metric(g));
  auto h = build_gamma();
  h.matrices[1] = R(2) * h.matrices[1];
  EXPECT_FALSE(anticommutators_match_metric(h));
}

TEST(Slash, SquareIsMinkowskiNorm) {
  const auto g = build_gamma();
  Rng rng(61);
  for (int t = 0; t < 50; ++t) {
    FourVector<R> k;
    for (auto& c : k.k) c = R(static_cast<std::int64_t>(rng.index(41)) - 20, 1 + static_cast<std::int64_t>(rng.index(7)));
    const M s = dirac_slash(g, k);
    EXPECT_EQ(s * s, scalar(minkowski_square(k)));
  }
}

TEST(Slash, LinearAndAnticommutesToDotProduct) {
  const auto g = build_gamma();
  const FourVector<R> a{{R(1), R(2, 3), R(-1), R(5, 2)}}, b{{R(-3), R(1, 2), R(4), R(0)}};
  EXPECT_EQ(dirac_slash(g, a + b), dirac_slash(g, a) + dirac_slash(g, b));
  // {a/, b/} = 2 (a . b)
  const R dot = a.k[0] * b.k[0] - a.k[1] * b.k[1] - a.k[2] * b.k[2] - a.k[3] * b.k[3];
  const M lhs = dirac_slash(g, a) * dirac_slash(g, b) + dirac_slash(g, b) * dirac_slash(g, a);
  EXPECT_EQ(lhs, scalar(R(2) * dot));
  // Null momentum: slash is nilpotent.
  const FourVector<R> null{{R(5), R(3), R(4), R(0)}};
  EXPECT_EQ(minkowski_square(null), R(0));
  EXPECT_EQ(dirac_slash(g, null) * dirac_slash(g, null), M{});
}
