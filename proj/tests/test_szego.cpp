#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "spherepoly/szego.hpp"

using namespace spherepoly;

namespace {

const double kTwoOverE = 2.0 / std::exp(1.0);

}  // namespace

TEST(Szego, CounterexampleReport) {
  const SzegoReport rep = summary_report(preset("counterexample"), 27);
  EXPECT_LE(rep.max_gamma, 1e-9);
  EXPECT_NEAR(rep.szego_quantity(), 1.0, 1e-9);
  EXPECT_NEAR(rep.entropy_rhs, kTwoOverE, 1e-8);
  EXPECT_EQ(rep.verdict, Verdict::strict_gap);
  EXPECT_NEAR(rep.gap, 1.0 - kTwoOverE, 1e-6);
  EXPECT_LE(rep.first_residual, 1e-8);
  EXPECT_LE(rep.second_residual, 1e-9);
  EXPECT_NO_THROW(counterexample_report());
}

TEST(Szego, LebesgueReport) {
  const SzegoReport rep = summary_report(preset("lebesgue"), 27);
  EXPECT_NEAR(rep.szego_quantity(), 1.0, 1e-9);
  EXPECT_NEAR(rep.entropy_rhs, 1.0, 1e-9);
  EXPECT_EQ(rep.verdict, Verdict::equality_certified);
  ASSERT_TRUE(rep.sv_slack.has_value());
  EXPECT_NEAR(*rep.sv_slack, 0.0, 1e-12);
}

TEST(Szego, CircleReportMatchesClassicalProduct) {
  const SzegoReport rep = summary_report(preset("circle-calibration"), 20);
  const oracle::CircleRecursion rec = oracle::szego_recursion(fixtures::circle_moment, 20);
  double prod = 1.0;
  for (int k = 0; k < 20; ++k) prod *= 1.0 - std::norm(rec.alpha[k]);
  EXPECT_NEAR(rep.szego_quantity(), prod, 1e-9);
  EXPECT_NEAR(rep.entropy_rhs, 0.8, 1e-8);
  for (const SecondListRow& row : rep.second_list) EXPECT_GE(row.cd_sum, 0.8 - 1e-12);
  EXPECT_EQ(rep.verdict, Verdict::equality_certified);
}

TEST(Szego, SecondListCoherenceOnAllSpecs) {
  for (const std::string& name : fixtures::test_presets()) {
    const SzegoReport rep = summary_report(preset(name), 20);
    EXPECT_LE(rep.second_residual, 1e-9) << name;
    EXPECT_LE(rep.first_residual, 1e-8) << name;
    for (const SecondListRow& row : rep.second_list) {
      EXPECT_NEAR(row.product, row.sharp, 1e-9 * row.product);
      EXPECT_NEAR(row.product, row.cd_sum, 1e-9 * row.product);
      EXPECT_NEAR(row.product, row.lambda_inverse, 1e-9 * row.product);
    }
  }
}

TEST(Szego, FirstListResidualExamples) {
  for (const char* name : {"lebesgue", "counterexample", "stable-demo"})
    for (std::uint64_t r = 1; r <= 20; ++r) EXPECT_LE(first_list_residual(preset(name), shortlex_unrank(r, 2)), 1e-8) << name << " " << r;
  EXPECT_THROW(first_list_residual(preset("lebesgue"), MultiIndex{0, 0}), std::invalid_argument);
}

TEST(Szego, CandidateExamples) {
  EXPECT_THROW(candidate_f_from_g(SparsePolynomial(2, {{MultiIndex{1, 0}, 1.0}})), std::domain_error);
  const RationalCandidate one = candidate_f_from_g(SparsePolynomial::constant(2, 1.0));
  const Point z{cplx(0.3, 0.1), cplx(-0.2, 0.4)};
  EXPECT_NEAR(std::abs(one(z) - 1.0), 0.0, 1e-15);
  const RationalCandidate f = candidate_f_from_g(preset("stable-mean").weight.g);
  EXPECT_NEAR(std::abs(f(z) - 2.0 / (2.0 + z[0])), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(f(Point(2, 0.0)) - 1.0), 0.0, 1e-15);
}

TEST(Szego, HypothesisExamples) {
  const MeasureSpec mean = preset("stable-mean");
  EXPECT_GE(check_sv_hypothesis(mean, candidate_f_from_g(mean.weight.g)), -1e-8);
  const MeasureSpec sigma = preset("lebesgue");
  EXPECT_NEAR(check_sv_hypothesis(sigma, RationalCandidate::one(2)), 0.0, 1e-12);
  const MeasureSpec cx = preset("counterexample");
  EXPECT_NEAR(check_sv_hypothesis(cx, RationalCandidate::one(2)), kTwoOverE - 1.0, 1e-8);
}

TEST(Szego, StableCheckExamples) {
  EXPECT_GE(stable_check(preset("stable-mean").weight.g), 1.0 / 3.0 - 1e-12);
  EXPECT_EQ(stable_check(SparsePolynomial(2, {{MultiIndex{1, 0}, 1.0}})), 0.0);
  const MeasureSpec demo = preset("stable-demo");
  const double g0 = std::abs(demo.weight.g.at_origin());
  EXPECT_GE(stable_check(demo.weight.g) / g0, 0.5);
}

TEST(Szego, Verdicts) {
  EXPECT_EQ(summary_report(preset("stable-demo"), 20).verdict, Verdict::equality_certified);
  EXPECT_EQ(summary_report(preset("stable-mean"), 20).verdict, Verdict::equality_certified);
  EXPECT_EQ(summary_report(preset("half-atom"), 20).verdict, Verdict::equality_certified);
  // g = z1 + z2 has no candidate and a nonstationary tail.
  MeasureSpec spec;
  spec.d = 2;
  spec.weight.g = SparsePolynomial(2, {{MultiIndex{1, 0}, 1.0}, {MultiIndex{0, 1}, 0.5}});
  const SzegoReport rep = summary_report(spec, 20);
  EXPECT_TRUE(rep.verdict != Verdict::equality_certified);
  EXPECT_FALSE(rep.sv_slack.has_value());
}

TEST(Szego, AtomsLeaveEntropyUnchanged) {
  MeasureSpec ac = preset("half-atom");
  const double with = entropy(ac).log_integral;
  ac.atoms.clear();
  EXPECT_NEAR(entropy(ac).log_integral, with, 1e-14);
  const SzegoReport rep = summary_report(preset("half-atom"), 14);
  ASSERT_TRUE(rep.ac_minimizer_norm.has_value());
  EXPECT_GE(rep.final_second().cd_sum, *rep.ac_minimizer_norm - 1e-12);
}
