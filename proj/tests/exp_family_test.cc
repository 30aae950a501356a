//
// Copyright 2026 The dplocalest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <cmath>

#include <gtest/gtest.h>

#include "dplocalest/errors.h"
#include "dplocalest/exp_family.h"

namespace dplocalest {
namespace {

struct Named {
  const char* label;
  FamilyPtr family;
  double lo;
  double hi;
};

std::vector<Named> Families() {
  return {{"gaussian", MakeGaussianFamily(), -3.0, 3.0},
          {"gaussian2", MakeGaussianFamily(2.0), -1.0, 1.0},
          {"poisson", MakePoissonFamily(), -2.0, 3.0},
          {"bernoulli", MakeBernoulliFamily(), -4.0, 4.0}};
}

TEST(ExpFamilyTest, Names) {
  EXPECT_EQ(MakeGaussianFamily()->name(), "gaussian(sigma=1)");
  EXPECT_EQ(MakePoissonFamily()->name(), "poisson");
  EXPECT_EQ(MakeBernoulliFamily()->name(), "bernoulli");
}

TEST(ExpFamilyTest, MakeFamilyValidates) {
  EXPECT_EQ(MakeFamily({"gaussian", {{"sigma", 2.0}}})->Variance(0.0), 4.0);
  EXPECT_THROW(MakeFamily({"cauchy", {}}), ParamError);
  EXPECT_THROW(MakeFamily({"poisson", {{"lambda", 2.0}}}), ParamError);
  EXPECT_THROW(MakeFamily({"gaussian", {{"sigma", -1.0}}}), ParamError);
}

TEST(ExpFamilyTest, ClosedForms) {
  auto g = MakeGaussianFamily(2.0);
  EXPECT_DOUBLE_EQ(g->Mean(0.5), 2.0);
  EXPECT_DOUBLE_EQ(g->LogPartition(0.5), 0.5);
  auto p = MakePoissonFamily();
  EXPECT_DOUBLE_EQ(p->Mean(std::log(4.0)), 4.0);
  EXPECT_DOUBLE_EQ(p->Variance(std::log(4.0)), 4.0);
  auto b = MakeBernoulliFamily();
  EXPECT_DOUBLE_EQ(b->Mean(0.0), 0.5);
  EXPECT_DOUBLE_EQ(b->Variance(0.0), 0.25);
  EXPECT_NEAR(g->Kurtosis(0.3), 3.0, 1e-12);
  EXPECT_NEAR(p->Kurtosis(0.0), 4.0, 1e-12);
}

TEST(ExpFamilyTest, Properties) {
  for (const auto& f : Families()) {
    SCOPED_TRACE(f.label);
    double prev_mean = -kInf;
    for (int i = 0; i <= 20; ++i) {
      double theta = f.lo + (f.hi - f.lo) * i / 20.0;
      EXPECT_GT(f.family->Variance(theta), 0.0);
      double mean = f.family->Mean(theta);
      EXPECT_GT(mean, prev_mean);
      prev_mean = mean;
      EXPECT_NEAR(f.family->Expect(theta, [](double) { return 1.0; }), 1.0, 1e-9);
      EXPECT_NEAR(f.family->Expect(theta, [](double x) { return x; }), mean,
                  1e-8 * std::max(1.0, std::fabs(mean)));
      double prev_tail = 1.0;
      for (double t = mean - 3.0; t <= mean + 3.0; t += 0.25) {
        double tail = f.family->TailProb(theta, t);
        EXPECT_LE(tail, prev_tail + 1e-15);
        EXPECT_LE(tail, f.family->TailProb(theta + 0.1, t) + 1e-15);
        prev_tail = tail;
      }
    }
  }
}

TEST(ExpFamilyTest, DomainChecks) {
  EXPECT_THROW(MakeGaussianFamily()->CheckTheta(kInf), DomainError);
  EXPECT_NO_THROW(MakePoissonFamily()->CheckTheta(-10.0));
  EXPECT_THROW(FamilyMember(MakeBernoulliFamily(), std::nan("")), DomainError);
}

TEST(ExpFamilyTest, DrawMatchesMoments) {
  for (const auto& f : Families()) {
    SCOPED_TRACE(f.label);
    const double theta = 0.5 * (f.lo + f.hi) + 0.3;
    Rng rng(5);
    std::vector<double> x(200000);
    f.family->DrawMany(theta, rng, x.data(), x.size());
    double m = 0.0;
    for (double v : x) m += v;
    m /= x.size();
    double sd = std::sqrt(f.family->Variance(theta) / x.size());
    EXPECT_NEAR(m, f.family->Mean(theta), 5.0 * sd);
  }
}

TEST(KappaTest, GaussianIsCapped) {
  EXPECT_DOUBLE_EQ(Kappa(*MakeGaussianFamily(), 0.0, 10.0).radius, 10.0);
}

TEST(KappaTest, PoissonIsLn2) {
  EXPECT_NEAR(Kappa(*MakePoissonFamily(), 0.0, 10.0).radius, std::log(2.0), 1e-6);
  EXPECT_NEAR(Kappa(*MakePoissonFamily(), 2.0, 10.0).radius, std::log(2.0), 1e-6);
}

TEST(KappaTest, ZeroCapAndErrors) {
  EXPECT_EQ(Kappa(*MakePoissonFamily(), 0.0, 0.0).radius, 0.0);
  EXPECT_THROW(Kappa(*MakeGaussianFamily(), kInf, 1.0), DomainError);
}

TEST(TvTest, Examples) {
  auto g = MakeGaussianFamily();
  EXPECT_EQ(TvDistance({g, 0.0}, {g, 0.0}), 0.0);
  const double oracle = 2.0 * (1.0 - 0.5 * std::erfc(0.5 / std::sqrt(2.0))) - 1.0;
  EXPECT_NEAR(TvDistance({g, 0.0}, {g, 1.0}), oracle, 1e-10);
  EXPECT_NEAR(TvDistance({g, 0.0}, {g, 1.0}), 0.3829, 1e-4);
  auto b = MakeBernoulliFamily();
  auto logit = [](double p) { return std::log(p / (1.0 - p)); };
  for (double p : {0.1, 0.3, 0.6}) {
    EXPECT_NEAR(TvDistance({b, logit(p)}, {b, logit(p + 0.2)}), 0.2, 1e-12);
  }
}

TEST(TvTest, QuadratureCrossCheck) {
  auto g = MakeGaussianFamily();
  FamilyMember p(g, 0.0), q(g, 1.0);
  // LogDensity is relative to the N(0, 1) base measure.
  auto phi = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
  double tv = 0.5 * IntegrateSegments(
                        [&](double x) {
                          return phi(x) * std::fabs(std::exp(p.LogDensity(x)) -
                                                    std::exp(q.LogDensity(x)));
                        },
                        -15.0, 16.0, 62);
  EXPECT_NEAR(TvDistance(p, q), tv, 1e-8);
}

TEST(TvTest, FamilyMismatch) {
  EXPECT_THROW(TvDistance({MakeGaussianFamily(), 0.0}, {MakePoissonFamily(), 0.0}),
               FamilyMismatch);
  EXPECT_THROW(
      HellingerDistance({MakeGaussianFamily(), 0.0}, {MakeGaussianFamily(2.0), 0.0}),
      FamilyMismatch);
}

TEST(HellingerTest, Examples) {
  auto g = MakeGaussianFamily();
  EXPECT_NEAR(HellingerDistance({g, 0.3}, {g, 0.3}), 0.0, 1e-12);
  double h = HellingerDistance({g, 0.0}, {g, 1.0});
  EXPECT_NEAR(h * h, 2.0 * (1.0 - std::exp(-1.0 / 8.0)), 1e-4);
  auto p = MakePoissonFamily();
  EXPECT_EQ(HellingerDistance({p, 0.0}, {p, 1.0}), HellingerDistance({p, 1.0}, {p, 0.0}));
}

TEST(L1InformationTest, Examples) {
  auto g = MakeGaussianFamily();
  EXPECT_EQ(L1InformationAt(*g, 0.0, 0.0).value, 0.0);
  EXPECT_NEAR(L1InformationAt(*g, 0.0, 0.3829).value, 0.5, 1e-3);
  for (double theta : {-1.0, 0.0, 2.0}) {
    for (double beta : {1e-3, 1e-2}) {
      double ratio =
          L1InformationAt(*g, theta, beta).value / (beta * std::sqrt(2.0 * M_PI) / 2.0);
      EXPECT_GE(ratio, 0.95);
      EXPECT_LE(ratio, 1.05);
    }
  }
  EXPECT_THROW(L1InformationAt(*g, 0.0, 1.0), ParamError);
  EXPECT_THROW(L1InformationAt(*g, 0.0, -0.1), ParamError);
}

TEST(L1InformationTest, BoundaryHit) {
  // TV to Bernoulli limits stays below 0.99 on one side of p = 0.995.
  auto b = MakeBernoulliFamily();
  L1Information info = L1InformationAt(*b, std::log(0.995 / 0.005), 0.99);
  EXPECT_TRUE(info.boundary_hit);
}

TEST(LocalRateTest, Examples) {
  auto g = MakeGaussianFamily();
  EXPECT_DOUBLE_EQ(LocalRateFormula(*g, 0.0, 100, 1.0), 0.1);
  EXPECT_DOUBLE_EQ(LocalRateFormula(*g, 0.0, 100, 0.01), 1.0);
  EXPECT_NEAR(LocalRateFormula(*MakePoissonFamily(), std::log(4.0), 10000, 1.0),
              0.005, 1e-15);
}

TEST(ConcentrationTest, Examples) {
  auto g = MakeGaussianFamily();
  EXPECT_NEAR(ConcentrationThreshold(*g, 0.0, 2.0 * std::exp(-4.0), kInf), 4.0, 1e-12);
  double expected = 2.0 * std::sqrt(std::log(40.0)) + std::log(40.0) / std::log(2.0);
  EXPECT_NEAR(ConcentrationThreshold(*MakePoissonFamily(), 0.0, 0.05, std::log(2.0)),
              expected, 1e-12);
  EXPECT_NEAR(expected, 9.1632, 1e-4);
  double prev = kInf;
  for (double beta : {0.1, 0.5, 0.9, 0.999}) {
    double thr = ConcentrationThreshold(*MakePoissonFamily(), 0.0, beta, 1.0);
    EXPECT_LT(thr, prev);
    prev = thr;
  }
  EXPECT_GT(prev, 2.0 * std::sqrt(std::log(2.0)) + std::log(2.0));
  EXPECT_THROW(ConcentrationThreshold(*g, 0.0, 1.0, 1.0), ParamError);
  EXPECT_THROW(ConcentrationThreshold(*g, 0.0, 0.5, 0.0), ParamError);
}

}  // namespace
}  // namespace dplocalest
