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

#ifndef DPLOCALEST_EXP_FAMILY_H_
#define DPLOCALEST_EXP_FAMILY_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "dplocalest/distribution.h"
#include "dplocalest/numerics.h"
#include "dplocalest/rng.h"

namespace dplocalest {

// One-parameter exponential family with densities exp(theta * x - A(theta))
// with respect to a fixed base measure.
class ExpFamily {
 public:
  virtual ~ExpFamily() = default;

  // Identifier including any fixed parameters, e.g. "gaussian(sigma=1)".
  virtual std::string name() const = 0;

  virtual double LogPartition(double theta) const = 0;
  virtual double Mean(double theta) const = 0;
  virtual double Variance(double theta) const = 0;

  // Natural parameter space, an open interval.
  virtual Interval Domain() const = 0;

  // Bounded sub-interval of Domain() used to confine root searches.
  virtual Interval SearchDomain() const = 0;

  // Open interval of attainable means.
  virtual Interval MeanRange() const = 0;

  virtual double Draw(double theta, Rng& rng) const = 0;
  virtual void DrawMany(double theta, Rng& rng, double* out,
                        std::size_t n) const;

  // P_theta(x > t).
  virtual double TailProb(double theta, double t) const = 0;

  // P_theta(x = t); zero for continuous families.
  virtual double PointMass(double theta, double t) const = 0;

  // E_theta[g(x)].
  virtual double Expect(double theta,
                        const std::function<double(double)>& g) const = 0;

  // Standardized fourth central moment at theta.
  virtual double Kurtosis(double theta) const = 0;

  // Throws DomainError unless theta lies in Domain().
  void CheckTheta(double theta) const;
};

using FamilyPtr = std::shared_ptr<const ExpFamily>;

FamilyPtr MakeGaussianFamily(double sigma = 1.0);
FamilyPtr MakePoissonFamily();
FamilyPtr MakeBernoulliFamily();

struct FamilyConfig {
  std::string family;
  std::map<std::string, double> params;
};

// Throws ParamError on an unknown family name or parameter.
FamilyPtr MakeFamily(const FamilyConfig& config);

class FamilyMember final : public Distribution {
 public:
  FamilyMember(FamilyPtr family, double theta);

  const ExpFamily& family() const { return *family_; }
  const FamilyPtr& family_ptr() const { return family_; }
  double theta() const { return theta_; }
  double mean() const { return family_->Mean(theta_); }

  double LogDensity(double x) const override;
  double Draw(Rng& rng) const override;
  Sample DrawSample(std::size_t n, Rng& rng) const override;
  double Expect(const std::function<double(double)>& g) const override;
  std::string ComparisonClass() const override;
  bool SameLaw(const Distribution& other) const override;
  std::string Describe() const override;

 private:
  FamilyPtr family_;
  double theta_;
};

struct KappaRadius {
  double theta = 0.0;
  double radius = 0.0;
};

// Largest r <= search_cap with Variance(theta)/Variance(theta') in [1/2, 2]
// for every theta' within r of theta. The default cap is the distance to
// the nearest domain endpoint, at most 1e6.
KappaRadius Kappa(const ExpFamily& family, double theta,
                  std::optional<double> search_cap = std::nullopt);

// Total variation distance between two members of one family.
double TvDistance(const FamilyMember& p, const FamilyMember& q);

// Hellinger distance, normalized so that H^2 = 2 (1 - BC) where BC is the
// Bhattacharyya coefficient. The maximum value is sqrt(2).
double HellingerDistance(const FamilyMember& p, const FamilyMember& q);

struct L1Information {
  double value = 0.0;
  // Per-direction solutions h with TV(P_theta, P_{theta +- h}) = beta.
  double h_plus = 0.0;
  double h_minus = 0.0;
  // Set when TV stays below beta up to the domain boundary in a direction.
  bool boundary_hit = false;
};

// Half the largest parameter distance reachable within TV distance beta.
L1Information L1InformationAt(const ExpFamily& family, double theta,
                              double beta);

// 1 / (sqrt(A''(theta)) * min(n eps, sqrt(n))).
double LocalRateFormula(const ExpFamily& family, double theta, double n,
                        double eps);

// 2 sqrt(A''(theta)) sqrt(ln(2/beta)) + ln(2/beta) / kappa.
double ConcentrationThreshold(const ExpFamily& family, double theta,
                              double beta, double kappa);

}  // namespace dplocalest

#endif  // DPLOCALEST_EXP_FAMILY_H_
