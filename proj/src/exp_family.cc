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

#include "dplocalest/exp_family.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "dplocalest/errors.h"

namespace dplocalest {
namespace {

std::string FormatDouble(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

class GaussianFamily final : public ExpFamily {
 public:
  explicit GaussianFamily(double sigma) : sigma_(sigma), s2_(sigma * sigma) {}

  std::string name() const override {
    return "gaussian(sigma=" + FormatDouble(sigma_) + ")";
  }
  double LogPartition(double theta) const override {
    return 0.5 * s2_ * theta * theta;
  }
  double Mean(double theta) const override { return s2_ * theta; }
  double Variance(double) const override { return s2_; }
  Interval Domain() const override { return {}; }
  Interval SearchDomain() const override { return {-1e6 / s2_, 1e6 / s2_}; }
  Interval MeanRange() const override { return {}; }

  double Draw(double theta, Rng& rng) const override {
    std::normal_distribution<double> normal(Mean(theta), sigma_);
    return normal(rng);
  }
  void DrawMany(double theta, Rng& rng, double* out,
                std::size_t n) const override {
    std::normal_distribution<double> normal(Mean(theta), sigma_);
    for (std::size_t i = 0; i < n; ++i) out[i] = normal(rng);
  }

  double TailProb(double theta, double t) const override {
    return NormalUpperTail((t - Mean(theta)) / sigma_);
  }
  double PointMass(double, double) const override { return 0.0; }

  double Expect(double theta,
                const std::function<double(double)>& g) const override {
    const double mu = Mean(theta);
    const double s = sigma_;
    constexpr double kInvSqrt2Pi = 0.39894228040143267794;
    auto integrand = [&](double z) {
      return g(mu + s * z) * kInvSqrt2Pi * std::exp(-0.5 * z * z);
    };
    return IntegrateSegments(integrand, -kWindow, kWindow,
                             static_cast<int>(2 * kWindow));
  }

  double Kurtosis(double) const override { return 3.0; }

 private:
  static constexpr double kWindow = 14.0;
  double sigma_;
  double s2_;
};

class PoissonFamily final : public ExpFamily {
 public:
  std::string name() const override { return "poisson"; }
  double LogPartition(double theta) const override { return std::exp(theta); }
  double Mean(double theta) const override { return std::exp(theta); }
  double Variance(double theta) const override { return std::exp(theta); }
  Interval Domain() const override { return {}; }
  Interval SearchDomain() const override { return {-30.0, 20.0}; }
  Interval MeanRange() const override { return {0.0, kInf}; }

  double Draw(double theta, Rng& rng) const override {
    std::poisson_distribution<long long> poisson(std::exp(theta));
    return static_cast<double>(poisson(rng));
  }
  void DrawMany(double theta, Rng& rng, double* out,
                std::size_t n) const override {
    std::poisson_distribution<long long> poisson(std::exp(theta));
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = static_cast<double>(poisson(rng));
    }
  }

  double TailProb(double theta, double t) const override {
    if (t < 0.0) return 1.0;
    const double lambda = std::exp(theta);
    const double k = std::floor(t) + 1.0;
    if (lambda <= 0.0) return 0.0;
    return boost::math::gamma_p(k, lambda);
  }

  double PointMass(double theta, double t) const override {
    if (t < 0.0 || t != std::floor(t)) return 0.0;
    return std::exp(LogPmf(t, theta));
  }

  double Expect(double theta,
                const std::function<double(double)>& g) const override {
    const double lambda = std::exp(theta);
    const double spread = 14.0 * std::sqrt(lambda) + 40.0;
    const double k_lo = std::max(0.0, std::floor(lambda - spread));
    const double k_hi = std::ceil(lambda + spread);
    double total = 0.0;
    for (double k = k_lo; k <= k_hi; k += 1.0) {
      total += g(k) * std::exp(LogPmf(k, theta));
    }
    return total;
  }

  double Kurtosis(double theta) const override {
    return 3.0 + std::exp(-theta);
  }

 private:
  static double LogPmf(double k, double theta) {
    return k * theta - std::exp(theta) - std::lgamma(k + 1.0);
  }
};

class BernoulliFamily final : public ExpFamily {
 public:
  std::string name() const override { return "bernoulli"; }
  double LogPartition(double theta) const override {
    return std::max(theta, 0.0) + std::log1p(std::exp(-std::fabs(theta)));
  }
  double Mean(double theta) const override { return Sigmoid(theta); }
  double Variance(double theta) const override {
    double p = Sigmoid(theta);
    return p * (1.0 - p);
  }
  Interval Domain() const override { return {}; }
  Interval SearchDomain() const override { return {-40.0, 40.0}; }
  Interval MeanRange() const override { return {0.0, 1.0}; }

  double Draw(double theta, Rng& rng) const override {
    return rng.Uniform() < Sigmoid(theta) ? 1.0 : 0.0;
  }

  double TailProb(double theta, double t) const override {
    if (t < 0.0) return 1.0;
    if (t < 1.0) return Sigmoid(theta);
    return 0.0;
  }
  double PointMass(double theta, double t) const override {
    if (t == 0.0) return 1.0 - Sigmoid(theta);
    if (t == 1.0) return Sigmoid(theta);
    return 0.0;
  }

  double Expect(double theta,
                const std::function<double(double)>& g) const override {
    double p = Sigmoid(theta);
    return (1.0 - p) * g(0.0) + p * g(1.0);
  }

  double Kurtosis(double theta) const override {
    double v = Variance(theta);
    return (1.0 - 3.0 * v) / v;
  }

 private:
  static double Sigmoid(double theta) {
    if (theta >= 0.0) return 1.0 / (1.0 + std::exp(-theta));
    double e = std::exp(theta);
    return e / (1.0 + e);
  }
};

void RequireSameFamily(const FamilyMember& p, const FamilyMember& q) {
  if (p.family().name() != q.family().name()) {
    throw FamilyMismatch("members of " + p.family().name() + " and " +
                         q.family().name());
  }
}

}  // namespace

void ExpFamily::DrawMany(double theta, Rng& rng, double* out,
                         std::size_t n) const {
  for (std::size_t i = 0; i < n; ++i) out[i] = Draw(theta, rng);
}

void ExpFamily::CheckTheta(double theta) const {
  if (!std::isfinite(theta) || !Domain().Contains(theta)) {
    throw DomainError(name() + ": theta outside the natural parameter space");
  }
}

FamilyPtr MakeGaussianFamily(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ParamError("gaussian: sigma must be positive");
  }
  return std::make_shared<GaussianFamily>(sigma);
}

FamilyPtr MakePoissonFamily() { return std::make_shared<PoissonFamily>(); }

FamilyPtr MakeBernoulliFamily() { return std::make_shared<BernoulliFamily>(); }

FamilyPtr MakeFamily(const FamilyConfig& config) {
  auto reject_extra = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : config.params) {
      bool ok = std::any_of(allowed.begin(), allowed.end(),
                            [&](const char* a) { return key == a; });
      if (!ok) throw ParamError(config.family + ": unknown parameter " + key);
    }
  };
  if (config.family == "gaussian") {
    reject_extra({"sigma"});
    auto it = config.params.find("sigma");
    return MakeGaussianFamily(it == config.params.end() ? 1.0 : it->second);
  }
  if (config.family == "poisson") {
    reject_extra({});
    return MakePoissonFamily();
  }
  if (config.family == "bernoulli") {
    reject_extra({});
    return MakeBernoulliFamily();
  }
  throw ParamError("unknown family '" + config.family + "'");
}

FamilyMember::FamilyMember(FamilyPtr family, double theta)
    : family_(std::move(family)), theta_(theta) {
  if (family_ == nullptr) throw ParamError("FamilyMember: null family");
  family_->CheckTheta(theta_);
}

double FamilyMember::LogDensity(double x) const {
  return theta_ * x - family_->LogPartition(theta_);
}

double FamilyMember::Draw(Rng& rng) const { return family_->Draw(theta_, rng); }

Sample FamilyMember::DrawSample(std::size_t n, Rng& rng) const {
  std::vector<double> out(n);
  family_->DrawMany(theta_, rng, out.data(), n);
  return Sample(std::move(out));
}

double FamilyMember::Expect(const std::function<double(double)>& g) const {
  return family_->Expect(theta_, g);
}

std::string FamilyMember::ComparisonClass() const { return family_->name(); }

bool FamilyMember::SameLaw(const Distribution& other) const {
  const auto* m = dynamic_cast<const FamilyMember*>(&other);
  return m != nullptr && m->family_->name() == family_->name() &&
         m->theta_ == theta_;
}

std::string FamilyMember::Describe() const {
  return family_->name() + "[theta=" + FormatDouble(theta_) + "]";
}

KappaRadius Kappa(const ExpFamily& family, double theta,
                  std::optional<double> search_cap) {
  family.CheckTheta(theta);
  const Interval domain = family.Domain();
  double cap = search_cap.value_or(
      std::min({theta - domain.lo, domain.hi - theta, 1e6}));
  if (!(cap >= 0.0)) throw ParamError("Kappa: search cap must be nonnegative");
  if (cap == 0.0) return {theta, 0.0};

  const double v0 = family.Variance(theta);
  auto holds = [&](double r) {
    constexpr int kGrid = 64;
    for (int i = 0; i < kGrid; ++i) {
      double other = theta - r + 2.0 * r * i / (kGrid - 1);
      if (!domain.Contains(other)) return false;
      double ratio = v0 / family.Variance(other);
      if (!(ratio >= 0.5 && ratio <= 2.0)) return false;
    }
    return true;
  };
  if (holds(cap)) return {theta, cap};
  double lo = 0.0;
  double hi = cap;
  while (hi - lo > kThetaTolerance * std::max(1.0, lo)) {
    double mid = 0.5 * (lo + hi);
    if (holds(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {theta, lo};
}

double TvDistance(const FamilyMember& p, const FamilyMember& q) {
  RequireSameFamily(p, q);
  double t0 = p.theta();
  double t1 = q.theta();
  if (t0 == t1) return 0.0;
  if (t0 > t1) std::swap(t0, t1);
  const ExpFamily& family = p.family();
  const double m =
      (family.LogPartition(t1) - family.LogPartition(t0)) / (t1 - t0);
  double tv = family.TailProb(t1, m) - family.TailProb(t0, m);
  return std::clamp(tv, 0.0, 1.0);
}

double HellingerDistance(const FamilyMember& p, const FamilyMember& q) {
  RequireSameFamily(p, q);
  double t0 = p.theta();
  double t1 = q.theta();
  if (t0 == t1) return 0.0;
  if (t0 > t1) std::swap(t0, t1);
  const ExpFamily& family = p.family();
  const double shift = family.LogPartition(t1) - family.LogPartition(t0);
  const double dt = t1 - t0;
  double bc = family.Expect(
      t0, [&](double x) { return std::exp(0.5 * (dt * x - shift)); });
  return std::sqrt(std::max(0.0, 2.0 * (1.0 - bc)));
}

L1Information L1InformationAt(const ExpFamily& family, double theta,
                              double beta) {
  family.CheckTheta(theta);
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw ParamError("L1Information: beta must lie in [0, 1)");
  }
  L1Information out;
  if (beta == 0.0) return out;

  auto family_ptr = std::shared_ptr<const ExpFamily>(&family, [](auto*) {});
  const FamilyMember base(family_ptr, theta);
  const Interval search = family.SearchDomain();
  const Interval domain = family.Domain();

  auto solve = [&](double direction) {
    const double reach =
        direction > 0 ? search.hi - theta : theta - search.lo;
    auto tv = [&](double h) {
      return TvDistance(base, FamilyMember(family_ptr, theta + direction * h));
    };
    if (tv(reach) < beta) {
      out.boundary_hit = true;
      return direction > 0 ? domain.hi - theta : theta - domain.lo;
    }
    return SolveIncreasing(tv, beta, 0.0, {0.0, reach}).x;
  };
  out.h_plus = solve(1.0);
  out.h_minus = solve(-1.0);
  out.value = 0.5 * std::max(out.h_plus, out.h_minus);
  return out;
}

double LocalRateFormula(const ExpFamily& family, double theta, double n,
                        double eps) {
  family.CheckTheta(theta);
  if (!(n >= 1.0)) throw ParamError("LocalRateFormula: n must be >= 1");
  if (!(eps > 0.0)) throw ParamError("LocalRateFormula: eps must be positive");
  return 1.0 /
         (std::sqrt(family.Variance(theta)) * std::min(n * eps, std::sqrt(n)));
}

double ConcentrationThreshold(const ExpFamily& family, double theta,
                              double beta, double kappa) {
  family.CheckTheta(theta);
  if (!(beta > 0.0 && beta < 1.0)) {
    throw ParamError("ConcentrationThreshold: beta must lie in (0, 1)");
  }
  if (!(kappa > 0.0)) {
    throw ParamError("ConcentrationThreshold: kappa must be positive");
  }
  const double log_term = std::log(2.0 / beta);
  return 2.0 * std::sqrt(family.Variance(theta)) * std::sqrt(log_term) +
         log_term / kappa;
}

}  // namespace dplocalest
