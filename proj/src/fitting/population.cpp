/*
 * Copyright 2026 The CoAX Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "coax/fitting/population.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "coax/common/error.hpp"

namespace coax::fitting {

using cognitive::Strategy;

namespace {

const boost::math::normal kStandardNormal;

void ValidateMoments(const std::optional<Moments>& m, const char* name) {
  if (m && (!(m->sd >= 0.0) || !std::isfinite(m->mean))) {
    throw ValidationError(std::string("invalid moments for ") + name);
  }
}

double Draw(const std::optional<Moments>& m, const cognitive::Range& range,
            Rng& rng) {
  if (!m) return range.Mid();
  return SampleTruncatedNormal(*m, range.lo, range.hi, rng);
}

Json MomentsJson(const std::optional<Moments>& m) {
  return m ? Json{{"mean", m->mean}, {"sd", m->sd}} : Json(nullptr);
}

std::optional<Moments> ReadMoments(const Json& json, const char* key) {
  if (!json.contains(key) || json.at(key).is_null()) return std::nullopt;
  return Moments{json.at(key).at("mean").get<double>(),
                 json.at(key).at("sd").get<double>()};
}

}  // namespace

void PopulationSpec::Validate() const {
  double total = 0.0;
  for (const auto& [strategy, weight] : prevalence) {
    if (!(weight >= 0.0)) throw ValidationError("negative prevalence weight");
    total += weight;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("prevalence weights must sum to 1");
  }
  for (const auto& [strategy, m] : parameters) {
    ValidateMoments(m.alpha, "alpha");
    ValidateMoments(m.k, "k");
    ValidateMoments(m.rho, "rho");
    ValidateMoments(m.zeta, "zeta");
  }
}

double SampleTruncatedNormal(const Moments& moments, double lo, double hi,
                             Rng& rng) {
  if (moments.sd == 0.0) return std::clamp(moments.mean, lo, hi);
  // Work on the side of the mean where the CDF keeps its precision.
  const bool mirror = (lo - moments.mean) > 0.0;
  const double a = (mirror ? moments.mean - hi : lo - moments.mean) / moments.sd;
  const double b = (mirror ? moments.mean - lo : hi - moments.mean) / moments.sd;
  const double fa = boost::math::cdf(kStandardNormal, a);
  const double fb = boost::math::cdf(kStandardNormal, b);
  double z;
  if (fb - fa <= 1e-300) {
    z = a;
  } else {
    const double u = std::clamp(fa + Uniform01(rng) * (fb - fa), 1e-300, 1.0 - 1e-16);
    z = std::clamp(boost::math::quantile(kStandardNormal, u), a, b);
  }
  const double x = mirror ? moments.mean - moments.sd * z : moments.mean + moments.sd * z;
  return std::clamp(x, lo, hi);
}

double TruncatedNormalMean(const Moments& moments, double lo, double hi) {
  if (moments.sd == 0.0) return std::clamp(moments.mean, lo, hi);
  const double a = (lo - moments.mean) / moments.sd;
  const double b = (hi - moments.mean) / moments.sd;
  const double z = boost::math::cdf(kStandardNormal, b) - boost::math::cdf(kStandardNormal, a);
  return moments.mean + moments.sd *
                            (boost::math::pdf(kStandardNormal, a) -
                             boost::math::pdf(kStandardNormal, b)) /
                            z;
}

std::vector<cognitive::CognitiveParams> SamplePopulation(const PopulationSpec& spec,
                                                         size_t size, uint64_t seed) {
  spec.Validate();
  std::vector<std::pair<Strategy, double>> weights(spec.prevalence.begin(),
                                                   spec.prevalence.end());
  std::vector<cognitive::CognitiveParams> population;
  population.reserve(size);
  const cognitive::Range k_cells{spec.box.k.lo - 0.5, spec.box.k.hi + 0.5};
  for (size_t i = 0; i < size; ++i) {
    Rng rng(DeriveSeed(seed, {i}));
    double u = Uniform01(rng);
    Strategy strategy = weights.back().first;
    for (const auto& [s, w] : weights) {
      if (u < w) {
        strategy = s;
        break;
      }
      u -= w;
    }
    cognitive::CognitiveParams params = cognitive::MidBoxParams(strategy, spec.box);
    const auto it = spec.parameters.find(strategy);
    const ParameterMoments moments = it == spec.parameters.end() ? ParameterMoments{} : it->second;
    params.alpha = Draw(moments.alpha, spec.box.alpha, rng);
    params.rho = Draw(moments.rho, spec.box.rho, rng);
    params.zeta = Draw(moments.zeta, spec.box.zeta, rng);
    if (moments.k) {
      const double k = Draw(moments.k, k_cells, rng);
      params.k = static_cast<int>(std::clamp(std::round(k), spec.box.k.lo, spec.box.k.hi));
    }
    population.push_back(params);
  }
  return population;
}

std::map<Strategy, ParameterMoments> PublishedParameterMoments() {
  std::map<Strategy, ParameterMoments> m;
  m[Strategy::kAttributionSum] = {std::nullopt, Moments{3.750, 1.073},
                                  Moments{-2.567, 1.149}, Moments{2.828, 2.356}};
  m[Strategy::kImportanceCategorization] = {Moments{31.365, 35.320}, Moments{2.772, 1.661},
                                            Moments{-2.284, 1.508}, std::nullopt};
  m[Strategy::kSalientFeatures] = {Moments{28.608, 35.173}, Moments{2.253, 1.160},
                                   Moments{-2.624, 1.447}, std::nullopt};
  m[Strategy::kSensitiveFeatures] = {Moments{24.221, 31.737}, Moments{2.948, 1.578},
                                     Moments{-2.337, 1.304}, std::nullopt};
  return m;
}

std::map<Strategy, double> PublishedPrevalence(XaiType xai_type, TestCondition condition) {
  std::map<Strategy, double> effortful;
  const bool with = condition == TestCondition::kWithXai;
  switch (xai_type) {
    case XaiType::kNone:
      effortful[Strategy::kSensitiveFeatures] = 1.0;
      break;
    case XaiType::kAttribution:
      if (with) {
        effortful[Strategy::kAttributionSum] = 1.0;
      } else {
        effortful[Strategy::kAttributionSum] = 0.485;
        effortful[Strategy::kSensitiveFeatures] = 0.515;
      }
      break;
    case XaiType::kImportance:
      if (with) {
        effortful[Strategy::kAttributionSum] = 0.38;
        effortful[Strategy::kSensitiveFeatures] = 0.285;
        effortful[Strategy::kSalientFeatures] = 0.275;
        effortful[Strategy::kImportanceCategorization] = 0.05;
      } else {
        effortful[Strategy::kAttributionSum] = 0.40;
        effortful[Strategy::kSensitiveFeatures] = 0.30;
        effortful[Strategy::kSalientFeatures] = 0.30;
      }
      break;
  }
  double total = 0.0;
  for (const auto& [s, w] : effortful) total += w;
  std::map<Strategy, double> prevalence;
  for (const auto& [s, w] : effortful) {
    prevalence[s] = (1.0 - kPublishedRandomShare) * w / total;
  }
  prevalence[Strategy::kRandom] = kPublishedRandomShare;
  return prevalence;
}

PopulationSpec PublishedPopulationSpec(XaiType xai_type, TestCondition condition) {
  PopulationSpec spec;
  spec.prevalence = PublishedPrevalence(xai_type, condition);
  spec.parameters = PublishedParameterMoments();
  return spec;
}

PopulationSpec SingleStrategySpec(Strategy strategy, const ParameterMoments& moments) {
  PopulationSpec spec;
  spec.prevalence[strategy] = 1.0;
  spec.parameters[strategy] = moments;
  return spec;
}

Json ToJson(const PopulationSpec& spec) {
  Json prevalence = Json::object();
  for (const auto& [s, w] : spec.prevalence) prevalence[cognitive::ToString(s)] = w;
  Json parameters = Json::object();
  for (const auto& [s, m] : spec.parameters) {
    parameters[cognitive::ToString(s)] = {{"alpha", MomentsJson(m.alpha)},
                                          {"k", MomentsJson(m.k)},
                                          {"rho", MomentsJson(m.rho)},
                                          {"zeta", MomentsJson(m.zeta)}};
  }
  auto range = [](const cognitive::Range& r) { return Json::array({r.lo, r.hi}); };
  return Json{{"prevalence", prevalence},
              {"parameters", parameters},
              {"box",
               {{"alpha", range(spec.box.alpha)},
                {"k", range(spec.box.k)},
                {"rho", range(spec.box.rho)},
                {"zeta", range(spec.box.zeta)}}}};
}

PopulationSpec PopulationSpecFromJson(const Json& json) {
  PopulationSpec spec;
  try {
    for (const auto& [name, weight] : json.at("prevalence").items()) {
      spec.prevalence[cognitive::ParseStrategy(name)] = weight.get<double>();
    }
    if (json.contains("parameters")) {
      for (const auto& [name, m] : json.at("parameters").items()) {
        spec.parameters[cognitive::ParseStrategy(name)] = {
            ReadMoments(m, "alpha"), ReadMoments(m, "k"), ReadMoments(m, "rho"),
            ReadMoments(m, "zeta")};
      }
    }
    if (json.contains("box")) {
      const Json& box = json.at("box");
      auto range = [&](const char* key, cognitive::Range& r) {
        if (box.contains(key)) r = {box.at(key).at(0).get<double>(), box.at(key).at(1).get<double>()};
      };
      range("alpha", spec.box.alpha);
      range("k", spec.box.k);
      range("rho", spec.box.rho);
      range("zeta", spec.box.zeta);
    }
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("malformed population spec: ") + e.what());
  }
  spec.Validate();
  return spec;
}

}  // namespace coax::fitting
