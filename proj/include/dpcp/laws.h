//
// Copyright 2026 The dpcp Authors
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

// Synthetic score distributions for simulation and exact bin masses.

#ifndef DPCP_LAWS_H_
#define DPCP_LAWS_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "dpcp/random.h"
#include "dpcp/scores.h"

namespace dpcp {

struct UniformLaw {};

struct BetaLaw {
  double a = 1.0;
  double b = 1.0;
};

// (1 - weight) * Beta(a, b) + weight * point mass at `atom`.
struct AtomMixtureLaw {
  double atom = 0.5;
  double weight = 0.0;
  double a = 1.0;
  double b = 1.0;
};

// K-class classifier outputs: the true label is uniform, logits are standard
// normal with `signal` added to the true class, probabilities are the
// softmax. Scores are 1 - p_k.
struct ClassifierLaw {
  std::size_t classes = 3;
  double signal = 2.0;
};

// One labeled test example.
struct LabeledExample {
  std::vector<double> label_scores;
  std::size_t label = 0;

  double true_score() const { return label_scores[label]; }
};

class ScoreLaw {
 public:
  using Spec = std::variant<UniformLaw, BetaLaw, AtomMixtureLaw, ClassifierLaw>;

  ScoreLaw() = default;
  ScoreLaw(Spec spec) : spec_(spec) { Validate(); }  // NOLINT

  const Spec& spec() const { return spec_; }

  std::string name() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, UniformLaw>) return "uniform";
          if constexpr (std::is_same_v<T, BetaLaw>) return "beta";
          if constexpr (std::is_same_v<T, AtomMixtureLaw>) return "atom_mixture";
          if constexpr (std::is_same_v<T, ClassifierLaw>) return "classifier";
        },
        spec_);
  }

  bool has_cdf() const { return !std::holds_alternative<ClassifierLaw>(spec_); }
  bool has_labels() const { return std::holds_alternative<ClassifierLaw>(spec_); }

  // P(S <= x).
  double Cdf(double x) const {
    if (x < 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return std::visit(
        [x](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, UniformLaw>) {
            return x;
          } else if constexpr (std::is_same_v<T, BetaLaw>) {
            return boost::math::ibeta(s.a, s.b, x);
          } else if constexpr (std::is_same_v<T, AtomMixtureLaw>) {
            const double base =
                s.weight < 1.0 ? boost::math::ibeta(s.a, s.b, x) : 0.0;
            return (1.0 - s.weight) * base + (x >= s.atom ? s.weight : 0.0);
          } else {
            throw std::invalid_argument(
                "classifier law has no closed-form score CDF");
          }
        },
        spec_);
  }

  // Conformity score of a fresh example's true label.
  double Sample(Rng& rng) const {
    if (has_labels()) return SampleExample(rng).true_score();
    return std::visit(
        [&rng](const auto& s) -> double {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, UniformLaw>) {
            return rng.Uniform();
          } else if constexpr (std::is_same_v<T, BetaLaw>) {
            return rng.Beta(s.a, s.b);
          } else if constexpr (std::is_same_v<T, AtomMixtureLaw>) {
            if (rng.Uniform() < s.weight) return s.atom;
            return rng.Beta(s.a, s.b);
          } else {
            return 0.0;
          }
        },
        spec_);
  }

  // Scores of every label plus the true label. Scalar laws yield a single
  // label whose score is drawn from the law.
  LabeledExample SampleExample(Rng& rng) const {
    const auto* law = std::get_if<ClassifierLaw>(&spec_);
    if (law == nullptr) return {{Sample(rng)}, 0};
    LabeledExample ex;
    ex.label = static_cast<std::size_t>(rng.NextU64() % law->classes);
    std::vector<double> logits(law->classes);
    for (std::size_t k = 0; k < law->classes; ++k) {
      logits[k] = rng.Normal() + (k == ex.label ? law->signal : 0.0);
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (double& z : logits) {
      z = std::exp(z - top);
      total += z;
    }
    ex.label_scores.resize(law->classes);
    for (std::size_t k = 0; k < law->classes; ++k) {
      ex.label_scores[k] = std::clamp(1.0 - logits[k] / total, 0.0, 1.0);
    }
    return ex;
  }

 private:
  void Validate() const {
    std::visit(
        [](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, BetaLaw>) {
            if (!(s.a > 0.0 && s.b > 0.0)) {
              throw std::invalid_argument("beta law needs a, b > 0");
            }
          } else if constexpr (std::is_same_v<T, AtomMixtureLaw>) {
            if (!(s.atom >= 0.0 && s.atom <= 1.0)) {
              throw std::invalid_argument("atom must lie in [0, 1]");
            }
            if (!(s.weight >= 0.0 && s.weight <= 1.0)) {
              throw std::invalid_argument("atom weight must lie in [0, 1]");
            }
            if (!(s.a > 0.0 && s.b > 0.0)) {
              throw std::invalid_argument("atom mixture needs a, b > 0");
            }
          } else if constexpr (std::is_same_v<T, ClassifierLaw>) {
            if (s.classes < 2) {
              throw std::invalid_argument("classifier law needs >= 2 classes");
            }
          }
        },
        spec_);
  }

  Spec spec_ = UniformLaw{};
};

// max_j P(S in bin j), from CDF differences at the grid edges.
inline double PMax(const ScoreLaw& law, const BinGrid& grid) {
  if (!law.has_cdf()) {
    throw std::invalid_argument("PMax: law '" + law.name() +
                                "' has no closed-form CDF");
  }
  double best = 0.0;
  double prev = 0.0;  // bin 1 is closed at 0, so it starts from F(0-) = 0
  for (std::size_t j = 1; j <= grid.size(); ++j) {
    const double f = law.Cdf(grid.edge(j));
    best = std::max(best, f - prev);
    prev = f;
  }
  return best;
}

}  // namespace dpcp

#endif  // DPCP_LAWS_H_
