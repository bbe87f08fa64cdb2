// Copyright 2026 The pdlearn Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <stdexcept>

#include "det_update.hpp"
#include "pdl/model.hpp"

namespace pdl {

StepMetrics modelbased_det_step(DeterministicLearner& learner, const ContinuousEnvironment& env,
                                StepRng& rng) {
  const auto* model = dynamic_cast<const AnalyticModel*>(&env);
  if (model == nullptr) {
    throw std::invalid_argument("modelbased_det_step: environment exposes no analytic model");
  }
  return modelbased_det_step(learner, env, *model, rng);
}

StepMetrics modelbased_det_step(DeterministicLearner& learner, const ContinuousEnvironment& env,
                                const AnalyticModel& model, StepRng& rng) {
  detail::check_det_learner(learner, env);
  const double lr = learner.lr.at(learner.t);
  const auto batch = detail::collect_det_batch(learner, env, rng, 0.0);
  const double scale = env.objective_scale();
  return detail::apply_det_update(
      learner, env, batch,
      [&](const detail::DetBatchItem& item) {
        const ModelGradients g = model.analytic_gradients(item.status, item.action);
        return CriticGradients{g.objective / scale, g.avg_constraints};
      },
      lr);
}

}  // namespace pdl
