// Copyright 2026 The ptkit Authors
//
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

#include "ptkit/recipe.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ptkit {
namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

}  // namespace

double tau_epoch(double batch_tokens, double lr, double weight_decay, double total_tokens) {
  require_positive(batch_tokens, "batch_tokens");
  require_positive(lr, "lr");
  require_positive(weight_decay, "weight_decay");
  require_positive(total_tokens, "total_tokens");
  return batch_tokens / (lr * weight_decay * total_tokens);
}

double scale_tau(double tau_ref, double tpp_ref, double tpp_target) {
  require_positive(tau_ref, "tau_ref");
  require_positive(tpp_ref, "tpp_ref");
  require_positive(tpp_target, "tpp_target");
  return tau_ref * std::sqrt(tpp_ref / tpp_target);
}

double solve_weight_decay(double tau, double batch_tokens, double lr, double total_tokens) {
  require_positive(tau, "tau");
  require_positive(batch_tokens, "batch_tokens");
  require_positive(lr, "lr");
  require_positive(total_tokens, "total_tokens");
  return batch_tokens / (lr * tau * total_tokens);
}

std::uint64_t align_batch(std::uint64_t sequences, std::uint64_t granularity) {
  if (sequences < 1 || granularity < 1) {
    throw std::invalid_argument("sequences and granularity must be >= 1");
  }
  return granularity * ((sequences + granularity - 1) / granularity);
}

std::uint64_t steps_from(std::uint64_t total_tokens, std::uint64_t batch_tokens) {
  if (batch_tokens == 0) throw std::invalid_argument("batch_tokens must be positive");
  if (total_tokens < batch_tokens) {
    throw std::invalid_argument("total_tokens is smaller than one batch");
  }
  return total_tokens / batch_tokens;
}

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kCosineToZero:
      return "cosine_to_zero";
    case ScheduleKind::kCosineToFloor:
      return "cosine_to_floor";
    case ScheduleKind::kLinearToZero:
      return "linear_to_zero";
    case ScheduleKind::kConstant:
      return "constant";
  }
  return "constant";
}

std::optional<ScheduleKind> parse_schedule_kind(std::string_view name) {
  for (auto k : {ScheduleKind::kCosineToZero, ScheduleKind::kCosineToFloor,
                 ScheduleKind::kLinearToZero, ScheduleKind::kConstant}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

Schedule Schedule::with_default_warmup(ScheduleKind kind, double peak, double floor,
                                       std::uint64_t total_steps) {
  return {kind, peak, floor, total_steps / 10, total_steps};
}

void Schedule::validate() const {
  if (!(floor >= 0.0 && floor <= peak)) {
    throw std::invalid_argument("schedule requires 0 <= floor <= peak");
  }
  if (warmup_steps > total_steps) {
    throw std::invalid_argument("warmup_steps exceeds total_steps");
  }
}

double lr_at(std::uint64_t step, const Schedule& schedule) {
  schedule.validate();
  if (step > schedule.total_steps) throw std::out_of_range("step beyond total_steps");
  if (step < schedule.warmup_steps) {
    return schedule.peak * static_cast<double>(step) /
           static_cast<double>(schedule.warmup_steps);
  }
  const std::uint64_t span = schedule.total_steps - schedule.warmup_steps;
  const double p =
      span == 0 ? 0.0
                : static_cast<double>(step - schedule.warmup_steps) / static_cast<double>(span);
  switch (schedule.kind) {
    case ScheduleKind::kConstant:
      return schedule.peak;
    case ScheduleKind::kLinearToZero:
      return schedule.peak * (1.0 - p);
    case ScheduleKind::kCosineToZero:
      return schedule.peak * 0.5 * (1.0 + std::cos(std::numbers::pi * p));
    case ScheduleKind::kCosineToFloor:
      return schedule.floor + (schedule.peak - schedule.floor) * 0.5 *
                                  (1.0 + std::cos(std::numbers::pi * p));
  }
  return schedule.peak;
}

RecipePlan make_plan(double batch_tokens, double lr, double total_tokens,
                     std::optional<double> weight_decay, std::optional<double> tau,
                     std::optional<double> parameters) {
  if (weight_decay.has_value() == tau.has_value()) {
    throw std::invalid_argument("give exactly one of weight decay and tau");
  }
  RecipePlan plan;
  plan.batch_tokens = batch_tokens;
  plan.lr = lr;
  plan.total_tokens = total_tokens;
  if (weight_decay) {
    plan.weight_decay = *weight_decay;
    plan.tau_epoch = tau_epoch(batch_tokens, lr, *weight_decay, total_tokens);
  } else {
    plan.weight_decay = solve_weight_decay(*tau, batch_tokens, lr, total_tokens);
    plan.tau_epoch = *tau;
  }
  plan.steps = steps_from(static_cast<std::uint64_t>(std::llround(total_tokens)),
                          static_cast<std::uint64_t>(std::llround(batch_tokens)));
  if (parameters) {
    require_positive(*parameters, "parameters");
    plan.parameters = parameters;
    plan.tokens_per_parameter = total_tokens / *parameters;
  }
  return plan;
}

std::vector<StageViolation> validate_stage_plan(std::span<const Stage> stages) {
  std::vector<StageViolation> out;
  for (std::size_t i = 1; i < stages.size(); ++i) {
    const Stage& prev = stages[i - 1];
    const Stage& cur = stages[i];
    if (cur.context_length <= prev.context_length) {
      out.push_back({i, "context length does not increase over the previous stage"});
    }
    if (cur.rope_base < prev.rope_base) {
      out.push_back({i, "RoPE base decreases relative to the previous stage"});
    }
    if (cur.decay != ScheduleKind::kConstant) {
      out.push_back({i, "stages after the first must use a constant learning rate"});
    }
    if (cur.max_lr != cur.min_lr) {
      out.push_back({i, "max_lr differs from min_lr in a constant-rate stage"});
    }
  }
  return out;
}

}  // namespace ptkit
