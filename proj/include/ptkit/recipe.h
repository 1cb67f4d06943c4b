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

#ifndef PTKIT_RECIPE_H_
#define PTKIT_RECIPE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ptkit {

// AdamW averaging timescale in epochs: batch_tokens / (lr * wd * total_tokens).
// All arguments must be positive; otherwise std::invalid_argument.
double tau_epoch(double batch_tokens, double lr, double weight_decay, double total_tokens);

// Rescales a timescale tuned at tpp_ref tokens per parameter to tpp_target,
// proportionally to 1/sqrt(TPP).
double scale_tau(double tau_ref, double tpp_ref, double tpp_target);

// Weight decay that makes tau_epoch(batch_tokens, lr, wd, total_tokens) == tau.
double solve_weight_decay(double tau, double batch_tokens, double lr, double total_tokens);

// Smallest multiple of `granularity` that is >= `sequences`. Both must be >= 1.
std::uint64_t align_batch(std::uint64_t sequences, std::uint64_t granularity);

// floor(total_tokens / batch_tokens). Throws std::invalid_argument when
// batch_tokens is zero or exceeds total_tokens.
std::uint64_t steps_from(std::uint64_t total_tokens, std::uint64_t batch_tokens);

enum class ScheduleKind { kCosineToZero, kCosineToFloor, kLinearToZero, kConstant };

std::string_view to_string(ScheduleKind kind);
std::optional<ScheduleKind> parse_schedule_kind(std::string_view name);

struct Schedule {
  ScheduleKind kind = ScheduleKind::kCosineToZero;
  double peak = 0.0;
  double floor = 0.0;  // cosine_to_floor only
  std::uint64_t warmup_steps = 0;
  std::uint64_t total_steps = 0;

  // Warmup of 10% of total_steps.
  static Schedule with_default_warmup(ScheduleKind kind, double peak, double floor,
                                      std::uint64_t total_steps);

  // Throws std::invalid_argument unless 0 <= floor <= peak and warmup <= total.
  void validate() const;
};

// Linear warmup from 0 to peak, then the kind's decay over
// p = (step - warmup) / (total - warmup). Throws std::out_of_range for
// step > total_steps.
double lr_at(std::uint64_t step, const Schedule& schedule);

struct RecipePlan {
  double batch_tokens = 0;
  double lr = 0;
  double weight_decay = 0;
  double total_tokens = 0;
  std::uint64_t steps = 0;
  std::optional<double> parameters;
  std::optional<double> tokens_per_parameter;
  double tau_epoch = 0;
};

// Completes a plan from B, lr, D and either wd or a target tau (exactly one).
RecipePlan make_plan(double batch_tokens, double lr, double total_tokens,
                     std::optional<double> weight_decay, std::optional<double> tau,
                     std::optional<double> parameters = std::nullopt);

struct Stage {
  std::string name;
  std::uint64_t context_length = 0;
  double tokens = 0;
  double rope_base = 0;
  double max_lr = 0;
  double min_lr = 0;
  ScheduleKind decay = ScheduleKind::kConstant;
  int cp_size = 1;
};

struct StageViolation {
  std::size_t stage = 0;
  std::string message;
};

// Context lengths must strictly increase, RoPE bases must not decrease, and
// every stage after the first must hold a constant rate (max_lr == min_lr).
std::vector<StageViolation> validate_stage_plan(std::span<const Stage> stages);

}  // namespace ptkit

#endif  // PTKIT_RECIPE_H_
