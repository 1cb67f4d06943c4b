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

#include "ptkit/runwatch.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "httplib.h"

namespace ptkit {
namespace {

constexpr double kMadScale = 1.4826;

void validate_tier(const DetectorTier& tier) {
  if (tier.window < 1) throw std::invalid_argument(tier.name + ": window must be >= 1");
  if (tier.t_max < tier.t_min) {
    throw std::invalid_argument(tier.name + ": T_max must be >= T_min");
  }
}

}  // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return (lower + upper) / 2.0;
}

RollingMedian::RollingMedian(std::size_t window) : window_(window) {
  if (window == 0) throw std::invalid_argument("window must be >= 1");
}

void RollingMedian::rebalance() {
  while (low_.size() > high_.size() + 1) {
    auto it = std::prev(low_.end());
    high_.insert(*it);
    low_.erase(it);
  }
  while (high_.size() > low_.size()) {
    auto it = high_.begin();
    low_.insert(*it);
    high_.erase(it);
  }
}

double RollingMedian::current() const {
  const double lo = *low_.rbegin();
  if (low_.size() > high_.size()) return lo;
  return (lo + *high_.begin()) / 2.0;
}

double RollingMedian::push(double value) {
  values_.push_back(value);
  if (low_.empty() || value <= *low_.rbegin()) {
    low_.insert(value);
  } else {
    high_.insert(value);
  }
  if (values_.size() > window_) {
    const double old = values_.front();
    values_.pop_front();
    if (old <= *low_.rbegin()) {
      low_.erase(low_.find(old));
    } else {
      high_.erase(high_.find(old));
    }
  }
  rebalance();
  return current();
}

SpikeScorer::SpikeScorer(const SpikeConfig& config)
    : config_(config), values_(config.window), deviations_(config.window) {}

SpikeScore SpikeScorer::push(double value) {
  SpikeScore score;
  score.median = values_.push(value);
  score.mad = deviations_.push(std::abs(value - score.median));
  score.z = (value - score.median) / (kMadScale * std::max(score.mad, config_.mad_floor));
  score.flagged = score.z > config_.z_threshold;
  return score;
}

std::pair<double, double> rolling_median_mad(std::span<const double> series,
                                             std::size_t window) {
  if (series.empty()) throw std::invalid_argument("empty series");
  SpikeScorer scorer({window, 5.0, 0.0});
  SpikeScore last;
  for (double y : series) last = scorer.push(y);
  return {last.median, last.mad};
}

SpikeScore spike_score(std::span<const double> series, const SpikeConfig& config) {
  if (series.empty()) throw std::invalid_argument("empty series");
  SpikeScorer scorer(config);
  SpikeScore last;
  for (double y : series) last = scorer.push(y);
  return last;
}

Verdict detect(std::span<const double> window, const DetectorTier& tier) {
  if (tier.window == 0 || window.size() < tier.window) return Verdict::kNone;
  const auto tail = window.last(tier.window);
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  return (*lo > tier.t_min && *hi > tier.t_max) ? Verdict::kTriggered : Verdict::kNone;
}

std::int64_t rollback_step(std::int64_t t_spike, std::int64_t interval) {
  if (t_spike < 0) throw std::invalid_argument("t_spike must be >= 0");
  if (interval < 1) throw std::invalid_argument("checkpoint interval must be >= 1");
  return (t_spike / interval) * interval;
}

nlohmann::json to_json(const MonitorEvent& event) {
  nlohmann::json out = {{"tier", event.tier},
                        {"step", event.step},
                        {"window_min", event.window_min},
                        {"window_max", event.window_max},
                        {"z", event.z}};
  if (event.rollback_step) out["rollback_step"] = *event.rollback_step;
  return out;
}

std::size_t MonitorConfig::z_window() const {
  const double w = std::round(z_window_fraction * static_cast<double>(total_steps));
  return w < 1.0 ? 1 : static_cast<std::size_t>(w);
}

void MonitorConfig::validate() const {
  validate_tier(alert);
  validate_tier(restart);
  if (restart.window <= alert.window) {
    throw std::invalid_argument("restart tier needs a wider window than the alert tier");
  }
  if (restart.t_min < alert.t_min || restart.t_max < alert.t_max) {
    throw std::invalid_argument("restart thresholds must be at least the alert thresholds");
  }
  if (checkpoint_interval < 1) throw std::invalid_argument("checkpoint interval must be >= 1");
  if (!(z_window_fraction > 0.0)) throw std::invalid_argument("z_window_fraction must be > 0");
  if (!(mad_floor > 0.0)) throw std::invalid_argument("mad_floor must be > 0");
}

WebhookNotifier::WebhookNotifier(const std::string& url, Log log) : log_(std::move(log)) {
  constexpr std::string_view scheme = "http://";
  if (!std::string_view(url).starts_with(scheme)) {
    throw std::invalid_argument("webhook URL must start with http://");
  }
  std::string rest = url.substr(scheme.size());
  const auto slash = rest.find('/');
  path_ = slash == std::string::npos ? "/" : rest.substr(slash);
  std::string authority = rest.substr(0, slash);
  if (const auto colon = authority.rfind(':'); colon != std::string::npos) {
    try {
      port_ = std::stoi(authority.substr(colon + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad port in webhook URL");
    }
    authority.resize(colon);
  }
  if (authority.empty()) throw std::invalid_argument("webhook URL has no host");
  host_ = std::move(authority);
  worker_ = std::thread([this] { run(); });
}

WebhookNotifier::~WebhookNotifier() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  worker_.join();
}

void WebhookNotifier::notify(const MonitorEvent& event) {
  {
    std::lock_guard lock(mu_);
    queue_.push_back(event);
  }
  cv_.notify_all();
}

void WebhookNotifier::flush() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return queue_.empty() && !busy_; });
}

void WebhookNotifier::run() {
  httplib::Client client(host_, port_);
  client.set_connection_timeout(2);
  client.set_read_timeout(5);
  client.set_write_timeout(5);
  for (;;) {
    MonitorEvent event;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [this] { return stop_ || !queue_.empty(); });
      if (queue_.empty()) return;  // stop requested and drained
      event = queue_.front();
      queue_.pop_front();
      busy_ = true;
    }
    const auto result = client.Post(path_, to_json(event).dump(), "application/json");
    if (log_) {
      if (!result) {
        log_("webhook delivery failed: " + httplib::to_string(result.error()));
      } else if (result->status >= 300) {
        log_("webhook returned HTTP " + std::to_string(result->status));
      }
    }
    {
      std::lock_guard lock(mu_);
      busy_ = false;
    }
    cv_.notify_all();
  }
}

RunMonitor::RunMonitor(const MonitorConfig& config, Notifier* notifier)
    : config_(config),
      notifier_(notifier),
      scorer_({config.z_window(), config.z_threshold, config.mad_floor}),
      history_limit_(std::max(config.alert.window, config.restart.window)),
      alert_{config.alert},
      restart_{config.restart} {
  config_.validate();
}

std::optional<MonitorEvent> RunMonitor::evaluate(TierState& state, int level,
                                                 std::int64_t step, double z) {
  const std::size_t w = state.tier.window;
  if (history_.size() < w) return std::nullopt;
  const auto first = history_.end() - static_cast<std::ptrdiff_t>(w);
  const auto [lo, hi] = std::minmax_element(first, history_.end());
  if (!state.armed) {
    if (*hi <= state.tier.t_max) state.armed = true;
    return std::nullopt;
  }
  if (!(*lo > state.tier.t_min && *hi > state.tier.t_max)) return std::nullopt;
  state.armed = false;
  MonitorEvent event{level, step, *lo, *hi, z, std::nullopt};
  if (level == 2) event.rollback_step = rollback_step(step, config_.checkpoint_interval);
  return event;
}

std::vector<MonitorEvent> RunMonitor::push(const MetricPoint& point) {
  if (last_step_ && point.step <= *last_step_) {
    throw std::invalid_argument("steps must be strictly increasing");
  }
  last_step_ = point.step;

  const SpikeScore score = scorer_.push(point.value);
  if (score.flagged) report_.spikes.push_back(point.step);

  history_.push_back(point.value);
  if (history_.size() > history_limit_) history_.pop_front();

  std::vector<MonitorEvent> emitted;
  if (auto e = evaluate(alert_, 1, point.step, score.z)) emitted.push_back(*e);
  if (auto e = evaluate(restart_, 2, point.step, score.z)) emitted.push_back(*e);
  for (const auto& e : emitted) {
    report_.events.push_back(e);
    if (notifier_ != nullptr) notifier_->notify(e);
  }
  return emitted;
}

MonitorReport run_monitor(std::span<const MetricPoint> stream, const MonitorConfig& config,
                          Notifier* notifier) {
  RunMonitor monitor(config, notifier);
  for (const auto& point : stream) monitor.push(point);
  return monitor.report();
}

}  // namespace ptkit
