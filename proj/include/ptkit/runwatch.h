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

#ifndef PTKIT_RUNWATCH_H_
#define PTKIT_RUNWATCH_H_

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace ptkit {

struct MetricPoint {
  std::int64_t step = 0;
  double value = 0.0;
};

struct SpikeScore {
  double median = 0.0;
  double mad = 0.0;
  double z = 0.0;
  bool flagged = false;
};

// Median of a sample; the mean of the two middle values for even sizes.
// Throws std::invalid_argument on an empty sample.
double median(std::vector<double> values);

// Sliding median over the last `window` pushed values in O(log window).
class RollingMedian {
 public:
  explicit RollingMedian(std::size_t window);

  double push(double value);
  std::size_t size() const { return values_.size(); }

 private:
  void rebalance();
  double current() const;

  std::size_t window_;
  std::deque<double> values_;
  std::multiset<double> low_;
  std::multiset<double> high_;
};

// Trailing-window median m_t and MAD_t = median_{s in W(t)} |y_s - m_s|,
// with m_s the rolling median at s. Evaluated at the last point of `series`.
// Throws std::invalid_argument on an empty series or a zero window.
std::pair<double, double> rolling_median_mad(std::span<const double> series,
                                             std::size_t window);

struct SpikeConfig {
  std::size_t window = 1;
  double z_threshold = 5.0;
  double mad_floor = 1e-8;
};

// Streaming robust z-score: z_t = (y_t - m_t) / (1.4826 * max(MAD_t, floor)).
class SpikeScorer {
 public:
  explicit SpikeScorer(const SpikeConfig& config);

  SpikeScore push(double value);

 private:
  SpikeConfig config_;
  RollingMedian values_;
  RollingMedian deviations_;
};

// Score of the last point of `series`.
SpikeScore spike_score(std::span<const double> series, const SpikeConfig& config);

struct DetectorTier {
  std::string name;
  std::size_t window = 1;
  double t_min = 0.0;  // sustained floor
  double t_max = 0.0;  // severity peak
};

enum class Verdict { kNone, kTriggered };

// Triggered iff every value exceeds t_min and some value exceeds t_max.
// Windows shorter than tier.window (warm-up) never trigger; longer windows
// are evaluated on their trailing tier.window values.
Verdict detect(std::span<const double> window, const DetectorTier& tier);

// floor(t_spike / interval) * interval. Throws std::invalid_argument for a
// negative step or an interval below 1.
std::int64_t rollback_step(std::int64_t t_spike, std::int64_t interval);

struct MonitorEvent {
  int tier = 1;  // 1 = alert, 2 = restart
  std::int64_t step = 0;
  double window_min = 0.0;
  double window_max = 0.0;
  double z = 0.0;
  std::optional<std::int64_t> rollback_step;  // tier 2 only

  friend bool operator==(const MonitorEvent&, const MonitorEvent&) = default;
};

// Webhook body: {"tier", "step", "window_min", "window_max", "z"} plus
// "rollback_step" for tier 2.
nlohmann::json to_json(const MonitorEvent& event);

struct MonitorConfig {
  DetectorTier alert{"alert", 10, 0.0, 0.0};
  DetectorTier restart{"restart", 50, 0.0, 0.0};
  std::int64_t checkpoint_interval = 1000;
  std::int64_t total_steps = 0;  // sizes the z-score window
  double z_window_fraction = 0.01;
  double z_threshold = 5.0;
  double mad_floor = 1e-8;
  std::optional<std::string> webhook;

  // max(1, round(z_window_fraction * total_steps)).
  std::size_t z_window() const;

  // Throws std::invalid_argument when the tiers are malformed, the restart
  // tier is not wider and at least as strict as the alert tier, or the
  // checkpoint interval is below 1.
  void validate() const;
};

// Delivers events somewhere; failures must not throw.
class Notifier {
 public:
  virtual ~Notifier() = default;
  virtual void notify(const MonitorEvent& event) = 0;
};

// POSTs events as JSON from a background thread in emission order. Delivery
// failures are reported through `log` and never block the caller.
class WebhookNotifier : public Notifier {
 public:
  using Log = std::function<void(const std::string&)>;

  // `url` is "http://host[:port][/path]".
  explicit WebhookNotifier(const std::string& url, Log log = {});
  ~WebhookNotifier() override;

  WebhookNotifier(const WebhookNotifier&) = delete;
  WebhookNotifier& operator=(const WebhookNotifier&) = delete;

  void notify(const MonitorEvent& event) override;

  // Blocks until every queued event has been attempted.
  void flush();

 private:
  void run();

  std::string host_;
  int port_ = 80;
  std::string path_;
  Log log_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<MonitorEvent> queue_;
  bool busy_ = false;
  bool stop_ = false;
  std::thread worker_;
};

// Environment variable consulted when no webhook flag is given.
inline constexpr const char* kWebhookEnv = "PTKIT_WEBHOOK_URL";

struct MonitorReport {
  std::vector<MonitorEvent> events;
  std::vector<std::int64_t> spikes;  // steps with z above the threshold
};

// Streaming monitor. Each tier re-arms only after its trailing window drops
// back to at most T_max, so one sustained excursion yields one event per tier.
class RunMonitor {
 public:
  explicit RunMonitor(const MonitorConfig& config, Notifier* notifier = nullptr);

  // Throws std::invalid_argument if steps are not strictly increasing.
  std::vector<MonitorEvent> push(const MetricPoint& point);

  const MonitorReport& report() const { return report_; }

 private:
  struct TierState {
    DetectorTier tier;
    bool armed = true;
  };

  std::optional<MonitorEvent> evaluate(TierState& state, int level, std::int64_t step,
                                       double z);

  MonitorConfig config_;
  Notifier* notifier_;
  SpikeScorer scorer_;
  std::deque<double> history_;
  std::size_t history_limit_;
  TierState alert_;
  TierState restart_;
  std::optional<std::int64_t> last_step_;
  MonitorReport report_;
};

MonitorReport run_monitor(std::span<const MetricPoint> stream, const MonitorConfig& config,
                          Notifier* notifier = nullptr);

}  // namespace ptkit

#endif  // PTKIT_RUNWATCH_H_
