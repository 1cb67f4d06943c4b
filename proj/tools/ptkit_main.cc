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

// ptkit command line: corpus processing, packing, run monitoring and recipe
// calculators over JSON Lines streams.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ptkit/corpus.h"
#include "ptkit/dedup.h"
#include "ptkit/evalstats.h"
#include "ptkit/mix.h"
#include "ptkit/packing.h"
#include "ptkit/recipe.h"
#include "ptkit/runwatch.h"
#include "ptkit/transforms.h"

namespace {

using nlohmann::json;

struct Streams {
  std::string input = "-";
  std::string output = "-";
};

void add_streams(CLI::App* cmd, Streams& s) {
  cmd->add_option("-i,--input", s.input, "input JSONL file, - for stdin")->capture_default_str();
  cmd->add_option("-o,--output", s.output, "output JSONL file, - for stdout")->capture_default_str();
}

// Owns a file stream when a path is given, otherwise borrows stdin/stdout.
class Input {
 public:
  explicit Input(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ifstream>(path);
      if (!*file_) throw std::runtime_error("cannot open " + path);
    }
  }
  std::istream& get() { return file_ ? *file_ : std::cin; }

 private:
  std::unique_ptr<std::ifstream> file_;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open " + path + " for writing");
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void report_errors(const std::vector<ptkit::RecordError>& errors) {
  for (const auto& e : errors) std::cerr << "line " << e.line << ": " << e.message << "\n";
}

// Reads raw JSON objects, one per line, reporting malformed lines.
template <typename Fn>
void for_each_json_line(std::istream& in, Fn&& fn) {
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(line), n);
    } catch (const std::exception& e) {
      std::cerr << "line " << n << ": " << e.what() << "\n";
    }
  }
}

std::vector<double> parse_triple(const std::string& spec, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(std::stod(part));
  if (out.size() != 3) throw std::invalid_argument(std::string(flag) + " expects w,Tmin,Tmax");
  return out;
}

int run_dedup_exact(std::uint64_t capacity, double fpr, const Streams& s) {
  Input in(s.input);
  Output out(s.output);
  ptkit::ExactDeduplicator dedup({capacity, fpr});
  ptkit::RecordReader reader(in.get());
  while (auto doc = reader.next()) {
    if (dedup.admit(*doc)) ptkit::write_record(*doc, out.get());
  }
  report_errors(reader.errors());
  std::cerr << "seen " << dedup.stats().seen << ", dropped " << dedup.stats().dropped << "\n";
  return 0;
}

int run_dedup_near(const ptkit::NearDedupConfig& cfg, const std::string& clusters_path,
                   const Streams& s) {
  Input in(s.input);
  auto read = ptkit::read_records(in.get());
  report_errors(read.errors);
  const auto result = ptkit::near_dedup(read.documents, cfg);
  Output out(s.output);
  ptkit::write_records(result.kept, out.get());
  if (!clusters_path.empty()) {
    Output clusters(clusters_path);
    for (const auto& c : result.clusters) {
      clusters.get() << json{{"representative", c.representative},
                             {"members", c.members},
                             {"size", c.size}}.dump()
                     << "\n";
    }
  }
  std::cerr << "documents " << read.documents.size() << ", clusters " << result.clusters.size()
            << ", dropped " << result.dropped << ", empty " << result.empty << "\n";
  return 0;
}

int run_mix(const std::string& stats_path, std::uint64_t target, const std::string& manifest_path) {
  Input in(stats_path);
  std::vector<ptkit::GroupStats> groups;
  for_each_json_line(in.get(), [&groups](const json& j, std::size_t) {
    ptkit::GroupStats g;
    g.group = j.at("group").get<std::string>();
    g.tokens = j.at("tokens").get<std::uint64_t>();
    if (j.contains("bucket")) {
      const auto b = ptkit::parse_dup_bucket(j["bucket"].get<std::string>());
      if (!b) throw std::invalid_argument("unknown bucket " + j["bucket"].dump());
      g.bucket = *b;
    } else {
      g.bucket = ptkit::bucket_of(j.at("dup_count").get<std::int64_t>());
    }
    const auto sc = ptkit::parse_source_class(j.value("source_class", "commoncrawl"));
    if (!sc) throw std::invalid_argument("unknown source_class");
    g.source_class = *sc;
    groups.push_back(std::move(g));
  });
  const auto manifest = ptkit::build_manifest(groups);
  const auto quotas = ptkit::sample_plan(manifest, target);

  std::unique_ptr<Output> records;
  if (!manifest_path.empty()) records = std::make_unique<Output>(manifest_path);
  std::printf("%-28s %8s %6s %16s %10s %16s\n", "group", "bucket", "weight", "raw_tokens",
              "share", "quota");
  for (std::size_t i = 0; i < manifest.rows.size(); ++i) {
    const auto& r = manifest.rows[i];
    std::printf("%-28s %8s %6d %16llu %9.5f%% %16llu\n", r.group.c_str(),
                std::string(ptkit::to_string(groups[i].bucket)).c_str(), r.weight,
                static_cast<unsigned long long>(r.raw_tokens), 100.0 * r.proportion,
                static_cast<unsigned long long>(quotas[i]));
    if (records) {
      records->get() << json{{"group", r.group},
                             {"bucket", ptkit::to_string(groups[i].bucket)},
                             {"source_class", ptkit::to_string(groups[i].source_class)},
                             {"raw_tokens", r.raw_tokens},
                             {"weight", r.weight},
                             {"weighted_tokens", r.weighted_tokens},
                             {"proportion", r.proportion},
                             {"quota", quotas[i]}}.dump()
                     << "\n";
    }
  }
  return 0;
}

int run_fim(std::uint64_t seed, double psm_rate, const Streams& s) {
  Input in(s.input);
  Output out(s.output);
  ptkit::FimConfig cfg;
  cfg.psm_probability = psm_rate;
  std::mt19937_64 rng(seed);
  ptkit::RecordReader reader(in.get());
  while (auto doc = reader.next()) {
    if (!doc->text.empty()) {
      try {
        doc->text = ptkit::fim_transform(doc->text, cfg, rng);
      } catch (const std::invalid_argument& e) {
        std::cerr << doc->id << ": left unchanged, " << e.what() << "\n";
      }
    }
    ptkit::write_record(*doc, out.get());
  }
  report_errors(reader.errors());
  return 0;
}

int run_topo(const Streams& s) {
  Input in(s.input);
  Output out(s.output);
  for_each_json_line(in.get(), [&out](const json& j, std::size_t) {
    std::vector<ptkit::RepoFile> files;
    for (const auto& f : j.at("files")) {
      files.push_back({f.at("path").get<std::string>(), f.at("text").get<std::string>()});
    }
    const auto graph = ptkit::build_dep_graph(files);
    std::vector<ptkit::RepoFile> ordered;
    for (std::size_t i : ptkit::topo_order(graph)) ordered.push_back(files[i]);
    ptkit::Document doc;
    doc.id = j.at("repo").get<std::string>();
    doc.text = ptkit::concat_repo(ordered);
    doc.source_class = ptkit::SourceClass::kCode;
    ptkit::write_record(doc, out.get());
  });
  return 0;
}

// Documents carry their pairs in a "qa" field: [{"question": .., "answer": ..}].
int run_qa(const Streams& s) {
  Input in(s.input);
  Output out(s.output);
  ptkit::RecordReader reader(in.get());
  while (auto doc = reader.next()) {
    const auto it = doc->extra.find("qa");
    if (it != doc->extra.end()) {
      std::vector<ptkit::QaPair> pairs;
      for (const auto& p : json::parse(it->second)) {
        pairs.push_back({p.at("question").get<std::string>(), p.at("answer").get<std::string>()});
      }
      doc->extra.erase(it);
      if (!pairs.empty()) doc->text = ptkit::append_qa(doc->text, pairs);
    }
    ptkit::write_record(*doc, out.get());
  }
  report_errors(reader.errors());
  return 0;
}

int run_pack(std::uint64_t capacity, std::size_t max_open, const std::string& count_with,
             const Streams& s) {
  std::function<std::uint64_t(const ptkit::Document&)> length;
  if (count_with == "whitespace") {
    length = [](const ptkit::Document& d) { return ptkit::word_count(d.text); };
  } else if (count_with.starts_with("field:")) {
    const std::string field = count_with.substr(6);
    length = [field](const ptkit::Document& d) -> std::uint64_t {
      const auto it = d.extra.find(field);
      if (it == d.extra.end()) throw std::invalid_argument("missing field " + field);
      return std::stoull(it->second);
    };
  } else {
    throw std::invalid_argument("--count-with must be whitespace or field:<name>");
  }

  Input in(s.input);
  Output out(s.output);
  ptkit::OnlinePacker packer(capacity, max_open, [&out](ptkit::PackedSequence&& seq) {
    json entries = json::array();
    for (const auto& e : seq.entries) entries.push_back({{"id", e.id}, {"len", e.length}});
    out.get() << json{{"capacity", seq.capacity}, {"entries", entries}, {"padding", seq.padding}}
                     .dump()
              << "\n";
  });
  ptkit::RecordReader reader(in.get());
  std::uint64_t empty = 0;
  while (auto doc = reader.next()) {
    std::uint64_t len = 0;
    try {
      len = length(*doc);
    } catch (const std::exception& e) {
      std::cerr << doc->id << ": " << e.what() << "\n";
      continue;
    }
    if (len == 0) {
      ++empty;
      continue;
    }
    packer.push({doc->id, len});
  }
  packer.finish();
  report_errors(reader.errors());
  if (empty > 0) std::cerr << "skipped " << empty << " zero-length documents\n";
  const auto& st = packer.stats();
  out.get() << json{{"stats",
                     {{"sequences", st.sequences},
                      {"docs_packed", st.docs_packed},
                      {"docs_skipped", st.docs_skipped},
                      {"docs_empty", empty},
                      {"padding_tokens", st.padding_tokens},
                      {"capacity_tokens", st.capacity_tokens},
                      {"padding_ratio", st.padding_ratio},
                      {"truncation_ratio", st.truncation_ratio}}}}
                   .dump()
            << "\n";
  return 0;
}

int run_monitor(ptkit::MonitorConfig cfg, const std::string& alert, const std::string& restart,
                const Streams& s) {
  const auto a = parse_triple(alert, "--alert");
  const auto r = parse_triple(restart, "--restart");
  cfg.alert = {"alert", static_cast<std::size_t>(a[0]), a[1], a[2]};
  cfg.restart = {"restart", static_cast<std::size_t>(r[0]), r[1], r[2]};
  if (!cfg.webhook) {
    if (const char* env = std::getenv(ptkit::kWebhookEnv); env != nullptr && *env != '\0') {
      cfg.webhook = env;
    }
  }
  std::unique_ptr<ptkit::WebhookNotifier> notifier;
  if (cfg.webhook) {
    notifier = std::make_unique<ptkit::WebhookNotifier>(
        *cfg.webhook, [](const std::string& m) { std::cerr << m << "\n"; });
  }
  ptkit::RunMonitor monitor(cfg, notifier.get());
  Input in(s.input);
  Output out(s.output);
  for_each_json_line(in.get(), [&](const json& j, std::size_t) {
    const ptkit::MetricPoint p{j.at("step").get<std::int64_t>(), j.at("loss").get<double>()};
    for (const auto& e : monitor.push(p)) out.get() << ptkit::to_json(e).dump() << "\n" << std::flush;
  });
  if (notifier) notifier->flush();
  std::cerr << "events " << monitor.report().events.size() << ", spikes "
            << monitor.report().spikes.size() << "\n";
  return 0;
}

struct PlanArgs {
  double batch = 0, lr = 0, tokens = 0;
  std::optional<double> wd, tau, tpp_ref, tpp_target, params;
  std::string schedule;
  std::size_t samples = 11;
};

int run_plan(const PlanArgs& p) {
  std::optional<double> tau = p.tau;
  if (p.tpp_ref.has_value() != p.tpp_target.has_value()) {
    throw std::invalid_argument("--tpp-ref and --tpp-target go together");
  }
  if (p.tpp_ref) {
    if (!tau) throw std::invalid_argument("--tpp-ref/--tpp-target rescale --tau");
    tau = ptkit::scale_tau(*tau, *p.tpp_ref, *p.tpp_target);
  }
  const auto plan = ptkit::make_plan(p.batch, p.lr, p.tokens, p.wd, tau, p.params);
  json rec = {{"batch_tokens", plan.batch_tokens}, {"lr", plan.lr},
              {"weight_decay", plan.weight_decay}, {"total_tokens", plan.total_tokens},
              {"steps", plan.steps},               {"tau_epoch", plan.tau_epoch}};
  if (plan.parameters) rec["parameters"] = *plan.parameters;
  if (plan.tokens_per_parameter) rec["tokens_per_parameter"] = *plan.tokens_per_parameter;

  std::optional<ptkit::Schedule> sched;
  if (!p.schedule.empty()) {
    std::stringstream ss(p.schedule);
    std::vector<std::string> parts;
    for (std::string part; std::getline(ss, part, ',');) parts.push_back(part);
    if (parts.size() != 5) {
      throw std::invalid_argument("--schedule expects kind,peak,floor,warmup,total");
    }
    const auto kind = ptkit::parse_schedule_kind(parts[0]);
    if (!kind) throw std::invalid_argument("unknown schedule kind " + parts[0]);
    sched = ptkit::Schedule{*kind, std::stod(parts[1]), std::stod(parts[2]),
                            std::stoull(parts[3]), std::stoull(parts[4])};
    sched->validate();
    rec["schedule"] = {{"kind", parts[0]},
                       {"peak", sched->peak},
                       {"floor", sched->floor},
                       {"warmup_steps", sched->warmup_steps},
                       {"total_steps", sched->total_steps}};
  }
  std::cout << rec.dump() << "\n";
  if (sched) {
    const std::size_t n = std::max<std::size_t>(p.samples, 2);
    std::printf("%14s %14s\n", "step", "lr");
    for (std::size_t i = 0; i < n; ++i) {
      const auto step = static_cast<std::uint64_t>(
          static_cast<long double>(sched->total_steps) * i / (n - 1));
      std::printf("%14llu %14.6e\n", static_cast<unsigned long long>(step),
                  ptkit::lr_at(step, *sched));
    }
  }
  return 0;
}

int run_mem(const std::string& pairs_path) {
  Input in(pairs_path);
  std::vector<ptkit::SentencePair> pairs;
  for_each_json_line(in.get(), [&pairs](const json& j, std::size_t) {
    pairs.push_back({j.at("reference").get<std::string>(), j.at("generated").get<std::string>()});
  });
  std::printf("%.6f\n", ptkit::memorization_rate(pairs));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ptkit: pre-training data and run tooling"};
  app.require_subcommand(1);
  std::function<int()> action;

  Streams streams;

  auto* exact = app.add_subcommand("dedup-exact", "drop exact duplicates with a Bloom filter");
  std::uint64_t capacity = 100'000'000;
  double fpr = 0.001;
  exact->add_option("--capacity", capacity, "expected number of distinct documents")
      ->capture_default_str();
  exact->add_option("--fpr", fpr, "target false positive rate")->capture_default_str();
  add_streams(exact, streams);
  exact->callback([&] { action = [&] { return run_dedup_exact(capacity, fpr, streams); }; });

  auto* near = app.add_subcommand("dedup-near", "MinHash LSH near-duplicate clustering");
  ptkit::NearDedupConfig ncfg;
  std::string clusters_path;
  near->add_option("--perms", ncfg.num_perm)->capture_default_str();
  near->add_option("--bands", ncfg.lsh.bands)->capture_default_str();
  near->add_option("--rows", ncfg.lsh.rows)->capture_default_str();
  near->add_option("--threshold", ncfg.threshold)->capture_default_str();
  near->add_option("--seed", ncfg.seed)->capture_default_str();
  near->add_option("--ngram", ncfg.ngram)->capture_default_str();
  near->add_option("--clusters", clusters_path, "write the cluster report here");
  add_streams(near, streams);
  near->callback([&] { action = [&] { return run_dedup_near(ncfg, clusters_path, streams); }; });

  auto* mix = app.add_subcommand("mix", "duplication-aware mixture manifest");
  std::string stats_path, manifest_path;
  std::uint64_t target = 0;
  mix->add_option("--stats", stats_path, "group statistics JSONL")->required();
  mix->add_option("--target-tokens", target)->required();
  mix->add_option("-o,--output", manifest_path, "write manifest records here");
  mix->callback([&] { action = [&] { return run_mix(stats_path, target, manifest_path); }; });

  auto* transform = app.add_subcommand("transform", "document transforms");
  transform->require_subcommand(1);
  auto* fim = transform->add_subcommand("fim", "fill-in-the-middle rearrangement");
  std::uint64_t fim_seed = 0;
  double psm_rate = 0.5;
  fim->add_option("--seed", fim_seed)->capture_default_str();
  fim->add_option("--psm-rate", psm_rate, "probability of the PSM layout")->capture_default_str();
  add_streams(fim, streams);
  fim->callback([&] { action = [&] { return run_fim(fim_seed, psm_rate, streams); }; });
  auto* topo = transform->add_subcommand("topo", "dependency-ordered repository concatenation");
  add_streams(topo, streams);
  topo->callback([&] { action = [&] { return run_topo(streams); }; });
  auto* qa = transform->add_subcommand("qa", "append question/answer pairs");
  add_streams(qa, streams);
  qa->callback([&] { action = [&] { return run_qa(streams); }; });

  auto* pack = app.add_subcommand("pack", "online best-fit sequence packing");
  std::uint64_t pack_capacity = 0;
  std::size_t max_open = 64;
  std::string count_with = "whitespace";
  pack->add_option("--capacity", pack_capacity)->required();
  pack->add_option("--max-open", max_open)->capture_default_str();
  pack->add_option("--count-with", count_with, "whitespace or field:<name>")
      ->capture_default_str();
  add_streams(pack, streams);
  pack->callback(
      [&] { action = [&] { return run_pack(pack_capacity, max_open, count_with, streams); }; });

  auto* mon = app.add_subcommand("monitor", "loss spike monitor");
  ptkit::MonitorConfig mcfg;
  std::string alert = "10,0,0", restart = "50,0,0";
  std::string webhook;
  mon->add_option("--total-steps", mcfg.total_steps)->required();
  mon->add_option("--alert", alert, "w,Tmin,Tmax")->required();
  mon->add_option("--restart", restart, "w,Tmin,Tmax")->required();
  mon->add_option("--interval", mcfg.checkpoint_interval, "checkpoint interval")
      ->capture_default_str();
  mon->add_option("--webhook", webhook,
                  std::string("POST events here; defaults to $") + ptkit::kWebhookEnv);
  add_streams(mon, streams);
  mon->callback([&] {
    if (!webhook.empty()) mcfg.webhook = webhook;
    action = [&] { return run_monitor(mcfg, alert, restart, streams); };
  });

  auto* plan = app.add_subcommand("plan", "AdamW timescale and schedule calculator");
  PlanArgs pargs;
  plan->add_option("--batch-tokens", pargs.batch)->required();
  plan->add_option("--lr", pargs.lr)->required();
  plan->add_option("--tokens", pargs.tokens)->required();
  auto* wd = plan->add_option("--wd", pargs.wd);
  auto* tau = plan->add_option("--tau", pargs.tau);
  wd->excludes(tau);
  plan->add_option("--tpp-ref", pargs.tpp_ref);
  plan->add_option("--tpp-target", pargs.tpp_target);
  plan->add_option("--params", pargs.params, "parameter count, for tokens per parameter");
  plan->add_option("--schedule", pargs.schedule, "kind,peak,floor,warmup,total");
  plan->add_option("--samples", pargs.samples, "schedule table rows")->capture_default_str();
  plan->callback([&] { action = [&] { return run_plan(pargs); }; });

  auto* eval = app.add_subcommand("evalstats", "evaluation statistics");
  eval->require_subcommand(1);
  auto* passk = eval->add_subcommand("passk", "unbiased pass@k");
  std::uint64_t n = 0, c = 0, k = 0;
  passk->add_option("--n", n)->required();
  passk->add_option("--c", c)->required();
  passk->add_option("--k", k)->required();
  passk->callback([&] {
    action = [&] {
      std::printf("%.10f\n", ptkit::pass_at_k(n, c, k));
      return 0;
    };
  });
  auto* mem = eval->add_subcommand("mem", "memorization rate over sentence pairs");
  std::string pairs_path;
  mem->add_option("--pairs", pairs_path, "JSONL of {reference, generated}")->required();
  mem->callback([&] { action = [&] { return run_mem(pairs_path); }; });

  CLI11_PARSE(app, argc, argv);
  try {
    return action ? action() : 0;
  } catch (const std::exception& e) {
    std::cerr << "ptkit: " << e.what() << "\n";
    return 1;
  }
}
