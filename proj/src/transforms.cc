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

#include "ptkit/transforms.h"

#include <algorithm>
#include <functional>
#include <optional>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace ptkit {
namespace {

void validate_fim(std::string_view text, const FimConfig& config) {
  const std::string_view tokens[] = {config.token_prefix, config.token_middle,
                                     config.token_suffix};
  for (std::size_t i = 0; i < 3; ++i) {
    if (tokens[i].empty()) throw std::invalid_argument("FIM tokens must be non-empty");
    for (std::size_t j = i + 1; j < 3; ++j) {
      if (tokens[i] == tokens[j]) {
        throw std::invalid_argument("FIM tokens must be pairwise distinct");
      }
    }
    if (text.find(tokens[i]) != std::string_view::npos) {
      throw std::invalid_argument("text already contains FIM token " +
                                  std::string(tokens[i]));
    }
  }
}

// Byte offsets of every code-point boundary, including 0 and text.size().
std::vector<std::size_t> codepoint_boundaries(std::string_view text) {
  std::vector<std::size_t> out;
  out.reserve(text.size() + 1);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) out.push_back(i);
  }
  out.push_back(text.size());
  return out;
}

std::string_view extension_of(std::string_view path) {
  const auto slash = path.find_last_of('/');
  const auto name = slash == std::string_view::npos ? path : path.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot == std::string_view::npos || dot == 0) return {};
  return name.substr(dot + 1);
}

std::string_view strip_extension(std::string_view path) {
  const auto ext = extension_of(path);
  return ext.empty() ? path : path.substr(0, path.size() - ext.size() - 1);
}

std::string_view dirname(std::string_view path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string_view::npos ? std::string_view{} : path.substr(0, slash);
}

// Collapses "." and ".." segments; leading ".." that escape the root are
// dropped.
std::string clean_path(std::string_view path) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    const auto part = path.substr(pos, next - pos);
    if (part == "..") {
      if (!parts.empty()) parts.pop_back();
    } else if (!part.empty() && part != ".") {
      parts.push_back(part);
    }
    pos = next + 1;
  }
  std::string out;
  for (const auto& part : parts) {
    if (!out.empty()) out.push_back('/');
    out.append(part);
  }
  return out;
}

bool ends_with_segment(std::string_view haystack, std::string_view key) {
  if (key.empty() || !haystack.ends_with(key)) return false;
  return haystack.size() == key.size() || haystack[haystack.size() - key.size() - 1] == '/';
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

// Turns an imported module name into a path-like key and a directory that
// relative keys resolve against.
std::pair<std::string, bool> module_key(std::string_view module, std::string_view importer) {
  std::string key(module);
  const auto ext = extension_of(importer);
  bool relative = key.starts_with("./") || key.starts_with("../");
  if (ext == "py") {
    std::size_t dots = 0;
    while (dots < key.size() && key[dots] == '.') ++dots;
    std::string rest = replace_all(key.substr(dots), ".", "/");
    if (dots > 0) {
      relative = true;
      std::string up;
      for (std::size_t i = 1; i < dots; ++i) up += "../";
      key = up + rest;
    } else {
      key = rest;
    }
  } else if (ext == "java" || ext == "kt" || ext == "scala") {
    key = replace_all(key, ".", "/");
  } else if (ext == "rs") {
    key = replace_all(key, "::", "/");
    for (std::string_view prefix : {"crate/", "self/", "super/"}) {
      if (key.starts_with(prefix)) key = key.substr(prefix.size());
    }
  }
  return {key, relative};
}

}  // namespace

std::string fim_rearrange(std::string_view text, std::size_t begin, std::size_t end,
                          FimLayout layout, const FimConfig& config) {
  if (text.empty()) throw std::invalid_argument("cannot FIM-transform empty text");
  validate_fim(text, config);
  if (begin > end || end > text.size()) {
    throw std::invalid_argument("FIM cut points out of range");
  }
  auto continuation = [&text](std::size_t at) {
    return at < text.size() && (static_cast<unsigned char>(text[at]) & 0xC0) == 0x80;
  };
  if (continuation(begin) || continuation(end)) {
    throw std::invalid_argument("FIM cut point splits a code point");
  }
  const auto prefix = text.substr(0, begin);
  const auto middle = text.substr(begin, end - begin);
  const auto suffix = text.substr(end);

  std::string out;
  out.reserve(text.size() + config.token_prefix.size() + config.token_middle.size() +
              config.token_suffix.size());
  if (layout == FimLayout::kPsm) {
    out.append(config.token_prefix).append(prefix);
    out.append(config.token_suffix).append(suffix);
  } else {
    out.append(config.token_suffix).append(suffix);
    out.append(config.token_prefix).append(prefix);
  }
  out.append(config.token_middle).append(middle);
  return out;
}

std::string fim_transform(std::string_view text, const FimConfig& config,
                          std::mt19937_64& rng) {
  if (text.empty()) throw std::invalid_argument("cannot FIM-transform empty text");
  validate_fim(text, config);
  if (!(config.psm_probability >= 0.0 && config.psm_probability <= 1.0)) {
    throw std::invalid_argument("psm_probability must lie in [0, 1]");
  }
  const auto bounds = codepoint_boundaries(text);
  std::uniform_int_distribution<std::size_t> pick(0, bounds.size() - 1);
  std::size_t a = bounds[pick(rng)];
  std::size_t b = bounds[pick(rng)];
  if (a > b) std::swap(a, b);
  std::bernoulli_distribution psm(config.psm_probability);
  const FimLayout layout = psm(rng) ? FimLayout::kPsm : FimLayout::kSpm;
  return fim_rearrange(text, a, b, layout, config);
}

const ImportPatterns& default_import_patterns() {
  static const ImportPatterns patterns = [] {
    ImportPatterns p;
    auto add = [&p](std::initializer_list<const char*> exts,
                    std::initializer_list<const char*> regexes) {
      std::vector<std::regex> compiled;
      for (const char* r : regexes) compiled.emplace_back(r, std::regex::ECMAScript);
      for (const char* ext : exts) p[ext] = compiled;
    };
    add({"py"}, {R"re(^\s*import\s+([\w.]+))re", R"re(^\s*from\s+([\w.]+)\s+import\b)re"});
    add({"js", "jsx", "ts", "tsx", "mjs", "cjs"},
        {R"re(^\s*import\s+(?:[^'"]*\s+from\s+)?['"]([^'"]+)['"])re",
         R"re(^\s*export\s+[^'"]*\s+from\s+['"]([^'"]+)['"])re",
         R"re(require\(\s*['"]([^'"]+)['"]\s*\))re"});
    add({"c", "cc", "cpp", "cxx", "h", "hh", "hpp", "hxx"},
        {R"re(^\s*#\s*include\s*"([^"]+)")re"});
    add({"java", "kt", "scala"}, {R"re(^\s*import\s+(?:static\s+)?([\w.]+))re"});
    add({"go"}, {R"re(^\s*import\s+(?:[\w.]+\s+)?"([^"]+)")re",
                 R"re(^\s*(?:[\w.]+\s+)?"([^"]+)"\s*$)re"});
    add({"rs"}, {R"re(^\s*(?:pub\s+)?use\s+([\w:]+))re", R"re(^\s*(?:pub\s+)?mod\s+(\w+)\s*;)re"});
    add({"rb"}, {R"re(^\s*require(?:_relative)?\s+['"]([^'"]+)['"])re"});
    add({"php"}, {R"re(^\s*(?:require|include)(?:_once)?\s*\(?\s*['"]([^'"]+)['"])re"});
    return p;
  }();
  return patterns;
}

std::vector<std::string> extract_imports(const RepoFile& file,
                                         const ImportPatterns& patterns) {
  std::vector<std::string> out;
  const auto it = patterns.find(std::string(extension_of(file.path)));
  if (it == patterns.end()) return out;

  std::unordered_set<std::string> seen;
  std::istringstream lines(file.text);
  std::string line;
  std::smatch match;
  while (std::getline(lines, line)) {
    for (const auto& re : it->second) {
      if (std::regex_search(line, match, re) && match.size() > 1 && match[1].matched) {
        std::string name = match[1].str();
        if (seen.insert(name).second) out.push_back(std::move(name));
      }
    }
  }
  return out;
}

DepGraph build_dep_graph(std::span<const RepoFile> files, const ImportPatterns& patterns) {
  DepGraph graph;
  graph.nodes = files.size();
  std::unordered_map<std::string_view, std::size_t> index_of;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!index_of.emplace(files[i].path, i).second) {
      throw std::invalid_argument("duplicate path " + files[i].path);
    }
  }

  auto resolve = [&](const std::string& key, bool relative,
                     std::size_t importer) -> std::optional<std::size_t> {
    const std::string local = clean_path(std::string(dirname(files[importer].path)) + "/" + key);
    for (std::size_t j = 0; j < files.size(); ++j) {
      if (j == importer) continue;
      const std::string_view path = files[j].path;
      if (path == local || strip_extension(path) == local ||
          strip_extension(path) == local + "/__init__" ||
          strip_extension(path) == local + "/index") {
        return j;
      }
    }
    if (relative) return std::nullopt;
    const std::string cleaned = clean_path(key);
    for (std::size_t j = 0; j < files.size(); ++j) {
      if (j == importer) continue;
      const std::string_view path = files[j].path;
      if (ends_with_segment(path, cleaned) ||
          ends_with_segment(strip_extension(path), cleaned)) {
        return j;
      }
    }
    return std::nullopt;
  };

  std::unordered_set<std::uint64_t> seen;
  for (std::size_t i = 0; i < files.size(); ++i) {
    for (const auto& module : extract_imports(files[i], patterns)) {
      const auto [key, relative] = module_key(module, files[i].path);
      if (key.empty()) continue;
      if (auto dep = resolve(key, relative, i)) {
        const std::uint64_t code = (std::uint64_t{*dep} << 32) | i;
        if (seen.insert(code).second) graph.edges.emplace_back(*dep, i);
      }
    }
  }
  return graph;
}

std::vector<std::size_t> topo_order(const DepGraph& graph) {
  const std::size_t n = graph.nodes;
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [u, v] : graph.edges) {
    if (u >= n || v >= n) throw std::invalid_argument("edge references unknown node");
    if (u == v) throw std::invalid_argument("self-dependency edge");
    adj[u].push_back(v);
  }

  // Iterative Tarjan.
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), component(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0;
  std::size_t components = 0;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (node, next edge)
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [node, edge] = call.back();
      if (edge == 0 && index[node] == kUnvisited) {
        index[node] = low[node] = next_index++;
        stack.push_back(node);
        on_stack[node] = true;
      }
      if (edge < adj[node].size()) {
        const std::size_t next = adj[node][edge++];
        if (index[next] == kUnvisited) {
          call.emplace_back(next, 0);
        } else if (on_stack[next]) {
          low[node] = std::min(low[node], index[next]);
        }
        continue;
      }
      if (low[node] == index[node]) {
        std::size_t member;
        do {
          member = stack.back();
          stack.pop_back();
          on_stack[member] = false;
          component[member] = components;
        } while (member != node);
        ++components;
      }
      const std::size_t finished = node;
      call.pop_back();
      if (!call.empty()) {
        const std::size_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }

  std::vector<std::vector<std::size_t>> members(components);
  for (std::size_t v = 0; v < n; ++v) members[component[v]].push_back(v);  // listing order
  std::vector<std::unordered_set<std::size_t>> succ(components);
  std::vector<std::size_t> indegree(components, 0);
  for (const auto& [u, v] : graph.edges) {
    const std::size_t cu = component[u], cv = component[v];
    if (cu != cv && succ[cu].insert(cv).second) ++indegree[cv];
  }

  // Components keyed by their first listing index.
  using Entry = std::pair<std::size_t, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> ready;
  for (std::size_t c = 0; c < components; ++c) {
    if (indegree[c] == 0) ready.emplace(members[c].front(), c);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const std::size_t c = ready.top().second;
    ready.pop();
    order.insert(order.end(), members[c].begin(), members[c].end());
    for (std::size_t d : succ[c]) {
      if (--indegree[d] == 0) ready.emplace(members[d].front(), d);
    }
  }
  return order;
}

std::vector<std::string> topo_order(const DepGraph& graph,
                                    std::span<const std::string> listing) {
  if (listing.size() != graph.nodes) {
    throw std::invalid_argument("listing size does not match the graph");
  }
  std::vector<std::string> out;
  out.reserve(listing.size());
  for (std::size_t i : topo_order(graph)) out.push_back(listing[i]);
  return out;
}

std::string_view comment_marker(std::string_view path) {
  static const std::unordered_map<std::string_view, std::string_view> markers = {
      {"c", "//"},     {"cc", "//"},   {"cpp", "//"},  {"cxx", "//"},  {"h", "//"},
      {"hh", "//"},    {"hpp", "//"},  {"hxx", "//"},  {"js", "//"},   {"jsx", "//"},
      {"ts", "//"},    {"tsx", "//"},  {"mjs", "//"},  {"cjs", "//"},  {"java", "//"},
      {"kt", "//"},    {"scala", "//"}, {"go", "//"},  {"rs", "//"},   {"cs", "//"},
      {"swift", "//"}, {"php", "//"},  {"dart", "//"}, {"sql", "--"},  {"lua", "--"},
      {"hs", "--"},    {"tex", "%"},   {"lisp", ";"},  {"clj", ";"},   {"el", ";"},
      {"asm", ";"},
  };
  const auto it = markers.find(extension_of(path));
  return it == markers.end() ? std::string_view{"#"} : it->second;
}

std::string concat_repo(std::span<const RepoFile> ordered) {
  if (ordered.empty()) throw std::invalid_argument("no files to concatenate");
  std::string out;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (i > 0) out.push_back('\n');
    out.append(comment_marker(ordered[i].path)).append(" ").append(ordered[i].path);
    out.push_back('\n');
    out.append(ordered[i].text);
    if (ordered[i].text.empty() || ordered[i].text.back() != '\n') out.push_back('\n');
  }
  return out;
}

std::string append_qa(std::string_view document, std::span<const QaPair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("append_qa needs at least one pair");
  std::string out(document);
  for (const auto& pair : pairs) {
    out.append("\n\nQ: ").append(pair.question).append("\nA: ").append(pair.answer);
  }
  out.push_back('\n');
  return out;
}

}  // namespace ptkit
