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

#ifndef PTKIT_TRANSFORMS_H_
#define PTKIT_TRANSFORMS_H_

#include <cstddef>
#include <map>
#include <random>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ptkit {

struct FimConfig {
  std::string token_prefix = "<|fim_prefix|>";
  std::string token_middle = "<|fim_middle|>";
  std::string token_suffix = "<|fim_suffix|>";
  double psm_probability = 0.5;
};

enum class FimLayout { kPsm, kSpm };

// Splits `text` at two uniformly drawn code-point boundaries into prefix,
// middle and suffix and emits them with their sentinel tokens:
//   PSM: <prefix>P <suffix>S <middle>M
//   SPM: <suffix>S <prefix>P <middle>M
// Throws std::invalid_argument on empty text, a text containing any of the
// sentinel tokens, or sentinel tokens that are empty or not pairwise distinct.
std::string fim_transform(std::string_view text, const FimConfig& config,
                          std::mt19937_64& rng);

// Deterministic core of fim_transform with explicit byte cut points
// (begin <= end <= text.size()). Performs the same validation.
std::string fim_rearrange(std::string_view text, std::size_t begin, std::size_t end,
                          FimLayout layout, const FimConfig& config);

struct RepoFile {
  std::string path;
  std::string text;
};

// Extension (without the dot) -> line patterns. Each pattern's first capture
// group is the imported module name.
using ImportPatterns = std::map<std::string, std::vector<std::regex>>;

const ImportPatterns& default_import_patterns();

// Matching is lexical and per line, so commented-out imports count. Unknown
// extensions yield an empty list.
std::vector<std::string> extract_imports(
    const RepoFile& file, const ImportPatterns& patterns = default_import_patterns());

// Nodes are indices into a file listing; an edge (u, v) means v depends on u.
struct DepGraph {
  std::size_t nodes = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

// Resolves each file's imports against the other paths in the listing and
// returns dependency -> dependent edges. Throws std::invalid_argument on
// duplicate paths.
DepGraph build_dep_graph(std::span<const RepoFile> files,
                         const ImportPatterns& patterns = default_import_patterns());

// Stable topological order of the listing: strongly connected components are
// collapsed, components are emitted by Kahn's algorithm preferring the
// smallest listing index, and members of a component keep listing order.
// Returns a permutation of [0, graph.nodes). Throws std::invalid_argument on
// out-of-range or self edges.
std::vector<std::size_t> topo_order(const DepGraph& graph);

std::vector<std::string> topo_order(const DepGraph& graph,
                                    std::span<const std::string> listing);

// Line-comment marker for a path's extension ("#" when unknown).
std::string_view comment_marker(std::string_view path);

// Header line "<marker> <path>", then the file text, files separated by one
// blank line. Throws std::invalid_argument for an empty file list.
std::string concat_repo(std::span<const RepoFile> ordered);

struct QaPair {
  std::string question;
  std::string answer;
};

// "<doc>\n\nQ: q1\nA: a1\n\nQ: q2\nA: a2\n". Throws std::invalid_argument for
// an empty pair list.
std::string append_qa(std::string_view document, std::span<const QaPair> pairs);

}  // namespace ptkit

#endif  // PTKIT_TRANSFORMS_H_
