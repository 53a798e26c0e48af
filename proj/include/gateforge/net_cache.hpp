// Copyright 2026 The gateforge Authors
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

#pragma once

#include <bit>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

#include "gateforge/words.hpp"

namespace gateforge {

/// Nets keyed by (gate-set content hash, length budget, dedup tolerance).
/// Always memoized in memory; when a directory is given, complete nets are
/// also persisted there and reloaded by later processes.
class NetCache {
 public:
  explicit NetCache(std::filesystem::path directory = {},
                    double dedup_tol = kDefaultDedupTol,
                    std::size_t max_entries = kDefaultMaxEntries)
      : dir_(std::move(directory)), tol_(dedup_tol), max_entries_(max_entries) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }

  double dedup_tol() const noexcept { return tol_; }
  std::size_t max_entries() const noexcept { return max_entries_; }

  /// Throws BudgetExceeded when the net does not fit in max_entries.
  std::shared_ptr<const Net> get(const GateSet& gs, int n) {
    const Key key{content_hash(gs), n, std::bit_cast<std::uint64_t>(tol_)};
    std::lock_guard lock(mutex_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::shared_ptr<const Net> net;
    const auto path = file_for(key);
    if (!path.empty() && std::filesystem::exists(path)) {
      std::ifstream in(path, std::ios::binary);
      try {
        net = std::make_shared<const Net>(Net::read_binary(in, gs));
      } catch (const std::runtime_error&) {
        net.reset();  // unreadable cache file; rebuild below
      }
    }
    if (!net) {
      net = std::make_shared<const Net>(enumerate_net(gs, n, tol_, max_entries_));
      if (!path.empty()) {
        const auto tmp = path.string() + ".tmp";
        {
          std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
          net->write_binary(out);
        }
        std::filesystem::rename(tmp, path);
      }
    }
    memo_.emplace(key, net);
    return net;
  }

 private:
  using Key = std::tuple<std::uint64_t, int, std::uint64_t>;

  std::filesystem::path file_for(const Key& key) const {
    if (dir_.empty()) return {};
    std::ostringstream name;
    name << "net-" << std::hex << std::get<0>(key) << "-n" << std::dec << std::get<1>(key)
         << "-tol" << std::hex << std::get<2>(key) << ".bin";
    return dir_ / name.str();
  }

  std::filesystem::path dir_;
  double tol_;
  std::size_t max_entries_;
  std::mutex mutex_;
  std::map<Key, std::shared_ptr<const Net>> memo_;
};

}  // namespace gateforge
