// Copyright 2026 the ldpmatch authors
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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ldpmatch/ldp.hpp"

namespace ldpm {

// Content identifier: the SHA-256 digest of a block's bytes.
struct CID {
  std::array<std::uint8_t, 32> digest{};

  std::string hex() const;
  static CID from_hex(std::string_view text);

  auto operator<=>(const CID&) const = default;
};

CID compute_cid(std::span<const std::uint8_t> bytes);

enum class AccessKind : std::uint8_t { Public, Capability };

// A content-addressed unit. Capability blocks stand in for encrypted
// profiles: the bytes are only released to a fetcher presenting the exact
// token (an opaque stand-in for a decryption key, not real cryptography).
struct Block {
  CID cid;
  std::vector<std::uint8_t> bytes;
  AccessKind access = AccessKind::Public;
  std::string token;
};

// Mutable pointer from a stable name to the latest CID. Updates must carry
// sequence = old sequence + 1; resolution prefers the highest sequence seen.
struct NameRecord {
  std::string name;
  CID current;
  std::uint64_t sequence = 0;
};

// Pure helper: the successor record pointing at `cid`.
NameRecord update_name(const NameRecord& record, const CID& cid);

enum class Topology : std::uint8_t { Ring, Random };

struct SimConfig {
  std::uint32_t nodes = 16;
  Topology topology = Topology::Ring;
  std::uint32_t degree = 4;  // target average degree for Random (a connecting
                             // backbone chain is always included)
  std::uint32_t gossip_fanout = 2;
  double churn_offline_prob = 0.0;  // per node per round, i.i.d.
  std::uint32_t rounds = 10;
  Seed seed{1};
  // Replication clusters by name; empty means one cluster "all" spanning
  // every node.
  std::vector<std::pair<std::string, std::vector<std::uint32_t>>> clusters;
};

struct FetchResult {
  enum class Status : std::uint8_t { Ok, Unavailable, Denied };
  Status status = Status::Unavailable;
  std::vector<std::uint8_t> bytes;
};

// Deterministic synchronous-round simulator. A run covers rounds
// 0..config.rounds; round 0 starts with every node online (setup), later
// rounds draw fresh i.i.d. churn. Within a round the order is: churn, name
// cache refresh, scripted/API commands, one gossip hop, pinset repair,
// storage accounting. Everything is a pure function of (config, workload),
// so identical inputs give byte-identical reports.
class Simulator {
 public:
  explicit Simulator(const SimConfig& config);

  // Registers content without placing it on any node.
  CID register_public_block(std::vector<std::uint8_t> bytes);
  CID register_capability_block(std::vector<std::uint8_t> bytes, std::string token);

  void subscribe(std::uint32_t node, const std::string& topic);
  void force_offline(std::uint32_t node);   // offline until released, overrides churn
  void release_offline(std::uint32_t node); // back online this round, churn resumes next

  // Stores the block at the publisher and starts gossip of its CID on the
  // topic. The publisher must be online.
  void publish(std::uint32_t node, const std::string& topic, const CID& cid);

  // Serves the block from any online node holding it, enforcing the
  // capability token, and caches it at the (online) requester on success.
  FetchResult fetch(std::uint32_t node, const CID& cid,
                    const std::optional<std::string>& token = std::nullopt);

  // Designates r currently-online cluster members as replica holders. The
  // per-round repair step keeps the designation at r nodes, preferring
  // online ones, as long as an online copy exists to replicate from.
  void cluster_pin(const std::string& cluster, const CID& cid, std::uint32_t r);

  std::optional<NameRecord> name_record(const std::string& name) const;  // registry view
  void apply_name_update(const NameRecord& updated);  // StateError on stale sequence
  // The node's possibly-stale cached view (usable offline; caches refresh
  // while online, one round behind the registry).
  std::optional<CID> resolve_name(std::uint32_t node, const std::string& name) const;
  // Records the node's current resolution into the report.
  void scripted_resolve(std::uint32_t node, const std::string& name);

  // Finishes the current round (gossip, repair, accounting) and opens the
  // next one. Rejected once the configured final round has finished.
  void advance_round();
  // Finishes the current round without opening a new one; further mutating
  // calls are rejected. Idempotent.
  void finish();

  std::uint32_t current_round() const { return round_; }
  bool node_online(std::uint32_t node) const;
  bool node_stores(std::uint32_t node, const CID& cid) const;
  bool announcement_seen(std::uint32_t node, const CID& cid) const;
  const std::vector<std::uint32_t>& neighbors(std::uint32_t node) const;

  // Record of a scripted publish/fetch rejected because the node was
  // offline; kept in the report instead of aborting the run.
  void record_rejected_publish(std::uint32_t node, const std::string& topic, const CID& cid);
  void record_fetch_outcome(std::uint32_t node, const CID& cid, const FetchResult& result);
  void record_offline_fetch(std::uint32_t node, const CID& cid);

  nlohmann::ordered_json report() const;

 private:
  struct NodeState {
    bool online = true;
    bool forced_offline = false;
    std::set<CID> store;
    std::set<std::string> subscriptions;
    std::map<std::string, NameRecord> name_cache;
  };

  struct Message {
    std::string topic;
    CID cid;
    std::uint32_t publisher = 0;
    std::uint32_t publish_round = 0;
    std::uint32_t subscribers_at_publish = 0;
    std::set<std::uint32_t> holders;
    std::map<std::uint32_t, std::uint32_t> delivered_round;
    std::map<std::uint32_t, std::set<std::uint32_t>> sent;
  };

  struct PinState {
    std::uint32_t r = 0;
    std::uint32_t pin_round = 0;
    std::set<std::uint32_t> designated;
    std::uint64_t rounds_tracked = 0;
    std::uint64_t unavailable_rounds = 0;
    std::uint64_t repairs = 0;
  };

  struct ClusterState {
    std::vector<std::uint32_t> members;  // sorted, distinct
    std::map<CID, PinState> pins;
  };

  struct FetchRecord {
    std::uint32_t round = 0;
    std::uint32_t node = 0;
    CID cid;
    std::string status;
  };

  struct ResolveRecord {
    std::uint32_t round = 0;
    std::uint32_t node = 0;
    std::string name;
    std::optional<NameRecord> seen;
  };

  struct RejectRecord {
    std::uint32_t round = 0;
    std::uint32_t node = 0;
    std::string topic;
    CID cid;
  };

  void check_node(std::uint32_t node) const;
  void check_running() const;
  CID register_block(Block block);
  void build_topology();
  void sample_churn();
  void refresh_name_caches();
  void gossip_step();
  void repair_clusters();
  void account_storage();
  bool any_online_holder(const CID& cid) const;

  SimConfig config_;
  std::uint32_t round_ = 0;
  std::uint64_t rounds_finished_ = 0;
  bool finished_ = false;
  std::vector<NodeState> nodes_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
  std::map<CID, Block> blocks_;
  std::vector<Message> messages_;
  std::map<std::string, ClusterState> clusters_;
  std::map<std::string, NameRecord> registry_;
  std::map<CID, std::uint64_t> storage_node_rounds_;
  std::vector<FetchRecord> fetches_;
  std::vector<ResolveRecord> resolves_;
  std::vector<RejectRecord> rejected_publishes_;
  std::uint64_t sends_ = 0;
  std::uint64_t delivered_total_ = 0;
  std::uint64_t duplicates_suppressed_ = 0;
};

// Runs a line-oriented workload script over a fresh simulator. Commands:
//   round N                          advance to round N (N weakly increasing)
//   subscribe <node> <topic>
//   publish <node> <topic> <content> [token=<tok>]
//   fetch <node> <content> [token]
//   pin <cluster> <content> <r>
//   offline <node> / online <node>
//   name-update <name> <content>
//   resolve <node> <name>
// <content> is a 64-char hex CID, @<path> (hash the file's bytes), or
// inline:<text>. Malformed lines raise ParseError with their line number.
nlohmann::ordered_json run_simulation(const SimConfig& config, const std::string& workload_text);

}  // namespace ldpm
