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

#include "ldpmatch/netsim.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>
#include <utility>

#include "ldpmatch/errors.hpp"
#include "ldpmatch/rng.hpp"
#include "ldpmatch/sha256.hpp"

using ordered_json = nlohmann::ordered_json;

namespace ldpm {
namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::vector<std::uint32_t> shuffled_indices(rng::SplitMix& gen, std::uint32_t n) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  for (std::uint32_t i = 0; i + 1 < n; ++i) {
    std::swap(order[i], order[i + static_cast<std::uint32_t>(gen.below(n - i))]);
  }
  return order;
}

}  // namespace

std::string CID::hex() const { return hex_digest(digest); }

CID CID::from_hex(std::string_view text) {
  if (text.size() != 64) {
    throw ParseError("CID must be 64 hex characters, got " + std::to_string(text.size()));
  }
  CID cid;
  for (std::size_t i = 0; i < 32; ++i) {
    const int hi = hex_value(text[2 * i]);
    const int lo = hex_value(text[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw ParseError("CID contains a non-hex character at offset " + std::to_string(2 * i));
    }
    cid.digest[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return cid;
}

CID compute_cid(std::span<const std::uint8_t> bytes) { return CID{sha256(bytes)}; }

NameRecord update_name(const NameRecord& record, const CID& cid) {
  return NameRecord{record.name, cid, record.sequence + 1};
}

Simulator::Simulator(const SimConfig& config) : config_(config) {
  if (config_.nodes < 1) throw ConfigError("node count must be positive");
  if (config_.gossip_fanout < 1) throw ConfigError("gossip fanout must be positive");
  if (!(config_.churn_offline_prob >= 0.0) || config_.churn_offline_prob >= 1.0) {
    throw ConfigError("churn offline probability must lie in [0, 1)");
  }
  if (config_.topology == Topology::Random && config_.degree < 1) {
    throw ConfigError("random topology degree must be positive");
  }
  nodes_.resize(config_.nodes);
  build_topology();

  if (config_.clusters.empty()) {
    std::vector<std::uint32_t> all(config_.nodes);
    std::iota(all.begin(), all.end(), 0u);
    config_.clusters.emplace_back("all", std::move(all));
  }
  for (const auto& [name, members] : config_.clusters) {
    if (name.empty()) throw ConfigError("cluster with empty name");
    if (members.empty()) throw ConfigError("cluster " + name + " has no members");
    if (clusters_.count(name)) throw ConfigError("duplicate cluster name " + name);
    ClusterState state;
    state.members = members;
    std::sort(state.members.begin(), state.members.end());
    for (std::size_t i = 0; i < state.members.size(); ++i) {
      if (state.members[i] >= config_.nodes) {
        throw ConfigError("cluster " + name + " member " + std::to_string(state.members[i]) +
                          " does not exist");
      }
      if (i > 0 && state.members[i] == state.members[i - 1]) {
        throw ConfigError("cluster " + name + " lists member " +
                          std::to_string(state.members[i]) + " twice");
      }
    }
    clusters_.emplace(name, std::move(state));
  }
}

void Simulator::build_topology() {
  const std::uint32_t n = config_.nodes;
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  auto add_edge = [&](std::uint32_t a, std::uint32_t b) {
    if (a == b) return false;
    return edges.insert({std::min(a, b), std::max(a, b)}).second;
  };
  if (config_.topology == Topology::Ring) {
    for (std::uint32_t i = 0; i < n; ++i) add_edge(i, (i + 1) % n);
  } else {
    rng::SplitMix gen(rng::derive_seed(config_.seed.value, "topology"));
    // A shuffled backbone chain keeps the graph connected; extra random
    // edges bring the average degree up to the configured target.
    const std::vector<std::uint32_t> order = shuffled_indices(gen, n);
    for (std::uint32_t i = 1; i < n; ++i) add_edge(order[i - 1], order[i]);
    const std::size_t target =
        std::max<std::size_t>(n > 0 ? n - 1 : 0,
                              static_cast<std::size_t>(n) * config_.degree / 2);
    std::size_t attempts = 0;
    while (edges.size() < target && attempts < 20 * (target + 1)) {
      ++attempts;
      add_edge(static_cast<std::uint32_t>(gen.below(n)),
               static_cast<std::uint32_t>(gen.below(n)));
    }
  }
  adjacency_.assign(n, {});
  for (const auto& [a, b] : edges) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
}

void Simulator::check_node(std::uint32_t node) const {
  if (node >= config_.nodes) {
    throw InvalidInputError("node " + std::to_string(node) + " does not exist (have " +
                            std::to_string(config_.nodes) + ")");
  }
}

void Simulator::check_running() const {
  if (finished_) throw StateError("simulation already finished");
}

CID Simulator::register_block(Block block) {
  check_running();
  block.cid = compute_cid(block.bytes);
  const auto it = blocks_.find(block.cid);
  if (it != blocks_.end()) {
    if (it->second.access != block.access || it->second.token != block.token) {
      throw InvalidInputError("content " + block.cid.hex() +
                              " already registered with different access");
    }
    return block.cid;
  }
  const CID cid = block.cid;
  blocks_.emplace(cid, std::move(block));
  return cid;
}

CID Simulator::register_public_block(std::vector<std::uint8_t> bytes) {
  Block block;
  block.bytes = std::move(bytes);
  block.access = AccessKind::Public;
  return register_block(std::move(block));
}

CID Simulator::register_capability_block(std::vector<std::uint8_t> bytes, std::string token) {
  if (token.empty()) throw InvalidInputError("capability token must be non-empty");
  Block block;
  block.bytes = std::move(bytes);
  block.access = AccessKind::Capability;
  block.token = std::move(token);
  return register_block(std::move(block));
}

void Simulator::subscribe(std::uint32_t node, const std::string& topic) {
  check_running();
  check_node(node);
  if (topic.empty()) throw InvalidInputError("empty topic");
  nodes_[node].subscriptions.insert(topic);
}

void Simulator::force_offline(std::uint32_t node) {
  check_running();
  check_node(node);
  nodes_[node].forced_offline = true;
  nodes_[node].online = false;
}

void Simulator::release_offline(std::uint32_t node) {
  check_running();
  check_node(node);
  nodes_[node].forced_offline = false;
  nodes_[node].online = true;
}

void Simulator::publish(std::uint32_t node, const std::string& topic, const CID& cid) {
  check_running();
  check_node(node);
  if (topic.empty()) throw InvalidInputError("empty topic");
  if (!nodes_[node].online) throw StateError("publisher is offline");
  if (!blocks_.count(cid)) {
    throw InvalidInputError("cannot publish unregistered content " + cid.hex());
  }
  nodes_[node].store.insert(cid);
  Message msg;
  msg.topic = topic;
  msg.cid = cid;
  msg.publisher = node;
  msg.publish_round = round_;
  for (std::uint32_t i = 0; i < config_.nodes; ++i) {
    if (i != node && nodes_[i].subscriptions.count(topic)) ++msg.subscribers_at_publish;
  }
  msg.holders.insert(node);
  messages_.push_back(std::move(msg));
}

bool Simulator::any_online_holder(const CID& cid) const {
  for (const NodeState& node : nodes_) {
    if (node.online && node.store.count(cid)) return true;
  }
  return false;
}

FetchResult Simulator::fetch(std::uint32_t node, const CID& cid,
                             const std::optional<std::string>& token) {
  check_running();
  check_node(node);
  if (!nodes_[node].online) throw StateError("requester is offline");
  if (!any_online_holder(cid)) return FetchResult{FetchResult::Status::Unavailable, {}};
  const Block& block = blocks_.at(cid);
  if (block.access == AccessKind::Capability && (!token || *token != block.token)) {
    return FetchResult{FetchResult::Status::Denied, {}};
  }
  nodes_[node].store.insert(cid);
  return FetchResult{FetchResult::Status::Ok, block.bytes};
}

void Simulator::cluster_pin(const std::string& cluster, const CID& cid, std::uint32_t r) {
  check_running();
  const auto it = clusters_.find(cluster);
  if (it == clusters_.end()) throw InvalidInputError("unknown cluster " + cluster);
  ClusterState& state = it->second;
  if (r < 1) throw InvalidInputError("replication factor must be positive");
  if (r > state.members.size()) {
    throw ConfigError("replication factor " + std::to_string(r) + " exceeds cluster size " +
                      std::to_string(state.members.size()));
  }
  if (!blocks_.count(cid)) {
    throw InvalidInputError("cannot pin unregistered content " + cid.hex());
  }
  if (state.pins.count(cid)) {
    throw InvalidInputError("content " + cid.hex() + " already pinned in cluster " + cluster);
  }
  PinState pin;
  pin.r = r;
  pin.pin_round = round_;
  for (std::uint32_t member : state.members) {
    if (pin.designated.size() == r) break;
    if (nodes_[member].online) {
      pin.designated.insert(member);
      nodes_[member].store.insert(cid);
    }
  }
  state.pins.emplace(cid, std::move(pin));
}

std::optional<NameRecord> Simulator::name_record(const std::string& name) const {
  const auto it = registry_.find(name);
  if (it == registry_.end()) return std::nullopt;
  return it->second;
}

void Simulator::apply_name_update(const NameRecord& updated) {
  check_running();
  if (updated.name.empty()) throw InvalidInputError("empty record name");
  const auto it = registry_.find(updated.name);
  const std::uint64_t expected = (it == registry_.end() ? 0 : it->second.sequence) + 1;
  if (updated.sequence != expected) {
    throw StateError("stale sequence " + std::to_string(updated.sequence) + " for record " +
                     updated.name + ", expected " + std::to_string(expected));
  }
  registry_[updated.name] = updated;
}

std::optional<CID> Simulator::resolve_name(std::uint32_t node, const std::string& name) const {
  check_node(node);
  const auto& cache = nodes_[node].name_cache;
  const auto it = cache.find(name);
  if (it == cache.end()) return std::nullopt;
  return it->second.current;
}

void Simulator::scripted_resolve(std::uint32_t node, const std::string& name) {
  check_running();
  check_node(node);
  ResolveRecord record;
  record.round = round_;
  record.node = node;
  record.name = name;
  const auto it = nodes_[node].name_cache.find(name);
  if (it != nodes_[node].name_cache.end()) record.seen = it->second;
  resolves_.push_back(std::move(record));
}

void Simulator::record_rejected_publish(std::uint32_t node, const std::string& topic,
                                        const CID& cid) {
  rejected_publishes_.push_back({round_, node, topic, cid});
}

void Simulator::record_fetch_outcome(std::uint32_t node, const CID& cid,
                                     const FetchResult& result) {
  const char* status = "unavailable";
  if (result.status == FetchResult::Status::Ok) status = "ok";
  if (result.status == FetchResult::Status::Denied) status = "denied";
  fetches_.push_back({round_, node, cid, status});
}

void Simulator::record_offline_fetch(std::uint32_t node, const CID& cid) {
  fetches_.push_back({round_, node, cid, "offline"});
}

void Simulator::sample_churn() {
  for (std::uint32_t i = 0; i < config_.nodes; ++i) {
    NodeState& node = nodes_[i];
    if (node.forced_offline) {
      node.online = false;
      continue;
    }
    const std::uint64_t bits = rng::stream(rng::derive_seed(config_.seed.value, "churn", i),
                                           round_);
    node.online = rng::uniform01(bits) >= config_.churn_offline_prob;
  }
}

void Simulator::refresh_name_caches() {
  for (NodeState& node : nodes_) {
    if (node.online) node.name_cache = registry_;
  }
}

void Simulator::gossip_step() {
  for (Message& msg : messages_) {
    const std::set<std::uint32_t> holders_snapshot = msg.holders;
    for (std::uint32_t holder : holders_snapshot) {
      if (!nodes_[holder].online) continue;
      std::set<std::uint32_t>& sent = msg.sent[holder];
      std::uint32_t budget = config_.gossip_fanout;
      for (std::uint32_t neighbor : adjacency_[holder]) {
        if (budget == 0) break;
        if (sent.count(neighbor)) continue;
        if (!nodes_[neighbor].subscriptions.count(msg.topic)) continue;
        sent.insert(neighbor);
        ++sends_;
        --budget;
        if (!nodes_[neighbor].online) continue;  // send lost, no retry
        if (neighbor == msg.publisher || msg.delivered_round.count(neighbor)) {
          ++duplicates_suppressed_;
          continue;
        }
        msg.delivered_round.emplace(neighbor, round_);
        msg.holders.insert(neighbor);
        nodes_[neighbor].store.insert(msg.cid);
        ++delivered_total_;
      }
    }
  }
}

void Simulator::repair_clusters() {
  for (auto& [cluster_name, cluster] : clusters_) {
    for (auto& [cid, pin] : cluster.pins) {
      std::uint32_t online_designated = 0;
      for (std::uint32_t member : pin.designated) {
        if (nodes_[member].online) ++online_designated;
      }
      if (round_ > pin.pin_round) {
        ++pin.rounds_tracked;
        if (online_designated == 0) ++pin.unavailable_rounds;
      }
      // Re-replication needs a live copy to pull from.
      if (online_designated == 0 && !any_online_holder(cid)) continue;
      std::set<std::uint32_t> next;
      for (std::uint32_t member : pin.designated) {
        if (nodes_[member].online) next.insert(member);
      }
      for (std::uint32_t member : cluster.members) {
        if (next.size() == pin.r) break;
        if (nodes_[member].online && !next.count(member)) next.insert(member);
      }
      for (std::uint32_t member : pin.designated) {
        if (next.size() == pin.r) break;
        next.insert(member);  // keep an offline replica rather than drop below r
      }
      for (std::uint32_t member : pin.designated) {
        if (!next.count(member)) nodes_[member].store.erase(cid);
      }
      for (std::uint32_t member : next) {
        if (!pin.designated.count(member)) {
          nodes_[member].store.insert(cid);
          ++pin.repairs;
        }
      }
      pin.designated = std::move(next);
    }
  }
}

void Simulator::account_storage() {
  for (const NodeState& node : nodes_) {
    for (const CID& cid : node.store) ++storage_node_rounds_[cid];
  }
}

void Simulator::advance_round() {
  check_running();
  if (round_ >= config_.rounds) {
    throw StateError("all configured rounds have run; call finish()");
  }
  gossip_step();
  repair_clusters();
  account_storage();
  ++rounds_finished_;
  ++round_;
  sample_churn();
  refresh_name_caches();
}

void Simulator::finish() {
  if (finished_) return;
  gossip_step();
  repair_clusters();
  account_storage();
  ++rounds_finished_;
  finished_ = true;
}

bool Simulator::node_online(std::uint32_t node) const {
  check_node(node);
  return nodes_[node].online;
}

bool Simulator::node_stores(std::uint32_t node, const CID& cid) const {
  check_node(node);
  return nodes_[node].store.count(cid) > 0;
}

bool Simulator::announcement_seen(std::uint32_t node, const CID& cid) const {
  check_node(node);
  for (const Message& msg : messages_) {
    if (msg.cid != cid) continue;
    if (msg.publisher == node || msg.delivered_round.count(node)) return true;
  }
  return false;
}

const std::vector<std::uint32_t>& Simulator::neighbors(std::uint32_t node) const {
  check_node(node);
  return adjacency_[node];
}

ordered_json Simulator::report() const {
  ordered_json out;
  ordered_json config;
  config["nodes"] = config_.nodes;
  config["topology"] = config_.topology == Topology::Ring ? "ring" : "random";
  config["degree"] = config_.degree;
  config["gossip_fanout"] = config_.gossip_fanout;
  config["churn_offline_prob"] = config_.churn_offline_prob;
  config["rounds"] = config_.rounds;
  config["seed"] = config_.seed.value;
  ordered_json clusters = ordered_json::object();
  for (const auto& [name, cluster] : clusters_) clusters[name] = cluster.members;
  config["clusters"] = std::move(clusters);
  out["config"] = std::move(config);
  out["rounds_executed"] = rounds_finished_;

  ordered_json totals;
  totals["published"] = messages_.size();
  totals["sends"] = sends_;
  totals["delivered"] = delivered_total_;
  totals["duplicates_suppressed"] = duplicates_suppressed_;
  totals["rejected_publishes"] = rejected_publishes_.size();
  out["messages"] = std::move(totals);

  ordered_json deliveries = ordered_json::array();
  for (const Message& msg : messages_) {
    ordered_json entry;
    entry["cid"] = msg.cid.hex();
    entry["topic"] = msg.topic;
    entry["publisher"] = msg.publisher;
    entry["publish_round"] = msg.publish_round;
    entry["subscribers_at_publish"] = msg.subscribers_at_publish;
    entry["delivered"] = msg.delivered_round.size();
    std::map<std::uint32_t, std::uint64_t> histogram;
    for (const auto& [node, round] : msg.delivered_round) {
      ++histogram[round - msg.publish_round + 1];
    }
    ordered_json histogram_json = ordered_json::object();
    for (const auto& [delay, count] : histogram) {
      histogram_json[std::to_string(delay)] = count;
    }
    entry["delay_histogram"] = std::move(histogram_json);
    deliveries.push_back(std::move(entry));
  }
  out["deliveries"] = std::move(deliveries);

  ordered_json fetches = ordered_json::array();
  for (const FetchRecord& f : fetches_) {
    ordered_json entry;
    entry["round"] = f.round;
    entry["node"] = f.node;
    entry["cid"] = f.cid.hex();
    entry["status"] = f.status;
    fetches.push_back(std::move(entry));
  }
  out["fetches"] = std::move(fetches);

  ordered_json availability = ordered_json::array();
  for (const auto& [cluster_name, cluster] : clusters_) {
    for (const auto& [cid, pin] : cluster.pins) {
      ordered_json entry;
      entry["cluster"] = cluster_name;
      entry["cid"] = cid.hex();
      entry["r"] = pin.r;
      entry["pin_round"] = pin.pin_round;
      entry["rounds_tracked"] = pin.rounds_tracked;
      entry["unavailable_rounds"] = pin.unavailable_rounds;
      entry["unavailable_ratio"] =
          pin.rounds_tracked == 0
              ? 0.0
              : static_cast<double>(pin.unavailable_rounds) /
                    static_cast<double>(pin.rounds_tracked);
      entry["repairs"] = pin.repairs;
      availability.push_back(std::move(entry));
    }
  }
  out["availability"] = std::move(availability);

  ordered_json names = ordered_json::array();
  for (const auto& [name, record] : registry_) {
    ordered_json entry;
    entry["name"] = name;
    entry["sequence"] = record.sequence;
    entry["cid"] = record.current.hex();
    names.push_back(std::move(entry));
  }
  out["names"] = std::move(names);

  ordered_json resolves = ordered_json::array();
  for (const ResolveRecord& r : resolves_) {
    ordered_json entry;
    entry["round"] = r.round;
    entry["node"] = r.node;
    entry["name"] = r.name;
    entry["found"] = r.seen.has_value();
    entry["cid"] = r.seen ? r.seen->current.hex() : "";
    entry["sequence"] = r.seen ? r.seen->sequence : 0;
    resolves.push_back(std::move(entry));
  }
  out["resolves"] = std::move(resolves);

  ordered_json rejected = ordered_json::array();
  for (const RejectRecord& r : rejected_publishes_) {
    ordered_json entry;
    entry["round"] = r.round;
    entry["node"] = r.node;
    entry["topic"] = r.topic;
    entry["cid"] = r.cid.hex();
    rejected.push_back(std::move(entry));
  }
  out["rejected"] = std::move(rejected);

  ordered_json storage = ordered_json::array();
  for (const auto& [cid, block] : blocks_) {
    ordered_json entry;
    entry["cid"] = cid.hex();
    entry["bytes"] = block.bytes.size();
    const auto it = storage_node_rounds_.find(cid);
    entry["node_rounds"] = it == storage_node_rounds_.end() ? 0 : it->second;
    storage.push_back(std::move(entry));
  }
  out["storage"] = std::move(storage);
  return out;
}

namespace {

struct WorkloadCommand {
  std::size_t line = 0;
  std::string op;
  std::uint32_t round = 0;
  std::uint32_t node = 0;
  std::uint32_t r = 0;
  std::string a;      // topic / cluster / name
  std::string content;
  std::optional<std::string> token;
};

std::uint32_t parse_u32(const std::string& text, std::size_t line, const char* what) {
  try {
    std::size_t used = 0;
    const unsigned long value = std::stoul(text, &used);
    if (used != text.size() || value > 0xFFFFFFFFul) throw std::invalid_argument("range");
    return static_cast<std::uint32_t>(value);
  } catch (const std::exception&) {
    throw ParseError("workload:" + std::to_string(line) + ": bad " + what + " '" + text + "'");
  }
}

std::vector<WorkloadCommand> parse_workload(const std::string& text) {
  std::vector<WorkloadCommand> commands;
  std::istringstream stream(text);
  std::string raw;
  std::size_t line_no = 0;
  std::uint32_t last_round = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::istringstream line(raw);
    std::vector<std::string> words;
    for (std::string word; line >> word;) words.push_back(std::move(word));
    if (words.empty() || words[0][0] == '#') continue;
    auto fail = [&](const std::string& msg) -> ParseError {
      return ParseError("workload:" + std::to_string(line_no) + ": " + msg);
    };
    auto need = [&](std::size_t min_args, std::size_t max_args) {
      const std::size_t got = words.size() - 1;
      if (got < min_args || got > max_args) {
        throw fail(words[0] + " takes " + std::to_string(min_args) +
                   (max_args != min_args ? ".." + std::to_string(max_args) : "") +
                   " arguments, got " + std::to_string(got));
      }
    };
    WorkloadCommand cmd;
    cmd.line = line_no;
    cmd.op = words[0];
    if (cmd.op == "round") {
      need(1, 1);
      cmd.round = parse_u32(words[1], line_no, "round number");
      if (cmd.round < last_round) throw fail("round numbers must not decrease");
      last_round = cmd.round;
    } else if (cmd.op == "subscribe") {
      need(2, 2);
      cmd.node = parse_u32(words[1], line_no, "node");
      cmd.a = words[2];
    } else if (cmd.op == "publish") {
      need(3, 4);
      cmd.node = parse_u32(words[1], line_no, "node");
      cmd.a = words[2];
      cmd.content = words[3];
      if (words.size() == 5) {
        if (words[4].rfind("token=", 0) != 0 || words[4].size() == 6) {
          throw fail("publish option must be token=<tok>");
        }
        cmd.token = words[4].substr(6);
      }
    } else if (cmd.op == "fetch") {
      need(2, 3);
      cmd.node = parse_u32(words[1], line_no, "node");
      cmd.content = words[2];
      if (words.size() == 4) cmd.token = words[3];
    } else if (cmd.op == "pin") {
      need(3, 3);
      cmd.a = words[1];
      cmd.content = words[2];
      cmd.r = parse_u32(words[3], line_no, "replication factor");
    } else if (cmd.op == "offline" || cmd.op == "online") {
      need(1, 1);
      cmd.node = parse_u32(words[1], line_no, "node");
    } else if (cmd.op == "name-update") {
      need(2, 2);
      cmd.a = words[1];
      cmd.content = words[2];
    } else if (cmd.op == "resolve") {
      need(2, 2);
      cmd.node = parse_u32(words[1], line_no, "node");
      cmd.a = words[2];
    } else {
      throw fail("unknown command '" + cmd.op + "'");
    }
    commands.push_back(std::move(cmd));
  }
  return commands;
}

bool looks_like_cid(const std::string& text) {
  if (text.size() != 64) return false;
  for (char c : text) {
    if (!std::isxdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Turns a <content> argument into a registered CID. File (bare path or
// @path) and inline: forms register the bytes, as a capability block when
// reg_token is set; a 64-hex CID refers to content the simulator already
// knows. Commands that take a CID, not content, set allow_bare_path false.
CID resolve_content(Simulator& sim, const WorkloadCommand& cmd,
                    const std::optional<std::string>& reg_token, bool allow_bare_path) {
  const std::string& text = cmd.content;
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError("workload:" + std::to_string(cmd.line) + ": " + msg);
  };
  std::vector<std::uint8_t> bytes;
  if (text.rfind("inline:", 0) == 0) {
    const std::string payload = text.substr(7);
    bytes.assign(payload.begin(), payload.end());
  } else if (!text.empty() && text[0] == '@') {
    const std::string path = text.substr(1);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fail("cannot open content file " + path);
    bytes.assign((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  } else if (looks_like_cid(text)) {
    if (reg_token) throw fail("token= needs file or inline: content, not a CID");
    try {
      return CID::from_hex(text);
    } catch (const ParseError& e) {
      throw fail(e.what());
    }
  } else if (allow_bare_path) {
    std::ifstream in(text, std::ios::binary);
    if (!in) throw fail("cannot open content file " + text);
    bytes.assign((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  } else {
    throw fail("expected a 64-hex CID, got '" + text + "'");
  }
  return reg_token ? sim.register_capability_block(std::move(bytes), *reg_token)
                   : sim.register_public_block(std::move(bytes));
}

}  // namespace

ordered_json run_simulation(const SimConfig& config, const std::string& workload_text) {
  const std::vector<WorkloadCommand> commands = parse_workload(workload_text);
  for (const WorkloadCommand& cmd : commands) {
    if (cmd.op == "round" && cmd.round > config.rounds) {
      throw ParseError("workload:" + std::to_string(cmd.line) + ": round " +
                       std::to_string(cmd.round) + " exceeds configured rounds " +
                       std::to_string(config.rounds));
    }
  }
  Simulator sim(config);
  for (const WorkloadCommand& cmd : commands) {
    try {
      if (cmd.op == "round") {
        while (sim.current_round() < cmd.round) sim.advance_round();
      } else if (cmd.op == "subscribe") {
        sim.subscribe(cmd.node, cmd.a);
      } else if (cmd.op == "publish") {
        const CID cid = resolve_content(sim, cmd, cmd.token, true);
        if (!sim.node_online(cmd.node)) {
          sim.record_rejected_publish(cmd.node, cmd.a, cid);
        } else {
          sim.publish(cmd.node, cmd.a, cid);
        }
      } else if (cmd.op == "fetch") {
        const CID cid = resolve_content(sim, cmd, std::nullopt, false);
        if (!sim.node_online(cmd.node)) {
          sim.record_offline_fetch(cmd.node, cid);
        } else {
          sim.record_fetch_outcome(cmd.node, cid, sim.fetch(cmd.node, cid, cmd.token));
        }
      } else if (cmd.op == "pin") {
        sim.cluster_pin(cmd.a, resolve_content(sim, cmd, std::nullopt, false), cmd.r);
      } else if (cmd.op == "offline") {
        sim.force_offline(cmd.node);
      } else if (cmd.op == "online") {
        sim.release_offline(cmd.node);
      } else if (cmd.op == "name-update") {
        const CID cid = resolve_content(sim, cmd, std::nullopt, true);
        const auto existing = sim.name_record(cmd.a);
        sim.apply_name_update(update_name(existing.value_or(NameRecord{cmd.a, {}, 0}), cid));
      } else if (cmd.op == "resolve") {
        sim.scripted_resolve(cmd.node, cmd.a);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError("workload:" + std::to_string(cmd.line) + ": " + e.what());
    }
  }
  while (sim.current_round() < config.rounds) sim.advance_round();
  sim.finish();
  return sim.report();
}

}  // namespace ldpm
