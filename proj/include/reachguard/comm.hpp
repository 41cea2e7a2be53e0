#pragma once

// Clock skew, the reach-set wire format and the simulated asynchronous channel.
//
// Wire layout (all little-endian):
//   offset  size  field
//   0       4     magic "RSM1"
//   4       4     sender id, uint32
//   8       8     t_send, float64 (sender-local seconds)
//   16      8     t_rs, float64 (sender-local seconds)
//   24      8     horizon T, float64 (seconds)
//   32      16n   n x (lo float64, hi float64)
// The interval count n is implied by the length, which is exactly 32 + 16 n
// bytes with n >= 1.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "reachguard/geometry.hpp"

namespace reachguard {

using AgentId = std::uint32_t;

struct ClockModel {
  AgentId agent = 0;
  double offset = 0.0;  // local minus global, seconds
  double delta = 0.0;   // synchronisation error bound

  ClockModel() = default;
  // Throws InvalidInput unless |offset| <= delta.
  ClockModel(AgentId agent, double offset, double delta);

  double local_time(double t_global) const { return t_global + offset; }
  double global_time(double t_local) const { return t_local - offset; }
};

struct ReachMessage {
  AgentId sender = 0;
  double t_rs = 0.0;
  double horizon = 0.0;
  HyperRectangle hull{Interval{}};
  double t_send = 0.0;

  friend bool operator==(const ReachMessage&, const ReachMessage&) = default;
};

inline constexpr std::size_t kHeaderBytes = 32;
inline constexpr std::size_t kIntervalBytes = 16;

std::vector<std::uint8_t> encode(const ReachMessage& msg);
// Throws MalformedMessage on bad magic, a length that is not 32 + 16 n, or
// non-finite / unordered intervals.
ReachMessage decode(std::span<const std::uint8_t> bytes);

struct ChannelParams {
  double min_delay = 0.0005;  // seconds
  double max_delay = 0.003;
  double drop_prob = 0.0;
  double corrupt_prob = 0.0;  // flips the first byte of the copy sent to a recipient
  std::uint64_t seed = 1;
  // Fixed per-recipient delay overriding the uniform law, indexed by recipient id.
  std::vector<std::optional<double>> fixed_delay;

  void validate() const;
};

struct Delivery {
  AgentId sender = 0;
  AgentId recipient = 0;
  std::uint64_t msg_id = 0;
  double send_time = 0.0;  // global
  double delivery_time = 0.0;
  std::vector<std::uint8_t> bytes;
};

class ChannelModel {
 public:
  explicit ChannelModel(ChannelParams params);

  // Puts one in-flight copy per recipient; each draws a drop decision and a
  // delay from the seeded generator, in recipient order. Returns the
  // delivery times (nullopt for dropped copies) in the same order.
  std::vector<std::optional<double>> send(const ReachMessage& msg, std::uint64_t msg_id,
                                          std::span<const AgentId> recipients, double t_global);

  // Removes and returns every copy for `recipient` due at or before
  // `t_global`, ordered by delivery time. Dropped copies for the recipient
  // are discarded silently.
  std::vector<Delivery> poll(AgentId recipient, double t_global);

  std::size_t in_flight() const { return entries_.size(); }
  std::size_t dropped() const { return dropped_; }
  const ChannelParams& params() const { return params_; }

 private:
  struct Entry {
    Delivery delivery;
    bool dropped = false;
    std::uint64_t order = 0;
  };

  double uniform01();

  ChannelParams params_;
  std::mt19937_64 rng_;
  std::vector<Entry> entries_;
  std::uint64_t next_order_ = 0;
  std::size_t dropped_ = 0;
};

}  // namespace reachguard
