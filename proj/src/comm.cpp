#include "reachguard/comm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace reachguard {

namespace {

constexpr std::uint8_t kMagic[4] = {'R', 'S', 'M', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
  return v;
}

double get_f64(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[at + i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace

ClockModel::ClockModel(AgentId agent_, double offset_, double delta_)
    : agent(agent_), offset(offset_), delta(delta_) {
  if (!(delta >= 0.0) || !(std::abs(offset) <= delta)) {
    throw InvalidInput("clock offset " + std::to_string(offset) + " exceeds bound " +
                       std::to_string(delta));
  }
}

std::vector<std::uint8_t> encode(const ReachMessage& msg) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + kIntervalBytes * msg.hull.dim());
  for (std::uint8_t b : kMagic) out.push_back(b);
  put_u32(out, msg.sender);
  put_f64(out, msg.t_send);
  put_f64(out, msg.t_rs);
  put_f64(out, msg.horizon);
  for (const auto& iv : msg.hull.intervals()) {
    put_f64(out, iv.lo);
    put_f64(out, iv.hi);
  }
  return out;
}

ReachMessage decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes + kIntervalBytes) {
    throw MalformedMessage("message too short: " + std::to_string(bytes.size()) + " bytes");
  }
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw MalformedMessage("bad magic");
  }
  if ((bytes.size() - kHeaderBytes) % kIntervalBytes != 0) {
    throw MalformedMessage("payload length " + std::to_string(bytes.size()) +
                           " is not 32 + 16n");
  }
  const std::size_t n = (bytes.size() - kHeaderBytes) / kIntervalBytes;

  ReachMessage msg;
  msg.sender = get_u32(bytes, 4);
  msg.t_send = get_f64(bytes, 8);
  msg.t_rs = get_f64(bytes, 16);
  msg.horizon = get_f64(bytes, 24);
  std::vector<Interval> dims;
  dims.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = get_f64(bytes, kHeaderBytes + kIntervalBytes * k);
    const double hi = get_f64(bytes, kHeaderBytes + kIntervalBytes * k + 8);
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
      throw MalformedMessage("interval " + std::to_string(k) + " is not a finite [lo, hi]");
    }
    dims.push_back({lo, hi});
  }
  msg.hull = HyperRectangle(std::move(dims));
  return msg;
}

void ChannelParams::validate() const {
  if (!(min_delay >= 0.0) || !(max_delay >= min_delay)) {
    throw InvalidInput("channel delay law needs 0 <= min_delay <= max_delay");
  }
  if (!(drop_prob >= 0.0 && drop_prob <= 1.0)) throw InvalidInput("drop_prob must lie in [0, 1]");
  if (!(corrupt_prob >= 0.0 && corrupt_prob <= 1.0)) {
    throw InvalidInput("corrupt_prob must lie in [0, 1]");
  }
  for (const auto& d : fixed_delay) {
    if (d && !(*d >= 0.0)) throw InvalidInput("fixed channel delay must be non-negative");
  }
}

ChannelModel::ChannelModel(ChannelParams params) : params_(std::move(params)), rng_(params_.seed) {
  params_.validate();
}

double ChannelModel::uniform01() {
  // 53 random mantissa bits; identical on every platform for a given seed.
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

std::vector<std::optional<double>> ChannelModel::send(const ReachMessage& msg, std::uint64_t msg_id,
                                                      std::span<const AgentId> recipients,
                                                      double t_global) {
  const auto bytes = encode(msg);
  std::vector<std::optional<double>> times;
  times.reserve(recipients.size());
  for (AgentId r : recipients) {
    const double u_drop = uniform01();
    const double u_delay = uniform01();
    const double u_corrupt = uniform01();

    double delay = params_.min_delay + (params_.max_delay - params_.min_delay) * u_delay;
    if (r < params_.fixed_delay.size() && params_.fixed_delay[r]) delay = *params_.fixed_delay[r];

    Entry e;
    e.delivery = {msg.sender, r, msg_id, t_global, t_global + delay, bytes};
    e.dropped = u_drop < params_.drop_prob;
    e.order = next_order_++;
    if (u_corrupt < params_.corrupt_prob) e.delivery.bytes.front() ^= 0xFF;
    if (e.dropped) {
      ++dropped_;
      times.push_back(std::nullopt);
    } else {
      times.push_back(e.delivery.delivery_time);
    }
    entries_.push_back(std::move(e));
  }
  return times;
}

std::vector<Delivery> ChannelModel::poll(AgentId recipient, double t_global) {
  std::vector<Entry> due;
  auto keep = std::stable_partition(entries_.begin(), entries_.end(), [&](const Entry& e) {
    return !(e.delivery.recipient == recipient &&
             (e.dropped || e.delivery.delivery_time <= t_global));
  });
  std::move(keep, entries_.end(), std::back_inserter(due));
  entries_.erase(keep, entries_.end());

  std::erase_if(due, [](const Entry& e) { return e.dropped; });
  std::sort(due.begin(), due.end(), [](const Entry& a, const Entry& b) {
    if (a.delivery.delivery_time != b.delivery.delivery_time) {
      return a.delivery.delivery_time < b.delivery.delivery_time;
    }
    return a.order < b.order;
  });
  std::vector<Delivery> out;
  out.reserve(due.size());
  for (auto& e : due) out.push_back(std::move(e.delivery));
  return out;
}

}  // namespace reachguard
