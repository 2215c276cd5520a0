#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "algsim/alg_pipeline.hpp"
#include "algsim/frame.hpp"
#include "algsim/net_config.hpp"
#include "algsim/policy.hpp"
#include "algsim/vtime.hpp"

namespace algsim {

enum class TraceAction { Inject, Switch, Enqueue, Forward, Deliver, Drop };

const char* trace_action_name(TraceAction action);

struct TraceEntry {
  VirtualTime time = 0;
  std::uint64_t frame_id = 0;
  TraceAction action = TraceAction::Inject;
  std::string node;
  std::string detail;
};

// One hop per line: {"time","frame_id","node","action","detail"}, times in
// fixed six-decimal milliseconds. Byte-stable for identical runs.
void write_trace_jsonl(const std::vector<TraceEntry>& entries,
                       std::ostream& os);

struct Reachability {
  bool reply = false;
  std::string reason;
  std::string drop_point;
};

struct NetworkOptions {
  bool record_trace = true;
  bool record_inboxes = true;
  std::uint64_t event_budget = 10'000'000;
};

// Everything the simulator knows about one frame: its latest wire form, how
// it ended (every frame ends exactly once, delivered somewhere or dropped
// with a reason), gateway queue timestamps when it was serviced, and the
// inspection notes the gateway attached.
struct FrameRecord {
  Frame frame;
  enum class End { Pending, Delivered, Dropped } end = End::Pending;
  std::string end_node;
  std::string drop_reason;
  std::string drop_cwe;
  VlanId origin_vlan = 0;
  bool via_gateway = false;
  std::optional<VirtualTime> arrival;
  std::optional<VirtualTime> departure;
  std::int64_t regex_steps = 0;
  std::vector<std::string> notes;
};

// Deterministic discrete-event simulation of the VLAN fabric: per-VLAN
// switches, one gateway running the enforcement pipeline as a single-server
// FIFO queue, and scripted hosts that answer pings, HTTP requests, and FTP
// commands addressed to them. Links are instantaneous; all latency comes
// from the gateway's service time. Ties in time resolve by scheduling
// order, so identical inputs always produce identical traces.
class Network {
 public:
  Network(NetworkConfig net, PolicySet policy, NetworkOptions options = {});

  // Puts a frame on the named host's wire at virtual time `at`. The frame's
  // ingress VLAN is forced to the host's VLAN; its source addresses are
  // taken as-is, which is how spoofed traffic enters. Returns the frame id.
  std::uint64_t inject_frame(const std::string& host_name, Frame frame,
                             VirtualTime at);

  // Drains the event queue. Throws SimOverrunError past the event budget.
  void run_until_idle();

  // Sends one echo request from the named host and reports whether the
  // reply made it back, or where the exchange died. Runs the queue dry.
  Reachability icmp_probe(const std::string& src_host, const IpAddr& dst_ip);
  std::uint64_t last_probe_request_id() const { return last_probe_request_; }

  // Gateway queue latency (departure minus arrival) for a serviced frame.
  // Throws NotCompletedError for frames that never finished service.
  VirtualTime latency_of(std::uint64_t frame_id) const;

  const std::vector<TraceEntry>& trace() const { return trace_; }
  const std::vector<std::pair<VirtualTime, Frame>>& inbox(
      const std::string& host_name) const;
  const std::map<std::uint64_t, FrameRecord>& records() const {
    return records_;
  }
  const FrameRecord* record(std::uint64_t frame_id) const;

  void write_trace_jsonl(std::ostream& os) const;

  const NetworkConfig& config() const { return net_; }
  const PolicySet& policy() const { return policy_; }
  std::uint64_t events_processed() const { return events_processed_; }
  std::int64_t poison_rejections() const {
    return pipeline_.poison_rejections();
  }
  VirtualTime now() const { return now_; }

  // Ids of frames that neither delivered nor dropped; empty after a
  // completed run, by the conservation invariant.
  std::vector<std::uint64_t> unresolved_frames() const;

 private:
  struct Event {
    VirtualTime time = 0;
    std::uint64_t seq = 0;
    enum class Kind { Wire, GatewayEmit } kind = Kind::Wire;
    std::uint64_t frame_id = 0;
    Frame frame;
    std::string source_node;
    AlgOutput emit;
  };
  struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  std::uint64_t new_record(Frame frame, VlanId origin_vlan, bool via_gateway);
  void schedule_wire(VirtualTime at, std::uint64_t frame_id, Frame frame,
                     std::string source_node);
  void handle_wire(const Event& ev);
  void handle_emit(const Event& ev);
  void enqueue_at_gateway(VirtualTime at, std::uint64_t frame_id,
                          const Frame& frame);
  void deliver(VirtualTime at, std::uint64_t frame_id, const Frame& frame,
               const HostConfig& host);
  void drop(VirtualTime at, std::uint64_t frame_id, const std::string& node,
            const std::string& reason, const std::string& cwe);
  std::optional<Frame> auto_response(const Frame& frame,
                                     const HostConfig& host) const;
  void add_trace(VirtualTime time, std::uint64_t frame_id, TraceAction action,
                 std::string node, std::string detail);

  NetworkConfig net_;
  PolicySet policy_;
  NetworkOptions options_;
  AlgPipeline pipeline_;
  std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
  std::map<std::uint64_t, FrameRecord> records_;
  std::map<std::string, std::vector<std::pair<VirtualTime, Frame>>> inboxes_;
  std::vector<TraceEntry> trace_;
  std::uint64_t next_frame_id_ = 1;
  std::uint64_t next_seq_ = 0;
  std::uint64_t events_processed_ = 0;
  std::uint64_t probe_counter_ = 0;
  std::uint64_t last_probe_request_ = 0;
  VirtualTime now_ = 0;
  VirtualTime gateway_busy_until_ = 0;
};

// True when any frame reached a host in another VLAN without passing
// through the gateway. The switches make this impossible by construction;
// tests assert it stays that way.
bool has_inter_vlan_bypass(const Network& network);

}  // namespace algsim
