#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bcastsim/models.hpp"

namespace bcastsim {

/// One topology event. `move` is a compact positional retune for
/// Euclidean-backed instances: it rewrites the whole loss row/column of the
/// node from its new coordinates.
struct ScheduleEvent {
  enum class Type { arrive, depart, retune, move };
  int round = 0;
  Type type = Type::arrive;
  int node = -1;     // arrive / depart / move
  int u = -1, v = -1;  // retune endpoints
  double f = 0.0;      // retune new path loss
  double x = 0.0, y = 0.0;  // move target coordinates
};

std::string to_string(ScheduleEvent::Type);
ScheduleEvent::Type event_type_from_string(const std::string&);

/// Budget-constrained adversarial dynamics: per-window retune-created
/// neighbor budget tau*|T| and tail bound a*phi^{-k} on rounds with more
/// than phi new neighbors.
struct AdversarySchedule {
  double tau = 0.25;
  double k = 3.0;
  double a = 1.0;     // constant of the O(phi^-k) tail budget
  int window = 0;     // rounds; 0 means "one phase" chosen by the consumer
  std::vector<ScheduleEvent> events;  // ordered by round

  bool empty() const { return events.empty(); }
  bool has_retunes() const;
};

/// Directed pair whose distance changed in a round, with before/after values.
struct RetunedPair {
  int u = -1, v = -1;
  double old_d = 0.0, new_d = 0.0;
};

/// Replays a schedule over a base space, mutating a working copy round by
/// round. Every consumer of per-round topology (engine, validators, metrics)
/// drives one of these.
class TopologyTimeline {
 public:
  TopologyTimeline(const QuasiMetricSpace& base, const AdversarySchedule& schedule);

  void reset();
  /// Applies the events of round t (must be called with t = 0, 1, 2, ...).
  void advance(int t);

  const QuasiMetricSpace& space() const { return space_; }
  const std::vector<std::uint8_t>& alive() const { return alive_; }
  TopologyView view() const { return TopologyView{&space_, &alive_}; }
  /// Directed pairs retuned by the events applied in the last advance().
  const std::vector<RetunedPair>& last_retuned() const { return retuned_; }
  const std::vector<ScheduleEvent>& last_events() const { return applied_; }

 private:
  const QuasiMetricSpace base_;
  const AdversarySchedule* schedule_;
  QuasiMetricSpace space_;
  std::vector<std::uint8_t> alive_;
  std::size_t cursor_ = 0;
  std::vector<RetunedPair> retuned_;
  std::vector<ScheduleEvent> applied_;
};

struct ScheduleViolation {
  int round = -1;
  int node = -1;
  std::string kind;  // "tau-budget", "tail-budget", "metricity", "independence"
  double value = 0.0, bound = 0.0;
};

struct ScheduleReport {
  bool pass = true;
  std::vector<ScheduleViolation> violations;
  int max_entries_per_window = 0;
};

/// Slides a window over the schedule counting retune-created neighbor
/// entries per node, checks both budgets, and revalidates metricity (exactly,
/// on changed triplets) and bounded independence (sampled) after every round.
ScheduleReport validate_schedule(const QuasiMetricSpace& base, const RadiusSet& radii,
                                 double precision, const AdversarySchedule& schedule,
                                 int horizon, int window);

/// Unrestricted churn: each absent node arrives w.p. rate, each present
/// non-protected node departs w.p. rate, per round.
AdversarySchedule gen_churn_schedule(int n, double rate, int horizon,
                                     std::uint64_t seed, int protect = -1);

/// Slow positional drift on a Euclidean-backed instance; per-round steps of
/// length <= speed, re-drawn (and finally suppressed) whenever they would
/// break the window budgets, so the result always validates.
AdversarySchedule gen_drift_schedule(const QuasiMetricSpace& base,
                                     const RadiusSet& radii, double precision,
                                     double speed, int horizon, double tau,
                                     double k, double a, int window,
                                     std::uint64_t seed);

/// Merge two schedules (e.g. churn + drift); events stay round-ordered.
AdversarySchedule merge_schedules(const AdversarySchedule& a1,
                                  const AdversarySchedule& a2);

/// |union over t in [t0, t1] of D(v, rho*R) at round t| (alive members only).
int dynamic_degree(const QuasiMetricSpace& base, const AdversarySchedule& schedule,
                   const RadiusSet& radii, int v, double rho, int t0, int t1);

/// Maximal intervals [b, e) during which both endpoints are alive and
/// d(u,v) <= (1-precision)R, for every directed pair. Flat n*n layout.
struct EdgeIntervalTable {
  int n = 0;
  std::vector<std::vector<std::pair<int, int>>> intervals;  // index u*n+v
  const std::vector<std::pair<int, int>>& of(int u, int v) const {
    return intervals[static_cast<std::size_t>(u) * n + v];
  }
};

EdgeIntervalTable edge_alive_intervals(const QuasiMetricSpace& base,
                                       const AdversarySchedule& schedule,
                                       const RadiusSet& radii, double precision,
                                       int horizon);

inline constexpr int kUnreachable = -1;

/// Minimum time-length e_{k-1} - b_1 over stable s-v paths: every hop stays
/// neighbor-alive for an interval of length >= c*log2(n_bound) with
/// successive interval ends separated by >= c*log2(n_bound). Returns
/// +inf (as double) when no stable path exists; 0 when s == v.
double stable_distance(const EdgeIntervalTable& table, double c, int s, int v,
                       int n_bound);

struct HopMetrics {
  Eigen::MatrixXi dist;  // -1 = unreachable
  int diameter = 0;      // max finite distance
  bool strongly_connected = true;
};

/// All-pairs directed BFS over the communication graph at (1-precision)R.
HopMetrics hop_metrics(const TopologyView& t, const RadiusSet& radii,
                       double precision);

}  // namespace bcastsim
