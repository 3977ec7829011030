#include "bcastsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace bcastsim {

std::string to_string(ScheduleEvent::Type t) {
  switch (t) {
    case ScheduleEvent::Type::arrive: return "arrive";
    case ScheduleEvent::Type::depart: return "depart";
    case ScheduleEvent::Type::retune: return "retune";
    case ScheduleEvent::Type::move: return "move";
  }
  return "?";
}

ScheduleEvent::Type event_type_from_string(const std::string& s) {
  if (s == "arrive") return ScheduleEvent::Type::arrive;
  if (s == "depart") return ScheduleEvent::Type::depart;
  if (s == "retune") return ScheduleEvent::Type::retune;
  if (s == "move") return ScheduleEvent::Type::move;
  throw ParseError("unknown schedule event type: " + s);
}

bool AdversarySchedule::has_retunes() const {
  for (const auto& e : events)
    if (e.type == ScheduleEvent::Type::retune || e.type == ScheduleEvent::Type::move)
      return true;
  return false;
}

TopologyTimeline::TopologyTimeline(const QuasiMetricSpace& base,
                                   const AdversarySchedule& schedule)
    : base_(base), schedule_(&schedule), space_(base) {
  reset();
}

void TopologyTimeline::reset() {
  space_ = base_;
  alive_.assign(space_.size(), 1);
  cursor_ = 0;
  retuned_.clear();
  applied_.clear();
}

void TopologyTimeline::advance(int t) {
  retuned_.clear();
  applied_.clear();
  const auto& ev = schedule_->events;
  while (cursor_ < ev.size() && ev[cursor_].round < t) ++cursor_;  // safety skip
  while (cursor_ < ev.size() && ev[cursor_].round == t) {
    const ScheduleEvent& e = ev[cursor_++];
    applied_.push_back(e);
    switch (e.type) {
      case ScheduleEvent::Type::arrive:
        if (e.node >= 0 && e.node < space_.size()) alive_[e.node] = 1;
        break;
      case ScheduleEvent::Type::depart:
        if (e.node >= 0 && e.node < space_.size()) alive_[e.node] = 0;
        break;
      case ScheduleEvent::Type::retune: {
        if (e.u < 0 || e.u >= space_.size() || e.v < 0 || e.v >= space_.size() ||
            e.u == e.v)
          throw ConfigInvalid("retune endpoints out of range");
        if (!(e.f > 0)) throw ConfigInvalid("retune loss must be positive");
        RetunedPair rp{e.u, e.v, space_.d(e.u, e.v), 0.0};
        space_.base.loss(e.u, e.v) = e.f;
        space_.refresh_pair(e.u, e.v);
        rp.new_d = space_.d(e.u, e.v);
        retuned_.push_back(rp);
        break;
      }
      case ScheduleEvent::Type::move: {
        if (!space_.base.positions)
          throw ConfigInvalid("move event on an instance without positions");
        auto& pts = *space_.base.positions;
        if (e.node < 0 || e.node >= space_.size())
          throw ConfigInvalid("move node out of range");
        pts(0, e.node) = e.x;
        pts(1, e.node) = e.y;
        for (int w = 0; w < space_.size(); ++w) {
          if (w == e.node) continue;
          const double dd = (pts.col(e.node) - pts.col(w)).norm();
          RetunedPair out{e.node, w, space_.d(e.node, w), dd};
          RetunedPair in{w, e.node, space_.d(w, e.node), dd};
          space_.base.loss(e.node, w) = std::pow(dd, space_.zeta);
          space_.base.loss(w, e.node) = space_.base.loss(e.node, w);
          space_.dist(e.node, w) = dd;
          space_.dist(w, e.node) = dd;
          retuned_.push_back(out);
          retuned_.push_back(in);
        }
        break;
      }
    }
  }
}

namespace {

// Triangle check restricted to triplets that contain the changed directed
// pair (x,y) as one of their three edges.
bool triplets_ok_for_pair(const QuasiMetricSpace& s,
                          const std::vector<std::uint8_t>& alive, int x, int y,
                          double tol) {
  const int n = s.size();
  if (!alive[x] || !alive[y]) return true;
  for (int w = 0; w < n; ++w) {
    if (w == x || w == y || !alive[w]) continue;
    // (x,y) direct edge; via w
    if (s.d(x, y) > s.d(x, w) + s.d(w, y) + tol) return false;
    // (x,y) as first leg of (x, w)
    if (s.d(x, w) > s.d(x, y) + s.d(y, w) + tol) return false;
    // (x,y) as second leg of (w, y)
    if (s.d(w, y) > s.d(w, x) + s.d(x, y) + tol) return false;
  }
  return true;
}

struct BudgetTracker {
  // per node: per round entry counts within the sliding window
  int window;
  double tau, k, a;
  std::vector<std::deque<int>> counts;       // one deque per node
  std::vector<int> window_sum;

  BudgetTracker(int n, int window_, double tau_, double k_, double a_)
      : window(window_), tau(tau_), k(k_), a(a_), counts(n), window_sum(n, 0) {}

  // Pushes this round's entry count for node v; returns false on tau-budget
  // violation for the window ending at this round.
  bool push(int v, int c) {
    counts[v].push_back(c);
    window_sum[v] += c;
    if (static_cast<int>(counts[v].size()) > window) {
      window_sum[v] -= counts[v].front();
      counts[v].pop_front();
    }
    return window_sum[v] <= tau * window + 1e-9;
  }

  // Tail budget over the current window of node v for phi = 1,2,4,...
  bool tail_ok(int v, double* bad_phi, double* frac, double* bound) const {
    const auto& q = counts[v];
    const int len = static_cast<int>(q.size());
    if (len == 0) return true;
    for (double phi = 1.0; phi <= 512.0; phi *= 2.0) {
      int over = 0;
      for (int c : q)
        if (c > phi) ++over;
      const double f = double(over) / window;  // fraction of the full window
      const double b = a * std::pow(phi, -k);
      if (f > b + 1e-12) {
        if (bad_phi) *bad_phi = phi;
        if (frac) *frac = f;
        if (bound) *bound = b;
        return false;
      }
    }
    return true;
  }
};

}  // namespace

ScheduleReport validate_schedule(const QuasiMetricSpace& base, const RadiusSet& radii,
                                 double precision, const AdversarySchedule& schedule,
                                 int horizon, int window) {
  ScheduleReport rep;
  const int n = base.size();
  if (window <= 0) throw ConfigInvalid("validate_schedule needs a positive window");
  TopologyTimeline tl(base, schedule);
  BudgetTracker budget(n, window, schedule.tau, schedule.k, schedule.a);
  const double reach = (1.0 - precision) * radii.R;
  const double tol = 1e-9;

  std::vector<std::uint8_t> prev_alive(n, 1);
  std::vector<int> entries(n, 0);
  for (int t = 0; t < horizon; ++t) {
    tl.advance(t);
    const auto& alive = tl.alive();
    std::fill(entries.begin(), entries.end(), 0);
    for (const auto& rp : tl.last_retuned()) {
      // new neighbor of rp.u: rp.v entered N_t(u) via retune, churn excluded
      if (!prev_alive[rp.u] || !prev_alive[rp.v]) continue;
      if (!alive[rp.u] || !alive[rp.v]) continue;
      if (rp.old_d > reach && rp.new_d <= reach) entries[rp.u]++;
    }
    for (int v = 0; v < n; ++v) {
      rep.max_entries_per_window =
          std::max(rep.max_entries_per_window, budget.window_sum[v] + entries[v]);
      if (!budget.push(v, entries[v])) {
        rep.pass = false;
        rep.violations.push_back({t, v, "tau-budget", double(budget.window_sum[v]),
                                  schedule.tau * window});
      }
      double phi, frac, bound;
      if (!budget.tail_ok(v, &phi, &frac, &bound)) {
        rep.pass = false;
        rep.violations.push_back({t, v, "tail-budget", frac, bound});
      }
    }
    // metricity re-validation on changed triplets
    std::vector<std::pair<int, int>> changed;
    for (const auto& rp : tl.last_retuned()) changed.emplace_back(rp.u, rp.v);
    std::sort(changed.begin(), changed.end());
    changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
    for (auto [x, y] : changed) {
      if (!triplets_ok_for_pair(tl.space(), alive, x, y, tol)) {
        rep.pass = false;
        rep.violations.push_back({t, x, "metricity", tl.space().zeta, tl.space().zeta});
        break;
      }
    }
    // sampled bounded-independence re-validation
    if (!changed.empty() && base.r_min > 0) {
      std::vector<int> sample;
      for (int i = 0; i < std::min(4, n); ++i) {
        int u = (t * 7 + i * 13) % n;
        if (alive[u]) sample.push_back(u);
      }
      std::vector<int> region;
      for (int v = 0; v < n; ++v)
        if (alive[v]) region.push_back(v);
      for (int u : sample) {
        for (double q : {1.0, 2.0, 4.0}) {
          auto in_ball = ball(tl.space(), u, q * base.r_min, BallKind::in);
          std::vector<int> dom;
          std::set_intersection(in_ball.begin(), in_ball.end(), region.begin(),
                                region.end(), std::back_inserter(dom));
          const auto pack = greedy_packing(tl.space(), dom, base.r_min);
          const double bound = base.indep_const * std::pow(q, base.lambda);
          if (double(pack.size()) > bound + 1e-9) {
            rep.pass = false;
            rep.violations.push_back({t, u, "independence", double(pack.size()), bound});
          }
        }
      }
    }
    prev_alive.assign(alive.begin(), alive.end());
    if (rep.violations.size() > 32) return rep;  // enough locators
  }
  return rep;
}

AdversarySchedule gen_churn_schedule(int n, double rate, int horizon,
                                     std::uint64_t seed, int protect) {
  if (!(rate >= 0 && rate <= 1)) throw ConfigInvalid("churn rate must be in [0,1]");
  AdversarySchedule sched;
  sched.tau = 0.25;
  SplitMix rng(seed);
  std::vector<std::uint8_t> alive(n, 1);
  for (int t = 0; t < horizon; ++t) {
    for (int v = 0; v < n; ++v) {
      const double u = rng.uniform();
      if (alive[v]) {
        if (v != protect && u < rate) {
          alive[v] = 0;
          ScheduleEvent e;
          e.round = t;
          e.type = ScheduleEvent::Type::depart;
          e.node = v;
          sched.events.push_back(e);
        }
      } else if (u < rate) {
        alive[v] = 1;
        ScheduleEvent e;
        e.round = t;
        e.type = ScheduleEvent::Type::arrive;
        e.node = v;
        sched.events.push_back(e);
      }
    }
  }
  return sched;
}

AdversarySchedule gen_drift_schedule(const QuasiMetricSpace& base,
                                     const RadiusSet& radii, double precision,
                                     double speed, int horizon, double tau,
                                     double k, double a, int window,
                                     std::uint64_t seed) {
  if (!base.base.positions)
    throw ConfigInvalid("drift schedule needs a Euclidean-backed instance");
  if (window <= 0) throw ConfigInvalid("drift schedule needs a positive window");
  AdversarySchedule sched;
  sched.tau = tau;
  sched.k = k;
  sched.a = a;
  sched.window = window;
  if (speed <= 0) return sched;

  const int n = base.size();
  const double reach = (1.0 - precision) * radii.R;
  SplitMix rng(seed);
  Eigen::Matrix2Xd pts = *base.base.positions;
  BudgetTracker budget(n, window, tau, k, a);
  // tail budget: with a*phi^-k < 1/window for phi >= phi_cap, a single round
  // with more than phi_cap entries is already a violation; cap entries there.
  double phi_cap = 1.0;
  while (a * std::pow(2 * phi_cap, -k) * window >= 1.0 && phi_cap < 1024) phi_cap *= 2;

  std::vector<int> entries(n);
  long long rejected = 0, attempted = 0;
  for (int t = 0; t < horizon; ++t) {
    std::fill(entries.begin(), entries.end(), 0);
    std::vector<ScheduleEvent> accepted;
    for (int v = 0; v < n; ++v) {
      ++attempted;
      bool placed = false;
      for (int attempt = 0; attempt < 8 && !placed; ++attempt) {
        const double ang = rng.uniform(0.0, 2.0 * M_PI);
        const double len = speed * rng.uniform();
        const double nx = pts(0, v) + len * std::cos(ang);
        const double ny = pts(1, v) + len * std::sin(ang);
        // marginal neighbor entries caused by this move
        std::vector<int> delta(n, 0);
        bool ok = true;
        for (int w = 0; w < n && ok; ++w) {
          if (w == v) continue;
          const double od = (pts.col(v) - pts.col(w)).norm();
          const double nd = std::hypot(nx - pts(0, w), ny - pts(1, w));
          if (od > reach && nd <= reach) {
            delta[v]++;
            delta[w]++;
          }
        }
        for (int w = 0; w < n && ok; ++w) {
          if (delta[w] == 0) continue;
          const int next = entries[w] + delta[w];
          if (next > phi_cap) ok = false;
          if (budget.window_sum[w] + next > tau * window) ok = false;
        }
        if (!ok) {
          ++rejected;
          continue;
        }
        if (len > 0) {
          for (int w = 0; w < n; ++w) entries[w] += delta[w];
          pts(0, v) = nx;
          pts(1, v) = ny;
          ScheduleEvent e;
          e.round = t;
          e.type = ScheduleEvent::Type::move;
          e.node = v;
          e.x = nx;
          e.y = ny;
          accepted.push_back(e);
        }
        placed = true;
      }
      // fall back to staying put; creates no entries
    }
    for (int v = 0; v < n; ++v) budget.push(v, entries[v]);
    for (auto& e : accepted) sched.events.push_back(e);
  }
  if (attempted > 0 && rejected > attempted / 2)
    throw BudgetInfeasible("drift speed forces pervasive budget violations");
  return sched;
}

AdversarySchedule merge_schedules(const AdversarySchedule& a1,
                                  const AdversarySchedule& a2) {
  // budgets follow the schedule that actually retunes edges
  const bool use_a2 = a2.has_retunes() && !a1.has_retunes();
  AdversarySchedule merged = use_a2 ? a2 : a1;
  const AdversarySchedule& other = use_a2 ? a1 : a2;
  merged.events.insert(merged.events.end(), other.events.begin(), other.events.end());
  std::stable_sort(merged.events.begin(), merged.events.end(),
                   [](const ScheduleEvent& x, const ScheduleEvent& y) {
                     return x.round < y.round;
                   });
  return merged;
}

int dynamic_degree(const QuasiMetricSpace& base, const AdversarySchedule& schedule,
                   const RadiusSet& radii, int v, double rho, int t0, int t1) {
  if (t0 > t1) throw ConfigInvalid("dynamic_degree needs t0 <= t1");
  TopologyTimeline tl(base, schedule);
  std::vector<std::uint8_t> seen(base.size(), 0);
  const double r = rho * radii.R;
  for (int t = 0; t <= t1; ++t) {
    tl.advance(t);
    if (t < t0) continue;
    const auto& alive = tl.alive();
    for (int w = 0; w < base.size(); ++w)
      if (alive[w] && tl.space().d(w, v) < r) seen[w] = 1;
  }
  int total = 0;
  for (auto s : seen) total += s;
  return total;
}

EdgeIntervalTable edge_alive_intervals(const QuasiMetricSpace& base,
                                       const AdversarySchedule& schedule,
                                       const RadiusSet& radii, double precision,
                                       int horizon) {
  const int n = base.size();
  EdgeIntervalTable table;
  table.n = n;
  table.intervals.resize(static_cast<std::size_t>(n) * n);
  std::vector<int> open(static_cast<std::size_t>(n) * n, -1);
  TopologyTimeline tl(base, schedule);
  const double reach = (1.0 - precision) * radii.R;
  for (int t = 0; t < horizon; ++t) {
    tl.advance(t);
    const auto& alive = tl.alive();
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        if (u == v) continue;
        const std::size_t idx = static_cast<std::size_t>(u) * n + v;
        const bool on = alive[u] && alive[v] && tl.space().d(u, v) <= reach;
        if (on && open[idx] < 0) open[idx] = t;
        if (!on && open[idx] >= 0) {
          table.intervals[idx].emplace_back(open[idx], t);
          open[idx] = -1;
        }
      }
  }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      const std::size_t idx = static_cast<std::size_t>(u) * n + v;
      if (u != v && open[idx] >= 0) table.intervals[idx].emplace_back(open[idx], horizon);
    }
  return table;
}

double stable_distance(const EdgeIntervalTable& table, double c, int s, int v,
                       int n_bound) {
  if (s == v) return 0.0;
  const int n = table.n;
  const int L = std::max(1, static_cast<int>(std::ceil(c * std::log2(double(n_bound)))));

  // Candidate ends e_1 of the first hop interval: interval starts shifted by
  // L plus interval ends shifted back by whole multiples of L (the points
  // where a downstream feasibility constraint can bind).
  std::vector<int> candidates;
  for (int u = 0; u < n; ++u)
    for (int w = 0; w < n; ++w) {
      if (u == w) continue;
      for (const auto& [b, e] : table.of(u, w)) {
        if (e - b < L) continue;
        candidates.push_back(b + L);
        for (int j = 0; j < n; ++j) {
          const int cand = e - j * L;
          if (cand < L) break;
          candidates.push_back(cand);
        }
      }
    }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  double best = kInf;
  std::vector<long long> label(n);
  for (int e1 : candidates) {
    // first hop from s must support an interval [e1 - L, e1]
    bool first_ok = false;
    for (int w = 0; w < n && !first_ok; ++w) {
      if (w == s) continue;
      for (const auto& [b, e] : table.of(s, w))
        if (b + L <= e1 && e1 <= e) {
          first_ok = true;
          break;
        }
    }
    if (!first_ok) continue;
    // Bellman-Ford style relaxation on labels = minimal last-interval end.
    const long long INF = std::numeric_limits<long long>::max() / 4;
    std::fill(label.begin(), label.end(), INF);
    for (int w = 0; w < n; ++w) {
      if (w == s) continue;
      for (const auto& [b, e] : table.of(s, w))
        if (b + L <= e1 && e1 <= e) label[w] = std::min(label[w], (long long)e1);
    }
    label[s] = INF;  // revisiting the source never helps
    for (int iter = 0; iter < n; ++iter) {
      bool changed = false;
      for (int u = 0; u < n; ++u) {
        if (label[u] >= INF) continue;
        for (int w = 0; w < n; ++w) {
          if (w == u || w == s) continue;
          for (const auto& [b, e] : table.of(u, w)) {
            if (e - b < L) continue;
            const long long cand =
                std::max<long long>(b + L, label[u] + L);
            if (cand <= e && cand < label[w]) {
              label[w] = cand;
              changed = true;
            }
          }
        }
      }
      if (!changed) break;
    }
    if (label[v] < INF) {
      const double obj = double(label[v] - e1 + L);
      best = std::min(best, obj);
    }
  }
  return best;
}

HopMetrics hop_metrics(const TopologyView& t, const RadiusSet& radii,
                       double precision) {
  const int n = t.size();
  HopMetrics hm;
  hm.dist = Eigen::MatrixXi::Constant(n, n, kUnreachable);
  const double reach = (1.0 - precision) * radii.R;
  std::vector<int> alive_nodes;
  for (int v = 0; v < n; ++v)
    if (t.is_alive(v)) alive_nodes.push_back(v);
  std::vector<int> queue;
  for (int s : alive_nodes) {
    queue.assign(1, s);
    hm.dist(s, s) = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      for (int w : alive_nodes)
        if (hm.dist(s, w) == kUnreachable && t.d(u, w) <= reach) {
          hm.dist(s, w) = hm.dist(s, u) + 1;
          queue.push_back(w);
        }
    }
    for (int w : alive_nodes) {
      if (hm.dist(s, w) == kUnreachable)
        hm.strongly_connected = false;
      else
        hm.diameter = std::max(hm.diameter, hm.dist(s, w));
    }
  }
  return hm;
}

}  // namespace bcastsim
