#include "bcastsim/protocols.hpp"

#include <algorithm>
#include <cmath>

#include "bcastsim/dynamics.hpp"

namespace bcastsim {

ProtocolKind protocol_kind_from_string(const std::string& s) {
  if (s == "try_adjust") return ProtocolKind::try_adjust;
  if (s == "local_bcast") return ProtocolKind::local_bcast;
  if (s == "bcast") return ProtocolKind::bcast;
  if (s == "bcast_star") return ProtocolKind::bcast_star;
  if (s == "spontaneous") return ProtocolKind::spontaneous;
  throw ParseError("unknown protocol: " + s);
}

std::string to_string(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::try_adjust: return "try_adjust";
    case ProtocolKind::local_bcast: return "local_bcast";
    case ProtocolKind::bcast: return "bcast";
    case ProtocolKind::bcast_star: return "bcast_star";
    case ProtocolKind::spontaneous: return "spontaneous";
  }
  return "?";
}

int PhaseParams::phase_length(int n_bound) const {
  return std::max(1, static_cast<int>(std::ceil(gamma * std::log2(double(std::max(2, n_bound))))));
}

double try_adjust_init(double n_bound, double beta) {
  if (!(n_bound >= 1) || !(beta >= 1))
    throw ConfigInvalid("try_adjust_init needs n >= 1 and beta >= 1");
  return 0.5 * std::pow(n_bound, -beta);
}

double try_adjust_step(double p, bool busy, double floor, bool floor_enabled) {
  if (busy) {
    const double halved = p / 2.0;
    return floor_enabled ? std::max(halved, floor) : halved;
  }
  return std::min(2.0 * p, 0.5);
}

ProtocolDriver::ProtocolDriver(const ProtocolConfig& cfg, int n, int n_bound,
                               int source)
    : cfg_(cfg), n_(n), n_bound_(n_bound), source_(source) {
  st_.resize(n);
  received_slot1_.assign(n, 0);
  acked_slot1_.assign(n, 0);
  restarted_.assign(n, 0);
  cd_slot1_.assign(n, CdOutcome::Idle);
  const bool two_slot = slots_per_round() == 2;
  for (int v = 0; v < n; ++v) {
    auto& s = st_[v];
    switch (cfg_.kind) {
      case ProtocolKind::try_adjust:
      case ProtocolKind::local_bcast:
        s.awake = true;
        s.has_message = true;  // own message
        s.p = init_p_();
        break;
      case ProtocolKind::bcast:
      case ProtocolKind::bcast_star:
        if (v == source_) {
          s.awake = true;
          s.has_message = true;
          s.p = init_p_();
        }
        break;
      case ProtocolKind::spontaneous:
        s.awake = true;
        s.p = init_p_();
        if (v == source_) s.has_message = true;
        break;
    }
  }
  (void)two_slot;
}

int ProtocolDriver::slots_per_round() const {
  return (cfg_.kind == ProtocolKind::try_adjust ||
          cfg_.kind == ProtocolKind::local_bcast)
             ? 1
             : 2;
}

double ProtocolDriver::resolve_precision(double epsilon) const {
  return slots_per_round() == 2 ? epsilon / 2.0 : epsilon;
}

double ProtocolDriver::ntd_precision(double epsilon) const {
  switch (cfg_.kind) {
    case ProtocolKind::bcast:
    case ProtocolKind::bcast_star:
      // detects senders in D_v^{eps/2}, i.e. within eps*R/2
      return epsilon;
    case ProtocolKind::spontaneous:
      // dominated nodes stop on NTD(eps/2): senders within eps*R/4
      return epsilon / 2.0;
    default:
      return 0.0;
  }
}

double ProtocolDriver::floor_() const {
  return std::pow(double(n_bound_), -cfg_.beta);
}

bool ProtocolDriver::floor_enabled_() const { return !cfg_.uniform_init_p.has_value(); }

double ProtocolDriver::init_p_() const {
  if (cfg_.uniform_init_p) return *cfg_.uniform_init_p;
  return try_adjust_init(double(n_bound_), cfg_.beta);
}

void ProtocolDriver::inform_(int v) {
  if (!st_[v].has_message) {
    st_[v].has_message = true;
    woke_.push_back(v);
  }
}

void ProtocolDriver::on_arrival(int v) {
  // re-arriving nodes are fresh; pending state of departed nodes is discarded
  st_[v] = NodeProtocolState{};
  auto& s = st_[v];
  switch (cfg_.kind) {
    case ProtocolKind::try_adjust:
    case ProtocolKind::local_bcast:
      s.awake = true;
      s.has_message = true;
      s.p = init_p_();
      break;
    case ProtocolKind::bcast:
      break;  // asleep until it receives the message
    case ProtocolKind::bcast_star:
    case ProtocolKind::spontaneous:
      break;  // static-only protocols; arrivals rejected upstream
  }
}

void ProtocolDriver::on_departure(int v) { st_[v] = NodeProtocolState{}; }

void ProtocolDriver::begin_round() {
  std::fill(received_slot1_.begin(), received_slot1_.end(), 0);
  std::fill(acked_slot1_.begin(), acked_slot1_.end(), 0);
  std::fill(restarted_.begin(), restarted_.end(), 0);
  woke_.clear();
}

double ProtocolDriver::transmit_prob(int v, int slot) const {
  const auto& s = st_[v];
  switch (cfg_.kind) {
    case ProtocolKind::try_adjust:
      return s.awake ? s.p : 0.0;
    case ProtocolKind::local_bcast:
      return (s.awake && !s.stopped) ? s.p : 0.0;
    case ProtocolKind::bcast:
    case ProtocolKind::bcast_star:
      if (slot == 0) return (s.awake && s.has_message && !s.stopped) ? s.p : 0.0;
      return acked_slot1_[v] ? 1.0 : 0.0;  // deterministic retransmission
    case ProtocolKind::spontaneous: {
      if (slot == 1) return acked_slot1_[v] ? 1.0 : 0.0;
      double p_skip = 1.0;
      if (s.role == Role::undecided) p_skip *= 1.0 - s.p;  // election
      const bool stage2 = s.has_message && !s.delivered &&
                          (s.role == Role::dominator || v == source_);
      if (stage2) p_skip *= 1.0 - cfg_.p0;
      return 1.0 - p_skip;
    }
  }
  return 0.0;
}

void ProtocolDriver::observe_slot(int slot, const SlotObservation& obs) {
  const RoundRealization& real = *obs.realization;
  if (slot == 0) {
    if (obs.cd) cd_slot1_ = *obs.cd;
    for (int u : real.transmitters)
      if (obs.ack && (*obs.ack)[u] == 1) acked_slot1_[u] = 1;
    for (const auto& [u, v] : real.deliveries) {
      received_slot1_[v] = 1;
      if (st_[u].has_message) {
        if (cfg_.kind == ProtocolKind::bcast || cfg_.kind == ProtocolKind::bcast_star) {
          if (!st_[v].awake) {
            st_[v].awake = true;
            st_[v].p = init_p_();
            restarted_[v] = 1;  // fresh init; no CD step on top this round
          }
          inform_(v);
        } else {
          inform_(v);
        }
      }
    }
    if (slots_per_round() == 1) {
      // LocalBcast: a transmitter that detects ACK stops
      if (cfg_.kind == ProtocolKind::local_bcast && obs.ack) {
        for (int u : real.transmitters)
          if ((*obs.ack)[u] == 1) {
            st_[u].stopped = true;
            st_[u].p = 0.0;
          }
      }
    }
    return;
  }

  // slot 2 of the two-slot algorithms
  for (const auto& [u, v] : real.deliveries) {
    if (st_[u].has_message) {
      if (cfg_.kind == ProtocolKind::bcast || cfg_.kind == ProtocolKind::bcast_star) {
        if (!st_[v].awake) {
          st_[v].awake = true;
          st_[v].p = init_p_();
          restarted_[v] = 1;
        }
      }
      inform_(v);
    }
  }
  switch (cfg_.kind) {
    case ProtocolKind::bcast:
    case ProtocolKind::bcast_star: {
      const bool star = cfg_.kind == ProtocolKind::bcast_star;
      for (int v = 0; v < n_; ++v) {
        if (!st_[v].awake) continue;
        const bool ntd_fired = obs.ntd && (*obs.ntd)[v].fired;
        if (received_slot1_[v] && ntd_fired) {
          if (star) {
            st_[v].stopped = true;
            st_[v].p = 0.0;
          } else {
            st_[v].p = init_p_();
          }
          restarted_[v] = 1;
        }
      }
      for (int u = 0; u < n_; ++u) {
        if (!acked_slot1_[u]) continue;
        if (star) {
          st_[u].stopped = true;
          st_[u].p = 0.0;
        } else {
          st_[u].p = init_p_();
        }
        restarted_[u] = 1;
      }
      break;
    }
    case ProtocolKind::spontaneous: {
      // ACK wins over NTD: winners become dominators even if a near
      // transmission also reached them this round.
      for (int u = 0; u < n_; ++u) {
        if (acked_slot1_[u] && st_[u].role == Role::undecided) {
          st_[u].role = Role::dominator;
          restarted_[u] = 1;
        }
        if (acked_slot1_[u] && st_[u].has_message) st_[u].delivered = true;
      }
      for (int v = 0; v < n_; ++v) {
        if (st_[v].role != Role::undecided) continue;
        if (obs.ntd && (*obs.ntd)[v].fired) {
          st_[v].role = Role::dominated;
          st_[v].dominated_by = (*obs.ntd)[v].trigger;
          st_[v].p = 0.0;
          restarted_[v] = 1;
        }
      }
      break;
    }
    default:
      break;
  }
}

void ProtocolDriver::end_round(const std::vector<std::uint8_t>& alive,
                               const std::vector<std::uint8_t>& active) {
  for (int v = 0; v < n_; ++v) {
    if (!alive[v] || !active[v] || restarted_[v]) continue;
    auto& s = st_[v];
    const bool busy = cd_slot1_[v] == CdOutcome::Busy;
    switch (cfg_.kind) {
      case ProtocolKind::try_adjust:
        if (s.awake) s.p = try_adjust_step(s.p, busy, floor_(), floor_enabled_());
        break;
      case ProtocolKind::local_bcast:
        if (s.awake && !s.stopped)
          s.p = try_adjust_step(s.p, busy, floor_(), floor_enabled_());
        break;
      case ProtocolKind::bcast:
      case ProtocolKind::bcast_star:
        if (s.awake && s.has_message && !s.stopped)
          s.p = try_adjust_step(s.p, busy, floor_(), floor_enabled_());
        break;
      case ProtocolKind::spontaneous:
        if (s.role == Role::undecided)
          s.p = try_adjust_step(s.p, busy, floor_(), /*floor_enabled=*/false);
        break;
    }
  }
}

bool ProtocolDriver::finished(const std::vector<std::uint8_t>& alive) const {
  switch (cfg_.kind) {
    case ProtocolKind::try_adjust:
      return false;
    case ProtocolKind::local_bcast:
      for (int v = 0; v < n_; ++v)
        if (alive[v] && st_[v].awake && !st_[v].stopped) return false;
      return true;
    case ProtocolKind::bcast:
    case ProtocolKind::bcast_star:
      for (int v = 0; v < n_; ++v)
        if (alive[v] && !st_[v].has_message) return false;
      return true;
    case ProtocolKind::spontaneous:
      for (int v = 0; v < n_; ++v) {
        if (!alive[v]) continue;
        if (!st_[v].has_message) return false;
        if (st_[v].role == Role::undecided) return false;
        if (st_[v].role == Role::dominator && !st_[v].delivered) return false;
      }
      return true;
  }
  return false;
}

DominatingSetReport dominating_set_validate(const std::vector<int>& dominators,
                                            const TopologyView& t,
                                            const RadiusSet& radii) {
  DominatingSetReport rep;
  const double dom_radius = radii.epsilon * radii.R / 4.0;
  const double pack_radius = radii.epsilon * radii.R / 8.0;
  const int n = t.size();

  for (int v = 0; v < n; ++v) {
    if (!t.is_alive(v)) continue;
    int count = 0;
    for (int u : dominators)
      if (t.d(u, v) <= dom_radius) ++count;
    if (count == 0) {
      rep.domination_ok = false;
      rep.undominated.push_back(v);
    }
    rep.kappa_observed = std::max(rep.kappa_observed, count);
  }
  for (std::size_t i = 0; i < dominators.size(); ++i)
    for (std::size_t j = i + 1; j < dominators.size(); ++j) {
      const int a = dominators[i], b = dominators[j];
      if (t.d(a, b) < 2 * pack_radius || t.d(b, a) < 2 * pack_radius)
        rep.packing_ok = false;
    }
  // multiplicity bound from bounded independence: the dominators of a node
  // form an (eps R/8)-packing inside an in-ball of radius eps R/4
  const auto& space = *t.space;
  if (space.r_min > 0) {
    const double q = dom_radius / space.r_min;
    rep.kappa_bound = space.indep_const * std::pow(std::max(1.0, q), space.lambda);
    rep.kappa_ok = rep.kappa_observed <= rep.kappa_bound + 1e-9;
  }

  const HopMetrics g = hop_metrics(t, radii, radii.epsilon);
  rep.g_diameter = g.diameter;
  // dominator graph H: edges at distance <= (1 - eps/2) R
  const double h_reach = (1.0 - radii.epsilon / 2.0) * radii.R;
  const int m = static_cast<int>(dominators.size());
  bool h_connected = true;
  if (m > 0) {
    Eigen::MatrixXi hd = Eigen::MatrixXi::Constant(m, m, kUnreachable);
    std::vector<int> queue;
    for (int si = 0; si < m; ++si) {
      queue.assign(1, si);
      hd(si, si) = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const int ui = queue[head];
        for (int wi = 0; wi < m; ++wi)
          if (hd(si, wi) == kUnreachable &&
              t.d(dominators[ui], dominators[wi]) <= h_reach) {
            hd(si, wi) = hd(si, ui) + 1;
            queue.push_back(wi);
          }
      }
      for (int wi = 0; wi < m; ++wi) {
        if (hd(si, wi) == kUnreachable)
          h_connected = false;
        else
          rep.h_diameter = std::max(rep.h_diameter, hd(si, wi));
      }
    }
  }
  rep.h_diameter_ok =
      h_connected && (rep.h_diameter <= rep.g_diameter || rep.g_diameter == 0);
  rep.pass = rep.domination_ok && rep.packing_ok && rep.kappa_ok && rep.h_diameter_ok;
  return rep;
}

}  // namespace bcastsim
