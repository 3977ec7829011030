#include "bcastsim/models.hpp"

#include <algorithm>
#include <cmath>

namespace bcastsim {

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "SINR" || s == "sinr") return ModelKind::SINR;
  if (s == "UDG" || s == "udg") return ModelKind::UDG;
  if (s == "QUDG" || s == "qudg") return ModelKind::QUDG;
  if (s == "PROTOCOL" || s == "protocol") return ModelKind::PROTOCOL;
  if (s == "BIG" || s == "big") return ModelKind::BIG;
  if (s == "KHOP" || s == "khop") return ModelKind::KHOP;
  throw ParseError("unknown model kind: " + s);
}

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::SINR: return "SINR";
    case ModelKind::UDG: return "UDG";
    case ModelKind::QUDG: return "QUDG";
    case ModelKind::PROTOCOL: return "PROTOCOL";
    case ModelKind::BIG: return "BIG";
    case ModelKind::KHOP: return "KHOP";
  }
  return "?";
}

AdversaryPolicy adversary_policy_from_string(const std::string& s) {
  if (s == "pessimistic") return AdversaryPolicy::pessimistic;
  if (s == "optimistic") return AdversaryPolicy::optimistic;
  if (s == "scripted") return AdversaryPolicy::scripted;
  throw ParseError("unknown adversary policy: " + s);
}

std::string to_string(AdversaryPolicy p) {
  switch (p) {
    case AdversaryPolicy::pessimistic: return "pessimistic";
    case AdversaryPolicy::optimistic: return "optimistic";
    case AdversaryPolicy::scripted: return "scripted";
  }
  return "?";
}

SuccClearParams derive_succclear_params(const ReceptionModelConfig& cfg,
                                        const RadiusSet& radii, double zeta,
                                        double precision) {
  SuccClearParams sc;
  switch (cfg.kind) {
    case ModelKind::SINR: {
      const double beta = cfg.sinr_threshold;
      sc.rho_c = 0.0;
      sc.i_c = std::min(beta, std::pow(1.0 - precision, -zeta) - 1.0) *
               cfg.noise / std::pow(2.0, zeta);
      break;
    }
    case ModelKind::UDG:
    case ModelKind::BIG:
      sc.rho_c = 2.0;
      sc.i_c = kInf;
      break;
    case ModelKind::QUDG:
    case ModelKind::PROTOCOL:
      if (!(cfg.R_prime >= radii.R))
        throw ConfigInvalid("R_prime must be >= R for QUDG/Protocol");
      sc.rho_c = (radii.R + cfg.R_prime) / radii.R;
      sc.i_c = kInf;
      break;
    case ModelKind::KHOP:
      // hop distances are integers: the exclusion ball {d < k+2} captures all
      // hops <= k+1, which covers every receiver's k-hop interference range
      if (cfg.khop < 1) throw ConfigInvalid("khop must be >= 1");
      sc.rho_c = (cfg.khop + 2.0) / radii.R;
      sc.i_c = kInf;
      break;
  }
  return sc;
}

std::vector<int> neighbors(const TopologyView& t, const RadiusSet& radii, int u,
                           double precision) {
  if (u < 0 || u >= t.size()) throw UnknownNode("neighbors: node out of range");
  if (!(precision > 0 && precision < 1))
    throw ConfigInvalid("precision must be in (0,1)");
  const double reach = (1.0 - precision) * radii.R;
  std::vector<int> out;
  for (int v = 0; v < t.size(); ++v) {
    if (v == u || !t.is_alive(v)) continue;
    if (t.d(u, v) <= reach) out.push_back(v);
  }
  return out;
}

double interference_at(const TopologyView& t, const std::vector<int>& S, int v) {
  double sum = 0.0;
  for (int w : S) {
    if (w == v || !t.is_alive(w)) continue;
    sum += t.power() / t.loss(w, v);
  }
  return sum;
}

double contention(const TopologyView& t, const RadiusSet& radii,
                  const Eigen::VectorXd& probs, int v, double rho,
                  ContentionKind kind) {
  double sum = 0.0;
  if (kind == ContentionKind::close) {
    const double r = radii.R / 2.0;
    for (int w = 0; w < t.size(); ++w) {
      if (!t.is_alive(w)) continue;
      if (std::max(t.d(w, v), t.d(v, w)) < r) sum += probs[w];
    }
  } else {
    const double r = rho * radii.R;
    for (int w = 0; w < t.size(); ++w) {
      if (!t.is_alive(w)) continue;
      if (t.d(w, v) < r) sum += probs[w];
    }
  }
  return sum;
}

double expected_interference(const TopologyView& t, const RadiusSet& radii,
                             const Eigen::VectorXd& probs, int v, double rho) {
  const double r = rho * radii.R;
  double sum = 0.0;
  for (int w = 0; w < t.size(); ++w) {
    if (w == v || !t.is_alive(w)) continue;
    if (t.d(w, v) >= r) sum += probs[w] * t.power() / t.loss(w, v);
  }
  return sum;
}

bool succ_clear_guarantee(const TopologyView& t, const SuccClearParams& sc,
                          const RadiusSet& radii, const std::vector<int>& S, int u) {
  const double excl = sc.rho_c * radii.R;
  double interference = 0.0;
  for (int w : S) {
    if (w == u || !t.is_alive(w)) continue;
    if (t.d(w, u) < excl) return false;
    interference += t.power() / t.loss(w, u);
  }
  return interference <= sc.i_c;
}

bool RoundRealization::delivered(int u, int v) const {
  return std::binary_search(deliveries.begin(), deliveries.end(),
                            std::make_pair(u, v));
}

std::vector<int> RoundRealization::receivers_of(int u) const {
  std::vector<int> out;
  for (const auto& [s, r] : deliveries)
    if (s == u) out.push_back(r);
  return out;
}

int RoundRealization::sender_to(int v) const {
  for (const auto& [s, r] : deliveries)
    if (r == v) return s;
  return -1;
}

namespace {

std::vector<int> alive_transmitters(const TopologyView& t, const std::vector<int>& S) {
  std::vector<int> out;
  out.reserve(S.size());
  for (int u : S)
    if (t.is_alive(u)) out.push_back(u);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Eigen::VectorXd interference_vector(const TopologyView& t, const std::vector<int>& S) {
  Eigen::VectorXd iv = Eigen::VectorXd::Zero(t.size());
  const double p = t.power();
  for (int w : S)
    for (int v = 0; v < t.size(); ++v)
      if (v != w) iv[v] += p / t.loss(w, v);
  return iv;
}

void finalize(RoundRealization& r) {
  std::sort(r.deliveries.begin(), r.deliveries.end());
  r.deliveries.erase(std::unique(r.deliveries.begin(), r.deliveries.end()),
                     r.deliveries.end());
}

bool qudg_comm_edge(const ReceptionModelConfig& cfg, const TopologyView& t,
                    const RadiusSet& radii, int u, int v) {
  const double d = t.d(u, v);
  if (d <= radii.R) return true;
  if (d > cfg.R_prime) return false;
  for (auto [a, b] : cfg.qudg_edges)
    if ((a == u && b == v) || (a == v && b == u)) return true;
  return false;
}

}  // namespace

RoundRealization resolve_round_sinr(const TopologyView& t,
                                    const ReceptionModelConfig& cfg,
                                    const RadiusSet& radii,
                                    const std::vector<int>& S) {
  if (cfg.kind != ModelKind::SINR)
    throw ModelMismatch("resolve_round_sinr requires a SINR config");
  (void)radii;
  RoundRealization r;
  r.transmitters = alive_transmitters(t, S);
  r.interference = interference_vector(t, r.transmitters);
  const double beta = cfg.sinr_threshold;
  const double p = t.power();
  for (int v = 0; v < t.size(); ++v) {
    if (!t.is_alive(v)) continue;
    if (std::binary_search(r.transmitters.begin(), r.transmitters.end(), v))
      continue;  // half-duplex
    // with beta >= 1 only the strongest signal can clear the threshold
    int best = -1;
    double best_sig = 0.0;
    for (int u : r.transmitters) {
      const double sig = p / t.loss(u, v);
      if (sig > best_sig) {
        best_sig = sig;
        best = u;
      }
    }
    if (best < 0) continue;
    const double others = r.interference[v] - best_sig;
    if (best_sig > beta * (others + cfg.noise)) r.deliveries.emplace_back(best, v);
  }
  finalize(r);
  return r;
}

RoundRealization resolve_round_graph(const TopologyView& t,
                                     const ReceptionModelConfig& cfg,
                                     const RadiusSet& radii,
                                     const std::vector<int>& S) {
  if (cfg.kind == ModelKind::SINR)
    throw ModelMismatch("resolve_round_graph cannot resolve SINR");
  RoundRealization r;
  r.transmitters = alive_transmitters(t, S);
  r.interference = interference_vector(t, r.transmitters);
  const double tol = 1e-9;
  for (int v = 0; v < t.size(); ++v) {
    if (!t.is_alive(v)) continue;
    if (std::binary_search(r.transmitters.begin(), r.transmitters.end(), v))
      continue;
    switch (cfg.kind) {
      case ModelKind::UDG:
      case ModelKind::BIG: {
        int sender = -1, in_range = 0;
        for (int u : r.transmitters)
          if (t.d(u, v) <= radii.R + tol) {
            ++in_range;
            sender = u;
          }
        if (in_range == 1) r.deliveries.emplace_back(sender, v);
        break;
      }
      case ModelKind::KHOP: {
        int sender = -1, comm = 0, blockers = 0;
        for (int u : r.transmitters) {
          const double d = t.d(u, v);
          if (d <= radii.R + tol) {
            ++comm;
            sender = u;
          }
          if (d <= cfg.khop + tol) ++blockers;
        }
        if (comm == 1 && blockers == 1) r.deliveries.emplace_back(sender, v);
        break;
      }
      case ModelKind::QUDG: {
        int interferers = 0, sender = -1;
        for (int u : r.transmitters)
          if (t.d(u, v) <= cfg.R_prime + tol) {
            ++interferers;
            sender = u;
          }
        if (interferers == 1 && qudg_comm_edge(cfg, t, radii, sender, v))
          r.deliveries.emplace_back(sender, v);
        break;
      }
      case ModelKind::PROTOCOL: {
        int sender = -1, comm = 0;
        bool blocked = false;
        for (int u : r.transmitters) {
          const double d = t.d(u, v);
          if (d <= radii.R + tol) {
            ++comm;
            sender = u;
          }
        }
        if (comm != 1) break;
        for (int w : r.transmitters)
          if (w != sender && t.d(w, v) <= cfg.R_prime + tol) {
            blocked = true;
            break;
          }
        if (!blocked) r.deliveries.emplace_back(sender, v);
        break;
      }
      default:
        break;
    }
  }
  finalize(r);
  return r;
}

std::vector<std::pair<int, int>> resolve_adversarial(
    const TopologyView& t, const ReceptionModelConfig& cfg, const RadiusSet& radii,
    const std::vector<int>& S, const std::vector<std::pair<int, int>>& pending,
    const std::vector<ScriptEntry>* round_script) {
  switch (cfg.adversary_policy) {
    case AdversaryPolicy::pessimistic:
      return {};
    case AdversaryPolicy::optimistic: {
      const RoundRealization full = cfg.kind == ModelKind::SINR
                                        ? resolve_round_sinr(t, cfg, radii, S)
                                        : resolve_round_graph(t, cfg, radii, S);
      std::vector<std::pair<int, int>> out;
      for (const auto& pr : pending)
        if (full.delivered(pr.first, pr.second)) out.push_back(pr);
      return out;
    }
    case AdversaryPolicy::scripted: {
      if (!round_script) {
        if (pending.empty()) return {};
        throw MissingScript("scripted adversary has no entry for this round");
      }
      std::vector<std::pair<int, int>> out;
      for (const auto& e : *round_script) {
        if (!e.deliver) continue;
        auto pr = std::make_pair(e.sender, e.receiver);
        if (std::find(pending.begin(), pending.end(), pr) != pending.end())
          out.push_back(pr);
      }
      return out;
    }
  }
  return {};
}

RoundRealization resolve_round(const TopologyView& t, const ReceptionModelConfig& cfg,
                               const RadiusSet& radii, const std::vector<int>& S,
                               double precision,
                               const std::vector<ScriptEntry>* round_script) {
  const SuccClearParams sc =
      derive_succclear_params(cfg, radii, t.space->zeta, precision);
  RoundRealization r;
  r.transmitters = alive_transmitters(t, S);
  r.interference = interference_vector(t, r.transmitters);

  std::vector<std::pair<int, int>> pending;
  for (int u : r.transmitters) {
    const bool guaranteed = succ_clear_guarantee(t, sc, radii, r.transmitters, u);
    for (int v : neighbors(t, radii, u, precision)) {
      if (std::binary_search(r.transmitters.begin(), r.transmitters.end(), v))
        continue;  // half-duplex
      if (guaranteed)
        r.deliveries.emplace_back(u, v);
      else
        pending.emplace_back(u, v);
    }
  }
  const auto extra = resolve_adversarial(t, cfg, radii, r.transmitters, pending,
                                         round_script);
  r.deliveries.insert(r.deliveries.end(), extra.begin(), extra.end());
  finalize(r);
  return r;
}

}  // namespace bcastsim
