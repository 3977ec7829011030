#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "bcastsim/metric.hpp"

namespace bcastsim {

enum class ModelKind { SINR, UDG, QUDG, PROTOCOL, BIG, KHOP };
enum class AdversaryPolicy { pessimistic, optimistic, scripted };

ModelKind model_kind_from_string(const std::string& s);
std::string to_string(ModelKind k);
AdversaryPolicy adversary_policy_from_string(const std::string& s);
std::string to_string(AdversaryPolicy p);

/// Per-model reception rule parameters. R_prime is the interference radius of
/// QUDG/Protocol; grey-zone communication edges of QUDG are a static script.
struct ReceptionModelConfig {
  ModelKind kind = ModelKind::SINR;
  double sinr_threshold = 2.0;  // beta >= 1
  double noise = 1.0;           // N > 0
  double R_prime = 0.0;
  int khop = 1;
  AdversaryPolicy adversary_policy = AdversaryPolicy::pessimistic;
  std::vector<std::pair<int, int>> qudg_edges;  // undirected grey-zone pairs
};

/// SuccClear instantiation: exclusion radius factor rho_c and interference
/// cap i_c (+inf representable; every finite value compares <= inf).
struct SuccClearParams {
  double rho_c = 0.0;
  double i_c = kInf;
};

/// Exact per-model SuccClear parameters at the given precision.
SuccClearParams derive_succclear_params(const ReceptionModelConfig& cfg,
                                        const RadiusSet& radii, double zeta,
                                        double precision);

/// Alive-filtered view over a quasi-metric space; `alive` may be null for
/// static instances (everyone alive).
struct TopologyView {
  const QuasiMetricSpace* space = nullptr;
  const std::vector<std::uint8_t>* alive = nullptr;

  int size() const { return space->size(); }
  bool is_alive(int v) const { return !alive || (*alive)[v] != 0; }
  double power() const { return space->base.power; }
  double d(int u, int v) const { return space->d(u, v); }
  double loss(int u, int v) const { return space->base.loss(u, v); }
};

/// N_t(u, precision) = {v != u alive : d(u,v) <= (1-precision) R}. Directed.
std::vector<int> neighbors(const TopologyView& t, const RadiusSet& radii, int u,
                           double precision);

/// Aggregate interference at v from transmitter set S (v excluded from the
/// sum): sum of P / f(w,v).
double interference_at(const TopologyView& t, const std::vector<int>& S, int v);

enum class ContentionKind { close, vicinity };

/// close: sum of probs over B(v, R/2) (rho ignored); vicinity: over D(v, rho*R).
double contention(const TopologyView& t, const RadiusSet& radii,
                  const Eigen::VectorXd& probs, int v, double rho,
                  ContentionKind kind);

/// Expected interference from outside the vicinity:
/// sum over w outside D(v, rho*R) of p(w) * P / f(w,v).
double expected_interference(const TopologyView& t, const RadiusSet& radii,
                             const Eigen::VectorXd& probs, int v, double rho);

/// True iff S ∩ D(u, rho_c R) \ {u} is empty and interference at u <= i_c;
/// a guaranteed transmission reaches all of N(u, precision).
bool succ_clear_guarantee(const TopologyView& t, const SuccClearParams& sc,
                          const RadiusSet& radii, const std::vector<int>& S, int u);

/// One resolved slot: who transmitted, who received from whom, and the
/// realized aggregate interference at every node (own transmission excluded).
struct RoundRealization {
  std::vector<int> transmitters;                 // ascending
  std::vector<std::pair<int, int>> deliveries;   // (sender, receiver), ascending
  Eigen::VectorXd interference;                  // size n

  bool delivered(int u, int v) const;
  std::vector<int> receivers_of(int u) const;
  /// Sender that delivered to v this slot, or -1.
  int sender_to(int v) const;
};

/// Full SINR rule: v receives u iff P/f(u,v) > beta * (I_{S \ u}(v) + N).
/// Transmitters receive nothing (half-duplex).
RoundRealization resolve_round_sinr(const TopologyView& t,
                                    const ReceptionModelConfig& cfg,
                                    const RadiusSet& radii,
                                    const std::vector<int>& S);

/// Graph-model rules (UDG/QUDG/PROTOCOL/BIG/KHOP). Throws ModelMismatch for SINR.
RoundRealization resolve_round_graph(const TopologyView& t,
                                     const ReceptionModelConfig& cfg,
                                     const RadiusSet& radii,
                                     const std::vector<int>& S);

struct ScriptEntry {
  int round = 0;
  int sender = -1;
  int receiver = -1;
  bool deliver = false;
};

/// Policy-resolved realization for one slot: SuccClear-guaranteed
/// transmitters always deliver to all their neighbors at `precision`;
/// everything else is adversarial (pessimistic: nothing; optimistic: the
/// model's own full rule; scripted: per-round entries).
RoundRealization resolve_round(const TopologyView& t, const ReceptionModelConfig& cfg,
                               const RadiusSet& radii, const std::vector<int>& S,
                               double precision,
                               const std::vector<ScriptEntry>* round_script = nullptr);

/// Adversary half on its own (pending = non-guaranteed candidates), exposed
/// for direct testing.
std::vector<std::pair<int, int>> resolve_adversarial(
    const TopologyView& t, const ReceptionModelConfig& cfg, const RadiusSet& radii,
    const std::vector<int>& S, const std::vector<std::pair<int, int>>& pending,
    const std::vector<ScriptEntry>* round_script);

}  // namespace bcastsim
