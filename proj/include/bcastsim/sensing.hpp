#pragma once

#include "bcastsim/models.hpp"

namespace bcastsim {

/// Carrier-sensing thresholds, derived from the model at a given precision.
///   t_cd  = P / ((1-eps) R)^zeta        Busy/Idle threshold
///   t_ack = min{ I_c, P / (rho_c R)^zeta }   (second term +inf when rho_c = 0)
///   t_ntd = P / (eps R / 2)^zeta
/// i_cd < t_cd and i_ack <= t_ack are the contract-side interference
/// parameters; the paper fixes no value, so they default to half the
/// thresholds. eta = log_{h2}(10/9).
struct SensingConfig {
  double precision = 0.2;
  double t_cd = 0.0;
  double i_cd = 0.0;
  double t_ack = 0.0;
  double i_ack = 0.0;
  double t_ntd = 0.0;
  double h1 = 2.0;
  double h2 = 2.0;
  double eta = 0.0;
  bool noise_in_cd = false;  // SINR senses interference plus ambient noise
  double noise = 0.0;

  static SensingConfig derive(const ReceptionModelConfig& model,
                              const RadiusSet& radii, double zeta, double power,
                              double precision, double h1 = 2.0, double h2 = 2.0);
};

enum class CdOutcome { Busy, Idle };

/// Busy iff the sensed interference is at least t_cd; the sensing node's own
/// transmission is excluded from the sum.
CdOutcome cd_outcome(const TopologyView& t, const SensingConfig& cfg,
                     const std::vector<int>& S, int v);

/// Carrier-sense ACK for transmitter u: 1 iff the interference sensed at u is
/// at most t_ack. Throws NotATransmitter when u is not in S. An outcome of 1
/// implies the round's realization delivered u's message to all of
/// N(u, precision) (asserted by tests against the resolvers).
int ack_outcome(const TopologyView& t, const SensingConfig& cfg,
                const std::vector<int>& S, int u);

struct NtdResult {
  int fired = 0;
  int trigger = -1;  // sender id when fired
};

/// 1 iff some delivery (u,v) of this slot has d(u,v) < precision * R / 2,
/// i.e. the received signal is stronger than P / (precision R / 2)^zeta.
/// Comparison is done on the distance map directly so it is bit-exact.
NtdResult ntd_outcome(const TopologyView& t, const RadiusSet& radii,
                      const RoundRealization& realization, int v, double precision);

}  // namespace bcastsim
