#include "bcastsim/sensing.hpp"

#include <algorithm>
#include <cmath>

namespace bcastsim {

SensingConfig SensingConfig::derive(const ReceptionModelConfig& model,
                                    const RadiusSet& radii, double zeta,
                                    double power, double precision, double h1,
                                    double h2) {
  if (!(h1 > 1) || !(h2 > 1)) throw ConfigInvalid("h1 and h2 must exceed 1");
  SensingConfig cfg;
  cfg.precision = precision;
  cfg.h1 = h1;
  cfg.h2 = h2;
  cfg.eta = std::log(10.0 / 9.0) / std::log(h2);
  cfg.t_cd = power / std::pow((1.0 - precision) * radii.R, zeta);
  cfg.i_cd = cfg.t_cd / 2.0;
  const SuccClearParams sc = derive_succclear_params(model, radii, zeta, precision);
  const double excl_term =
      sc.rho_c > 0 ? power / std::pow(sc.rho_c * radii.R, zeta) : kInf;
  cfg.t_ack = std::min(sc.i_c, excl_term);
  cfg.i_ack = std::isinf(cfg.t_ack) ? cfg.t_ack : cfg.t_ack / 2.0;
  cfg.t_ntd = power / std::pow(precision * radii.R / 2.0, zeta);
  if (model.kind == ModelKind::SINR) {
    cfg.noise_in_cd = true;
    cfg.noise = model.noise;
  }
  return cfg;
}

CdOutcome cd_outcome(const TopologyView& t, const SensingConfig& cfg,
                     const std::vector<int>& S, int v) {
  double sensed = interference_at(t, S, v);
  if (cfg.noise_in_cd) sensed += cfg.noise;
  return sensed >= cfg.t_cd ? CdOutcome::Busy : CdOutcome::Idle;
}

int ack_outcome(const TopologyView& t, const SensingConfig& cfg,
                const std::vector<int>& S, int u) {
  if (std::find(S.begin(), S.end(), u) == S.end())
    throw NotATransmitter("ack_outcome: node did not transmit this slot");
  return interference_at(t, S, u) <= cfg.t_ack ? 1 : 0;
}

NtdResult ntd_outcome(const TopologyView& t, const RadiusSet& radii,
                      const RoundRealization& realization, int v,
                      double precision) {
  NtdResult res;
  const double range = precision * radii.R / 2.0;
  double best = kInf;
  for (const auto& [u, r] : realization.deliveries) {
    if (r != v) continue;
    const double d = t.d(u, v);
    if (d < range && d < best) {
      best = d;
      res.fired = 1;
      res.trigger = u;
    }
  }
  return res;
}

}  // namespace bcastsim
