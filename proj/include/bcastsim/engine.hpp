#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcastsim/dynamics.hpp"
#include "bcastsim/protocols.hpp"

namespace bcastsim {

enum class Mode { synchronous, asynchronous };

Mode mode_from_string(const std::string& s);
std::string to_string(Mode m);

struct SensingOverrides {
  double h1 = 2.0;
  double h2 = 2.0;
};

struct SimulationConfig {
  std::string name = "run";
  QuasiMetricSpace space;
  RadiusSet radii;
  ReceptionModelConfig model;
  SensingOverrides sensing;
  ProtocolConfig protocol;
  AdversarySchedule schedule;
  std::vector<ScriptEntry> adversary_script;
  bool has_script = false;
  int horizon = 1000;
  std::uint64_t seed = 1;
  Mode mode = Mode::synchronous;
  int n_bound = 0;  // 0 -> current n
  bool whp_cap_override = false;

  int effective_n_bound() const { return n_bound > 0 ? n_bound : space.size(); }
};

/// Throws ConfigInvalid / StaticOnly / NotSymmetric with a locator message.
/// Returns human-readable warnings (e.g. r_min above the recommended cap).
std::vector<std::string> validate_config(const SimulationConfig& cfg);

struct SlotRecord {
  std::vector<int> transmitters;
  std::vector<std::pair<int, int>> deliveries;
  std::vector<std::int8_t> cd;   // 1 = Busy, per node
  std::vector<std::int8_t> ack;  // -1 not a transmitter / 0 / 1
  std::vector<std::int8_t> ntd;
  std::vector<int> ntd_trigger;
};

struct RoundRecord {
  int t = 0;
  std::vector<ScheduleEvent> events;
  std::vector<SlotRecord> slots;
  std::vector<double> probs;        // p used for this round's slot-1 draws
  std::vector<std::uint8_t> alive;
  std::vector<std::uint8_t> mass;   // mass-delivered this round
  std::vector<int> informed;        // nodes that gained the message this round
};

struct TraceSummary {
  int rounds_executed = 0;
  int completion_round = -1;  // first round after which the protocol finished
  int total_deliveries = 0;
  int total_transmissions = 0;
};

struct SimulationTrace {
  std::string header_json;  // full config echo incl. derived constants
  std::vector<RoundRecord> rounds;
  TraceSummary summary;
  std::uint64_t hash = 0;
};

SimulationTrace run(const SimulationConfig& cfg);

/// Re-runs the config and compares content hashes.
bool replay_verify(const SimulationTrace& trace, const SimulationConfig& cfg);

/// Canonical line-delimited serialization (also what the hash covers).
std::vector<std::string> trace_lines(const SimulationTrace& trace);
std::uint64_t trace_content_hash(const SimulationTrace& trace);

// -- Analysis ---------------------------------------------------------------

struct PhaseStat {
  int phase = 0;
  int rounds = 0;
  int good = 0;
  int high_contention = 0;
  int low_contention = 0;
  char type = 'B';  // 'A' if >= 1/10 of rounds high contention
  double good_fraction() const { return rounds ? double(good) / rounds : 1.0; }
};

struct GoodRoundReport {
  double eta = 0.0;
  double i_hat = 0.0;
  int phase_length = 0;
  std::vector<std::vector<PhaseStat>> per_node;  // [node][phase]
};

GoodRoundReport good_round_stats(const SimulationConfig& cfg,
                                 const SimulationTrace& trace,
                                 const PhaseParams& phase);

enum class Problem { local, global };

struct CompletionReport {
  std::vector<int> first_reception;       // -1 = never
  std::vector<int> first_mass_delivery;   // -1 = never
  int completion_round = -1;              // all-informed / all-stopped round
  std::vector<int> dist_from_source;      // hop distances at round 0 (global)
  std::vector<int> neighborhood_size;     // |N(v, eps)| at round 0
};

CompletionReport completion_metrics(const SimulationConfig& cfg,
                                    const SimulationTrace& trace, Problem problem);

struct CdStatsReport {
  int busy_rounds_considered = 0;   // rounds with P_t(v) > phi
  double busy_all_fraction = 1.0;   // all of B(v, R/2) sensed Busy
  double busy_bound = 0.0;          // 1 - h1^-phi
  int idle_rounds_considered = 0;   // P_t^rho(v) <= eta and ext. interference < i_cd
  double idle_fraction = 1.0;
  double idle_bound = 0.0;          // h2^-eta
};

CdStatsReport cd_statistics(const SimulationConfig& cfg, const SimulationTrace& trace,
                            int v, double phi, double rho);

/// Summary CSV: node, first_reception, first_mass_delivery, dyn_degree,
/// stable_dist, bound_ratio. Identical across reruns of the same build.
std::string summary_csv(const SimulationConfig& cfg, const SimulationTrace& trace,
                        Problem problem);

}  // namespace bcastsim
