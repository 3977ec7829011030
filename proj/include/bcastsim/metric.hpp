#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bcastsim/common.hpp"

namespace bcastsim {

/// Ground truth of the physical layer: asymmetric positive path loss f(u,v)
/// between every ordered pair of distinct nodes, plus the uniform transmit
/// power P. Node identifiers are opaque strings; all numeric code works with
/// their index in `ids`.
struct PathLossMap {
  std::vector<std::string> ids;
  Eigen::MatrixXd loss;  // f(u,v): row = sender, col = receiver; diagonal unused
  double power = 1.0;
  // Euclidean backing (2 x n), present for geometrically generated instances.
  std::optional<Eigen::Matrix2Xd> positions;

  int size() const { return static_cast<int>(ids.size()); }
  int index_of(const std::string& id) const;
  void validate() const;
};

/// The derived quasi-metric d(u,v) = f(u,v)^{1/zeta}, d(u,u) = 0, together
/// with the bounded-independence parameters (r_min, lambda, C).
struct QuasiMetricSpace {
  PathLossMap base;
  double zeta = 2.0;
  Eigen::MatrixXd dist;
  double r_min = 0.0;
  double lambda = 2.0;
  double indep_const = 8.0;

  static QuasiMetricSpace from_loss(PathLossMap base, double zeta, double r_min,
                                    double lambda, double indep_const);
  // Builds from exact distances; loss is filled as d^zeta. Keeps hop metrics
  // and closed-form constructions bit-exact instead of round-tripping pow().
  static QuasiMetricSpace from_dist(std::vector<std::string> ids,
                                    Eigen::MatrixXd dist, double power,
                                    double zeta, double r_min, double lambda,
                                    double indep_const);

  double d(int u, int v) const { return dist(u, v); }
  int size() const { return base.size(); }
  // Refreshes dist row/col of `u` after base.loss changed (dynamics retunes).
  void refresh_node(int u);
  void refresh_pair(int u, int v);
};

/// Communication radius bundle: R is the maximum clear-channel transmission
/// distance, R_B = (1-epsilon)R the guaranteed-reception distance.
struct RadiusSet {
  double R = 1.0;
  double epsilon = 0.2;
  double R_B = 0.8;

  RadiusSet() = default;
  RadiusSet(double r, double eps);
};

enum class BallKind { symmetric, in };

/// Smallest zeta in [1, zeta_max] such that f^{1/zeta} satisfies the triangle
/// inequality on all triplets within `tol`; binary search to 1e-6 over a full
/// O(n^3) verification. Throws NoFeasibleZeta if even zeta_max fails.
double compute_metricity(const PathLossMap& map, double tol, double zeta_max = 16.0);

/// B(u,r) = {v : max(d(v,u), d(u,v)) < r} or D(u,r) = {v : d(v,u) < r}.
/// Strict inequality; the center belongs to both when r > 0. Indices sorted.
std::vector<int> ball(const QuasiMetricSpace& s, int u, double r, BallKind kind);

/// Ascending-id greedy maximal r-packing of `region`: pairwise distance
/// >= 2r in both directions. Deterministic and replayable.
std::vector<int> greedy_packing(const QuasiMetricSpace& s,
                                const std::vector<int>& region, double r);

struct IndependenceSample {
  int node = -1;
  double q = 1.0;
  int packing_size = 0;
  double bound = 0.0;
  bool ok = true;
};

struct IndependenceReport {
  bool pass = true;
  IndependenceSample worst;  // largest packing_size / bound ratio
  std::vector<IndependenceSample> violations;
  int samples_checked = 0;
};

/// For each q and node u, greedily packs D(u, q*r_min) at radius r_min and
/// checks the size against C*q^lambda. Greedy packings are lower-bound
/// witnesses, so any reported violation is definite.
IndependenceReport validate_bounded_independence(const QuasiMetricSpace& s,
                                                 const std::vector<double>& q_samples,
                                                 const std::vector<int>* region = nullptr);

/// Estimates (lambda, C) from greedy packings over the sampled q values,
/// with C normalized so every sample passes. Used for BIG instances.
std::pair<double, double> estimate_independence(const QuasiMetricSpace& s,
                                                const std::vector<double>& q_samples);

/// max over pairs of d(u,v)/d(v,u); 1 for symmetric metrics. Reported, not
/// enforced ("almost symmetric" inputs are accepted).
double symmetry_factor(const QuasiMetricSpace& s);

// -- Instance generators -----------------------------------------------------

/// n points uniform in a side x side square, f = euclid^zeta; coincident
/// points are resampled. Identical seeds give identical maps.
PathLossMap gen_euclidean_instance(int n, double side, double zeta, std::uint64_t seed);

/// The n-point lower-bound distance diagram: a cluster p_1..p_{n-2} at mutual
/// distance delta*R_B with delta = eps/(8(1-eps)), a relay p_{n-1} at mu*R_B
/// from the cluster with mu = eps(1+eps)/(1-eps), the far node p_n at
/// (mu+1)*R_B from the cluster and R_B from the relay; zeta is fixed at 2.
/// Throws InvalidEpsilon when mu >= 1.
PathLossMap gen_lower_bound_instance(int n, double epsilon, double R);

/// Hop-distance metric of a connected undirected graph; r_min = 1 and
/// (lambda, C) estimated by a packing sweep; f = d^zeta with zeta > lambda.
QuasiMetricSpace gen_big_instance(int n, const std::vector<std::pair<int, int>>& edges,
                                  double zeta = 0.0);

// Geometric layouts reused by the CLI and by experiments.
PathLossMap gen_grid_instance(int rows, int cols, double spacing, double zeta);
PathLossMap gen_line_instance(int n, double spacing, double zeta);
/// n points in a spread x spread square (a dense cluster when spread << R).
PathLossMap gen_clique_instance(int n, double spread, double zeta, std::uint64_t seed);

}  // namespace bcastsim
