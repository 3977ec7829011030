#include "bcastsim/metric.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bcastsim {

int PathLossMap::index_of(const std::string& id) const {
  for (int i = 0; i < size(); ++i)
    if (ids[i] == id) return i;
  throw UnknownNode("unknown node id: " + id);
}

void PathLossMap::validate() const {
  const int n = size();
  std::set<std::string> uniq(ids.begin(), ids.end());
  if (static_cast<int>(uniq.size()) != n)
    throw ConfigInvalid("duplicate node ids in path-loss map");
  if (loss.rows() != n || loss.cols() != n)
    throw ConfigInvalid("loss matrix shape does not match node count");
  if (!(power > 0)) throw ConfigInvalid("power must be positive");
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v && !(loss(u, v) > 0))
        throw ConfigInvalid("path loss must be positive for " + ids[u] + "->" + ids[v]);
}

QuasiMetricSpace QuasiMetricSpace::from_loss(PathLossMap base_, double zeta,
                                             double r_min, double lambda,
                                             double indep_const) {
  base_.validate();
  QuasiMetricSpace s;
  s.base = std::move(base_);
  s.zeta = zeta;
  s.r_min = r_min;
  s.lambda = lambda;
  s.indep_const = indep_const;
  const int n = s.base.size();
  s.dist = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) s.dist(u, v) = std::pow(s.base.loss(u, v), 1.0 / zeta);
  return s;
}

QuasiMetricSpace QuasiMetricSpace::from_dist(std::vector<std::string> ids,
                                             Eigen::MatrixXd dist, double power,
                                             double zeta, double r_min,
                                             double lambda, double indep_const) {
  const int n = static_cast<int>(ids.size());
  QuasiMetricSpace s;
  s.base.ids = std::move(ids);
  s.base.power = power;
  s.base.loss = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) s.base.loss(u, v) = std::pow(dist(u, v), zeta);
  s.base.validate();
  s.dist = std::move(dist);
  s.dist.diagonal().setZero();
  s.zeta = zeta;
  s.r_min = r_min;
  s.lambda = lambda;
  s.indep_const = indep_const;
  return s;
}

void QuasiMetricSpace::refresh_pair(int u, int v) {
  if (u == v) return;
  dist(u, v) = std::pow(base.loss(u, v), 1.0 / zeta);
}

void QuasiMetricSpace::refresh_node(int u) {
  for (int v = 0; v < size(); ++v) {
    refresh_pair(u, v);
    refresh_pair(v, u);
  }
}

RadiusSet::RadiusSet(double r, double eps) : R(r), epsilon(eps) {
  if (!(r > 0)) throw ConfigInvalid("R must be positive");
  if (!(eps > 0 && eps < 1)) throw ConfigInvalid("epsilon must be in (0,1)");
  R_B = (1.0 - eps) * r;
}

namespace {

// All ordered triplets satisfy f(u,v)^s <= f(u,w)^s + f(w,v)^s + tol at
// s = 1/zeta. Subadditivity of t -> t^a for a <= 1 makes this monotone in
// zeta, which justifies the binary search.
bool triangle_holds(const Eigen::MatrixXd& f, double zeta, double tol) {
  const int n = static_cast<int>(f.rows());
  const double s = 1.0 / zeta;
  Eigen::MatrixXd g(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) g(u, v) = u == v ? 0.0 : std::pow(f(u, v), s);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      const double guv = g(u, v);
      for (int w = 0; w < n; ++w) {
        if (w == u || w == v) continue;
        if (guv > g(u, w) + g(w, v) + tol) return false;
      }
    }
  return true;
}

}  // namespace

double compute_metricity(const PathLossMap& map, double tol, double zeta_max) {
  if (map.size() < 1) throw ConfigInvalid("metricity needs at least one node");
  if (!(tol > 0)) throw ConfigInvalid("tol must be positive");
  if (map.size() < 3) return 1.0;  // vacuous triplet set
  if (triangle_holds(map.loss, 1.0, tol)) return 1.0;
  if (!triangle_holds(map.loss, zeta_max, tol))
    throw NoFeasibleZeta("triangle inequality fails even at zeta_max=" +
                         format_double(zeta_max));
  double lo = 1.0, hi = zeta_max;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (triangle_holds(map.loss, mid, tol))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::vector<int> ball(const QuasiMetricSpace& s, int u, double r, BallKind kind) {
  if (u < 0 || u >= s.size()) throw UnknownNode("ball: node index out of range");
  std::vector<int> out;
  for (int v = 0; v < s.size(); ++v) {
    const double in_d = s.d(v, u);
    const double metric = kind == BallKind::in ? in_d : std::max(in_d, s.d(u, v));
    if (metric < r) out.push_back(v);
  }
  return out;
}

std::vector<int> greedy_packing(const QuasiMetricSpace& s,
                                const std::vector<int>& region, double r) {
  std::vector<int> sorted(region);
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> centers;
  for (int cand : sorted) {
    bool ok = true;
    for (int c : centers) {
      if (s.d(cand, c) < 2 * r || s.d(c, cand) < 2 * r) {
        ok = false;
        break;
      }
    }
    if (ok) centers.push_back(cand);
  }
  return centers;
}

IndependenceReport validate_bounded_independence(const QuasiMetricSpace& s,
                                                 const std::vector<double>& q_samples,
                                                 const std::vector<int>* region) {
  IndependenceReport rep;
  std::vector<int> scope;
  if (region) {
    scope = *region;
    std::sort(scope.begin(), scope.end());
  } else {
    scope.resize(s.size());
    for (int i = 0; i < s.size(); ++i) scope[i] = i;
  }
  double worst_ratio = -1.0;
  for (double q : q_samples) {
    for (int u : scope) {
      std::vector<int> in_ball = ball(s, u, q * s.r_min, BallKind::in);
      // restrict to the region under study
      std::vector<int> dom;
      std::set_intersection(in_ball.begin(), in_ball.end(), scope.begin(),
                            scope.end(), std::back_inserter(dom));
      const auto pack = greedy_packing(s, dom, s.r_min);
      IndependenceSample sample;
      sample.node = u;
      sample.q = q;
      sample.packing_size = static_cast<int>(pack.size());
      sample.bound = s.indep_const * std::pow(q, s.lambda);
      sample.ok = sample.packing_size <= sample.bound + 1e-9;
      rep.samples_checked++;
      const double ratio = sample.bound > 0
                               ? sample.packing_size / sample.bound
                               : (sample.packing_size > 0 ? kInf : 0.0);
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        rep.worst = sample;
      }
      if (!sample.ok) {
        rep.pass = false;
        rep.violations.push_back(sample);
      }
    }
  }
  return rep;
}

std::pair<double, double> estimate_independence(const QuasiMetricSpace& s,
                                                const std::vector<double>& q_samples) {
  double lambda_hat = 1.0;
  for (double q : q_samples) {
    if (q <= 1.0) continue;
    for (int u = 0; u < s.size(); ++u) {
      const auto in_ball = ball(s, u, q * s.r_min, BallKind::in);
      const auto pack = greedy_packing(s, in_ball, s.r_min);
      if (pack.size() > 1)
        lambda_hat = std::max(lambda_hat, std::log(double(pack.size())) / std::log(q));
    }
  }
  double c_hat = 1.0;
  for (double q : q_samples) {
    for (int u = 0; u < s.size(); ++u) {
      const auto in_ball = ball(s, u, q * s.r_min, BallKind::in);
      const auto pack = greedy_packing(s, in_ball, s.r_min);
      c_hat = std::max(c_hat, pack.size() / std::pow(q, lambda_hat));
    }
  }
  return {lambda_hat, c_hat};
}

double symmetry_factor(const QuasiMetricSpace& s) {
  double worst = 1.0;
  for (int u = 0; u < s.size(); ++u)
    for (int v = u + 1; v < s.size(); ++v) {
      const double a = s.d(u, v), b = s.d(v, u);
      if (a > 0 && b > 0) worst = std::max({worst, a / b, b / a});
    }
  return worst;
}

PathLossMap gen_euclidean_instance(int n, double side, double zeta,
                                   std::uint64_t seed) {
  if (n < 1) throw ConfigInvalid("n must be >= 1");
  if (!(side > 0) || !(zeta > 0)) throw ConfigInvalid("side and zeta must be positive");
  SplitMix rng(seed);
  Eigen::Matrix2Xd pts(2, n);
  for (int i = 0; i < n; ++i) {
    for (;;) {
      const double x = rng.uniform(0.0, side);
      const double y = rng.uniform(0.0, side);
      bool coincident = false;
      for (int j = 0; j < i; ++j)
        if (pts(0, j) == x && pts(1, j) == y) {
          coincident = true;
          break;
        }
      if (!coincident) {
        pts(0, i) = x;
        pts(1, i) = y;
        break;
      }
    }
  }
  PathLossMap map;
  map.ids.resize(n);
  for (int i = 0; i < n; ++i) map.ids[i] = "n" + std::to_string(i);
  map.loss = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) map.loss(u, v) = std::pow((pts.col(u) - pts.col(v)).norm(), zeta);
  map.positions = pts;
  return map;
}

PathLossMap gen_lower_bound_instance(int n, double epsilon, double R) {
  if (n < 4) throw ConfigInvalid("lower-bound instance needs n >= 4");
  if (!(epsilon > 0 && epsilon < 1)) throw InvalidEpsilon("epsilon must be in (0,1)");
  const double mu = epsilon * (1 + epsilon) / (1 - epsilon);
  if (mu >= 1.0)
    throw InvalidEpsilon("mu = eps(1+eps)/(1-eps) must be < 1; epsilon too large");
  const double r_b = (1 - epsilon) * R;
  const double delta = epsilon / (8 * (1 - epsilon));
  const int relay = n - 2;  // p_{n-1}
  const int far = n - 1;    // p_n
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool i_cl = i < relay, j_cl = j < relay;
      double v;
      if (i_cl && j_cl)
        v = delta * r_b;
      else if ((i_cl && j == relay) || (j_cl && i == relay))
        v = mu * r_b;
      else if ((i_cl && j == far) || (j_cl && i == far))
        v = (mu + 1) * r_b;
      else
        v = r_b;  // relay <-> far
      d(i, j) = v;
    }
  std::vector<std::string> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = "p" + std::to_string(i + 1);
  // zeta fixed at 2 for this construction; f = d^2.
  PathLossMap map;
  map.ids = std::move(ids);
  map.loss = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) map.loss(i, j) = d(i, j) * d(i, j);
  return map;
}

namespace {

Eigen::MatrixXi hop_distances(int n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      throw ConfigInvalid("edge endpoint out of range");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  Eigen::MatrixXi d = Eigen::MatrixXi::Constant(n, n, -1);
  std::vector<int> queue;
  for (int s = 0; s < n; ++s) {
    queue.assign(1, s);
    d(s, s) = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      for (int w : adj[u])
        if (d(s, w) < 0) {
          d(s, w) = d(s, u) + 1;
          queue.push_back(w);
        }
    }
    for (int v = 0; v < n; ++v)
      if (d(s, v) < 0) throw DisconnectedGraph("graph is not connected");
  }
  return d;
}

}  // namespace

QuasiMetricSpace gen_big_instance(int n, const std::vector<std::pair<int, int>>& edges,
                                  double zeta) {
  const Eigen::MatrixXi hops = hop_distances(n, edges);
  Eigen::MatrixXd d = hops.cast<double>();
  std::vector<std::string> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = "g" + std::to_string(i);
  QuasiMetricSpace probe =
      QuasiMetricSpace::from_dist(ids, d, 1.0, 1.0, 1.0, 1.0, 1.0);
  auto [lambda_hat, c_hat] = estimate_independence(probe, {1, 2, 3, 4});
  // no canonical zeta for a pure graph; default to lambda + 1
  const double z = zeta > 0 ? zeta : lambda_hat + 1.0;
  if (z <= lambda_hat)
    throw ConfigInvalid("BIG requires zeta > lambda (lambda estimate " +
                        format_double(lambda_hat) + ")");
  return QuasiMetricSpace::from_dist(std::move(ids), std::move(d), 1.0, z, 1.0,
                                     lambda_hat, c_hat);
}

PathLossMap gen_grid_instance(int rows, int cols, double spacing, double zeta) {
  if (rows < 1 || cols < 1) throw ConfigInvalid("grid needs positive dimensions");
  const int n = rows * cols;
  Eigen::Matrix2Xd pts(2, n);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      pts(0, r * cols + c) = c * spacing;
      pts(1, r * cols + c) = r * spacing;
    }
  PathLossMap map;
  map.ids.resize(n);
  for (int i = 0; i < n; ++i) map.ids[i] = "n" + std::to_string(i);
  map.loss = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) map.loss(u, v) = std::pow((pts.col(u) - pts.col(v)).norm(), zeta);
  map.positions = pts;
  return map;
}

PathLossMap gen_line_instance(int n, double spacing, double zeta) {
  return gen_grid_instance(1, n, spacing, zeta);
}

PathLossMap gen_clique_instance(int n, double spread, double zeta, std::uint64_t seed) {
  return gen_euclidean_instance(n, spread, zeta, seed);
}

}  // namespace bcastsim
