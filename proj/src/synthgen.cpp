#include "gclab/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "gclab/rng.hpp"

namespace gclab {

namespace {

long long round_half_away(double x) {
  return static_cast<long long>(x >= 0 ? std::floor(x + 0.5) : std::ceil(x - 0.5));
}

void check_labels(const Vector& labels) {
  if (labels.size() == 0) throw std::invalid_argument("labels: empty");
  for (Index i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0)
      throw std::invalid_argument("labels: entries must be -1 or +1");
  }
}

}  // namespace

Vector ModelParams::mu() const {
  Vector dir = mu_direction;
  if (dir.size() == 0) {
    dir = Vector::Zero(p);
    dir[0] = 1.0;
  }
  return mu_norm * dir;
}

void ModelParams::validate() const {
  if (n < 1) throw std::invalid_argument("n: must be >= 1");
  if (p < 1) throw std::invalid_argument("p: must be >= 1");
  if (d < 1) throw std::invalid_argument("d: must be >= 1");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q: must lie in (0,1)");
  if (!(class_balance > 0.0 && class_balance < 1.0))
    throw std::invalid_argument("class_balance: must lie in (0,1)");
  if (!std::isfinite(eta)) throw std::invalid_argument("eta: must be finite");
  if (!(mu_norm >= 0.0)) throw std::invalid_argument("mu_norm: must be >= 0");
  const double shift = std::abs(eta) / std::sqrt(static_cast<double>(n));
  if (!(q * q * (1.0 + shift) < 1.0))
    throw std::invalid_argument("q: q^2 (1 + |eta|/sqrt(n)) must be < 1");
  if (!(q * q * (1.0 - shift) > 0.0))
    throw std::invalid_argument("eta: q^2 (1 - |eta|/sqrt(n)) must be > 0");
  if (mu_direction.size() != 0) {
    if (mu_direction.size() != p)
      throw std::invalid_argument("mu_direction: length must equal p");
    if (std::abs(mu_direction.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("mu_direction: must be unit length");
  }
}

std::string Provenance::describe() const {
  switch (kind) {
    case Kind::Clean: return "clean";
    case Kind::TheoreticalNoise:
      return "theoretical-noise(alpha=" + std::to_string(alpha) +
             ",ratio=" + std::to_string(ratio) + ")";
    case Kind::EdgeDeleted: return "edge-deleted(ratio=" + std::to_string(ratio) + ")";
    case Kind::EdgeInserted: return "edge-inserted(ratio=" + std::to_string(ratio) + ")";
    case Kind::FeatureNoise: return "feature-noise(gamma=" + std::to_string(gamma) + ")";
  }
  return "unknown";
}

Vector gen_labels(const ModelParams& params) {
  params.validate();
  const Index n = params.n;
  const long long n_minus = round_half_away(params.class_balance * static_cast<double>(n));
  std::vector<double> v(static_cast<std::size_t>(n), 1.0);
  for (long long i = 0; i < n_minus && i < n; ++i) v[static_cast<std::size_t>(i)] = -1.0;
  auto rng = RngStream::keyed(params.seed, "labels");
  rng.shuffle(v);
  return Eigen::Map<Vector>(v.data(), n);
}

Matrix gen_gmm_features(const Vector& labels, const ModelParams& params) {
  params.validate();
  check_labels(labels);
  if (labels.size() != params.n)
    throw std::invalid_argument("labels: length must equal params.n");
  const Index n = params.n, p = params.p;
  const Vector mu = params.mu();
  const double sqp = std::sqrt(static_cast<double>(p));
  auto rng = RngStream::keyed(params.seed, "features");
  Matrix x(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) x(i, j) = rng.normal() / sqp;
    x.row(i) += labels[i] / sqp * mu.transpose();
  }
  return x;
}

Matrix gen_sbm_adjacency(const Vector& labels, const ModelParams& params) {
  params.validate();
  check_labels(labels);
  if (labels.size() != params.n)
    throw std::invalid_argument("labels: length must equal params.n");
  const Index n = params.n;
  const double q2 = params.q * params.q;
  const double shift = params.eta / std::sqrt(static_cast<double>(n));
  auto rng = RngStream::keyed(params.seed, "adjacency");
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    a(i, i) = 1.0;
    for (Index j = params.directed ? Index{0} : i + 1; j < n; ++j) {
      if (j == i) continue;
      const double pij = q2 * (1.0 + shift * labels[i] * labels[j]);
      if (!(pij > 0.0 && pij < 1.0))
        throw std::invalid_argument(
            "edge probability outside (0,1) for class pair (" +
            std::to_string(labels[i] < 0 ? 1 : 2) + "," +
            std::to_string(labels[j] < 0 ? 1 : 2) + ")");
      a(i, j) = rng.bernoulli(pij) ? 1.0 : 0.0;
      if (!params.directed) a(j, i) = a(i, j);
    }
  }
  return a;
}

Matrix gen_er_noise(Index n, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0))
    throw std::invalid_argument("density: must lie in [0,1]");
  auto rng = RngStream::keyed(seed, "er-noise");
  Matrix r = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      r(i, j) = rng.bernoulli(density) ? 1.0 : 0.0;
      r(j, i) = r(i, j);
    }
  }
  return r;
}

Index edge_count(const Matrix& adjacency) {
  Index count = 0;
  for (Index i = 0; i < adjacency.rows(); ++i)
    for (Index j = i + 1; j < adjacency.cols(); ++j)
      if (adjacency(i, j) != 0.0) ++count;
  return count;
}

double er_density_for_ratio(const Matrix& adjacency, double ratio) {
  if (ratio < 0.0) throw std::invalid_argument("ratio: must be >= 0");
  const Index n = adjacency.rows();
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  if (pairs <= 0.0) throw std::invalid_argument("graph: needs at least two nodes");
  const double density = ratio * static_cast<double>(edge_count(adjacency)) / pairs;
  if (density > 1.0)
    throw std::invalid_argument("ratio: requested noise density exceeds 1");
  return density;
}

AttributedGraph perturb_edges(const AttributedGraph& graph, double target_ratio,
                              std::uint64_t seed) {
  if (target_ratio < 0.0) throw std::invalid_argument("target_ratio: must be >= 0");
  if (!graph.adjacency.isApprox(graph.adjacency.transpose()))
    throw std::invalid_argument("perturb_edges: graph must be undirected");
  AttributedGraph out = graph;
  if (target_ratio == 1.0) return out;

  const Index n = graph.n();
  std::vector<std::pair<Index, Index>> edges;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (graph.adjacency(i, j) != 0.0) edges.emplace_back(i, j);
  const long long have = static_cast<long long>(edges.size());
  const long long want = round_half_away(target_ratio * static_cast<double>(have));

  auto rng = RngStream::keyed(seed, "perturb-edges");
  if (want <= have) {
    rng.shuffle(edges);
    for (long long k = want; k < have; ++k) {
      const auto [i, j] = edges[static_cast<std::size_t>(k)];
      out.adjacency(i, j) = 0.0;
      out.adjacency(j, i) = 0.0;
    }
    out.provenance = Provenance{Provenance::Kind::EdgeDeleted, 1.0, target_ratio, 0.0};
    return out;
  }

  const long long insert = want - have;
  const long long non_edges = n * (n - 1) / 2 - have;
  if (insert > non_edges)
    throw std::invalid_argument("target_ratio: requested insertions exceed available non-edges");
  if (insert > non_edges / 2) {
    // Dense request: enumerate non-edges and take a random prefix.
    std::vector<std::pair<Index, Index>> pool;
    pool.reserve(static_cast<std::size_t>(non_edges));
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        if (graph.adjacency(i, j) == 0.0) pool.emplace_back(i, j);
    rng.shuffle(pool);
    for (long long k = 0; k < insert; ++k) {
      const auto [i, j] = pool[static_cast<std::size_t>(k)];
      out.adjacency(i, j) = 1.0;
      out.adjacency(j, i) = 1.0;
    }
  } else {
    long long placed = 0;
    while (placed < insert) {
      const Index i = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
      const Index j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
      if (i == j || out.adjacency(i, j) != 0.0) continue;
      out.adjacency(i, j) = 1.0;
      out.adjacency(j, i) = 1.0;
      ++placed;
    }
  }
  out.provenance = Provenance{Provenance::Kind::EdgeInserted, 1.0, target_ratio, 0.0};
  return out;
}

AttributedGraph perturb_features(const AttributedGraph& graph, double gamma,
                                 std::uint64_t seed) {
  if (gamma < 0.0) throw std::invalid_argument("gamma: must be >= 0");
  AttributedGraph out = graph;
  if (gamma == 0.0) return out;
  const Index n = graph.features.rows(), p = graph.features.cols();
  if (n < 2) throw std::invalid_argument("perturb_features: needs n >= 2");
  auto rng = RngStream::keyed(seed, "perturb-features");
  for (Index j = 0; j < p; ++j) {
    const double mean = graph.features.col(j).mean();
    const double var =
        (graph.features.col(j).array() - mean).square().sum() / static_cast<double>(n - 1);
    const double sd = std::sqrt(gamma * var);
    for (Index i = 0; i < n; ++i) out.features(i, j) += sd * rng.normal();
  }
  out.provenance = Provenance{Provenance::Kind::FeatureNoise, 1.0, 1.0, gamma};
  return out;
}

AttributedGraph make_graph(const ModelParams& params) {
  AttributedGraph g;
  g.labels = gen_labels(params);
  g.features = gen_gmm_features(g.labels, params);
  g.adjacency = gen_sbm_adjacency(g.labels, params);
  g.provenance = Provenance{};
  return g;
}

}  // namespace gclab
