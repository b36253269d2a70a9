#include "bstrank/genfun.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace bstrank {

namespace {

constexpr const char* kCacheHeader = "bstrank-plexpr v1";

// 1/(1-x) - B_{<=k}, the generating function of P(root rank > k) over n >= 0.
PLExpr survivor(const PLExpr& cdf) { return PLExpr::u(-1) - cdf; }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::string kind_name(GFKind kind) {
  switch (kind) {
    case GFKind::RootRank: return "root_rank";
    case GFKind::RootRankCdf: return "root_rank_cdf";
    case GFKind::LeafPairTail: return "leaf_pair_tail";
    case GFKind::ClosestLeaf: return "closest_leaf";
    case GFKind::GreedyTail: return "greedy_tail";
  }
  return "unknown";
}

const PLExpr* GeneratingFunctions::find(GFKind kind, int k) const {
  std::shared_lock lock(mutex_);
  auto it = memo_.find({kind, k});
  return it == memo_.end() ? nullptr : &it->second;
}

const PLExpr& GeneratingFunctions::store(GFKind kind, int k, PLExpr expr) {
  std::unique_lock lock(mutex_);
  auto [it, inserted] = memo_.try_emplace({kind, k}, std::move(expr));
  return it->second;
}

std::optional<PLExpr> GeneratingFunctions::load_from_disk(GFKind kind, int k) const {
  if (!options_.cache_dir) return std::nullopt;
  const auto path = *options_.cache_dir / (kind_name(kind) + "_" + std::to_string(k) + ".plx");
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string header;
  std::string body;
  if (!std::getline(in, header) || header != kCacheHeader || !std::getline(in, body)) return std::nullopt;
  try {
    return deserialize(body);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

void GeneratingFunctions::save_to_disk(GFKind kind, int k, const PLExpr& expr) const {
  if (!options_.cache_dir) return;
  std::error_code ec;
  std::filesystem::create_directories(*options_.cache_dir, ec);
  const auto name = kind_name(kind) + "_" + std::to_string(k) + ".plx";
  const auto path = *options_.cache_dir / name;
  const auto tmp = *options_.cache_dir / (name + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) return;
    out << kCacheHeader << "\n" << serialize(expr) << "\n";
    if (!out) return;
  }
  std::filesystem::rename(tmp, path, ec);
}

const PLExpr& GeneratingFunctions::get(GFKind kind, int k) {
  if (const PLExpr* hit = find(kind, k)) return *hit;
  if (auto disk = load_from_disk(kind, k)) return store(kind, k, std::move(*disk));
  PLExpr expr = compute(kind, k);
  save_to_disk(kind, k, expr);
  return store(kind, k, std::move(expr));
}

const PLExpr& GeneratingFunctions::root_rank(int k) {
  require(k >= 0, "root_rank: k must be >= 0");
  return get(GFKind::RootRank, k);
}

const PLExpr& GeneratingFunctions::root_rank_cdf(int k) {
  require(k >= -1, "root_rank_cdf: k must be >= -1");
  return get(GFKind::RootRankCdf, k);
}

const PLExpr& GeneratingFunctions::leaf_pair_tail(int k) {
  require(k >= -1, "leaf_pair_tail: k must be >= -1");
  return get(GFKind::LeafPairTail, k);
}

const PLExpr& GeneratingFunctions::closest_leaf(int k) {
  require(k >= 0, "closest_leaf: k must be >= 0");
  return get(GFKind::ClosestLeaf, k);
}

const PLExpr& GeneratingFunctions::greedy_tail(int k) {
  require(k >= -1, "greedy_tail: k must be >= -1");
  return get(GFKind::GreedyTail, k);
}

// Right-hand sides of the defining differential equations. Each returns the
// derivative (second derivative for the greedy family) of member k.

PLExpr GeneratingFunctions::root_rank_rhs(int k) {
  // Sum of B_j built from this family only, so the cdf family stays an
  // independent route.
  PLExpr below;
  for (int j = 0; j <= k - 2; ++j) below += root_rank(j);
  const PLExpr& prev = root_rank(k - 1);
  return Rational(2) * (prev * survivor(below)) - prev * prev;
}

PLExpr GeneratingFunctions::root_rank_cdf_rhs(int k) {
  // B_{<=k}' = (1-x)^-2 + 1 - (1/(1-x) - B_{<=k-1})^2
  const PLExpr s = survivor(root_rank_cdf(k - 1));
  return PLExpr::u(-2) + PLExpr::constant(Rational(1)) - s * s;
}

PLExpr GeneratingFunctions::leaf_pair_tail_rhs(int k) {
  return Rational(2) * (survivor(root_rank_cdf(k - 1)) * leaf_pair_tail(k - 1));
}

PLExpr GeneratingFunctions::closest_leaf_rhs(int k) {
  // 1 + B_{>=k-1} over n >= 0 is 1/(1-x) - B_{<=k-2}.
  return Rational(2) * (survivor(root_rank_cdf(k - 2)) * closest_leaf(k - 1));
}

PLExpr GeneratingFunctions::greedy_tail_rhs(int k) {
  const PLExpr& prev = greedy_tail(k - 1);
  return Rational(2) * differentiate(prev) + Rational(2) * (PLExpr::u(-2) * prev);
}

PLExpr GeneratingFunctions::compute(GFKind kind, int k) {
  const Rational zero(0);
  switch (kind) {
    case GFKind::RootRank:
      if (k == 0) return PLExpr::x();
      return antiderivative(root_rank_rhs(k), zero);
    case GFKind::RootRankCdf:
      if (k == -1) return PLExpr{};
      return antiderivative(root_rank_cdf_rhs(k), zero);
    case GFKind::LeafPairTail:
      if (k == -1) {
        // E[L_1] = 1 and E[L_n] = (n+1)/3 for n >= 2.
        return PLExpr::term(make_rational(-1, 3), 1, 0) + PLExpr::term(make_rational(1, 3), -2, 0);
      }
      return antiderivative(leaf_pair_tail_rhs(k), zero);
    case GFKind::ClosestLeaf:
      if (k == 0) return PLExpr::x();
      return antiderivative(closest_leaf_rhs(k), zero);
    case GFKind::GreedyTail:
      if (k == -1) return PLExpr::u(-1) - PLExpr::constant(Rational(1));
      return antiderivative(antiderivative(greedy_tail_rhs(k), zero), zero);
  }
  throw std::logic_error("unknown generating-function kind");
}

PLExpr GeneratingFunctions::ode_residual(GFKind kind, int k) {
  const PLExpr& f = get(kind, k);
  switch (kind) {
    case GFKind::RootRank:
      if (k == 0) return f - PLExpr::x();
      return differentiate(f) - root_rank_rhs(k);
    case GFKind::RootRankCdf:
      if (k == -1) return f;
      return differentiate(f) - root_rank_cdf_rhs(k);
    case GFKind::LeafPairTail:
      if (k == -1) return f - compute(kind, k);
      return differentiate(f) - leaf_pair_tail_rhs(k);
    case GFKind::ClosestLeaf:
      if (k == 0) return f - PLExpr::x();
      return differentiate(f) - closest_leaf_rhs(k);
    case GFKind::GreedyTail:
      if (k == -1) return f - compute(kind, k);
      return differentiate(differentiate(f)) - greedy_tail_rhs(k);
  }
  throw std::logic_error("unknown generating-function kind");
}

PLExpr GeneratingFunctions::leaf_pair_block(int k) {
  require(k >= 0, "leaf_pair_block: k must be >= 0");
  return leaf_pair_tail(k - 1) - leaf_pair_tail(k);
}

Rational GeneratingFunctions::partial_sum(int k) {
  require(k >= -1, "partial_sum: k must be >= -1");
  if (k == -1) return Rational(0);
  {
    std::shared_lock lock(mutex_);
    if (auto it = partial_sums_.find(k); it != partial_sums_.end()) return it->second;
  }
  // S_k = int_0^1 [1 + u^2 - (1 - u B_{<=k-1})^2] dx   (u = 1 - x)
  const PLExpr one = PLExpr::constant(Rational(1));
  const PLExpr inner = one - PLExpr::u(1) * root_rank_cdf(k - 1);
  const Rational s = integral01(one + PLExpr::u(2) - inner * inner);
  std::unique_lock lock(mutex_);
  return partial_sums_.try_emplace(k, s).first->second;
}

Rational GeneratingFunctions::rank_constant(int k) {
  require(k >= 0, "rank_constant: k must be >= 0");
  {
    std::shared_lock lock(mutex_);
    if (auto it = constants_.find(k); it != constants_.end()) return it->second;
  }
  const Rational c = partial_sum(k) - partial_sum(k - 1);
  if (options_.verify_routes) {
    const Rational direct = 2 * integral01(PLExpr::u(1) * root_rank(k));
    if (direct != c) {
      throw InternalInconsistency("rank_constant(" + std::to_string(k) + "): partial-sum route " +
                                  to_string(c) + " != direct route " + to_string(direct));
    }
  }
  std::unique_lock lock(mutex_);
  return constants_.try_emplace(k, c).first->second;
}

Rational GeneratingFunctions::leaf_pair_constant(int k) {
  return 2 * integral01(PLExpr::u(1) * leaf_pair_block(k));
}

Rational GeneratingFunctions::closest_leaf_constant(int k) {
  return 2 * integral01(PLExpr::u(1) * closest_leaf(k));
}

std::pair<Rational, Rational> GeneratingFunctions::per_vertex_ratios(int k) {
  const Rational c = rank_constant(k);
  return {leaf_pair_constant(k) / c, closest_leaf_constant(k) / c};
}

Rational GeneratingFunctions::tail_moment_integral(int k, int t) {
  require(t >= 1, "tail_moment: t must be >= 1");
  return integral01(PLExpr::u(t) * greedy_tail(k));
}

Rational GeneratingFunctions::tail_moment(int k, int t) {
  require(k >= -1, "tail_moment: k must be >= -1");
  require(t >= 1, "tail_moment: t must be >= 1");
  {
    std::shared_lock lock(mutex_);
    if (auto it = moments_.find({k, t}); it != moments_.end()) return it->second;
  }
  Rational value;
  if (k == -1) {
    value = make_rational(1, t * (t + 1));
  } else {
    // I_{k,t} = 2/((t+2)(t+1)) [I_{k-1,t} + (t+2) I_{k-1,t+1}]
    value = make_rational(2, (t + 2) * (t + 1)) * (tail_moment(k - 1, t) + (t + 2) * tail_moment(k - 1, t + 1));
  }
  if (options_.verify_routes && k <= options_.tail_route_check_kmax) {
    const Rational direct = tail_moment_integral(k, t);
    if (direct != value) {
      throw InternalInconsistency("tail_moment(" + std::to_string(k) + "," + std::to_string(t) +
                                  "): recurrence " + to_string(value) + " != integral " + to_string(direct));
    }
  }
  std::unique_lock lock(mutex_);
  return moments_.try_emplace({k, t}, value).first->second;
}

ConstantsTable GeneratingFunctions::constants(int kmax) {
  require(kmax >= 0, "constants: kmax must be >= 0");
  ConstantsTable table;
  for (int k = 0; k <= kmax; ++k) {
    ConstantsRow row;
    row.k = k;
    row.c = rank_constant(k);
    row.f = leaf_pair_constant(k);
    row.g = closest_leaf_constant(k);
    row.partial_sum = partial_sum(k);
    row.f_ratio = row.f / row.c;
    row.g_ratio = row.g / row.c;
    table.rows.push_back(std::move(row));
  }
  return table;
}

TailTable GeneratingFunctions::tail_report(int kmax, double alpha0, int exact_kmax) {
  require(kmax >= 0, "tail_report: kmax must be >= 0");
  constexpr int kMoments = 4;
  TailTable table;
  table.alpha0 = alpha0;
  for (int k = 0; k <= kmax; ++k) {
    TailRow row;
    row.k = k;
    for (int t = 1; t <= kMoments; ++t) row.moments.push_back(tail_moment(k, t));
    row.upper = 2 * row.moments[0];
    row.theorem_bound = make_rational(6 * k + 7, 3) / rational_pow(Rational(3), static_cast<unsigned>(k));
    row.lower_reference = (2.0 / 3.0) * std::exp(-static_cast<double>(k) / alpha0);
    if (k <= exact_kmax) {
      row.tail = 1 - partial_sum(k);
      if (k > 0) row.tail_prev = 1 - partial_sum(k - 1);
      if (*row.tail > row.upper || *row.tail > row.theorem_bound) {
        throw InternalInconsistency("tail_report: exact tail at k=" + std::to_string(k) +
                                    " exceeds a proven upper bound");
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace bstrank
