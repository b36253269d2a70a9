#include "bstrank/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "bstrank/errors.hpp"

namespace bstrank::mc {

DecreasingTree build_tree(std::span<const std::int32_t> perm) {
  const auto n = static_cast<std::int32_t>(perm.size());
  if (n < 1) throw std::invalid_argument("build_tree: empty permutation");
  std::vector<bool> seen(n + 1, false);
  for (auto value : perm) {
    if (value < 1 || value > n || seen[value]) throw std::invalid_argument("build_tree: not a permutation of 1..n");
    seen[value] = true;
  }

  DecreasingTree t;
  t.n = n;
  t.left.assign(n, kNone);
  t.right.assign(n, kNone);
  t.label.assign(perm.begin(), perm.end());

  // The stack holds the right spine of the tree built so far; labels decrease
  // from bottom to top.
  std::vector<std::int32_t> stack;
  stack.reserve(64);
  for (std::int32_t i = 0; i < n; ++i) {
    std::int32_t last = kNone;
    while (!stack.empty() && perm[stack.back()] < perm[i]) {
      last = stack.back();
      stack.pop_back();
    }
    t.left[i] = last;
    if (!stack.empty()) t.right[stack.back()] = i;
    stack.push_back(i);
  }
  t.root = stack.front();
  return t;
}

CensusReport rank_census(const DecreasingTree& t) {
  const std::int32_t n = t.n;
  CensusReport r;
  r.rank.assign(n, 0);
  r.subtree_size.assign(n, 1);
  std::vector<std::int64_t> leaves_below(n, 0);
  std::vector<std::int64_t> closest(n, 0);

  std::vector<std::int32_t> by_label(n);
  for (std::int32_t v = 0; v < n; ++v) by_label[t.label[v] - 1] = v;

  for (std::int32_t v : by_label) {
    const std::int32_t kids[2] = {t.left[v], t.right[v]};
    std::int32_t best = std::numeric_limits<std::int32_t>::max();
    for (auto c : kids) {
      if (c != kNone) best = std::min(best, r.rank[c]);
    }
    if (best == std::numeric_limits<std::int32_t>::max()) {
      r.rank[v] = 0;
      leaves_below[v] = 1;
      closest[v] = 1;
      continue;
    }
    r.rank[v] = best + 1;
    for (auto c : kids) {
      if (c == kNone) continue;
      r.subtree_size[v] += r.subtree_size[c];
      leaves_below[v] += leaves_below[c];
      if (r.rank[c] == best) closest[v] += closest[c];
    }
  }

  const std::int32_t max_rank = *std::max_element(r.rank.begin(), r.rank.end());
  r.vertices.assign(max_rank + 1, 0);
  r.leaf_pairs.assign(max_rank + 1, 0);
  r.closest_pairs.assign(max_rank + 1, 0);
  for (std::int32_t v = 0; v < n; ++v) {
    const auto k = r.rank[v];
    ++r.vertices[k];
    r.leaf_pairs[k] += leaves_below[v];
    r.closest_pairs[k] += closest[v];
  }
  r.leaves = r.vertices[0];
  r.shortest_path = r.rank[t.root];
  return r;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::int32_t> random_permutation(std::int32_t n, Rng& rng) {
  std::vector<std::int32_t> p(n);
  for (std::int32_t i = 0; i < n; ++i) p[i] = i + 1;
  for (std::int32_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(p[i], p[j]);
  }
  return p;
}

std::int32_t greedy_path_length(const DecreasingTree& t, std::span<const std::int32_t> subtree_size, Rng& rng) {
  std::int32_t v = t.root;
  std::int32_t length = 0;
  while (!t.is_leaf(v)) {
    const auto l = t.left[v];
    const auto r = t.right[v];
    if (l == kNone) {
      v = r;
    } else if (r == kNone) {
      v = l;
    } else {
      const auto sl = static_cast<std::uint64_t>(subtree_size[l]);
      const auto sr = static_cast<std::uint64_t>(subtree_size[r]);
      // Delete the left subtree with probability sl / (sl + sr).
      v = rng.below(sl + sr) < sl ? r : l;
    }
    ++length;
  }
  return length;
}

std::int32_t greedy_path_length(const DecreasingTree& t, Rng& rng) {
  const auto census = rank_census(t);
  return greedy_path_length(t, census.subtree_size, rng);
}

std::string indexed(const std::string& base, int k) { return base + "[" + std::to_string(k) + "]"; }

std::string indexed(const std::string& base, int k1, int k2) {
  return base + "[" + std::to_string(k1) + "," + std::to_string(k2) + "]";
}

const Statistic* EstimateReport::find(const std::string& name) const {
  for (const auto& s : stats) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const Statistic& EstimateReport::get(const std::string& name) const {
  if (const auto* s = find(name)) return *s;
  throw std::out_of_range("no statistic named " + name);
}

namespace {

// Fixed slot layout of one trial's observations; NaN marks "no observation".
struct Layout {
  int kmax = 0;
  bool pairs = false;
  std::vector<std::string> names;
  int vertex_fraction = 0, leaf_fraction = 0, root_rank = 0, greedy_tail = 0;
  int leaf_ratio = 0, closest_ratio = 0, pair_first = 0, pair_second = 0, pair_joint = 0;

  Layout(int kmax_, bool pairs_) : kmax(kmax_), pairs(pairs_) {
    auto block = [&](const std::string& base) {
      const int start = static_cast<int>(names.size());
      for (int k = 0; k <= kmax; ++k) names.push_back(indexed(base, k));
      return start;
    };
    vertex_fraction = block("vertex_fraction");
    leaf_fraction = static_cast<int>(names.size());
    names.push_back("leaf_fraction");
    root_rank = block("root_rank");
    greedy_tail = block("greedy_tail");
    leaf_ratio = block("leaf_ratio");
    closest_ratio = block("closest_ratio");
    if (pairs) {
      pair_first = block("pair_first");
      pair_second = block("pair_second");
      pair_joint = static_cast<int>(names.size());
      for (int a = 0; a <= kmax; ++a) {
        for (int b = 0; b <= kmax; ++b) names.push_back(indexed("pair_joint", a, b));
      }
    }
  }
  std::size_t width() const { return names.size(); }
};

void run_trial(const EstimateConfig& cfg, const Layout& layout, std::int64_t trial, double* out) {
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(trial)));
  const auto perm = random_permutation(cfg.n, rng);
  const auto tree = build_tree(perm);
  const auto census = rank_census(tree);
  const auto greedy = greedy_path_length(tree, census.subtree_size, rng);
  if (greedy < census.shortest_path) {
    throw InternalInconsistency("greedy path shorter than the shortest root-to-leaf path");
  }

  const double n = cfg.n;
  const auto count_at = [](const std::vector<std::int64_t>& v, int k) -> std::int64_t {
    return k < static_cast<int>(v.size()) ? v[k] : 0;
  };
  for (int k = 0; k <= layout.kmax; ++k) {
    const auto vk = count_at(census.vertices, k);
    out[layout.vertex_fraction + k] = static_cast<double>(vk) / n;
    out[layout.root_rank + k] = census.shortest_path == k ? 1.0 : 0.0;
    out[layout.greedy_tail + k] = greedy > k ? 1.0 : 0.0;
    if (vk > 0) {
      out[layout.leaf_ratio + k] = static_cast<double>(count_at(census.leaf_pairs, k)) / static_cast<double>(vk);
      out[layout.closest_ratio + k] =
          static_cast<double>(count_at(census.closest_pairs, k)) / static_cast<double>(vk);
    }
  }
  out[layout.leaf_fraction] = static_cast<double>(census.leaves) / n;

  if (layout.pairs) {
    const auto i = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(cfg.n)));
    auto j = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(cfg.n - 1)));
    if (j >= i) ++j;
    const int ri = census.rank[i];
    const int rj = census.rank[j];
    for (int k = 0; k <= layout.kmax; ++k) {
      out[layout.pair_first + k] = ri == k ? 1.0 : 0.0;
      out[layout.pair_second + k] = rj == k ? 1.0 : 0.0;
    }
    for (int a = 0; a <= layout.kmax; ++a) {
      for (int b = 0; b <= layout.kmax; ++b) {
        out[layout.pair_joint + a * (layout.kmax + 1) + b] = (ri == a && rj == b) ? 1.0 : 0.0;
      }
    }
  }
}

}  // namespace

EstimateReport estimate(const EstimateConfig& config) {
  if (config.n < 1) throw std::invalid_argument("estimate: n must be >= 1");
  if (config.trials < 1) throw std::invalid_argument("estimate: trials must be >= 1");
  if (config.kmax < 0) throw std::invalid_argument("estimate: kmax must be >= 0");

  const Layout layout(config.kmax, config.n >= 2);
  const std::size_t width = layout.width();
  std::vector<double> records(static_cast<std::size_t>(config.trials) * width,
                              std::numeric_limits<double>::quiet_NaN());

  unsigned threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::int64_t>(threads, config.trials));

  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned w) {
    try {
      for (std::int64_t trial = w; trial < config.trials; trial += threads) {
        run_trial(config, layout, trial, records.data() + static_cast<std::size_t>(trial) * width);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  EstimateReport report;
  report.config = config;
  for (std::size_t s = 0; s < width; ++s) {
    double sum = 0.0;
    std::int64_t count = 0;
    for (std::int64_t trial = 0; trial < config.trials; ++trial) {
      const double x = records[static_cast<std::size_t>(trial) * width + s];
      if (std::isnan(x)) continue;
      sum += x;
      ++count;
    }
    Statistic stat;
    stat.name = layout.names[s];
    stat.count = count;
    if (count > 0) {
      stat.mean = sum / static_cast<double>(count);
      double ss = 0.0;
      for (std::int64_t trial = 0; trial < config.trials; ++trial) {
        const double x = records[static_cast<std::size_t>(trial) * width + s];
        if (!std::isnan(x)) ss += (x - stat.mean) * (x - stat.mean);
      }
      if (count > 1) stat.std_error = std::sqrt(ss / static_cast<double>(count - 1) / static_cast<double>(count));
    }
    report.stats.push_back(std::move(stat));
  }
  return report;
}

}  // namespace bstrank::mc
