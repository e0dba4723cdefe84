#pragma once

// Permutation sets {pi_x} and the sweep engine shared by every quantity of the
// form max_pi sum_a term(pi_0(a), ..., pi_{n-1}(a)).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcomp/core/random.hpp"
#include "qcomp/parallel.hpp"
#include "qcomp/settings.hpp"

namespace qcomp {

/// One permutation of {0, ..., w-1} per input x; map[x][a] = pi_x(a).
class PermutationSet {
 public:
  PermutationSet() = default;
  explicit PermutationSet(std::vector<std::vector<std::size_t>> map) : map_(std::move(map)) {
    require(!map_.empty(), ErrorKind::invalid_input, "permutation set needs at least one input");
    for (std::size_t x = 0; x < map_.size(); ++x) {
      require(map_[x].size() == map_.front().size(), ErrorKind::invalid_input, "permutations differ in length");
      std::vector<std::size_t> sorted = map_[x];
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t a = 0; a < sorted.size(); ++a)
        require(sorted[a] == a, ErrorKind::invalid_input, "entry " + std::to_string(x) + " is not a permutation");
    }
  }

  static PermutationSet identity(std::size_t n, std::size_t w) {
    std::vector<std::size_t> id(w);
    std::iota(id.begin(), id.end(), std::size_t{0});
    return PermutationSet(std::vector<std::vector<std::size_t>>(n, id));
  }

  std::size_t inputs() const { return map_.size(); }
  std::size_t outcomes() const { return map_.empty() ? 0 : map_.front().size(); }
  std::size_t operator()(std::size_t x, std::size_t a) const { return map_.at(x).at(a); }
  const std::vector<std::vector<std::size_t>>& map() const { return map_; }

  PermutationSet inverse() const {
    auto inv = map_;
    for (std::size_t x = 0; x < map_.size(); ++x)
      for (std::size_t a = 0; a < map_[x].size(); ++a) inv[x][map_[x][a]] = a;
    return PermutationSet(std::move(inv));
  }

  /// (pi_0(a), ..., pi_{n-1}(a)).
  std::vector<std::size_t> tuple(std::size_t a) const {
    std::vector<std::size_t> t(map_.size());
    for (std::size_t x = 0; x < map_.size(); ++x) t[x] = map_[x].at(a);
    return t;
  }

  bool is_canonical() const {
    for (std::size_t a = 0; a < outcomes(); ++a)
      if (map_.front()[a] != a) return false;
    return true;
  }

  /// Replaces every pi_x by pi_x o pi_0^{-1}, which makes pi_0 the identity.
  PermutationSet canonical() const {
    const auto inv0 = PermutationSet({map_.front()}).inverse().map_.front();
    auto out = map_;
    for (std::size_t x = 0; x < map_.size(); ++x)
      for (std::size_t a = 0; a < outcomes(); ++a) out[x][a] = map_[x][inv0[a]];
    return PermutationSet(std::move(out));
  }

  /// One-line array notation, e.g. [[0,1,2],[2,0,1]].
  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t x = 0; x < map_.size(); ++x) {
      os << (x ? ",[" : "[");
      for (std::size_t a = 0; a < map_[x].size(); ++a) os << (a ? "," : "") << map_[x][a];
      os << ']';
    }
    os << ']';
    return os.str();
  }

  friend bool operator==(const PermutationSet&, const PermutationSet&) = default;
  friend auto operator<=>(const PermutationSet& l, const PermutationSet& r) { return l.map_ <=> r.map_; }

 private:
  std::vector<std::vector<std::size_t>> map_;
};

/// Outcome tuples (a_0, ..., a_{n-1}) encoded in base w with a_0 most significant,
/// so codes order tuples lexicographically.
struct TupleCodec {
  std::size_t n = 0;
  std::size_t w = 0;

  std::size_t count() const {
    std::size_t c = 1;
    for (std::size_t x = 0; x < n; ++x) c *= w;
    return c;
  }
  std::size_t encode(const std::vector<std::size_t>& t) const {
    std::size_t c = 0;
    for (std::size_t x = 0; x < n; ++x) c = c * w + t[x];
    return c;
  }
  std::vector<std::size_t> decode(std::size_t code) const {
    std::vector<std::size_t> t(n);
    for (std::size_t x = n; x-- > 0;) {
      t[x] = code % w;
      code /= w;
    }
    return t;
  }
};

/// (w!)^k, or nullopt when it does not fit in 64 bits.
inline std::optional<std::uint64_t> permutation_set_count(std::size_t w, std::size_t k) {
  std::uint64_t fact = 1;
  for (std::size_t i = 2; i <= w; ++i) {
    if (fact > UINT64_MAX / i) return std::nullopt;
    fact *= i;
  }
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (fact != 0 && total > UINT64_MAX / fact) return std::nullopt;
    total *= fact;
  }
  return total;
}

struct SweepOptions {
  /// Fix pi_0 to the identity. Without it every input is permuted (for testing the
  /// relabelling invariance).
  bool canonical = true;
  /// Report the inverse of the swept set. Tasks whose terms are naturally indexed by
  /// pi^{-1} sweep that and still report pi.
  bool report_inverse = false;
};

struct SweepResult {
  double value = 0.0;
  /// Maximiser as reported (see SweepOptions::report_inverse).
  PermutationSet maximizer;
  /// Term of the maximiser for each a in the swept set's own index order.
  std::vector<double> per_term;
  std::vector<std::vector<std::size_t>> tuples;
  /// Over budget: the value is a maximum over a random sample only.
  bool lower_bound_only = false;
  std::size_t swept = 0;
  /// Codes of every tuple that entered some swept sum, ascending.
  std::vector<std::size_t> tuple_codes;
};

namespace detail {

inline std::vector<std::size_t> random_permutation(std::size_t w, Rng& rng) {
  std::vector<std::size_t> p(w);
  std::iota(p.begin(), p.end(), std::size_t{0});
  for (std::size_t i = w; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(p[i - 1], p[std::min(j, i - 1)]);
  }
  return p;
}

/// Advances to the lexicographically next set (last input varies fastest, with
/// the free inputs starting at `first`). Returns false after the last one.
inline bool next_permutation_set(std::vector<std::vector<std::size_t>>& map, std::size_t first) {
  for (std::size_t x = map.size(); x-- > first;) {
    if (std::next_permutation(map[x].begin(), map[x].end())) return true;
  }
  return false;
}

}  // namespace detail

/// max over permutation sets of sum_a term(tuple(a)). Every distinct tuple is
/// evaluated once (in parallel) and cached; sums and the max are then reduced
/// serially in sweep order, keeping the first maximiser in that order unless a
/// later one is strictly larger (after mapping through report_inverse, ties go
/// to the lexicographically smallest reported set). Results therefore do not
/// depend on the thread count.
inline SweepResult sweep_permutations(std::size_t n, std::size_t w,
                                      const std::function<double(const std::vector<std::size_t>&)>& term,
                                      const Settings& settings, SweepOptions options = {}) {
  require(n >= 1 && w >= 1, ErrorKind::invalid_input, "sweep needs n >= 1 and w >= 1");
  const TupleCodec codec{n, w};
  const std::size_t first = options.canonical ? 1 : 0;
  const auto total = permutation_set_count(w, n - first);

  SweepResult out;
  std::vector<std::vector<std::vector<std::size_t>>> sampled;
  const bool exhaustive = total && *total <= settings.max_perm_budget;
  if (!exhaustive) {
    require(settings.sample_over_budget, ErrorKind::budget_exceeded,
            "permutation sweep needs " + (total ? std::to_string(*total) : std::string("more than 2^64")) +
                " sets, above the budget of " + std::to_string(settings.max_perm_budget) +
                "; raise it with --max-perms");
    out.lower_bound_only = true;
    Rng rng(settings.sampling_seed);
    for (std::size_t s = 0; s < settings.sample_count; ++s) {
      std::vector<std::vector<std::size_t>> map;
      for (std::size_t x = 0; x < n; ++x) {
        if (x < first) {
          map.emplace_back(w);
          std::iota(map.back().begin(), map.back().end(), std::size_t{0});
        } else {
          map.push_back(detail::random_permutation(w, rng));
        }
      }
      sampled.push_back(std::move(map));
    }
  }

  // Tuples that any swept set touches.
  std::vector<std::size_t> codes;
  if (exhaustive) {
    codes.resize(codec.count());
    std::iota(codes.begin(), codes.end(), std::size_t{0});
  } else {
    for (const auto& map : sampled)
      for (std::size_t a = 0; a < w; ++a) codes.push_back(codec.encode(PermutationSet(map).tuple(a)));
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  }
  std::vector<double> cache(codes.size());
  parallel_for(codes.size(), settings.threads, [&](std::size_t i) { cache[i] = term(codec.decode(codes[i])); });
  auto lookup = [&](std::size_t code) {
    return cache[static_cast<std::size_t>(std::lower_bound(codes.begin(), codes.end(), code) - codes.begin())];
  };

  std::optional<PermutationSet> best_reported;
  std::vector<std::vector<std::size_t>> best_map;
  double best = -std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<std::vector<std::size_t>>& map) {
    ++out.swept;
    double v = 0.0;
    for (std::size_t a = 0; a < w; ++a) {
      std::size_t c = 0;
      for (std::size_t x = 0; x < n; ++x) c = c * w + map[x][a];
      v += lookup(c);
    }
    if (v < best) return;
    if (v == best) {
      PermutationSet rep(map);
      if (options.report_inverse) rep = rep.inverse();
      if (!(rep < *best_reported)) return;
    }
    best = v;
    best_map = map;
    best_reported = options.report_inverse ? PermutationSet(map).inverse() : PermutationSet(map);
  };

  if (exhaustive) {
    std::vector<std::vector<std::size_t>> map(n, std::vector<std::size_t>(w));
    for (auto& p : map) std::iota(p.begin(), p.end(), std::size_t{0});
    do consider(map);
    while (detail::next_permutation_set(map, first));
  } else {
    for (const auto& map : sampled) consider(map);
  }

  out.value = best;
  out.maximizer = *best_reported;
  const PermutationSet swept(best_map);
  for (std::size_t a = 0; a < w; ++a) {
    out.tuples.push_back(swept.tuple(a));
    out.per_term.push_back(lookup(codec.encode(out.tuples.back())));
  }
  out.tuple_codes = std::move(codes);
  return out;
}

}  // namespace qcomp
