#pragma once

// Exhaustive and sampled searches over square-free words: per-length census,
// shortest extremal words for a given alphabet size, and budgeted probes for
// long extremal words.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "sqfree/nonchalant.hpp"
#include "sqfree/word.hpp"

namespace sqfree {

class search_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Results of one subtree of the search.
struct SubtreeResult {
  std::vector<std::uint64_t> canonical_counts;  // index = length
  std::vector<std::uint64_t> counts;            // symmetry-expanded
  std::vector<Word> extremal;
  std::uint64_t nodes = 0;
  std::uint64_t extension_checks = 0;

  void merge(const SubtreeResult& other) {
    if (counts.size() < other.counts.size()) {
      counts.resize(other.counts.size(), 0);
      canonical_counts.resize(other.canonical_counts.size(), 0);
    }
    for (std::size_t i = 0; i < other.counts.size(); ++i) {
      counts[i] += other.counts[i];
      canonical_counts[i] += other.canonical_counts[i];
    }
    extremal.insert(extremal.end(), other.extremal.begin(), other.extremal.end());
    nodes += other.nodes;
    extension_checks += other.extension_checks;
  }

  friend bool operator==(const SubtreeResult&, const SubtreeResult&) = default;
};

struct SearchOptions {
  std::size_t threads = 1;
  // Subtrees rooted at this depth are the units of parallel work.
  std::size_t split_depth = 8;
  // When false, every word is enumerated instead of one per permutation
  // class of the alphabet.
  bool symmetry_reduction = true;
  bool test_extremality = true;
  // Subtrees already finished in an earlier run, keyed by root prefix.
  const std::map<std::string, SubtreeResult>* resume = nullptr;
  // Called (serialised) after each subtree completes.
  std::function<void(const std::string&, const SubtreeResult&)> on_subtree;
};

struct SearchReport {
  std::size_t k = 0;
  std::size_t max_length = 0;
  bool symmetry_reduction = true;
  // Index i holds the number of square-free words of length i + 1.
  std::vector<std::uint64_t> canonical_counts;
  std::vector<std::uint64_t> counts;
  // Sorted by (length, word).
  std::vector<Word> extremal;
  std::uint64_t nodes = 0;
  std::uint64_t extension_checks = 0;
  double wall_seconds = 0;  // not part of equality

  std::optional<std::size_t> shortest_extremal_length() const {
    if (extremal.empty()) return std::nullopt;
    return extremal.front().size();
  }

  std::vector<Word> shortest_witnesses() const {
    std::vector<Word> out;
    for (const auto& w : extremal)
      if (w.size() == extremal.front().size()) out.push_back(w);
    return out;
  }

  friend bool operator==(const SearchReport& a, const SearchReport& b) {
    return a.k == b.k && a.max_length == b.max_length &&
           a.symmetry_reduction == b.symmetry_reduction &&
           a.canonical_counts == b.canonical_counts && a.counts == b.counts &&
           a.extremal == b.extremal && a.nodes == b.nodes &&
           a.extension_checks == b.extension_checks;
  }
};

namespace detail {

inline std::uint64_t falling_factorial(std::size_t k, std::size_t m) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < m; ++i) r *= k - i;
  return r;
}

class SearchKernel {
 public:
  SearchKernel(std::size_t k, std::size_t max_length, const SearchOptions& options)
      : k_(k), max_length_(max_length), options_(options) {}

  // Visits the node `w` (square-free, `used` distinct letters) and, when
  // depth allows, its subtree. Nodes of length `stop_at` are handed to
  // `frontier` instead of being visited.
  void visit(std::vector<letter>& w, std::size_t used, SubtreeResult& out,
             std::size_t stop_at, std::vector<Word>* frontier) {
    if (w.size() == stop_at && frontier) {
      frontier->push_back(Word(w));
      return;
    }
    const std::size_t len = w.size();
    ++out.nodes;
    ++out.canonical_counts[len];
    out.counts[len] += options_.symmetry_reduction ? falling_factorial(k_, used) : 1;
    if (options_.test_extremality) {
      Word word(w);
      if (!has_square_free_extension(word, k_, &out.extension_checks)) {
        out.extremal.push_back(std::move(word));
        return;
      }
    }
    if (len == max_length_) return;
    std::size_t limit = options_.symmetry_reduction ? std::min(k_, used + 1) : k_;
    for (std::size_t x = 0; x < limit; ++x) {
      if (!square_free_after_append(w, static_cast<letter>(x))) continue;
      w.push_back(static_cast<letter>(x));
      visit(w, std::max(used, x + 1), out, stop_at, frontier);
      w.pop_back();
    }
  }

  SubtreeResult empty_result() const {
    SubtreeResult r;
    r.canonical_counts.assign(max_length_ + 1, 0);
    r.counts.assign(max_length_ + 1, 0);
    return r;
  }

 private:
  std::size_t k_;
  std::size_t max_length_;
  const SearchOptions& options_;
};

}  // namespace detail

// Depth-first enumeration of all square-free words of length 1..max_length
// (one per alphabet-permutation class when symmetry reduction is on),
// testing each for extremality. Deterministic for any thread count.
inline SearchReport exhaustive_search(std::size_t k, std::size_t max_length,
                                      const SearchOptions& options = {}) {
  if (k == 0 || k > 26) throw search_error("alphabet size must be in 1..26");
  if (max_length == 0) throw search_error("maximum length must be positive");
  auto started = std::chrono::steady_clock::now();
  detail::SearchKernel kernel(k, max_length, options);

  // Shallow part, collecting the roots of the parallel subtrees.
  const std::size_t split = std::clamp<std::size_t>(options.split_depth, 1, max_length);
  SubtreeResult total = kernel.empty_result();
  std::vector<Word> roots;
  std::vector<letter> w;
  std::size_t first_letters = options.symmetry_reduction ? 1 : k;
  for (std::size_t x = 0; x < first_letters; ++x) {
    w.assign(1, static_cast<letter>(x));
    kernel.visit(w, x + 1, total, split, &roots);
  }

  std::vector<std::optional<SubtreeResult>> results(roots.size());
  std::atomic<std::size_t> next{0};
  std::mutex callback_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < roots.size(); i = next++) {
      const std::string key = roots[i].to_string();
      if (options.resume) {
        if (auto it = options.resume->find(key); it != options.resume->end()) {
          results[i] = it->second;
          continue;
        }
      }
      SubtreeResult r = kernel.empty_result();
      std::vector<letter> root = roots[i].letters();
      kernel.visit(root, roots[i].letters_used(), r, max_length + 1, nullptr);
      if (options.on_subtree) {
        std::lock_guard lock(callback_mutex);
        options.on_subtree(key, r);
      }
      results[i] = std::move(r);
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, options.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& r : results) total.merge(*r);

  SearchReport report;
  report.k = k;
  report.max_length = max_length;
  report.symmetry_reduction = options.symmetry_reduction;
  report.canonical_counts.assign(total.canonical_counts.begin() + 1, total.canonical_counts.end());
  report.counts.assign(total.counts.begin() + 1, total.counts.end());
  report.extremal = std::move(total.extremal);
  std::ranges::sort(report.extremal, [](const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  report.nodes = total.nodes;
  report.extension_checks = total.extension_checks;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

// Number of square-free words over k letters of each length 1..n.
inline std::vector<std::uint64_t> census_square_free(std::size_t k, std::size_t n,
                                                     std::size_t threads = 1) {
  SearchOptions options;
  options.test_extremality = false;
  options.threads = threads;
  return exhaustive_search(k, n, options).counts;
}

struct ShortestExtremal {
  std::size_t length = 0;
  std::vector<Word> witnesses;  // canonical forms
};

inline std::optional<ShortestExtremal> shortest_extremal(std::size_t k, std::size_t max_length,
                                                         std::size_t threads = 1) {
  SearchOptions options;
  options.threads = threads;
  auto report = exhaustive_search(k, max_length, options);
  auto length = report.shortest_extremal_length();
  if (!length) return std::nullopt;
  return ShortestExtremal{*length, report.shortest_witnesses()};
}

// Relabels letters in order of first occurrence.
inline Word canonical_form(const Word& w) {
  std::vector<letter> map(26, 0xff);
  letter next = 0;
  std::vector<letter> out;
  out.reserve(w.size());
  for (letter x : w) {
    if (map[x] == 0xff) map[x] = next++;
    out.push_back(map[x]);
  }
  return Word(std::move(out));
}

// ---------------------------------------------------------------------------
// Budgeted probes

enum class ProbeStrategy { random_walk, nonchalant_seeded, dfs_sampling };

inline std::string_view to_string(ProbeStrategy s) {
  switch (s) {
    case ProbeStrategy::random_walk: return "random-walk";
    case ProbeStrategy::nonchalant_seeded: return "nonchalant-seeded";
    case ProbeStrategy::dfs_sampling: return "dfs-sampling";
  }
  return "?";
}

inline ProbeStrategy parse_probe_strategy(std::string_view name) {
  for (auto s : {ProbeStrategy::random_walk, ProbeStrategy::nonchalant_seeded,
                 ProbeStrategy::dfs_sampling})
    if (to_string(s) == name) return s;
  throw search_error("unknown probe strategy '" + std::string(name) + "'");
}

struct ProbeReport {
  std::size_t k = 0;
  std::size_t max_length = 0;
  ProbeStrategy strategy = ProbeStrategy::random_walk;
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  std::uint64_t extension_checks = 0;
  std::uint64_t samples = 0;
  std::uint64_t words_tested = 0;
  std::size_t longest_tested = 0;
  // dfs-sampling visited the whole tree within budget.
  bool exhaustive = false;
  std::vector<Word> extremal;  // each re-verified by classify

  friend bool operator==(const ProbeReport&, const ProbeReport&) = default;
};

namespace detail {

class Prober {
 public:
  Prober(std::size_t k, std::size_t max_length, std::uint64_t budget, std::uint64_t seed,
         ProbeReport& report)
      : k_(k), max_length_(max_length), budget_(budget), rng_(seed), report_(report) {}

  bool exhausted() const { return report_.extension_checks >= budget_; }

  // Extremality test within the remaining budget: nullopt when the budget
  // runs out before a decision.
  std::optional<bool> extremal(const Word& w) {
    const std::size_t n = w.size();
    const std::size_t mid = n / 2;
    for (std::size_t d = 0; d <= mid || mid + d <= n; ++d) {
      for (int side = 0; side < 2; ++side) {
        std::size_t p;
        if (side == 0) {
          if (d > mid) continue;
          p = mid - d;
        } else {
          if (d == 0 || mid + d > n) continue;
          p = mid + d;
        }
        for (std::size_t x = 0; x < k_; ++x) {
          if (exhausted()) return std::nullopt;
          ++report_.extension_checks;
          if (square_free_after_insert(w.letters(), p, static_cast<letter>(x))) return false;
        }
      }
    }
    return true;
  }

  // Tests `w` and records a verified hit. nullopt when the budget ran out.
  std::optional<bool> test(const Word& w) {
    auto result = extremal(w);
    if (!result) return std::nullopt;
    ++report_.words_tested;
    report_.longest_tested = std::max(report_.longest_tested, w.size());
    if (*result) {
      if (classify(w, Alphabet::canonical(k_)).status != ExtensionStatus::extremal)
        throw std::logic_error("probe hit failed re-verification");
      report_.extremal.push_back(w);
    }
    return result;
  }

  // Appends a uniformly random letter keeping w square-free; false if none.
  bool grow(std::vector<letter>& w) {
    std::vector<letter> order(k_);
    std::iota(order.begin(), order.end(), letter{0});
    std::ranges::shuffle(order, rng_);
    for (letter x : order) {
      if (exhausted()) return false;
      ++report_.extension_checks;
      if (square_free_after_append(w, x)) {
        w.push_back(x);
        return true;
      }
    }
    return false;
  }

  // Grows `w` at random up to max_length, testing every intermediate word.
  void random_extension(std::vector<letter> w) {
    ++report_.samples;
    while (true) {
      auto result = test(Word(w));
      if (!result || *result) return;
      if (w.size() >= max_length_ || !grow(w)) return;
    }
  }

  void run_random_walk() {
    while (!exhausted()) random_extension({0});
  }

  // Random continuations of nonchalant words.
  void run_nonchalant_seeded() {
    auto run = run_nonchalant(k_, max_length_);
    std::vector<Word> seeds = run.words();
    std::uniform_int_distribution<std::size_t> pick(0, seeds.size() - 1);
    while (!exhausted()) random_extension(seeds[pick(rng_)].letters());
  }

  // Canonical depth-first search with shuffled child order.
  void run_dfs_sampling() {
    struct Frame {
      std::vector<letter> children;
      std::size_t next = 0;
    };
    std::vector<letter> w{0};
    std::vector<Frame> stack;
    auto enter = [&]() -> bool {
      Word word(w);
      auto result = test(word);
      if (!result) return false;
      Frame frame;
      if (!*result && w.size() < max_length_) {
        std::size_t limit = std::min(k_, word.letters_used() + 1);
        for (std::size_t x = 0; x < limit; ++x) frame.children.push_back(static_cast<letter>(x));
        std::ranges::shuffle(frame.children, rng_);
      }
      stack.push_back(std::move(frame));
      return true;
    };
    ++report_.samples;
    if (!enter()) return;
    while (!stack.empty()) {
      Frame& frame = stack.back();
      if (frame.next == frame.children.size()) {
        stack.pop_back();
        w.pop_back();
        continue;
      }
      letter x = frame.children[frame.next++];
      if (exhausted()) return;
      ++report_.extension_checks;
      if (!square_free_after_append(w, x)) continue;
      w.push_back(x);
      if (!enter()) return;
    }
    report_.exhaustive = true;
  }

 private:
  std::size_t k_;
  std::size_t max_length_;
  std::uint64_t budget_;
  std::mt19937_64 rng_;
  ProbeReport& report_;
};

}  // namespace detail

inline constexpr std::uint64_t default_probe_seed = 0x5eedULL;

// Non-exhaustive hunt for extremal words of length <= max_length, limited
// to `budget` insertion/append checks. Deterministic for a given seed.
inline ProbeReport probe_extremal(std::size_t k, std::size_t max_length, ProbeStrategy strategy,
                                  std::uint64_t budget,
                                  std::uint64_t seed = default_probe_seed) {
  if (k == 0 || k > 26) throw search_error("alphabet size must be in 1..26");
  if (max_length == 0) throw search_error("maximum length must be positive");
  ProbeReport report;
  report.k = k;
  report.max_length = max_length;
  report.strategy = strategy;
  report.budget = budget;
  report.seed = seed;
  if (budget == 0) return report;
  detail::Prober prober(k, max_length, budget, seed, report);
  switch (strategy) {
    case ProbeStrategy::random_walk: prober.run_random_walk(); break;
    case ProbeStrategy::nonchalant_seeded: prober.run_nonchalant_seeded(); break;
    case ProbeStrategy::dfs_sampling: prober.run_dfs_sampling(); break;
  }
  std::ranges::sort(report.extremal);
  report.extremal.erase(std::unique(report.extremal.begin(), report.extremal.end()),
                        report.extremal.end());
  return report;
}

}  // namespace sqfree
