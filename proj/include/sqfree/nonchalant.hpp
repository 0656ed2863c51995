#pragma once

// Nonchalant words: starting from the first letter, repeatedly insert the
// earliest letter at the rightmost position that keeps the word square-free.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "sqfree/word.hpp"

namespace sqfree {

namespace detail {

// Precondition (unchecked): w is square-free.
inline std::optional<Extension> next_nonchalant_unchecked(const Word& w, std::size_t k) {
  for (std::size_t p = w.size() + 1; p-- > 0;)
    for (std::size_t x = 0; x < k; ++x)
      if (square_free_after_insert(w.letters(), p, static_cast<letter>(x)))
        return Extension{p, static_cast<letter>(x)};
  return std::nullopt;
}

}  // namespace detail

// Largest insertion position first (shortest suffix), then earliest letter.
// Absent iff w is extremal.
inline std::optional<Extension> next_nonchalant(const Word& w, const Alphabet& alphabet) {
  require_square_free(w);
  if (w.letters_used() > alphabet.size())
    throw word_error("word uses letters outside the alphabet");
  return detail::next_nonchalant_unchecked(w, alphabet.size());
}

// The trace of a run: G_1 is the first letter and G_{i+1} is G_i with
// steps[i-1] applied. Only the steps and the last word are stored.
struct NonchalantRun {
  std::size_t k = 0;
  std::vector<Extension> steps;
  Word last;
  bool terminated = false;  // the last word is extremal

  std::size_t word_count() const { return k == 0 ? 0 : steps.size() + 1; }

  // Replays the steps; G_1 is index 0.
  std::vector<Word> words() const {
    std::vector<Word> out;
    if (k == 0) return out;
    Word w{0};
    out.push_back(w);
    for (const auto& e : steps) {
      w = apply_extension(w, e, Alphabet::canonical(k));
      out.push_back(w);
    }
    return out;
  }
};

struct NonchalantOptions {
  // Re-check each step with a full square scan and an exhaustive search for
  // a better extension.
  bool audit = false;
};

// Continues `run` until it holds `max_words` words or terminates.
inline void extend_nonchalant(NonchalantRun& run, std::size_t max_words,
                              NonchalantOptions options = {}) {
  const Alphabet alphabet = Alphabet::canonical(run.k);
  while (!run.terminated && run.word_count() < max_words) {
    auto e = detail::next_nonchalant_unchecked(run.last, run.k);
    if (!e) {
      run.terminated = true;
      break;
    }
    Word next = apply_extension(run.last, *e, alphabet);
    if (options.audit) {
      if (!is_square_free(next)) throw std::logic_error("nonchalant step produced a square");
      for (std::size_t p = e->position; p <= run.last.size(); ++p)
        for (std::size_t x = 0; x < run.k; ++x) {
          if (p == e->position && x >= e->symbol) break;
          Extension better{p, static_cast<letter>(x)};
          if (is_square_free(apply_extension(run.last, better, alphabet)))
            throw std::logic_error("nonchalant step is not greedy");
        }
    }
    run.steps.push_back(*e);
    run.last = std::move(next);
  }
}

// Runs from the single-letter seed up to `max_words` words.
inline NonchalantRun run_nonchalant(std::size_t k, std::size_t max_words,
                                    NonchalantOptions options = {}) {
  if (k == 0 || k > 26) throw word_error("alphabet size must be in 1..26");
  NonchalantRun run{k, {}, Word{0}, false};
  if (max_words == 0) throw word_error("a run holds at least one word");
  extend_nonchalant(run, max_words, options);
  return run;
}

// Rebuilds a run from stored steps, validating every step.
inline NonchalantRun replay_nonchalant(std::size_t k, const std::vector<Extension>& steps) {
  NonchalantRun run{k, {}, Word{0}, false};
  const Alphabet alphabet = Alphabet::canonical(k);
  for (const auto& e : steps) {
    auto expected = detail::next_nonchalant_unchecked(run.last, k);
    if (!expected || *expected != e)
      throw word_error("step " + std::to_string(run.steps.size() + 1) +
                       " is not the nonchalant choice");
    run.last = apply_extension(run.last, e, alphabet);
    run.steps.push_back(e);
  }
  return run;
}

struct NonchalantStatistics {
  std::vector<std::size_t> lengths;  // |G_i| for each word
  std::map<std::size_t, std::size_t> positions;       // insertion position -> count
  std::map<std::size_t, std::size_t> suffix_lengths;  // |G_i''| -> count
  std::vector<std::size_t> letter_frequency;          // in the last word
  bool terminated = false;
};

inline NonchalantStatistics run_statistics(const NonchalantRun& run) {
  NonchalantStatistics stats;
  stats.terminated = run.terminated;
  if (run.word_count() == 0) return stats;
  stats.lengths.reserve(run.word_count());
  stats.lengths.push_back(1);
  for (const auto& e : run.steps) {
    std::size_t before = stats.lengths.back();
    ++stats.positions[e.position];
    ++stats.suffix_lengths[before - e.position];
    stats.lengths.push_back(before + 1);
  }
  stats.letter_frequency.assign(run.k, 0);
  for (letter x : run.last) ++stats.letter_frequency[x];
  return stats;
}

}  // namespace sqfree
