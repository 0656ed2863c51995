#pragma once

// Words over small ordered alphabets, square detection, single-letter
// extensions and extremality classification.

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ranges>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sqfree {

using letter = std::uint8_t;

class word_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An ordered set of distinct printable symbols. Letter i of a word is the
// index of its symbol; the order is what "earliest letter" refers to.
class Alphabet {
 public:
  explicit Alphabet(std::string symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw word_error("alphabet must not be empty");
    if (symbols_.size() > 64) throw word_error("alphabet too large");
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      auto c = static_cast<unsigned char>(symbols_[i]);
      if (c <= ' ' || c >= 0x7f)
        throw word_error("alphabet symbols must be printable ASCII");
      if (symbols_.find(symbols_[i], i + 1) != std::string::npos)
        throw word_error("alphabet symbols must be distinct");
    }
  }

  // 'a', 'b', ... for k letters.
  static Alphabet canonical(std::size_t k) {
    if (k == 0 || k > 26) throw word_error("alphabet size must be in 1..26");
    std::string s(k, 'a');
    std::iota(s.begin(), s.end(), 'a');
    return Alphabet(std::move(s));
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  const std::string& symbols() const noexcept { return symbols_; }
  char symbol(letter x) const { return symbols_.at(x); }

  std::optional<letter> index_of(char c) const noexcept {
    auto pos = symbols_.find(c);
    if (pos == std::string::npos) return std::nullopt;
    return static_cast<letter>(pos);
  }

  bool operator==(const Alphabet&) const = default;

 private:
  std::string symbols_;
};

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<letter> letters) : letters_(std::move(letters)) {}
  Word(std::initializer_list<letter> letters) : letters_(letters) {}

  // Parses text over the canonical lowercase alphabet ('a' = 0).
  static Word from_string(std::string_view text) {
    std::vector<letter> out;
    out.reserve(text.size());
    for (char c : text) {
      if (c < 'a' || c > 'z')
        throw word_error(std::string("invalid letter '") + c + "'");
      out.push_back(static_cast<letter>(c - 'a'));
    }
    return Word(std::move(out));
  }

  std::string to_string() const {
    std::string s(letters_.size(), 'a');
    std::ranges::transform(letters_, s.begin(),
                           [](letter x) { return static_cast<char>('a' + x); });
    return s;
  }

  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  letter operator[](std::size_t i) const { return letters_[i]; }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }
  const letter* data() const noexcept { return letters_.data(); }
  const std::vector<letter>& letters() const noexcept { return letters_; }
  std::vector<letter>& letters() noexcept { return letters_; }

  // One past the largest letter; 0 for the empty word.
  std::size_t letters_used() const noexcept {
    return letters_.empty()
               ? 0
               : static_cast<std::size_t>(*std::ranges::max_element(letters_)) + 1;
  }

  Word operator+(const Word& other) const {
    std::vector<letter> out(letters_);
    out.insert(out.end(), other.letters_.begin(), other.letters_.end());
    return Word(std::move(out));
  }

  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<letter> letters_;
};

inline Word parse_word(std::string_view text, const Alphabet& alphabet) {
  std::vector<letter> out;
  out.reserve(text.size());
  for (char c : text) {
    auto x = alphabet.index_of(c);
    if (!x)
      throw word_error(std::string("letter '") + c + "' is not in alphabet \"" +
                       alphabet.symbols() + "\"");
    out.push_back(*x);
  }
  return Word(std::move(out));
}

inline std::string format_word(const Word& w, const Alphabet& alphabet) {
  std::string s;
  s.reserve(w.size());
  for (letter x : w) s.push_back(alphabet.symbol(x));
  return s;
}

struct SquareWitness {
  std::size_t start = 0;
  std::size_t half_length = 0;

  friend bool operator==(const SquareWitness&, const SquareWitness&) = default;
};

struct Extension {
  std::size_t position = 0;
  letter symbol = 0;

  friend auto operator<=>(const Extension&, const Extension&) = default;
};

enum class ExtensionStatus { extendable, nearly_extremal, extremal };

inline std::string_view to_string(ExtensionStatus s) {
  switch (s) {
    case ExtensionStatus::extendable: return "EXTENDABLE";
    case ExtensionStatus::nearly_extremal: return "NEARLY_EXTREMAL";
    case ExtensionStatus::extremal: return "EXTREMAL";
  }
  return "?";
}

struct ExtensionReport {
  Word word;
  std::vector<Extension> square_free_extensions;
  ExtensionStatus status = ExtensionStatus::extendable;
};

template <typename R>
concept letter_range = std::ranges::contiguous_range<R> &&
                       std::integral<std::ranges::range_value_t<R>>;

namespace detail {

// Length of the run of equal pairs (w[i], w[i+period]) extending from `from`
// (exclusive) in direction `step`, capped at `cap`. `at` abstracts over the
// real and the virtually-extended word.
template <typename At>
std::size_t match_run(const At& at, std::size_t size, std::size_t from,
                      std::size_t period, std::ptrdiff_t step, std::size_t cap) {
  std::size_t run = 0;
  auto i = static_cast<std::ptrdiff_t>(from);
  while (run < cap) {
    i += step;
    if (i < 0 || static_cast<std::size_t>(i) + period >= size) break;
    auto u = static_cast<std::size_t>(i);
    if (at(u) != at(u + period)) break;
    ++run;
  }
  return run;
}

}  // namespace detail

// Leftmost square, ties broken by the shortest half-length. For every period
// L each square's first half contains exactly one multiple of L, so only
// those anchors are extended.
template <letter_range R>
std::optional<SquareWitness> find_square(const R& range) {
  std::span w(std::ranges::data(range), std::ranges::size(range));
  const std::size_t n = w.size();
  auto at = [&](std::size_t i) { return w[i]; };
  std::optional<SquareWitness> best;
  for (std::size_t period = 1; 2 * period <= n; ++period) {
    for (std::size_t anchor = 0; anchor + period < n; anchor += period) {
      if (best && anchor >= best->start + period) break;
      if (w[anchor] != w[anchor + period]) continue;
      std::size_t left = detail::match_run(at, n, anchor, period, -1, period - 1);
      std::size_t right = detail::match_run(at, n, anchor, period, +1, period - 1);
      if (left + right + 1 >= period) {
        std::size_t start = anchor - left;
        if (!best || start < best->start) best = SquareWitness{start, period};
        break;
      }
    }
  }
  return best;
}

template <letter_range R>
bool is_square_free(const R& range) {
  std::span w(std::ranges::data(range), std::ranges::size(range));
  const std::size_t n = w.size();
  auto at = [&](std::size_t i) { return w[i]; };
  for (std::size_t period = 1; 2 * period <= n; ++period) {
    for (std::size_t anchor = 0; anchor + period < n; anchor += period) {
      if (w[anchor] != w[anchor + period]) continue;
      std::size_t left = detail::match_run(at, n, anchor, period, -1, period - 1);
      if (left + 1 >= period) return false;
      std::size_t right =
          detail::match_run(at, n, anchor, period, +1, period - 1 - left);
      if (left + right + 1 >= period) return false;
    }
  }
  return true;
}

inline std::optional<SquareWitness> find_square(const Word& w) {
  return find_square(w.letters());
}
inline bool is_square_free(const Word& w) { return is_square_free(w.letters()); }

// Whether inserting `x` before index `pos` of the square-free word `w` keeps
// it square-free. Only squares containing the new letter are examined: the
// new letter sits in either half, so its pair (pos, pos+L) or (pos-L, pos)
// must match and anchor a run of L equal pairs. Shorter periods are tried
// first, so failures are usually detected in a few comparisons.
template <letter_range R>
bool square_free_after_insert(const R& range, std::size_t pos,
                              std::ranges::range_value_t<R> x) {
  std::span w(std::ranges::data(range), std::ranges::size(range));
  const std::size_t size = w.size() + 1;
  auto at = [&](std::size_t i) {
    return i < pos ? w[i] : (i == pos ? x : w[i - 1]);
  };
  for (std::size_t period = 1; 2 * period <= size; ++period) {
    for (int half = 0; half < 2; ++half) {
      std::size_t anchor;
      if (half == 0) {
        if (pos + period >= size) continue;
        anchor = pos;
      } else {
        if (pos < period) continue;
        anchor = pos - period;
      }
      if (at(anchor) != at(anchor + period)) continue;
      std::size_t left = detail::match_run(at, size, anchor, period, -1, period - 1);
      if (left + 1 >= period) return false;
      std::size_t right =
          detail::match_run(at, size, anchor, period, +1, period - 1 - left);
      if (left + right + 1 >= period) return false;
    }
  }
  return true;
}

// Appending is the hot path of every backtracking search: only suffix
// squares need checking.
template <letter_range R>
bool square_free_after_append(const R& range, std::ranges::range_value_t<R> x) {
  std::span w(std::ranges::data(range), std::ranges::size(range));
  const std::size_t n = w.size() + 1;
  auto at = [&](std::size_t i) { return i + 1 == n ? x : w[i]; };
  for (std::size_t period = 1; 2 * period <= n; ++period) {
    std::size_t i = n - 1;
    std::size_t matched = 0;
    while (matched < period && at(i) == at(i - period)) {
      ++matched;
      --i;
    }
    if (matched == period) return false;
  }
  return true;
}

inline void check_extension(const Word& w, Extension e, const Alphabet& alphabet) {
  if (e.position > w.size())
    throw word_error("extension position " + std::to_string(e.position) +
                     " out of range for word of length " + std::to_string(w.size()));
  if (e.symbol >= alphabet.size())
    throw word_error("extension symbol out of alphabet");
}

inline Word apply_extension(const Word& w, Extension e, const Alphabet& alphabet) {
  check_extension(w, e, alphabet);
  std::vector<letter> out;
  out.reserve(w.size() + 1);
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(e.position));
  out.push_back(e.symbol);
  out.insert(out.end(), w.begin() + static_cast<std::ptrdiff_t>(e.position), w.end());
  return Word(std::move(out));
}

// Precondition (unchecked): w is square-free.
inline bool is_square_free_after_insert(const Word& w, Extension e,
                                        const Alphabet& alphabet) {
  check_extension(w, e, alphabet);
  return square_free_after_insert(w.letters(), e.position, e.symbol);
}

inline void require_square_free(const Word& w) {
  if (auto sq = find_square(w))
    throw word_error("word is not square-free: square at " +
                     std::to_string(sq->start) + " with half-length " +
                     std::to_string(sq->half_length));
}

inline std::vector<Extension> enumerate_square_free_extensions(
    const Word& w, const Alphabet& alphabet) {
  require_square_free(w);
  if (w.letters_used() > alphabet.size())
    throw word_error("word uses letters outside the alphabet");
  std::vector<Extension> out;
  for (std::size_t p = 0; p <= w.size(); ++p)
    for (std::size_t x = 0; x < alphabet.size(); ++x)
      if (square_free_after_insert(w.letters(), p, static_cast<letter>(x)))
        out.push_back({p, static_cast<letter>(x)});
  return out;
}

inline ExtensionStatus status_of(const std::vector<Extension>& extensions,
                                 std::size_t word_length) {
  if (extensions.empty()) return ExtensionStatus::extremal;
  bool only_ends = std::ranges::all_of(extensions, [&](const Extension& e) {
    return e.position == 0 || e.position == word_length;
  });
  return only_ends ? ExtensionStatus::nearly_extremal : ExtensionStatus::extendable;
}

inline ExtensionReport classify(const Word& w, const Alphabet& alphabet) {
  ExtensionReport report{w, enumerate_square_free_extensions(w, alphabet),
                         ExtensionStatus::extendable};
  report.status = status_of(report.square_free_extensions, w.size());
  return report;
}

// Short-circuiting extremality test. Positions are scanned from the middle
// outward; `checks`, when given, is incremented per insertion tested.
// Precondition (unchecked): w is square-free.
inline bool has_square_free_extension(const Word& w, std::size_t k,
                                      std::uint64_t* checks = nullptr) {
  const std::size_t n = w.size();
  const std::size_t mid = n / 2;
  auto try_position = [&](std::size_t p) {
    for (std::size_t x = 0; x < k; ++x) {
      if (checks) ++*checks;
      if (square_free_after_insert(w.letters(), p, static_cast<letter>(x)))
        return true;
    }
    return false;
  };
  // mid, mid-1, mid+1, mid-2, mid+2, ...
  for (std::size_t d = 0; d <= mid || mid + d <= n; ++d) {
    if (d <= mid && try_position(mid - d)) return true;
    if (d > 0 && mid + d <= n && try_position(mid + d)) return true;
  }
  return false;
}

inline bool is_extremal(const Word& w, const Alphabet& alphabet) {
  require_square_free(w);
  return !has_square_free_extension(w, alphabet.size());
}

// perm[i] is the image of letter i.
inline Word permute(const Word& w, std::span<const letter> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (letter y : perm) {
    if (y >= perm.size() || seen[y]) throw word_error("permutation is not a bijection");
    seen[y] = true;
  }
  std::vector<letter> out;
  out.reserve(w.size());
  for (letter x : w) {
    if (x >= perm.size()) throw word_error("permutation does not cover word letters");
    out.push_back(perm[x]);
  }
  return Word(std::move(out));
}

inline Word reverse(const Word& w) {
  std::vector<letter> out(w.letters().rbegin(), w.letters().rend());
  return Word(std::move(out));
}

}  // namespace sqfree
