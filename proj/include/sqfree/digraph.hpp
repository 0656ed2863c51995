#pragma once

// Block-labelled digraphs: images of walks, the three sufficient conditions
// for every square-free walk to have a square-free image, class partitions
// with connecting paths, and the construction of long square-free walks
// steered by a ternary square-free driver word.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sqfree/word.hpp"

namespace sqfree {

using vertex_id = std::uint32_t;
using Walk = std::vector<vertex_id>;

class digraph_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Vertex {
  std::string name;
  Word block;
};

class BlockDigraph {
 public:
  explicit BlockDigraph(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

  const Alphabet& alphabet() const noexcept { return alphabet_; }

  vertex_id add_vertex(std::string name, Word block) {
    if (block.empty()) throw digraph_error("block of '" + name + "' is empty");
    if (block.letters_used() > alphabet_.size())
      throw digraph_error("block of '" + name + "' is outside the alphabet");
    if (!is_square_free(block))
      throw digraph_error("block of '" + name + "' is not square-free");
    if (name.empty() || name.find_first_of(" \t\n") != std::string::npos)
      throw digraph_error("vertex names must be non-empty without whitespace");
    if (find(name)) throw digraph_error("duplicate vertex name '" + name + "'");
    vertices_.push_back({std::move(name), std::move(block)});
    successors_.emplace_back();
    return static_cast<vertex_id>(vertices_.size() - 1);
  }

  // Self-loops can never occur in a square-free walk and are rejected.
  void add_edge(vertex_id from, vertex_id to) {
    check_vertex(from);
    check_vertex(to);
    if (from == to)
      throw digraph_error("self-loop on '" + vertices_[from].name + "'");
    auto& out = successors_[from];
    auto it = std::ranges::lower_bound(out, to);
    if (it == out.end() || *it != to) out.insert(it, to);
  }

  void remove_edge(vertex_id from, vertex_id to) {
    check_vertex(from);
    auto& out = successors_[from];
    auto it = std::ranges::lower_bound(out, to);
    if (it != out.end() && *it == to) out.erase(it);
  }

  bool has_edge(vertex_id from, vertex_id to) const {
    if (from >= size() || to >= size()) return false;
    return std::ranges::binary_search(successors_[from], to);
  }

  std::size_t size() const noexcept { return vertices_.size(); }
  const Vertex& vertex(vertex_id v) const { return vertices_.at(v); }
  const Word& block(vertex_id v) const { return vertices_.at(v).block; }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }

  // Sorted ascending.
  const std::vector<vertex_id>& successors(vertex_id v) const {
    return successors_.at(v);
  }

  std::size_t in_degree(vertex_id v) const {
    std::size_t d = 0;
    for (const auto& out : successors_) d += std::ranges::binary_search(out, v);
    return d;
  }

  std::vector<std::pair<vertex_id, vertex_id>> edges() const {
    std::vector<std::pair<vertex_id, vertex_id>> out;
    for (vertex_id u = 0; u < size(); ++u)
      for (vertex_id v : successors_[u]) out.emplace_back(u, v);
    return out;
  }

  std::size_t edge_count() const {
    std::size_t c = 0;
    for (const auto& out : successors_) c += out.size();
    return c;
  }

  std::optional<vertex_id> find(std::string_view name) const {
    for (vertex_id v = 0; v < size(); ++v)
      if (vertices_[v].name == name) return v;
    return std::nullopt;
  }

  vertex_id require(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw digraph_error("no vertex named '" + std::string(name) + "'");
  }

  std::vector<Word> blocks() const {
    std::vector<Word> out;
    out.reserve(size());
    for (const auto& v : vertices_) out.push_back(v.block);
    return out;
  }

  void check_walk(const Walk& walk) const {
    for (vertex_id v : walk) check_vertex(v);
    for (std::size_t i = 0; i + 1 < walk.size(); ++i)
      if (!has_edge(walk[i], walk[i + 1]))
        throw digraph_error("walk uses non-edge " + vertices_[walk[i]].name + " -> " +
                            vertices_[walk[i + 1]].name);
  }

  friend bool operator==(const BlockDigraph& a, const BlockDigraph& b) {
    if (!(a.alphabet_ == b.alphabet_) || a.size() != b.size()) return false;
    for (vertex_id v = 0; v < a.size(); ++v)
      if (a.vertices_[v].name != b.vertices_[v].name ||
          a.vertices_[v].block != b.vertices_[v].block)
        return false;
    return a.successors_ == b.successors_;
  }

 private:
  void check_vertex(vertex_id v) const {
    if (v >= size()) throw digraph_error("vertex id " + std::to_string(v) + " out of range");
  }

  Alphabet alphabet_;
  std::vector<Vertex> vertices_;
  std::vector<std::vector<vertex_id>> successors_;
};

inline Word image(const BlockDigraph& d, const Walk& walk) {
  d.check_walk(walk);
  std::vector<letter> out;
  for (vertex_id v : walk) {
    const auto& b = d.block(v).letters();
    out.insert(out.end(), b.begin(), b.end());
  }
  return Word(std::move(out));
}

inline bool is_square_free_walk(const Walk& walk) { return is_square_free(walk); }

// ---------------------------------------------------------------------------
// Sufficient conditions

struct WalkViolation {
  Walk walk;
  SquareWitness square;
};

// Block B_inner occurs as a factor of B_outer.
struct FactorViolation {
  std::size_t inner = 0;
  std::size_t outer = 0;
  friend auto operator<=>(const FactorViolation&, const FactorViolation&) = default;
};

// B_first = X X', B_second = Y Y'.
enum class SpliceKind {
  prefix_suffix,  // X Y'
  suffix_prefix,  // X' Y
};

struct SpliceViolation {
  std::size_t first = 0;
  std::size_t second = 0;
  std::size_t first_split = 0;   // |X|
  std::size_t second_split = 0;  // |Y|
  SpliceKind kind = SpliceKind::prefix_suffix;
  std::size_t matched = 0;  // index k with splice == B_k
  friend auto operator<=>(const SpliceViolation&, const SpliceViolation&) = default;
};

// Which splices of B_i and B_j are tolerated when they spell a block B_k.
enum class SpliceReading {
  // B_k is one of the two spliced blocks. A splice reproducing B_i or B_j
  // forces a repeated vertex in the walk, which is what the square-freeness
  // argument needs.
  source_block,
  // Only the degenerate splice made of one whole block and an empty piece
  // of the other.
  whole_block,
  // B_k = B_i = X or B_k = B_j = Y, taken word for word.
  literal,
};

inline std::string_view to_string(SpliceReading r) {
  switch (r) {
    case SpliceReading::source_block: return "source-block";
    case SpliceReading::whole_block: return "whole-block";
    case SpliceReading::literal: return "literal";
  }
  return "?";
}

inline std::string_view to_string(SpliceKind k) {
  return k == SpliceKind::prefix_suffix ? "XY'" : "X'Y";
}

inline Word splice(const Word& first, const Word& second, std::size_t first_split,
                   std::size_t second_split, SpliceKind kind) {
  std::vector<letter> out;
  const auto& a = first.letters();
  const auto& b = second.letters();
  auto fs = static_cast<std::ptrdiff_t>(first_split);
  auto ss = static_cast<std::ptrdiff_t>(second_split);
  if (kind == SpliceKind::prefix_suffix) {
    out.insert(out.end(), a.begin(), a.begin() + fs);
    out.insert(out.end(), b.begin() + ss, b.end());
  } else {
    out.insert(out.end(), a.begin() + fs, a.end());
    out.insert(out.end(), b.begin(), b.begin() + ss);
  }
  return Word(std::move(out));
}

// All square-free walks with one, two or three vertices whose image has a
// square. Reported in walk order.
inline std::vector<WalkViolation> check_condition_short_walks(const BlockDigraph& d) {
  std::vector<WalkViolation> out;
  auto check = [&](Walk walk) {
    if (auto sq = find_square(image(d, walk))) out.push_back({std::move(walk), *sq});
  };
  for (vertex_id u = 0; u < d.size(); ++u) {
    check({u});
    for (vertex_id v : d.successors(u)) {
      check({u, v});
      for (vertex_id w : d.successors(v))
        if (w != u) check({u, v, w});
    }
  }
  return out;
}

inline std::vector<FactorViolation> check_condition_factors(std::span<const Word> blocks) {
  std::vector<FactorViolation> out;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (i == j) continue;
      const auto& inner = blocks[i].letters();
      const auto& outer = blocks[j].letters();
      if (!std::ranges::search(outer, inner).empty())
        out.push_back({i, j});
    }
  return out;
}

namespace detail {

inline bool splice_tolerated(SpliceReading reading, std::span<const Word> blocks,
                             const SpliceViolation& s) {
  const std::size_t len_i = blocks[s.first].size();
  const std::size_t len_j = blocks[s.second].size();
  const bool pre = s.kind == SpliceKind::prefix_suffix;
  switch (reading) {
    case SpliceReading::source_block:
      return s.matched == s.first || s.matched == s.second;
    case SpliceReading::whole_block: {
      // Piece taken from B_i is X (XY') or X'; piece from B_j is Y' or Y.
      std::size_t piece_i = pre ? s.first_split : len_i - s.first_split;
      std::size_t piece_j = pre ? len_j - s.second_split : s.second_split;
      return (piece_i == len_i && piece_j == 0) || (piece_i == 0 && piece_j == len_j);
    }
    case SpliceReading::literal:
      return (s.matched == s.first && s.first_split == len_i) ||
             (s.matched == s.second && s.second_split == len_j);
  }
  return false;
}

}  // namespace detail

// Every ordered pair i != j and every split B_i = X X', B_j = Y Y' (empty
// pieces included) whose splice XY' or X'Y equals some block, unless the
// reading tolerates it. Lookups go through a hash of all blocks.
inline std::vector<SpliceViolation> check_condition_splices(
    std::span<const Word> blocks, SpliceReading reading = SpliceReading::source_block) {
  std::unordered_map<std::string, std::size_t> index;
  std::unordered_set<std::size_t> lengths;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    index.emplace(blocks[k].to_string(), k);
    lengths.insert(blocks[k].size());
  }
  std::vector<SpliceViolation> out;
  std::string buffer;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string bi = blocks[i].to_string();
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (i == j) continue;
      const std::string bj = blocks[j].to_string();
      for (std::size_t a = 0; a <= bi.size(); ++a) {
        for (std::size_t b = 0; b <= bj.size(); ++b) {
          for (auto kind : {SpliceKind::prefix_suffix, SpliceKind::suffix_prefix}) {
            std::size_t len = kind == SpliceKind::prefix_suffix
                                  ? a + (bj.size() - b)
                                  : (bi.size() - a) + b;
            if (!lengths.contains(len)) continue;
            if (kind == SpliceKind::prefix_suffix) {
              buffer.assign(bi, 0, a);
              buffer.append(bj, b);
            } else {
              buffer.assign(bi, a);
              buffer.append(bj, 0, b);
            }
            auto it = index.find(buffer);
            if (it == index.end()) continue;
            SpliceViolation v{i, j, a, b, kind, it->second};
            if (!detail::splice_tolerated(reading, blocks, v)) out.push_back(v);
          }
        }
      }
    }
  }
  return out;
}

struct ThueCertificate {
  std::vector<WalkViolation> short_walks;
  std::vector<FactorViolation> factors;
  std::vector<SpliceViolation> splices;
  SpliceReading reading = SpliceReading::source_block;

  bool short_walks_pass() const { return short_walks.empty(); }
  bool factors_pass() const { return factors.empty(); }
  bool splices_pass() const { return splices.empty(); }
  bool passes() const { return short_walks_pass() && factors_pass() && splices_pass(); }
};

inline ThueCertificate verify_thue(const BlockDigraph& d,
                                   SpliceReading reading = SpliceReading::source_block) {
  auto blocks = d.blocks();
  return {check_condition_short_walks(d), check_condition_factors(blocks),
          check_condition_splices(blocks, reading), reading};
}

// Re-derives a recorded violation from scratch; used to audit certificates.
inline bool revalidate(const BlockDigraph& d, const WalkViolation& v) {
  Word w = image(d, v.walk);
  if (v.square.half_length == 0 || v.square.start + 2 * v.square.half_length > w.size())
    return false;
  return std::equal(w.begin() + static_cast<std::ptrdiff_t>(v.square.start),
                    w.begin() + static_cast<std::ptrdiff_t>(v.square.start + v.square.half_length),
                    w.begin() + static_cast<std::ptrdiff_t>(v.square.start + v.square.half_length));
}

inline bool revalidate(std::span<const Word> blocks, const SpliceViolation& v) {
  return splice(blocks[v.first], blocks[v.second], v.first_split, v.second_split, v.kind) ==
         blocks[v.matched];
}

// ---------------------------------------------------------------------------
// Class partitions and connecting paths

inline constexpr std::size_t class_count = 3;

// Classes are 0, 1, 2 internally and 1, 2, 3 when printed.
struct ClassPartition {
  std::vector<std::uint8_t> class_of;

  static ClassPartition from_names(const BlockDigraph& d,
                                   const std::array<std::vector<std::string>, 3>& classes) {
    ClassPartition p{std::vector<std::uint8_t>(d.size(), 0xff)};
    for (std::uint8_t c = 0; c < 3; ++c)
      for (const auto& name : classes[c]) {
        vertex_id v = d.require(name);
        if (p.class_of[v] != 0xff)
          throw digraph_error("vertex '" + name + "' is in two classes");
        p.class_of[v] = c;
      }
    return p;
  }

  bool covers(const BlockDigraph& d) const {
    return class_of.size() == d.size() &&
           std::ranges::all_of(class_of, [](auto c) { return c < class_count; });
  }
};

struct PartitionCheck {
  bool covers = false;
  // paths[v][j]: from v to a vertex of class j, at least one edge, interior
  // in the class of v. Absent when no such path exists.
  std::vector<std::array<std::optional<Walk>, class_count>> paths;

  bool passes() const {
    if (!covers) return false;
    for (const auto& row : paths)
      for (const auto& p : row)
        if (!p) return false;
    return true;
  }
};

namespace detail {

// Shortest path (BFS, successors in ascending order) from `from` to the
// first vertex accepted by `is_target`, using at least one edge and interior
// vertices of `interior_class` only.
template <typename Target>
std::optional<Walk> confined_path(const BlockDigraph& d, const ClassPartition& p,
                                  vertex_id from, std::uint8_t interior_class,
                                  Target is_target) {
  std::vector<vertex_id> parent(d.size(), from);
  std::vector<bool> seen(d.size(), false);
  seen[from] = true;
  std::deque<vertex_id> queue{from};
  while (!queue.empty()) {
    vertex_id u = queue.front();
    queue.pop_front();
    for (vertex_id w : d.successors(u)) {
      if (is_target(w) && w != from) {
        Walk path{w};
        for (vertex_id x = u; x != from; x = parent[x]) path.push_back(x);
        path.push_back(from);
        std::ranges::reverse(path);
        return path;
      }
      if (seen[w] || p.class_of[w] != interior_class) continue;
      seen[w] = true;
      parent[w] = u;
      queue.push_back(w);
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline PartitionCheck verify_partition(const BlockDigraph& d, const ClassPartition& p) {
  PartitionCheck check;
  check.covers = p.covers(d);
  if (!check.covers) return check;
  check.paths.resize(d.size());
  for (vertex_id v = 0; v < d.size(); ++v)
    for (std::uint8_t j = 0; j < class_count; ++j)
      check.paths[v][j] = detail::confined_path(
          d, p, v, p.class_of[v], [&](vertex_id w) { return p.class_of[w] == j; });
  return check;
}

// Path from `from` that ends exactly at `target`, interior in class(from).
inline std::optional<Walk> path_to(const BlockDigraph& d, const ClassPartition& p,
                                   vertex_id from, vertex_id target) {
  return detail::confined_path(d, p, from, p.class_of.at(from),
                               [&](vertex_id w) { return w == target; });
}

// Checks a stored path: starts at v, follows edges, ends in class j, has
// interior in class(v).
inline bool path_is_valid(const BlockDigraph& d, const ClassPartition& p, vertex_id v,
                          std::uint8_t j, const Walk& path) {
  if (path.size() < 2 || path.front() != v || p.class_of[path.back()] != j) return false;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    if (!d.has_edge(path[i], path[i + 1])) return false;
  for (std::size_t i = 1; i + 1 < path.size(); ++i)
    if (p.class_of[path[i]] != p.class_of[v]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Driver words and substitution

// Prefix of length n of the fixed point of 0 -> 012, 1 -> 02, 2 -> 1
// (1 -> 123, 2 -> 13, 3 -> 2 on digits), a square-free ternary word.
inline Word ternary_fixed_point_prefix(std::size_t n) {
  static const std::array<std::vector<letter>, 3> image{
      std::vector<letter>{0, 1, 2}, std::vector<letter>{0, 2}, std::vector<letter>{1}};
  // The image of 0 starts with 0, so iterating from "0" yields ever longer
  // prefixes of the fixed point.
  std::vector<letter> w{0};
  while (w.size() < n) {
    std::vector<letter> next;
    next.reserve(3 * w.size());
    for (letter x : w) next.insert(next.end(), image[x].begin(), image[x].end());
    w = std::move(next);
  }
  w.resize(n);
  return Word(std::move(w));
}

// A square-free ternary word of length exactly n, with optional first and
// last letters (0, 1, 2). Letters are chosen in the order suggested by a
// relabelled fixed-point prefix and the search backtracks as needed, so the
// result is deterministic.
inline Word driver_word(std::size_t n, std::optional<letter> first = std::nullopt,
                        std::optional<letter> last = std::nullopt) {
  if (n == 0) throw word_error("driver word length must be positive");
  if ((first && *first > 2) || (last && *last > 2))
    throw word_error("driver word letters are 0, 1, 2");
  // Relabel the fixed point so that it starts with `first`.
  std::array<letter, 3> relabel{0, 1, 2};
  if (first && *first != 0) std::swap(relabel[0], relabel[*first]);
  Word hint = permute(ternary_fixed_point_prefix(n), relabel);
  if (!last || hint[n - 1] == *last) return hint;

  std::vector<letter> w;
  w.reserve(n);
  // tried[i]: how many candidates were tried at depth i.
  std::vector<std::uint8_t> tried(n, 0);
  auto candidate = [&](std::size_t depth, std::uint8_t attempt) -> std::optional<letter> {
    if (depth == 0) {
      if (attempt > 0 || (n == 1 && hint[0] != *last)) return std::nullopt;
      return hint[0];
    }
    if (depth + 1 == n) {
      if (attempt > 0) return std::nullopt;
      return *last;
    }
    if (attempt >= 3) return std::nullopt;
    return static_cast<letter>((hint[depth] + attempt) % 3);
  };
  std::size_t depth = 0;
  while (true) {
    if (depth == n) return Word(std::move(w));
    auto x = candidate(depth, tried[depth]);
    if (!x) {
      if (depth == 0) throw word_error("no square-free ternary word of length " +
                                       std::to_string(n) + " with these endpoints");
      tried[depth] = 0;
      --depth;
      w.pop_back();
      continue;
    }
    ++tried[depth];
    if (square_free_after_append(w, *x)) {
      w.push_back(*x);
      ++depth;
    }
  }
}

// Concatenation of pieces, piece i drawn from class driver[i] with distinct
// letters. Classes are given by `class_of`; the result is square-free when
// the driver is.
template <typename T, typename ClassOf>
std::vector<T> substituted_word(const Word& driver, const std::vector<std::vector<T>>& pieces,
                                ClassOf class_of) {
  if (pieces.size() != driver.size())
    throw word_error("one piece per driver letter is required");
  if (!is_square_free(driver)) throw word_error("driver word is not square-free");
  std::vector<T> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& piece = pieces[i];
    if (piece.empty()) throw word_error("pieces must be non-empty");
    std::set<T> distinct(piece.begin(), piece.end());
    if (distinct.size() != piece.size())
      throw word_error("piece letters must be pairwise distinct");
    for (const T& x : piece)
      if (static_cast<std::size_t>(class_of(x)) != driver[i])
        throw word_error("piece letter outside its class alphabet");
    out.insert(out.end(), piece.begin(), piece.end());
  }
  if (!is_square_free(out)) throw std::logic_error("substituted word has a square");
  return out;
}

struct WalkRequest {
  std::size_t min_blocks = 1;
  std::optional<vertex_id> start;
  std::optional<vertex_id> end;
};

// A square-free walk with at least `min_blocks` vertices. A driver word T
// selects the class sequence; consecutive pieces follow the stored
// connecting paths, and the last leg targets `end` exactly when given.
inline Walk long_square_free_walk(const BlockDigraph& d, const ClassPartition& p,
                                  const WalkRequest& request) {
  auto check = verify_partition(d, p);
  if (!check.passes()) throw digraph_error("partition does not admit connecting paths");
  if (request.start && *request.start >= d.size()) throw digraph_error("bad start vertex");
  if (request.end && *request.end >= d.size()) throw digraph_error("bad end vertex");

  vertex_id start = 0;
  if (request.start) {
    start = *request.start;
  } else {
    auto it = std::ranges::find(p.class_of, std::uint8_t{0});
    start = static_cast<vertex_id>(it - p.class_of.begin());
  }
  std::optional<letter> last;
  if (request.end) last = p.class_of[*request.end];

  // Every driver letter contributes at least one vertex, so a driver of
  // min_blocks letters always suffices; start from the shortest driver that
  // could reach min_blocks to limit overshoot.
  std::size_t longest_piece = 1;
  for (const auto& row : check.paths)
    for (const auto& path : row) longest_piece = std::max(longest_piece, path->size() - 1);
  const std::size_t target = std::max<std::size_t>(request.min_blocks, 1);
  const std::size_t shortest = (target + longest_piece - 1) / longest_piece;
  for (std::size_t length = shortest; length < target + 16; ++length) {
    Word driver;
    try {
      driver = driver_word(length, p.class_of[start], last);
    } catch (const word_error&) {
      continue;
    }
    Walk walk;
    vertex_id v = start;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < length; ++i) {
      std::optional<Walk> path;
      if (request.end && i + 2 == length)
        path = path_to(d, p, v, *request.end);
      else
        path = check.paths[v][driver[i + 1]];
      if (!path) {
        ok = false;
        break;
      }
      walk.insert(walk.end(), path->begin(), path->end() - 1);
      v = path->back();
    }
    if (!ok) continue;
    if (request.end && v != *request.end) continue;
    walk.push_back(v);
    if (walk.size() < request.min_blocks) continue;
    d.check_walk(walk);
    if (!is_square_free_walk(walk))
      throw std::logic_error("walk construction produced a square");
    return walk;
  }
  throw digraph_error("no square-free walk satisfies the endpoint constraints");
}

}  // namespace sqfree
