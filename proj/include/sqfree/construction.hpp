#pragma once

// The ternary construction: the nearly extremal seed N, its twelve images
// under alphabet permutations and reversal, the block digraph on them, the
// bracketing words P and S, and generators for arbitrarily long nearly
// extremal and extremal words.

#include <array>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sqfree/digraph.hpp"
#include "sqfree/word.hpp"

namespace sqfree {

class construction_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CanonicalWords {
  Word seed;    // N, 41 letters, nearly extremal
  Word prefix;  // P, 28 letters
  Word suffix;  // S, 33 letters
  Word shortest_extremal;  // H, 25 letters
};

namespace words {

inline constexpr std::string_view seed = "abacbabcabacbcacbabcabacabcbabcabacbcabcb";
// P is used in this orientation: its reversal followed by N has the square
// (cab)(cab), while P·N·S is extremal.
inline constexpr std::string_view prefix = "cbacbcabacbabcabacbcabcbacbc";
inline constexpr std::string_view suffix = "acabcacbabcabacbcabcbacabacbcabcb";
inline constexpr std::string_view shortest_extremal = "abcabacbcabcbabcabacbcabc";

}  // namespace words

inline CanonicalWords canonical_words() {
  return {Word::from_string(words::seed), Word::from_string(words::prefix),
          Word::from_string(words::suffix), Word::from_string(words::shortest_extremal)};
}

// "name word" lines; '#' starts a comment. Names: N, P, S, H.
inline CanonicalWords parse_canonical_words(std::istream& in) {
  std::array<std::optional<Word>, 4> found;
  static constexpr std::array<std::string_view, 4> names{"N", "P", "S", "H"};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string name, text, extra;
    if (!(fields >> name)) continue;
    if (!(fields >> text) || (fields >> extra))
      throw construction_error("canonical words line " + std::to_string(line_no) +
                               ": expected 'name word'");
    auto it = std::ranges::find(names, name);
    if (it == names.end())
      throw construction_error("canonical words line " + std::to_string(line_no) +
                               ": unknown name '" + name + "'");
    found[static_cast<std::size_t>(it - names.begin())] = Word::from_string(text);
  }
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!found[i])
      throw construction_error("canonical words: missing " + std::string(names[i]));
  return {*found[0], *found[1], *found[2], *found[3]};
}

inline CanonicalWords load_canonical_words(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw construction_error("cannot open " + path);
  return parse_canonical_words(in);
}

// Permutation names list the non-trivial cycle: "abc" maps a->b, b->c, c->a.
struct NamedPermutation {
  std::string_view cycle;
  std::array<letter, 3> image;
};

inline constexpr std::array<NamedPermutation, 6> block_permutations{{
    {"", {0, 1, 2}},
    {"ab", {1, 0, 2}},
    {"ac", {2, 1, 0}},
    {"bc", {0, 2, 1}},
    {"abc", {1, 2, 0}},
    {"acb", {2, 0, 1}},
}};

struct NamedBlock {
  std::string name;
  Word block;
};

// N, N_ab, N_ac, N_bc, N_abc, N_acb, then the reversals rev_N, rev_N_ab, ...
using BlockFamily = std::vector<NamedBlock>;

inline std::string block_name(std::string_view cycle, bool reversed) {
  std::string name = reversed ? "rev_N" : "N";
  if (!cycle.empty()) (name += '_') += cycle;
  return name;
}

inline BlockFamily make_blocks(const Word& seed) {
  BlockFamily family;
  for (bool reversed : {false, true})
    for (const auto& perm : block_permutations) {
      Word w = permute(seed, perm.image);
      family.push_back({block_name(perm.cycle, reversed), reversed ? reverse(w) : w});
    }
  return family;
}

inline ClassPartition block_partition(const BlockDigraph& d) {
  return ClassPartition::from_names(
      d, {{{"N", "N_bc", "rev_N", "rev_N_bc"},
           {"N_ab", "N_abc", "rev_N_ab", "rev_N_abc"},
           {"N_ac", "N_acb", "rev_N_ac", "rev_N_acb"}}});
}

// Starts from every edge whose two blocks concatenate square-free, then
// repeatedly drops the edge involved in the most square-containing 3-walks
// (ties: smallest edge) until no 3-walk fails.
inline BlockDigraph reconstruct_block_digraph(const BlockFamily& family) {
  BlockDigraph d(Alphabet::canonical(3));
  for (const auto& b : family) d.add_vertex(b.name, b.block);
  for (vertex_id u = 0; u < d.size(); ++u)
    for (vertex_id v = 0; v < d.size(); ++v)
      if (u != v && is_square_free(d.block(u) + d.block(v))) d.add_edge(u, v);
  while (true) {
    auto violations = check_condition_short_walks(d);
    if (violations.empty()) break;
    std::map<std::pair<vertex_id, vertex_id>, std::size_t> blame;
    for (const auto& v : violations)
      for (std::size_t i = 0; i + 1 < v.walk.size(); ++i) ++blame[{v.walk[i], v.walk[i + 1]}];
    if (blame.empty())
      throw construction_error("a block is not square-free; no edge set can help");
    auto worst = std::ranges::max_element(
        blame, [](const auto& a, const auto& b) { return a.second < b.second; });
    d.remove_edge(worst->first.first, worst->first.second);
  }
  return d;
}

// D_N plus P -> N and N -> S.
inline BlockDigraph bracket_digraph(const BlockDigraph& dn, const CanonicalWords& words) {
  BlockDigraph d = dn;
  vertex_id seed = d.require("N");
  vertex_id p = d.add_vertex("P", words.prefix);
  vertex_id s = d.add_vertex("S", words.suffix);
  d.add_edge(p, seed);
  d.add_edge(seed, s);
  return d;
}

struct Construction {
  CanonicalWords words;
  BlockFamily family;
  BlockDigraph dn{Alphabet::canonical(3)};
  BlockDigraph dn_star{Alphabet::canonical(3)};
  ClassPartition partition;
};

// Builds and verifies everything the generators rely on; throws
// construction_error on any failed check.
inline Construction build_construction(const CanonicalWords& words) {
  Construction c{words, make_blocks(words.seed), BlockDigraph(Alphabet::canonical(3)),
                 BlockDigraph(Alphabet::canonical(3)), {}};
  const Alphabet abc = Alphabet::canonical(3);
  for (const auto& b : c.family) {
    if (!is_square_free(b.block))
      throw construction_error("block " + b.name + " is not square-free");
    if (classify(b.block, abc).status != ExtensionStatus::nearly_extremal)
      throw construction_error("block " + b.name + " is not nearly extremal");
  }
  c.dn = reconstruct_block_digraph(c.family);
  if (!verify_thue(c.dn).passes())
    throw construction_error("reconstructed digraph fails the block conditions");
  c.partition = block_partition(c.dn);
  if (!verify_partition(c.dn, c.partition).passes())
    throw construction_error("class partition lacks connecting paths");
  c.dn_star = bracket_digraph(c.dn, words);
  if (!verify_thue(c.dn_star).passes())
    throw construction_error("bracketed digraph fails the block conditions");
  return c;
}

inline const Construction& default_construction() {
  static const Construction c = build_construction(canonical_words());
  return c;
}

struct GeneratedWord {
  Walk walk;  // vertex ids in dn (nearly extremal) or dn_star (extremal)
  std::vector<std::string> blocks;
  Word word;
  ExtensionStatus status = ExtensionStatus::extendable;
};

inline constexpr std::size_t min_nearly_extremal_length = 41;
inline constexpr std::size_t min_extremal_length = 102;

// Image of a square-free walk in D_N with at least ceil(min_length / |N|)
// blocks, re-classified before it is returned.
inline GeneratedWord generate_nearly_extremal(std::size_t min_length,
                                              const Construction& c = default_construction()) {
  if (min_length < min_nearly_extremal_length)
    throw construction_error("nearly extremal words start at length 41");
  const std::size_t block = c.words.seed.size();
  WalkRequest request{(min_length + block - 1) / block, std::nullopt, std::nullopt};
  GeneratedWord out;
  out.walk = long_square_free_walk(c.dn, c.partition, request);
  out.word = image(c.dn, out.walk);
  for (vertex_id v : out.walk) out.blocks.push_back(c.dn.vertex(v).name);
  out.status = classify(out.word, Alphabet::canonical(3)).status;
  if (out.status != ExtensionStatus::nearly_extremal)
    throw std::logic_error("generated word is not nearly extremal");
  return out;
}

// P · f(N ... N) · S for a square-free walk from N to N; overshoots rather
// than trims.
inline GeneratedWord generate_extremal(std::size_t min_length,
                                       const Construction& c = default_construction()) {
  if (min_length < min_extremal_length)
    throw construction_error("extremal words from this construction start at length 102");
  const std::size_t fixed = c.words.prefix.size() + c.words.suffix.size();
  const std::size_t block = c.words.seed.size();
  const std::size_t inner = std::max<std::size_t>(1, (min_length - fixed + block - 1) / block);
  vertex_id seed = c.dn.require("N");
  Walk interior = long_square_free_walk(c.dn, c.partition, {inner, seed, seed});

  GeneratedWord out;
  out.walk.push_back(c.dn_star.require("P"));
  out.walk.insert(out.walk.end(), interior.begin(), interior.end());
  out.walk.push_back(c.dn_star.require("S"));
  if (!is_square_free_walk(out.walk)) throw std::logic_error("bracketed walk has a square");
  out.word = image(c.dn_star, out.walk);
  for (vertex_id v : out.walk) out.blocks.push_back(c.dn_star.vertex(v).name);
  if (!is_square_free(out.word)) throw std::logic_error("generated word has a square");
  out.status = has_square_free_extension(out.word, 3) ? ExtensionStatus::extendable
                                                      : ExtensionStatus::extremal;
  if (out.status != ExtensionStatus::extremal)
    throw std::logic_error("generated word is not extremal");
  return out;
}

// ---------------------------------------------------------------------------
// Certificate

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConstructionCertificate {
  std::vector<CheckResult> checks;
  std::optional<ExtensionReport> seed_report;
  std::vector<std::pair<std::string, ExtensionStatus>> block_status;
  std::optional<ThueCertificate> dn;
  std::optional<PartitionCheck> partition;
  std::optional<ThueCertificate> dn_star;
  std::optional<ExtensionReport> bracketed_report;

  bool passes() const {
    return !checks.empty() &&
           std::ranges::all_of(checks, [](const CheckResult& c) { return c.passed; });
  }

  const CheckResult* find(std::string_view name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

inline std::string count_detail(std::size_t n, std::string_view what) {
  return n == 0 ? std::string() : std::to_string(n) + " " + std::string(what);
}

inline void certify_thue(ConstructionCertificate& cert, std::string_view prefix,
                         const ThueCertificate& t) {
  std::string p(prefix);
  cert.checks.push_back({p + ".short_walks", t.short_walks_pass(),
                         count_detail(t.short_walks.size(), "walks with a square")});
  cert.checks.push_back({p + ".factors", t.factors_pass(),
                         count_detail(t.factors.size(), "block factor pairs")});
  cert.checks.push_back({p + ".splices", t.splices_pass(),
                         count_detail(t.splices.size(), "splices equal to a block")});
}

}  // namespace detail

// Re-runs every verification of the construction and records each result.
// When `digraph` is given it replaces the reconstruction and its blocks are
// compared against the family generated from the seed.
inline ConstructionCertificate certify_construction(
    const CanonicalWords& words, const BlockDigraph* digraph = nullptr,
    SpliceReading reading = SpliceReading::source_block) {
  ConstructionCertificate cert;
  const Alphabet abc = Alphabet::canonical(3);
  auto add = [&](std::string name, bool passed, std::string detail = {}) {
    cert.checks.push_back({std::move(name), passed, std::move(detail)});
    return passed;
  };

  auto seed_square = find_square(words.seed);
  add("seed.square_free", !seed_square,
      seed_square ? "square at " + std::to_string(seed_square->start) + " half-length " +
                        std::to_string(seed_square->half_length)
                  : "");
  if (!seed_square) {
    cert.seed_report = classify(words.seed, abc);
    const auto& ext = cert.seed_report->square_free_extensions;
    add("seed.nearly_extremal",
        cert.seed_report->status == ExtensionStatus::nearly_extremal && ext.size() == 2,
        std::to_string(ext.size()) + " square-free extensions, " +
            std::string(to_string(cert.seed_report->status)));
  }

  BlockFamily family = make_blocks(words.seed);
  bool family_ok = !seed_square;
  if (family_ok) {
    for (const auto& b : family) {
      auto status = classify(b.block, abc).status;
      cert.block_status.emplace_back(b.name, status);
      family_ok = family_ok && status == ExtensionStatus::nearly_extremal;
    }
    std::set<Word> distinct;
    for (const auto& b : family) distinct.insert(b.block);
    family_ok = family_ok && distinct.size() == family.size();
  }
  add("blocks.nearly_extremal", family_ok);

  std::optional<BlockDigraph> dn;
  if (digraph) {
    bool match = digraph->size() == family.size();
    for (std::size_t i = 0; match && i < family.size(); ++i) {
      auto v = digraph->find(family[i].name);
      match = v && digraph->block(*v) == family[i].block;
    }
    add("blocks.match_seed", match);
    dn = *digraph;
  } else if (family_ok) {
    try {
      dn = reconstruct_block_digraph(family);
    } catch (const std::exception& e) {
      add("dn.reconstruct", false, e.what());
    }
  }
  if (!dn) {
    add("dn.available", false, "no digraph to verify");
    return cert;
  }

  cert.dn = verify_thue(*dn, reading);
  detail::certify_thue(cert, "dn", *cert.dn);
  try {
    ClassPartition partition = block_partition(*dn);
    cert.partition = verify_partition(*dn, partition);
    add("dn.partition", cert.partition->passes());
    if (cert.partition->passes()) {
      vertex_id n = dn->require("N");
      try {
        Walk w = long_square_free_walk(*dn, partition, {20, n, n});
        add("dn.walk_from_N_to_N", is_square_free_walk(w) && w.size() >= 20,
            std::to_string(w.size()) + " blocks");
      } catch (const std::exception& e) {
        add("dn.walk_from_N_to_N", false, e.what());
      }
    }
  } catch (const std::exception& e) {
    add("dn.partition", false, e.what());
  }

  try {
    BlockDigraph star = bracket_digraph(*dn, words);
    cert.dn_star = verify_thue(star, reading);
    detail::certify_thue(cert, "dn_star", *cert.dn_star);
  } catch (const std::exception& e) {
    add("dn_star.build", false, e.what());
  }

  Word bracketed = words.prefix + words.seed + words.suffix;
  if (is_square_free(bracketed)) {
    cert.bracketed_report = classify(bracketed, abc);
    add("bracketed.extremal", cert.bracketed_report->status == ExtensionStatus::extremal,
        std::to_string(cert.bracketed_report->square_free_extensions.size()) +
            " square-free extensions");
  } else {
    add("bracketed.extremal", false, "P·N·S is not square-free");
  }

  Word shortest = words.shortest_extremal;
  add("shortest.extremal", is_square_free(shortest) && !has_square_free_extension(shortest, 3));
  return cert;
}

}  // namespace sqfree
