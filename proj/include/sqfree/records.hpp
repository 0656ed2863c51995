#pragma once

// Text and JSON forms of words, digraphs, certificates, reports and
// checkpoints. Every JSON record carries a "schema" tag; the matching JSON
// Schema documents live in docs/schemas/.

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sqfree/construction.hpp"
#include "sqfree/digraph.hpp"
#include "sqfree/explorer.hpp"
#include "sqfree/nonchalant.hpp"
#include "sqfree/word.hpp"

namespace sqfree {

using json = nlohmann::json;

class format_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace schema {
inline constexpr std::string_view extension_report = "sqfree.extension-report/1";
inline constexpr std::string_view square = "sqfree.square/1";
inline constexpr std::string_view thue_certificate = "sqfree.thue-certificate/1";
inline constexpr std::string_view construction_certificate = "sqfree.construction-certificate/1";
inline constexpr std::string_view generated_word = "sqfree.generated-word/1";
inline constexpr std::string_view nonchalant_checkpoint = "sqfree.nonchalant-checkpoint/1";
inline constexpr std::string_view nonchalant_summary = "sqfree.nonchalant-summary/1";
inline constexpr std::string_view search_report = "sqfree.search-report/1";
inline constexpr std::string_view search_checkpoint = "sqfree.search-checkpoint/1";
inline constexpr std::string_view probe_report = "sqfree.probe-report/1";
}  // namespace schema

// ---------------------------------------------------------------------------
// Words: one per line, an empty line is the empty word.

inline std::vector<Word> read_words(std::istream& in, const Alphabet& alphabet) {
  std::vector<Word> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(parse_word(line, alphabet));
  }
  return out;
}

inline void write_words(std::ostream& out, const std::vector<Word>& words,
                        const Alphabet& alphabet) {
  for (const auto& w : words) out << format_word(w, alphabet) << '\n';
}

// ---------------------------------------------------------------------------
// Digraph text format
//
//   alphabet: abc
//   <id> <name> <block>
//   edge <id> <id>
//
// Ids are 0, 1, ... in order; '#' starts a comment.

inline void write_digraph(std::ostream& out, const BlockDigraph& d) {
  out << "alphabet: " << d.alphabet().symbols() << '\n';
  for (vertex_id v = 0; v < d.size(); ++v)
    out << v << ' ' << d.vertex(v).name << ' ' << format_word(d.block(v), d.alphabet()) << '\n';
  for (auto [u, v] : d.edges()) out << "edge " << u << ' ' << v << '\n';
}

inline BlockDigraph read_digraph(std::istream& in) {
  std::optional<BlockDigraph> d;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> format_error {
    return format_error("digraph line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string head;
    if (!(fields >> head)) continue;
    std::string extra;
    if (head == "alphabet:") {
      std::string symbols;
      if (d || !(fields >> symbols) || (fields >> extra)) throw fail("bad alphabet header");
      try {
        d.emplace(Alphabet(symbols));
      } catch (const std::exception& e) {
        throw fail(e.what());
      }
      continue;
    }
    if (!d) throw fail("missing 'alphabet:' header");
    try {
      if (head == "edge") {
        long long u = -1, v = -1;
        if (!(fields >> u >> v) || (fields >> extra) || u < 0 || v < 0)
          throw fail("expected 'edge <id> <id>'");
        if (static_cast<std::size_t>(u) >= d->size() || static_cast<std::size_t>(v) >= d->size())
          throw fail("edge refers to an unknown vertex");
        d->add_edge(static_cast<vertex_id>(u), static_cast<vertex_id>(v));
      } else {
        std::size_t id = 0;
        try {
          std::size_t used = 0;
          id = std::stoul(head, &used);
          if (used != head.size()) throw fail("bad vertex id '" + head + "'");
        } catch (const std::logic_error&) {
          throw fail("bad vertex id '" + head + "'");
        }
        std::string name, block;
        if (!(fields >> name >> block) || (fields >> extra))
          throw fail("expected '<id> <name> <block>'");
        if (id != d->size()) throw fail("vertex ids must be consecutive from 0");
        d->add_vertex(name, parse_word(block, d->alphabet()));
      }
    } catch (const format_error&) {
      throw;
    } catch (const std::exception& e) {
      throw fail(e.what());
    }
  }
  if (!d) throw format_error("digraph: empty input");
  return std::move(*d);
}

inline BlockDigraph load_digraph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw format_error("cannot open " + path);
  return read_digraph(in);
}

// ---------------------------------------------------------------------------
// JSON records

inline json extension_json(const Extension& e, const Alphabet& alphabet) {
  return {{"position", e.position}, {"symbol", std::string(1, alphabet.symbol(e.symbol))}};
}

inline json to_json(const ExtensionReport& r, const Alphabet& alphabet) {
  json ext = json::array();
  for (const auto& e : r.square_free_extensions) ext.push_back(extension_json(e, alphabet));
  return {{"schema", schema::extension_report},
          {"word", format_word(r.word, alphabet)},
          {"length", r.word.size()},
          {"alphabet", alphabet.symbols()},
          {"status", to_string(r.status)},
          {"extensions", std::move(ext)}};
}

inline ExtensionReport extension_report_from_json(const json& j, const Alphabet& alphabet) {
  ExtensionReport r;
  r.word = parse_word(j.at("word").get<std::string>(), alphabet);
  for (const auto& e : j.at("extensions")) {
    auto sym = e.at("symbol").get<std::string>();
    auto x = sym.size() == 1 ? alphabet.index_of(sym[0]) : std::nullopt;
    if (!x) throw format_error("bad extension symbol '" + sym + "'");
    r.square_free_extensions.push_back({e.at("position").get<std::size_t>(), *x});
  }
  r.status = status_of(r.square_free_extensions, r.word.size());
  if (j.at("status").get<std::string>() != to_string(r.status))
    throw format_error("status does not match extensions");
  return r;
}

inline json to_json(const SquareWitness& s) {
  return {{"start", s.start}, {"half_length", s.half_length}};
}

inline json square_json(const Word& w, const SquareWitness& s, const Alphabet& alphabet) {
  return {{"schema", schema::square},
          {"word", format_word(w, alphabet)},
          {"square_free", false},
          {"square", to_json(s)}};
}

inline json to_json(const ThueCertificate& t, const BlockDigraph& d) {
  json walks = json::array();
  for (const auto& v : t.short_walks) {
    json names = json::array();
    for (vertex_id x : v.walk) names.push_back(d.vertex(x).name);
    walks.push_back({{"walk", names}, {"square", to_json(v.square)}});
  }
  json factors = json::array();
  for (const auto& f : t.factors)
    factors.push_back({{"inner", d.vertex(static_cast<vertex_id>(f.inner)).name},
                       {"outer", d.vertex(static_cast<vertex_id>(f.outer)).name}});
  json splices = json::array();
  for (const auto& s : t.splices)
    splices.push_back({{"first", d.vertex(static_cast<vertex_id>(s.first)).name},
                       {"second", d.vertex(static_cast<vertex_id>(s.second)).name},
                       {"first_split", s.first_split},
                       {"second_split", s.second_split},
                       {"kind", to_string(s.kind)},
                       {"equals", d.vertex(static_cast<vertex_id>(s.matched)).name}});
  return {{"schema", schema::thue_certificate},
          {"splice_reading", to_string(t.reading)},
          {"short_walks", {{"pass", t.short_walks_pass()}, {"violations", walks}}},
          {"factors", {{"pass", t.factors_pass()}, {"violations", factors}}},
          {"splices", {{"pass", t.splices_pass()}, {"violations", splices}}},
          {"pass", t.passes()}};
}

inline json to_json(const PartitionCheck& p, const BlockDigraph& d) {
  json paths = json::array();
  for (vertex_id v = 0; v < p.paths.size(); ++v)
    for (std::size_t j = 0; j < class_count; ++j) {
      json entry{{"from", d.vertex(v).name}, {"to_class", j + 1}};
      if (p.paths[v][j]) {
        json names = json::array();
        for (vertex_id x : *p.paths[v][j]) names.push_back(d.vertex(x).name);
        entry["path"] = std::move(names);
      } else {
        entry["path"] = nullptr;
      }
      paths.push_back(std::move(entry));
    }
  return {{"covers", p.covers}, {"pass", p.passes()}, {"paths", std::move(paths)}};
}

inline json to_json(const ConstructionCertificate& c, const BlockDigraph* dn,
                    const BlockDigraph* dn_star) {
  const Alphabet abc = Alphabet::canonical(3);
  json checks = json::array();
  for (const auto& check : c.checks)
    checks.push_back({{"name", check.name}, {"pass", check.passed}, {"detail", check.detail}});
  json blocks = json::array();
  for (const auto& [name, status] : c.block_status)
    blocks.push_back({{"name", name}, {"status", to_string(status)}});
  json out{{"schema", schema::construction_certificate},
           {"pass", c.passes()},
           {"checks", std::move(checks)},
           {"blocks", std::move(blocks)}};
  out["seed"] = c.seed_report ? to_json(*c.seed_report, abc) : json(nullptr);
  out["bracketed"] = c.bracketed_report ? to_json(*c.bracketed_report, abc) : json(nullptr);
  out["dn"] = c.dn && dn ? to_json(*c.dn, *dn) : json(nullptr);
  out["partition"] = c.partition && dn ? to_json(*c.partition, *dn) : json(nullptr);
  out["dn_star"] = c.dn_star && dn_star ? to_json(*c.dn_star, *dn_star) : json(nullptr);
  return out;
}

inline json to_json(const GeneratedWord& g, std::string_view kind) {
  json out{{"schema", schema::generated_word},
           {"kind", kind},
           {"length", g.word.size()},
           {"blocks", g.blocks},
           {"word", g.word.to_string()}};
  out["status"] = to_string(g.status);
  return out;
}

// Only the steps are stored; words are replayed from them.
inline json checkpoint_json(const NonchalantRun& run) {
  json steps = json::array();
  for (const auto& e : run.steps) steps.push_back({e.position, e.symbol});
  return {{"schema", schema::nonchalant_checkpoint},
          {"k", run.k},
          {"terminated", run.terminated},
          {"steps", std::move(steps)}};
}

inline NonchalantRun run_from_checkpoint(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != schema::nonchalant_checkpoint)
      throw format_error("not a nonchalant checkpoint");
    std::size_t k = j.at("k").get<std::size_t>();
    if (k == 0 || k > 26) throw format_error("checkpoint alphabet size out of range");
    std::vector<Extension> steps;
    for (const auto& s : j.at("steps")) {
      if (!s.is_array() || s.size() != 2) throw format_error("bad checkpoint step");
      auto symbol = s[1].get<std::size_t>();
      if (symbol >= k) throw format_error("checkpoint step symbol out of range");
      steps.push_back({s[0].get<std::size_t>(), static_cast<letter>(symbol)});
    }
    NonchalantRun run = replay_nonchalant(k, steps);
    if (j.value("terminated", false)) extend_nonchalant(run, run.word_count() + 1);
    return run;
  } catch (const json::exception& e) {
    throw format_error(std::string("bad checkpoint: ") + e.what());
  } catch (const word_error& e) {
    throw format_error(std::string("bad checkpoint: ") + e.what());
  }
}

inline json to_json(const NonchalantStatistics& s, std::size_t k) {
  json positions = json::object();
  for (auto [p, c] : s.positions) positions[std::to_string(p)] = c;
  json suffixes = json::object();
  for (auto [l, c] : s.suffix_lengths) suffixes[std::to_string(l)] = c;
  return {{"schema", schema::nonchalant_summary},
          {"k", k},
          {"words", s.lengths.size()},
          {"final_length", s.lengths.empty() ? 0 : s.lengths.back()},
          {"terminated", s.terminated},
          {"insertion_positions", std::move(positions)},
          {"suffix_lengths", std::move(suffixes)},
          {"letter_frequency", s.letter_frequency}};
}

inline json to_json(const SearchReport& r) {
  json extremal = json::array();
  for (const auto& w : r.extremal)
    extremal.push_back({{"word", w.to_string()}, {"length", w.size()}});
  json out{{"schema", schema::search_report},
           {"k", r.k},
           {"max_length", r.max_length},
           {"symmetry_reduction", r.symmetry_reduction},
           {"canonical_counts", r.canonical_counts},
           {"counts", r.counts},
           {"extremal", std::move(extremal)},
           {"nodes", r.nodes},
           {"extension_checks", r.extension_checks},
           {"wall_seconds", r.wall_seconds}};
  auto shortest = r.shortest_extremal_length();
  out["shortest_extremal_length"] = shortest ? json(*shortest) : json(nullptr);
  return out;
}

inline json to_json(const SubtreeResult& r) {
  json extremal = json::array();
  for (const auto& w : r.extremal) extremal.push_back(w.to_string());
  return {{"canonical_counts", r.canonical_counts},
          {"counts", r.counts},
          {"extremal", std::move(extremal)},
          {"nodes", r.nodes},
          {"extension_checks", r.extension_checks}};
}

inline SubtreeResult subtree_from_json(const json& j) {
  SubtreeResult r;
  r.canonical_counts = j.at("canonical_counts").get<std::vector<std::uint64_t>>();
  r.counts = j.at("counts").get<std::vector<std::uint64_t>>();
  for (const auto& w : j.at("extremal")) r.extremal.push_back(Word::from_string(w.get<std::string>()));
  r.nodes = j.at("nodes").get<std::uint64_t>();
  r.extension_checks = j.at("extension_checks").get<std::uint64_t>();
  return r;
}

struct SearchCheckpoint {
  std::size_t k = 0;
  std::size_t max_length = 0;
  std::size_t split_depth = 0;
  std::map<std::string, SubtreeResult> completed;
};

inline json to_json(const SearchCheckpoint& c) {
  json done = json::object();
  for (const auto& [prefix, r] : c.completed) done[prefix] = to_json(r);
  return {{"schema", schema::search_checkpoint},
          {"k", c.k},
          {"max_length", c.max_length},
          {"split_depth", c.split_depth},
          {"completed", std::move(done)}};
}

inline SearchCheckpoint search_checkpoint_from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != schema::search_checkpoint)
      throw format_error("not a search checkpoint");
    SearchCheckpoint c{j.at("k").get<std::size_t>(), j.at("max_length").get<std::size_t>(),
                       j.at("split_depth").get<std::size_t>(), {}};
    for (const auto& [prefix, r] : j.at("completed").items())
      c.completed.emplace(prefix, subtree_from_json(r));
    return c;
  } catch (const json::exception& e) {
    throw format_error(std::string("bad search checkpoint: ") + e.what());
  } catch (const word_error& e) {
    throw format_error(std::string("bad search checkpoint: ") + e.what());
  }
}

inline json to_json(const ProbeReport& r) {
  json extremal = json::array();
  for (const auto& w : r.extremal)
    extremal.push_back({{"word", w.to_string()}, {"length", w.size()}});
  return {{"schema", schema::probe_report},
          {"k", r.k},
          {"max_length", r.max_length},
          {"strategy", to_string(r.strategy)},
          {"budget", r.budget},
          {"seed", r.seed},
          {"extension_checks", r.extension_checks},
          {"samples", r.samples},
          {"words_tested", r.words_tested},
          {"longest_tested", r.longest_tested},
          {"exhaustive", r.exhaustive},
          {"extremal", std::move(extremal)}};
}

}  // namespace sqfree
