// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Time limits are wall-clock and pinned below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "sqfree/construction.hpp"
#include "sqfree/explorer.hpp"
#include "sqfree/nonchalant.hpp"

using namespace sqfree;
using namespace std::chrono_literals;

namespace {

const Alphabet abc = Alphabet::canonical(3);

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  std::chrono::duration<double> limit;
  std::function<Outcome()> body;
};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
  return out;
}

// -------------------------------------------------------------------------

Outcome canonical_words_regression() {
  std::vector<std::string> notes;
  bool ok = true;
  auto c = canonical_words();
  auto h = classify(c.shortest_extremal, abc);
  ok &= h.status == ExtensionStatus::extremal;
  notes.push_back("H " + std::string(to_string(h.status)));

  auto n = classify(c.seed, abc);
  std::vector<Extension> expected{{0, 2}, {41, 0}};
  ok &= n.status == ExtensionStatus::nearly_extremal && n.square_free_extensions == expected;
  std::string ext;
  for (auto e : n.square_free_extensions) ext += " " + std::to_string(e.position) + ":" + abc.symbol(e.symbol);
  notes.push_back("N " + std::string(to_string(n.status)) + " {" + ext + " }");

  Word pns = c.prefix + c.seed + c.suffix;
  auto b = classify(pns, abc);
  ok &= pns.size() == 102 && b.status == ExtensionStatus::extremal;
  notes.push_back("PNS length " + std::to_string(pns.size()) + " " + std::string(to_string(b.status)));

  // The prefix is used in the orientation that makes PN square-free.
  Word flipped = reverse(c.prefix) + c.seed;
  if (auto sq = find_square(flipped))
    notes.push_back("prefix read backwards meets N in a square at " + std::to_string(sq->start) +
                    " (half-length " + std::to_string(sq->half_length) + ")");
  return {ok, join(notes)};
}

Outcome twelve_blocks() {
  auto family = make_blocks(canonical_words().seed);
  std::size_t good = 0;
  for (const auto& b : family)
    if (b.block.size() == 41 && is_square_free(b.block) &&
        classify(b.block, abc).status == ExtensionStatus::nearly_extremal)
      ++good;
  return {family.size() == 12 && good == 12,
          std::to_string(good) + "/" + std::to_string(family.size()) +
              " blocks of length 41, square-free, NEARLY_EXTREMAL"};
}

Outcome digraph_certificates() {
  auto family = make_blocks(canonical_words().seed);
  BlockDigraph dn = reconstruct_block_digraph(family);
  auto thue = verify_thue(dn);
  auto partition = verify_partition(dn, block_partition(dn));
  BlockDigraph star = bracket_digraph(dn, canonical_words());
  auto thue_star = verify_thue(star);
  auto whole = check_condition_splices(dn.blocks(), SpliceReading::whole_block);
  std::ostringstream d;
  d << "D_N " << dn.size() << " vertices, " << dn.edge_count() << " edges; "
    << "short walks " << thue.short_walks.size() << ", factors " << thue.factors.size()
    << ", splices " << thue.splices.size() << " (" << to_string(thue.reading) << ")"
    << "; partition " << (partition.passes() ? "ok" : "fails") << "; D_N* "
    << (thue_star.passes() ? "ok" : "fails") << "; info: whole-block splice reading reports "
    << whole.size() << " splices";
  return {thue.passes() && partition.passes() && thue_star.passes(), d.str()};
}

Outcome generator_soundness() {
  std::vector<std::string> notes;
  bool ok = true;
  for (std::size_t len : {200u, 1000u, 5000u}) {
    auto e = generate_extremal(len);
    auto s = classify(e.word, abc).status;
    ok &= e.word.size() >= len && s == ExtensionStatus::extremal;
    notes.push_back("extremal " + std::to_string(len) + "->" + std::to_string(e.word.size()) +
                    " " + std::string(to_string(s)));
    auto n = generate_nearly_extremal(len);
    s = classify(n.word, abc).status;
    ok &= n.word.size() >= len && s == ExtensionStatus::nearly_extremal;
    notes.push_back("nearly " + std::to_string(len) + "->" + std::to_string(n.word.size()) + " " +
                    std::string(to_string(s)));
  }
  return {ok, join(notes)};
}

Outcome nonchalant_regression() {
  auto head = run_nonchalant(3, 8);
  std::vector<std::string> expected{"a", "ab", "aba", "abac", "abaca", "abacab", "abacaba", "abacabca"};
  std::vector<std::string> got;
  for (const auto& w : head.words()) got.push_back(w.to_string());
  auto run = run_nonchalant(3, 10000);
  bool ok = got == expected && !run.terminated && run.word_count() == 10000 &&
            is_square_free(run.last);
  return {ok, "first 8 words " + std::string(got == expected ? "match" : "differ") + "; " +
                  std::to_string(run.word_count()) + " words, " +
                  (run.terminated ? "terminated" : "no termination")};
}

Outcome ternary_minimality() {
  auto single = exhaustive_search(3, 25);
  SearchOptions parallel;
  parallel.threads = std::max(2u, std::thread::hardware_concurrency());
  auto multi = exhaustive_search(3, 25, parallel);
  bool none_shorter = true, found_25 = false;
  for (const auto& w : single.extremal) {
    if (w.size() <= 24) none_shorter = false;
    if (w.size() == 25) found_25 = true;
  }
  std::ostringstream d;
  d << single.extremal.size() << " canonical extremal words of length <= 25, shortest "
    << (single.shortest_extremal_length() ? std::to_string(*single.shortest_extremal_length()) : "none")
    << "; " << single.nodes << " nodes; report at " << parallel.threads << " threads "
    << (single == multi ? "identical" : "DIFFERS");
  return {none_shorter && found_25 && single == multi, d.str()};
}

Outcome four_letter_analogue() {
  auto exact = exhaustive_search(4, 14);
  auto probe = probe_extremal(4, 1000, ProbeStrategy::random_walk, 1'000'000);
  std::ostringstream d;
  d << "exhaustive to 14: " << exact.extremal.size() << " extremal (" << exact.nodes
    << " nodes); random-walk probe to 1000: " << probe.extremal.size() << " extremal, "
    << probe.words_tested << " words tested, " << probe.extension_checks << " checks";
  return {exact.extremal.empty() && probe.extremal.empty(), d.str()};
}

Outcome property_suites() {
  std::mt19937_64 rng(0xac8);
  std::size_t fail_a = 0, fail_b = 0, fail_c = 0, fail_d = 0;

  // (a) incremental insertion check against a full re-check.
  for (int i = 0; i < 10000; ++i) {
    std::size_t k = 2 + rng() % 3;
    std::vector<letter> w;
    std::size_t target = rng() % 120;
    for (std::size_t tries = 0; w.size() < target && tries < 4 * target; ++tries) {
      letter x = static_cast<letter>(rng() % k);
      if (square_free_after_append(w, x)) w.push_back(x);
    }
    Word word(w);
    Extension e{rng() % (w.size() + 1), static_cast<letter>(rng() % k)};
    bool fast = is_square_free_after_insert(word, e, Alphabet::canonical(k));
    Word full = apply_extension(word, e, Alphabet::canonical(k));
    bool slow = i % 10 == 0 ? oracle::square_free(full.to_string()) : is_square_free(full);
    fail_a += fast != slow;
  }

  // (b) substitution of distinct-letter pieces along square-free drivers.
  auto cls = [](char c) { return (c - 'a') / 5; };
  for (int i = 0; i < 10000; ++i) {
    Word t = driver_word(1 + rng() % 20, static_cast<letter>(rng() % 3));
    std::vector<std::vector<char>> pieces;
    for (letter x : t) {
      std::string pool;
      for (int j = 0; j < 5; ++j) pool.push_back(static_cast<char>('a' + 5 * x + j));
      std::shuffle(pool.begin(), pool.end(), rng);
      pool.resize(1 + rng() % 5);
      pieces.emplace_back(pool.begin(), pool.end());
    }
    auto out = substituted_word<char>(t, pieces, cls);
    fail_b += !oracle::square_free(std::string(out.begin(), out.end()));
  }

  // (c) images of random square-free walks in D_N.
  const auto& c = default_construction();
  for (int i = 0; i < 10000; ++i) {
    Walk walk{static_cast<vertex_id>(rng() % c.dn.size())};
    std::size_t target = 1 + rng() % 30;
    while (walk.size() < target) {
      std::vector<vertex_id> ok;
      for (vertex_id v : c.dn.successors(walk.back()))
        if (square_free_after_append(walk, v)) ok.push_back(v);
      if (ok.empty()) break;
      walk.push_back(ok[rng() % ok.size()]);
    }
    Word img = image(c.dn, walk);
    fail_c += !is_square_free(img) || classify(img, abc).status != ExtensionStatus::nearly_extremal;
  }

  // (d) small censuses.
  fail_d += census_square_free(3, 3) != std::vector<std::uint64_t>{3, 6, 12};
  fail_d += oracle::census(3, 3) != std::vector<std::uint64_t>{3, 6, 12};
  auto binary = census_square_free(2, 8);
  std::size_t longest = 0;
  for (std::size_t i = 0; i < binary.size(); ++i)
    if (binary[i]) longest = i + 1;
  fail_d += longest != 3;
  fail_d += oracle::census(2, 8) != binary;

  std::ostringstream d;
  d << "failures: (a) " << fail_a << ", (b) " << fail_b << ", (c) " << fail_c << ", (d) " << fail_d
    << "; longest binary square-free word " << longest;
  return {fail_a + fail_b + fail_c + fail_d == 0, d.str()};
}

Outcome mutation_sensitivity() {
  const auto base = canonical_words();
  std::size_t total = 0, silent = 0, broke_square = 0, broke_extensions = 0;
  for (std::size_t i = 0; i < base.seed.size(); ++i)
    for (letter x = 0; x < 3; ++x) {
      if (base.seed[i] == x) continue;
      ++total;
      CanonicalWords m = base;
      auto letters = m.seed.letters();
      letters[i] = x;
      m.seed = Word(letters);
      auto cert = certify_construction(m);
      if (cert.passes()) {
        ++silent;
        continue;
      }
      if (!cert.find("seed.square_free")->passed) ++broke_square;
      else ++broke_extensions;
    }
  std::ostringstream d;
  d << total << " mutations: " << broke_square << " break square-freeness, " << broke_extensions
    << " fail a later check, " << silent << " silent passes";
  return {total == 82 && silent == 0, d.str()};
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {"AC1", "canonical words", 1s, canonical_words_regression},
      {"AC2", "twelve blocks", 1s, twelve_blocks},
      {"AC3", "block digraph certificates", 300s, digraph_certificates},
      {"AC4", "generator soundness", 120s, generator_soundness},
      {"AC5", "nonchalant regression", 300s, nonchalant_regression},
      {"AC6", "ternary minimality", 600s, ternary_minimality},
      {"AC7", "four-letter analogue", 900s, four_letter_analogue},
      {"AC8", "property suites", 600s, property_suites},
      {"AC9", "mutation sensitivity", 600s, mutation_sensitivity},
  };
  // Build the shared construction outside the timed criteria.
  (void)default_construction();

  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    bool in_time = took <= c.limit;
    bool pass = o.passed && in_time;
    failed += !pass;
    std::printf("%s %s %s (%.3f s, limit %.0f s%s): %s\n", pass ? "PASS" : "FAIL", c.id.c_str(),
                c.title.c_str(), took.count(), c.limit.count(), in_time ? "" : ", TOO SLOW",
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
