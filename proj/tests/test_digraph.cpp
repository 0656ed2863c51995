#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sqfree/construction.hpp"
#include "sqfree/digraph.hpp"

using namespace sqfree;

namespace {

const Alphabet abc = Alphabet::canonical(3);

Word w(std::string_view s) { return Word::from_string(s); }

std::vector<Word> blocks_of(std::initializer_list<std::string_view> list) {
  std::vector<Word> out;
  for (auto s : list) out.push_back(w(s));
  return out;
}

// Random square-free walk of at most `max_len` vertices, grown by appending.
Walk random_walk(const BlockDigraph& d, std::mt19937_64& rng, std::size_t max_len) {
  Walk walk{static_cast<vertex_id>(rng() % d.size())};
  std::size_t target = 1 + rng() % max_len;
  while (walk.size() < target) {
    const auto& next = d.successors(walk.back());
    std::vector<vertex_id> ok;
    for (vertex_id v : next)
      if (square_free_after_append(walk, v)) ok.push_back(v);
    if (ok.empty()) break;
    walk.push_back(ok[rng() % ok.size()]);
  }
  return walk;
}

}  // namespace

TEST(BlockDigraph, RejectsInvalidInput) {
  BlockDigraph d(abc);
  EXPECT_THROW(d.add_vertex("e", w("")), digraph_error);
  EXPECT_THROW(d.add_vertex("s", w("aa")), digraph_error);
  EXPECT_THROW(d.add_vertex("x", w("abd")), digraph_error);
  EXPECT_THROW(d.add_vertex("two words", w("a")), digraph_error);
  auto u = d.add_vertex("u", w("ab"));
  EXPECT_THROW(d.add_vertex("u", w("a")), digraph_error);
  EXPECT_THROW(d.add_edge(u, u), digraph_error);
  EXPECT_THROW(d.add_edge(u, 7), digraph_error);
}

TEST(Image, Concatenation) {
  BlockDigraph d(abc);
  auto u = d.add_vertex("u", w("ab"));
  auto v = d.add_vertex("v", w("c"));
  d.add_edge(u, v);
  EXPECT_EQ(image(d, {u}), w("ab"));
  EXPECT_EQ(image(d, {u, v}), w("abc"));
  EXPECT_THROW(image(d, {v, u}), digraph_error);
}

TEST(Walks, SquareFreeness) {
  EXPECT_TRUE(is_square_free_walk({0, 1, 0}));
  EXPECT_FALSE(is_square_free_walk({0, 1, 0, 1}));
  EXPECT_TRUE(is_square_free_walk({0}));
}

TEST(ConditionShortWalks, Violations) {
  BlockDigraph twin(abc);
  auto u = twin.add_vertex("u", w("ab"));
  auto v = twin.add_vertex("v", w("ab"));
  twin.add_edge(u, v);
  auto found = check_condition_short_walks(twin);
  ASSERT_FALSE(found.empty());
  EXPECT_EQ(found.front().walk, (Walk{u, v}));

  BlockDigraph d(abc);
  auto a = d.add_vertex("u", w("aba"));
  auto b = d.add_vertex("v", w("cab"));
  auto c = d.add_vertex("w", w("acb"));
  d.add_edge(a, b);
  d.add_edge(b, c);
  found = check_condition_short_walks(d);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].walk, (Walk{a, b, c}));
  EXPECT_EQ(image(d, found[0].walk), w("abacabacb"));
  EXPECT_EQ(found[0].square.start, 0u);
  EXPECT_EQ(found[0].square.half_length, 4u);
  EXPECT_TRUE(revalidate(d, found[0]));
}

TEST(ConditionFactors, Examples) {
  auto v = check_condition_factors(blocks_of({"ab", "bab"}));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].inner, 0u);
  EXPECT_EQ(v[0].outer, 1u);
  EXPECT_TRUE(check_condition_factors(blocks_of({"abc", "bca"})).empty());
}

TEST(ConditionSplices, Readings) {
  auto two = blocks_of({"abc", "acb"});
  // X = "a" from abc, Y' = "cb" from acb spells acb.
  EXPECT_FALSE(check_condition_splices(two, SpliceReading::whole_block).empty());
  EXPECT_TRUE(check_condition_splices(two, SpliceReading::source_block).empty());
  auto one = blocks_of({"ab"});
  EXPECT_TRUE(check_condition_splices(one, SpliceReading::whole_block).empty());
  EXPECT_TRUE(check_condition_splices(one, SpliceReading::source_block).empty());
  // A third block reproduced by a splice of two others fails every reading.
  auto three = blocks_of({"abc", "bcb", "acb"});
  for (auto r : {SpliceReading::source_block, SpliceReading::whole_block, SpliceReading::literal})
    EXPECT_FALSE(check_condition_splices(three, r).empty());
}

TEST(ConditionSplices, ViolationsReproduceByStringEquality) {
  auto blocks = blocks_of({"abc", "acb", "bac", "cab", "abcb", "bcb"});
  for (auto r : {SpliceReading::source_block, SpliceReading::whole_block, SpliceReading::literal}) {
    auto found = check_condition_splices(blocks, r);
    for (const auto& v : found) EXPECT_TRUE(revalidate(blocks, v));
    // Brute-force count over every split of every ordered pair.
    std::size_t expected = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i)
      for (std::size_t j = 0; j < blocks.size(); ++j) {
        if (i == j) continue;
        for (std::size_t x = 0; x <= blocks[i].size(); ++x)
          for (std::size_t y = 0; y <= blocks[j].size(); ++y)
            for (auto kind : {SpliceKind::prefix_suffix, SpliceKind::suffix_prefix}) {
              Word s = splice(blocks[i], blocks[j], x, y, kind);
              for (std::size_t k = 0; k < blocks.size(); ++k)
                if (s == blocks[k] && !detail::splice_tolerated(r, blocks, {i, j, x, y, kind, k}))
                  ++expected;
            }
      }
    EXPECT_EQ(found.size(), expected) << to_string(r);
  }
}

TEST(VerifyThue, SmallDigraphs) {
  BlockDigraph d(abc);
  auto u = d.add_vertex("u", w("ab"));
  auto v = d.add_vertex("v", w("bab"));
  d.add_edge(u, v);
  auto cert = verify_thue(d);
  EXPECT_FALSE(cert.factors_pass());
  EXPECT_FALSE(cert.passes());
}

TEST(VerifyThue, SoundnessSamplingOnDn) {
  const auto& c = default_construction();
  ASSERT_TRUE(verify_thue(c.dn).passes());
  std::mt19937_64 rng(17);
  for (int i = 0; i < 10000; ++i) {
    Walk walk = random_walk(c.dn, rng, 30);
    ASSERT_TRUE(is_square_free_walk(walk));
    std::string s = image(c.dn, walk).to_string();
    // Full quadratic oracle on a sample, library check on the rest.
    if (i % 50 == 0) ASSERT_TRUE(oracle::square_free(s)) << i;
    else ASSERT_TRUE(is_square_free(image(c.dn, walk))) << i;
  }
}

TEST(Partition, BlockPartitionOnDn) {
  const auto& c = default_construction();
  auto check = verify_partition(c.dn, c.partition);
  ASSERT_TRUE(check.passes());
  for (vertex_id v = 0; v < c.dn.size(); ++v)
    for (std::uint8_t j = 0; j < class_count; ++j) {
      const auto& path = check.paths[v][j];
      ASSERT_TRUE(path);
      EXPECT_TRUE(path_is_valid(c.dn, c.partition, v, j, *path));
      EXPECT_GE(path->size(), 2u);
      EXPECT_EQ(path->front(), v);
      EXPECT_EQ(c.partition.class_of[path->back()], j);
      for (std::size_t i = 1; i + 1 < path->size(); ++i)
        EXPECT_EQ(c.partition.class_of[(*path)[i]], c.partition.class_of[v]);
    }
}

TEST(Partition, FailureCases) {
  BlockDigraph d(abc);
  auto a = d.add_vertex("a", w("a"));
  auto b = d.add_vertex("b", w("b"));
  auto c = d.add_vertex("c", w("c"));
  d.add_vertex("lonely", w("ab"));
  d.add_edge(a, b);
  d.add_edge(b, c);
  d.add_edge(c, a);
  auto p = ClassPartition::from_names(d, {{{"a", "lonely"}, {"b"}, {"c"}}});
  EXPECT_FALSE(verify_partition(d, p).passes());
  // A partition missing a vertex does not cover the digraph.
  auto partial = ClassPartition::from_names(d, {{{"a"}, {"b"}, {"c"}}});
  EXPECT_FALSE(verify_partition(d, partial).covers);
  EXPECT_THROW(ClassPartition::from_names(d, {{{"a"}, {"a"}, {"c"}}}), digraph_error);

  // Merging two classes of the block partition removes every path into one class.
  const auto& con = default_construction();
  ClassPartition merged = con.partition;
  for (auto& x : merged.class_of)
    if (x == 2) x = 1;
  EXPECT_FALSE(verify_partition(con.dn, merged).passes());
}

TEST(DriverWord, Examples) {
  EXPECT_EQ(driver_word(1, 1, 1), Word{1});
  Word d12 = driver_word(12);
  EXPECT_TRUE(is_square_free(d12));
  EXPECT_EQ(d12, ternary_fixed_point_prefix(12));
  Word d5 = driver_word(5, 1, 1);
  EXPECT_EQ(d5.size(), 5u);
  EXPECT_EQ(d5[0], 1);
  EXPECT_EQ(d5[4], 1);
  EXPECT_TRUE(is_square_free(d5));
  EXPECT_THROW(driver_word(2, 0, 0), word_error);
  EXPECT_THROW(driver_word(0), word_error);
}

TEST(DriverWord, FixedPointPrefixIsSquareFree) {
  std::string t = ternary_fixed_point_prefix(300).to_string();
  EXPECT_TRUE(oracle::square_free(t));
  EXPECT_EQ(t.substr(0, 12), "abcacbabcbac");
}

TEST(DriverWord, PropertiesUpToTenThousand) {
  std::mt19937_64 rng(23);
  std::vector<std::size_t> lengths{1, 2, 3, 4, 5, 10, 31, 100, 999, 10000};
  for (int i = 0; i < 40; ++i) lengths.push_back(1 + rng() % 10000);
  for (std::size_t n : lengths)
    for (letter first = 0; first < 3; ++first)
      for (letter last = 0; last < 3; ++last) {
        if (n == 1 && first != last) continue;
        if (n == 2 && first == last) continue;
        Word t = driver_word(n, first, last);
        ASSERT_EQ(t.size(), n);
        ASSERT_EQ(t[0], first);
        ASSERT_EQ(t[n - 1], last);
        ASSERT_TRUE(is_square_free(t)) << n;
      }
}

TEST(Substitution, Examples) {
  // Classes: 'x' -> 0, 'y' -> 1, others by table.
  auto cls = [](char c) -> int {
    switch (c) {
      case 'x': case 'p': case 'q': return 0;
      case 'y': case 'r': case 's': return 1;
      default: return 2;
    }
  };
  auto out = substituted_word<char>(Word{0, 1, 0}, {{'x'}, {'y'}, {'x'}}, cls);
  EXPECT_EQ(std::string(out.begin(), out.end()), "xyx");
  out = substituted_word<char>(Word{0, 1}, {{'p', 'q'}, {'r', 's'}}, cls);
  EXPECT_EQ(std::string(out.begin(), out.end()), "pqrs");
  EXPECT_THROW(substituted_word<char>(Word{0, 1}, {{'p', 'p'}, {'r'}}, cls), word_error);
  EXPECT_THROW(substituted_word<char>(Word{0, 1}, {{'r'}, {'p'}}, cls), word_error);
  EXPECT_THROW(substituted_word<char>(Word{0, 0}, {{'p'}, {'q'}}, cls), word_error);
}

TEST(Substitution, RandomInputsAreSquareFree) {
  std::mt19937_64 rng(29);
  // Class c owns letters 'a' + 5c .. 'a' + 5c + 4.
  auto cls = [](char c) { return (c - 'a') / 5; };
  for (int i = 0; i < 10000; ++i) {
    std::size_t n = 1 + rng() % 20;
    Word t = driver_word(n, static_cast<letter>(rng() % 3));
    std::vector<std::vector<char>> pieces;
    for (letter x : t) {
      std::string pool;
      for (int j = 0; j < 5; ++j) pool.push_back(static_cast<char>('a' + 5 * x + j));
      std::shuffle(pool.begin(), pool.end(), rng);
      pool.resize(1 + rng() % 5);
      pieces.emplace_back(pool.begin(), pool.end());
    }
    auto out = substituted_word<char>(t, pieces, cls);
    ASSERT_TRUE(oracle::square_free(std::string(out.begin(), out.end())));
  }
}

TEST(LongWalk, Examples) {
  const auto& c = default_construction();
  vertex_id n = c.dn.require("N");
  EXPECT_EQ(long_square_free_walk(c.dn, c.partition, {1, n, n}), (Walk{n}));
  Walk fifty = long_square_free_walk(c.dn, c.partition, {50, std::nullopt, std::nullopt});
  EXPECT_GE(fifty.size(), 50u);
  EXPECT_TRUE(is_square_free_walk(fifty));
  EXPECT_NO_THROW(c.dn.check_walk(fifty));
  Walk nn = long_square_free_walk(c.dn, c.partition, {20, n, n});
  EXPECT_GE(nn.size(), 20u);
  EXPECT_EQ(nn.front(), n);
  EXPECT_EQ(nn.back(), n);
  EXPECT_TRUE(is_square_free_walk(nn));
}

TEST(LongWalk, HonoursEveryRequest) {
  const auto& c = default_construction();
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    WalkRequest r{1 + rng() % 300, std::nullopt, std::nullopt};
    if (rng() % 2) r.start = static_cast<vertex_id>(rng() % c.dn.size());
    if (rng() % 2) r.end = static_cast<vertex_id>(rng() % c.dn.size());
    Walk walk;
    try {
      walk = long_square_free_walk(c.dn, c.partition, r);
    } catch (const digraph_error&) {
      // Only a too-short request with fixed endpoints may be unsatisfiable.
      ASSERT_TRUE(r.start && r.end && r.min_blocks <= 2);
      continue;
    }
    ASSERT_GE(walk.size(), r.min_blocks);
    ASSERT_TRUE(is_square_free_walk(walk));
    ASSERT_NO_THROW(c.dn.check_walk(walk));
    if (r.start) {
      ASSERT_EQ(walk.front(), *r.start);
    }
    if (r.end) {
      ASSERT_EQ(walk.back(), *r.end);
    }
  }
}
