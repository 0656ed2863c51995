// sqfree: command-line front end for square-free word tools.
//
// Exit codes: 0 success / verified / found, 1 property fails or nothing
// found, 2 usage or input error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqfree/construction.hpp"
#include "sqfree/explorer.hpp"
#include "sqfree/nonchalant.hpp"
#include "sqfree/records.hpp"
#include "sqfree/word.hpp"

namespace fs = std::filesystem;
using namespace sqfree;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_usage = 2;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string format = "text";
  std::size_t threads = 1;
  bool json() const { return format == "json"; }
};

std::string fixtures_dir() {
  if (const char* env = std::getenv("SQFREE_FIXTURES"); env && *env) return env;
#ifdef SQFREE_FIXTURES_DIR
  return SQFREE_FIXTURES_DIR;
#else
  return "fixtures";
#endif
}

// ---------------------------------------------------------------------------
// check

struct CheckOptions {
  std::vector<std::string> words;
  std::string file;
  std::size_t alphabet = 0;
};

int cmd_check(const CheckOptions& opt, const GlobalOptions& global) {
  std::vector<std::string> texts = opt.words;
  if (!opt.file.empty()) {
    std::ifstream in(opt.file);
    if (!in) throw usage_error("cannot open " + opt.file);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      texts.push_back(line);
    }
  }
  if (texts.empty()) throw usage_error("no words given (pass words or --file)");

  int code = exit_ok;
  for (const auto& text : texts) {
    Word w;
    try {
      w = Word::from_string(text);
    } catch (const word_error& e) {
      throw usage_error(e.what());
    }
    std::size_t k = opt.alphabet ? opt.alphabet : std::max<std::size_t>(1, w.letters_used());
    if (w.letters_used() > k)
      throw usage_error("word '" + text + "' uses letters outside a " + std::to_string(k) +
                        "-letter alphabet");
    const Alphabet alphabet = Alphabet::canonical(k);
    const std::string label = texts.size() > 1 ? text + "\t" : "";
    if (auto square = find_square(w)) {
      code = exit_negative;
      if (global.json()) {
        std::cout << square_json(w, *square, alphabet).dump() << '\n';
      } else {
        std::cout << label << "NOT_SQUARE_FREE: square at " << square->start
                  << " (half-length " << square->half_length << ")\n";
      }
      continue;
    }
    auto report = classify(w, alphabet);
    if (global.json()) {
      std::cout << to_json(report, alphabet).dump() << '\n';
      continue;
    }
    std::cout << label << to_string(report.status);
    if (!report.square_free_extensions.empty()) {
      std::cout << ", extensions:";
      for (const auto& e : report.square_free_extensions)
        std::cout << ' ' << e.position << ':' << alphabet.symbol(e.symbol);
    }
    std::cout << '\n';
  }
  return code;
}

// ---------------------------------------------------------------------------
// certify

struct CertifyOptions {
  std::string digraph;
  std::string canonical;
  std::string splice_reading = "source-block";
};

int cmd_certify(const CertifyOptions& opt, const GlobalOptions& global) {
  const std::string dir = fixtures_dir();
  std::string digraph_path = opt.digraph.empty() ? (fs::path(dir) / "dn.digraph").string() : opt.digraph;
  std::string words_path =
      opt.canonical.empty() ? (fs::path(dir) / "canonical_words.txt").string() : opt.canonical;

  SpliceReading reading = SpliceReading::source_block;
  if (opt.splice_reading == "whole-block") reading = SpliceReading::whole_block;
  else if (opt.splice_reading == "literal") reading = SpliceReading::literal;
  else if (opt.splice_reading != "source-block")
    throw usage_error("unknown splice reading '" + opt.splice_reading + "'");

  CanonicalWords words;
  BlockDigraph dn(Alphabet::canonical(3));
  try {
    words = load_canonical_words(words_path);
    dn = load_digraph(digraph_path);
  } catch (const std::exception& e) {
    throw usage_error(e.what());
  }

  auto cert = certify_construction(words, &dn, reading);
  std::optional<BlockDigraph> star;
  try {
    star = bracket_digraph(dn, words);
  } catch (const std::exception&) {
  }
  if (global.json()) {
    std::cout << to_json(cert, &dn, star ? &*star : nullptr).dump(2) << '\n';
  } else {
    for (const auto& c : cert.checks) {
      std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
      if (!c.detail.empty()) std::cout << "  (" << c.detail << ')';
      std::cout << '\n';
    }
    auto witness = [&](const ThueCertificate& t, const BlockDigraph& d, std::string_view tag) {
      if (!t.short_walks.empty()) {
        const auto& v = t.short_walks.front();
        std::cout << "  " << tag << " witness: walk";
        for (vertex_id x : v.walk) std::cout << ' ' << d.vertex(x).name;
        std::cout << " has a square at " << v.square.start << " (half-length "
                  << v.square.half_length << ")\n";
      }
      if (!t.factors.empty())
        std::cout << "  " << tag << " witness: " << d.vertex(static_cast<vertex_id>(t.factors.front().inner)).name
                  << " occurs in "
                  << d.vertex(static_cast<vertex_id>(t.factors.front().outer)).name << '\n';
      if (!t.splices.empty()) {
        const auto& s = t.splices.front();
        std::cout << "  " << tag << " witness: " << to_string(s.kind) << " of "
                  << d.vertex(static_cast<vertex_id>(s.first)).name << " (split "
                  << s.first_split << ") and " << d.vertex(static_cast<vertex_id>(s.second)).name
                  << " (split " << s.second_split << ") equals "
                  << d.vertex(static_cast<vertex_id>(s.matched)).name << '\n';
      }
    };
    if (cert.dn) witness(*cert.dn, dn, "dn");
    if (cert.dn_star && star) witness(*cert.dn_star, *star, "dn_star");
    std::cout << "certificate: " << (cert.passes() ? "PASS" : "FAIL") << '\n';
  }
  return cert.passes() ? exit_ok : exit_negative;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateOptions {
  std::string kind;
  std::size_t min_length = 0;
  bool verify = false;
};

int cmd_generate(const GenerateOptions& opt, const GlobalOptions& global) {
  const bool extremal = opt.kind == "extremal";
  if (extremal && opt.min_length < min_extremal_length)
    throw usage_error("--min-length must be at least 102 for extremal words");
  if (!extremal && opt.min_length < min_nearly_extremal_length)
    throw usage_error("--min-length must be at least 41 for nearly extremal words");

  GeneratedWord g = extremal ? generate_extremal(opt.min_length)
                             : generate_nearly_extremal(opt.min_length);
  std::optional<ExtensionStatus> verified;
  if (opt.verify) verified = classify(g.word, Alphabet::canonical(3)).status;

  if (global.json()) {
    json out = to_json(g, opt.kind);
    out["verified"] = verified ? json(to_string(*verified)) : json(nullptr);
    std::cout << out.dump() << '\n';
  } else {
    std::cout << g.word.to_string() << '\n';
    if (verified) std::cout << to_string(*verified) << '\n';
  }
  ExtensionStatus expected =
      extremal ? ExtensionStatus::extremal : ExtensionStatus::nearly_extremal;
  return !verified || *verified == expected ? exit_ok : exit_negative;
}

// ---------------------------------------------------------------------------
// nonchalant

struct NonchalantOptions_ {
  std::size_t alphabet = 3;
  std::size_t steps = 0;
  std::string checkpoint;
  std::string output = "words";
};

int cmd_nonchalant(const NonchalantOptions_& opt, const GlobalOptions& global) {
  if (opt.alphabet == 0 || opt.alphabet > 26) throw usage_error("alphabet size must be in 1..26");
  NonchalantRun run;
  std::size_t first_new = 0;
  if (!opt.checkpoint.empty() && fs::exists(opt.checkpoint)) {
    std::ifstream in(opt.checkpoint);
    try {
      run = run_from_checkpoint(json::parse(in));
    } catch (const std::exception& e) {
      throw usage_error(e.what());
    }
    if (run.k != opt.alphabet)
      throw usage_error("checkpoint alphabet size " + std::to_string(run.k) +
                        " differs from --alphabet");
    first_new = run.word_count();
    extend_nonchalant(run, opt.steps);
  } else {
    run = run_nonchalant(opt.alphabet, opt.steps);
  }
  if (!opt.checkpoint.empty()) {
    std::ofstream out(opt.checkpoint);
    out << checkpoint_json(run).dump() << '\n';
  }

  if (global.json()) {
    json summary = to_json(run_statistics(run), run.k);
    summary["last_word"] = run.last.to_string();
    std::cout << summary.dump() << '\n';
  } else if (opt.output == "words") {
    // Stream by replaying steps; only words not printed by a previous run.
    Word w{0};
    const Alphabet alphabet = Alphabet::canonical(run.k);
    if (first_new == 0) std::cout << w.to_string() << '\n';
    for (std::size_t i = 0; i < run.steps.size(); ++i) {
      w = apply_extension(w, run.steps[i], alphabet);
      if (i + 2 > first_new) std::cout << w.to_string() << '\n';
    }
  } else if (opt.output == "log") {
    const Alphabet alphabet = Alphabet::canonical(run.k);
    for (std::size_t i = std::max<std::size_t>(first_new, 1) - 1; i < run.steps.size(); ++i)
      std::cout << run.steps[i].position << ' ' << alphabet.symbol(run.steps[i].symbol) << '\n';
  } else if (opt.output == "final") {
    std::cout << run.last.to_string() << '\n';
  } else {
    auto stats = run_statistics(run);
    std::cout << "words: " << run.word_count() << "\nfinal length: " << run.last.size()
              << "\nterminated: " << (run.terminated ? "yes" : "no") << "\nsuffix lengths:";
    for (auto [l, c] : stats.suffix_lengths) std::cout << ' ' << l << ':' << c;
    std::cout << '\n';
  }
  if (run.terminated && !global.json() && opt.output != "summary")
    std::cerr << "terminated: G_" << run.word_count() << " is extremal\n";
  return run.terminated ? exit_negative : exit_ok;
}

// ---------------------------------------------------------------------------
// search

struct SearchCliOptions {
  std::size_t alphabet = 3;
  std::size_t max_length = 0;
  std::string probe;
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = default_probe_seed;
  std::size_t split_depth = 8;
  std::string resume;
};

void print_search_table(const SearchReport& r) {
  std::cout << "alphabet size " << r.k << ", lengths 1.." << r.max_length << "\n";
  std::cout << std::setw(8) << "length" << std::setw(16) << "canonical" << std::setw(20)
            << "square-free" << '\n';
  for (std::size_t i = 0; i < r.counts.size(); ++i)
    std::cout << std::setw(8) << i + 1 << std::setw(16) << r.canonical_counts[i] << std::setw(20)
              << r.counts[i] << '\n';
  std::cout << "nodes: " << r.nodes << ", extension checks: " << r.extension_checks << '\n';
  if (r.extremal.empty()) {
    std::cout << "no extremal word of length <= " << r.max_length << '\n';
  } else {
    std::cout << "shortest extremal length: " << *r.shortest_extremal_length() << '\n';
    for (const auto& w : r.extremal) std::cout << "  " << w.size() << ' ' << w.to_string() << '\n';
  }
}

int cmd_search(const SearchCliOptions& opt, const GlobalOptions& global) {
  if (opt.alphabet == 0 || opt.alphabet > 26) throw usage_error("alphabet size must be in 1..26");
  if (opt.max_length == 0) throw usage_error("--max-len must be positive");

  if (!opt.probe.empty()) {
    ProbeStrategy strategy;
    try {
      strategy = parse_probe_strategy(opt.probe);
    } catch (const search_error& e) {
      throw usage_error(e.what());
    }
    auto report = probe_extremal(opt.alphabet, opt.max_length, strategy, opt.budget, opt.seed);
    if (global.json()) {
      std::cout << to_json(report).dump() << '\n';
    } else {
      std::cout << "probe " << to_string(report.strategy) << ", alphabet size " << report.k
                << ", lengths <= " << report.max_length << '\n'
                << "extension checks: " << report.extension_checks << " of " << report.budget
                << "\nsamples: " << report.samples << "\nwords tested: " << report.words_tested
                << "\nlongest tested: " << report.longest_tested << '\n';
      if (report.extremal.empty())
        std::cout << "no extremal word found\n";
      for (const auto& w : report.extremal)
        std::cout << "extremal: " << w.size() << ' ' << w.to_string() << '\n';
    }
    return report.extremal.empty() ? exit_negative : exit_ok;
  }

  SearchOptions options;
  options.threads = global.threads;
  options.split_depth = opt.split_depth;
  SearchCheckpoint checkpoint{opt.alphabet, opt.max_length, opt.split_depth, {}};
  if (!opt.resume.empty() && fs::exists(opt.resume)) {
    std::ifstream in(opt.resume);
    try {
      checkpoint = search_checkpoint_from_json(json::parse(in));
    } catch (const std::exception& e) {
      throw usage_error(e.what());
    }
    if (checkpoint.k != opt.alphabet || checkpoint.max_length != opt.max_length ||
        checkpoint.split_depth != opt.split_depth)
      throw usage_error("resume checkpoint was written for different search parameters");
  }
  auto save = [&] {
    std::ofstream out(opt.resume);
    out << to_json(checkpoint).dump() << '\n';
  };
  std::map<std::string, SubtreeResult> done = checkpoint.completed;
  if (!opt.resume.empty()) {
    options.resume = &done;
    auto last_save = std::chrono::steady_clock::now();
    options.on_subtree = [&](const std::string& prefix, const SubtreeResult& r) {
      checkpoint.completed.emplace(prefix, r);
      auto now = std::chrono::steady_clock::now();
      if (now - last_save > std::chrono::seconds(5)) {
        save();
        last_save = now;
      }
    };
  }
  auto report = exhaustive_search(opt.alphabet, opt.max_length, options);
  if (!opt.resume.empty()) save();
  if (global.json()) {
    std::cout << to_json(report).dump() << '\n';
  } else {
    print_search_table(report);
  }
  return report.extremal.empty() ? exit_negative : exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Square-free words: extremality, constructions, nonchalant runs and searches"};
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_option("--format", global.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--threads", global.threads, "Worker threads for searches")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Classify words as extendable, nearly extremal or extremal");
  check_cmd->add_option("words", check.words, "Words over a, b, c, ...");
  check_cmd->add_option("--file", check.file, "Read words from a file, one per line");
  check_cmd->add_option("-k,--alphabet", check.alphabet, "Alphabet size (inferred when omitted)")
      ->check(CLI::Range(1, 26));

  CertifyOptions certify;
  auto* certify_cmd = app.add_subcommand("certify", "Verify the block digraph construction");
  certify_cmd->add_option("--digraph", certify.digraph, "Block digraph file");
  certify_cmd->add_option("--canonical", certify.canonical, "Canonical words file");
  certify_cmd->add_option("--splice-reading", certify.splice_reading,
                          "source-block, whole-block or literal")
      ->capture_default_str();

  GenerateOptions generate;
  auto* generate_cmd = app.add_subcommand("generate", "Generate long (nearly) extremal words");
  generate_cmd->add_option("--kind", generate.kind, "extremal or nearly-extremal")
      ->required()
      ->check(CLI::IsMember({"extremal", "nearly-extremal"}));
  generate_cmd->add_option("--min-length", generate.min_length, "Minimum word length")->required();
  generate_cmd->add_flag("--verify", generate.verify, "Re-classify the generated word");

  NonchalantOptions_ nonchalant;
  auto* nonchalant_cmd = app.add_subcommand("nonchalant", "Run the nonchalant greedy insertion");
  nonchalant_cmd->add_option("-k,--alphabet", nonchalant.alphabet, "Alphabet size")->capture_default_str();
  nonchalant_cmd->add_option("--steps", nonchalant.steps, "Number of words G_1, G_2, ...")
      ->required()
      ->check(CLI::PositiveNumber);
  nonchalant_cmd->add_option("--checkpoint", nonchalant.checkpoint,
                             "Resume from and save to this file");
  nonchalant_cmd->add_option("--output", nonchalant.output, "words, log, final or summary")
      ->check(CLI::IsMember({"words", "log", "final", "summary"}))
      ->capture_default_str();

  SearchCliOptions search;
  auto* search_cmd = app.add_subcommand("search", "Search for extremal words");
  search_cmd->add_option("-k,--alphabet", search.alphabet, "Alphabet size")->capture_default_str();
  search_cmd->add_option("--max-len", search.max_length, "Maximum word length")->required();
  search_cmd->add_option("--probe", search.probe,
                         "Sampled probe: random-walk, nonchalant-seeded or dfs-sampling");
  search_cmd->add_option("--budget", search.budget, "Probe budget in extension checks")
      ->capture_default_str();
  search_cmd->add_option("--seed", search.seed, "Probe random seed")->capture_default_str();
  search_cmd->add_option("--split-depth", search.split_depth, "Depth of parallel subtrees")
      ->capture_default_str();
  search_cmd->add_option("--resume", search.resume, "Checkpoint of completed subtrees");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*check_cmd) return cmd_check(check, global);
    if (*certify_cmd) return cmd_certify(certify, global);
    if (*generate_cmd) return cmd_generate(generate, global);
    if (*nonchalant_cmd) return cmd_nonchalant(nonchalant, global);
    if (*search_cmd) return cmd_search(search, global);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_negative;
  }
  return exit_usage;
}
