#pragma once

// Command-line front end for the matula library. Kept in a header so the
// test suite can drive run() without spawning processes.

#include <CLI11.hpp>
#include <json.hpp>
#include <matula/matula.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace matula::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kRange = 3,
  kVerificationFailed = 4,
};

struct CliConfig {
  std::uint64_t prime_bound = PrimeOracle::kDefaultBound;
  bool json = false;
  EnumCaps caps;
};

namespace detail {

using nlohmann::json;

inline std::string sig6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

inline Nat require_nat(const std::string& text) {
  auto n = parse_nat(trim(text));
  if (!n) throw DomainError("expected a decimal natural number, got '" + text + "'");
  return *n;
}

inline std::uint64_t require_u64(const std::string& text) {
  auto v = to_u64(require_nat(text));
  if (!v) throw DomainError("'" + text + "' does not fit in 64 bits");
  return *v;
}

class Session {
 public:
  Session(const CliConfig& config, std::ostream& out, std::istream& in)
      : config_(config), out_(out), in_(in), oracle_(config.prime_bound) {}

  int encode(const std::string& arg) {
    std::string text = arg;
    if (arg == "-") text = std::string(std::istreambuf_iterator<char>(in_), {});
    const Tree t = parse(trim(text));
    const Nat m = MatulaEncoder(oracle_).encode(t);
    if (config_.json) {
      emit(json{{"tree", serialize(t)}, {"matula", to_string(m)}});
    } else {
      out_ << m << '\n';
    }
    return kOk;
  }

  int decode(const std::string& arg, bool dot) {
    const Nat n = require_nat(arg);
    const Tree t = MatulaDecoder(oracle_).decode(n);
    if (dot) {
      out_ << to_dot(t);
    } else if (config_.json) {
      emit(json{{"matula", to_string(n)}, {"tree", serialize(t)}});
    } else {
      out_ << serialize(t) << '\n';
    }
    return kOk;
  }

  int params(const std::string& arg) {
    const std::string text = trim(arg);
    std::optional<Nat> matula;
    Tree t;
    if (auto n = parse_nat(text)) {
      matula = *n;
      t = MatulaDecoder(oracle_).decode(*n);
    } else {
      t = parse(text);
      try {
        matula = MatulaEncoder(oracle_).encode(t);
      } catch (const RangeError&) {
      }
    }
    const TreeParams p = matula::params(t);
    if (config_.json) {
      json degrees = json::object();
      for (auto [d, c] : p.outdegrees) degrees[std::to_string(d)] = c;
      json rec{{"tree", serialize(t)},           {"vertices", p.vertices},
               {"leaves", p.leaves},             {"height", p.height},
               {"max_outdegree", p.max_outdegree}, {"outdegrees", degrees},
               {"wiener", p.wiener}};
      if (matula) rec["matula"] = to_string(*matula);
      emit(rec);
    } else {
      out_ << "tree " << serialize(t) << '\n';
      if (matula) out_ << "matula " << *matula << '\n';
      out_ << "vertices " << p.vertices << '\n'
           << "leaves " << p.leaves << '\n'
           << "height " << p.height << '\n'
           << "max_outdegree " << p.max_outdegree << '\n'
           << "outdegrees";
      for (auto [d, c] : p.outdegrees) out_ << ' ' << d << ':' << c;
      out_ << '\n' << "wiener " << p.wiener << '\n';
    }
    return kOk;
  }

  int enumerate(const std::string& cls, std::optional<std::uint64_t> leaves, std::optional<std::uint64_t> vertices,
                bool with_matula) {
    const EnumSpec spec = make_spec(cls, leaves, vertices);
    MatulaEncoder enc(oracle_);
    for (const Tree& t : matula::enumerate(spec, config_.caps)) {
      if (config_.json) {
        json rec{{"tree", serialize(t)}};
        if (with_matula) rec["matula"] = to_string(enc.encode(t));
        emit(rec);
      } else {
        out_ << serialize(t);
        if (with_matula) out_ << '\t' << enc.encode(t);
        out_ << '\n';
      }
    }
    return kOk;
  }

  int seq(const std::string& which, std::uint64_t k_max) {
    const auto values = which == "q" ? q_seq(k_max, oracle_) : l_seq(k_max, oracle_);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (config_.json) {
        emit(json{{"seq", which}, {"k", i + 1}, {"value", to_string(values[i])}});
      } else {
        out_ << which << '_' << i + 1 << '\t' << values[i] << '\n';
      }
    }
    return kOk;
  }

  int verify_lemma1(std::uint64_t k_max, std::uint64_t min_sum) {
    bool all = true;
    for (const LemmaInstance& r : check_lemma1(k_max, oracle_)) {
      if (r.k1 + r.k2 < min_sum) continue;
      all = all && r.holds;
      if (config_.json) {
        emit(json{{"verify", "lemma1"},
                  {"k1", r.k1},
                  {"k2", r.k2},
                  {"lhs", to_string(r.lhs)},
                  {"rhs", to_string(r.rhs)},
                  {"holds", r.holds},
                  {"equality", r.equality}});
      } else {
        out_ << '(' << r.k1 << ',' << r.k2 << ")\t" << r.lhs << " <= " << r.rhs << '\t'
             << (r.holds ? "holds" : "FAILS") << (r.equality ? " (equality)" : "") << '\n';
      }
    }
    return all ? kOk : kVerificationFailed;
  }

  int verify_topological(std::uint64_t n_max, bool maximum) {
    if (n_max < 2) throw BadSize("--leaves must be at least 2");
    const auto q = maximum ? q_seq(n_max, oracle_) : std::vector<Nat>{};
    bool all = true;
    for (std::uint64_t n = 2; n <= n_max; ++n) {
      const EnumSpec spec{TreeClass::topological, SizeKind::leaves, n};
      const SearchReport r = maximum ? exhaustive_max(spec, oracle_, config_.caps)
                                     : exhaustive_min(spec, oracle_, config_.caps);
      const Nat expected = maximum ? q[n - 1] : pow2(static_cast<unsigned>(n));
      const Tree expected_tree = maximum ? binary_caterpillar(n) : star(n);
      const bool ok = r.optimum == expected && r.witness == expected_tree;
      all = all && ok;
      report_search(maximum ? "max-topological" : "min-topological", "leaves", n, r, expected, ok);
    }
    return all ? kOk : kVerificationFailed;
  }

  int verify_min_binary(std::uint64_t k_max) {
    if (k_max < 1) throw BadSize("--leaves must be at least 1");
    bool all = true;
    bool conclusive = true;
    for (std::uint64_t k = 1; k <= k_max; ++k) {
      const SearchReport r = min_binary_bnb(k, oracle_);
      const Tree s_k = min_binary_tree(k);
      std::optional<Nat> expected;
      try {
        expected = MatulaEncoder(oracle_).encode(s_k);
      } catch (const RangeError&) {
      }
      // A smaller optimum than l_k would be a counterexample even when the
      // search could not cover the whole space.
      const bool counterexample = r.optimum && expected && *r.optimum < *expected;
      const bool ok = r.exhaustive && r.optimum == expected && r.witness == s_k;
      if (counterexample) all = false;
      if (!r.exhaustive) conclusive = false;
      if (r.exhaustive && !ok) all = false;
      const char* status = ok ? "ok" : (counterexample || r.exhaustive) ? "FAIL" : "inconclusive";
      if (config_.json) {
        json rec{{"verify", "min-binary"},     {"leaves", k},           {"witness", serialize(r.witness)},
                 {"examined", r.examined},     {"pruned", r.pruned},    {"frontier", r.frontier},
                 {"exhaustive", r.exhaustive}, {"status", status}};
        rec["optimum"] = r.optimum ? json(to_string(*r.optimum)) : json(nullptr);
        rec["expected"] = expected ? json(to_string(*expected)) : json(nullptr);
        emit(rec);
      } else {
        out_ << "leaves=" << k << "\tmin=" << (r.optimum ? to_string(*r.optimum) : "?")
             << "\tl_k=" << (expected ? to_string(*expected) : "?") << "\twitness=" << serialize(r.witness)
             << "\texamined=" << r.examined << "\tpruned=" << r.pruned << "\tfrontier=" << r.frontier
             << "\texhaustive=" << (r.exhaustive ? "yes" : "no") << '\t' << status << '\n';
      }
    }
    if (!all) return kVerificationFailed;
    return conclusive ? kOk : kRange;
  }

  int verify_gi_max(std::uint64_t n_max) {
    if (n_max < 5) throw BadSize("--vertices must be at least 5");
    bool all = true;
    for (std::uint64_t n = 5; n <= n_max; ++n) {
      const SearchReport r = exhaustive_max({TreeClass::rooted, SizeKind::vertices, n}, oracle_, config_.caps);
      const Tree expected_tree = gi_max_tree(n);
      const Nat expected = MatulaEncoder(oracle_).encode(expected_tree);
      const bool ok = r.optimum == expected && r.witness == expected_tree;
      all = all && ok;
      report_search("gi-max", "vertices", n, r, expected, ok);
    }
    return all ? kOk : kVerificationFailed;
  }

  int verify_prime_bounds(std::uint64_t m_max) {
    if (m_max < 2) throw BadSize("--max-m must be at least 2");
    std::uint64_t robin_violations = 0;
    std::uint64_t rs_violations = 0;
    std::uint64_t m = 0;
    const std::uint64_t hi =
        m_max < 20 ? 80 : static_cast<std::uint64_t>(rosser_schoenfeld_upper(m_max)) + 2;
    oracle_.for_each_prime(std::min(hi, oracle_.limit_value()), [&](std::uint64_t p) {
      ++m;
      if (m >= 2 && robin_lower(m) > static_cast<double>(p)) ++robin_violations;
      if (m >= 20 && static_cast<double>(p) > rosser_schoenfeld_upper(m)) ++rs_violations;
      return m < m_max;
    });
    if (m < m_max) throw IndexOutOfRange(m_max, "prime bound too small for --max-m");
    const bool ok = robin_violations == 0 && rs_violations == 0;

    constexpr std::uint64_t kS18 = 32078140605053ull;
    const double lo = robin_lower(kS18);
    const double up = rosser_schoenfeld_upper(kS18);
    if (config_.json) {
      emit(json{{"verify", "prime-bounds"},
                {"max_m", m_max},
                {"robin_violations", robin_violations},
                {"rosser_schoenfeld_violations", rs_violations},
                {"status", ok ? "ok" : "FAIL"}});
      emit(json{{"verify", "prime-bounds-interval"},
                {"m", std::to_string(kS18)},
                {"robin_lower", sig6(lo)},
                {"rosser_schoenfeld_upper", sig6(up)}});
    } else {
      out_ << "m=2.." << m_max << "\trobin_violations=" << robin_violations
           << "\trosser_schoenfeld_violations=" << rs_violations << '\t' << (ok ? "ok" : "FAIL") << '\n'
           << "m=" << kS18 << "\t" << sig6(lo) << " <= p_m <= " << sig6(up) << '\n';
    }
    return ok ? kOk : kVerificationFailed;
  }

  int primes(const std::string& verb, const std::string& arg) {
    const std::uint64_t v = require_u64(arg);
    std::uint64_t result = 0;
    if (verb == "nth") {
      result = oracle_.nth_prime(v);
    } else if (verb == "index") {
      result = oracle_.prime_index(v);
    } else {
      result = oracle_.prime_count(v);
    }
    if (config_.json) {
      emit(json{{"primes", verb}, {"argument", std::to_string(v)}, {"value", std::to_string(result)}});
    } else {
      out_ << result << '\n';
    }
    return kOk;
  }

 private:
  void emit(const json& rec) { out_ << rec.dump() << '\n'; }

  static EnumSpec make_spec(const std::string& cls, std::optional<std::uint64_t> leaves,
                            std::optional<std::uint64_t> vertices) {
    if (leaves.has_value() == vertices.has_value()) throw DomainError("give exactly one of --leaves or --vertices");
    EnumSpec spec;
    spec.tree_class = cls == "rooted" ? TreeClass::rooted : cls == "binary" ? TreeClass::binary : TreeClass::topological;
    spec.size_kind = leaves ? SizeKind::leaves : SizeKind::vertices;
    spec.size = leaves ? *leaves : *vertices;
    return spec;
  }

  void report_search(const char* verb, const char* size_name, std::uint64_t n, const SearchReport& r,
                     const Nat& expected, bool ok) {
    if (config_.json) {
      emit(json{{"verify", verb},
                {size_name, n},
                {"optimum", to_string(*r.optimum)},
                {"expected", to_string(expected)},
                {"witness", serialize(r.witness)},
                {"examined", r.examined},
                {"status", ok ? "ok" : "FAIL"}});
    } else {
      out_ << size_name << '=' << n << "\toptimum=" << *r.optimum << "\texpected=" << expected
           << "\twitness=" << serialize(r.witness) << "\texamined=" << r.examined << '\t' << (ok ? "ok" : "FAIL")
           << '\n';
    }
  }

  const CliConfig& config_;
  std::ostream& out_;
  std::istream& in_;
  PrimeOracle oracle_;
};

}  // namespace detail

/// Runs one command line (args excludes the program name). Results go to
/// out, diagnostics to err.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err, std::istream& in = std::cin) {
  CLI::App app{"Matula numbers of rooted trees: encode, decode, enumerate and verify extremal results", "matula"};
  app.require_subcommand(1);
  app.fallthrough();

  CliConfig config;
  std::optional<std::uint64_t> prime_bound;
  std::optional<std::uint64_t> max_leaves;
  std::optional<std::uint64_t> max_vertices;
  app.add_option("--prime-bound", prime_bound, "Largest prime value the oracle may sieve (default 2^32)")
      ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 62));
  app.add_flag("--json", config.json, "One JSON object per output line");
  app.add_option("--max-leaves", max_leaves, "Enumeration cap for leaf-counted classes")->check(CLI::PositiveNumber);
  app.add_option("--max-vertices", max_vertices, "Enumeration cap for rooted trees")->check(CLI::PositiveNumber);

  std::function<int(detail::Session&)> action;

  std::string tree_arg;
  auto* encode = app.add_subcommand("encode", "Tree text -> Matula number ('-' reads stdin)");
  encode->add_option("tree", tree_arg)->required();
  encode->callback([&] { action = [&](detail::Session& s) { return s.encode(tree_arg); }; });

  std::string number_arg;
  bool dot = false;
  auto* decode = app.add_subcommand("decode", "Matula number -> tree text");
  decode->add_option("n", number_arg)->required();
  decode->add_flag("--dot", dot, "Emit a Graphviz digraph instead of tree text");
  decode->callback([&] { action = [&](detail::Session& s) { return s.decode(number_arg, dot); }; });

  std::string params_arg;
  auto* params = app.add_subcommand("params", "Structural parameters of a tree (text or Matula number)");
  params->add_option("tree", params_arg)->required();
  params->callback([&] { action = [&](detail::Session& s) { return s.params(params_arg); }; });

  std::string enum_class = "topological";
  std::optional<std::uint64_t> enum_leaves;
  std::optional<std::uint64_t> enum_vertices;
  bool with_matula = false;
  auto* enumerate = app.add_subcommand("enumerate", "List every tree of a class and size, one per line");
  enumerate->add_option("--class", enum_class)->check(CLI::IsMember({"topological", "binary", "rooted"}));
  enumerate->add_option("--leaves", enum_leaves);
  enumerate->add_option("--vertices", enum_vertices);
  enumerate->add_flag("--with-matula", with_matula, "Append a tab and the Matula number");
  enumerate->callback([&] {
    action = [&](detail::Session& s) { return s.enumerate(enum_class, enum_leaves, enum_vertices, with_matula); };
  });

  std::string seq_which;
  std::uint64_t seq_max = 1;
  auto* seq = app.add_subcommand("seq", "The q_k or l_k sequence");
  seq->add_option("which", seq_which)->required()->check(CLI::IsMember({"q", "l"}));
  seq->add_option("--max", seq_max)->required()->check(CLI::PositiveNumber);
  seq->callback([&] { action = [&](detail::Session& s) { return s.seq(seq_which, seq_max); }; });

  auto* verify = app.add_subcommand("verify", "Check an extremal claim; exit 4 on violation");
  verify->require_subcommand(1);
  std::uint64_t lemma_max = 6;
  std::uint64_t lemma_min_sum = 4;
  auto* lemma = verify->add_subcommand("lemma1", "p_{q_a} p_{q_b} <= q_{a+b}");
  lemma->add_option("--max", lemma_max)->required()->check(CLI::PositiveNumber);
  lemma->add_option("--min-sum", lemma_min_sum, "Smallest a+b to print (default 4)");
  lemma->callback([&] { action = [&](detail::Session& s) { return s.verify_lemma1(lemma_max, lemma_min_sum); }; });

  std::uint64_t topo_leaves = 2;
  auto* max_topo = verify->add_subcommand("max-topological", "Maximum over topological trees is F_n, q_n");
  max_topo->add_option("--leaves", topo_leaves)->required();
  max_topo->callback([&] { action = [&](detail::Session& s) { return s.verify_topological(topo_leaves, true); }; });
  auto* min_topo = verify->add_subcommand("min-topological", "Minimum over topological trees is K_{1,n}, 2^n");
  min_topo->add_option("--leaves", topo_leaves)->required();
  min_topo->callback([&] { action = [&](detail::Session& s) { return s.verify_topological(topo_leaves, false); }; });

  std::uint64_t binary_leaves = 1;
  auto* min_bin = verify->add_subcommand("min-binary", "Branch-and-bound minimum over binary trees is S_k, l_k");
  min_bin->add_option("--leaves", binary_leaves)->required();
  min_bin->callback([&] { action = [&](detail::Session& s) { return s.verify_min_binary(binary_leaves); }; });

  std::uint64_t gi_vertices = 5;
  auto* gi = verify->add_subcommand("gi-max", "Maximum over rooted n-vertex trees");
  gi->add_option("--vertices", gi_vertices)->required();
  gi->callback([&] { action = [&](detail::Session& s) { return s.verify_gi_max(gi_vertices); }; });

  std::uint64_t bounds_max_m = 1000000;
  auto* bounds = verify->add_subcommand("prime-bounds", "Robin and Rosser-Schoenfeld bounds against the sieve");
  bounds->add_option("--max-m", bounds_max_m)->required();
  bounds->callback([&] { action = [&](detail::Session& s) { return s.verify_prime_bounds(bounds_max_m); }; });

  auto* primes = app.add_subcommand("primes", "Prime oracle queries");
  primes->require_subcommand(1);
  std::string primes_arg;
  for (const char* verb : {"nth", "index", "pi"}) {
    auto* sub = primes->add_subcommand(verb, std::string(verb) == "nth"     ? "p_m for index m"
                                             : std::string(verb) == "index" ? "m such that p_m = p"
                                                                            : "number of primes <= x");
    sub->add_option("value", primes_arg)->required();
    std::string v = verb;
    sub->callback([&, v] { action = [&, v](detail::Session& s) { return s.primes(v, primes_arg); }; });
  }

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    config.prime_bound = prime_bound ? *prime_bound : PrimeOracle::bound_from_env();
    if (max_leaves) config.caps.topological_leaves = config.caps.binary_leaves = *max_leaves;
    if (max_vertices) config.caps.rooted_vertices = *max_vertices;
    detail::Session session(config, out, in);
    return action(session);
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return kRange;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace matula::cli
