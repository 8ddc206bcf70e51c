// rexincl command line: inclusion checks, rule-set reduction and corpus
// extraction.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "rexincl/automata.hpp"
#include "rexincl/errors.hpp"
#include "rexincl/extractor.hpp"
#include "rexincl/frontend.hpp"
#include "rexincl/inclusion.hpp"
#include "rexincl/oracle.hpp"
#include "rexincl/patterns.hpp"
#include "rexincl/reducer.hpp"
#include "rexincl/rules.hpp"

using nlohmann::json;
using namespace rexincl;

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kInternal = 3 };

json features_json(const NormalizedExpr& e) {
    json out = json::array();
    for (Feature f : e.stripped_features) out.push_back(feature_name(f));
    return out;
}

std::string features_text(const NormalizedExpr& e) {
    std::string out;
    for (Feature f : e.stripped_features) {
        if (!out.empty()) out += ", ";
        out += feature_name(f);
    }
    return out;
}

void write_json(const json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
}

std::optional<Polarity> parse_polarity(const std::string& s) {
    if (s == "pos" || s == "positive") return Polarity::Positive;
    if (s == "neg" || s == "negative") return Polarity::Negative;
    return std::nullopt;
}

Precedence parse_precedence(const std::string& s) {
    return s == "neg-first" ? Precedence::NegativeFirst : Precedence::PositiveFirst;
}

// check

struct CheckArgs {
    std::string left, right;
    bool json = false;
};

int run_check(const CheckArgs& a) {
    const auto start = std::chrono::steady_clock::now();
    const CompiledPattern cand = compile(a.left);
    const CompiledPattern sup = compile(a.right);
    const bool gate = gate_passes(sup, cand);
    const InclusionVerdict v = check_inclusion(sup, cand);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    if (a.json) {
        json j;
        for (const auto& [key, p] : {std::pair{"left", &cand}, std::pair{"right", &sup}}) {
            j[key] = {{"pattern", p->text},
                      {"normalized", to_string(p->expr.tokens)},
                      {"postfix", to_string(p->postfix.tokens)},
                      {"approximate", p->expr.approximate},
                      {"stripped_features", features_json(p->expr)}};
        }
        j["gate_passed"] = gate;
        j["included"] = v.included;
        j["approximate"] = v.flagged_approximate;
        j["witness"] = v.witness ? json(*v.witness) : json(nullptr);
        j["seconds"] = elapsed.count();
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& [label, p] : {std::pair{"left ", &cand}, std::pair{"right", &sup}}) {
            std::cout << label << "  normalized: " << to_string(p->expr.tokens) << '\n'
                      << label << "  postfix:    " << to_string(p->postfix.tokens) << '\n';
            if (p->expr.approximate) std::cout << label << "  approximate: " << features_text(p->expr) << '\n';
        }
        std::cout << "alphabet gate: " << (gate ? "passed" : "failed") << '\n'
                  << "verdict: " << (v.included ? "included" : "not included")
                  << (v.flagged_approximate ? " (approximate)" : "") << '\n';
        if (v.witness) std::cout << "witness: " << json(*v.witness).dump() << '\n';
    }
    return v.included ? kOk : kNegative;
}

// explain

struct ExplainArgs {
    std::string pattern;
    bool json = false;
    bool dot = true;
};

std::string trace_table(const std::vector<ShuntingYardStep>& steps) {
    std::size_t w[4] = {5, 8, 8, 6};
    for (const auto& s : steps) {
        w[0] = std::max(w[0], s.input.size());
        w[1] = std::max(w[1], s.regarded.size());
        w[2] = std::max(w[2], s.operator_stack.size());
        w[3] = std::max(w[3], s.output.size());
    }
    auto cell = [](const std::string& s, std::size_t width) { return s + std::string(width - s.size() + 2, ' '); };
    std::string out = "step  " + cell("input", w[0]) + cell("regarded", w[1]) + cell("operator", w[2]) +
                      cell("output", w[3]) + "reason\n";
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& s = steps[i];
        std::string n = std::to_string(i);
        out += n + std::string(6 - n.size(), ' ') + cell(s.input, w[0]) + cell(s.regarded, w[1]) +
               cell(s.operator_stack, w[2]) + cell(s.output, w[3]) + s.reason + '\n';
    }
    return out;
}

int run_explain(const ExplainArgs& a) {
    const NormalizedExpr expr = parse(a.pattern);
    std::vector<ShuntingYardStep> steps;
    const PostfixProgram postfix = to_postfix(expr, &steps);
    const Nfa nfa = thompson(postfix);
    const Dfa dfa = powerset(nfa);

    if (a.json) {
        json trace = json::array();
        for (const auto& s : steps) {
            trace.push_back({{"input", s.input},
                             {"regarded", s.regarded},
                             {"operator_stack", s.operator_stack},
                             {"output", s.output},
                             {"reason", s.reason}});
        }
        json j{{"pattern", a.pattern},
               {"normalized", to_string(expr.tokens)},
               {"postfix", to_string(postfix.tokens)},
               {"approximate", expr.approximate},
               {"stripped_features", features_json(expr)},
               {"trace", trace},
               {"nfa_states", nfa.state_count()},
               {"dfa_states", dfa.state_count()},
               {"tags", pattern_tags(a.pattern)}};
        if (a.dot) {
            j["nfa_dot"] = to_dot(nfa);
            j["dfa_dot"] = to_dot(dfa);
        }
        std::cout << j.dump(2) << '\n';
        return kOk;
    }
    std::cout << "normalized: " << to_string(expr.tokens) << '\n';
    if (expr.approximate) std::cout << "approximate: " << features_text(expr) << '\n';
    std::cout << "tokens:\n" << token_dump(expr.tokens) << '\n'
              << "shunting-yard trace:\n" << trace_table(steps) << '\n'
              << "postfix: " << to_string(postfix.tokens) << '\n'
              << "nfa states: " << nfa.state_count() << '\n'
              << "dfa states: " << dfa.state_count() << '\n';
    if (a.dot) std::cout << '\n' << to_dot(nfa) << '\n' << to_dot(dfa);
    return kOk;
}

// reduce

struct ReduceArgs {
    std::string rules, out, reduced_out, polarity = "both";
    unsigned jobs = 1;
    bool strict = false;
    bool json = false;
};

int run_reduce(const ReduceArgs& a) {
    const std::vector<Rule> rules = load_rules(a.rules);
    ReduceOptions opts;
    opts.jobs = a.jobs;
    opts.strict = a.strict;
    opts.polarity = parse_polarity(a.polarity);
    spdlog::info("checking {} rules with {} jobs", rules.size(), a.jobs);
    const auto start = std::chrono::steady_clock::now();
    const InclusionReport report = compute_inclusions(rules, opts);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    spdlog::info("{} pairs checked, {} passed the alphabet gate, {:.2f} s", report.pairs_checked,
                 report.pairs_passing_gate, elapsed.count());

    json j = to_json(report);
    std::vector<Rule> selected;
    for (const Rule& r : rules) {
        if (!opts.polarity || r.polarity == *opts.polarity) selected.push_back(r);
    }
    j["pattern_frequency"] = analyze_patterns(selected);
    write_json(j, a.out);

    const std::vector<Rule> survivors = reduce(report, rules);
    if (!a.reduced_out.empty()) save_rules(a.reduced_out, survivors);
    if (a.json) {
        std::cout << json{{"rules", report.rule_count},
                          {"removed", report.removed.size()},
                          {"survivors", report.survivors.size()},
                          {"needs_review", report.needs_review.size()},
                          {"skipped", report.skipped.size()}}
                         .dump()
                  << '\n';
    } else {
        std::cout << "rules: " << report.rule_count << ", removed: " << report.removed.size()
                  << ", survivors: " << report.survivors.size() << ", needs review: " << report.needs_review.size()
                  << ", skipped: " << report.skipped.size() << '\n';
    }
    return kOk;
}

// extract

struct ExtractArgs {
    std::string rules, corpus, out, results, sample_out, precedence = "pos-first";
    std::size_t sample_n = 0;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

int run_extract(const ExtractArgs& a) {
    const std::vector<Rule> rules = load_rules(a.rules);
    const Corpus corpus = load_corpus(a.corpus);
    const RuleMatcher matcher(rules, parse_precedence(a.precedence));
    spdlog::info("{} documents, {} positive and {} negative rules", corpus.documents.size(),
                 matcher.positive_count(), matcher.negative_count());

    CorpusRun run = run_corpus(corpus.documents, matcher, a.jobs);
    run.report.skipped_documents = corpus.skipped;
    json j = to_json(run.report);
    j["precedence"] = a.precedence;
    write_json(j, a.out);

    auto dump_jsonl = [](const std::vector<ExtractionResult>& results, std::ostream& out) {
        for (const auto& r : results) out << to_json(r).dump() << '\n';
    };
    if (!a.results.empty()) {
        std::ofstream out(a.results);
        if (!out) throw Error("cannot write " + a.results);
        dump_jsonl(run.results, out);
    }
    if (a.sample_n > 0) {
        const auto picked = sample(run.results, a.sample_n, a.seed);
        if (a.sample_out.empty()) {
            dump_jsonl(picked, std::cout);
        } else {
            std::ofstream out(a.sample_out);
            if (!out) throw Error("cannot write " + a.sample_out);
            dump_jsonl(picked, out);
        }
    }
    spdlog::info("{} sentences: {} statistics, {} rejected, {} unmatched", run.report.sentences,
                 run.report.total_statistics, run.report.rejected, run.report.unmatched);
    return kOk;
}

// bench

struct BenchArgs {
    std::string rules, reduced, corpus, out, precedence = "pos-first";
    std::size_t repeats = 5;
};

int run_bench(const BenchArgs& a) {
    const std::vector<Rule> full = load_rules(a.rules);
    const std::vector<Rule> reduced = load_rules(a.reduced);
    const Corpus corpus = load_corpus(a.corpus);
    const BenchReport report = bench(corpus.documents, full, reduced, a.repeats, parse_precedence(a.precedence));
    if (!report.reduced_not_slower()) {
        spdlog::warn("reduced rule set was slower: {:.4f} s vs {:.4f} s", report.reduced.mean_seconds,
                     report.full.mean_seconds);
    }
    write_json(to_json(report), a.out);
    return kOk;
}

// oracle-verify

struct OracleArgs {
    std::string left, right;
    std::size_t max_len = 6;
    bool json = false;
};

int run_oracle(const OracleArgs& a) {
    const CompiledPattern cand = compile(a.left);
    const CompiledPattern sup = compile(a.right);
    const RegexAst sub_ast = postfix_to_ast(cand.postfix);
    const RegexAst sup_ast = postfix_to_ast(sup.postfix);
    const std::vector<char> alphabet = oracle::representatives(sub_ast, sup_ast);
    std::string witness;
    const bool bounded = oracle::verify_inclusion(sub_ast, sup_ast, alphabet, a.max_len, &witness);
    const InclusionVerdict exact = check_inclusion(sup, cand);
    // A bounded counterexample is a real one, so the exact check must agree.
    const bool consistent = bounded || !exact.included;

    if (a.json) {
        std::cout << json{{"bounded_included", bounded},
                          {"max_len", a.max_len},
                          {"alphabet", std::string(alphabet.begin(), alphabet.end())},
                          {"witness", bounded ? json(nullptr) : json(witness)},
                          {"automata_included", exact.included},
                          {"consistent", consistent}}
                         .dump(2)
                  << '\n';
    } else {
        std::cout << "bounded (length <= " << a.max_len << "): " << (bounded ? "included" : "not included") << '\n';
        if (!bounded) std::cout << "witness: " << json(witness).dump() << '\n';
        std::cout << "automata: " << (exact.included ? "included" : "not included") << '\n';
    }
    if (!consistent) {
        spdlog::error("oracle found witness {} but the automata report inclusion", json(witness).dump());
        return kInternal;
    }
    return bounded ? kOk : kNegative;
}

void setup_logging(int verbosity, bool quiet) {
    auto logger = spdlog::stderr_color_mt("rexincl");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    if (quiet) {
        spdlog::set_level(spdlog::level::err);
    } else if (verbosity > 0) {
        spdlog::set_level(spdlog::level::debug);
    } else {
        spdlog::set_level(spdlog::level::info);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regular expression inclusion checks and rule-set reduction"};
    app.require_subcommand(1);
    int verbosity = 0;
    bool quiet = false;
    app.add_flag("-v,--verbose", verbosity, "Debug logging");
    app.add_flag("-q,--quiet", quiet, "Only log errors");

    unsigned jobs = 1;
    std::uint64_t seed = 0;

    CheckArgs check;
    auto* c = app.add_subcommand("check", "Is L(left) contained in L(right)?");
    c->add_option("left", check.left, "Candidate pattern")->required();
    c->add_option("right", check.right, "Superset pattern")->required();
    c->add_flag("--json", check.json);

    ExplainArgs explain;
    bool no_dot = false;
    auto* e = app.add_subcommand("explain", "Normalized form, shunting-yard trace, postfix and automata");
    e->add_option("pattern", explain.pattern)->required();
    e->add_flag("--json", explain.json);
    e->add_flag("--no-dot", no_dot, "Omit the Graphviz dumps");

    ReduceArgs red;
    auto* r = app.add_subcommand("reduce", "Remove rules included by other rules");
    r->add_option("--rules", red.rules)->required()->check(CLI::ExistingFile);
    r->add_option("--out", red.out, "Report path")->required();
    r->add_option("--reduced-out", red.reduced_out, "Write surviving rules as JSON Lines");
    r->add_option("--jobs", jobs)->envname("REXINCL_JOBS")->check(CLI::PositiveNumber);
    r->add_option("--polarity", red.polarity)->check(CLI::IsMember({"pos", "neg", "both", "positive", "negative"}));
    r->add_flag("--strict", red.strict, "Treat approximate inclusions as non-inclusions");
    r->add_flag("--json", red.json);

    ExtractArgs ext;
    auto* x = app.add_subcommand("extract", "Classify corpus sentences");
    x->add_option("--rules", ext.rules)->required()->check(CLI::ExistingFile);
    x->add_option("--corpus", ext.corpus, "Directory of text files or JSON Lines")->required()->check(CLI::ExistingPath);
    x->add_option("--out", ext.out, "Report path")->required();
    x->add_option("--results", ext.results, "Write every result as JSON Lines");
    x->add_option("--sample", ext.sample_n, "Results per statistic type")->check(CLI::PositiveNumber);
    x->add_option("--sample-out", ext.sample_out, "Sample path, standard output by default");
    x->add_option("--seed", seed)->envname("REXINCL_SEED");
    x->add_option("--jobs", jobs)->envname("REXINCL_JOBS")->check(CLI::PositiveNumber);
    x->add_option("--precedence", ext.precedence)->check(CLI::IsMember({"pos-first", "neg-first"}));

    BenchArgs be;
    auto* b = app.add_subcommand("bench", "Time full against reduced rules");
    b->add_option("--rules", be.rules)->required()->check(CLI::ExistingFile);
    b->add_option("--reduced", be.reduced)->required()->check(CLI::ExistingFile);
    b->add_option("--corpus", be.corpus)->required()->check(CLI::ExistingPath);
    b->add_option("--repeats", be.repeats)->check(CLI::PositiveNumber);
    b->add_option("--out", be.out, "Report path, standard output by default");
    b->add_option("--precedence", be.precedence)->check(CLI::IsMember({"pos-first", "neg-first"}));

    OracleArgs orc;
    auto* o = app.add_subcommand("oracle-verify", "Bounded brute-force inclusion check");
    o->add_option("--left", orc.left, "Candidate pattern")->required();
    o->add_option("--right", orc.right, "Superset pattern")->required();
    o->add_option("--max-len", orc.max_len)->check(CLI::Range(std::size_t{0}, oracle::kMaxLength));
    o->add_flag("--json", orc.json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kOk : kUsage;
    }
    setup_logging(verbosity, quiet);
    red.jobs = ext.jobs = jobs;
    ext.seed = seed;
    explain.dot = !no_dot;

    try {
        if (*c) return run_check(check);
        if (*e) return run_explain(explain);
        if (*r) return run_reduce(red);
        if (*x) return run_extract(ext);
        if (*b) return run_bench(be);
        if (*o) return run_oracle(orc);
    } catch (const OutcomeMismatch& err) {
        spdlog::error("{}", err.what());
        return kNegative;
    } catch (const InvariantViolation& err) {
        spdlog::error("invariant violated: {}", err.what());
        return kInternal;
    } catch (const AlphabetMismatch& err) {
        spdlog::error("invariant violated: {}", err.what());
        return kInternal;
    } catch (const IncompleteAutomaton& err) {
        spdlog::error("invariant violated: {}", err.what());
        return kInternal;
    } catch (const Error& err) {
        spdlog::error("{}", err.what());
        return kUsage;
    } catch (const std::exception& err) {
        spdlog::error("internal error: {}", err.what());
        return kInternal;
    }
    return kUsage;
}
