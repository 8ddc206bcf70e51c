#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include "rexincl/automata.hpp"
#include "rexincl/errors.hpp"
#include "rexincl/extractor.hpp"
#include "rexincl/inclusion.hpp"
#include "rexincl/reducer.hpp"
#include "support.hpp"

using namespace rexincl;

namespace {

std::vector<std::string> texts(const std::vector<Sentence>& s) {
    std::vector<std::string> out;
    for (const auto& x : s) out.push_back(x.text);
    return out;
}

Rule neg(RuleId id, std::string pattern) { return Rule{id, std::move(pattern), Polarity::Negative, {}, {}, {}}; }

Rule stat(RuleId id, std::string pattern, std::string type, bool apa, std::vector<SubRule> subs = {}) {
    return Rule{id, std::move(pattern), Polarity::Positive, std::move(type), apa, std::move(subs)};
}

// t(df)=float, p op float
Rule apa_t_test(RuleId id = 1) {
    return stat(id, R"(t\(\d+\)\s?=\s?-?\d*\.?\d+,\s?p\s?[<>=]\s?\d*\.\d+)", "t-test", true,
                {{"df", R"(t\((\d+)\))"}, {"statistic", R"(=\s?(-?\d*\.?\d+))"}, {"p_value", R"(p\s?[<>=]\s?(\d*\.\d+))"}});
}

ExtractionResult classify_text(const RuleMatcher& m, std::string text) { return m.classify({"d", 0, std::move(text)}); }

ExtractionResult make_stat(std::string type, bool apa) {
    ExtractionResult r;
    r.outcome = Outcome::Statistic;
    r.statistic_type = std::move(type);
    r.apa = apa;
    r.values = std::map<std::string, std::string>{};
    return r;
}

}  // namespace

TEST_CASE("sentence splitting") {
    CHECK(texts(split_sentences({"d", "We saw 5 cats. The dogs left."})) == std::vector<std::string>{"We saw 5 cats."});
    CHECK(split_sentences({"d", "No numbers here. At all."}).empty());
    CHECK(texts(split_sentences({"d", "p < 0.05. Results follow."})) == std::vector<std::string>{"p < 0.05."});

    SECTION("the capital starts the next sentence") {
        const auto s = split_sentences({"d", "In 2019 we ran it.Then 3 more.  Next 4 came."});
        REQUIRE(s.size() == 2);
        CHECK(s[0].text == "In 2019 we ran it.");
        CHECK(s[1].text == "Then 3 more.  Next 4 came.");  // two spaces do not split
        CHECK(s[1].index == 1);
    }
    SECTION("line breaks are removed first") {
        const auto s = split_sentences({"d", "Values were 3.\nThe 4 rest.\r\nSo 5."});
        CHECK(texts(s) == std::vector<std::string>{"Values were 3.", "The 4 rest.", "So 5."});
    }
    SECTION("indices count dropped sentences") {
        const auto s = split_sentences({"d", "None. Also none. But 7 here."});
        REQUIRE(s.size() == 1);
        CHECK(s[0].index == 2);
    }
    SECTION("decimals and lowercase continuations do not split") {
        CHECK(split_sentences({"d", "It was 2.5 cm. and 3.1 cm"}).size() == 1);
    }
}

TEST_CASE("python syntax translation") {
    std::vector<std::string> names;
    CHECK(to_boost_syntax("(?P<df>\\d+)", &names) == "(?<df>\\d+)");
    CHECK(names == std::vector<std::string>{"df"});
    CHECK(to_boost_syntax("(?P<x>a)(?P=x)") == "(?<x>a)\\k<x>");
    CHECK(to_boost_syntax("a{,3}") == "a{0,3}");
    CHECK(to_boost_syntax("a{2,3}") == "a{2,3}");
    CHECK(to_boost_syntax("a&b\\&c") == "ab\\&c");
    CHECK(to_boost_syntax("[&{,3}(?P<]") == "[&{,3}(?P<]");
    CHECK(to_boost_syntax("(?<=a)b") == "(?<=a)b");
}

TEST_CASE("classify") {
    SECTION("APA t-test with captured values") {
        const RuleMatcher m({apa_t_test()});
        const auto r = classify_text(m, "t(12) = 2.31, p < .05");
        CHECK(r.outcome == Outcome::Statistic);
        CHECK(r.matched_rule_id == 1);
        CHECK(r.statistic_type == "t-test");
        CHECK(r.apa == true);
        REQUIRE(r.values.has_value());
        CHECK(*r.values == std::map<std::string, std::string>{{"df", "12"}, {"statistic", "2.31"}, {"p_value", ".05"}});
    }
    SECTION("named groups in the main rule are captured") {
        const RuleMatcher m({stat(1, R"(z\s?=\s?(?P<statistic>\d+\.\d+))", "z-test", true)});
        const auto r = classify_text(m, "We found z = 3.25 overall");
        CHECK(r.values->at("statistic") == "3.25");
    }
    SECTION("table reference is rejected") {
        const RuleMatcher m({apa_t_test(), neg(5, R"([tT]able\s?\d+)")});
        const auto r = classify_text(m, "as shown in Table 1");
        CHECK(r.outcome == Outcome::Rejected);
        CHECK(r.matched_rule_id == 5);
        CHECK_FALSE(r.statistic_type.has_value());
        CHECK_FALSE(r.values.has_value());
    }
    SECTION("no rules leaves the sentence unmatched") {
        const RuleMatcher m({});
        const auto r = classify_text(m, "We recruited 15 participants in 2019");
        CHECK(r.outcome == Outcome::Unmatched);
        CHECK_FALSE(r.matched_rule_id.has_value());
    }
    SECTION("precedence") {
        const std::vector<Rule> rules = {apa_t_test(), neg(2, R"(t\(\d+\))")};
        const std::string text = "t(3) = 1.0, p = .3";
        CHECK(classify_text(RuleMatcher(rules), text).outcome == Outcome::Statistic);
        CHECK(classify_text(RuleMatcher(rules, Precedence::NegativeFirst), text).outcome == Outcome::Rejected);
    }
    SECTION("first match in id order") {
        const RuleMatcher m({neg(9, "\\d"), neg(4, "\\d+")});
        CHECK(classify_text(m, "a 5").matched_rule_id == 4);
    }
    SECTION("broken rules are skipped") {
        const RuleMatcher m({neg(1, "(unclosed"), neg(2, "\\d")});
        REQUIRE(m.skipped().size() == 1);
        CHECK(m.skipped()[0].id == 1);
        CHECK(classify_text(m, "7").matched_rule_id == 2);
    }
    SECTION("missing metadata defaults") {
        Rule r{3, "\\d", Polarity::Positive, std::nullopt, std::nullopt, {}};
        const auto res = classify_text(RuleMatcher({r}), "4");
        CHECK(res.statistic_type == "other");
        CHECK(res.apa == false);
    }
}

TEST_CASE("run corpus") {
    const std::vector<Rule> rules = {apa_t_test(), neg(10, R"([tT]able\s?\d+)"), neg(11, R"([fF]igure\s?\d+)"),
                                     neg(12, R"(\(\d{4}\))")};
    const RuleMatcher m(rules);
    SECTION("one APA t-test") {
        const auto run = run_corpus({{"a", "Groups differed, t(12) = 2.31, p < .05."}}, m);
        CHECK(run.report.by_type.at("t-test").apa == 1);
        CHECK(run.report.total_statistics == 1);
        CHECK(run.report.apa_share_with_anova_no_r == 100.0);
        CHECK(run.report.apa_share_without_anova_no_r == 100.0);
    }
    SECTION("ten labeled sentences") {
        const std::vector<Document> docs = {
            {"a", "We found t(10) = 2.2, p < .05 here. See Table 2 for means. Figure 3 shows it."},
            {"b", "Work from (2004) helps. Compare Table 7. The effect was t(40)=1.9, p=.06 overall."},
            {"c", "Table 1 again. The figure 2 panel. Ratings used 5 points. Also 12 items."},
        };
        const auto run = run_corpus(docs, m, 3);
        CHECK(run.report.total_statistics == 2);
        CHECK(run.report.rejected == 6);
        CHECK(run.report.unmatched == 2);
        CHECK(run.report.sentences == 10);
        CHECK(run.results.size() == 10);
        CHECK(run.results.front().doc_id == "a");
        CHECK(run.results.back().doc_id == "c");
    }
    SECTION("empty corpus") {
        const auto run = run_corpus({}, m);
        CHECK(run.report.sentences == 0);
        CHECK(run.report.total_statistics == 0);
        CHECK(run.report.apa_share_with_anova_no_r == 0.0);
    }
}

TEST_CASE("APA shares") {
    std::vector<ExtractionResult> results;
    for (int i = 0; i < 3; ++i) results.push_back(make_stat("t-test", true));
    for (int i = 0; i < 2; ++i) results.push_back(make_stat("anova-no-r", true));
    for (int i = 0; i < 5; ++i) results.push_back(make_stat("pearson", false));
    const CorpusReport r = tally(results);
    CHECK(r.apa_share_with_anova_no_r == Catch::Approx(50.0));
    CHECK(r.apa_share_without_anova_no_r == Catch::Approx(30.0));
    // the two shares differ exactly by the anova-no-r count
    CHECK(r.apa_share_with_anova_no_r - r.apa_share_without_anova_no_r ==
          Catch::Approx(100.0 * 2 / 10));
}

TEST_CASE("sampling") {
    std::vector<ExtractionResult> results;
    for (int i = 0; i < 350; ++i) {
        auto r = make_stat("t-test", true);
        r.index = static_cast<std::size_t>(i);
        results.push_back(r);
    }
    for (int i = 0; i < 7; ++i) results.push_back(make_stat("z-test", true));
    ExtractionResult rejected;
    rejected.outcome = Outcome::Rejected;
    results.push_back(rejected);

    const auto s = sample(results, 200, 42);
    const auto t_count = std::count_if(s.begin(), s.end(), [](const auto& r) { return r.statistic_type == "t-test"; });
    const auto z_count = std::count_if(s.begin(), s.end(), [](const auto& r) { return r.statistic_type == "z-test"; });
    CHECK(t_count == 200);
    CHECK(z_count == 7);
    CHECK(s.size() == 207);

    std::vector<std::size_t> a, b;
    for (const auto& r : s) a.push_back(r.index);
    for (const auto& r : sample(results, 200, 42)) b.push_back(r.index);
    CHECK(a == b);
    std::set<std::size_t> unique(a.begin(), a.end() - 7);
    CHECK(unique.size() == 200);
}

TEST_CASE("corpus loading") {
    const auto dir = std::filesystem::temp_directory_path() / "rexincl_corpus_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir / "sub");
    std::ofstream(dir / "b.txt") << "Second 2.";
    std::ofstream(dir / "sub" / "a.txt") << "First 1.";
    const Corpus c = load_corpus(dir);
    REQUIRE(c.documents.size() == 2);
    CHECK(c.documents[0].doc_id == "b.txt");
    CHECK(c.documents[1].doc_id == "sub/a.txt");

    const auto jsonl = dir / "corpus.jsonl";
    std::ofstream(jsonl) << R"({"doc_id": "x", "text": "One 1."})" << "\nbroken\n\n"
                         << R"({"doc_id": "y", "text": "Two 2."})" << "\n";
    const Corpus j = load_corpus(jsonl);
    CHECK(j.documents.size() == 2);
    CHECK(j.skipped == 1);

    std::ofstream(jsonl) << R"({"doc_id": "x", "text": "a"})" << "\n" << R"({"doc_id": "x", "text": "b"})" << "\n";
    CHECK_THROWS_AS(load_corpus(jsonl), FormatError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("fixture corpus matches its labels") {
    const auto rules = load_rules(testing::fixture("extraction_rules.jsonl"));
    const Corpus corpus = load_corpus(testing::fixture("extraction_corpus.jsonl"));
    std::ifstream in(testing::fixture("extraction_labels.json"));
    const auto labels = nlohmann::json::parse(in);
    const auto run = run_corpus(corpus.documents, RuleMatcher(rules));
    REQUIRE(run.results.size() == 30);
    for (const auto& r : run.results) {
        INFO(r.text);
        const auto& want = labels.at(r.doc_id);
        CHECK(outcome_name(r.outcome) == want.at("outcome").get<std::string>());
        if (r.outcome == Outcome::Statistic) {
            CHECK(r.statistic_type == want.at("statistic_type").get<std::string>());
            CHECK(r.apa == want.at("apa").get<bool>());
        }
    }
}

TEST_CASE("bench") {
    const std::vector<Rule> rules = {apa_t_test(), neg(10, R"([tT]able\s?\d+)"), neg(11, R"(table \d)")};
    const std::vector<Document> docs = {{"a", "See table 4. Then t(3) = 1.5, p < .2 held. Only 9 left."}};
    SECTION("identical rule sets") {
        const BenchReport r = bench(docs, rules, rules, 3);
        CHECK(r.outcomes_identical);
        CHECK(r.full.runs.size() == 3);
        CHECK(r.sentences == 3);
    }
    SECTION("a sound reduction") {
        const auto rep = compute_inclusions(rules);
        CHECK(rep.removed == std::set<RuleId>{11});
        CHECK(bench(docs, rules, reduce(rep, rules), 2).outcomes_identical);
    }
    SECTION("an unsound reduction") {
        CHECK_THROWS_AS(bench(docs, rules, {apa_t_test()}, 1), OutcomeMismatch);
    }
    CHECK_THROWS_AS(bench(docs, rules, rules, 0), Error);
}

TEST_CASE("reduction transparency on generated sentences") {
    // 40 general/specific pairs and 20 unrelated rules; the reduction keeps 60.
    std::vector<Rule> rules;
    RuleId id = 0;
    auto word = [](int k) { return std::string{"bcdfghjklmnpqrstvwxz"[k % 20], "aeiou"[k / 20], 'x'}; };
    for (int k = 0; k < 40; ++k) {
        rules.push_back(neg(id++, word(k) + "\\s?\\d+"));
        rules.push_back(neg(id++, word(k) + " \\d{1,3}"));
    }
    for (int k = 40; k < 60; ++k) rules.push_back(neg(id++, word(k) + "-\\d+[a-c]?"));
    REQUIRE(rules.size() == 100);

    ReduceOptions opts;
    opts.jobs = 4;
    const auto rep = compute_inclusions(rules, opts);
    const auto reduced = reduce(rep, rules);
    CHECK(reduced.size() == 60);

    std::mt19937_64 rng(2024);
    std::vector<Dfa> dfas;
    for (const Rule& r : rules) dfas.push_back(compile(r.raw()).dfa);
    std::vector<Document> docs;
    std::string text;
    for (int i = 0; i < 1000; ++i) {
        if (i % 10 == 9) {
            text += "Plain filler with 12 units. ";
        } else {
            const auto w = random_member(dfas[rng() % dfas.size()], rng);
            text += "Noted " + *w + " here. ";
        }
        if (i % 50 == 49) {
            docs.push_back({"doc" + std::to_string(i / 50), text});
            text.clear();
        }
    }
    const RuleMatcher full(rules), small(reduced);
    const auto a = run_corpus(docs, full, 4);
    const auto b = run_corpus(docs, small, 4);
    REQUIRE(a.results.size() == 1000);
    REQUIRE(a.results.size() == b.results.size());
    for (std::size_t i = 0; i < a.results.size(); ++i) CHECK(a.results[i].same_classification(b.results[i]));
    CHECK(a.report.rejected > 800);
}

TEST_CASE("result json") {
    const RuleMatcher m({apa_t_test()});
    const auto j = to_json(classify_text(m, "t(2) = 1.1, p = .4"));
    CHECK(j["outcome"] == "statistic");
    CHECK(j["matched_rule_id"] == 1);
    CHECK(j["values"]["df"] == "2");
    const auto u = to_json(classify_text(m, "only 5"));
    CHECK(u["matched_rule_id"].is_null());
    CHECK(u["values"].is_null());
}
