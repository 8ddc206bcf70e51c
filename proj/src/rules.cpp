#include "rexincl/rules.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "rexincl/errors.hpp"

namespace rexincl {

using nlohmann::json;

std::string_view polarity_name(Polarity p) { return p == Polarity::Positive ? "positive" : "negative"; }

bool is_statistic_type(std::string_view tag) {
    return std::find(std::begin(kStatisticTypes), std::end(kStatisticTypes), tag) != std::end(kStatisticTypes);
}

namespace {

Rule rule_from_json(const json& j, std::size_t line) {
    auto fail = [line](const std::string& what) -> FormatError { return FormatError(what, line); };
    if (!j.is_object()) throw fail("rule must be a JSON object");

    Rule r;
    if (!j.contains("id") || !j["id"].is_number_integer()) throw fail("missing integer \"id\"");
    r.id = j["id"].get<RuleId>();
    if (r.id < 0) throw fail("rule id must be non-negative");

    if (!j.contains("pattern") || !j["pattern"].is_string()) throw fail("missing string \"pattern\"");
    r.pattern = j["pattern"].get<std::string>();
    if (r.pattern.empty()) throw fail("empty pattern");

    if (!j.contains("polarity") || !j["polarity"].is_string()) throw fail("missing \"polarity\"");
    const std::string pol = j["polarity"].get<std::string>();
    if (pol == "positive")
        r.polarity = Polarity::Positive;
    else if (pol == "negative")
        r.polarity = Polarity::Negative;
    else
        throw fail("polarity must be \"positive\" or \"negative\"");

    if (j.contains("statistic_type") && !j["statistic_type"].is_null()) {
        if (!j["statistic_type"].is_string()) throw fail("statistic_type must be a string or null");
        r.statistic_type = j["statistic_type"].get<std::string>();
        if (!is_statistic_type(*r.statistic_type)) throw fail("unknown statistic_type \"" + *r.statistic_type + "\"");
    }
    if (j.contains("apa") && !j["apa"].is_null()) {
        if (!j["apa"].is_boolean()) throw fail("apa must be a boolean or null");
        r.apa = j["apa"].get<bool>();
    }
    if (j.contains("subrules") && !j["subrules"].is_null()) {
        if (!j["subrules"].is_array()) throw fail("subrules must be an array");
        for (const json& s : j["subrules"]) {
            if (!s.is_object() || !s.contains("name") || !s["name"].is_string() || !s.contains("pattern") ||
                !s["pattern"].is_string())
                throw fail("subrule needs string \"name\" and \"pattern\"");
            r.subrules.push_back({s["name"].get<std::string>(), s["pattern"].get<std::string>()});
        }
    }
    if (!r.subrules.empty() && r.polarity != Polarity::Positive) throw fail("only positive rules carry subrules");
    return r;
}

json rule_to_json(const Rule& r) {
    json subs = json::array();
    for (const SubRule& s : r.subrules) subs.push_back({{"name", s.name}, {"pattern", s.pattern}});
    return {{"id", r.id},
            {"pattern", r.pattern},
            {"polarity", polarity_name(r.polarity)},
            {"statistic_type", r.statistic_type ? json(*r.statistic_type) : json(nullptr)},
            {"apa", r.apa ? json(*r.apa) : json(nullptr)},
            {"subrules", subs}};
}

}  // namespace

std::vector<Rule> parse_rules(std::istream& in) {
    std::vector<Rule> rules;
    std::vector<std::size_t> lines;
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw FormatError(std::string("invalid JSON: ") + e.what(), line);
        }
        rules.push_back(rule_from_json(j, line));
        lines.push_back(line);
    }
    std::vector<std::size_t> order(rules.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rules[a].id < rules[b].id; });
    std::vector<Rule> sorted;
    sorted.reserve(rules.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && rules[order[k]].id == rules[order[k - 1]].id)
            throw DuplicateId("duplicate rule id " + std::to_string(rules[order[k]].id) + " (lines " +
                              std::to_string(lines[order[k - 1]]) + " and " + std::to_string(lines[order[k]]) + ")");
        sorted.push_back(std::move(rules[order[k]]));
    }
    return sorted;
}

std::vector<Rule> load_rules(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open rule file " + path.string(), 0);
    return parse_rules(in);
}

void write_rules(std::ostream& out, const std::vector<Rule>& rules) {
    for (const Rule& r : rules) out << rule_to_json(r).dump() << '\n';
}

void save_rules(const std::filesystem::path& path, const std::vector<Rule>& rules) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write rule file " + path.string(), 0);
    write_rules(out, rules);
}

}  // namespace rexincl
