// elprov: command-line front end.
// Exit codes: 0 success / entailed, 1 not entailed, 2 usage or parse error,
// 3 resource limit exceeded.

#include "elprov/canonical_query.hpp"
#include "elprov/completion.hpp"
#include "elprov/relevance.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace elprov;
using nlohmann::json;

namespace {

constexpr int kEntailed = 0;
constexpr int kNotEntailed = 1;
constexpr int kUsage = 2;
constexpr int kResource = 3;

// Raised for errors already formatted as "where: message".
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string input;
    std::string output;
    bool json = false;
    bool general = false;
    std::optional<std::size_t> max_axioms;
    std::optional<long long> time_budget_ms;

    Limits limits() const
    {
        Limits l = Limits::from_env();
        if (max_axioms) l.max_axioms = *max_axioms;
        if (time_budget_ms) l.time_budget = std::chrono::milliseconds(*time_budget_ms);
        return l;
    }
};

std::string read_file(const std::string& path)
{
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw UsageError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Ontology load_ontology(const Common& c)
{
    if (c.input.empty()) throw UsageError("missing ontology: use -i FILE");
    auto text = read_file(c.input);
    ParseOptions opts;
    opts.translate_general = c.general;
    try {
        return parse_ontology(text, opts);
    } catch (const ParseError& e) {
        throw UsageError(c.input + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                         ": error: " + e.detail());
    }
}

Query load_query(const std::string& path)
{
    if (path.empty()) throw UsageError("missing query: use -q FILE");
    try {
        return parse_query(read_file(path));
    } catch (const QueryParseError& e) {
        std::string msg = e.what();
        throw UsageError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": error: " +
                         msg.substr(msg.find(": ") + 2));
    }
}

std::variant<Axiom, InstanceQueryTarget> parse_target_arg(const std::string& text)
{
    try {
        return parse_target(text);
    } catch (const ParseError& e) {
        throw UsageError("--axiom:" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                         ": error: " + e.detail());
    }
}

template <typename T>
T parse_algebra(const std::string& flag, const std::string& text)
{
    try {
        return T::parse(text);
    } catch (const AlgebraError& e) {
        throw UsageError(flag + ": error: " + e.what());
    }
}

const char* axiom_kind(const Axiom& a)
{
    return std::visit(
        [](const auto& x) -> const char* {
            using X = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<X, ConceptInclusion>) return "gci";
            else if constexpr (std::is_same_v<X, RoleInclusion>) return "ri";
            else if constexpr (std::is_same_v<X, RangeRestriction>) return "rr";
            else return "assertion";
        },
        a);
}

std::string target_string(const std::variant<Axiom, InstanceQueryTarget>& t)
{
    if (auto* a = std::get_if<Axiom>(&t)) return to_string(*a);
    const auto& iq = std::get<InstanceQueryTarget>(t);
    return "iq " + iq.query.str() + "(" + iq.individual + ")";
}

json axiom_json(const AnnotatedAxiom& a)
{
    return {{"axiom", to_string(a.axiom)}, {"annotation", a.annotation.str()}};
}

json stats_json(const SaturationStats& s)
{
    json rules = json::object();
    for (int i = 0; i < kCompletionRules; ++i) rules["CR" + std::to_string(i)] = s.rule_applications[i];
    return {{"rule_applications", rules}, {"updates", s.updates}, {"join_steps", s.join_steps}, {"axioms", s.axioms}};
}

json terms_json(const std::vector<Term>& ts)
{
    json out = json::array();
    for (const auto& t : ts) out.push_back(t.str());
    return out;
}

class Output {
public:
    explicit Output(const Common& c) : common_(c) {}

    void text(const std::string& s) { buf_ << s; }
    void emit_json(const json& j) { buf_ << j.dump(2) << "\n"; }

    void flush()
    {
        if (common_.output.empty() || common_.output == "-") {
            std::cout << buf_.str();
            return;
        }
        std::ofstream out(common_.output);
        if (!out) throw UsageError(common_.output + ": cannot write file");
        out << buf_.str();
    }

private:
    const Common& common_;
    std::ostringstream buf_;
};

void print_warnings(const std::vector<std::string>& ws)
{
    for (const auto& w : ws) std::cerr << "warning: " << w << "\n";
}

// ----------------------------------------------------------------- commands

int cmd_normalize(const Common& c)
{
    auto n = normalize(load_ontology(c));
    Output out(c);
    if (c.json) {
        json axioms = json::array();
        for (const auto& a : n.axioms()) axioms.push_back(axiom_json(a));
        out.emit_json({{"axioms", axioms}});
    } else {
        out.text(print_ontology(n));
    }
    out.flush();
    return 0;
}

int cmd_saturate(const Common& c, std::optional<std::size_t> k)
{
    SaturationOptions opts;
    opts.k = k;
    opts.limits = c.limits();
    auto sat = saturate(normalize(load_ontology(c)), opts);
    Output out(c);
    if (c.json) {
        json axioms = json::array();
        for (const auto& d : sat.axioms()) {
            auto j = axiom_json(d.axiom);
            j["derivations"] = d.derivations;
            axioms.push_back(j);
        }
        json j{{"axioms", axioms}, {"stats", stats_json(sat.stats())}};
        j["k"] = k ? json(*k) : json(nullptr);
        out.emit_json(j);
    } else {
        for (const auto& d : sat.axioms()) out.text(to_string(d.axiom) + "\n");
    }
    out.flush();
    return 0;
}

int cmd_entail(const Common& c, const std::string& kind, const std::string& axiom_text, const std::string& prov)
{
    auto o = load_ontology(c);
    auto target = parse_target_arg(axiom_text);
    auto m = parse_algebra<Monomial>("--prov", prov);
    std::string actual = std::holds_alternative<InstanceQueryTarget>(target) ? "iq" : axiom_kind(std::get<Axiom>(target));
    if (actual != kind) throw UsageError("--axiom: error: '" + axiom_text + "' is not of kind " + kind);

    EntailmentOptions opts;
    opts.limits = c.limits();
    Entailment e;
    if (auto* iq = std::get_if<InstanceQueryTarget>(&target))
        e = entails_iq(o, iq->query, iq->individual, m, opts);
    else
        e = entails(o, std::get<Axiom>(target), m, opts);
    print_warnings(e.warnings);

    Output out(c);
    if (c.json) {
        out.emit_json({{"kind", kind},
                       {"axiom", target_string(target)},
                       {"prov", m.str()},
                       {"entailed", e.entailed},
                       {"warnings", e.warnings}});
    } else {
        out.text(e.entailed ? "entailed\n" : "not entailed\n");
    }
    out.flush();
    return e.entailed ? kEntailed : kNotEntailed;
}

int cmd_relevant(const Common& c, const std::string& axiom_text)
{
    auto o = load_ontology(c);
    auto target = parse_target_arg(axiom_text);
    std::set<Variable> vars;
    if (auto* iq = std::get_if<InstanceQueryTarget>(&target))
        vars = relevant_variables_iq(o, iq->query, iq->individual, c.limits());
    else
        vars = relevant_variables(o, std::get<Axiom>(target), c.limits());
    Output out(c);
    if (c.json) {
        out.emit_json({{"axiom", target_string(target)}, {"variables", vars}});
    } else {
        std::string line;
        for (const auto& v : vars) line += (line.empty() ? "" : " ") + v;
        out.text(line + "\n");
    }
    out.flush();
    return 0;
}

int cmd_query(const Common& c, const std::string& query_file, const std::string& prov)
{
    auto o = load_ontology(c);
    auto q = load_query(query_file);
    auto p = parse_algebra<Polynomial>("--prov", prov);
    QueryAnswer a;
    try {
        a = answer_query(o, q, p, c.limits());
    } catch (const UnknownIndividual& e) {
        throw UsageError(query_file + ": error: " + e.what());
    }
    Output out(c);
    if (c.json) {
        out.emit_json({{"query", q.str()},
                       {"prov", p.str()},
                       {"provenance", a.provenance.str()},
                       {"matches", a.matches},
                       {"entailed", a.entailed}});
    } else {
        out.text(std::string(a.entailed ? "entailed" : "not entailed") + "\nprovenance: " + a.provenance.str() + "\n");
    }
    out.flush();
    return a.entailed ? kEntailed : kNotEntailed;
}

int cmd_model(const Common& c)
{
    auto I = build_canonical_model(load_ontology(c), c.limits());
    Output out(c);
    if (c.json) {
        out.emit_json(I.to_json());
    } else {
        auto j = I.to_json();
        for (const auto& e : j["elements"]) out.text("element " + e["id"].get<std::string>() + "\n");
        for (const auto& [name, ext] : j["concepts"].items())
            for (const auto& p : ext)
                out.text(name + "(" + p[0].get<std::string>() + ") @ " + p[1].get<std::string>() + "\n");
        for (const auto& [name, ext] : j["roles"].items())
            for (const auto& t : ext)
                out.text(name + "(" + t[0].get<std::string>() + ", " + t[1].get<std::string>() + ") @ " +
                         t[2].get<std::string>() + "\n");
    }
    out.flush();
    return 0;
}

int cmd_rewrite(const Common& c, const std::string& query_file)
{
    auto q = load_query(query_file);
    auto rw = compute_rewriting(q);
    Output out(c);
    if (c.json) {
        json sim = json::array();
        for (const auto& cls : rw.sim) sim.push_back(terms_json(cls));
        json forks = json::array();
        for (const auto& f : rw.forks)
            forks.push_back({{"pre", terms_json(f.pre)}, {"class", terms_json(f.cls)}, {"rep", f.rep.str()}});
        json cyc = json::array();
        for (const auto& x : rw.cyc) cyc.push_back("?" + x);
        out.emit_json({{"query", q.str()}, {"sim", sim}, {"cyc", cyc}, {"forks", forks}, {"merges", rw.merges}});
    } else {
        out.text(format_rewriting(q, rw));
    }
    out.flush();
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Provenance-annotated ELHr reasoning"};
    app.require_subcommand(1);
    Common common;

    auto add_common = [&](CLI::App* sub, bool needs_ontology) {
        if (needs_ontology) sub->add_option("-i,--input", common.input, "ontology file ('-' for stdin)")->required();
        sub->add_flag("--json", common.json, "machine-readable output");
        sub->add_option("-o,--output", common.output, "write output to FILE");
        if (needs_ontology) {
            sub->add_flag("--general", common.general, "translate conjunctions and some(R, C) on right-hand sides");
            sub->add_option("--max-axioms", common.max_axioms, "cap on derived axioms (default ELPROV_MAX_AXIOMS or 1e6)");
            sub->add_option("--time-budget", common.time_budget_ms, "wall-clock budget in ms (0: none)");
        }
    };

    auto* normalize_cmd = app.add_subcommand("normalize", "print the normalized ontology");
    add_common(normalize_cmd, true);

    std::optional<std::size_t> k;
    auto* saturate_cmd = app.add_subcommand("saturate", "print the completion of the ontology");
    add_common(saturate_cmd, true);
    saturate_cmd->add_option("--k", k, "keep annotations with at most N variables");

    std::string kind, axiom_text, prov, query_file;
    auto* entail_cmd = app.add_subcommand("entail", "decide an annotated entailment");
    add_common(entail_cmd, true);
    entail_cmd->add_option("--kind", kind, "axiom kind")
        ->required()
        ->check(CLI::IsMember({"assertion", "gci", "ri", "rr", "iq"}));
    entail_cmd->add_option("--axiom", axiom_text, "e.g. \"ca Mayor(Brugnaro)\" or \"iq some(R, A)(a)\"")->required();
    entail_cmd->add_option("--prov", prov, "monomial, e.g. v1*v2")->required();

    auto* relevant_cmd = app.add_subcommand("relevant", "variables relevant to an axiom");
    add_common(relevant_cmd, true);
    relevant_cmd->add_option("--axiom", axiom_text, "axiom or instance query")->required();

    auto* query_cmd = app.add_subcommand("query", "decide a conjunctive query with provenance");
    add_common(query_cmd, true);
    query_cmd->add_option("-q,--query", query_file, "query file")->required();
    query_cmd->add_option("--prov", prov, "polynomial, e.g. \"2 v1*v2 + v3\"")->required();

    auto* model_cmd = app.add_subcommand("model", "dump the canonical model");
    add_common(model_cmd, true);

    auto* rewrite_cmd = app.add_subcommand("rewrite", "print the rewritten query");
    add_common(rewrite_cmd, false);
    rewrite_cmd->add_option("-q,--query", query_file, "query file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*normalize_cmd) return cmd_normalize(common);
        if (*saturate_cmd) return cmd_saturate(common, k);
        if (*entail_cmd) return cmd_entail(common, kind, axiom_text, prov);
        if (*relevant_cmd) return cmd_relevant(common, axiom_text);
        if (*query_cmd) return cmd_query(common, query_file, prov);
        if (*model_cmd) return cmd_model(common);
        if (*rewrite_cmd) return cmd_rewrite(common, query_file);
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    } catch (const ResourceLimitExceeded& e) {
        std::cerr << "error: " << e.what() << " (" << e.stats().axioms << " axioms derived)\n";
        return kResource;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
