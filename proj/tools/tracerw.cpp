// tracerw: interpret, compare, rewrite and simulate string diagrams.
//
// Exit codes: 0 ok / equal, 1 unequal / mismatch, 2 user error, 3 budget exhausted.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <tracerw/tracerw.hpp>

using namespace tracerw;
using nlohmann::json;

namespace {

enum Exit { Ok = 0, Unequal = 1, UserError = 2, Budget = 3 };

struct UserFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UserFailure("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw UserFailure("cannot write '" + path + "'");
    out << text;
}

Term load_term(const std::string& path, const Signature& sig) {
    try {
        return parse(slurp(path), sig, circuits::circuit_atom);
    } catch (const std::invalid_argument& e) {
        throw UserFailure(path + ":" + e.what());
    }
}

Signature load_signature(const std::string& path) {
    if (path.empty()) return circuits::circuit_signature();
    try {
        return parse_signature(slurp(path));
    } catch (const std::invalid_argument& e) {
        throw UserFailure(path + ":" + e.what());
    }
}

std::vector<RewriteRule> load_rules(const std::string& path, const Signature& sig) {
    json doc = io::parse_json(slurp(path));
    if (!doc.is_array()) throw UserFailure(path + ": expected an array of rules");
    std::vector<RewriteRule> rules;
    for (const json& r : doc) {
        if (!r.is_object()) throw UserFailure(path + ": each rule must be an object");
        for (const auto& [k, v] : r.items())
            if (k != "name" && k != "lhs" && k != "rhs" && k != "i" && k != "j")
                throw UserFailure(path + ": unknown rule field '" + k + "'");
        for (const char* k : {"name", "lhs", "rhs", "i", "j"})
            if (!r.contains(k)) throw UserFailure(path + ": rule lacks '" + k + "'");
        if (!r["name"].is_string() || !r["lhs"].is_string() || !r["rhs"].is_string() ||
            !r["i"].is_number_unsigned() || !r["j"].is_number_unsigned())
            throw UserFailure(path + ": rule fields have the wrong types");
        std::string name = r["name"];
        Term lhs, rhs;
        try {
            lhs = parse(r["lhs"].get<std::string>(), sig, circuits::circuit_atom);
            rhs = parse(r["rhs"].get<std::string>(), sig, circuits::circuit_atom);
        } catch (const std::invalid_argument& e) {
            throw UserFailure("rule '" + name + "': " + e.what());
        }
        if (lhs->dom != r["i"].get<std::size_t>() || lhs->cod != r["j"].get<std::size_t>())
            throw UserFailure("rule '" + name + "': i and j do not match the type of lhs");
        rules.push_back(make_rule(name, lhs, rhs));
    }
    return rules;
}

std::vector<std::vector<circuits::Value>> parse_stream(const std::string& text, std::size_t width,
                                                       std::size_t ticks) {
    using circuits::Value;
    std::vector<std::vector<Value>> out;
    if (width == 0) {
        if (!text.empty()) throw UserFailure("circuit has no inputs; use --ticks");
        return std::vector<std::vector<Value>>(ticks);
    }
    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        std::string cur;
        std::istringstream in(s);
        while (std::getline(in, cur, sep)) parts.push_back(cur);
        if (!s.empty() && s.back() == sep) parts.emplace_back();
        return parts;
    };
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t"), e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    // single-input circuits may list ticks with commas
    char tick_sep = width == 1 && text.find(';') == std::string::npos ? ',' : ';';
    for (const std::string& tick : split(text, tick_sep)) {
        std::vector<Value> vs;
        for (const std::string& w : width == 1 ? std::vector<std::string>{tick} : split(tick, ',')) {
            auto v = circuits::parse_value(trim(w));
            if (!v) throw UserFailure("bad value '" + trim(w) + "' (expected t, f, bot or top)");
            vs.push_back(*v);
        }
        if (vs.size() != width)
            throw UserFailure("tick '" + tick + "' has " + std::to_string(vs.size()) + " values, circuit takes " +
                              std::to_string(width));
        out.push_back(std::move(vs));
    }
    return out;
}

std::string waveform(const std::vector<std::vector<circuits::Value>>& ticks) {
    std::string s;
    for (std::size_t k = 0; k < ticks.size(); ++k) {
        if (k) s += "; ";
        for (std::size_t w = 0; w < ticks[k].size(); ++w) s += (w ? "," : "") + std::string(circuits::name(ticks[k][w]));
    }
    return s;
}

int cmd_interp(const std::string& file, const std::string& sig_file, const std::string& json_out,
               const std::string& dot_out) {
    Term t = load_term(file, load_signature(sig_file));
    Cospan c = interpret(t);
    spit(json_out, io::to_json(c).dump(2) + "\n");
    if (!dot_out.empty()) spit(dot_out, io::to_dot(c));
    std::cerr << "class: " << to_string(classify(c)) << "\n";
    return Ok;
}

int cmd_iso(const std::string& a, const std::string& b, const std::string& sig_file, bool comonoid) {
    Signature sig = load_signature(sig_file);
    Term ta = load_term(a, sig), tb = load_term(b, sig);
    if (ta->dom != tb->dom || ta->cod != tb->cod) throw UserFailure("terms have different types");
    if (!comonoid && (uses_comonoid(ta) || uses_comonoid(tb)))
        throw UserFailure("copy/discard used without --comonoid");
    auto iso = cospan_isomorphism(interpret(ta), interpret(tb));
    if (!iso) {
        std::cout << "not equal\n";
        return Unequal;
    }
    std::cout << "equal\nvertices:";
    for (std::size_t v = 0; v < iso->vmap.size(); ++v) std::cout << " " << v << "->" << iso->vmap[v];
    std::cout << "\nedges:";
    for (std::size_t e = 0; e < iso->emap.size(); ++e) std::cout << " " << e << "->" << iso->emap[e];
    std::cout << "\n";
    return Ok;
}

int cmd_rewrite(const std::string& file, const std::string& rules_file, const std::string& sig_file,
                const std::string& mode_name, const std::string& strategy_name, std::size_t max_steps,
                const std::string& log_out, bool local) {
    Signature sig = load_signature(sig_file);
    Term t = load_term(file, sig);
    std::vector<RewriteRule> rules;
    if (!rules_file.empty()) rules = load_rules(rules_file, sig);
    if (local) {
        auto lr = circuits::local_rules();
        rules.insert(rules.end(), lr.begin(), lr.end());
    }
    Mode mode = mode_name == "traced" ? Mode::Traced : Mode::TracedComonoid;
    Strategy strategy = strategy_name == "first_match" ? Strategy::FirstMatch : Strategy::Exhaustive;
    Cospan host = interpret(t);
    if (!valid_for(host, mode))
        throw UserFailure(mode == Mode::Traced ? "term is not partial monogamous; try --mode comonoid"
                                               : "term is not partial left-monogamous");
    for (const RewriteRule& r : rules) {
        try {
            validate_rule(r, mode);
        } catch (const std::invalid_argument& e) {
            throw UserFailure(e.what());
        }
    }
    NormalizeResult nr = normalize(host, rules, mode, strategy, max_steps);
    std::string log;
    for (const std::string& line : nr.log) log += line + "\n";
    if (!log_out.empty()) spit(log_out, log);
    std::cout << to_string(extract(nr.result, mode == Mode::TracedComonoid)) << "\n";
    if (nr.budget_exhausted) {
        std::cerr << "step budget of " << max_steps << " exhausted\n";
        return Budget;
    }
    return Ok;
}

int cmd_circuit(const std::string& file, const std::string& inputs, std::size_t ticks, bool check, bool mealy,
                bool dump) {
    Term t;
    try {
        t = circuits::parse_circuit(slurp(file));
    } catch (const std::invalid_argument& e) {
        throw UserFailure(file + ":" + e.what());
    }
    if (mealy) {
        std::cout << to_string(circuits::to_mealy_form(t)) << "\n";
        return Ok;
    }
    auto stream = parse_stream(inputs, t->dom, ticks);
    auto outs = circuits::run(t, stream);
    if (dump)
        for (std::size_t k = 0; k < outs.size(); ++k)
            std::cout << "in=" << circuits::format_tuple(stream[k]) << " out=" << circuits::format_tuple(outs[k])
                      << "\n";
    else
        std::cout << waveform(outs) << "\n";
    if (check) {
        auto want = circuits::oracle_simulate(t, stream);
        if (want != outs) {
            std::cout << "oracle: " << waveform(want) << "\n";
            return Unequal;
        }
        std::cerr << "oracle agrees\n";
    }
    return Ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"string diagram rewriting with traced cospans"};
    app.require_subcommand(1);

    std::string sig_file, dot_out, json_out = "-";
    std::string file, file_b, rules_file, mode = "traced", strategy = "exhaustive", log_out, inputs;
    std::size_t max_steps = 1000, ticks = 1;
    bool comonoid = false, check = false, local = false, mealy = false, dump = false;

    auto* interp = app.add_subcommand("interp", "interpret a term as a cospan of hypergraphs");
    interp->add_option("term", file, "term file")->required();
    interp->add_option("--sig", sig_file, "signature file (default: circuit gates)");
    interp->add_option("--json", json_out, "where to write the cospan JSON ('-' for stdout)");
    interp->add_option("--dot", dot_out, "write a DOT rendering here");

    auto* iso = app.add_subcommand("iso", "decide equality of two terms modulo the axioms");
    iso->add_option("a", file, "first term file")->required();
    iso->add_option("b", file_b, "second term file")->required();
    iso->add_option("--sig", sig_file, "signature file (default: circuit gates)");
    iso->add_flag("--comonoid", comonoid, "allow copy and discard");

    auto* rewrite = app.add_subcommand("rewrite", "rewrite a term to normal form");
    rewrite->add_option("term", file, "term file")->required();
    rewrite->add_option("rules", rules_file, "rules file (JSON)");
    rewrite->add_option("--sig", sig_file, "signature file (default: circuit gates)");
    rewrite->add_option("--mode", mode, "traced or comonoid")->check(CLI::IsMember({"traced", "comonoid"}));
    rewrite->add_option("--strategy", strategy, "first_match or exhaustive")
        ->check(CLI::IsMember({"first_match", "exhaustive"}));
    rewrite->add_option("--max-steps", max_steps, "step budget");
    rewrite->add_option("--log", log_out, "write the step log here ('-' for stdout)");
    rewrite->add_flag("--local-rules", local, "add the circuit value rules");

    auto* circuit = app.add_subcommand("circuit", "run a sequential circuit through the rewriting pipeline");
    circuit->add_option("circuit", file, "circuit file")->required();
    circuit->add_option("--inputs", inputs, "ticks separated by ';', wires by ','");
    circuit->add_option("--ticks", ticks, "number of ticks for circuits without inputs");
    circuit->add_flag("--check", check, "compare with the direct simulator");
    circuit->add_flag("--mealy", mealy, "print the Mealy form instead of running");
    circuit->add_flag("--waveform", dump, "one line per tick: in=<tuple> out=<tuple>");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Ok : UserError;
    }

    try {
        if (*interp) return cmd_interp(file, sig_file, json_out, dot_out);
        if (*iso) return cmd_iso(file, file_b, sig_file, comonoid);
        if (*rewrite) return cmd_rewrite(file, rules_file, sig_file, mode, strategy, max_steps, log_out, local);
        if (*circuit) return cmd_circuit(file, inputs, ticks, check, mealy, dump);
    } catch (const UserFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return UserError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return UserError;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return UserError;
    }
    return UserError;
}
