// covnum: command-line front end for the covering-number toolkit.
//
// Exit status: 0 true, 1 false, 2 input error, 3 resource bound,
// 4 search budget exceeded.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "covnum/conjecture.hpp"
#include "covnum/constructors.hpp"
#include "covnum/cover.hpp"
#include "covnum/cover_json.hpp"
#include "covnum/decider.hpp"
#include "json.hpp"

using namespace covnum;
using nlohmann::json;

namespace {

enum Exit { kTrue = 0, kFalse = 1, kInput = 2, kResource = 3, kBudget = 4 };

struct RunConfig {
    std::uint64_t max_nodes = 100'000'000;
    double max_seconds = 60;
    std::string cache = ".covnum-cache.jsonl";
    bool no_cache = false;
    bool as_json = false;
    std::string output;  // empty: stdout

    SearchBudget budget() const {
        SearchBudget b;
        b.max_nodes = max_nodes;
        b.max_elapsed = std::chrono::milliseconds(static_cast<std::int64_t>(max_seconds * 1000));
        b.validate();
        return b;
    }

    Decider decider() const {
        if (no_cache) return Decider(budget());
        auto parent = std::filesystem::absolute(cache).parent_path();
        if (!std::filesystem::is_directory(parent)) {
            throw PreconditionError("cache directory " + parent.string() + " does not exist");
        }
        return Decider(budget(), std::filesystem::path(cache));
    }
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw PreconditionError("cannot open output file " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::vector<u64> parse_list(const std::string& text) {
    std::vector<u64> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            throw ParseError("not an integer list: " + text);
        }
        if (used != item.size() || item.empty() || item[0] == '-') {
            throw ParseError("not an integer list: " + text);
        }
        out.push_back(v);
    }
    if (out.empty()) throw ParseError("empty integer list");
    return out;
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string fact_str(const Factorization& f) {
    std::string s;
    for (const auto& [p, a] : f) {
        if (!s.empty()) s += "*";
        s += std::to_string(p);
        if (a != 1) s += "^" + std::to_string(a);
    }
    return s.empty() ? "1" : s;
}

std::string join(const std::vector<u64>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

int cmd_verify(const RunConfig& cfg, const std::string& path) {
    auto sys = parse_cover(read_input(path));
    auto rep = verify_cover(sys);
    Output out(cfg.output);
    std::uint32_t wmin = UINT32_MAX, wmax = 0;
    std::uint64_t wsum = 0;
    for (auto w : rep.multiplicity) {
        wmin = std::min(wmin, w);
        wmax = std::max(wmax, w);
        wsum += w;
    }
    if (cfg.as_json) {
        json j{{"N", rep.period}, {"k", sys.size()}, {"cover", rep.is_cover}};
        j["witness"] = rep.witness ? json(*rep.witness) : json(nullptr);
        j["minimal"] = rep.is_cover ? json(rep.is_minimal) : json(nullptr);
        j["redundant"] = rep.redundant_indices;
        j["w"] = {{"min", wmin}, {"max", wmax}, {"sum", wsum}};
        out.os() << j.dump() << '\n';
    } else {
        if (rep.is_cover) {
            out.os() << "cover: yes, minimal: " << (rep.is_minimal ? "yes" : "no") << ", N=" << rep.period << '\n';
            for (auto i : rep.redundant_indices) out.os() << "redundant: " << sys[i].str() << '\n';
        } else {
            out.os() << "cover: no, witness: " << *rep.witness << '\n';
        }
        out.os() << "classes: " << sys.str() << '\n';
        out.os() << "w: min=" << wmin << " max=" << wmax << " sum=" << wsum << " over N=" << rep.period
                 << " (density " << density(sys) << ")\n";
    }
    return rep.is_cover ? kTrue : kFalse;
}

struct ConstructArgs {
    std::string primes, exponents, cor11, thm13;
};

int cmd_construct(const RunConfig& cfg, const ConstructArgs& a) {
    int modes = !a.primes.empty() + !a.cor11.empty() + !a.thm13.empty();
    if (modes != 1) throw ParseError("give exactly one of --primes, --cor11, --thm13");
    std::optional<ExponentPlan> plan;
    if (!a.primes.empty()) {
        if (a.exponents.empty()) throw ParseError("--primes needs --exponents");
        std::vector<unsigned> exps;
        for (u64 e : parse_list(a.exponents)) {
            if (e == 0 || e > 63) throw ParseError("exponent out of range");
            exps.push_back(static_cast<unsigned>(e));
        }
        plan.emplace(parse_list(a.primes), exps, Claim::unclaimed);
    } else if (!a.cor11.empty()) {
        plan.emplace(corollary11_exponents(parse_list(a.cor11)));
    } else {
        plan.emplace(theorem13_plan(parse_list(a.thm13)));
    }
    auto sys = theorem11_cover(*plan);
    auto rep = verify_cover(sys);
    if (!rep.is_cover) throw Error("internal: construction for " + plan->str() + " is not a cover");
    Output out(cfg.output);
    if (cfg.as_json) {
        json j{{"n", plan->value()},
               {"primes", plan->primes()},
               {"exponents", plan->exponents()},
               {"claimed", claim_name(plan->claimed())},
               {"cover", to_json(sys)}};
        out.os() << j.dump() << '\n';
    } else {
        std::cerr << "plan: " << plan->str() << " = " << plan->value() << " (" << claim_name(plan->claimed())
                  << "), " << sys.size() << " classes, minimal: " << (rep.is_minimal ? "yes" : "no") << '\n';
        out.os() << dump_cover(sys) << '\n';
    }
    return kTrue;
}

json record_json(const DecisionRecord& r) {
    json j{{"n", r.n}, {"covering", r.is_covering}};
    j["certificate"] = r.certificate ? to_json(*r.certificate) : json(nullptr);
    j["rejection"] = r.rejection ? json(rejection_name(*r.rejection)) : json(nullptr);
    j["nodes"] = r.nodes_explored;
    j["cached"] = r.from_cache;
    return j;
}

int cmd_decide(const RunConfig& cfg, u64 n) {
    auto decider = cfg.decider();
    Output out(cfg.output);
    const auto& r = decider.decide_covering(n);
    if (cfg.as_json) {
        out.os() << record_json(r).dump() << '\n';
    } else if (r.is_covering) {
        out.os() << n << ": covering\ncertificate: " << r.certificate->canonical().str() << '\n';
    } else {
        out.os() << n << ": not covering (" << rejection_name(*r.rejection) << ")\n";
    }
    return r.is_covering ? kTrue : kFalse;
}

int cmd_primitive(const RunConfig& cfg, u64 n) {
    auto decider = cfg.decider();
    Output out(cfg.output);
    bool prim = decider.is_primitive_covering(n);
    const auto& r = decider.decide_covering(n);
    if (cfg.as_json) {
        auto j = record_json(r);
        j["primitive"] = prim;
        out.os() << j.dump() << '\n';
    } else if (prim) {
        out.os() << n << ": primitive covering number\ncertificate: " << r.certificate->canonical().str() << '\n';
    } else if (r.is_covering) {
        for (const auto& [p, e] : factor(n)) {
            if (decider.is_covering(n / p)) {
                out.os() << n << ": covering, not primitive (" << n / p << " is covering)\n";
                break;
            }
        }
    } else {
        out.os() << n << ": not covering (" << rejection_name(*r.rejection) << ")\n";
    }
    return prim ? kTrue : kFalse;
}

void print_catalog(std::ostream& os, const PrimitiveCatalog& cat, bool as_json) {
    if (as_json) {
        os << catalog_json(cat).dump() << '\n';
        return;
    }
    for (const auto& e : cat.entries) {
        os << e.n << " = " << fact_str(e.factorization) << "  ordering: "
           << (e.ordering ? join(*e.ordering) : "none") << '\n';
    }
    os << cat.entries.size() << " primitive covering numbers <= " << cat.bound << " (density-filter "
       << cat.count(Outcome::density_filter) << ", totient-filter " << cat.count(Outcome::totient_filter)
       << ", covering-divisor " << cat.count(Outcome::covering_divisor) << ", search-exhausted "
       << cat.count(Outcome::not_covering) << ")\n";
}

int cmd_enumerate(const RunConfig& cfg, u64 bound) {
    auto decider = cfg.decider();
    Output out(cfg.output);
    auto cat = enumerate_primitive(bound, decider);
    print_catalog(out.os(), cat, cfg.as_json);
    return kTrue;
}

int cmd_conjecture(const RunConfig& cfg, u64 bound) {
    auto decider = cfg.decider();
    Output out(cfg.output);
    auto cat = enumerate_primitive(bound, decider);
    std::vector<const CatalogEntry*> bad;
    for (const auto& e : cat.entries) {
        if (!e.ordering) bad.push_back(&e);
    }
    if (cfg.as_json) {
        json j{{"bound", bound}, {"checked", cat.entries.size()}, {"holds", bad.empty()}};
        j["counterexamples"] = json::array();
        for (const auto* e : bad) j["counterexamples"].push_back(e->n);
        j["catalog"] = catalog_json(cat);
        out.os() << j.dump() << '\n';
    } else {
        print_catalog(out.os(), cat, false);
        if (bad.empty()) {
            out.os() << "ordering condition holds for all " << cat.entries.size() << " entries\n";
        }
        for (const auto* e : bad) {
            out.os() << "COUNTEREXAMPLE: " << e->n << " = " << fact_str(e->factorization)
                     << " has no admissible prime ordering; certificate " << e->certificate.str() << '\n';
        }
    }
    return bad.empty() ? kTrue : kFalse;
}

int cmd_fulldiv(const RunConfig& cfg, u64 n) {
    auto decider = cfg.decider();
    Output out(cfg.output);
    auto res = full_divisor_set_report(n, decider);
    if (cfg.as_json) {
        json j{{"n", n}, {"holds", res.holds}, {"covers_seen", res.covers_seen}};
        j["counterexample"] = res.counterexample ? to_json(*res.counterexample) : json(nullptr);
        out.os() << j.dump() << '\n';
    } else if (res.holds) {
        out.os() << n << ": every minimal cover inside D_" << n << " uses all " << proper_moduli(n).size()
                 << " moduli (" << res.covers_seen << " covers checked)\n";
    } else {
        out.os() << n << ": minimal cover with a smaller moduli set: " << res.counterexample->str() << '\n';
    }
    return res.holds ? kTrue : kFalse;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Covering systems with distinct moduli: verify, construct and decide covering numbers"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.add_option("--max-nodes", cfg.max_nodes, "search node limit per decision")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-seconds", cfg.max_seconds, "search time limit per decision")
        ->check(CLI::PositiveNumber);
    app.add_option("--cache", cfg.cache, "decision cache file");
    app.add_flag("--no-cache", cfg.no_cache, "do not read or write the decision cache");
    app.add_flag("--json", cfg.as_json, "machine-readable output");
    app.add_option("-o,--output", cfg.output, "write results here instead of stdout");

    std::string cover_file;
    auto* verify = app.add_subcommand("verify", "check whether a cover JSON file covers Z");
    verify->add_option("file", cover_file, "cover JSON, or - for stdin")->required();

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "build the explicit cover for an exponent plan");
    construct->add_option("--primes", ca.primes, "comma-separated increasing primes");
    construct->add_option("--exponents", ca.exponents, "comma-separated exponents");
    construct->add_option("--cor11", ca.cor11, "primes; exponents from the ceiling formula");
    construct->add_option("--thm13", ca.thm13, "primes; primitive plan");

    u64 n = 0;
    auto* decide = app.add_subcommand("decide", "is n a covering number");
    decide->add_option("n", n)->required();
    auto* primitive = app.add_subcommand("primitive", "is n a primitive covering number");
    primitive->add_option("n", n)->required();
    auto* enumerate = app.add_subcommand("enumerate", "all primitive covering numbers up to a bound");
    enumerate->add_option("bound", n)->required();
    auto* conjecture = app.add_subcommand("conjecture", "check the prime-ordering condition up to a bound");
    conjecture->add_option("bound", n)->required();
    auto* fulldiv = app.add_subcommand("fulldiv", "do all minimal covers inside D_n use every divisor");
    fulldiv->add_option("n", n)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kTrue : kInput;
    }

    try {
        if (*verify) return cmd_verify(cfg, cover_file);
        if (*construct) return cmd_construct(cfg, ca);
        if (*decide) return cmd_decide(cfg, n);
        if (*primitive) return cmd_primitive(cfg, n);
        if (*enumerate) return cmd_enumerate(cfg, n);
        if (*conjecture) return cmd_conjecture(cfg, n);
        if (*fulldiv) return cmd_fulldiv(cfg, n);
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBudget;
    } catch (const SieveBoundError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kResource;
    } catch (const DivisibilityPreconditionError& e) {
        std::cerr << "error: divisibility precondition: " << e.what() << '\n';
        return kInput;
    } catch (const SizePreconditionError& e) {
        std::cerr << "error: size precondition: " << e.what() << '\n';
        return kInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    }
    return kInput;
}
