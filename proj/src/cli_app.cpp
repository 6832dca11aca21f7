#include "mqunits/cli_app.hpp"

#include <chrono>
#include <iostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "mqunits/json_io.hpp"

namespace mqunits {

namespace {

constexpr int kOk = 0;
constexpr int kShortfall = 2;
constexpr int kAssertionFailed = 3;
constexpr int kUsage = 64;
constexpr int kBadInput = 65;

bool parse_bigint(const std::string& s, BigInt& out) {
    if (s.empty()) return false;
    return mpz_set_str(out.get_mpz_t(), s.c_str(), 10) == 0;
}

long elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start)
        .count();
}

// Wraps a long generator expression at product boundaries.
std::string wrap_expression(const std::string& expr, std::size_t width,
                            const std::string& indent) {
    if (expr.size() <= width) return expr;
    std::string out;
    std::size_t line = 0;
    for (std::size_t i = 0; i < expr.size(); ++i) {
        out += expr[i];
        ++line;
        if (expr[i] == '*' && line >= width) {
            out += "\n" + indent;
            line = indent.size();
        }
    }
    return out;
}

void print_triples_table(std::ostream& out, const TripleList& list) {
    out << "p\tq\ts\n";
    for (const auto& t : list.triples)
        out << t[0].get_str() << "\t" << t[1].get_str() << "\t"
            << t[2].get_str() << "\n";
    if (list.shortfall) out << "(shortfall: fewer triples than requested)\n";
}

void print_report_table(std::ostream& out, const TripleReport& rep) {
    out << "triple: p=" << rep.p.get_str() << " q=" << rep.q.get_str()
        << " s=" << rep.s.get_str() << "  (case " << rep.case_label << ")\n";
    out << "symbols: (p/q)=" << rep.sym_pq << " (p/s)=" << rep.sym_ps
        << " (s/q)=" << rep.sym_sq << "\n\n";

    out << "quadratic layer:\n";
    out << "  field      unit (x, y, denom, norm)            h2  expected  ok\n";
    for (const auto& e : rep.quad) {
        std::ostringstream unit;
        unit << "(" << e.unit.x.get_str() << ", " << e.unit.y.get_str() << ", "
             << e.unit.denom << ", " << e.unit.norm << ")";
        std::string u = unit.str();
        if (u.size() > 36) u = u.substr(0, 33) + "...";
        out << "  " << e.name << std::string(e.name.size() < 9 ? 9 - e.name.size() : 1, ' ')
            << u << std::string(u.size() < 37 ? 37 - u.size() : 1, ' ')
            << e.h2_computed.get_str() << "   " << e.h2_expected.get_str()
            << "         " << (e.match ? "yes" : "NO") << "\n";
    }
    out << "\nunit index: 2^" << rep.index_log2 << " (expected 2^"
        << rep.index_expected << "), fourth roots: " << rep.fourth_root_count
        << ", matches published system: "
        << (rep.unit_system_match ? "yes" : "NO");
    if (rep.case_label == 1 && rep.fourth_root_twist >= 0)
        out << " (fourth-root class: eps_pq^" << (1 + 2 * rep.fourth_root_twist)
            << "*eps_2pq*eps_qs*eps_2qs)";
    out << "\n";
    out << "fundamental system:\n";
    for (const auto& g : rep.unit_system)
        out << "  - " << wrap_expression(g, 96, "      ") << "\n";
    out << "\nh2(L+) = " << rep.h2_L_plus.get_str() << " (expected "
        << rep.h2_expected.get_str() << "); Cl_2 structure: " << rep.cl2_structure
        << "\n";

    std::size_t mismatches = 0;
    for (const auto& c : rep.norm_table)
        if (!c.match) ++mismatches;
    out << "norm table: " << rep.norm_table.size() << " cells, "
        << (mismatches == 0 ? "all match" : std::to_string(mismatches) + " MISMATCH")
        << "\n";

    out << "rank checks: N(eps_2) = " << rep.rank_check.norm_eps2.get_str()
        << ", (-1,p)_p = " << rep.rank_check.hilbert_minus1_p
        << ", h2(L3) = " << rep.rank_check.h2_L3.get_str() << " -> "
        << (rep.rank_check.pass ? "pass" : "FAIL") << "\n";

    out << "decomposition rules:";
    for (const auto& l : rep.lemma_checks)
        out << "  " << l.lemma_id << l.pair << (l.pass ? " pass" : " FAIL");
    out << "\n";

    for (const auto& o : rep.cm_outcomes)
        out << "cm ell=" << o.ell.get_str() << ": eta=" << o.eta
            << " branch=" << o.branch
            << (o.matches_theorem ? " (matches theorem)" : " (OUTSIDE THEOREM)")
            << "\n";

    out << "\nverdict: " << (rep.all_pass ? "PASS" : "FAIL") << "\n";
    if (!rep.all_pass) out << "failing stage: " << rep.failing_stage << "\n";
}

void print_lemma_table(std::ostream& out, const LemmaSummary& summary) {
    for (const auto& c : summary.checks) {
        out << c.lemma_id << " " << c.pair << ": "
            << (c.pass ? "pass" : "FAIL") << "\n";
        for (const auto& item : c.items) {
            out << "    d=" << item.d.get_str() << ": sqrt("
                << (item.scaling == 2 ? "2*" : "") << "eps) = "
                << item.coeff_1.get_str() << "*sqrt(" << item.radicand_1.get_str()
                << ") + " << item.coeff_2.get_str() << "*sqrt("
                << item.radicand_2.get_str() << "), witness "
                << item.witness_quantity.get_str() << " = "
                << item.square_witness.get_str() << "^2";
            if (item.unit_power == 3) out << "  [integral cube of eps]";
            out << "\n";
        }
        if (!c.note.empty()) out << "    note: " << c.note << "\n";
    }
    out << summary.lemma_id << ": " << summary.passed << "/" << summary.tested
        << " conforming samples pass"
        << (summary.shortfall ? " (shortfall)" : "") << "\n";
}

int run_find_triples(int case_label, const std::string& max_prime,
                     long count, const std::string& format, std::ostream& out) {
    BigInt bound;
    if (!parse_bigint(max_prime, bound)) {
        throw HypothesisError("--max-prime is not an integer");
    }
    auto start = std::chrono::steady_clock::now();
    TripleList list = find_triples(case_label, bound, count);
    if (format == "json") {
        Json results = Json::array();
        for (const auto& t : list.triples) results.push_back(triple_json(t));
        Json inputs{{"case", std::to_string(case_label)},
                    {"max_prime", bound.get_str()},
                    {"count", std::to_string(count)},
                    {"shortfall", list.shortfall}};
        out << dump_envelope(make_envelope("find-triples", inputs, results,
                                           elapsed_ms(start)))
            << "\n";
    } else if (format == "csv") {
        out << "p,q,s\n";
        for (const auto& t : list.triples)
            out << t[0].get_str() << "," << t[1].get_str() << ","
                << t[2].get_str() << "\n";
    } else {
        print_triples_table(out, list);
    }
    return list.shortfall ? kShortfall : kOk;
}

int run_verify(const std::string& p_str, const std::string& q_str,
               const std::string& s_str, const std::vector<std::string>& ells,
               const std::string& format, std::ostream& out) {
    BigInt p, q, s;
    if (!parse_bigint(p_str, p) || !parse_bigint(q_str, q) ||
        !parse_bigint(s_str, s))
        throw HypothesisError("p, q, s must be integers");
    std::vector<BigInt> ell_values;
    for (const auto& e : ells) {
        BigInt ell;
        if (!parse_bigint(e, ell)) throw HypothesisError("bad --ell value");
        ell_values.push_back(ell);
    }
    auto start = std::chrono::steady_clock::now();
    TripleReport rep = verify_triple(p, q, s, ell_values);
    if (format == "json") {
        Json inputs{{"p", p.get_str()},
                    {"q", q.get_str()},
                    {"s", s.get_str()},
                    {"ell", Json::array()}};
        for (const auto& e : ell_values) inputs["ell"].push_back(e.get_str());
        Json results = Json::array({to_json(rep)});
        out << dump_envelope(
                   make_envelope("verify", inputs, results, elapsed_ms(start)))
            << "\n";
    } else if (format == "csv") {
        out << "p,q,s,case,index_log2,h2,all_pass,failing_stage\n";
        out << rep.p.get_str() << "," << rep.q.get_str() << ","
            << rep.s.get_str() << "," << rep.case_label << "," << rep.index_log2
            << "," << rep.h2_L_plus.get_str() << ","
            << (rep.all_pass ? "true" : "false") << "," << rep.failing_stage
            << "\n";
    } else {
        print_report_table(out, rep);
    }
    return rep.all_pass ? kOk : kAssertionFailed;
}

int run_verify_lemma(const std::string& lemma, long samples,
                     const std::string& max_prime, int jobs,
                     const std::string& format, std::ostream& out) {
    BigInt bound = 0;
    if (!max_prime.empty() && !parse_bigint(max_prime, bound))
        throw HypothesisError("--max-prime is not an integer");
    auto start = std::chrono::steady_clock::now();
    LemmaSummary summary = verify_lemma(lemma, samples, bound, jobs);
    if (format == "json") {
        Json inputs{{"lemma", lemma},
                    {"samples", std::to_string(samples)},
                    {"max_prime", bound == 0 ? "auto" : bound.get_str()},
                    {"jobs", std::to_string(jobs)}};
        Json results = Json::array({to_json(summary)});
        out << dump_envelope(make_envelope("verify-lemma", inputs, results,
                                           elapsed_ms(start)))
            << "\n";
    } else if (format == "csv") {
        out << "lemma_id,subject,pass\n";
        for (const auto& c : summary.checks)
            out << c.lemma_id << "," << c.pair << ","
                << (c.pass ? "true" : "false") << "\n";
    } else {
        print_lemma_table(out, summary);
    }
    if (summary.passed < summary.tested) return kAssertionFailed;
    return summary.shortfall ? kShortfall : kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Exact unit groups and 2-class numbers of multiquadratic "
                 "fields Q(sqrt(2), sqrt(pq), sqrt(ps))"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::string format = "table";
    int jobs = 1;
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "table"}));
    app.add_option("--jobs", jobs, "Worker count for batch subcommands");

    auto* find_cmd =
        app.add_subcommand("find-triples", "List conforming prime triples");
    int case_label = 0;
    std::string max_prime;
    long count = 0;
    find_cmd->add_option("--case", case_label, "Symbol pattern: 1 or 2")
        ->required();
    find_cmd->add_option("--max-prime", max_prime, "Largest prime allowed (inclusive)")
        ->required();
    find_cmd->add_option("--count", count, "How many triples")->required();

    auto* verify_cmd =
        app.add_subcommand("verify", "Run the full pipeline on one triple");
    std::string p_str, q_str, s_str;
    std::vector<std::string> ells;
    verify_cmd->add_option("--p", p_str, "Prime = 5 (mod 8)")->required();
    verify_cmd->add_option("--q", q_str, "Prime = 7 (mod 8)")->required();
    verify_cmd->add_option("--s", s_str, "Prime = 3 (mod 8)")->required();
    verify_cmd->add_option("--ell", ells,
                           "CM radicand -ell (odd, squarefree, coprime to 2pqs); repeatable");

    auto* lemma_cmd = app.add_subcommand(
        "verify-lemma", "Check a decomposition rule over sampled inputs");
    std::string lemma;
    long samples = 0;
    std::string lemma_bound;
    lemma_cmd->add_option("--lemma", lemma, "Rule id (3.3 ... 4.3)")->required();
    lemma_cmd->add_option("--samples", samples, "Sample count")->required();
    lemma_cmd->add_option("--max-prime", lemma_bound,
                          "Fixed search bound (default: grow until enough samples)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    if (jobs < 1) {
        err << "usage error: --jobs must be >= 1\n";
        return kUsage;
    }

    try {
        if (find_cmd->parsed()) {
            if (case_label != 1 && case_label != 2) {
                err << "usage error: --case must be 1 or 2\n";
                return kUsage;
            }
            if (count < 1) {
                err << "usage error: --count must be >= 1\n";
                return kUsage;
            }
            return run_find_triples(case_label, max_prime, count, format, out);
        }
        if (verify_cmd->parsed())
            return run_verify(p_str, q_str, s_str, ells, format, out);
        if (lemma_cmd->parsed()) {
            try {
                decomp_rule_from_string(lemma);
            } catch (const std::invalid_argument&) {
                err << "usage error: unknown lemma id " << lemma << "\n";
                return kUsage;
            }
            if (samples < 1) {
                err << "usage error: --samples must be >= 1\n";
                return kUsage;
            }
            return run_verify_lemma(lemma, samples, lemma_bound, jobs, format,
                                    out);
        }
        err << "usage error: no subcommand\n";
        return kUsage;
    } catch (const HypothesisError& e) {
        err << "input error: " << e.what() << "\n";
        return kBadInput;
    } catch (const CounterexampleError& e) {
        err << "assertion failure: " << e.what() << "\n";
        return kAssertionFailed;
    } catch (const SizeLimitError& e) {
        err << "size limit: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace mqunits
