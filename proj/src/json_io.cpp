#include "mqunits/json_io.hpp"

namespace mqunits {

std::string str(const BigInt& n) { return n.get_str(); }
std::string str(const BigRat& q) { return q.get_str(); }

Json to_json(const QuadUnit& u) {
    return Json{{"d", str(u.d)},
                {"x", str(u.x)},
                {"y", str(u.y)},
                {"denom", std::to_string(u.denom)},
                {"norm", std::to_string(u.norm)}};
}

Json to_json(const DecompositionReport& rep) {
    return Json{{"lemma_id", rep.lemma_id},
                {"item", std::to_string(rep.item)},
                {"d", str(rep.d)},
                {"unit_x", str(rep.unit_x)},
                {"unit_y", str(rep.unit_y)},
                {"unit_power", std::to_string(rep.unit_power)},
                {"fundamental_is_integral", rep.fundamental_is_integral},
                {"system_index", std::to_string(rep.system_index)},
                {"sign", std::to_string(rep.sign)},
                {"scaling", std::to_string(rep.scaling)},
                {"radicand_1", str(rep.radicand_1)},
                {"coeff_1", str(rep.coeff_1)},
                {"radicand_2", str(rep.radicand_2)},
                {"coeff_2", str(rep.coeff_2)},
                {"relation_sign", std::to_string(rep.relation_sign)},
                {"witness_quantity", str(rep.witness_quantity)},
                {"square_witness", str(rep.square_witness)}};
}

Json to_json(const LemmaCheck& check) {
    Json items = Json::array();
    for (const auto& item : check.items) items.push_back(to_json(item));
    return Json{{"lemma_id", check.lemma_id},
                {"subject", check.pair},
                {"pass", check.pass},
                {"note", check.note},
                {"items", std::move(items)}};
}

Json to_json(const CMOutcome& outcome) {
    return Json{{"ell", str(outcome.ell)},
                {"eta", outcome.eta},
                {"branch", outcome.branch},
                {"matches_theorem", outcome.matches_theorem},
                {"replacement", outcome.replacement_symbol}};
}

Json to_json(const RankCheckReport& rep) {
    Json sub = Json::object();
    for (const auto& [d, h2] : rep.l3_subfield_h2) sub[str(d)] = str(h2);
    return Json{{"norm_eps2", str(rep.norm_eps2)},
                {"hilbert_minus1_p", std::to_string(rep.hilbert_minus1_p)},
                {"l3_index_log2", std::to_string(rep.l3_index_log2)},
                {"l3_subfield_h2", std::move(sub)},
                {"h2_L3", str(rep.h2_L3)},
                {"pass", rep.pass}};
}

Json to_json(const TripleReport& rep) {
    Json quad = Json::array();
    for (const auto& e : rep.quad)
        quad.push_back(Json{{"name", e.name},
                            {"radicand", str(e.radicand)},
                            {"unit", to_json(e.unit)},
                            {"h2", str(e.h2_computed)},
                            {"h2_expected", str(e.h2_expected)},
                            {"match", e.match}});
    Json cells = Json::array();
    for (const auto& c : rep.norm_table)
        cells.push_back(Json{{"row", c.row},
                             {"column", c.column},
                             {"expected", c.expected},
                             {"computed", c.computed},
                             {"sign_determined", c.sign_determined},
                             {"match", c.match}});
    Json lemmas = Json::array();
    for (const auto& l : rep.lemma_checks) lemmas.push_back(to_json(l));
    Json cm = Json::array();
    for (const auto& o : rep.cm_outcomes) cm.push_back(to_json(o));

    return Json{
        {"p", str(rep.p)},
        {"q", str(rep.q)},
        {"s", str(rep.s)},
        {"case", std::to_string(rep.case_label)},
        {"symbols",
         Json{{"p_over_q", std::to_string(rep.sym_pq)},
              {"p_over_s", std::to_string(rep.sym_ps)},
              {"s_over_q", std::to_string(rep.sym_sq)}}},
        {"quadratic", std::move(quad)},
        {"quadratic_pass", rep.quad_pass},
        {"index_log2", std::to_string(rep.index_log2)},
        {"index_expected", std::to_string(rep.index_expected)},
        {"unit_index", str(BigInt(BigInt(1) << rep.index_log2))},
        {"h2", str(rep.h2_L_plus)},
        {"h2_expected", str(rep.h2_expected)},
        {"cl2_structure", rep.cl2_structure},
        {"unit_system", rep.unit_system},
        {"fourth_root_count", std::to_string(rep.fourth_root_count)},
        {"fourth_root_twist", std::to_string(rep.fourth_root_twist)},
        {"unit_system_match", rep.unit_system_match},
        {"norm_table", Json{{"pass", rep.norm_table_pass},
                            {"cells", std::move(cells)}}},
        {"rank_check", to_json(rep.rank_check)},
        {"lemma_checks", std::move(lemmas)},
        {"lemma_pass", rep.lemma_pass},
        {"cm", std::move(cm)},
        {"cm_pass", rep.cm_pass},
        {"all_pass", rep.all_pass},
        {"failing_stage", rep.failing_stage},
    };
}

Json to_json(const LemmaSummary& summary) {
    Json checks = Json::array();
    for (const auto& c : summary.checks) checks.push_back(to_json(c));
    return Json{{"lemma_id", summary.lemma_id},
                {"requested", std::to_string(summary.requested)},
                {"tested", std::to_string(summary.tested)},
                {"passed", std::to_string(summary.passed)},
                {"shortfall", summary.shortfall},
                {"pass", summary.pass},
                {"checks", std::move(checks)}};
}

Json triple_json(const Triple& t) {
    return Json{{"p", str(t[0])}, {"q", str(t[1])}, {"s", str(t[2])}};
}

Json make_envelope(const std::string& command, Json inputs, Json results,
                   long timing_ms) {
    return Json{{"schema_version", "1"},
                {"command", command},
                {"inputs", std::move(inputs)},
                {"results", std::move(results)},
                {"timing_ms", std::to_string(timing_ms)}};
}

std::string dump_envelope(const Json& envelope) { return envelope.dump(2); }

}  // namespace mqunits
