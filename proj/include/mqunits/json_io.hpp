#pragma once

#include <json.hpp>

#include "mqunits/survey.hpp"

namespace mqunits {

// Machine-readable reports, schema version "1".  Every number is emitted as a
// decimal string: unit coordinates routinely exceed 64-bit ranges and floats
// never appear, so parsing and re-serializing is byte-identical.
using Json = nlohmann::ordered_json;

std::string str(const BigInt& n);
std::string str(const BigRat& q);

Json to_json(const QuadUnit& u);
Json to_json(const DecompositionReport& rep);
Json to_json(const LemmaCheck& check);
Json to_json(const CMOutcome& outcome);
Json to_json(const RankCheckReport& rep);
Json to_json(const TripleReport& rep);
Json to_json(const LemmaSummary& summary);
Json triple_json(const Triple& t);

Json make_envelope(const std::string& command, Json inputs, Json results,
                   long timing_ms);

std::string dump_envelope(const Json& envelope);

}  // namespace mqunits
