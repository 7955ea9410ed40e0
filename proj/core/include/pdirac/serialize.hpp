#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "pdirac/bands.hpp"
#include "pdirac/verify.hpp"

namespace pdirac {

/// Insertion-ordered JSON, so emitted key order is fixed by the code.
using Json = nlohmann::ordered_json;

/// 17 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double x);

/// Finite numbers as JSON numbers, non-finite ones as the strings above.
Json number_json(double x);
Json complex_json(cplx z);
Json vector_json(const RVector& v);
Json intvec_json(const IntVec& v);

/// Parses a number given either as a JSON number or as a string "p/q" or
/// "p". Throws std::invalid_argument naming `path`.
double parse_scalar(const Json& j, const std::string& path);
cplx parse_complex(const Json& j, const std::string& path);
/// Integer given as a JSON integer or as a string "p/q" that reduces to one.
int parse_integer(const Json& j, const std::string& path);

Json to_json(const MeasureSpec& mu);
MeasureSpec measure_from_json(const Json& j, const std::string& path);

/// [{"N": [...], "value": ...}, ...] in mode order. Scalars are [re, im],
/// vectors lists of those, matrices lists of rows.
Json to_json(const FourierField& field);
FourierField field_from_json(const Json& j, const Lattice& lattice, FieldKind kind, int width, const std::string& path);

Json to_json(const NormBracket& b);
Json to_json(const ConditionBracket& b);
Json to_json(const GammaCertificate& c);
Json to_json(const KernelConstant& k);
Json to_json(const Lemma1Report& r);
Json to_json(const NonconstancyReport& r);
Json to_json(const Theorem2Report& r);
Json to_json(const RefinementComparison& c);
Json to_json(const Theorem8Report& r);
Json to_json(const C9Report& r);
Json to_json(const Theorem3Report& r);

/// Margin table: k_index, kappa, sigma_min, bound, margin.
void write_margin_csv(std::ostream& out, const Theorem2Report& r);

}  // namespace pdirac
