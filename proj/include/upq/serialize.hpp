#pragma once

#include <string>

#include <json.hpp>

#include "upq/cocycle.hpp"
#include "upq/current_group.hpp"
#include "upq/quasi_poisson.hpp"
#include "upq/report.hpp"

namespace upq {

using Json = nlohmann::ordered_json;

/// Complex matrices as row-major [[re, im], …] arrays with explicit shape.
Json to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

Json to_json(const Signature& sig);
Signature signature_from_json(const Json& j);

Json to_json(const IwasawaElement& p);
IwasawaElement iwasawa_from_json(const Json& j);
Json to_json(const GroupElement& g);
GroupElement group_from_json(const Json& j);

/// [{from, to, value}, …]
Json to_json(const PCurrent& c);
PCurrent pcurrent_from_json(const Json& j);
Json to_json(const GCurrent& c);
GCurrent gcurrent_from_json(const Json& j);

/// [{s: coordinates, x}, …]
Json to_json(const Configuration& c);

Json to_json(const CocycleCombination& v);
Json to_json(const GramMatrixEstimate& g);

Json to_json(const ReportRow& r);
/// Rows only; plots are written as separate files.
Json to_json(const Report& r);
Report report_from_json(const Json& j);

/// One line per row, fixed column order.
std::string to_csv(const Report& r);

} // namespace upq
