#pragma once

#include <json.hpp>

#include "brattelikit/certifier.hpp"
#include "brattelikit/examples.hpp"

namespace brattelikit {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const Json& j);

Json source_to_json(const MatrixSource& s);
// negative_side picks the identity-tail orientation for explicit windows.
MatrixSource source_from_json(const Json& j, bool negative_side);

Json diagram_to_json(const BiInfiniteDiagram& d);
BiInfiniteDiagram diagram_from_json(const Json& j);

Json weights_to_json(const WeightFunction& w);
WeightFunction weights_from_json(const Json& j);

Json orders_to_json(const EdgeOrders& o);
EdgeOrders orders_from_json(const Json& j);

Json validation_to_json(const ValidationReport& r);
Json weight_validation_to_json(const WeightValidationReport& r);
Json schedule_to_json(const RenormSchedule& s);
Json unique_report_to_json(const UniqueWeightReport& r);
Json mpn_series_to_json(const MpnSeriesReport& r);
Json certificate_to_json(const Certificate& c);
Json pa_report_to_json(const PaReport& r);
Json meet_to_json(const MeetResult& r);
Json approximant_to_json(const ApproximantResult& a);

Json surface_to_json(const SurfaceModel<double>& s);
SurfaceModel<double> surface_from_json(const Json& j);

// One JSON-lines record of a Vershik orbit state.
Json orbit_record(long step, const TruncatedPath& p);

}  // namespace brattelikit
