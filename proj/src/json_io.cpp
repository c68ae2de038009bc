#include "brattelikit/json_io.hpp"

#include "brattelikit/errors.hpp"

namespace brattelikit {

Json matrix_to_json(const IntMatrix& m) {
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["data"] = m.data();
    return j;
}

IntMatrix matrix_from_json(const Json& j) {
    return IntMatrix(j.at("rows").get<int>(), j.at("cols").get<int>(), j.at("data").get<std::vector<long long>>());
}

namespace {

Json matrices_to_json(const std::vector<IntMatrix>& ms) {
    Json arr = Json::array();
    for (const auto& m : ms) arr.push_back(matrix_to_json(m));
    return arr;
}

std::vector<IntMatrix> matrices_from_json(const Json& arr) {
    std::vector<IntMatrix> out;
    for (const auto& j : arr) out.push_back(matrix_from_json(j));
    return out;
}

std::string tail_name(TailPolicy t) {
    switch (t) {
        case TailPolicy::Identity: return "identity";
        case TailPolicy::Repeat: return "repeat";
        case TailPolicy::Fail: return "fail";
    }
    return "identity";
}

TailPolicy tail_from_name(const std::string& s) {
    if (s == "identity") return TailPolicy::Identity;
    if (s == "repeat") return TailPolicy::Repeat;
    if (s == "fail") return TailPolicy::Fail;
    throw Error("unknown tail policy: " + s);
}

}  // namespace

Json source_to_json(const MatrixSource& s) {
    Json j;
    switch (s.kind()) {
        case MatrixSource::Kind::Stationary:
            j["kind"] = "stationary";
            j["period"] = matrices_to_json(s.period());
            break;
        case MatrixSource::Kind::EventuallyPeriodic:
            j["kind"] = "eventually-periodic";
            j["head"] = matrices_to_json(s.head());
            j["period"] = matrices_to_json(s.period());
            break;
        case MatrixSource::Kind::ExplicitWindow:
            j["kind"] = "explicit-window";
            j["matrices"] = matrices_to_json(s.window());
            j["tailPolicy"] = tail_name(s.tail_policy());
            break;
        case MatrixSource::Kind::Programmatic:
            j["kind"] = "programmatic";
            j["ruleId"] = s.rule_id();
            j["params"] = s.params();
            break;
        case MatrixSource::Kind::Telescoped:
            throw Error("telescoped sources serialize via materialized windows");
    }
    return j;
}

MatrixSource source_from_json(const Json& j, bool negative_side) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "stationary") return MatrixSource::stationary(matrices_from_json(j.at("period")));
    if (kind == "eventually-periodic")
        return MatrixSource::eventually_periodic(matrices_from_json(j.at("head")),
                                                 matrices_from_json(j.at("period")));
    if (kind == "explicit-window") {
        TailPolicy tail = j.contains("tailPolicy") ? tail_from_name(j.at("tailPolicy").get<std::string>())
                                                   : TailPolicy::Identity;
        return MatrixSource::explicit_window(matrices_from_json(j.at("matrices")), tail, negative_side);
    }
    if (kind == "programmatic") {
        std::map<std::string, std::string> params;
        if (j.contains("params"))
            for (const auto& [key, val] : j.at("params").items())
                params[key] = val.is_string() ? val.get<std::string>() : val.dump();
        return MatrixSource::programmatic(j.at("ruleId").get<std::string>(), std::move(params));
    }
    throw Error("unknown source kind: " + kind);
}

Json diagram_to_json(const BiInfiniteDiagram& d) {
    Json j;
    j["weldSize"] = d.weld_size();
    j["positive"] = source_to_json(d.positive_source());
    j["negative"] = source_to_json(d.negative_source());
    if (d.shift_offset() != 0) j["shiftOffset"] = d.shift_offset();
    return j;
}

BiInfiniteDiagram diagram_from_json(const Json& j) {
    BiInfiniteDiagram d(source_from_json(j.at("positive"), false), source_from_json(j.at("negative"), true),
                        j.at("weldSize").get<int>());
    if (j.contains("shiftOffset")) d = d.shifted(j.at("shiftOffset").get<long>());
    return d;
}

Json weights_to_json(const WeightFunction& w) {
    Json j;
    j["numericMode"] = w.is_exact() ? "exact" : "float";
    if (!w.is_exact()) j["tol"] = w.tol();
    Json levels = Json::array();
    for (int k = 0; k <= w.max_level(); ++k) {
        Json lvl;
        lvl["k"] = k;
        if (w.is_exact()) {
            Json arr = Json::array();
            for (const auto& q : w.level_q(k)) arr.push_back(rational_to_string(q));
            lvl["weights"] = arr;
        } else {
            lvl["weights"] = w.level_d(k);
        }
        levels.push_back(lvl);
    }
    j["levels"] = levels;
    return j;
}

WeightFunction weights_from_json(const Json& j) {
    bool exact = j.at("numericMode").get<std::string>() == "exact";
    if (exact) {
        std::vector<std::vector<Rational>> levels;
        for (const auto& lvl : j.at("levels")) {
            std::vector<Rational> v;
            for (const auto& x : lvl.at("weights"))
                v.push_back(x.is_string() ? rational_from_string(x.get<std::string>())
                                          : Rational(x.get<double>()));
            levels.push_back(std::move(v));
        }
        return WeightFunction::exact(std::move(levels));
    }
    std::vector<std::vector<double>> levels;
    for (const auto& lvl : j.at("levels")) levels.push_back(lvl.at("weights").get<std::vector<double>>());
    double tol = j.contains("tol") ? j.at("tol").get<double>() : 1e-12;
    return WeightFunction::floating(std::move(levels), tol);
}

Json orders_to_json(const EdgeOrders& o) {
    Json j;
    j["policy"] = o.policy() == OrderPolicy::LeftToRight ? "default-left-right" : "right-to-left";
    auto dump = [](const std::map<std::pair<int, int>, std::vector<int>>& byv) {
        Json arr = Json::array();
        for (const auto& [key, perm] : byv) {
            Json e;
            e["level"] = key.first;
            e["vertex"] = key.second;
            e["perm"] = perm;
            arr.push_back(e);
        }
        return arr;
    };
    if (!o.incoming_overrides().empty()) j["incoming"] = dump(o.incoming_overrides());
    if (!o.outgoing_overrides().empty()) j["outgoing"] = dump(o.outgoing_overrides());
    return j;
}

EdgeOrders orders_from_json(const Json& j) {
    OrderPolicy policy = OrderPolicy::LeftToRight;
    if (j.contains("policy")) {
        std::string p = j.at("policy").get<std::string>();
        if (p == "default-left-right") policy = OrderPolicy::LeftToRight;
        else if (p == "right-to-left") policy = OrderPolicy::RightToLeft;
        else throw Error("unknown order policy: " + p);
    }
    EdgeOrders o(policy);
    if (j.contains("incoming"))
        for (const auto& e : j.at("incoming"))
            o.set_incoming_perm(e.at("level").get<int>(), e.at("vertex").get<int>(),
                                e.at("perm").get<std::vector<int>>());
    if (j.contains("outgoing"))
        for (const auto& e : j.at("outgoing"))
            o.set_outgoing_perm(e.at("level").get<int>(), e.at("vertex").get<int>(),
                                e.at("perm").get<std::vector<int>>());
    return o;
}

Json validation_to_json(const ValidationReport& r) {
    Json j;
    j["valid"] = r.valid;
    j["depth"] = r.depth;
    j["vertexCounts"] = r.vertex_counts;
    Json issues = Json::array();
    for (const auto& i : r.issues) {
        Json e;
        e["level"] = i.level;
        e["kind"] = i.kind;
        e["detail"] = i.detail;
        issues.push_back(e);
    }
    j["issues"] = issues;
    return j;
}

Json weight_validation_to_json(const WeightValidationReport& r) {
    Json j;
    j["depth"] = r.depth;
    j["tol"] = r.tol;
    j["recursionOk"] = r.recursion_ok;
    j["maxRecursionResidual"] = r.max_recursion_residual;
    j["edgeSumsOk"] = r.edge_sums_ok;
    j["maxEdgeSumResidual"] = r.max_edge_sum_residual;
    j["vanishingCondition"] = r.cond3 == WeightValidationReport::CondIII::Pass ? "pass" : "inconclusive";
    j["nonperiodicMaxFinal"] = r.nonperiodic_max_final;
    j["periodicCarriers"] = r.periodic_carriers;
    j["positive"] = r.positive;
    j["probability"] = r.probability;
    return j;
}

Json schedule_to_json(const RenormSchedule& s) {
    Json arr = Json::array();
    for (int k = 1; k <= s.depth; ++k) {
        Json e;
        e["k"] = k;
        e["t"] = s.t[static_cast<size_t>(k - 1)];
        e["widthSum"] = s.width_sums_d[static_cast<size_t>(k - 1)];
        if (s.exact) e["widthSumExact"] = rational_to_string(s.width_sums_q[static_cast<size_t>(k - 1)]);
        e["rescaledWidths"] = s.rescaled_widths_d[static_cast<size_t>(k - 1)];
        if (!s.rescaled_heights_d.empty())
            e["rescaledHeights"] = s.rescaled_heights_d[static_cast<size_t>(k - 1)];
        arr.push_back(e);
    }
    Json j;
    j["depth"] = s.depth;
    j["boundedFlag"] = s.bounded_flag;
    j["times"] = arr;
    return j;
}

Json unique_report_to_json(const UniqueWeightReport& r) {
    Json j;
    switch (r.verdict) {
        case UniqueWeightReport::Verdict::UniqueNonAtomic: j["verdict"] = "UniqueNonAtomic"; break;
        case UniqueWeightReport::Verdict::MultipleOrAtomic: j["verdict"] = "MultipleOrAtomic"; break;
        case UniqueWeightReport::Verdict::Inconclusive: j["verdict"] = "Inconclusive"; break;
    }
    j["depth"] = r.depth;
    j["hilbertDiameter"] = std::isinf(r.hilbert_diameter) ? Json("inf") : Json(r.hilbert_diameter);
    j["coneStabilized"] = r.cone_stabilized;
    j["limitRay"] = r.limit_ray;
    j["periodicComponents"] = static_cast<int>(r.periodic_components.size());
    if (r.non_atomic_ray) {
        Json arr = Json::array();
        for (const auto& q : *r.non_atomic_ray) arr.push_back(rational_to_string(q));
        j["nonAtomicRay"] = arr;
    }
    if (r.atomic_ray) {
        Json arr = Json::array();
        for (const auto& q : *r.atomic_ray) arr.push_back(rational_to_string(q));
        j["atomicRay"] = arr;
    }
    j["notes"] = r.notes;
    return j;
}

Json mpn_series_to_json(const MpnSeriesReport& r) {
    Json j;
    j["p"] = r.p;
    j["nRule"] = r.n_rule;
    Json sums = Json::array();
    for (const auto& q : r.partial_sums) sums.push_back(rational_to_string(q));
    j["partialSums"] = sums;
    j["specialIndices"] = r.special_indices;
    Json jumps = Json::array();
    for (const auto& q : r.special_jumps) jumps.push_back(rational_to_string(q));
    j["specialJumps"] = jumps;
    j["unboundedTrend"] = r.unbounded_trend;
    return j;
}

Json meet_to_json(const MeetResult& r) {
    Json j;
    switch (r.kind) {
        case MeetResult::Kind::Value: j["kind"] = "value"; j["value"] = r.value; break;
        case MeetResult::Kind::Unknown: j["kind"] = "unknown"; break;
        case MeetResult::Kind::Infinite: j["kind"] = "infinite"; break;
    }
    j["cap"] = r.cap;
    return j;
}

Json pa_report_to_json(const PaReport& r) {
    Json j;
    j["isStationary"] = r.is_stationary;
    j["period"] = r.period;
    j["expansionFactor"] = r.expansion_factor;
    if (r.expansion_q) j["expansionFactorExact"] = rational_to_string(*r.expansion_q);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json approximant_to_json(const ApproximantResult& a) {
    Json j;
    j["level"] = a.level;
    Json cyl = Json::array();
    for (const auto& c : a.cylinders) {
        Json e;
        e["width"] = c.width;
        e["height"] = c.height;
        if (!c.width_exact.empty()) e["widthExact"] = c.width_exact;
        if (!c.height_exact.empty()) e["heightExact"] = c.height_exact;
        cyl.push_back(e);
    }
    j["cylinders"] = cyl;
    j["euler"]["available"] = a.euler.available;
    j["euler"]["components"] = a.euler.components;
    j["euler"]["componentChi"] = a.euler.component_chi;
    j["euler"]["componentGenus"] = a.euler.component_genus;
    if (!a.euler.note.empty()) j["euler"]["note"] = a.euler.note;
    return j;
}

namespace {

Json witness_to_json(const AccumulationWitness& w) {
    Json j;
    j["kind"] = w.kind;
    j["subsequence"] = w.subsequence;
    j["matchDepth"] = w.match_depth;
    j["weldSize"] = w.weld_size;
    j["exact"] = w.exact;
    j["windowPositive"] = Json::array();
    for (const auto& m : w.window_pos) j["windowPositive"].push_back(matrix_to_json(m));
    j["windowNegative"] = Json::array();
    for (const auto& m : w.window_neg) j["windowNegative"].push_back(matrix_to_json(m));
    return j;
}

}  // namespace

Json certificate_to_json(const Certificate& c) {
    Json j;
    j["verdict"] = verdict_name(c.verdict);
    j["route"] = c.route;
    if (c.witness) j["witness"] = witness_to_json(*c.witness);
    switch (c.limit_minimality) {
        case MinimalityCertificate::Verdict::Minimal: j["limitMinimality"] = "minimal"; break;
        case MinimalityCertificate::Verdict::NotMinimal: j["limitMinimality"] = "not-minimal"; break;
        case MinimalityCertificate::Verdict::Inconclusive: j["limitMinimality"] = "inconclusive"; break;
    }
    if (c.quantities) {
        const auto& q = *c.quantities;
        Json e;
        e["delta"] = q.delta;
        e["g0"] = q.g0;
        e["h0"] = q.h0;
        e["epsilon"] = q.epsilon;
        e["deltaEps"] = q.delta_eps;
        e["diameterBound"] = q.diameter_bound;
        e["c"] = q.c;
        e["eta"] = q.eta;
        e["epsilonMaxForEta"] = q.epsilon_max_for_eta;
        e["epsilonFeasible"] = q.epsilon_feasible;
        e["weightConvOk"] = q.weight_conv_ok;
        e["termValue"] = q.term_value;
        j["quantities"] = e;
    }
    if (c.divergence) {
        const auto& d = *c.divergence;
        Json e;
        e["term"] = d.term;
        e["nTerms"] = d.n_terms;
        e["partialSum"] = d.partial_sum;
        e["partialSums"] = d.partial_sums;
        e["mu"] = d.mu;
        e["muIntervalBound"] = d.mu_interval_bound;
        e["minTimeGap"] = d.min_time_gap;
        e["diverges"] = d.diverges;
        j["divergence"] = e;
    }
    j["oracle"] = unique_report_to_json(c.oracle);
    j["oracleAgrees"] = c.oracle_agrees;
    Json depths;
    depths["analysis"] = c.config.depth;
    depths["witnessMatch"] = c.witness ? c.witness->match_depth : 0;
    depths["oracle"] = c.oracle.depth;
    j["depths"] = depths;
    Json cfg;
    cfg["maxShift"] = c.config.max_shift;
    cfg["windowDepth"] = c.config.window_depth;
    cfg["depth"] = c.config.depth;
    cfg["nTerms"] = c.config.n_terms;
    cfg["eta"] = c.config.eta;
    cfg["epsilon"] = c.config.epsilon;
    cfg["mu"] = c.config.mu;
    cfg["tol"] = c.config.tol;
    cfg["meetCap"] = c.config.meet_cap;
    j["config"] = cfg;
    j["notes"] = c.notes;
    return j;
}

namespace {

Json iet_to_json(const Iet<double>& t) {
    Json j;
    j["domain"] = {t.domain_lo, t.domain_hi};
    Json cells = Json::array();
    for (size_t i = 0; i < t.size(); ++i) {
        Json c;
        c["lo"] = t.lo[i];
        c["hi"] = t.hi[i];
        c["shift"] = t.shift[i];
        c["gap"] = static_cast<bool>(t.is_gap[i]);
        cells.push_back(c);
    }
    j["cells"] = cells;
    return j;
}

Iet<double> iet_from_json(const Json& j) {
    Iet<double> t;
    t.domain_lo = j.at("domain")[0].get<double>();
    t.domain_hi = j.at("domain")[1].get<double>();
    for (const auto& c : j.at("cells")) {
        t.lo.push_back(c.at("lo").get<double>());
        t.hi.push_back(c.at("hi").get<double>());
        t.shift.push_back(c.at("shift").get<double>());
        t.is_gap.push_back(c.at("gap").get<bool>() ? 1 : 0);
    }
    return t;
}

}  // namespace

Json surface_to_json(const SurfaceModel<double>& s) {
    Json j;
    j["depth"] = s.depth;
    j["widths"] = s.width;
    j["heights"] = s.height;
    j["xcum"] = s.xcum;
    j["ycum"] = s.ycum;
    j["area"] = s.area();
    j["top"] = iet_to_json(s.top);
    j["right"] = iet_to_json(s.right);
    Json sing = Json::array();
    for (size_t c = 0; c < s.top.size(); ++c) sing.push_back(Json{{"axis", "x"}, {"at", s.top.lo[c]}});
    for (size_t c = 0; c < s.right.size(); ++c) sing.push_back(Json{{"axis", "y"}, {"at", s.right.lo[c]}});
    j["singularCandidates"] = sing;
    return j;
}

SurfaceModel<double> surface_from_json(const Json& j) {
    SurfaceModel<double> s;
    s.depth = j.at("depth").get<int>();
    s.width = j.at("widths").get<std::vector<double>>();
    s.height = j.at("heights").get<std::vector<double>>();
    s.xcum = j.at("xcum").get<std::vector<double>>();
    s.ycum = j.at("ycum").get<std::vector<double>>();
    s.top = iet_from_json(j.at("top"));
    s.right = iet_from_json(j.at("right"));
    return s;
}

Json orbit_record(long step, const TruncatedPath& p) {
    Json j;
    j["step"] = step;
    j["startVertexIndex"] = p.prefix.start;
    Json edges = Json::array();
    for (const Edge& e : p.prefix.edges) edges.push_back(Json::array({e.level, e.source, e.range, e.copy}));
    j["prefixEdges"] = edges;
    return j;
}

}  // namespace brattelikit
