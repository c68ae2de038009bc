#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "brattelikit/json_io.hpp"
#include "brattelikit/random_diagrams.hpp"

using namespace brattelikit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitTolerance = 3;
constexpr int kExitInconclusive = 4;

struct RunConfig {
    std::string mode = "auto";  // exact | float | auto (follow the bundle)
    double tol = 1e-12;
    double geom_tol = 1e-9;
    int depth = 12;
    long max_shift = 42;
    int window_depth = 3;
    int n_terms = 100;
    uint64_t seed = 1;
    std::string output_dir;
    bool strict = false;
};

Json config_to_json(const RunConfig& c) {
    Json j;
    j["mode"] = c.mode;
    j["tol"] = c.tol;
    j["geomTol"] = c.geom_tol;
    j["depth"] = c.depth;
    j["maxShift"] = c.max_shift;
    j["windowDepth"] = c.window_depth;
    j["nTerms"] = c.n_terms;
    j["seed"] = c.seed;
    return j;
}

void emit_error(const std::string& kind, const std::string& what) {
    Json e;
    e["error"] = kind;
    e["detail"] = what;
    std::cerr << e.dump() << "\n";
}

bool is_example(const std::string& spec) {
    for (const auto& n : example_names())
        if (n == spec) return true;
    return false;
}

// Diagram only, no weight solving: validation must not depend on weights.
BiInfiniteDiagram load_diagram(const std::string& spec) {
    if (is_example(spec)) return example_by_name(spec, 4).bundle.diagram;
    std::ifstream f(spec);
    if (!f) throw Error("cannot open diagram spec: " + spec);
    return diagram_from_json(Json::parse(f));
}

// A spec argument is either a bundled example name or a diagram JSON file.
WeightedBundle load_bundle(const std::string& spec, const RunConfig& cfg, const std::string& weights_path,
                           const std::string& orders_path, bool prefer_pf, int weight_depth) {
    if (is_example(spec)) {
        ExampleBundle ex = example_by_name(spec, weight_depth);
        if (!orders_path.empty()) {
            std::ifstream f(orders_path);
            if (!f) throw Error("cannot open orders file: " + orders_path);
            Json j = Json::parse(f);
            ex.bundle.pos_orders = orders_from_json(j);
            ex.bundle.neg_orders = ex.bundle.pos_orders;
        }
        return ex.bundle;
    }
    std::ifstream f(spec);
    if (!f) throw Error("cannot open diagram spec: " + spec);
    Json j = Json::parse(f);
    BiInfiniteDiagram d = diagram_from_json(j);

    NumericMode mode = cfg.mode == "float" ? NumericMode::Float : NumericMode::Exact;
    WeightFunction wp = [&] {
        if (!weights_path.empty()) {
            std::ifstream wf(weights_path);
            if (!wf) throw Error("cannot open weights file: " + weights_path);
            return weights_from_json(Json::parse(wf));
        }
        if (prefer_pf) return pf_weights(positive_part(d), weight_depth, mode);
        return solve_weight(positive_part(d), weight_depth, mode);
    }();
    WeightFunction wm = solve_weight(negative_part(d), weight_depth, mode);
    auto [wpn, wmn] = biinfinite_normalize(wp, wm);

    WeightedBundle b{std::move(d), std::move(wpn), std::move(wmn), EdgeOrders(), EdgeOrders(), spec};
    if (!orders_path.empty()) {
        std::ifstream of(orders_path);
        if (!of) throw Error("cannot open orders file: " + orders_path);
        b.pos_orders = orders_from_json(Json::parse(of));
        b.neg_orders = b.pos_orders;
    }
    return b;
}

std::string resolve_output(const RunConfig& cfg, const std::string& path) {
    if (path.empty() || path == "-" || path.front() == '/' || cfg.output_dir.empty()) return path;
    return cfg.output_dir + "/" + path;
}

void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        if (content.empty() || content.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write: " + path);
    f << content;
}

bool bundle_exact(const WeightedBundle& b) { return b.w_plus.is_exact() && b.w_minus.is_exact(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bratteli diagrams, Vershik dynamics, flat surfaces, and unique-ergodicity certificates"};
    app.require_subcommand(1);

    RunConfig cfg;
    if (const char* env = std::getenv("BRATTELIKIT_MODE")) cfg.mode = env;
    app.add_option("--mode", cfg.mode, "numeric mode: exact|float|auto")->envname("BRATTELIKIT_MODE");
    app.add_option("--tol", cfg.tol, "numeric tolerance");
    app.add_option("--geom-tol", cfg.geom_tol, "geometry comparison tolerance");
    app.add_option("--seed", cfg.seed, "seed for random diagram generation");
    app.add_option("--output-dir", cfg.output_dir, "directory for output files");

    std::string spec, weights_path, orders_path;

    auto* c_validate = app.add_subcommand("validate", "check a diagram spec");
    int v_depth = 10;
    c_validate->add_option("spec", spec)->required();
    c_validate->add_option("--depth", v_depth);

    auto* c_vershik = app.add_subcommand("vershik", "trace a Vershik orbit as JSON lines");
    std::string start = "min", side = "pos", start_path_json;
    long steps = 10;
    int o_depth = 8, start_vertex = 0;
    bool extend_periodic = false;
    c_vershik->add_option("spec", spec)->required();
    c_vershik->add_option("--start", start, "min|max|path");
    c_vershik->add_option("--path", start_path_json, "explicit prefix for --start path: [[level,source,range,copy],...]");
    c_vershik->add_option("--steps", steps);
    c_vershik->add_option("--depth", o_depth);
    c_vershik->add_option("--vertex", start_vertex, "anchor vertex at the prefix depth");
    c_vershik->add_option("--side", side, "pos|neg");
    c_vershik->add_flag("--extend-periodic", extend_periodic);
    c_vershik->add_option("--orders", orders_path);

    auto* c_weights = app.add_subcommand("weights", "solve, validate, or analyze weights");
    bool use_pf = false, use_solve = false, use_series = false;
    int w_depth = 16;
    c_weights->add_option("spec", spec)->required();
    c_weights->add_flag("--pf", use_pf, "Perron-Frobenius weights (stationary sides)");
    c_weights->add_flag("--solve", use_solve, "constructive solver");
    c_weights->add_flag("--series", use_series, "anchored weight series of an mpn-family spec");
    c_weights->add_option("--depth", w_depth);
    c_weights->add_option("--weights", weights_path, "validate this weight file instead of solving");

    auto* c_surface = app.add_subcommand("surface", "build and export the rectangle model");
    int s_depth = 4;
    std::string svg_path, json_path;
    c_surface->add_option("spec", spec)->required();
    c_surface->add_option("--depth", s_depth);
    c_surface->add_option("--svg", svg_path);
    c_surface->add_option("--json", json_path);
    c_surface->add_option("--orders", orders_path);

    auto* c_renorm = app.add_subcommand("renormalize", "shift the weighted diagram");
    int r_k = 1, r_depth = 4;
    bool check_functoriality = false;
    c_renorm->add_option("spec", spec)->required();
    c_renorm->add_option("--k", r_k);
    c_renorm->add_option("--depth", r_depth);
    c_renorm->add_flag("--check-functoriality", check_functoriality);

    auto* c_certify = app.add_subcommand("certify", "run the unique-ergodicity pipeline");
    CertifyConfig cc;
    c_certify->add_option("spec", spec)->required();
    c_certify->add_option("--eta", cc.eta);
    c_certify->add_option("--epsilon", cc.epsilon);
    c_certify->add_option("--n-terms", cc.n_terms);
    c_certify->add_option("--max-shift", cc.max_shift);
    c_certify->add_option("--window-depth", cc.window_depth);
    c_certify->add_option("--cert-depth", cc.depth);
    c_certify->add_flag("--strict", cfg.strict, "exit 4 when inconclusive");

    auto* c_examples = app.add_subcommand("examples", "list or emit bundled examples");
    std::string ex_action, ex_name;
    c_examples->add_option("action", ex_action, "list|emit")->required();
    c_examples->add_option("name", ex_name);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_validate->parsed()) {
            BiInfiniteDiagram d = load_diagram(spec);
            ValidationReport rep = validate(d, v_depth);
            Json out = validation_to_json(rep);
            out["config"] = config_to_json(cfg);
            std::cout << out.dump(2) << "\n";
            return rep.valid ? kExitOk : kExitValidation;
        }

        if (c_vershik->parsed()) {
            WeightedBundle b = load_bundle(spec, cfg, "", orders_path, false, o_depth + 2);
            DiagramSide sd = side == "neg" ? negative_part(b.diagram) : positive_part(b.diagram);
            const EdgeOrders& ord = side == "neg" ? b.neg_orders : b.pos_orders;
            FinitePath p;
            TailTag tag = TailTag::Free;
            if (start == "path") {
                if (start_path_json.empty()) throw Error("--start path needs --path");
                Json edges = Json::parse(start_path_json);
                for (const auto& e : edges)
                    p.edges.push_back(Edge{e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<long long>()});
                if (p.edges.empty()) throw Error("explicit start path is empty");
                p.start = p.edges.front().source;
                o_depth = std::max(o_depth, p.depth());
            } else if (start == "max") {
                p = maximal_path_into(sd, ord, o_depth, start_vertex);
                tag = TailTag::MaxTail;
            } else {
                p = minimal_path_into(sd, ord, o_depth, start_vertex);
                tag = TailTag::MinTail;
            }
            TruncatedPath tp{p, tag};
            StepOptions opts;
            opts.extend_periodic = extend_periodic;
            OrbitResult orb = orbit(sd, ord, tp, steps, o_depth, opts);
            for (size_t i = 0; i < orb.states.size(); ++i)
                std::cout << orbit_record(static_cast<long>(i), orb.states[i]).dump() << "\n";
            if (orb.terminal != StepStatus::Ok) {
                Json e;
                e["terminal"] = orb.terminal == StepStatus::NeedsDepth ? "needs-depth"
                               : orb.terminal == StepStatus::MaximalPath ? "maximal-path"
                                                                         : "minimal-path";
                e["stepsDone"] = orb.steps_done;
                std::cout << e.dump() << "\n";
            }
            return kExitOk;
        }

        if (c_weights->parsed()) {
            WeightedBundle b = load_bundle(spec, cfg, weights_path, "", use_pf, w_depth);
            Json out;
            if (use_series) {
                const MatrixSource& pos = b.diagram.positive_source();
                if (pos.kind() != MatrixSource::Kind::Programmatic || pos.rule_id() != "mpn-family")
                    throw Error("--series needs an mpn-family programmatic spec");
                long long p = std::stoll(pos.params().at("p"));
                out["series"] = mpn_series_to_json(mpn_weight_series(p, pos.params().at("nRule"), w_depth));
            }
            out["weights"] = weights_to_json(b.w_plus);
            out["validation"] =
                weight_validation_to_json(validate_weight(positive_part(b.diagram), b.w_plus, w_depth, cfg.tol));
            out["uniqueReport"] = unique_report_to_json(
                unique_weight_report(positive_part(b.diagram), std::max(w_depth, 16), std::max(cfg.tol, 1e-10)));
            out["config"] = config_to_json(cfg);
            (void)use_solve;
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }

        if (c_surface->parsed()) {
            WeightedBundle b = load_bundle(spec, cfg, "", orders_path, false, s_depth + 2);
            if (cfg.mode == "exact" && !bundle_exact(b))
                throw Error("exact mode requested but the bundle carries float weights");
            SurfaceModel<double> s;
            if (bundle_exact(b) && cfg.mode != "float") {
                SurfaceModel<Rational> sq = build_surface<Rational>(b, s_depth);
                s.depth = sq.depth;
                s.width = to_double_vec(sq.width);
                s.height = to_double_vec(sq.height);
                s.xcum = to_double_vec(sq.xcum);
                s.ycum = to_double_vec(sq.ycum);
                s.top.domain_lo = to_double(sq.top.domain_lo);
                s.top.domain_hi = to_double(sq.top.domain_hi);
                for (size_t i = 0; i < sq.top.size(); ++i) {
                    s.top.lo.push_back(to_double(sq.top.lo[i]));
                    s.top.hi.push_back(to_double(sq.top.hi[i]));
                    s.top.shift.push_back(to_double(sq.top.shift[i]));
                    s.top.is_gap.push_back(sq.top.is_gap[i]);
                }
                s.right.domain_lo = to_double(sq.right.domain_lo);
                s.right.domain_hi = to_double(sq.right.domain_hi);
                for (size_t i = 0; i < sq.right.size(); ++i) {
                    s.right.lo.push_back(to_double(sq.right.lo[i]));
                    s.right.hi.push_back(to_double(sq.right.hi[i]));
                    s.right.shift.push_back(to_double(sq.right.shift[i]));
                    s.right.is_gap.push_back(sq.right.is_gap[i]);
                }
            } else {
                s = build_surface<double>(b, s_depth);
            }
            Json out = surface_to_json(s);
            out["config"] = config_to_json(cfg);
            if (!json_path.empty()) write_or_print(resolve_output(cfg, json_path), out.dump(2) + "\n");
            if (!svg_path.empty()) write_or_print(resolve_output(cfg, svg_path), export_surface_svg(s));
            if (json_path.empty() && svg_path.empty()) std::cout << out.dump(2) << "\n";
            return kExitOk;
        }

        if (c_renorm->parsed()) {
            WeightedBundle b = load_bundle(spec, cfg, "", "", false, r_k + r_depth + 2);
            Json out;
            RenormSchedule sched = renorm_times_with_heights(b.diagram, b.w_plus, b.w_minus,
                                                             std::min(b.w_plus.max_level(), r_k + r_depth));
            out["schedule"] = schedule_to_json(sched);
            WeightedBundle shifted = shift_weighted(b, r_k);
            out["shifted"]["wPlus"] = weights_to_json(shifted.w_plus);
            out["shifted"]["wMinus"] = weights_to_json(shifted.w_minus);
            if (check_functoriality) {
                double dev;
                if (bundle_exact(b) && cfg.mode != "float") {
                    auto res = renorm_map<Rational>(b, r_k, r_depth, cfg.geom_tol);
                    dev = res.max_deviation;
                } else {
                    auto res = renorm_map<double>(b, r_k, r_depth, cfg.geom_tol);
                    dev = res.max_deviation;
                }
                out["functoriality"]["maxDeviation"] = dev;
                out["functoriality"]["tol"] = cfg.geom_tol;
            }
            out["config"] = config_to_json(cfg);
            std::cout << out.dump(2) << "\n";
            return kExitOk;
        }

        if (c_certify->parsed()) {
            WeightedBundle b = load_bundle(spec, cfg, "", "", false,
                                           std::max<int>(static_cast<int>(cc.max_shift) + cc.window_depth + 1,
                                                         cc.depth));
            cc.tol = std::max(cfg.tol, 1e-12);
            Certificate cert = certify(b, cc);
            Json out = certificate_to_json(cert);
            out["runConfig"] = config_to_json(cfg);
            std::cout << out.dump(2) << "\n";
            if (cert.verdict == Certificate::Verdict::Inconclusive && cfg.strict) return kExitInconclusive;
            return kExitOk;
        }

        if (c_examples->parsed()) {
            if (ex_action == "list") {
                for (const auto& n : example_names()) std::cout << n << "\n";
                return kExitOk;
            }
            if (ex_action == "emit") {
                if (ex_name.empty()) throw Error("emit needs an example name");
                ExampleBundle ex = example_by_name(ex_name);
                Json out;
                out["name"] = ex_name;
                out["diagram"] = diagram_to_json(ex.bundle.diagram);
                out["wPlus"] = weights_to_json(ex.bundle.w_plus);
                out["wMinus"] = weights_to_json(ex.bundle.w_minus);
                Json exp = Json::array();
                for (const auto& e : ex.expected) {
                    Json x;
                    x["name"] = e.name;
                    x["value"] = e.value;
                    x["tol"] = e.tol;
                    if (!e.exact.empty()) x["exact"] = e.exact;
                    x["basis"] = e.basis;
                    exp.push_back(x);
                }
                out["expected"] = exp;
                std::cout << out.dump(2) << "\n";
                return kExitOk;
            }
            throw Error("unknown examples action: " + ex_action);
        }
    } catch (const ToleranceViolationError& e) {
        emit_error("tolerance-violation", e.what());
        return kExitTolerance;
    } catch (const ValidationError& e) {
        emit_error("validation", e.what());
        return kExitValidation;
    } catch (const Error& e) {
        emit_error("error", e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return 1;
    }
    return kExitOk;
}
