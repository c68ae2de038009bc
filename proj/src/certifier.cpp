#include "brattelikit/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "brattelikit/errors.hpp"

namespace brattelikit {

namespace {

struct Window {
    int weld = 0;
    std::vector<IntMatrix> pos, neg;
    bool operator==(const Window&) const = default;
};

std::string window_key(const Window& w) {
    std::ostringstream o;
    o << w.weld << "|";
    for (const auto& m : w.pos) o << m.rows() << "x" << m.cols() << m.to_string() << ";";
    o << "|";
    for (const auto& m : w.neg) o << m.rows() << "x" << m.cols() << m.to_string() << ";";
    return o.str();
}

std::optional<Window> window_at_shift(const BiInfiniteDiagram& d, long n, int depth) {
    try {
        BiInfiniteDiagram s = d.shifted(n);
        Window w;
        w.weld = s.vertex_count(0);
        for (int k = 1; k <= depth; ++k) {
            w.pos.push_back(s.matrix_at(k));
            w.neg.push_back(s.matrix_at(-k));
        }
        return w;
    } catch (const Error&) {
        return std::nullopt;
    }
}

bool source_structurally_recurrent(const MatrixSource& s) {
    return s.kind() == MatrixSource::Kind::Stationary || s.kind() == MatrixSource::Kind::EventuallyPeriodic;
}

}  // namespace

std::optional<AccumulationWitness> detect_accumulation(const BiInfiniteDiagram& d, long max_shift,
                                                       int window_depth) {
    if (max_shift < window_depth) throw Error("max_shift must be at least the window depth");
    std::map<std::string, std::vector<long>> groups;
    std::map<std::string, Window> reps;
    for (long n = 1; n <= max_shift; ++n) {
        auto w = window_at_shift(d, n, window_depth);
        if (!w) continue;
        std::string key = window_key(*w);
        groups[key].push_back(n);
        reps.emplace(key, std::move(*w));
    }
    const std::vector<long>* best = nullptr;
    const std::string* best_key = nullptr;
    for (const auto& [key, hits] : groups) {
        if (hits.size() < 2) continue;
        if (!best || hits.size() > best->size() || (hits.size() == best->size() && hits.front() < best->front())) {
            best = &hits;
            best_key = &key;
        }
    }
    if (!best) return std::nullopt;

    AccumulationWitness w;
    w.kind = "window-recurrence";
    w.subsequence = *best;
    w.match_depth = window_depth;
    const Window& rep = reps.at(*best_key);
    w.weld_size = rep.weld;
    w.window_pos = rep.pos;
    w.window_neg = rep.neg;
    w.exact = source_structurally_recurrent(d.positive_source()) &&
              source_structurally_recurrent(d.negative_source());
    if (w.exact) w.kind = "stationary";
    return w;
}

bool verify_witness(const BiInfiniteDiagram& d, const AccumulationWitness& w) {
    if (w.kind == "single-vertex") {
        for (long k : w.subsequence)
            if (d.vertex_count(k) != 1) return false;
        return true;
    }
    for (long n : w.subsequence) {
        auto win = window_at_shift(d, n, w.match_depth);
        if (!win) return false;
        if (win->weld != w.weld_size || win->pos != w.window_pos || win->neg != w.window_neg) return false;
    }
    return true;
}

LimitRealization limit_diagram(const AccumulationWitness& w) {
    if (w.window_pos.empty()) throw Error("witness carries no window matrices");
    bool const_pos = std::all_of(w.window_pos.begin(), w.window_pos.end(),
                                 [&](const IntMatrix& m) { return m == w.window_pos.front(); });
    bool const_neg = std::all_of(w.window_neg.begin(), w.window_neg.end(),
                                 [&](const IntMatrix& m) { return m == w.window_neg.front(); });
    bool square_pos = w.window_pos.front().rows() == w.window_pos.front().cols();
    bool square_neg = w.window_neg.front().rows() == w.window_neg.front().cols();
    if (const_pos && const_neg && square_pos && square_neg) {
        return {BiInfiniteDiagram(MatrixSource::stationary({w.window_pos.front()}),
                                  MatrixSource::stationary({w.window_neg.front()}), w.weld_size),
                true, !w.exact};
    }
    return {BiInfiniteDiagram(MatrixSource::explicit_window(w.window_pos, TailPolicy::Identity, false),
                              MatrixSource::explicit_window(w.window_neg, TailPolicy::Identity, true),
                              w.weld_size),
            false, true};
}

LimitWeights limit_weights(const AccumulationWitness& w, const WeightedBundle& b, double tol) {
    LimitWeights out;
    HeightVectors hv;
    int hmax = -1;
    for (long k : w.subsequence) {
        if (k > b.w_plus.max_level()) continue;
        if (k > hmax) {
            hv = heights(b.diagram, b.w_minus, static_cast<int>(k));
            hmax = static_cast<int>(k);
        }
        auto wk = b.w_plus.level_d(static_cast<int>(k));
        if (static_cast<int>(wk.size()) != w.weld_size) continue;
        double sum = 0;
        for (double v : wk) sum += v;
        if (!(sum > 0)) continue;
        for (double& v : wk) v /= sum;
        auto hk = hv.level_d(static_cast<int>(k));
        for (double& v : hk) v *= sum;
        out.w_samples.push_back(wk);
        out.h_samples.push_back(hk);
        out.t_at_hits.push_back(-std::log(sum));
        out.used_hits.push_back(k);
    }
    if (out.used_hits.size() < 2) throw NotCauchyError(1.0);

    size_t m = out.used_hits.size();
    size_t lo = m >= 3 ? m - 3 : 0;
    for (size_t i = lo; i + 1 < m; ++i)
        for (size_t v = 0; v < out.w_samples[i].size(); ++v) {
            out.oscillation = std::max(out.oscillation, std::abs(out.w_samples[i][v] - out.w_samples[i + 1][v]));
            out.oscillation = std::max(out.oscillation, std::abs(out.h_samples[i][v] - out.h_samples[i + 1][v]));
        }
    out.cauchy = out.oscillation <= tol;
    if (!out.cauchy) throw NotCauchyError(out.oscillation);
    out.w_star = out.w_samples.back();
    out.h_star = out.h_samples.back();

    double pairing = 0;
    for (size_t v = 0; v < out.w_star.size(); ++v) pairing += out.w_star[v] * out.h_star[v];
    if (std::abs(pairing - 1.0) > 1e-6)
        throw Error("limit pairing w*.h* deviates from 1; bundle not probWeight-normalized");
    return out;
}

std::pair<std::vector<int>, std::vector<int>> partition_g0_h0(const std::vector<std::vector<double>>& h_samples,
                                                              double tol) {
    if (h_samples.empty()) throw Error("no height samples to partition");
    std::vector<int> g0, h0;
    const auto& first = h_samples.front();
    const auto& last = h_samples.back();
    for (size_t v = 0; v < last.size(); ++v) {
        if (last[v] < tol && last[v] <= first[v]) h0.push_back(static_cast<int>(v));
        else g0.push_back(static_cast<int>(v));
    }
    if (g0.empty()) throw EmptyG0Error();
    return {g0, h0};
}

namespace {

// Largest epsilon keeping the eps-interior of the G0 rectangles above 1-eta.
double epsilon_max_for_eta(const std::vector<double>& w, const std::vector<double>& h,
                           const std::vector<int>& g0, double eta) {
    auto area_at = [&](double eps) {
        double a = 0;
        for (int i : g0) {
            double ww = w[static_cast<size_t>(i)] - 2 * eps;
            double hh = h[static_cast<size_t>(i)] - 2 * eps;
            if (ww > 0 && hh > 0) a += ww * hh;
        }
        return a;
    };
    double target = 1.0 - eta;
    if (area_at(0.0) < target) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (area_at(mid) >= target) lo = mid;
        else hi = mid;
    }
    return lo;
}

}  // namespace

CriterionQuantities criterion_quantities(const AccumulationWitness& w, const LimitRealization& limit,
                                         const LimitWeights& lims, const WeightedBundle& b, double eta,
                                         double epsilon, int meet_cap) {
    CriterionQuantities q;
    q.eta = eta;

    MeetResult mr = meet_depth_max(limit.diagram, 0, meet_cap);
    if (mr.kind != MeetResult::Kind::Value) throw DeltaUnknownError(meet_cap);
    q.delta = mr.value;

    auto [g0, h0] = partition_g0_h0(lims.h_samples, 1e-6);
    q.g0 = g0;
    q.h0 = h0;
    q.c = static_cast<int>(g0.size());

    double min_w0 = *std::min_element(lims.w_star.begin(), lims.w_star.end());
    double max_w0 = *std::max_element(lims.w_star.begin(), lims.w_star.end());
    double max_h0 = *std::max_element(lims.h_star.begin(), lims.h_star.end());

    // Limit weights at level Delta, read off the deepest usable hit:
    // w*_j = e^{t_k} w_{k+j} stabilizes along the subsequence.
    long k_deep = -1;
    for (long k : lims.used_hits)
        if (k + q.delta <= b.w_plus.max_level()) k_deep = std::max(k_deep, k);
    if (k_deep < 0) throw Error("weights not deep enough to evaluate the limit at level Delta");
    auto wk = b.w_plus.level_d(static_cast<int>(k_deep));
    double sum = 0;
    for (double v : wk) sum += v;
    auto w_delta = b.w_plus.level_d(static_cast<int>(k_deep) + q.delta);
    for (double& v : w_delta) v /= sum;
    double min_w_delta = *std::min_element(w_delta.begin(), w_delta.end());

    q.epsilon_max_for_eta = epsilon_max_for_eta(lims.w_star, lims.h_star, g0, eta);
    if (epsilon <= 0) {
        epsilon = std::min(min_w0 / 4.0, 0.99 * q.epsilon_max_for_eta);
        if (epsilon <= 0) epsilon = min_w0 / 4.0;
    }
    if (!(epsilon > 0) || epsilon >= min_w0 / 3.0) throw EpsilonTooLargeError(epsilon, min_w0 / 3.0);
    q.epsilon = epsilon;
    q.epsilon_feasible = epsilon <= q.epsilon_max_for_eta;

    q.delta_eps = std::min(epsilon, min_w_delta / 4.0);
    q.diameter_bound = 4.0 * (max_w0 + max_h0);

    // Eq-style convergence check: consecutive rescaled weight samples agree
    // to within 1e-2 of the smallest limit weight.
    q.weight_conv_ok = true;
    if (lims.w_samples.size() >= 2) {
        const auto& a = lims.w_samples[lims.w_samples.size() - 2];
        const auto& bb = lims.w_samples.back();
        for (size_t v = 0; v < bb.size(); ++v)
            if (std::abs(a[v] - bb[v]) > 1e-2 * min_w0) q.weight_conv_ok = false;
    }

    double inner = std::pow(epsilon, -2.0) * q.c * q.diameter_bound +
                   (q.c > 1 ? (q.c - 1) / q.delta_eps : 0.0);
    q.term_value = std::pow(inner, -2.0);
    (void)w;
    return q;
}

DivergenceReport divergence_check(const CriterionQuantities& q, const std::vector<double>& times_at_hits,
                                  int n_terms, double mu) {
    DivergenceReport rep;
    rep.term = q.term_value;
    rep.n_terms = n_terms;
    rep.min_time_gap = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < times_at_hits.size(); ++i)
        rep.min_time_gap = std::min(rep.min_time_gap, times_at_hits[i + 1] - times_at_hits[i]);
    if (times_at_hits.size() < 2) rep.min_time_gap = 0;

    if (mu <= 0) mu = rep.min_time_gap > 0 && std::isfinite(rep.min_time_gap) ? rep.min_time_gap / 2.0 : 0.0;
    rep.mu = mu;
    double s = 0;
    for (int n = 0; n < n_terms; ++n) {
        s += rep.term;
        rep.partial_sums.push_back(s);
    }
    rep.partial_sum = s;
    rep.mu_interval_bound = mu * std::exp(-3.0 * mu) * rep.term;
    rep.diverges = rep.term > 0 && rep.min_time_gap > 0;
    return rep;
}

const char* verdict_name(Certificate::Verdict v) {
    switch (v) {
        case Certificate::Verdict::UniquelyErgodic: return "UNIQUELY_ERGODIC";
        case Certificate::Verdict::LimitUeButNoFiniteMeasure: return "LIMIT_UE_BUT_NO_FINITE_MEASURE";
        case Certificate::Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

namespace {

std::vector<long> structural_funnel_levels(const BiInfiniteDiagram& d, int depth) {
    std::vector<long> funnels;
    bool structural = false;
    const MatrixSource& pos = d.positive_source();
    if (pos.kind() == MatrixSource::Kind::Programmatic && pos.rule_id() == "single-vertex-often") structural = true;
    if (pos.kind() == MatrixSource::Kind::Stationary) {
        for (int k = 1; k <= *pos.stationary_period(); ++k)
            if (d.vertex_count(k) == 1) structural = true;
    }
    if (!structural) return funnels;
    for (long k = 1; k <= depth; ++k)
        if (d.vertex_count(k) == 1) funnels.push_back(k);
    return funnels;
}

}  // namespace

Certificate certify(const WeightedBundle& b, const CertifyConfig& cfg) {
    Certificate cert;
    cert.config = cfg;
    int depth = std::min(cfg.depth, b.w_plus.max_level());

    // Bounded-geometry route: infinitely many one-vertex levels force unique
    // ergodicity with a single unit square at the funnel times.
    std::vector<long> funnels = structural_funnel_levels(b.diagram, depth);
    int oracle_depth = depth;
    if (funnels.size() >= 2) oracle_depth = static_cast<int>(funnels.back());
    cert.oracle = unique_weight_report(positive_part(b.diagram), oracle_depth, cfg.tol);

    if (funnels.size() >= 2) {
        MinimalityCertificate mc = minimality_certificate(positive_part(b.diagram), depth);
        RenormSchedule sched = renorm_times(b.diagram, b.w_plus, depth);
        std::vector<double> times;
        for (long k : funnels) times.push_back(sched.t[static_cast<size_t>(k - 1)]);
        if (mc.verdict == MinimalityCertificate::Verdict::Minimal) {
            AccumulationWitness w;
            w.kind = "single-vertex";
            w.subsequence = funnels;
            w.weld_size = 1;
            w.exact = true;
            cert.witness = w;
            cert.limit_minimality = mc.verdict;

            CriterionQuantities q;
            q.delta = 0;
            q.g0 = {0};
            q.c = 1;
            q.eta = cfg.eta;
            q.epsilon = cfg.epsilon > 0 ? cfg.epsilon : 0.25;
            q.delta_eps = std::min(q.epsilon, 0.25);
            q.diameter_bound = 8.0;  // unit square: 4(1+1)
            q.epsilon_max_for_eta = epsilon_max_for_eta({1.0}, {1.0}, {0}, cfg.eta);
            q.epsilon_feasible = q.epsilon <= q.epsilon_max_for_eta;
            q.weight_conv_ok = true;
            double inner = std::pow(q.epsilon, -2.0) * q.diameter_bound;
            q.term_value = std::pow(inner, -2.0);
            cert.quantities = q;

            DivergenceReport div = divergence_check(q, times, cfg.n_terms, cfg.mu);
            cert.divergence = div;
            if (div.diverges) {
                cert.verdict = Certificate::Verdict::UniquelyErgodic;
                cert.route = "single-vertex";
                cert.notes = "bounded geometry at the one-vertex levels";
                cert.oracle_agrees = cert.oracle.verdict != UniqueWeightReport::Verdict::MultipleOrAtomic;
                return cert;
            }
        }
    }

    std::optional<AccumulationWitness> w;
    try {
        w = detect_accumulation(b.diagram, cfg.max_shift, cfg.window_depth);
    } catch (const Error& e) {
        cert.notes = e.what();
        return cert;
    }
    if (!w) {
        cert.notes = "no window recurrence observed up to max_shift";
        return cert;
    }
    if (!verify_witness(b.diagram, *w)) {
        cert.notes = "witness failed re-verification";
        return cert;
    }
    cert.witness = w;

    LimitRealization limit = limit_diagram(*w);
    MinimalityCertificate mc = minimality_certificate(positive_part(limit.diagram), depth);
    cert.limit_minimality = mc.verdict;

    if (mc.verdict == MinimalityCertificate::Verdict::Minimal) {
        try {
            LimitWeights lims = limit_weights(*w, b, std::max(cfg.tol, 1e-9));
            CriterionQuantities q =
                criterion_quantities(*w, limit, lims, b, cfg.eta, cfg.epsilon, cfg.meet_cap);
            cert.quantities = q;
            DivergenceReport div = divergence_check(q, lims.t_at_hits, cfg.n_terms, cfg.mu);
            cert.divergence = div;
            if (div.diverges) {
                cert.verdict = Certificate::Verdict::UniquelyErgodic;
                cert.route = "masur-window";
                cert.notes = limit.window_only
                                 ? "limit realized from a finite window; certificate depth-relative"
                                 : "stationary limit";
            } else {
                cert.notes = "divergence sum degenerate";
            }
        } catch (const Error& e) {
            cert.notes = e.what();
        }
    } else {
        // Case-2 pattern: the limit carries a unique non-atomic ray while the
        // original admits no finite weight normalized off the periodic part.
        UniqueWeightReport limit_rep = unique_weight_report(positive_part(limit.diagram), depth, cfg.tol);
        bool limit_has_nonatomic = limit_rep.non_atomic_ray.has_value() ||
                                   limit_rep.verdict == UniqueWeightReport::Verdict::UniqueNonAtomic;
        bool original_divergent = false;
        const MatrixSource& pos = b.diagram.positive_source();
        if (pos.kind() == MatrixSource::Kind::Programmatic && pos.rule_id() == "mpn-family") {
            long long p = std::stoll(pos.params().at("p"));
            MpnSeriesReport series = mpn_weight_series(p, pos.params().at("nRule"), std::max(depth, 10));
            original_divergent = series.unbounded_trend;
        }
        if (limit_has_nonatomic && original_divergent) {
            cert.verdict = Certificate::Verdict::LimitUeButNoFiniteMeasure;
            cert.route = "case-2";
            cert.notes = "limit admits a unique non-atomic ray; anchored weight series unbounded";
        } else if (!limit_has_nonatomic) {
            cert.notes = "limit not minimal and no non-atomic limit ray identified";
        } else {
            cert.notes = "limit not minimal; no divergence evidence for the original weights";
        }
    }

    switch (cert.verdict) {
        case Certificate::Verdict::UniquelyErgodic:
            cert.oracle_agrees = cert.oracle.verdict != UniqueWeightReport::Verdict::MultipleOrAtomic;
            break;
        case Certificate::Verdict::LimitUeButNoFiniteMeasure:
            cert.oracle_agrees = cert.oracle.verdict != UniqueWeightReport::Verdict::UniqueNonAtomic;
            break;
        case Certificate::Verdict::Inconclusive:
            cert.oracle_agrees = true;
            break;
    }
    return cert;
}

}  // namespace brattelikit
