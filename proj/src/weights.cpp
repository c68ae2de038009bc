#include "brattelikit/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "brattelikit/errors.hpp"

namespace brattelikit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

const MatrixSource& side_source(const DiagramSide& side) {
    return side.negative ? side.diagram->negative_source() : side.diagram->positive_source();
}

bool side_is_stationary(const DiagramSide& side) {
    const MatrixSource& s = side_source(side);
    return s.kind() == MatrixSource::Kind::Stationary;
}
}  // namespace

WeightFunction WeightFunction::exact(std::vector<std::vector<Rational>> levels) {
    WeightFunction w;
    w.mode_ = NumericMode::Exact;
    w.q_ = std::move(levels);
    for (const auto& lvl : w.q_)
        for (const auto& x : lvl)
            if (x < 0) throw Error("weights must be nonnegative");
    return w;
}

WeightFunction WeightFunction::floating(std::vector<std::vector<double>> levels, double tol) {
    WeightFunction w;
    w.mode_ = NumericMode::Float;
    w.tol_ = tol;
    w.f_ = std::move(levels);
    for (const auto& lvl : w.f_)
        for (double x : lvl)
            if (!(x >= 0)) throw Error("weights must be nonnegative and finite");
    return w;
}

int WeightFunction::max_level() const {
    size_t n = is_exact() ? q_.size() : f_.size();
    return static_cast<int>(n) - 1;
}

std::vector<double> WeightFunction::level_d(int k) const {
    if (k < 0 || k > max_level()) throw Error("weight level out of range");
    if (is_exact()) return to_double_vec(q_[static_cast<size_t>(k)]);
    return f_[static_cast<size_t>(k)];
}

const std::vector<Rational>& WeightFunction::level_q(int k) const {
    if (!is_exact()) throw Error("exact weights requested from a float-mode weight function");
    if (k < 0 || k > max_level()) throw Error("weight level out of range");
    return q_[static_cast<size_t>(k)];
}

WeightFunction WeightFunction::scaled(const Rational& factor) const {
    if (is_exact()) {
        auto levels = q_;
        for (auto& lvl : levels)
            for (auto& x : lvl) x *= factor;
        return WeightFunction::exact(std::move(levels));
    }
    return scaled_d(factor.get_d());
}

WeightFunction WeightFunction::scaled_d(double factor) const {
    auto levels = is_exact() ? std::vector<std::vector<double>>{} : f_;
    if (is_exact()) {
        levels.reserve(q_.size());
        for (const auto& lvl : q_) levels.push_back(to_double_vec(lvl));
    }
    for (auto& lvl : levels)
        for (auto& x : lvl) x *= factor;
    return WeightFunction::floating(std::move(levels), tol_);
}

bool WeightFunction::is_positive() const {
    if (is_exact()) {
        for (const auto& lvl : q_)
            for (const auto& x : lvl)
                if (x <= 0) return false;
        return true;
    }
    for (const auto& lvl : f_)
        for (double x : lvl)
            if (x <= 0) return false;
    return true;
}

bool WeightFunction::is_probability(double tol) const {
    if (max_level() < 0) return false;
    if (is_exact()) {
        Rational s(0);
        for (const auto& x : q_[0]) s += x;
        return s == 1;
    }
    double s = 0;
    for (double x : f_[0]) s += x;
    return std::abs(s - 1.0) <= tol;
}

WeightValidationReport validate_weight(const DiagramSide& side, const WeightFunction& w, int depth, double tol) {
    WeightValidationReport rep;
    rep.depth = std::min(depth, w.max_level());
    rep.tol = tol;
    rep.positive = w.is_positive();
    rep.probability = w.is_probability(tol);

    for (int k = 1; k <= rep.depth; ++k) {
        IntMatrix m = side.matrix_at(k);
        if (w.is_exact()) {
            auto expect = m.apply_transposed<Rational>(w.level_q(k));
            const auto& have = w.level_q(k - 1);
            if (expect.size() != have.size()) throw Error("weight vector length mismatch at level " + std::to_string(k - 1));
            for (size_t v = 0; v < have.size(); ++v) {
                Rational diff = expect[v] - have[v];
                double r = std::abs(diff.get_d());
                rep.max_recursion_residual = std::max(rep.max_recursion_residual, r);
                if (diff != 0) rep.recursion_ok = false;
                if (have[v] > 0) {
                    Rational rel = expect[v] / have[v] - 1;
                    rep.max_edge_sum_residual = std::max(rep.max_edge_sum_residual, std::abs(rel.get_d()));
                    if (expect[v] != have[v]) rep.edge_sums_ok = false;
                }
            }
        } else {
            auto expect = m.apply_transposed<double>(w.level_d(k));
            auto have = w.level_d(k - 1);
            if (expect.size() != have.size()) throw Error("weight vector length mismatch at level " + std::to_string(k - 1));
            for (size_t v = 0; v < have.size(); ++v) {
                double r = std::abs(expect[v] - have[v]);
                rep.max_recursion_residual = std::max(rep.max_recursion_residual, r);
                if (r > tol) rep.recursion_ok = false;
                if (have[v] > 0) {
                    double es = std::abs(expect[v] / have[v] - 1.0);
                    rep.max_edge_sum_residual = std::max(rep.max_edge_sum_residual, es);
                    if (es > tol) rep.edge_sums_ok = false;
                }
            }
        }
    }

    // Condition (iii) as a finite-depth trend: cylinder weights off periodic
    // chains must fall below tol by the last checked level; weight that
    // persists on a chain is an atomic carrier, reported separately.
    auto comps = periodic_component_scan(side, rep.depth);
    std::set<int> chain_tops;
    for (const auto& c : comps) chain_tops.insert(c.top_vertex);
    auto last = w.level_d(rep.depth);
    for (size_t v = 0; v < last.size(); ++v)
        if (!chain_tops.count(static_cast<int>(v)))
            rep.nonperiodic_max_final = std::max(rep.nonperiodic_max_final, last[v]);
    for (const auto& c : comps)
        if (last[static_cast<size_t>(c.top_vertex)] > tol) rep.periodic_carriers.push_back(c.top_vertex);
    rep.cond3 = rep.nonperiodic_max_final < tol ? WeightValidationReport::CondIII::Pass
                                                : WeightValidationReport::CondIII::Inconclusive;
    return rep;
}

namespace {

// Rational eigendata of a 2x2 (or 1x1) transposed block, when the
// characteristic roots are rational.
struct RationalEigen {
    Rational lambda;
    std::vector<Rational> ray;  // nonnegative, sum normalized to 1 when possible
    bool nonneg = false;
};

std::optional<std::vector<RationalEigen>> rational_eigendata(const IntMatrix& block) {
    int n = block.rows();
    if (n == 1) {
        RationalEigen e;
        e.lambda = Rational(static_cast<long>(block.at(0, 0)));
        e.ray = {Rational(1)};
        e.nonneg = true;
        return std::vector<RationalEigen>{e};
    }
    if (n != 2) return std::nullopt;
    // Work on T = block^T, whose eigenvectors are the invariant weight rays.
    BigInt a(static_cast<long>(block.at(0, 0))), b(static_cast<long>(block.at(1, 0)));
    BigInt c(static_cast<long>(block.at(0, 1))), d(static_cast<long>(block.at(1, 1)));
    BigInt tr = a + d;
    BigInt det = a * d - b * c;
    BigInt disc = tr * tr - 4 * det;
    if (disc < 0) return std::nullopt;
    BigInt s = sqrt(disc);
    if (s * s != disc) return std::nullopt;

    auto eigen_for = [&](const Rational& lambda) {
        RationalEigen e;
        e.lambda = lambda;
        Rational aq(a), bq(b), cq(c), dq(d);
        // Rows of (T - lambda I) with T = [[a, b],[c, d]] read from block^T.
        if (bq != 0) e.ray = {bq, lambda - aq};
        else if (cq != 0) e.ray = {lambda - dq, cq};
        else e.ray = lambda == aq ? std::vector<Rational>{1, 0} : std::vector<Rational>{0, 1};
        if (e.ray[0] <= 0 && e.ray[1] <= 0) {
            e.ray[0] = -e.ray[0];
            e.ray[1] = -e.ray[1];
        }
        e.nonneg = e.ray[0] >= 0 && e.ray[1] >= 0;
        Rational sum = e.ray[0] + e.ray[1];
        if (e.nonneg && sum > 0) {
            e.ray[0] /= sum;
            e.ray[1] /= sum;
        }
        return e;
    };

    Rational l1 = Rational(tr + s) / 2;
    Rational l2 = Rational(tr - s) / 2;
    std::vector<RationalEigen> out{eigen_for(l1)};
    if (l2 != l1) out.push_back(eigen_for(l2));
    return out;
}

}  // namespace

PfData pf_eigendata(const DiagramSide& side, int power_bound, double tol) {
    if (!side_is_stationary(side)) throw Error("pf_eigendata requires a stationary side");
    int period = *side_source(side).stationary_period();
    IntMatrix block = side.matrix_at(1);
    for (int j = 2; j <= period; ++j) block = block.then_up(side.matrix_at(j));
    return pf_of_block(block, period, power_bound, tol);
}

PfData pf_of_block(const IntMatrix& block, int period, int power_bound, double tol) {
    if (block.rows() != block.cols()) throw Error("period block is not square");

    IntMatrix power = block;
    bool primitive = false;
    for (int it = 0; it < power_bound; ++it) {
        if (power.all_positive()) {
            primitive = true;
            break;
        }
        power = saturating_product(power, block);
    }

    PfData out;
    out.period = period;

    // Rational characteristic roots cover reducible blocks like M(p,n),
    // where the dominant eigenray is still the canonical invariant weight.
    if (auto eig = rational_eigendata(block)) {
        const RationalEigen& pf = (*eig)[0];
        if (pf.nonneg) {
            out.lambda_q = pf.lambda;
            out.xi_q = pf.ray;
            out.lambda = pf.lambda.get_d();
            out.xi = to_double_vec(pf.ray);
            if (eig->size() > 1 && (*eig)[1].nonneg) {
                out.lambda2_q = (*eig)[1].lambda;
                out.second_ray_q = (*eig)[1].ray;
            }
            return out;
        }
    }
    if (!primitive) throw NotPrimitiveError("period block has no strictly positive power within bound");

    // Power iteration on block^T; deterministic uniform start.
    int n = block.rows();
    std::vector<double> x(static_cast<size_t>(n), 1.0 / n);
    double lambda = 0;
    for (int it = 0; it < 100000; ++it) {
        auto y = block.apply_transposed<double>(x);
        double s = 0;
        for (double v : y) s += v;
        if (s <= 0) throw NotPrimitiveError("power iteration collapsed");
        double delta = 0;
        for (size_t i = 0; i < y.size(); ++i) {
            y[i] /= s;
            delta = std::max(delta, std::abs(y[i] - x[i]));
        }
        bool done = delta < tol && std::abs(s - lambda) < tol * std::max(1.0, s);
        lambda = s;
        x = std::move(y);
        if (done) break;
    }
    out.lambda = lambda;
    out.xi = x;
    return out;
}

WeightFunction pf_weights(const DiagramSide& side, int depth, NumericMode preferred) {
    PfData data = pf_eigendata(side);
    int p = data.period;
    int top = depth == 0 ? 0 : ((depth + p - 1) / p) * p;
    int m = top / p;

    if (preferred == NumericMode::Exact && data.xi_q) {
        Rational scale(1);
        for (int i = 0; i < m; ++i) scale /= *data.lambda_q;
        std::vector<std::vector<Rational>> levels(static_cast<size_t>(top) + 1);
        std::vector<Rational> cur = *data.xi_q;
        for (auto& v : cur) v *= scale;
        levels[static_cast<size_t>(top)] = cur;
        for (int k = top; k >= 1; --k) {
            cur = side.matrix_at(k).apply_transposed<Rational>(cur);
            levels[static_cast<size_t>(k - 1)] = cur;
        }
        levels.resize(static_cast<size_t>(depth) + 1);
        return WeightFunction::exact(std::move(levels));
    }

    double scale = std::pow(data.lambda, -m);
    std::vector<std::vector<double>> levels(static_cast<size_t>(top) + 1);
    std::vector<double> cur = data.xi;
    for (auto& v : cur) v *= scale;
    levels[static_cast<size_t>(top)] = cur;
    for (int k = top; k >= 1; --k) {
        cur = side.matrix_at(k).apply_transposed<double>(cur);
        levels[static_cast<size_t>(k - 1)] = cur;
    }
    levels.resize(static_cast<size_t>(depth) + 1);
    return WeightFunction::floating(std::move(levels));
}

WeightFunction solve_weight(const DiagramSide& side, int depth, NumericMode mode) {
    if (mode == NumericMode::Exact) {
        std::vector<std::vector<Rational>> levels(static_cast<size_t>(depth) + 1);
        std::vector<Rational> cur(static_cast<size_t>(side.vertex_count(depth)), Rational(1));
        levels[static_cast<size_t>(depth)] = cur;
        for (int k = depth; k >= 1; --k) {
            cur = side.matrix_at(k).apply_transposed<Rational>(cur);
            levels[static_cast<size_t>(k - 1)] = cur;
        }
        Rational total(0);
        for (const auto& v : levels[0]) total += v;
        if (total <= 0) throw Error("degenerate diagram: level-0 mass vanishes");
        for (auto& lvl : levels)
            for (auto& v : lvl) v /= total;
        return WeightFunction::exact(std::move(levels));
    }
    std::vector<std::vector<double>> levels(static_cast<size_t>(depth) + 1);
    std::vector<double> cur(static_cast<size_t>(side.vertex_count(depth)), 1.0);
    levels[static_cast<size_t>(depth)] = cur;
    for (int k = depth; k >= 1; --k) {
        cur = side.matrix_at(k).apply_transposed<double>(cur);
        levels[static_cast<size_t>(k - 1)] = cur;
    }
    double total = 0;
    for (double v : levels[0]) total += v;
    if (!(total > 0)) throw Error("degenerate diagram: level-0 mass vanishes");
    for (auto& lvl : levels)
        for (auto& v : lvl) v /= total;
    return WeightFunction::floating(std::move(levels));
}

double hilbert_column_diameter(const std::vector<std::vector<double>>& columns) {
    if (columns.size() <= 1) return 0;
    double diam = 0;
    for (size_t i = 0; i < columns.size(); ++i)
        for (size_t j = i + 1; j < columns.size(); ++j) {
            const auto& x = columns[i];
            const auto& y = columns[j];
            double fwd = 0, bwd = 0;
            bool disjoint_support = false;
            for (size_t a = 0; a < x.size(); ++a) {
                bool px = x[a] > 0, py = y[a] > 0;
                if (px != py) {
                    disjoint_support = true;
                    break;
                }
                if (px) {
                    fwd = std::max(fwd, x[a] / y[a]);
                    bwd = std::max(bwd, y[a] / x[a]);
                }
            }
            double d = disjoint_support ? kInf : std::log(fwd * bwd);
            diam = std::max(diam, d);
        }
    return diam;
}

ConeState invariant_cone(const DiagramSide& side, int depth) {
    ConeState st;
    st.depth = depth;
    int n0 = side.vertex_count(0);
    st.columns.resize(static_cast<size_t>(n0));
    for (int j = 0; j < n0; ++j) {
        st.columns[static_cast<size_t>(j)].assign(static_cast<size_t>(n0), 0.0);
        st.columns[static_cast<size_t>(j)][static_cast<size_t>(j)] = 1.0;
    }
    st.hilbert_diameter = hilbert_column_diameter(st.columns);
    st.diameter_history.push_back(st.hilbert_diameter);

    for (int k = 1; k <= depth; ++k) {
        IntMatrix m = side.matrix_at(k);
        std::vector<std::vector<double>> next(static_cast<size_t>(m.rows()));
        double max_sum = 0;
        for (int j = 0; j < m.rows(); ++j) {
            std::vector<double> col(static_cast<size_t>(n0), 0.0);
            for (int u = 0; u < m.cols(); ++u) {
                double mult = static_cast<double>(m.at(j, u));
                if (mult == 0) continue;
                const auto& prev = st.columns[static_cast<size_t>(u)];
                for (size_t a = 0; a < col.size(); ++a) col[a] += mult * prev[a];
            }
            double s = 0;
            for (double v : col) s += v;
            if (!(s > 0)) throw DegenerateConeError("cone column vanished at level " + std::to_string(k));
            max_sum = std::max(max_sum, s);
            next[static_cast<size_t>(j)] = std::move(col);
        }
        // One shared factor per step: rescaling must not distort how columns
        // recombine at deeper levels.
        for (auto& col : next)
            for (double& v : col) v /= max_sum;
        st.columns = std::move(next);
        double prev = st.hilbert_diameter;
        st.hilbert_diameter = hilbert_column_diameter(st.columns);
        st.diameter_history.push_back(st.hilbert_diameter);
        // Nested cones: the diameter cannot grow.
        if (st.hilbert_diameter > prev + 1e-9)
            throw Error("cone diameter grew at level " + std::to_string(k) + "; invariant violated");
    }
    return st;
}

UniqueWeightReport unique_weight_report(const DiagramSide& side, int depth, double tol) {
    UniqueWeightReport rep;
    rep.depth = depth;
    ConeState cone;
    try {
        cone = invariant_cone(side, depth);
    } catch (const DegenerateConeError& e) {
        rep.verdict = UniqueWeightReport::Verdict::Inconclusive;
        rep.notes = e.what();
        return rep;
    }
    rep.hilbert_diameter = cone.hilbert_diameter;
    rep.periodic_components = periodic_component_scan(side, depth);

    // Barycenter of the normalized cone columns: the max-entropy
    // accumulation choice.
    int n0 = side.vertex_count(0);
    rep.limit_ray.assign(static_cast<size_t>(n0), 0.0);
    for (const auto& col : cone.columns) {
        double cs = 0;
        for (double v : col) cs += v;
        for (size_t a = 0; a < col.size(); ++a) rep.limit_ray[a] += col[a] / cs;
    }
    double s = 0;
    for (double v : rep.limit_ray) s += v;
    for (double& v : rep.limit_ray) v /= s;

    if (side_is_stationary(side)) {
        try {
            PfData pf = pf_eigendata(side);
            if (pf.xi_q) {
                bool strictly_positive = true;
                for (const auto& v : *pf.xi_q) strictly_positive = strictly_positive && v > 0;
                if (strictly_positive) rep.non_atomic_ray = pf.xi_q;
                if (pf.second_ray_q) rep.atomic_ray = pf.second_ray_q;
            }
        } catch (const NotPrimitiveError&) {
            // reducible stationary block: rays reported via cone/periodic data only
        }
    }

    const auto& hist = cone.diameter_history;
    if (hist.size() >= 6) {
        double last = hist.back();
        double earlier = hist[hist.size() - 6];
        bool both_inf = std::isinf(last) && std::isinf(earlier);
        rep.cone_stabilized = both_inf || std::abs(last - earlier) < 1e-12 * std::max(1.0, std::abs(last));
    }

    bool ray_positive = true;
    for (double v : rep.limit_ray) ray_positive = ray_positive && v > tol;

    if (rep.hilbert_diameter < tol && rep.periodic_components.empty() && ray_positive) {
        rep.verdict = UniqueWeightReport::Verdict::UniqueNonAtomic;
        rep.notes = "cone contracted below tolerance with no periodic component";
    } else if (!rep.periodic_components.empty()) {
        rep.verdict = UniqueWeightReport::Verdict::MultipleOrAtomic;
        rep.notes = "periodic component supports an atomic invariant weight";
    } else if (rep.hilbert_diameter >= tol && rep.cone_stabilized) {
        rep.verdict = UniqueWeightReport::Verdict::MultipleOrAtomic;
        rep.notes = "cone stabilized with at least two extreme rays";
    } else {
        rep.verdict = UniqueWeightReport::Verdict::Inconclusive;
        rep.notes = "cone still contracting at available depth";
    }
    return rep;
}

MpnSeriesReport mpn_weight_series(long long p, const std::string& n_rule, int depth) {
    if (p < 2) throw Error("mpn family needs p >= 2");
    MpnSeriesReport rep;
    rep.p = p;
    rep.n_rule = n_rule;

    BigInt pk(1);  // p^i
    Rational sum(0);
    for (int i = 0; i <= depth; ++i) {
        bool special = false;
        if (i >= 3) {
            long r = std::lround(std::sqrt(static_cast<double>(i + 1)));
            special = r >= 2 && r * r == i + 1;
        }
        BigInt a(1);
        if (special) {
            if (n_rule == "p^((i+1)^2-1)") {
                BigInt base(static_cast<long>(p));
                mpz_pow_ui(a.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(i));
            } else {
                a = BigInt(n_rule);
            }
        }
        Rational term(a, pk);
        term.canonicalize();
        sum += term;
        rep.terms.push_back(term);
        rep.partial_sums.push_back(sum);
        if (special) {
            rep.special_indices.push_back(i);
            rep.special_jumps.push_back(term);
        }
        pk *= BigInt(static_cast<long>(p));
    }

    // Divergence heuristic: the series is a geometric part plus the special
    // jumps; non-decaying jumps certify an unbounded sum.
    const auto& jumps = rep.special_jumps;
    for (const auto& j : jumps)
        if (j >= 1) rep.unbounded_trend = true;
    if (jumps.size() >= 2 && jumps.back() >= jumps[jumps.size() - 2]) rep.unbounded_trend = true;
    return rep;
}

std::pair<WeightFunction, WeightFunction> biinfinite_normalize(const WeightFunction& w_plus,
                                                               const WeightFunction& w_minus) {
    if (w_plus.max_level() < 0 || w_minus.max_level() < 0) throw Error("empty weight function");
    bool exact = w_plus.is_exact() && w_minus.is_exact();
    if (!w_plus.is_probability(exact ? 0.0 : 1e-9))
        throw ValidationError("w^+ must be a probability weight function at level 0");

    if (exact) {
        const auto& a = w_plus.level_q(0);
        const auto& b = w_minus.level_q(0);
        if (a.size() != b.size()) throw Error("weld size mismatch between weight functions");
        Rational pairing(0);
        for (size_t v = 0; v < a.size(); ++v) pairing += a[v] * b[v];
        if (pairing == 0) throw ZeroPairingError();
        return {w_plus, w_minus.scaled(Rational(1) / pairing)};
    }
    auto a = w_plus.level_d(0);
    auto b = w_minus.level_d(0);
    if (a.size() != b.size()) throw Error("weld size mismatch between weight functions");
    double pairing = 0;
    for (size_t v = 0; v < a.size(); ++v) pairing += a[v] * b[v];
    if (pairing == 0) throw ZeroPairingError();
    return {w_plus, w_minus.scaled_d(1.0 / pairing)};
}

}  // namespace brattelikit
