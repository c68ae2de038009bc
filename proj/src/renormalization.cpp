#include "brattelikit/renormalization.hpp"

#include <cmath>

#include "brattelikit/errors.hpp"

namespace brattelikit {

std::vector<double> HeightVectors::level_d(int k) const {
    if (k < 0 || k > max_level()) throw Error("height level out of range");
    if (mode == NumericMode::Exact) return to_double_vec(q[static_cast<size_t>(k)]);
    return f[static_cast<size_t>(k)];
}

const std::vector<Rational>& HeightVectors::level_q(int k) const {
    if (mode != NumericMode::Exact) throw Error("exact heights requested from float data");
    if (k < 0 || k > max_level()) throw Error("height level out of range");
    return q[static_cast<size_t>(k)];
}

HeightVectors heights(const BiInfiniteDiagram& d, const WeightFunction& w_minus, int depth) {
    HeightVectors h;
    h.mode = w_minus.mode();
    if (w_minus.is_exact()) {
        h.q.push_back(w_minus.level_q(0));
        for (int k = 1; k <= depth; ++k) h.q.push_back(d.matrix_at(k).apply<Rational>(h.q.back()));
    } else {
        h.f.push_back(w_minus.level_d(0));
        for (int k = 1; k <= depth; ++k) h.f.push_back(d.matrix_at(k).apply<double>(h.f.back()));
    }
    return h;
}

namespace {

RenormSchedule schedule_impl(const BiInfiniteDiagram& d, const WeightFunction& w_plus,
                             const WeightFunction* w_minus, int depth) {
    if (w_plus.max_level() < depth) throw Error("w^+ not deep enough for requested schedule");
    RenormSchedule s;
    s.depth = depth;
    s.exact = w_plus.is_exact() && (!w_minus || w_minus->is_exact());

    HeightVectors h;
    if (w_minus) h = heights(d, *w_minus, depth);

    for (int k = 1; k <= depth; ++k) {
        if (s.exact) {
            const auto& wk = w_plus.level_q(k);
            Rational sum(0);
            for (const auto& v : wk) sum += v;
            if (sum <= 0) throw Error("level width sum vanished at level " + std::to_string(k));
            s.width_sums_q.push_back(sum);
            s.width_sums_d.push_back(sum.get_d());
            s.t.push_back(-std::log(sum.get_d()));
            std::vector<Rational> lw = wk;
            for (auto& v : lw) v /= sum;
            s.rescaled_widths_q.push_back(lw);
            s.rescaled_widths_d.push_back(to_double_vec(s.rescaled_widths_q.back()));
            if (w_minus) {
                std::vector<Rational> lh = h.level_q(k);
                for (auto& v : lh) v *= sum;
                s.rescaled_heights_q.push_back(lh);
                s.rescaled_heights_d.push_back(to_double_vec(s.rescaled_heights_q.back()));
            }
        } else {
            auto wk = w_plus.level_d(k);
            double sum = 0;
            for (double v : wk) sum += v;
            if (!(sum > 0)) throw Error("level width sum vanished at level " + std::to_string(k));
            s.width_sums_d.push_back(sum);
            s.t.push_back(-std::log(sum));
            for (auto& v : wk) v /= sum;
            s.rescaled_widths_d.push_back(wk);
            if (w_minus) {
                auto lh = h.level_d(k);
                for (auto& v : lh) v *= sum;
                s.rescaled_heights_d.push_back(lh);
            }
        }
    }

    // sup t_k < infinity whenever a periodic component carries weight.
    auto comps = periodic_component_scan(positive_part(d), depth);
    if (!comps.empty() && depth >= 1) {
        auto top = w_plus.level_d(depth);
        for (const auto& c : comps)
            if (top[static_cast<size_t>(c.top_vertex)] > (w_plus.is_exact() ? 0.0 : w_plus.tol()))
                s.bounded_flag = true;
    }
    return s;
}

}  // namespace

RenormSchedule renorm_times(const BiInfiniteDiagram& d, const WeightFunction& w_plus, int depth) {
    return schedule_impl(d, w_plus, nullptr, depth);
}

RenormSchedule renorm_times_with_heights(const BiInfiniteDiagram& d, const WeightFunction& w_plus,
                                         const WeightFunction& w_minus, int depth) {
    return schedule_impl(d, w_plus, &w_minus, depth);
}

namespace {

// Transport explicit order overrides across a shift by n. Policy-generated
// orders transport to themselves; only override tables move. Levels 1..n of
// the positive side migrate to the negative side with incoming/outgoing
// roles exchanged (the welding convention).
void transport_orders(const WeightedBundle& b, int /*n*/, EdgeOrders& pos_out, EdgeOrders& neg_out) {
    pos_out = EdgeOrders(b.pos_orders.policy());
    neg_out = EdgeOrders(b.neg_orders.policy());
    if (!b.pos_orders.has_overrides() && !b.neg_orders.has_overrides()) return;
    throw Error("shift of explicit order overrides is not implemented; use policy orders");
}

}  // namespace

WeightedBundle shift_weighted(const WeightedBundle& b, int n) {
    if (n < 0) throw Error("shift amount must be nonnegative");
    if (n == 0) return b;
    if (b.w_plus.max_level() < n) throw Error("w^+ not deep enough to shift by " + std::to_string(n));

    int new_plus_depth = b.w_plus.max_level() - n;
    int new_minus_depth = b.w_minus.max_level() + n;

    WeightedBundle out{b.diagram.shifted(n), b.w_plus, b.w_minus, b.pos_orders, b.neg_orders, b.name};
    transport_orders(b, n, out.pos_orders, out.neg_orders);

    if (b.w_plus.is_exact() && b.w_minus.is_exact()) {
        const auto& wn = b.w_plus.level_q(n);
        Rational sum(0);
        for (const auto& v : wn) sum += v;
        if (sum <= 0) throw Error("level width sum vanished at shift level");
        Rational up = Rational(1) / sum;  // e^{t_n}

        std::vector<std::vector<Rational>> plus_levels;
        for (int j = 0; j <= new_plus_depth; ++j) {
            auto lvl = b.w_plus.level_q(n + j);
            for (auto& v : lvl) v *= up;
            plus_levels.push_back(std::move(lvl));
        }
        HeightVectors h = heights(b.diagram, b.w_minus, n);
        std::vector<std::vector<Rational>> minus_levels;
        for (int j = 0; j <= new_minus_depth; ++j) {
            std::vector<Rational> lvl = j <= n ? h.level_q(n - j) : b.w_minus.level_q(j - n);
            for (auto& v : lvl) v *= sum;  // e^{-t_n}
            minus_levels.push_back(std::move(lvl));
        }
        out.w_plus = WeightFunction::exact(std::move(plus_levels));
        out.w_minus = WeightFunction::exact(std::move(minus_levels));
        return out;
    }

    auto wn = b.w_plus.level_d(n);
    double sum = 0;
    for (double v : wn) sum += v;
    if (!(sum > 0)) throw Error("level width sum vanished at shift level");
    double up = 1.0 / sum;

    std::vector<std::vector<double>> plus_levels;
    for (int j = 0; j <= new_plus_depth; ++j) {
        auto lvl = b.w_plus.level_d(n + j);
        for (auto& v : lvl) v *= up;
        plus_levels.push_back(std::move(lvl));
    }
    HeightVectors h = heights(b.diagram, b.w_minus, n);
    std::vector<std::vector<double>> minus_levels;
    for (int j = 0; j <= new_minus_depth; ++j) {
        std::vector<double> lvl = j <= n ? h.level_d(n - j) : b.w_minus.level_d(j - n);
        for (auto& v : lvl) v *= sum;
        minus_levels.push_back(std::move(lvl));
    }
    out.w_plus = WeightFunction::floating(std::move(plus_levels), b.w_plus.tol());
    out.w_minus = WeightFunction::floating(std::move(minus_levels), b.w_minus.tol());
    return out;
}

}  // namespace brattelikit
