#pragma once

#include "brattelikit/weights.hpp"

namespace brattelikit {

// Tower heights: h^0_v = w^-(v), h^k = F_k h^{k-1}, extended up the
// positive side.
struct HeightVectors {
    NumericMode mode = NumericMode::Float;
    std::vector<std::vector<Rational>> q;
    std::vector<std::vector<double>> f;

    int max_level() const { return static_cast<int>((mode == NumericMode::Exact ? q.size() : f.size())) - 1; }
    std::vector<double> level_d(int k) const;
    const std::vector<Rational>& level_q(int k) const;
};

HeightVectors heights(const BiInfiniteDiagram& d, const WeightFunction& w_minus, int depth);

// t_k = -log sum_v w^+_k(v); the rescale factors e^{+-t_k} are the exact
// rationals 1/sum and sum, so exact mode carries rescaled data exactly while
// t itself stays floating point.
struct RenormSchedule {
    int depth = 0;
    bool exact = false;
    std::vector<double> t;                     // t[k-1] = t_k
    std::vector<double> width_sums_d;          // sum_v w_k(v)
    std::vector<Rational> width_sums_q;        // exact mode
    bool bounded_flag = false;                 // positive-weight periodic component present
    std::vector<std::vector<double>> rescaled_widths_d;   // e^{t_k} w_k, k = 1..depth
    std::vector<std::vector<double>> rescaled_heights_d;  // e^{-t_k} h^k (when heights supplied)
    std::vector<std::vector<Rational>> rescaled_widths_q;
    std::vector<std::vector<Rational>> rescaled_heights_q;
};

RenormSchedule renorm_times(const BiInfiniteDiagram& d, const WeightFunction& w_plus, int depth);
RenormSchedule renorm_times_with_heights(const BiInfiniteDiagram& d, const WeightFunction& w_plus,
                                         const WeightFunction& w_minus, int depth);

// A diagram with its normalized weight pair and per-side orders; the unit
// every renormalization and surface operation consumes.
struct WeightedBundle {
    BiInfiniteDiagram diagram;
    WeightFunction w_plus;   // probability weight on the positive part
    WeightFunction w_minus;  // finite weight on the negative part, probWeight-normalized
    EdgeOrders pos_orders;
    EdgeOrders neg_orders;
    std::string name;
};

// sigma^n with weights rescaled by e^{+-t_n} and orders transported. The
// positive weight loses n levels of depth; the negative gains them.
WeightedBundle shift_weighted(const WeightedBundle& b, int n);

}  // namespace brattelikit
