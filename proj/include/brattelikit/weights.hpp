#pragma once

#include <optional>
#include <string>
#include <vector>

#include "brattelikit/path_dynamics.hpp"
#include "brattelikit/rational.hpp"

namespace brattelikit {

enum class NumericMode { Exact, Float };

// Vertex weights per level for one side of a diagram; edge weights are the
// derived ratios w(r(e))/w(s(e)). Exact mode keeps rationals end to end,
// float mode carries a tolerance.
class WeightFunction {
public:
    static WeightFunction exact(std::vector<std::vector<Rational>> levels);
    static WeightFunction floating(std::vector<std::vector<double>> levels, double tol = 1e-12);

    NumericMode mode() const { return mode_; }
    bool is_exact() const { return mode_ == NumericMode::Exact; }
    double tol() const { return tol_; }
    int max_level() const;

    std::vector<double> level_d(int k) const;
    const std::vector<Rational>& level_q(int k) const;

    WeightFunction scaled(const Rational& factor) const;
    WeightFunction scaled_d(double factor) const;

    bool is_positive() const;                 // every stored weight > 0
    bool is_probability(double tol) const;    // level-0 sum == 1

private:
    NumericMode mode_ = NumericMode::Float;
    double tol_ = 1e-12;
    std::vector<std::vector<Rational>> q_;
    std::vector<std::vector<double>> f_;
};

template <class S>
std::vector<S> weight_level_as(const WeightFunction& w, int k);
template <>
inline std::vector<double> weight_level_as<double>(const WeightFunction& w, int k) { return w.level_d(k); }
template <>
inline std::vector<Rational> weight_level_as<Rational>(const WeightFunction& w, int k) { return w.level_q(k); }

struct WeightValidationReport {
    int depth = 0;
    double tol = 0;
    bool recursion_ok = true;           // w_{k-1} = F_k^T w_k at every checked level
    double max_recursion_residual = 0;
    bool edge_sums_ok = true;           // per-vertex outgoing edge weights sum to 1 where defined
    double max_edge_sum_residual = 0;
    enum class CondIII { Pass, Inconclusive } cond3 = CondIII::Pass;
    double nonperiodic_max_final = 0;   // largest cylinder weight off periodic chains at the last level
    std::vector<int> periodic_carriers; // periodic components still carrying weight > tol
    bool positive = false;
    bool probability = false;
    bool ok() const { return recursion_ok && edge_sums_ok; }
};

WeightValidationReport validate_weight(const DiagramSide& side, const WeightFunction& w, int depth, double tol);

// Perron-Frobenius data of the period block of a stationary side.
struct PfData {
    int period = 1;
    double lambda = 0;
    std::vector<double> xi;                       // level-0 weights, sum 1
    std::optional<Rational> lambda_q;             // present when the root is rational (<= 2x2)
    std::optional<std::vector<Rational>> xi_q;
    // Second eigenray of a 2x2 block when rational and nonnegative.
    std::optional<Rational> lambda2_q;
    std::optional<std::vector<Rational>> second_ray_q;
};

PfData pf_eigendata(const DiagramSide& side, int power_bound = 80, double tol = 1e-15);

// Same analysis for an explicit square block (used by period-map reports).
PfData pf_of_block(const IntMatrix& block, int period = 1, int power_bound = 80, double tol = 1e-15);

// Weight function with level-k vector lambda-scaled down the tower; exact
// when the PF root is rational and Exact mode is requested.
WeightFunction pf_weights(const DiagramSide& side, int depth, NumericMode preferred);

// Constructive existence: push uniform mass at `depth` down the diagram and
// normalize. Always succeeds on a valid side.
WeightFunction solve_weight(const DiagramSide& side, int depth, NumericMode mode);

struct ConeState {
    int depth = 0;
    std::vector<std::vector<double>> columns;   // normalized columns of F_1^T ... F_K^T
    double hilbert_diameter = 0;
    std::vector<double> diameter_history;       // entry k = diameter after k steps
};

double hilbert_column_diameter(const std::vector<std::vector<double>>& columns);

ConeState invariant_cone(const DiagramSide& side, int depth);

struct UniqueWeightReport {
    enum class Verdict { UniqueNonAtomic, MultipleOrAtomic, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    int depth = 0;
    double hilbert_diameter = 0;
    bool cone_stabilized = false;
    std::vector<double> limit_ray;  // barycenter of the cone columns, sum 1
    std::vector<PeriodicComponentCandidate> periodic_components;
    std::optional<std::vector<Rational>> non_atomic_ray;  // exact PF direction when available
    std::optional<std::vector<Rational>> atomic_ray;      // exact fixed direction on a periodic chain
    std::string notes;
};

UniqueWeightReport unique_weight_report(const DiagramSide& side, int depth, double tol);

// Partial sums sum_{i<=k} a_i / p^i with a_i = n_j at i = (j+1)^2-1 and 1
// otherwise; decides whether a finite weight normalized at the big vertex
// can exist. Exact at any depth (big integers).
struct MpnSeriesReport {
    long long p = 0;
    std::string n_rule;
    std::vector<Rational> terms;
    std::vector<Rational> partial_sums;
    std::vector<int> special_indices;
    std::vector<Rational> special_jumps;
    bool unbounded_trend = false;
};

MpnSeriesReport mpn_weight_series(long long p, const std::string& n_rule, int depth);

// Scales wMinus so that sum_v wMinus(v) * wPlus(v) = 1 at level 0.
std::pair<WeightFunction, WeightFunction> biinfinite_normalize(const WeightFunction& w_plus,
                                                               const WeightFunction& w_minus);

}  // namespace brattelikit
