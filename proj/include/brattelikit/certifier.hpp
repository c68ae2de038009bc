#pragma once

#include <optional>

#include "brattelikit/surface.hpp"

namespace brattelikit {

// Window recurrence of the shift orbit: the finite-depth operationalization
// of an accumulation point. `exact` marks structurally guaranteed recurrence
// (stationary or eventually periodic sources, or a declared rule).
struct AccumulationWitness {
    std::string kind;                   // "stationary", "window-recurrence", "single-vertex"
    std::vector<long> subsequence;      // hit shifts, ascending
    int match_depth = 0;                // window radius checked
    int weld_size = 0;                  // |V*_0|
    std::vector<IntMatrix> window_pos;  // limit matrices, levels 1..match_depth
    std::vector<IntMatrix> window_neg;  // stored limit matrices, levels -1..-match_depth
    bool exact = false;
};

std::optional<AccumulationWitness> detect_accumulation(const BiInfiniteDiagram& d, long max_shift,
                                                       int window_depth);

// Every hit re-fetched and compared against the window; no cached trust.
bool verify_witness(const BiInfiniteDiagram& d, const AccumulationWitness& w);

struct LimitRealization {
    BiInfiniteDiagram diagram;
    bool stationary = false;   // window matrices constant
    bool window_only = true;   // realization valid only to the witness depth
};

LimitRealization limit_diagram(const AccumulationWitness& w);

// Rescaled width/height vectors along the subsequence with Cauchy
// diagnostics; throws NotCauchyError when oscillation exceeds tol.
struct LimitWeights {
    std::vector<double> w_star, h_star;
    std::vector<std::vector<double>> w_samples, h_samples;
    std::vector<double> t_at_hits;
    std::vector<long> used_hits;
    double oscillation = 0;
    bool cauchy = false;
};

LimitWeights limit_weights(const AccumulationWitness& w, const WeightedBundle& b, double tol);

// G0: rescaled heights staying away from zero; H0: heights vanishing along
// the subsequence. Throws EmptyG0Error when everything vanishes.
std::pair<std::vector<int>, std::vector<int>> partition_g0_h0(const std::vector<std::vector<double>>& h_samples,
                                                              double tol);

struct CriterionQuantities {
    int delta = 0;                 // max meet depth of the limit at level 0
    std::vector<int> g0, h0;
    double epsilon = 0;
    double delta_eps = 0;          // min{epsilon, min_v w*_Delta(v)/4}
    double diameter_bound = 0;     // 4(|w*_0|_inf + |h*_0|_inf)
    int c = 0;                     // |G0|
    double eta = 0;
    double epsilon_max_for_eta = 0;
    bool epsilon_feasible = false; // area of the good set >= 1 - eta at this epsilon
    bool weight_conv_ok = false;   // 1e-2-closeness of rescaled weights at the used hits
    double term_value = 0;         // the constant divergence summand
};

CriterionQuantities criterion_quantities(const AccumulationWitness& w, const LimitRealization& limit,
                                         const LimitWeights& lims, const WeightedBundle& b, double eta,
                                         double epsilon, int meet_cap);

struct DivergenceReport {
    double term = 0;
    int n_terms = 0;
    double partial_sum = 0;                // literal sum over n_terms
    std::vector<double> partial_sums;      // running sums, one per term
    double mu = 0;
    double mu_interval_bound = 0;          // mu e^{-3 mu} * term, the per-interval lower bound
    double min_time_gap = 0;
    bool diverges = false;
};

DivergenceReport divergence_check(const CriterionQuantities& q, const std::vector<double>& times_at_hits,
                                  int n_terms, double mu);

struct CertifyConfig {
    long max_shift = 42;
    int window_depth = 3;
    int depth = 32;        // analysis depth (cone, minimality, scans)
    int n_terms = 100;
    double eta = 0.05;
    double epsilon = -1;   // <= 0: choose automatically
    double mu = -1;        // <= 0: half the minimal time gap
    double tol = 1e-10;
    int meet_cap = 64;
};

struct Certificate {
    enum class Verdict { UniquelyErgodic, LimitUeButNoFiniteMeasure, Inconclusive };
    Verdict verdict = Verdict::Inconclusive;
    std::string route;  // "masur-window", "single-vertex", "case-2"
    std::optional<AccumulationWitness> witness;
    MinimalityCertificate::Verdict limit_minimality = MinimalityCertificate::Verdict::Inconclusive;
    std::optional<CriterionQuantities> quantities;
    std::optional<DivergenceReport> divergence;
    UniqueWeightReport oracle;  // cone oracle on the original positive part
    bool oracle_agrees = true;
    CertifyConfig config;
    std::string notes;
};

Certificate certify(const WeightedBundle& b, const CertifyConfig& cfg = {});

const char* verdict_name(Certificate::Verdict v);

}  // namespace brattelikit
