#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "brattelikit/matrix.hpp"

namespace brattelikit {

enum class TailPolicy { Identity, Repeat, Fail };

// Finite description of one side of a diagram: a lazy sequence F_1, F_2, ...
// of transition matrices (|V_k| x |V_{k-1}|). Negative sides store their
// matrices already transposed so both sides share the source->range
// convention and one product code path.
class MatrixSource {
public:
    enum class Kind { Stationary, EventuallyPeriodic, ExplicitWindow, Programmatic, Telescoped };

    static MatrixSource stationary(std::vector<IntMatrix> period);
    static MatrixSource eventually_periodic(std::vector<IntMatrix> head, std::vector<IntMatrix> period);
    // identity_from_cols: an Identity tail continues a negative-convention
    // chain (rows of the next matrix must match the columns of the last).
    static MatrixSource explicit_window(std::vector<IntMatrix> matrices, TailPolicy tail,
                                        bool identity_from_cols = false);
    static MatrixSource programmatic(std::string rule_id, std::map<std::string, std::string> params);
    static MatrixSource telescoped(MatrixSource base, std::vector<long> cut_levels);

    // F_k for k >= 1. Deterministic and pure; throws TailPolicyError for an
    // exceeded Fail window.
    IntMatrix at(long k) const;

    Kind kind() const { return kind_; }
    // Smallest j with F_{k+j} = F_k for all k >= 1, when the description
    // makes one evident (period length); nullopt for window/programmatic.
    std::optional<int> stationary_period() const;
    // Levels before the periodic part starts (0 for purely stationary).
    int head_length() const;

    const std::vector<IntMatrix>& head() const { return head_; }
    const std::vector<IntMatrix>& period() const { return period_; }
    const std::vector<IntMatrix>& window() const { return window_; }
    TailPolicy tail_policy() const { return tail_; }
    const std::string& rule_id() const { return rule_id_; }
    const std::map<std::string, std::string>& params() const { return params_; }

private:
    MatrixSource() = default;
    Kind kind_ = Kind::Stationary;
    std::vector<IntMatrix> head_, period_, window_;
    TailPolicy tail_ = TailPolicy::Identity;
    bool identity_from_cols_ = false;
    std::string rule_id_;
    std::map<std::string, std::string> params_;
    std::shared_ptr<MatrixSource> base_;
    std::vector<long> cuts_;
};

// M(p,n) = [[p,n],[0,1]]; the two-vertex family whose weight series decides
// existence of a finite invariant measure.
IntMatrix mpn_matrix(long long p, long long n);

// A two-sided diagram: matrices at levels Z\{0}, welded at a common level-0
// vertex set. Shifting is index arithmetic on the underlying bi-infinite
// sequence, so shifted views stay exact and lazy.
class BiInfiniteDiagram {
public:
    BiInfiniteDiagram(MatrixSource positive, MatrixSource negative, int weld_size);

    // Stored matrix at nonzero level: for k >= 1 this is F_k of the positive
    // part; for k <= -1 the transposed negative-part matrix, i.e. the matrix
    // from level k (columns) to level k+1 (rows).
    IntMatrix matrix_at(long level) const;
    int vertex_count(long level) const;
    int weld_size() const { return weld_size_; }

    BiInfiniteDiagram shifted(long n) const;
    long shift_offset() const { return offset_; }

    const MatrixSource& positive_source() const { return positive_; }
    const MatrixSource& negative_source() const { return negative_; }

    // Matrix of the step from level j to level j+1 (range x source), valid
    // for any j; used by reachability walks across the weld.
    IntMatrix step_matrix(long from_level) const;

private:
    MatrixSource positive_, negative_;
    int weld_size_;
    long offset_ = 0;
};

// One-sided (classical Bratteli) view: level-k matrix is |V_k| x |V_{k-1}|.
// The negative view re-transposes stored matrices so its own levels read
// outward from the weld like an ordinary diagram.
struct DiagramSide {
    const BiInfiniteDiagram* diagram = nullptr;
    bool negative = false;

    IntMatrix matrix_at(int k) const;
    int vertex_count(int k) const;
};

inline DiagramSide positive_part(const BiInfiniteDiagram& d) { return DiagramSide{&d, false}; }
inline DiagramSide negative_part(const BiInfiniteDiagram& d) { return DiagramSide{&d, true}; }

struct ValidationIssue {
    long level;
    std::string kind;  // "dimension-mismatch", "zero-row", "zero-column", "weld-mismatch", "source-error"
    std::string detail;
};

struct ValidationReport {
    bool valid = true;
    int depth = 0;
    std::vector<ValidationIssue> issues;
    std::vector<int> vertex_counts;  // levels -depth..depth inclusive
};

ValidationReport validate(const BiInfiniteDiagram& d, int depth);

// Positive-side blocks between consecutive cut levels become single matrices;
// negative side untouched. Finitely many cuts: levels beyond the last cut
// pass through unblocked.
BiInfiniteDiagram telescope(const BiInfiniteDiagram& d, const std::vector<long>& cut_levels);

// c_0 = ones over V_0, c_k = F_k c_{k-1}; entry v equals |S(v)|.
std::vector<long long> path_count_vector(const DiagramSide& side, int k);

}  // namespace brattelikit
