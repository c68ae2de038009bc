#include "brattelikit/diagram.hpp"

#include <algorithm>
#include <cmath>

#include "brattelikit/errors.hpp"

namespace brattelikit {

namespace {

bool is_pow2(long k) { return k >= 2 && (k & (k - 1)) == 0; }

long long checked_ipow(long long base, long long exp) {
    long long r = 1;
    for (long long i = 0; i < exp; ++i) r = checked_mul(r, base);
    return r;
}

// Decides |V_k| for the single-vertex-often rule: one vertex at k in
// {2^m - 1, 2^m}, two otherwise. The 1x1 block [[2]] then sits at every
// level 2^m.
int svo_vertex_count(long k) {
    if (k <= 0) return 2;
    if (is_pow2(k) || is_pow2(k + 1)) return 1;
    return 2;
}

IntMatrix svo_matrix(long k) {
    int below = svo_vertex_count(k - 1);
    int here = svo_vertex_count(k);
    if (below == 1 && here == 1) return IntMatrix(1, 1, {2});
    if (below == 2 && here == 1) return IntMatrix(1, 2, {1, 1});
    if (below == 1 && here == 2) return IntMatrix(2, 1, {1, 1});
    return IntMatrix::identity(2);
}

// Special levels of the M(p,n) family are k = (i+1)^2 - 1, i >= 1.
std::optional<long> mpn_special_index(long k) {
    long r = std::lround(std::sqrt(static_cast<double>(k + 1)));
    for (long i = r - 2; i <= r + 2; ++i)
        if (i >= 2 && i * i == k + 1) return i - 1;
    return std::nullopt;
}

IntMatrix mpn_rule_matrix(const std::map<std::string, std::string>& params, long k) {
    long long p = std::stoll(params.at("p"));
    const std::string& rule = params.at("nRule");
    long long n = 1;
    if (auto i = mpn_special_index(k)) {
        if (rule == "p^((i+1)^2-1)") {
            n = checked_ipow(p, k);  // exponent (i+1)^2-1 equals the level itself
        } else {
            n = std::stoll(rule);
        }
        (void)*i;
    }
    return mpn_matrix(p, n);
}

}  // namespace

IntMatrix mpn_matrix(long long p, long long n) { return IntMatrix(2, 2, {p, n, 0, 1}); }

MatrixSource MatrixSource::stationary(std::vector<IntMatrix> period) {
    if (period.empty()) throw Error("stationary source needs a nonempty period");
    MatrixSource s;
    s.kind_ = Kind::Stationary;
    s.period_ = std::move(period);
    return s;
}

MatrixSource MatrixSource::eventually_periodic(std::vector<IntMatrix> head, std::vector<IntMatrix> period) {
    if (period.empty()) throw Error("eventually periodic source needs a nonempty period");
    MatrixSource s;
    s.kind_ = Kind::EventuallyPeriodic;
    s.head_ = std::move(head);
    s.period_ = std::move(period);
    return s;
}

MatrixSource MatrixSource::explicit_window(std::vector<IntMatrix> matrices, TailPolicy tail,
                                           bool identity_from_cols) {
    if (matrices.empty()) throw Error("explicit window needs at least one matrix");
    MatrixSource s;
    s.kind_ = Kind::ExplicitWindow;
    s.window_ = std::move(matrices);
    s.tail_ = tail;
    s.identity_from_cols_ = identity_from_cols;
    return s;
}

MatrixSource MatrixSource::programmatic(std::string rule_id, std::map<std::string, std::string> params) {
    MatrixSource s;
    s.kind_ = Kind::Programmatic;
    s.rule_id_ = std::move(rule_id);
    s.params_ = std::move(params);
    if (s.rule_id_ != "mpn-family" && s.rule_id_ != "single-vertex-often")
        throw Error("unknown programmatic rule: " + s.rule_id_);
    return s;
}

MatrixSource MatrixSource::telescoped(MatrixSource base, std::vector<long> cut_levels) {
    MatrixSource s;
    s.kind_ = Kind::Telescoped;
    s.base_ = std::make_shared<MatrixSource>(std::move(base));
    s.cuts_ = std::move(cut_levels);
    return s;
}

IntMatrix MatrixSource::at(long k) const {
    if (k < 1) throw Error("matrix source index must be >= 1");
    switch (kind_) {
        case Kind::Stationary:
            return period_[static_cast<size_t>((k - 1) % static_cast<long>(period_.size()))];
        case Kind::EventuallyPeriodic: {
            long h = static_cast<long>(head_.size());
            if (k <= h) return head_[static_cast<size_t>(k - 1)];
            return period_[static_cast<size_t>((k - 1 - h) % static_cast<long>(period_.size()))];
        }
        case Kind::ExplicitWindow: {
            long w = static_cast<long>(window_.size());
            if (k <= w) return window_[static_cast<size_t>(k - 1)];
            switch (tail_) {
                case TailPolicy::Identity:
                    return IntMatrix::identity(identity_from_cols_ ? window_.back().cols()
                                                                   : window_.back().rows());
                case TailPolicy::Repeat:
                    return window_.back();
                case TailPolicy::Fail:
                    throw TailPolicyError(k);
            }
            throw Error("unreachable");
        }
        case Kind::Programmatic:
            if (rule_id_ == "mpn-family") return mpn_rule_matrix(params_, k);
            return svo_matrix(k);
        case Kind::Telescoped: {
            // cuts_ holds boundaries b_0 <= b_1 <= ...; block i is (b_{i-1}, b_i].
            long m = static_cast<long>(cuts_.size()) - 1;
            long lo, hi;
            if (k <= m) {
                lo = cuts_[static_cast<size_t>(k - 1)];
                hi = cuts_[static_cast<size_t>(k)];
            } else {
                lo = cuts_.back() + (k - m) - 1;
                hi = lo + 1;
            }
            IntMatrix prod = base_->at(lo + 1);
            for (long j = lo + 2; j <= hi; ++j) prod = prod.then_up(base_->at(j));
            return prod;
        }
    }
    throw Error("unreachable");
}

std::optional<int> MatrixSource::stationary_period() const {
    if (kind_ == Kind::Stationary || kind_ == Kind::EventuallyPeriodic)
        return static_cast<int>(period_.size());
    return std::nullopt;
}

int MatrixSource::head_length() const {
    if (kind_ == Kind::EventuallyPeriodic) return static_cast<int>(head_.size());
    return 0;
}

BiInfiniteDiagram::BiInfiniteDiagram(MatrixSource positive, MatrixSource negative, int weld_size)
    : positive_(std::move(positive)), negative_(std::move(negative)), weld_size_(weld_size) {
    if (weld_size_ < 1) throw Error("weld size must be positive");
}

IntMatrix BiInfiniteDiagram::matrix_at(long level) const {
    if (level == 0) throw Error("no matrix at level 0");
    long pos = (level >= 1 ? level - 1 : level) + offset_;
    long orig = pos >= 0 ? pos + 1 : pos;
    if (orig >= 1) return positive_.at(orig);
    return negative_.at(-orig);
}

int BiInfiniteDiagram::vertex_count(long level) const {
    if (level == 0) {
        if (offset_ == 0) return weld_size_;
        return positive_.at(offset_).rows();
    }
    IntMatrix m = matrix_at(level);
    return level >= 1 ? m.rows() : m.cols();
}

BiInfiniteDiagram BiInfiniteDiagram::shifted(long n) const {
    if (n < 0) throw Error("shift amount must be nonnegative");
    BiInfiniteDiagram d = *this;
    d.offset_ += n;
    return d;
}

IntMatrix BiInfiniteDiagram::step_matrix(long from_level) const {
    return matrix_at(from_level >= 0 ? from_level + 1 : from_level);
}

IntMatrix DiagramSide::matrix_at(int k) const {
    if (k < 1) throw Error("side level must be >= 1");
    if (!negative) return diagram->matrix_at(k);
    return diagram->matrix_at(-static_cast<long>(k)).transpose();
}

int DiagramSide::vertex_count(int k) const {
    if (k < 0) throw Error("side level must be >= 0");
    return diagram->vertex_count(negative ? -static_cast<long>(k) : k);
}

ValidationReport validate(const BiInfiniteDiagram& d, int depth) {
    if (depth < 1) throw Error("validation depth must be >= 1");
    ValidationReport rep;
    rep.depth = depth;

    auto note = [&](long level, const std::string& kind, const std::string& detail) {
        rep.issues.push_back({level, kind, detail});
        rep.valid = false;
    };

    auto fetch = [&](long level) -> std::optional<IntMatrix> {
        try {
            return d.matrix_at(level);
        } catch (const Error& e) {
            note(level, "source-error", e.what());
            return std::nullopt;
        }
    };

    int weld = d.weld_size();
    // Positive chain: cols(F_1) = |V_0|, cols(F_{k+1}) = rows(F_k).
    int expect = weld;
    for (int k = 1; k <= depth; ++k) {
        auto m = fetch(k);
        if (!m) break;
        if (m->cols() != expect)
            note(k, "dimension-mismatch",
                 "expected " + std::to_string(expect) + " columns, got " + std::to_string(m->cols()));
        for (int r : m->zero_rows())
            note(k, "zero-row", "vertex " + std::to_string(r) + " at level " + std::to_string(k) + " has no incoming edge");
        for (int c : m->zero_cols())
            note(k, "zero-column", "vertex " + std::to_string(c) + " at level " + std::to_string(k - 1) + " has no outgoing edge");
        expect = m->rows();
    }
    // Negative chain: rows(M_{-1}) = |V_0|, rows(M_{-j-1}) = cols(M_{-j}).
    expect = weld;
    for (int j = 1; j <= depth; ++j) {
        auto m = fetch(-j);
        if (!m) break;
        if (m->rows() != expect) {
            if (j == 1)
                note(-j, "weld-mismatch",
                     "negative side exposes " + std::to_string(m->rows()) + " level-0 vertices, weld size is " +
                         std::to_string(weld));
            else
                note(-j, "dimension-mismatch",
                     "expected " + std::to_string(expect) + " rows, got " + std::to_string(m->rows()));
        }
        for (int r : m->zero_rows())
            note(-j, "zero-row", "vertex " + std::to_string(r) + " at level " + std::to_string(-j + 1) + " has no edge from below");
        for (int c : m->zero_cols())
            note(-j, "zero-column", "vertex " + std::to_string(c) + " at level " + std::to_string(-j) + " has no edge upward");
        expect = m->cols();
    }

    for (long l = -depth; l <= depth; ++l) {
        try {
            rep.vertex_counts.push_back(d.vertex_count(l));
        } catch (const Error&) {
            rep.vertex_counts.push_back(-1);
        }
    }
    return rep;
}

BiInfiniteDiagram telescope(const BiInfiniteDiagram& d, const std::vector<long>& cut_levels) {
    if (cut_levels.empty()) throw Error("telescope needs at least one cut level");
    long prev = 0;
    for (long c : cut_levels) {
        if (c <= prev) throw Error("cut levels must be strictly increasing and >= 1");
        prev = c;
    }
    if (d.shift_offset() != 0) throw Error("telescope a diagram before shifting it");

    // Uniformly spaced cuts over a stationary source keep the result
    // stationary, which downstream eigen-analysis relies on.
    const MatrixSource& pos = d.positive_source();
    if (auto p = pos.stationary_period(); p && pos.kind() == MatrixSource::Kind::Stationary) {
        long s = cut_levels[0];
        bool uniform = s >= 1 && s % *p == 0;
        for (size_t i = 1; uniform && i < cut_levels.size(); ++i)
            uniform = (cut_levels[i] - cut_levels[i - 1]) == s;
        if (uniform) {
            IntMatrix block = pos.at(1);
            for (long j = 2; j <= s; ++j) block = block.then_up(pos.at(j));
            return BiInfiniteDiagram(MatrixSource::stationary({block}), d.negative_source(), d.weld_size());
        }
    }

    std::vector<long> boundaries;
    boundaries.reserve(cut_levels.size() + 1);
    boundaries.push_back(0);
    for (long c : cut_levels) boundaries.push_back(c);
    return BiInfiniteDiagram(MatrixSource::telescoped(d.positive_source(), boundaries),
                             d.negative_source(), d.weld_size());
}

std::vector<long long> path_count_vector(const DiagramSide& side, int k) {
    std::vector<long long> c(static_cast<size_t>(side.vertex_count(0)), 1);
    for (int j = 1; j <= k; ++j) {
        IntMatrix m = side.matrix_at(j);
        std::vector<long long> next(static_cast<size_t>(m.rows()), 0);
        for (int r = 0; r < m.rows(); ++r)
            for (int col = 0; col < m.cols(); ++col)
                if (m.at(r, col) != 0)
                    next[static_cast<size_t>(r)] = checked_add(
                        next[static_cast<size_t>(r)],
                        checked_mul(m.at(r, col), c[static_cast<size_t>(col)]));
        c = std::move(next);
    }
    return c;
}

}  // namespace brattelikit
