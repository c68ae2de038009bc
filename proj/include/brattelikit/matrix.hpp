#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brattelikit/rational.hpp"

namespace brattelikit {

// Nonnegative integer transition matrix. Convention throughout: rows index
// the range level, columns the source level, entry = edge multiplicity.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(int rows, int cols, std::vector<long long> data);
    IntMatrix(int rows, int cols, long long fill = 0);

    static IntMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long long at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }
    long long& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const std::vector<long long>& data() const { return data_; }

    bool operator==(const IntMatrix& o) const = default;

    // Composition of levels: (A.then_up(B)) maps source of A to range of B,
    // i.e. the block product B*A. Throws OverflowError on int64 overflow.
    IntMatrix then_up(const IntMatrix& next) const;
    IntMatrix transpose() const;

    bool all_positive() const;
    bool has_zero_row() const;
    bool has_zero_col() const;
    std::vector<int> zero_rows() const;
    std::vector<int> zero_cols() const;
    long long row_sum(int r) const;
    long long col_sum(int c) const;

    // y = M x with x indexed by columns (source level), y by rows.
    template <class S>
    std::vector<S> apply(const std::vector<S>& x) const;
    // y = M^T x with x indexed by rows (range level), y by columns.
    template <class S>
    std::vector<S> apply_transposed(const std::vector<S>& x) const;

    std::string to_string() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<long long> data_;
};

long long checked_mul(long long a, long long b);
long long checked_add(long long a, long long b);

// Like then_up but saturating at a large cap; positivity-preserving, used
// where only the support of a block product matters.
IntMatrix saturating_product(const IntMatrix& first, const IntMatrix& next, long long cap = (1LL << 50));

template <class S>
std::vector<S> IntMatrix::apply(const std::vector<S>& x) const {
    std::vector<S> y(static_cast<size_t>(rows_), S(0));
    for (int r = 0; r < rows_; ++r) {
        S acc(0);
        for (int c = 0; c < cols_; ++c) {
            long long m = at(r, c);
            if (m != 0) acc += scalar_from_ll<S>(m) * x[static_cast<size_t>(c)];
        }
        y[static_cast<size_t>(r)] = acc;
    }
    return y;
}

template <class S>
std::vector<S> IntMatrix::apply_transposed(const std::vector<S>& x) const {
    std::vector<S> y(static_cast<size_t>(cols_), S(0));
    for (int c = 0; c < cols_; ++c) {
        S acc(0);
        for (int r = 0; r < rows_; ++r) {
            long long m = at(r, c);
            if (m != 0) acc += scalar_from_ll<S>(m) * x[static_cast<size_t>(r)];
        }
        y[static_cast<size_t>(c)] = acc;
    }
    return y;
}

}  // namespace brattelikit
