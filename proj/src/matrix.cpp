#include "brattelikit/matrix.hpp"

#include <limits>
#include <sstream>

#include "brattelikit/errors.hpp"

namespace brattelikit {

long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 overflow in matrix product");
    return r;
}

long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 overflow in matrix sum");
    return r;
}

IntMatrix::IntMatrix(int rows, int cols, std::vector<long long> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows_ < 1 || cols_ < 1) throw Error("matrix dimensions must be positive");
    if (data_.size() != static_cast<size_t>(rows_) * cols_) throw Error("matrix data size mismatch");
    for (long long v : data_)
        if (v < 0) throw Error("matrix entries must be nonnegative");
}

IntMatrix::IntMatrix(int rows, int cols, long long fill)
    : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
    if (rows_ < 1 || cols_ < 1) throw Error("matrix dimensions must be positive");
    if (fill < 0) throw Error("matrix entries must be nonnegative");
}

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n, 0LL);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::then_up(const IntMatrix& next) const {
    if (next.cols_ != rows_) throw Error("dimension mismatch in block product");
    IntMatrix out(next.rows_, cols_, 0LL);
    for (int r = 0; r < next.rows_; ++r)
        for (int k = 0; k < rows_; ++k) {
            long long nv = next.at(r, k);
            if (nv == 0) continue;
            for (int c = 0; c < cols_; ++c) {
                long long t = checked_mul(nv, at(k, c));
                out.at(r, c) = checked_add(out.at(r, c), t);
            }
        }
    return out;
}

IntMatrix saturating_product(const IntMatrix& first, const IntMatrix& next, long long cap) {
    if (next.cols() != first.rows()) throw Error("dimension mismatch in block product");
    IntMatrix out(next.rows(), first.cols(), 0LL);
    for (int r = 0; r < next.rows(); ++r)
        for (int k = 0; k < first.rows(); ++k) {
            long long nv = next.at(r, k);
            if (nv == 0) continue;
            if (nv > cap) nv = cap;
            for (int c = 0; c < first.cols(); ++c) {
                long long f = first.at(k, c);
                if (f > cap) f = cap;
                long long t;
                if (__builtin_mul_overflow(nv, f, &t) || t > cap) t = cap;
                long long s;
                if (__builtin_add_overflow(out.at(r, c), t, &s) || s > cap) s = cap;
                out.at(r, c) = s;
            }
        }
    return out;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix out(cols_, rows_, 0LL);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out.at(c, r) = at(r, c);
    return out;
}

bool IntMatrix::all_positive() const {
    for (long long v : data_)
        if (v <= 0) return false;
    return true;
}

std::vector<int> IntMatrix::zero_rows() const {
    std::vector<int> out;
    for (int r = 0; r < rows_; ++r)
        if (row_sum(r) == 0) out.push_back(r);
    return out;
}

std::vector<int> IntMatrix::zero_cols() const {
    std::vector<int> out;
    for (int c = 0; c < cols_; ++c)
        if (col_sum(c) == 0) out.push_back(c);
    return out;
}

bool IntMatrix::has_zero_row() const { return !zero_rows().empty(); }
bool IntMatrix::has_zero_col() const { return !zero_cols().empty(); }

long long IntMatrix::row_sum(int r) const {
    long long s = 0;
    for (int c = 0; c < cols_; ++c) s = checked_add(s, at(r, c));
    return s;
}

long long IntMatrix::col_sum(int c) const {
    long long s = 0;
    for (int r = 0; r < rows_; ++r) s = checked_add(s, at(r, c));
    return s;
}

std::string IntMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (int r = 0; r < rows_; ++r) {
        os << (r ? ";[" : "[");
        for (int c = 0; c < cols_; ++c) os << (c ? "," : "") << at(r, c);
        os << "]";
    }
    os << "]";
    return os.str();
}

}  // namespace brattelikit
