#include "sparsegen/bitmatrix.hpp"

#include <sstream>

#include "sparsegen/errors.hpp"

namespace sparsegen {

BinaryMatrix BinaryMatrix::identity(int n) {
    BinaryMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

BinaryMatrix BinaryMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
    if (rows.empty()) return BinaryMatrix();
    BinaryMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) throw argument_error("ragged matrix literal");
        for (size_t c = 0; c < rows[r].size(); ++c) m.set(static_cast<int>(r), static_cast<int>(c), rows[r][c] & 1);
    }
    return m;
}

bool BinaryMatrix::is_upper_triangular() const {
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < r && c < cols_; ++c)
            if (at(r, c)) return false;
    return true;
}

bool BinaryMatrix::column_permutable_to_upper_triangular() const {
    if (!is_square()) return false;
    // Columns with support inside the first i rows can fill the first i
    // diagonal slots; supports are nested intervals, so Hall's condition
    // reduces to a counting check.
    std::vector<int> maxrow(cols_, 0);
    for (int c = 0; c < cols_; ++c) {
        int mr = -1;
        for (int r = 0; r < rows_; ++r)
            if (at(r, c)) mr = r;
        if (mr < 0) return false;  // zero column, not triangularizable with nonzero diagonal
        maxrow[c] = mr;
    }
    std::vector<int> cnt(rows_ + 1, 0);
    for (int c = 0; c < cols_; ++c) cnt[maxrow[c] + 1]++;
    int acc = 0;
    for (int i = 1; i <= rows_; ++i) {
        acc += cnt[i];
        if (acc < i) return false;
    }
    return true;
}

bool BinaryMatrix::invertible_gf2() const {
    if (!is_square()) return false;
    if (cols_ > 64) throw capability_error("invertibility check limited to 64 columns");
    std::vector<uint64_t> rows;
    rows.reserve(rows_);
    for (int r = 0; r < rows_; ++r) rows.push_back(row_mask(r));
    int rank = 0;
    for (int c = 0; c < cols_; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows_; ++r)
            if (rows[r] >> c & 1) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = 0; r < rows_; ++r)
            if (r != rank && (rows[r] >> c & 1)) rows[r] ^= rows[rank];
        ++rank;
    }
    return rank == rows_;
}

int BinaryMatrix::row_weight(int r) const {
    int w = 0;
    for (int c = 0; c < cols_; ++c) w += at(r, c);
    return w;
}

int BinaryMatrix::col_weight(int c) const {
    int w = 0;
    for (int r = 0; r < rows_; ++r) w += at(r, c);
    return w;
}

uint64_t BinaryMatrix::row_mask(int r) const {
    if (cols_ > 64) throw capability_error("row_mask limited to 64 columns");
    uint64_t m = 0;
    for (int c = 0; c < cols_; ++c)
        if (at(r, c)) m |= 1ull << c;
    return m;
}

BinaryMatrix BinaryMatrix::kron(const BinaryMatrix& other) const {
    BinaryMatrix out(rows_ * other.rows_, cols_ * other.cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) {
            if (!at(r, c)) continue;
            for (int r2 = 0; r2 < other.rows_; ++r2)
                for (int c2 = 0; c2 < other.cols_; ++c2)
                    if (other.at(r2, c2)) out.set(r * other.rows_ + r2, c * other.cols_ + c2, 1);
        }
    return out;
}

BinaryMatrix BinaryMatrix::kron_power(int n) const {
    if (n < 1) throw argument_error("kron_power needs n >= 1");
    BinaryMatrix out = *this;
    for (int i = 1; i < n; ++i) out = out.kron(*this);
    return out;
}

BinaryMatrix BinaryMatrix::permute_columns(const std::vector<int>& perm) const {
    BinaryMatrix out(rows_, cols_);
    for (int c = 0; c < cols_; ++c)
        for (int r = 0; r < rows_; ++r) out.set(r, c, at(r, perm[c]));
    return out;
}

BinaryMatrix BinaryMatrix::permute_rows(const std::vector<int>& perm) const {
    BinaryMatrix out(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out.set(r, c, at(perm[r], c));
    return out;
}

std::vector<uint8_t> BinaryMatrix::mul_left(const std::vector<uint8_t>& message) const {
    if (static_cast<int>(message.size()) != rows_) throw argument_error("message length != matrix rows");
    std::vector<uint8_t> out(cols_, 0);
    for (int r = 0; r < rows_; ++r) {
        if (!message[r]) continue;
        for (int c = 0; c < cols_; ++c) out[c] ^= at(r, c);
    }
    return out;
}

std::string BinaryMatrix::to_string() const {
    std::ostringstream os;
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) os << (at(r, c) ? '1' : '0') << (c + 1 == cols_ ? "" : " ");
        os << '\n';
    }
    return os.str();
}

}  // namespace sparsegen
