#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sparsegen {

// Dense binary matrix over GF(2), row-major.
class BinaryMatrix {
public:
    BinaryMatrix() : rows_(0), cols_(0) {}
    BinaryMatrix(int rows, int cols) : rows_(rows), cols_(cols), bits_(static_cast<size_t>(rows) * cols, 0) {}

    static BinaryMatrix identity(int n);
    static BinaryMatrix from_rows(const std::vector<std::vector<int>>& rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    uint8_t at(int r, int c) const { return bits_[static_cast<size_t>(r) * cols_ + c]; }
    void set(int r, int c, uint8_t v) { bits_[static_cast<size_t>(r) * cols_ + c] = v & 1; }

    bool is_square() const { return rows_ == cols_; }
    bool is_upper_triangular() const;
    // true when some column permutation turns the matrix upper triangular
    bool column_permutable_to_upper_triangular() const;
    bool invertible_gf2() const;

    int row_weight(int r) const;
    int col_weight(int c) const;

    // row r as a bitmask (requires cols <= 64)
    uint64_t row_mask(int r) const;

    BinaryMatrix kron(const BinaryMatrix& other) const;
    BinaryMatrix kron_power(int n) const;

    BinaryMatrix permute_columns(const std::vector<int>& perm) const;
    BinaryMatrix permute_rows(const std::vector<int>& perm) const;

    // codeword = message * (*this), message.size() == rows()
    std::vector<uint8_t> mul_left(const std::vector<uint8_t>& message) const;

    bool operator==(const BinaryMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && bits_ == o.bits_;
    }

    std::string to_string() const;

private:
    int rows_, cols_;
    std::vector<uint8_t> bits_;
};

}  // namespace sparsegen
