#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gridhom {

// dense matrix over the two-element field, rows packed in 64-bit words
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(int rows, int cols) : rows_(rows), cols_(cols), words_((cols + 63) / 64), data_((size_t)rows * words_, 0) {}
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool get(int r, int c) const { return (row(r)[c >> 6] >> (c & 63)) & 1; }
    void flip(int r, int c) { row(r)[c >> 6] ^= 1ULL << (c & 63); }
    void set(int r, int c, bool v) {
        if (get(r, c) != v) flip(r, c);
    }
    std::uint64_t* row(int r) { return data_.data() + (size_t)r * words_; }
    const std::uint64_t* row(int r) const { return data_.data() + (size_t)r * words_; }
    int words() const { return words_; }
    void append_row(const std::uint64_t* src);
    void append_zero_row();
    BitMatrix select_cols(const std::vector<int>& cols) const;
    BitMatrix select_rows(const std::vector<int>& rows) const;
    BitMatrix transpose() const;
    BitMatrix multiply(const BitMatrix& b) const;  // (this) * b with rows as vectors

private:
    int rows_ = 0, cols_ = 0, words_ = 0;
    std::vector<std::uint64_t> data_;
};

int gf2_rank(BitMatrix m);
// rows spanning the left null space {c : c * m = 0}
BitMatrix gf2_left_kernel(const BitMatrix& m);
// rank of the row space of [a; b] (same column count)
int gf2_rank_stacked(const BitMatrix& a, const BitMatrix& b);

// sparse rows of sorted column indices, rank by elimination on lowest column
long sparse_gf2_rank(std::vector<std::vector<std::uint32_t>> rows);

// integer matrix as sparse rows (column, value); exact rank and invariant factors over the integers
struct IntSnf {
    int rank = 0;
    std::vector<std::string> torsion;  // invariant factors > 1, ascending, decimal
};
IntSnf int_smith(int rows, int cols, const std::vector<std::vector<std::pair<int, long long>>>& entries);

}  // namespace gridhom
