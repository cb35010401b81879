#include "gridhom/linalg.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace gridhom {

void BitMatrix::append_row(const std::uint64_t* src) {
    data_.insert(data_.end(), src, src + words_);
    ++rows_;
}

void BitMatrix::append_zero_row() {
    data_.resize(data_.size() + words_, 0);
    ++rows_;
}

BitMatrix BitMatrix::select_cols(const std::vector<int>& cols) const {
    BitMatrix r(rows_, (int)cols.size());
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < (int)cols.size(); ++j)
            if (get(i, cols[j])) r.flip(i, j);
    return r;
}

BitMatrix BitMatrix::select_rows(const std::vector<int>& rs) const {
    BitMatrix r(0, cols_);
    for (int i : rs) r.append_row(row(i));
    return r;
}

BitMatrix BitMatrix::transpose() const {
    BitMatrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (get(i, j)) t.flip(j, i);
    return t;
}

BitMatrix BitMatrix::multiply(const BitMatrix& b) const {
    BitMatrix r(rows_, b.cols_);
    for (int i = 0; i < rows_; ++i) {
        std::uint64_t* dst = r.row(i);
        for (int k = 0; k < cols_; ++k)
            if (get(i, k)) {
                const std::uint64_t* src = b.row(k);
                for (int w = 0; w < r.words_; ++w) dst[w] ^= src[w];
            }
    }
    return r;
}

namespace {

// row echelon in place on the first `limit` columns, returns rank; rows [0, rank) are the pivot rows
int eliminate(BitMatrix& m, int limit) {
    int rank = 0;
    int W = m.words();
    for (int c = 0; c < limit && rank < m.rows(); ++c) {
        int piv = -1;
        for (int r = rank; r < m.rows(); ++r)
            if (m.get(r, c)) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        if (piv != rank) std::swap_ranges(m.row(piv), m.row(piv) + W, m.row(rank));
        const std::uint64_t* p = m.row(rank);
        int w0 = c >> 6;
        for (int r = rank + 1; r < m.rows(); ++r)
            if (m.get(r, c)) {
                std::uint64_t* q = m.row(r);
                for (int w = w0; w < W; ++w) q[w] ^= p[w];
            }
        ++rank;
    }
    return rank;
}

}  // namespace

int gf2_rank(BitMatrix m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    // eliminate along the shorter side
    if (m.rows() > m.cols()) m = m.transpose();
    return eliminate(m, m.cols());
}

BitMatrix gf2_left_kernel(const BitMatrix& m) {
    int R = m.rows(), C = m.cols();
    BitMatrix aug(R, C + R);
    for (int i = 0; i < R; ++i) {
        for (int j = 0; j < C; ++j)
            if (m.get(i, j)) aug.flip(i, j);
        aug.flip(i, C + i);
    }
    int rank = eliminate(aug, C);
    BitMatrix k(0, R);
    for (int i = rank; i < R; ++i) {
        k.append_zero_row();
        for (int j = 0; j < R; ++j)
            if (aug.get(i, C + j)) k.flip(k.rows() - 1, j);
    }
    return k;
}

int gf2_rank_stacked(const BitMatrix& a, const BitMatrix& b) {
    BitMatrix s = a;
    if (s.cols() == 0 && s.rows() == 0) s = BitMatrix(0, b.cols());
    for (int i = 0; i < b.rows(); ++i) s.append_row(b.row(i));
    return gf2_rank(s);
}

long sparse_gf2_rank(std::vector<std::vector<std::uint32_t>> rows) {
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
    std::uint32_t maxc = 0;
    for (auto& r : rows)
        if (!r.empty()) maxc = std::max(maxc, r.back());
    std::vector<std::vector<std::uint32_t>> piv(maxc + 1);
    std::vector<std::uint32_t> tmp;
    long rank = 0;
    for (auto& r : rows) {
        std::sort(r.begin(), r.end());
        while (!r.empty()) {
            auto& p = piv[r.front()];
            if (p.empty()) {
                p = std::move(r);
                ++rank;
                break;
            }
            tmp.clear();
            std::set_symmetric_difference(r.begin(), r.end(), p.begin(), p.end(), std::back_inserter(tmp));
            r.swap(tmp);
        }
    }
    return rank;
}

namespace {

struct Overflow {};

long long mul_ck(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
}
long long sub_ck(long long a, long long b) {
    long long r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
    return r;
}

// diagonalize a dense integer matrix, return nonzero diagonal
std::vector<mpz_class> dense_diagonal(std::vector<std::vector<mpz_class>> a) {
    std::vector<mpz_class> diag;
    int R = (int)a.size();
    int C = R ? (int)a[0].size() : 0;
    int t = 0;
    while (t < R && t < C) {
        // smallest nonzero entry in the trailing block
        int pr = -1, pc = -1;
        for (int i = t; i < R; ++i)
            for (int j = t; j < C; ++j)
                if (a[i][j] != 0 && (pr < 0 || abs(a[i][j]) < abs(a[pr][pc]))) pr = i, pc = j;
        if (pr < 0) break;
        std::swap(a[t], a[pr]);
        for (int i = 0; i < R; ++i) std::swap(a[i][t], a[i][pc]);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < R; ++i) {
                if (a[i][t] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                for (int j = t; j < C; ++j) a[i][j] -= q * a[t][j];
                if (a[i][t] != 0) {
                    std::swap(a[t], a[i]);
                    clean = false;
                }
            }
            for (int j = t + 1; j < C; ++j) {
                if (a[t][j] == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                for (int i = t; i < R; ++i) a[i][j] -= q * a[i][t];
                if (a[t][j] != 0) {
                    for (int i = 0; i < R; ++i) std::swap(a[i][t], a[i][j]);
                    clean = false;
                }
            }
        }
        diag.push_back(abs(a[t][t]));
        ++t;
    }
    return diag;
}

IntSnf finish(int unit_rank, std::vector<mpz_class> diag) {
    // normalise to a divisibility chain with gcd/lcm swaps
    for (size_t i = 0; i < diag.size(); ++i)
        for (size_t j = i + 1; j < diag.size(); ++j) {
            mpz_class g = gcd(diag[i], diag[j]);
            mpz_class l = lcm(diag[i], diag[j]);
            diag[i] = g;
            diag[j] = l;
        }
    IntSnf r;
    r.rank = unit_rank + (int)diag.size();
    for (auto& d : diag)
        if (d > 1) r.torsion.push_back(d.get_str());
    return r;
}

IntSnf dense_smith(int rows, int cols, const std::vector<std::vector<std::pair<int, long long>>>& e) {
    std::vector<std::vector<mpz_class>> a(rows, std::vector<mpz_class>(cols));
    for (int i = 0; i < rows; ++i)
        for (auto [c, v] : e[i]) a[i][c] += mpz_class(std::to_string(v));
    return finish(0, dense_diagonal(std::move(a)));
}

}  // namespace

IntSnf int_smith(int rows, int cols, const std::vector<std::vector<std::pair<int, long long>>>& entries) {
    try {
        std::vector<std::map<int, long long>> m(rows);
        std::vector<std::set<int>> col_rows(cols);
        for (int i = 0; i < rows; ++i)
            for (auto [c, v] : entries[i]) {
                long long& x = m[i][c];
                x += v;
                if (x == 0)
                    m[i].erase(c);
            }
        for (int i = 0; i < rows; ++i)
            for (auto& [c, v] : m[i]) col_rows[c].insert(i);
        std::vector<char> alive(rows, 1);
        int unit_rank = 0;
        for (;;) {
            int br = -1, bc = -1;
            long best = -1;
            for (int i = 0; i < rows; ++i) {
                if (!alive[i]) continue;
                for (auto& [c, v] : m[i]) {
                    if (v != 1 && v != -1) continue;
                    long cost = (long)(m[i].size() - 1) * (long)(col_rows[c].size() - 1);
                    if (best < 0 || cost < best) best = cost, br = i, bc = c;
                }
                if (best == 0) break;
            }
            if (br < 0) break;
            long long pv = m[br][bc];
            std::vector<int> others(col_rows[bc].begin(), col_rows[bc].end());
            for (int s : others) {
                if (s == br) continue;
                long long f = mul_ck(m[s][bc], pv);
                for (auto& [c, v] : m[br]) {
                    long long nv = sub_ck(m[s].count(c) ? m[s][c] : 0, mul_ck(f, v));
                    if (nv == 0) {
                        m[s].erase(c);
                        col_rows[c].erase(s);
                    } else {
                        m[s][c] = nv;
                        col_rows[c].insert(s);
                    }
                }
            }
            for (auto& [c, v] : m[br]) col_rows[c].erase(br);
            m[br].clear();
            alive[br] = 0;
            ++unit_rank;
        }
        std::vector<int> rr, cc;
        std::map<int, int> cidx;
        for (int i = 0; i < rows; ++i)
            if (alive[i] && !m[i].empty()) {
                rr.push_back(i);
                for (auto& [c, v] : m[i])
                    if (!cidx.count(c)) cidx[c] = 0;
            }
        int k = 0;
        for (auto& [c, idx] : cidx) idx = k++;
        std::vector<std::vector<mpz_class>> core(rr.size(), std::vector<mpz_class>(cidx.size()));
        for (size_t i = 0; i < rr.size(); ++i)
            for (auto& [c, v] : m[rr[i]]) core[i][cidx[c]] = mpz_class(std::to_string(v));
        return finish(unit_rank, dense_diagonal(std::move(core)));
    } catch (const Overflow&) {
        return dense_smith(rows, cols, entries);
    }
}

}  // namespace gridhom
