#pragma once

#include <cstdint>
#include <span>
#include <tuple>
#include <vector>

namespace seal {

/// Row-major dense matrix of 64-bit reals.
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    DenseMatrix() = default;
    DenseMatrix(int r, int c) : rows(r), cols(c), values(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int i, int j) { return values[static_cast<size_t>(i) * cols + j]; }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * cols + j]; }
    double* row(int i) { return values.data() + static_cast<size_t>(i) * cols; }
    const double* row(int i) const { return values.data() + static_cast<size_t>(i) * cols; }

    bool same_shape(const DenseMatrix& o) const { return rows == o.rows && cols == o.cols; }
    bool empty() const { return rows == 0 || cols == 0; }
};

/// Compressed sparse row matrix.
struct CsrMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<int> row_ptr;  // size rows + 1
    std::vector<int> col_idx;
    std::vector<double> vals;

    CsrMatrix() = default;
    CsrMatrix(int r, int c) : rows(r), cols(c), row_ptr(static_cast<size_t>(r) + 1, 0) {}

    size_t nnz() const { return vals.size(); }

    /// Build from (row, col, value) triplets; rows need not be sorted but
    /// (row, col) pairs must be unique.
    static CsrMatrix from_triplets(int rows, int cols,
                                   std::vector<std::tuple<int, int, double>> triplets);

    DenseMatrix to_dense() const;
};

// Dense kernels. All throw seal::Error on dimension mismatch.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b);  // a^T * b
DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b);  // a * b^T

/// Sparse-dense product a * b; cost proportional to nnz(a) * cols(b).
DenseMatrix spmm(const CsrMatrix& a, const DenseMatrix& b);
/// a^T * b without materializing the transpose.
DenseMatrix spmm_at_b(const CsrMatrix& a, const DenseMatrix& b);

void add_inplace(DenseMatrix& a, const DenseMatrix& b);
void axpy_inplace(DenseMatrix& a, double alpha, const DenseMatrix& b);  // a += alpha * b
void scale_inplace(DenseMatrix& a, double alpha);
void hadamard_inplace(DenseMatrix& a, const DenseMatrix& b);  // a *= b entrywise
/// Add the row vector (1 x cols) to every row of a.
void add_row_vector_inplace(DenseMatrix& a, const DenseMatrix& row_vec);
/// Column sums as a 1 x cols matrix.
DenseMatrix column_sums(const DenseMatrix& a);
double frobenius_sq(const DenseMatrix& a);

DenseMatrix select_rows(const DenseMatrix& a, std::span<const int> ids);

/// Asserts every entry is finite. Compiled out under NDEBUG.
void check_finite(const DenseMatrix& a, const char* what);

}  // namespace seal
