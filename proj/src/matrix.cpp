#include "seal/matrix.hpp"

#include <cblas.h>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "seal/error.hpp"

namespace seal {

namespace {
void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(msg);
}

std::string shape_str(int r, int c) {
    return std::to_string(r) + "x" + std::to_string(c);
}
}  // namespace

CsrMatrix CsrMatrix::from_triplets(int rows, int cols,
                                   std::vector<std::tuple<int, int, double>> triplets) {
    std::sort(triplets.begin(), triplets.end());
    CsrMatrix m(rows, cols);
    m.col_idx.reserve(triplets.size());
    m.vals.reserve(triplets.size());
    for (const auto& [i, j, v] : triplets) {
        require(i >= 0 && i < rows && j >= 0 && j < cols,
                "triplet index out of range: (" + std::to_string(i) + "," + std::to_string(j) + ")");
        m.row_ptr[static_cast<size_t>(i) + 1]++;
        m.col_idx.push_back(j);
        m.vals.push_back(v);
    }
    for (int i = 0; i < rows; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
    return m;
}

DenseMatrix CsrMatrix::to_dense() const {
    DenseMatrix d(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) d.at(i, col_idx[p]) = vals[p];
    return d;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.cols == b.rows, "matmul: inner dims " + shape_str(a.rows, a.cols) + " * " +
                                  shape_str(b.rows, b.cols));
    DenseMatrix c(a.rows, b.cols);
    if (!c.empty() && a.cols > 0)
        cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, a.rows, b.cols, a.cols, 1.0,
                    a.values.data(), a.cols, b.values.data(), b.cols, 0.0, c.values.data(), c.cols);
    check_finite(c, "matmul");
    return c;
}

DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.rows == b.rows, "matmul_at_b: inner dims " + shape_str(a.cols, a.rows) + " * " +
                                  shape_str(b.rows, b.cols));
    DenseMatrix c(a.cols, b.cols);
    if (!c.empty() && a.rows > 0)
        cblas_dgemm(CblasRowMajor, CblasTrans, CblasNoTrans, a.cols, b.cols, a.rows, 1.0,
                    a.values.data(), a.cols, b.values.data(), b.cols, 0.0, c.values.data(), c.cols);
    check_finite(c, "matmul_at_b");
    return c;
}

DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.cols == b.cols, "matmul_a_bt: inner dims " + shape_str(a.rows, a.cols) + " * " +
                                  shape_str(b.cols, b.rows));
    DenseMatrix c(a.rows, b.rows);
    if (!c.empty() && a.cols > 0)
        cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasTrans, a.rows, b.rows, a.cols, 1.0,
                    a.values.data(), a.cols, b.values.data(), b.cols, 0.0, c.values.data(), c.cols);
    check_finite(c, "matmul_a_bt");
    return c;
}

DenseMatrix spmm(const CsrMatrix& a, const DenseMatrix& b) {
    require(a.cols == b.rows, "spmm: inner dims " + shape_str(a.rows, a.cols) + " * " +
                                  shape_str(b.rows, b.cols));
    DenseMatrix c(a.rows, b.cols);
    const int n = b.cols;
    for (int i = 0; i < a.rows; ++i) {
        double* out = c.row(i);
        for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
            const double v = a.vals[p];
            const double* src = b.row(a.col_idx[p]);
            for (int j = 0; j < n; ++j) out[j] += v * src[j];
        }
    }
    check_finite(c, "spmm");
    return c;
}

DenseMatrix spmm_at_b(const CsrMatrix& a, const DenseMatrix& b) {
    require(a.rows == b.rows, "spmm_at_b: inner dims " + shape_str(a.cols, a.rows) + " * " +
                                  shape_str(b.rows, b.cols));
    DenseMatrix c(a.cols, b.cols);
    const int n = b.cols;
    for (int i = 0; i < a.rows; ++i) {
        const double* src = b.row(i);
        for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
            const double v = a.vals[p];
            double* out = c.row(a.col_idx[p]);
            for (int j = 0; j < n; ++j) out[j] += v * src[j];
        }
    }
    check_finite(c, "spmm_at_b");
    return c;
}

void add_inplace(DenseMatrix& a, const DenseMatrix& b) {
    require(a.same_shape(b), "add_inplace: shape mismatch");
    for (size_t i = 0; i < a.values.size(); ++i) a.values[i] += b.values[i];
}

void axpy_inplace(DenseMatrix& a, double alpha, const DenseMatrix& b) {
    require(a.same_shape(b), "axpy_inplace: shape mismatch");
    for (size_t i = 0; i < a.values.size(); ++i) a.values[i] += alpha * b.values[i];
}

void scale_inplace(DenseMatrix& a, double alpha) {
    for (double& v : a.values) v *= alpha;
}

void hadamard_inplace(DenseMatrix& a, const DenseMatrix& b) {
    require(a.same_shape(b), "hadamard_inplace: shape mismatch");
    for (size_t i = 0; i < a.values.size(); ++i) a.values[i] *= b.values[i];
}

void add_row_vector_inplace(DenseMatrix& a, const DenseMatrix& row_vec) {
    require(row_vec.rows == 1 && row_vec.cols == a.cols, "add_row_vector: shape mismatch");
    for (int i = 0; i < a.rows; ++i) {
        double* r = a.row(i);
        for (int j = 0; j < a.cols; ++j) r[j] += row_vec.values[j];
    }
}

DenseMatrix column_sums(const DenseMatrix& a) {
    DenseMatrix s(1, a.cols);
    for (int i = 0; i < a.rows; ++i) {
        const double* r = a.row(i);
        for (int j = 0; j < a.cols; ++j) s.values[j] += r[j];
    }
    return s;
}

double frobenius_sq(const DenseMatrix& a) {
    double s = 0.0;
    for (double v : a.values) s += v * v;
    return s;
}

DenseMatrix select_rows(const DenseMatrix& a, std::span<const int> ids) {
    DenseMatrix out(static_cast<int>(ids.size()), a.cols);
    for (size_t k = 0; k < ids.size(); ++k) {
        require(ids[k] >= 0 && ids[k] < a.rows, "select_rows: id out of range");
        std::copy(a.row(ids[k]), a.row(ids[k]) + a.cols, out.row(static_cast<int>(k)));
    }
    return out;
}

void check_finite(const DenseMatrix& a, const char* what) {
#ifdef NDEBUG
    (void)a;
    (void)what;
#else
    for (double v : a.values)
        if (!std::isfinite(v)) {
            assert(false && "non-finite value in matrix");
            throw Error(std::string("non-finite value after kernel: ") + what);
        }
#endif
}

}  // namespace seal
