#pragma once

#include <cstddef>
#include <vector>

namespace drawgraph {

// Row-major dense matrix of doubles. Products are delegated to Eigen; all
// results are deterministic (single-threaded GEMM).
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    DenseMatrix() = default;
    DenseMatrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), values(std::size_t(r) * std::size_t(c), fill) {}

    double at(int r, int c) const { return values[std::size_t(r) * cols + c]; }
    double& at(int r, int c) { return values[std::size_t(r) * cols + c]; }
    const double* row(int r) const { return values.data() + std::size_t(r) * cols; }
    double* row(int r) { return values.data() + std::size_t(r) * cols; }

    bool same_shape(const DenseMatrix& o) const { return rows == o.rows && cols == o.cols; }
    void fill(double v) { std::fill(values.begin(), values.end(), v); }
    bool operator==(const DenseMatrix&) const = default;
};

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);       // a * b
DenseMatrix multiply_at_b(const DenseMatrix& a, const DenseMatrix& b);  // a^T * b
DenseMatrix multiply_a_bt(const DenseMatrix& a, const DenseMatrix& b);  // a * b^T

void add_inplace(DenseMatrix& a, const DenseMatrix& b);
void scale_inplace(DenseMatrix& a, double s);

} // namespace drawgraph
