#include "drawgraph/densemat.hpp"

#include <Eigen/Dense>

#include "drawgraph/errors.hpp"

namespace drawgraph {

namespace {

using EigenMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using EigenMapMut =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

EigenMap view(const DenseMatrix& m) { return EigenMap(m.values.data(), m.rows, m.cols); }

} // namespace

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows) throw DataError("matrix shape mismatch in multiply");
    DenseMatrix out(a.rows, b.cols);
    EigenMapMut(out.values.data(), out.rows, out.cols).noalias() = view(a) * view(b);
    return out;
}

DenseMatrix multiply_at_b(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows != b.rows) throw DataError("matrix shape mismatch in multiply_at_b");
    DenseMatrix out(a.cols, b.cols);
    EigenMapMut(out.values.data(), out.rows, out.cols).noalias() =
        view(a).transpose() * view(b);
    return out;
}

DenseMatrix multiply_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.cols) throw DataError("matrix shape mismatch in multiply_a_bt");
    DenseMatrix out(a.rows, b.rows);
    EigenMapMut(out.values.data(), out.rows, out.cols).noalias() =
        view(a) * view(b).transpose();
    return out;
}

void add_inplace(DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) throw DataError("matrix shape mismatch in add");
    for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] += b.values[i];
}

void scale_inplace(DenseMatrix& a, double s) {
    for (double& v : a.values) v *= s;
}

} // namespace drawgraph
