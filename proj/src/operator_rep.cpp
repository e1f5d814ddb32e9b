#include "sqwell/operator_rep.hpp"

#include "sqwell/error.hpp"

namespace sqwell {

OperatorRep OperatorRep::grid(Eigen::MatrixXcd m, int intervals) {
    if (m.rows() != m.cols() || m.rows() != 2 * static_cast<Eigen::Index>(intervals - 1)) {
        throw Error(ErrorCode::DimensionMismatch, "grid representation must be 2(M-1) square");
    }
    OperatorRep r;
    r.entries = std::move(m);
    r.basis = BasisKind::Grid;
    r.grid_intervals = intervals;
    r.spacing = 2.0 / intervals;
    return r;
}

OperatorRep OperatorRep::mode(Eigen::MatrixXcd m, int levels, ModeForm form) {
    if (m.rows() != m.cols() || m.rows() != 2 * static_cast<Eigen::Index>(levels)) {
        throw Error(ErrorCode::DimensionMismatch, "mode representation must be 2N square");
    }
    OperatorRep r;
    r.entries = std::move(m);
    r.basis = BasisKind::Mode;
    r.levels = levels;
    r.form = form;
    return r;
}

OperatorRep OperatorRep::channel(Eigen::Matrix2cd m) {
    OperatorRep r;
    r.entries = m;
    r.basis = BasisKind::Channel;
    return r;
}

}  // namespace sqwell
