#pragma once

#include <Eigen/Core>

namespace sqwell {

enum class BasisKind {
    Grid,     ///< 2(M-1) values: upper channel on nodes 1..M-1, then lower channel
    Mode,     ///< retained eigenstates ordered (n, sigma=+1), (n, sigma=-1)
    Channel,  ///< bare 2x2 channel block
};

/// How a MODE-basis matrix relates to its operator X.
enum class ModeForm {
    /// X |psi_j> = sum_i X_ij |psi_i>, read off with the left states:
    /// X_ij = <<i|X|j> / <<i|i>.
    Coefficients,
    /// X_ij = <psi_i|X|psi_j>; used for metrics.
    Gram,
};

struct OperatorRep {
    Eigen::MatrixXcd entries;
    BasisKind basis = BasisKind::Channel;
    int grid_intervals = 0;  ///< M (Grid)
    double spacing = 0.0;    ///< h = 2/M (Grid)
    int levels = 0;          ///< retained levels N; dim = 2N (Mode)
    ModeForm form = ModeForm::Coefficients;

    Eigen::Index dim() const noexcept { return entries.rows(); }

    static OperatorRep grid(Eigen::MatrixXcd m, int intervals);
    static OperatorRep mode(Eigen::MatrixXcd m, int levels, ModeForm form);
    static OperatorRep channel(Eigen::Matrix2cd m);
};

struct BasisSpec {
    BasisKind kind = BasisKind::Mode;
    int grid_intervals = 0;

    static BasisSpec mode() { return {BasisKind::Mode, 0}; }
    static BasisSpec grid(int intervals) { return {BasisKind::Grid, intervals}; }
};

}  // namespace sqwell
