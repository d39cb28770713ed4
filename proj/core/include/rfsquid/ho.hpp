#pragma once

#include <vector>

#include <Eigen/Dense>

namespace rfsquid {

/// Signed log-magnitude scalar; keeps Franck-Condon factors usable far
/// below the double underflow threshold.
struct LogValue {
    double log_mag = -std::numeric_limits<double>::infinity();
    int sign = 0;

    double value() const {
        if (sign == 0 || log_mag < -745.0) return 0.0;
        return sign * std::exp(log_mag);
    }
};

/// Scaled displacement-operator elements along one diagonal:
///   B_{n,j}(y) = sqrt(n!/(n+j)!) * y^j * exp(-y^2/2) * L_n^{(j)}(y^2),
/// which is <n+j| exp(y (a^dag - a)) |n>. Fills out[n] for n = 0..count-1.
/// Uses the three-term Laguerre recurrence with a rescaling ladder, so it
/// stays finite and meaningful for any y (the raw factors overflow or
/// underflow long before the elements themselves do).
void displacement_diagonal(int j, double y, int count, std::vector<LogValue>& out);

/// Franck-Condon overlap <m|D(g)|n> of equal-frequency harmonic oscillator
/// states displaced by d zero-point units, with g = d/sqrt(2) and
/// D(g) = exp(g (a^dag - a)). Phase convention: overlap(0, 0, d) = e^{-d^2/4}
/// is positive, remaining signs follow the associated Laguerre formula
///   overlap(n<=m) = sqrt(n!/m!) e^{-d^2/4} (d/sqrt2)^{m-n} L_n^{(m-n)}(d^2/2).
double displaced_overlap(int n, int m, double d);

/// Log form of the same overlap; exact where the plain value underflows.
LogValue displaced_overlap_log(int n, int m, double d);

/// Dense matrix O with O(m, n) = <m|D(g)|n> for m, n < dim.
Eigen::MatrixXd displacement_matrix(double g, int dim);

} // namespace rfsquid
