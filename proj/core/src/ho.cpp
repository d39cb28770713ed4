#include "rfsquid/ho.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rfsquid {

namespace {

constexpr double rescale_hi = 1e250;
constexpr double rescale_log = 575.6462732485114; // ln(1e250)

inline int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

} // namespace

void displacement_diagonal(int j, double y, int count, std::vector<LogValue>& out) {
    if (j < 0 || count < 0) throw std::domain_error("diagonal index and count must be non-negative");
    out.assign(static_cast<std::size_t>(count), LogValue{});
    if (count == 0) return;

    const double ya = std::abs(y);
    const int ysign = y < 0.0 ? -1 : 1;
    const int jsign = (j % 2 == 1 && ysign < 0) ? -1 : 1; // sign of y^j

    if (ya == 0.0) {
        if (j == 0)
            for (auto& v : out) v = LogValue{0.0, 1}; // identity diagonal
        return;
    }

    const double x = ya * ya;
    // Seed B_0 carried as mantissa * exp(offset).
    double offset = j * std::log(ya) - 0.5 * x - 0.5 * std::lgamma(double(j) + 1.0);
    double b_prev = 0.0;
    double b_curr = 1.0;

    for (int n = 0; n < count; ++n) {
        const double mag = std::abs(b_curr);
        if (mag == 0.0 && b_prev == 0.0 && n > 0) break; // exact zero tail
        LogValue v;
        if (mag > 0.0) {
            v.log_mag = std::log(mag) + offset;
            v.sign = jsign * sign_of(b_curr);
        }
        out[static_cast<std::size_t>(n)] = v;

        // Advance to B_{n+1}.
        const double dn = double(n);
        const double c1 = (2.0 * dn + 1.0 + j - x) * std::sqrt((dn + 1.0) / (dn + j + 1.0));
        const double c2 = std::sqrt(dn * (dn + 1.0) * (dn + j) / (dn + j + 1.0));
        const double b_next = (c1 * b_curr - c2 * b_prev) / (dn + 1.0);
        b_prev = b_curr;
        b_curr = b_next;

        const double m = std::max(std::abs(b_curr), std::abs(b_prev));
        if (m > rescale_hi) {
            b_curr /= rescale_hi;
            b_prev /= rescale_hi;
            offset += rescale_log;
        } else if (m > 0.0 && m < 1.0 / rescale_hi) {
            b_curr *= rescale_hi;
            b_prev *= rescale_hi;
            offset -= rescale_log;
        }
    }
}

LogValue displaced_overlap_log(int n, int m, double d) {
    if (n < 0 || m < 0) throw std::domain_error("oscillator levels must be non-negative");
    const double g = d / std::sqrt(2.0);
    // <m|D(g)|n> = <n|D(-g)|m> up to the Laguerre formula's index ordering.
    const int lo = std::min(n, m);
    const int j = std::abs(m - n);
    const double y = (m >= n) ? g : -g;
    std::vector<LogValue> diag;
    displacement_diagonal(j, y, lo + 1, diag);
    return diag[static_cast<std::size_t>(lo)];
}

double displaced_overlap(int n, int m, double d) {
    return displaced_overlap_log(n, m, d).value();
}

Eigen::MatrixXd displacement_matrix(double g, int dim) {
    if (dim <= 0) throw std::domain_error("matrix dimension must be positive");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<LogValue> diag;
    for (int j = 0; j < dim; ++j) {
        displacement_diagonal(j, g, dim - j, diag);
        const double flip = (j % 2 == 1) ? -1.0 : 1.0; // B(-g) = (-1)^j B(g)
        for (int n = 0; n + j < dim; ++n) {
            const double v = diag[static_cast<std::size_t>(n)].value();
            out(n + j, n) = v;
            out(n, n + j) = flip * v;
        }
    }
    return out;
}

} // namespace rfsquid
