#include "sqthermal/fock_oracle.hpp"

#include <cmath>
#include <vector>

namespace sqt::fock {
namespace {

double min_eigenvalue(double a, double b, double d) {
    const double half_gap = 0.5 * (a - d);
    return 0.5 * (a + d) - std::sqrt(half_gap * half_gap + b * b);
}

struct Cell {
    double log_x;
    double log_y;
};

// Smallest s in (lo, hi] where the cell fits, given it fits at hi and not at lo.
double bisect_cell(const TwoModeCovariance& cov, const Cell& cell, double lo, double hi,
                   double tolerance) {
    const double x = std::exp(cell.log_x);
    const double y = std::exp(cell.log_y);
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (pure_state_fits(cov, mid, x, y)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

bool pure_state_fits(const TwoModeCovariance& cov, double s, double x, double y) {
    const double c = std::cosh(2.0 * s);
    const double sh = std::sinh(2.0 * s);
    const bool position = min_eigenvalue(cov.n - y * x * c, cov.k - y * sh, cov.m - y * c / x)
                          >= kPsdTolerance;
    if (!position) {
        return false;
    }
    return min_eigenvalue(cov.n - c / (x * y), -cov.k + sh / y, cov.m - x * c / y)
           >= kPsdTolerance;
}

PsdSearchResult geof_psd_search(const TwoModeCovariance& cov, const PsdGrid& grid) {
    if (grid.s_steps < 1 || grid.xy_points < 3 || grid.xy_points % 2 == 0
        || grid.refine_factor < 2 || grid.refine_levels < 0) {
        throw std::invalid_argument("geof_psd_search: malformed grid settings");
    }
    const double ratio = 2.0 * cov.k / (cov.n + cov.m);
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw std::invalid_argument("geof_psd_search: covariance is not an entangled member of the family");
    }
    const double r_top = 0.5 * std::atanh(ratio);
    if (!pure_state_fits(cov, r_top, 1.0, 1.0)) {
        throw std::logic_error("geof_psd_search: the squeezed vacuum at s = r does not fit");
    }

    const double coarse_step = 4.0 / (grid.xy_points - 1);
    std::vector<Cell> coarse;
    coarse.reserve(static_cast<std::size_t>(grid.xy_points) * grid.xy_points);
    for (int i = 0; i < grid.xy_points; ++i) {
        for (int j = 0; j < grid.xy_points; ++j) {
            coarse.push_back({-2.0 + i * coarse_step, -2.0 + j * coarse_step});
        }
    }
    auto feasible_cells = [&](double s) {
        std::vector<Cell> out;
        for (const auto& cell : coarse) {
            if (pure_state_fits(cov, s, std::exp(cell.log_x), std::exp(cell.log_y))) {
                out.push_back(cell);
            }
        }
        return out;
    };

    if (!feasible_cells(0.0).empty()) {
        throw std::invalid_argument("geof_psd_search: covariance admits a product pure state (separable)");
    }

    const double s_step = r_top / grid.s_steps;
    double lo = 0.0;
    double hi = r_top;
    std::vector<Cell> feasible;
    for (int i = 1; i <= grid.s_steps; ++i) {
        const double s = i == grid.s_steps ? r_top : i * s_step;
        feasible = feasible_cells(s);
        if (!feasible.empty()) {
            lo = (i - 1) * s_step;
            hi = s;
            break;
        }
    }

    PsdSearchResult out;
    out.s_star = hi;
    Cell best{0.0, 0.0};
    for (const auto& cell : feasible) {
        const double s = bisect_cell(cov, cell, lo, hi, grid.s_tolerance);
        if (s < out.s_star) {
            out.s_star = s;
            best = cell;
        }
    }

    double step = coarse_step;
    for (int level = 0; level < grid.refine_levels; ++level) {
        const double fine = step / grid.refine_factor;
        const Cell center = best;
        for (int i = -grid.refine_factor; i <= grid.refine_factor; ++i) {
            for (int j = -grid.refine_factor; j <= grid.refine_factor; ++j) {
                const Cell cell{center.log_x + i * fine, center.log_y + j * fine};
                const double x = std::exp(cell.log_x);
                const double y = std::exp(cell.log_y);
                if (!pure_state_fits(cov, out.s_star, x, y)) {
                    continue;
                }
                double floor = lo;
                while (floor > 0.0 && pure_state_fits(cov, floor, x, y)) {
                    floor = std::max(0.0, floor - s_step);
                }
                const double s = bisect_cell(cov, cell, floor, out.s_star, grid.s_tolerance);
                if (s < out.s_star) {
                    out.s_star = s;
                    best = cell;
                }
            }
        }
        step = fine;
    }

    out.s_resolution = s_step;
    out.log_x_resolution = step;
    out.log_y_resolution = step;
    out.witness_x = std::exp(best.log_x);
    out.witness_y = std::exp(best.log_y);
    return out;
}

}  // namespace sqt::fock
