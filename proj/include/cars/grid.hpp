#pragma once

#include <cmath>
#include <vector>

#include "cars/errors.hpp"

namespace cars {

// Uniform frequency grid in the shifted variable w = w~ - Omega_k (cm^-1).
// Points are w_j = center + (j - n/2) * spacing with spacing = 2*half_width/n,
// so the grid always contains `center` exactly and every interior point has
// its mirror image on the grid.
class FrequencyGrid {
  public:
    FrequencyGrid(double center, double half_width, int n_points)
        : center_(center), half_width_(half_width), n_(n_points) {
        if (n_points < 2) throw ConfigError("FrequencyGrid: n_points must be >= 2");
        if (!(half_width > 0.0)) throw ConfigError("FrequencyGrid: half_width must be > 0");
    }

    double center() const { return center_; }
    double half_width() const { return half_width_; }
    int size() const { return n_; }
    double spacing() const { return 2.0 * half_width_ / n_; }

    double offset(int j) const { return center_ + (j - n_ / 2) * spacing(); }
    double min_offset() const { return offset(0); }
    double max_offset() const { return offset(n_ - 1); }
    int center_index() const { return n_ / 2; }

    std::vector<double> offsets() const {
        std::vector<double> w(static_cast<std::size_t>(n_));
        for (int j = 0; j < n_; ++j) w[static_cast<std::size_t>(j)] = offset(j);
        return w;
    }

    // Index of the grid point equal to w, or -1 when w is not a grid point.
    int index_of(double w, double tol_frac = 1e-9) const {
        const double s = spacing();
        const double x = (w - center_) / s + n_ / 2;
        const double r = std::round(x);
        if (std::abs(x - r) > tol_frac) return -1;
        const int j = static_cast<int>(r);
        return (j >= 0 && j < n_) ? j : -1;
    }

    // True when the grid reaches at least +-extent around zero offset.  The
    // highest point of an even-sized grid sits one spacing below +half_width;
    // that single missing sample is allowed.
    bool covers(double extent) const {
        return min_offset() <= -extent && max_offset() >= extent - spacing() * (1.0 + 1e-9);
    }

    bool same_spacing(const FrequencyGrid& other, double tol_frac = 1e-12) const {
        return std::abs(spacing() - other.spacing()) <= tol_frac * spacing();
    }

  private:
    double center_;
    double half_width_;
    int n_;
};

}  // namespace cars
