#pragma once

#include <vector>

#include "fpqual/image.hpp"

namespace fpqual {

/// Per-block sums of gradient products (gx^2, gy^2, gx*gy). Gradients are
/// central differences taken after a 3x3 box smoothing pre-pass; the same
/// differentiator feeds every metric so their comparison is not confounded.
struct TensorField {
    BlockGrid grid;
    std::vector<double> sxx;
    std::vector<double> syy;
    std::vector<double> sxy;
};

TensorField structure_tensor_field(const GrayImage& img, const BlockGrid& grid);

struct TensorEigen {
    double lambda_max = 0.0;
    double lambda_min = 0.0;
};

TensorEigen tensor_eigenvalues(const TensorField& field, int block_index);

/// Per-block dominant ridge angle (radians in [0, pi), an orientation, not a
/// direction of travel) with a certainty in [0, 1]. Certainty is the
/// normalized eigen-anisotropy of the gradient covariance and is 0 on blocks
/// with zero gradient energy.
struct DirectionField {
    BlockGrid grid;
    std::vector<double> angle;
    std::vector<double> certainty;
};

DirectionField direction_field(const TensorField& field);
DirectionField direction_field(const GrayImage& img, const BlockGrid& grid);

/// Acute angular difference between two orientations (mod pi), in [0, pi/2].
double acute_angle_difference(double a, double b);

/// Reduce an angle to the canonical orientation range [0, pi).
double normalize_orientation(double angle);

}  // namespace fpqual
