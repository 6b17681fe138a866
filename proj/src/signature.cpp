#include "fpqual/signature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fpqual {

namespace {

bool in_bounds(const GrayImage& img, double x, double y) {
    return x >= 0.0 && x <= img.width() - 1.0 && y >= 0.0 && y <= img.height() - 1.0;
}

double bilinear(const GrayImage& img, double x, double y) {
    int ix = static_cast<int>(std::floor(x));
    int iy = static_cast<int>(std::floor(y));
    if (ix >= img.width() - 1) ix = img.width() - 2;
    if (iy >= img.height() - 1) iy = img.height() - 2;
    const double fx = x - ix;
    const double fy = y - iy;
    const double v00 = img.at(ix, iy);
    const double v10 = img.at(ix + 1, iy);
    const double v01 = img.at(ix, iy + 1);
    const double v11 = img.at(ix + 1, iy + 1);
    return v00 * (1 - fx) * (1 - fy) + v10 * fx * (1 - fy) + v01 * (1 - fx) * fy + v11 * fx * fy;
}

}  // namespace

double RidgeSignature::mean() const {
    if (samples.empty()) return 0.0;
    double sum = 0.0;
    for (double s : samples) sum += s;
    return sum / static_cast<double>(samples.size());
}

double RidgeSignature::peak_to_peak() const {
    if (samples.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    return *hi - *lo;
}

RidgeSignature extract_ridge_signature(const GrayImage& img, const BlockGrid& grid,
                                       int bx, int by, const DirectionField& field,
                                       int window, int averaging_width) {
    const int i = grid.index(bx, by);
    if (field.certainty[static_cast<std::size_t>(i)] <= 0.0)
        throw std::invalid_argument("ridge signature: block orientation is undefined");
    if (window < 2 || averaging_width < 1 || averaging_width % 2 == 0)
        throw std::invalid_argument("ridge signature: bad window/averaging width");

    const double theta = field.angle[static_cast<std::size_t>(i)];
    const double pi = std::numbers::pi;

    double nx = std::cos(theta + pi / 2.0);
    double ny = std::sin(theta + pi / 2.0);
    // Canonical sign: positive y component (positive x on ties) so that
    // equivalent orientations sample in the same direction.
    if (ny < 0.0 || (std::fabs(ny) < 1e-12 && nx < 0.0)) {
        nx = -nx;
        ny = -ny;
    }
    const double ux = std::cos(theta);
    const double uy = std::sin(theta);

    RidgeSignature sig;
    sig.window = window;
    sig.averaging_width = averaging_width;
    sig.center_x = grid.center_x(bx);
    sig.center_y = grid.center_y(by);
    sig.normal_x = nx;
    sig.normal_y = ny;
    sig.ridge_x = ux;
    sig.ridge_y = uy;

    const int half_avg = (averaging_width - 1) / 2;
    const double mid = (window - 1) / 2.0;

    // A sample is usable only when its whole averaging segment stays inside
    // the image; usable samples form a contiguous interval along the line.
    int first = -1;
    int last = -1;
    std::vector<double> values(static_cast<std::size_t>(window), 0.0);
    for (int k = 0; k < window; ++k) {
        const double px = sig.center_x + (k - mid) * nx;
        const double py = sig.center_y + (k - mid) * ny;
        bool ok = true;
        double sum = 0.0;
        for (int j = -half_avg; j <= half_avg; ++j) {
            const double qx = px + j * ux;
            const double qy = py + j * uy;
            if (!in_bounds(img, qx, qy)) {
                ok = false;
                break;
            }
            sum += bilinear(img, qx, qy);
        }
        if (ok) {
            values[static_cast<std::size_t>(k)] = sum / averaging_width;
            if (first < 0) first = k;
            last = k;
        } else if (first >= 0) {
            break;
        }
    }

    if (first < 0) return sig;  // nothing usable; samples stay empty

    const int drop = std::max(first, window - 1 - last);
    sig.start = drop;
    for (int k = drop; k <= window - 1 - drop; ++k)
        sig.samples.push_back(values[static_cast<std::size_t>(k)]);
    return sig;
}

}  // namespace fpqual
