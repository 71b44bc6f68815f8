#pragma once

// Robust orientation and in-circle signs. A floating-point filter decides the
// sign when the rounding error bound allows it; otherwise the determinant is
// re-evaluated in exact rational arithmetic (inputs are doubles, so the
// conversion to rationals is exact).

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <limits>

namespace nhg {

struct Point;

namespace detail {

using exact_t = boost::multiprecision::cpp_rational;

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2;  // 2^-53
constexpr double kCcwErrBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIccErrBound = (10.0 + 96.0 * kEps) * kEps;

inline int sign_of(const exact_t& v) { return v.sign(); }

inline int orient2d_exact(double ax, double ay, double bx, double by, double cx, double cy) {
    exact_t acx = exact_t(ax) - exact_t(cx);
    exact_t bcx = exact_t(bx) - exact_t(cx);
    exact_t acy = exact_t(ay) - exact_t(cy);
    exact_t bcy = exact_t(by) - exact_t(cy);
    return sign_of(acx * bcy - acy * bcx);
}

inline int incircle_exact(double ax, double ay, double bx, double by, double cx, double cy,
                          double dx, double dy) {
    exact_t adx = exact_t(ax) - exact_t(dx), ady = exact_t(ay) - exact_t(dy);
    exact_t bdx = exact_t(bx) - exact_t(dx), bdy = exact_t(by) - exact_t(dy);
    exact_t cdx = exact_t(cx) - exact_t(dx), cdy = exact_t(cy) - exact_t(dy);
    exact_t alift = adx * adx + ady * ady;
    exact_t blift = bdx * bdx + bdy * bdy;
    exact_t clift = cdx * cdx + cdy * cdy;
    exact_t det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                  clift * (adx * bdy - bdx * ady);
    return sign_of(det);
}

}  // namespace detail

// +1 if (a, b, c) turn counter-clockwise, -1 clockwise, 0 collinear.
inline int orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
    double detleft = (ax - cx) * (by - cy);
    double detright = (ay - cy) * (bx - cx);
    double det = detleft - detright;
    double bound = detail::kCcwErrBound * (std::fabs(detleft) + std::fabs(detright));
    if (det > bound) return 1;
    if (-det > bound) return -1;
    if (detleft == 0.0 && detright == 0.0) return 0;
    return detail::orient2d_exact(ax, ay, bx, by, cx, cy);
}

// For counter-clockwise (a, b, c): +1 if d lies strictly inside the
// circumcircle, -1 strictly outside, 0 on it.
inline int incircle(double ax, double ay, double bx, double by, double cx, double cy, double dx,
                    double dy) {
    double adx = ax - dx, ady = ay - dy;
    double bdx = bx - dx, bdy = by - dy;
    double cdx = cx - dx, cdy = cy - dy;

    double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    double alift = adx * adx + ady * ady;
    double cdxady = cdx * ady, adxcdy = adx * cdy;
    double blift = bdx * bdx + bdy * bdy;
    double adxbdy = adx * bdy, bdxady = bdx * ady;
    double clift = cdx * cdx + cdy * cdy;

    double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * alift +
                       (std::fabs(cdxady) + std::fabs(adxcdy)) * blift +
                       (std::fabs(adxbdy) + std::fabs(bdxady)) * clift;
    double bound = detail::kIccErrBound * permanent;
    if (det > bound) return 1;
    if (-det > bound) return -1;
    if (permanent == 0.0) return 0;
    return detail::incircle_exact(ax, ay, bx, by, cx, cy, dx, dy);
}

}  // namespace nhg
