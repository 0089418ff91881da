#ifndef CONFORMAP_CURVE_HPP
#define CONFORMAP_CURVE_HPP

namespace conformap {

struct CurveParams {
    double a = 1.0;
    double b = 1.0;
};

// Low-dimensional weight (1 + a * dist_sq^b)^-1, monotone decreasing in
// dist_sq, equal to 1 at dist_sq = 0.
double low_dim_weight(double dist_sq, const CurveParams& curve);

// Least-squares fit of the weight curve to the target shape
//   f(d) = 1 for d <= min_dist, exp(-(d - min_dist)) otherwise,
// sampled at 300 evenly spaced d in (0, 3]. Deterministic. Requires
// min_dist in (0, 1]; a fit residual above threshold raises UsageError.
CurveParams fit_curve(double min_dist);

} // namespace conformap

#endif
