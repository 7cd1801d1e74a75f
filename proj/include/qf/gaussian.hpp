#pragma once

namespace qf {

// Standard normal c.d.f.
double normal_cdf(double x);

// Standard normal quantile Phi^{-1}(p), p in (0,1).  Rational initial
// approximation refined by one Halley step on the c.d.f. residual;
// absolute error below 1e-13 over (1e-300, 1 - 1e-16).
double normal_quantile(double p);

}  // namespace qf
