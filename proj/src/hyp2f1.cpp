#include "fibaux/verify.hpp"

#include <cmath>

namespace fibaux {

namespace {

bool is_nonpositive_int(double v, long& out) {
    if (v > 0) return false;
    double r = std::round(v);
    if (std::abs(v - r) > 1e-12) return false;
    out = static_cast<long>(r);
    return true;
}

// Plain Gauss series at |z| < 1. `terminate_at` >= 0 caps the sum for
// polynomial cases.
double gauss_series(double a, double b, double c, double z, long terminate_at) {
    double term = 1.0, sum = 1.0;
    long kmax = terminate_at >= 0 ? terminate_at : 10000;
    for (long k = 0; k < kmax; ++k) {
        double denom = (c + k) * (k + 1);
        if (denom == 0)
            throw Error("E_2F1_POLE", "hyp2f1: lower-parameter pole in series");
        term *= (a + k) * (b + k) / denom * z;
        sum += term;
        if (terminate_at < 0 && std::abs(term) < 1e-15 * std::abs(sum)) return sum;
    }
    if (terminate_at >= 0) return sum;
    throw Error("E_2F1_DOMAIN", "hyp2f1: series did not converge in 10000 terms");
}

} // namespace

double hyp2f1(double a, double b, double c, double z) {
    // order so that a terminating upper parameter, if any, sits in `a`
    long na = 0, nb = 0, nc = 0;
    bool ta = is_nonpositive_int(a, na);
    bool tb = is_nonpositive_int(b, nb);
    bool pc = is_nonpositive_int(c, nc);
    if (ta || tb) {
        long m = ta && tb ? std::max(na, nb) : (ta ? na : nb); // closest to zero
        // terminating series; valid for any z, provided c's pole (if any)
        // comes strictly after the last term
        if (pc && nc > m)
            throw Error("E_2F1_POLE", "hyp2f1: c is a nonpositive integer inside the sum");
        return gauss_series(a, b, c, z, -m);
    }
    if (pc)
        throw Error("E_2F1_POLE", "hyp2f1: c is a nonpositive integer");
    if (std::abs(z) < 1.0) {
        // Pfaff still converges faster for z in (-1, -0.5)
        if (z < -0.5) {
            double w = z / (z - 1.0);
            return std::pow(1.0 - z, -a) * gauss_series(a, c - b, c, w, -1);
        }
        return gauss_series(a, b, c, z, -1);
    }
    double w = z / (z - 1.0);
    if (std::abs(w) < 1.0)
        return std::pow(1.0 - z, -a) * gauss_series(a, c - b, c, w, -1);
    throw Error("E_2F1_DOMAIN", "hyp2f1: argument outside series and Pfaff domains");
}

} // namespace fibaux
