#include "fibaux/multipoly.hpp"

#include <sstream>

namespace fibaux {

std::string MultiPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Rational a = c;
        if (first) {
            if (a.is_negative()) { os << "-"; a = -a; }
        } else {
            os << (a.is_negative() ? " - " : " + ");
            if (a.is_negative()) a = -a;
        }
        first = false;
        bool has_var = false;
        for (int x : e) if (x != 0) has_var = true;
        if (!a.is_one() || !has_var) os << a.str();
        bool star = !a.is_one() || !has_var;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (star) os << "*";
            os << vars_[i];
            if (e[i] != 1) os << "^" << e[i];
            star = true;
        }
    }
    return os.str();
}

namespace {

// Coefficients of p viewed as univariate in v (index = degree in v).
std::vector<MultiPoly> coeffs_in(const MultiPoly& p, const std::string& v) {
    int d = p.degree(v);
    std::vector<MultiPoly> out(static_cast<size_t>(d) + 1);
    const auto& vars = p.vars();
    auto it = std::find(vars.begin(), vars.end(), v);
    if (it == vars.end()) { out[0] = p; return out; }
    size_t idx = static_cast<size_t>(it - vars.begin());
    for (const auto& [e, c] : p.terms()) {
        ExpVec e2 = e;
        int k = e2[idx];
        e2[idx] = 0;
        MultiPoly m;
        m = m.remap(vars);
        m.add_term(e2, c);
        out[static_cast<size_t>(k)] = out[static_cast<size_t>(k)] + m;
    }
    return out;
}

MultiPoly gcd_list(const std::vector<MultiPoly>& ps) {
    MultiPoly g;
    for (const auto& p : ps) {
        g = gcd(g, p);
        if (g.is_constant() && !g.is_zero()) return MultiPoly::constant(1);
    }
    return g;
}

// Content of p with respect to v: gcd of the v-coefficients.
MultiPoly content_in(const MultiPoly& p, const std::string& v) {
    return gcd_list(coeffs_in(p, v));
}

MultiPoly lc_in(const MultiPoly& p, const std::string& v) {
    auto cs = coeffs_in(p, v);
    return cs.back();
}

// One pseudo-reduction step sequence: returns the pseudo-remainder of a by b
// in v (result has v-degree < deg_v(b)); both assumed to depend on v.
MultiPoly prem(MultiPoly a, const MultiPoly& b, const std::string& v) {
    int db = b.degree(v);
    MultiPoly lb = lc_in(b, v);
    while (!a.is_zero() && a.degree(v) >= db) {
        int da = a.degree(v);
        MultiPoly la = lc_in(a, v);
        a = a * lb - b * la * MultiPoly::var(v, da - db);
    }
    return a;
}

} // namespace

MultiPoly gcd(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero() && b.is_zero()) return MultiPoly();
    if (a.is_zero()) return b.primitive();
    if (b.is_zero()) return a.primitive();
    if (a.is_constant() || b.is_constant()) return MultiPoly::constant(1);

    // Main variable: first variable both depend on; if none is shared the
    // gcd is the gcd of contents w.r.t. a private variable.
    std::string shared;
    for (const auto& v : a.vars())
        if (a.depends_on(v) && b.depends_on(v)) { shared = v; break; }
    if (shared.empty()) {
        for (const auto& v : a.vars())
            if (a.depends_on(v))
                return gcd(content_in(a, v), b);
        return MultiPoly::constant(1);
    }

    MultiPoly ca = content_in(a, shared);
    MultiPoly cb = content_in(b, shared);
    MultiPoly pa = a.div_exact(ca);
    MultiPoly pb = b.div_exact(cb);

    // Primitive PRS on the primitive parts.
    MultiPoly r0 = pa, r1 = pb;
    if (r0.degree(shared) < r1.degree(shared)) std::swap(r0, r1);
    while (!r1.is_zero() && r1.degree(shared) > 0) {
        MultiPoly r2 = prem(r0, r1, shared);
        if (!r2.is_zero()) {
            MultiPoly c = content_in(r2, shared);
            r2 = r2.div_exact(c).primitive();
        }
        r0 = r1;
        r1 = r2;
    }
    MultiPoly g;
    if (r1.is_zero())
        g = r0;
    else
        g = MultiPoly::constant(1); // reached a nonzero v-free remainder
    g = g.primitive();
    MultiPoly cg = gcd(ca, cb);
    return (g * cg).primitive();
}

} // namespace fibaux
