#include "fibaux/expr.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <functional>
#include <sstream>

namespace fibaux {

namespace {

Expr mk(ExprNode n) { return Expr(std::make_shared<ExprNode>(std::move(n))); }

int kind_rank(Kind k) {
    switch (k) {
        case Kind::Num: return 0;
        case Kind::Sym: return 1;
        case Kind::Fun: return 2;
        case Kind::Pow: return 3;
        case Kind::Mul: return 4;
        case Kind::Add: return 5;
    }
    return 6;
}

const char* fun_name(FunTag t) {
    switch (t) {
        case FunTag::Sqrt: return "sqrt";
        case FunTag::Abs: return "abs";
        case FunTag::Sign: return "sign";
        case FunTag::Sin: return "sin";
        case FunTag::Cos: return "cos";
        case FunTag::ArcTan: return "arctan";
        case FunTag::Exp: return "exp";
        case FunTag::Log: return "log";
        case FunTag::Hyp2F1: return "hyp2f1";
    }
    return "?";
}

} // namespace

Kind Expr::kind() const { return p_->kind; }
bool Expr::is_zero() const { return p_->kind == Kind::Num && p_->value.is_zero(); }
bool Expr::is_one() const { return p_->kind == Kind::Num && p_->value.is_one(); }
bool Expr::is_integer() const { return p_->kind == Kind::Num && p_->value.is_integer(); }
const Rational& Expr::num_value() const { return p_->value; }
const std::string& Expr::sym_name() const { return p_->name; }
FunTag Expr::fun_tag() const { return p_->tag; }
bool Expr::sqrt_nonneg() const { return p_->nonneg; }
const std::vector<Expr>& Expr::children() const { return p_->kids; }

int compare(const Expr& a, const Expr& b) {
    if (a.ptr() == b.ptr()) return 0;
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case Kind::Num: {
            if (a.num_value() == b.num_value()) return 0;
            return a.num_value() < b.num_value() ? -1 : 1;
        }
        case Kind::Sym:
            return a.sym_name().compare(b.sym_name());
        case Kind::Fun: {
            if (a.fun_tag() != b.fun_tag())
                return static_cast<int>(a.fun_tag()) < static_cast<int>(b.fun_tag()) ? -1 : 1;
            if (a.fun_tag() == FunTag::Sqrt && a.sqrt_nonneg() != b.sqrt_nonneg())
                return a.sqrt_nonneg() ? 1 : -1;
            break;
        }
        default: break;
    }
    const auto& ka = a.children();
    const auto& kb = b.children();
    if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
    for (size_t i = 0; i < ka.size(); ++i) {
        int c = compare(ka[i], kb[i]);
        if (c != 0) return c;
    }
    return 0;
}

bool Expr::operator==(const Expr& o) const { return compare(*this, o) == 0; }

Expr make_num(const Rational& r) {
    ExprNode n;
    n.kind = Kind::Num;
    n.value = r;
    return mk(std::move(n));
}
Expr make_num(long v) { return make_num(Rational(v)); }

Expr make_sym(const std::string& name) {
    ExprNode n;
    n.kind = Kind::Sym;
    n.name = name;
    return mk(std::move(n));
}

bool known_nonneg(const Expr& e) {
    switch (e.kind()) {
        case Kind::Num: return !e.num_value().is_negative();
        case Kind::Fun:
            switch (e.fun_tag()) {
                case FunTag::Abs:
                case FunTag::Exp:
                    return true;
                case FunTag::Sqrt:
                    return true; // value of a real sqrt is nonnegative
                default: return false;
            }
        case Kind::Pow: {
            const Expr& ex = e.children()[1];
            if (ex.is_integer()) {
                long k = ex.num_value().to_long();
                if (k % 2 == 0) return true;
            }
            return known_nonneg(e.children()[0]);
        }
        case Kind::Mul: {
            for (const auto& c : e.children())
                if (!known_nonneg(c)) return false;
            return true;
        }
        case Kind::Add: {
            for (const auto& c : e.children())
                if (!known_nonneg(c)) return false;
            return true;
        }
        default: return false;
    }
}

namespace {

// Split a canonical product term into (rational coefficient, remaining core).
std::pair<Rational, Expr> split_coeff(const Expr& e) {
    if (e.kind() == Kind::Num) return {e.num_value(), make_num(1)};
    if (e.kind() == Kind::Mul) {
        const auto& ks = e.children();
        if (!ks.empty() && ks[0].kind() == Kind::Num) {
            std::vector<Expr> rest(ks.begin() + 1, ks.end());
            Expr core = rest.size() == 1 ? rest[0] : mk([&] {
                ExprNode n;
                n.kind = Kind::Mul;
                n.kids = rest;
                return n;
            }());
            return {ks[0].num_value(), core};
        }
    }
    return {Rational(1), e};
}

// Exact rational q-th root when it exists (r >= 0).
bool exact_root(const Rational& r, long q, Rational& out) {
    if (r.is_negative()) return false;
    mpz_class n, d;
    int okn = mpz_root(n.get_mpz_t(), r.num().get_mpz_t(), static_cast<unsigned long>(q));
    int okd = mpz_root(d.get_mpz_t(), r.den().get_mpz_t(), static_cast<unsigned long>(q));
    if (!okn || !okd) return false;
    out = Rational(mpq_class(n, d));
    return true;
}

} // namespace

Expr make_add(std::vector<Expr> children) {
    // flatten
    std::vector<Expr> flat;
    for (auto& c : children) {
        if (!c.valid()) throw Error("E_INTERNAL", "invalid expr in add");
        if (c.kind() == Kind::Add)
            for (const auto& k : c.children()) flat.push_back(k);
        else
            flat.push_back(c);
    }
    Rational cst(0);
    std::map<Expr, Rational, ExprLess> groups;
    for (const auto& c : flat) {
        if (c.kind() == Kind::Num) { cst += c.num_value(); continue; }
        auto [k, core] = split_coeff(c);
        auto it = groups.find(core);
        if (it == groups.end())
            groups.emplace(core, k);
        else {
            it->second += k;
            if (it->second.is_zero()) groups.erase(it);
        }
    }
    std::vector<Expr> out;
    for (const auto& [core, k] : groups) {
        if (k.is_one())
            out.push_back(core);
        else
            out.push_back(make_mul({make_num(k), core}));
    }
    if (!cst.is_zero()) out.push_back(make_num(cst));
    std::sort(out.begin(), out.end(), ExprLess{});
    if (out.empty()) return make_num(0);
    if (out.size() == 1) return out[0];
    ExprNode n;
    n.kind = Kind::Add;
    n.kids = std::move(out);
    return mk(std::move(n));
}

Expr make_mul(std::vector<Expr> children) {
    // Fixpoint loop: pow-folding may return products that need re-flattening.
    for (int round = 0; round < 4; ++round) {
        std::vector<Expr> flat;
        Rational coeff(1);
        for (auto& c : children) {
            if (!c.valid()) throw Error("E_INTERNAL", "invalid expr in mul");
            if (c.kind() == Kind::Mul)
                for (const auto& k : c.children()) flat.push_back(k);
            else
                flat.push_back(c);
        }
        std::vector<Expr> factors;
        for (const auto& f : flat) {
            if (f.kind() == Kind::Num) {
                coeff *= f.num_value();
                if (coeff.is_zero()) return make_num(0);
            } else
                factors.push_back(f);
        }
        // group by base
        struct Group {
            int count = 0;
            Rational int_exp{0};
            bool has_int = false;
            std::vector<Expr> sym_exps;
        };
        std::map<Expr, Group, ExprLess> groups;
        for (const auto& f : factors) {
            Expr base = f, ex = make_num(1);
            if (f.kind() == Kind::Pow) {
                base = f.children()[0];
                ex = f.children()[1];
            }
            auto& g = groups[base];
            g.count += 1;
            if (ex.is_num() && ex.num_value().is_integer()) {
                g.int_exp += ex.num_value();
                g.has_int = true;
            } else {
                g.sym_exps.push_back(ex);
            }
        }
        std::vector<Expr> rebuilt;
        bool merged = false;
        for (auto& [base, g] : groups) {
            bool merge_all = base.kind() == Kind::Sym || known_nonneg(base);
            if (merge_all && !g.sym_exps.empty()) {
                std::vector<Expr> exps = g.sym_exps;
                if (g.has_int && !g.int_exp.is_zero()) exps.push_back(make_num(g.int_exp));
                Expr total = exps.size() == 1 ? exps[0] : make_add(exps);
                rebuilt.push_back(make_pow(base, total));
                if (g.count > 1) merged = true;
            } else {
                int kept = static_cast<int>(g.sym_exps.size());
                if (g.has_int && !g.int_exp.is_zero()) {
                    rebuilt.push_back(make_pow(base, make_num(g.int_exp)));
                    kept += 1;
                }
                if (g.count > kept || (g.count > 1 && kept < g.count)) merged = true;
                if (g.count > 1 && g.has_int) merged = true;
                for (const auto& ex : g.sym_exps)
                    rebuilt.push_back(make_pow(base, ex));
            }
        }
        // pow folding may produce Num/Mul factors; detect and loop again
        std::vector<Expr> next;
        bool redo = false;
        for (const auto& r : rebuilt) {
            if (r.kind() == Kind::Num || r.kind() == Kind::Mul) redo = true;
            if (!r.is_one()) next.push_back(r);
        }
        if (redo || (merged && round < 3)) {
            next.push_back(make_num(coeff));
            children = std::move(next);
            continue;
        }
        std::sort(next.begin(), next.end(), ExprLess{});
        if (next.empty()) return make_num(coeff);
        if (coeff.is_one() && next.size() == 1) return next[0];
        std::vector<Expr> out;
        if (!coeff.is_one()) out.push_back(make_num(coeff));
        for (auto& f : next) out.push_back(std::move(f));
        if (out.size() == 1) return out[0];
        ExprNode n;
        n.kind = Kind::Mul;
        n.kids = std::move(out);
        return mk(std::move(n));
    }
    throw Error("E_INTERNAL", "make_mul failed to stabilize");
}

Expr make_pow(const Expr& base, const Expr& exp) {
    if (exp.is_zero()) return make_num(1);
    if (exp.is_one()) return base;
    if (base.is_one()) return make_num(1);
    if (base.is_zero()) {
        if (exp.is_num() && !exp.num_value().is_negative()) return make_num(0);
        if (exp.is_num()) throw Error("E_DIV0", "0 raised to negative power");
    }
    if (base.kind() == Kind::Num && exp.is_integer())
        return make_num(base.num_value().pow(exp.num_value().to_long()));
    if (base.kind() == Kind::Num && exp.is_num()) {
        // exact rational root when available, e.g. 4^(1/2) -> 2
        const Rational& e = exp.num_value();
        if (e.den().fits_slong_p() && !base.num_value().is_negative()) {
            long q = mpz_class(e.den()).get_si();
            Rational root;
            if (q > 1 && q <= 64 && exact_root(base.num_value(), q, root)) {
                Rational ip(e.num());
                return make_pow(make_num(root), make_num(ip));
            }
        }
    }
    if (base.kind() == Kind::Pow && exp.is_integer()) {
        const Expr& b2 = base.children()[0];
        const Expr& e2 = base.children()[1];
        if (e2.is_integer() || b2.kind() == Kind::Sym || known_nonneg(b2))
            return make_pow(b2, make_mul({e2, exp}));
    }
    if (base.kind() == Kind::Fun && base.fun_tag() == FunTag::Sqrt && exp.is_integer()) {
        const Expr& u = base.children()[0];
        if (base.sqrt_nonneg() || known_nonneg(u)) {
            long k = exp.num_value().to_long();
            long half = (k >= 0 ? k : k - 1) / 2; // floor division
            long rem = k - 2 * half;
            Expr whole = make_pow(u, make_num(half));
            if (rem == 0) return whole;
            return make_mul({whole, make_sqrt(u, base.sqrt_nonneg())});
        }
    }
    if (base.kind() == Kind::Mul && exp.is_integer()) {
        std::vector<Expr> fs;
        for (const auto& f : base.children()) fs.push_back(make_pow(f, exp));
        return make_mul(std::move(fs));
    }
    ExprNode n;
    n.kind = Kind::Pow;
    n.kids = {base, exp};
    return mk(std::move(n));
}

Expr make_fun(FunTag tag, std::vector<Expr> args, bool nonneg) {
    size_t want = tag == FunTag::Hyp2F1 ? 4 : 1;
    if (args.size() != want)
        throw Error("E_ARITY", std::string(fun_name(tag)) + ": wrong argument count");
    const Expr& a = args[0];
    if (a.kind() == Kind::Num && tag != FunTag::Hyp2F1) {
        const Rational& r = a.num_value();
        switch (tag) {
            case FunTag::Sin: if (r.is_zero()) return make_num(0); break;
            case FunTag::Cos: if (r.is_zero()) return make_num(1); break;
            case FunTag::ArcTan: if (r.is_zero()) return make_num(0); break;
            case FunTag::Exp: if (r.is_zero()) return make_num(1); break;
            case FunTag::Log: if (r.is_one()) return make_num(0); break;
            case FunTag::Abs: return make_num(r.abs());
            case FunTag::Sign:
                return make_num(r.is_zero() ? 0 : (r.is_negative() ? -1 : 1));
            case FunTag::Sqrt: {
                Rational root;
                if (!r.is_negative() && exact_root(r, 2, root)) return make_num(root);
                break;
            }
            default: break;
        }
    }
    if (tag == FunTag::Abs && a.kind() == Kind::Fun && a.fun_tag() == FunTag::Abs)
        return a;
    if (tag == FunTag::Abs && known_nonneg(a)) return a;
    ExprNode n;
    n.kind = Kind::Fun;
    n.tag = tag;
    n.nonneg = (tag == FunTag::Sqrt) && (nonneg || known_nonneg(args[0]));
    n.kids = std::move(args);
    return mk(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return make_add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return make_add({a, make_mul({make_num(-1), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return make_mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return make_mul({a, make_pow(b, make_num(-1))}); }
Expr operator-(const Expr& a) { return make_mul({make_num(-1), a}); }

Expr diff(const Expr& e, const std::string& sym) {
    switch (e.kind()) {
        case Kind::Num: return make_num(0);
        case Kind::Sym: return make_num(e.sym_name() == sym ? 1 : 0);
        case Kind::Add: {
            std::vector<Expr> parts;
            for (const auto& c : e.children()) parts.push_back(diff(c, sym));
            return make_add(std::move(parts));
        }
        case Kind::Mul: {
            const auto& fs = e.children();
            std::vector<Expr> sum;
            for (size_t i = 0; i < fs.size(); ++i) {
                std::vector<Expr> prod;
                for (size_t j = 0; j < fs.size(); ++j)
                    prod.push_back(i == j ? diff(fs[j], sym) : fs[j]);
                sum.push_back(make_mul(std::move(prod)));
            }
            return make_add(std::move(sum));
        }
        case Kind::Pow: {
            const Expr& b = e.children()[0];
            const Expr& x = e.children()[1];
            Expr dx = diff(x, sym);
            Expr db = diff(b, sym);
            if (dx.is_zero()) {
                // x * b^(x-1) * b'
                return make_mul({x, make_pow(b, make_add({x, make_num(-1)})), db});
            }
            // general: b^x (x' log b + x b'/b)
            Expr t1 = make_mul({dx, make_fun(FunTag::Log, {b})});
            Expr t2 = make_mul({x, db, make_pow(b, make_num(-1))});
            return make_mul({e, make_add({t1, t2})});
        }
        case Kind::Fun: {
            const auto& args = e.children();
            if (e.fun_tag() == FunTag::Hyp2F1) {
                for (int i = 0; i < 3; ++i)
                    if (contains_symbol(args[i], sym))
                        throw Error("E_UNSUPPORTED_FUN",
                                    "derivative of hyp2f1 with respect to a parameter");
                Expr a = args[0], b = args[1], c = args[2], z = args[3];
                Expr dz = diff(z, sym);
                if (dz.is_zero()) return make_num(0);
                Expr shifted = make_fun(FunTag::Hyp2F1,
                                        {a + make_num(1), b + make_num(1), c + make_num(1), z});
                return make_mul({a, b, make_pow(c, make_num(-1)), shifted, dz});
            }
            const Expr& u = args[0];
            Expr du = diff(u, sym);
            if (du.is_zero()) return make_num(0);
            Expr core;
            switch (e.fun_tag()) {
                case FunTag::Sqrt:
                    core = make_mul({make_num(Rational(1, 2)), make_pow(e, make_num(-1))});
                    break;
                case FunTag::Abs:
                    core = make_fun(FunTag::Sign, {u});
                    break;
                case FunTag::Sign:
                    return make_num(0);
                case FunTag::Sin:
                    core = make_fun(FunTag::Cos, {u});
                    break;
                case FunTag::Cos:
                    core = make_mul({make_num(-1), make_fun(FunTag::Sin, {u})});
                    break;
                case FunTag::ArcTan:
                    core = make_pow(make_add({make_num(1), make_pow(u, make_num(2))}),
                                    make_num(-1));
                    break;
                case FunTag::Exp:
                    core = e;
                    break;
                case FunTag::Log:
                    core = make_pow(u, make_num(-1));
                    break;
                default:
                    throw Error("E_UNSUPPORTED_FUN", "no derivative rule for function");
            }
            return make_mul({core, du});
        }
    }
    throw Error("E_INTERNAL", "diff: bad node");
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
    switch (e.kind()) {
        case Kind::Num: return e;
        case Kind::Sym: {
            auto it = bindings.find(e.sym_name());
            return it == bindings.end() ? e : it->second;
        }
        case Kind::Add: {
            std::vector<Expr> ks;
            for (const auto& c : e.children()) ks.push_back(substitute(c, bindings));
            return make_add(std::move(ks));
        }
        case Kind::Mul: {
            std::vector<Expr> ks;
            for (const auto& c : e.children()) ks.push_back(substitute(c, bindings));
            return make_mul(std::move(ks));
        }
        case Kind::Pow:
            return make_pow(substitute(e.children()[0], bindings),
                            substitute(e.children()[1], bindings));
        case Kind::Fun: {
            std::vector<Expr> ks;
            for (const auto& c : e.children()) ks.push_back(substitute(c, bindings));
            return make_fun(e.fun_tag(), std::move(ks), e.sqrt_nonneg());
        }
    }
    throw Error("E_INTERNAL", "substitute: bad node");
}

namespace {

const int kExpandPowCap = 16;

// Product of two expanded expressions by explicit term distribution; avoids
// make_mul regrouping identical sums back into powers.
Expr mul_expanded(const Expr& a, const Expr& b) {
    std::vector<Expr> ta = a.kind() == Kind::Add ? a.children() : std::vector<Expr>{a};
    std::vector<Expr> tb = b.kind() == Kind::Add ? b.children() : std::vector<Expr>{b};
    std::vector<Expr> sum;
    sum.reserve(ta.size() * tb.size());
    for (const auto& u : ta)
        for (const auto& v : tb) sum.push_back(make_mul({u, v}));
    return make_add(std::move(sum));
}

Expr expand_impl(const Expr& e) {
    switch (e.kind()) {
        case Kind::Num:
        case Kind::Sym:
            return e;
        case Kind::Fun: {
            std::vector<Expr> ks;
            for (const auto& c : e.children()) ks.push_back(expand_impl(c));
            return make_fun(e.fun_tag(), std::move(ks), e.sqrt_nonneg());
        }
        case Kind::Add: {
            std::vector<Expr> ks;
            for (const auto& c : e.children()) ks.push_back(expand_impl(c));
            return make_add(std::move(ks));
        }
        case Kind::Pow: {
            Expr b = expand_impl(e.children()[0]);
            Expr x = expand_impl(e.children()[1]);
            if (b.kind() == Kind::Add && x.is_integer()) {
                long k = x.num_value().to_long();
                if (k > 1 && k <= kExpandPowCap) {
                    Expr acc = b;
                    for (long i = 1; i < k; ++i) acc = mul_expanded(acc, b);
                    return acc;
                }
            }
            return make_pow(b, x);
        }
        case Kind::Mul: {
            std::vector<Expr> ks;
            for (const auto& c : e.children()) ks.push_back(expand_impl(c));
            // distribute over sums
            std::vector<std::vector<Expr>> terms = {{}};
            for (const auto& f : ks) {
                if (f.kind() == Kind::Add) {
                    std::vector<std::vector<Expr>> next;
                    next.reserve(terms.size() * f.children().size());
                    for (const auto& t : terms)
                        for (const auto& addend : f.children()) {
                            auto t2 = t;
                            t2.push_back(addend);
                            next.push_back(std::move(t2));
                        }
                    terms = std::move(next);
                } else {
                    for (auto& t : terms) t.push_back(f);
                }
            }
            if (terms.size() == 1) return make_mul(std::move(terms[0]));
            std::vector<Expr> sum;
            sum.reserve(terms.size());
            for (auto& t : terms) sum.push_back(make_mul(std::move(t)));
            return make_add(std::move(sum));
        }
    }
    throw Error("E_INTERNAL", "expand: bad node");
}

} // namespace

Expr expand(const Expr& e) {
    // A product produced by distribution can itself contain sums after power
    // merging; iterate to a fixpoint (bounded, in practice 2 rounds).
    Expr cur = e;
    for (int i = 0; i < 6; ++i) {
        Expr next = expand_impl(cur);
        if (next == cur) return next;
        cur = next;
    }
    return cur;
}

void collect_symbols(const Expr& e, std::set<std::string>& out) {
    switch (e.kind()) {
        case Kind::Num: return;
        case Kind::Sym: out.insert(e.sym_name()); return;
        default:
            for (const auto& c : e.children()) collect_symbols(c, out);
    }
}

std::set<std::string> free_symbols(const Expr& e) {
    std::set<std::string> s;
    collect_symbols(e, s);
    return s;
}

bool contains_symbol(const Expr& e, const std::string& sym) {
    switch (e.kind()) {
        case Kind::Num: return false;
        case Kind::Sym: return e.sym_name() == sym;
        default:
            for (const auto& c : e.children())
                if (contains_symbol(c, sym)) return true;
            return false;
    }
}

RatFunc expr_to_ratfunc(const Expr& e) {
    switch (e.kind()) {
        case Kind::Num: return RatFunc(e.num_value());
        case Kind::Sym: return RatFunc::var(e.sym_name());
        case Kind::Add: {
            RatFunc acc;
            for (const auto& c : e.children()) acc = acc + expr_to_ratfunc(c);
            return acc;
        }
        case Kind::Mul: {
            RatFunc acc{Rational(1)};
            for (const auto& c : e.children()) acc = acc * expr_to_ratfunc(c);
            return acc;
        }
        case Kind::Pow: {
            const Expr& x = e.children()[1];
            if (!x.is_integer())
                throw Error("E_NOT_RATIONAL", "non-integer exponent in rational conversion");
            return expr_to_ratfunc(e.children()[0]).pow(static_cast<int>(x.num_value().to_long()));
        }
        default:
            throw Error("E_NOT_RATIONAL", "non-rational node in rational conversion: " + e.str());
    }
}

Expr multipoly_to_expr(const MultiPoly& p) {
    std::vector<Expr> sum;
    for (const auto& [e, c] : p.terms()) {
        std::vector<Expr> prod = {make_num(c)};
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0)
                prod.push_back(make_pow(make_sym(p.vars()[i]), make_num(e[i])));
        sum.push_back(make_mul(std::move(prod)));
    }
    return make_add(std::move(sum));
}

Expr ratfunc_to_expr(const RatFunc& f) {
    Expr n = multipoly_to_expr(f.num());
    if (f.is_polynomial() && f.den().constant_value().is_one()) return n;
    return make_mul({n, make_pow(multipoly_to_expr(f.den()), make_num(-1))});
}

std::map<ExpVec, RatFunc> collect(const Expr& e, const std::vector<std::string>& basis) {
    Expr ex = expand(e);
    std::map<ExpVec, RatFunc> out;
    auto add_part = [&](const ExpVec& key, const RatFunc& rf) {
        auto it = out.find(key);
        if (it == out.end())
            out.emplace(key, rf);
        else {
            it->second = it->second + rf;
            if (it->second.is_zero()) out.erase(it);
        }
    };
    auto handle_term = [&](const Expr& term) {
        ExpVec key(basis.size(), 0);
        std::vector<Expr> coeff_factors;
        std::vector<Expr> factors;
        if (term.kind() == Kind::Mul)
            factors = term.children();
        else
            factors = {term};
        for (const auto& f : factors) {
            Expr base = f, ex2 = make_num(1);
            if (f.kind() == Kind::Pow) {
                base = f.children()[0];
                ex2 = f.children()[1];
            }
            bool matched = false;
            if (base.kind() == Kind::Sym) {
                auto it = std::find(basis.begin(), basis.end(), base.sym_name());
                if (it != basis.end()) {
                    if (!ex2.is_integer())
                        throw Error("E_COLLECT", "non-integer power of basis symbol " +
                                                     base.sym_name());
                    key[static_cast<size_t>(it - basis.begin())] +=
                        static_cast<int>(ex2.num_value().to_long());
                    matched = true;
                }
            }
            if (!matched) {
                for (const auto& b : basis)
                    if (contains_symbol(f, b))
                        throw Error("E_COLLECT",
                                    "non-polynomial dependence on basis symbol " + b);
                coeff_factors.push_back(f);
            }
        }
        add_part(key, expr_to_ratfunc(make_mul(std::move(coeff_factors))));
    };
    if (ex.kind() == Kind::Add)
        for (const auto& t : ex.children()) handle_term(t);
    else if (!ex.is_zero())
        handle_term(ex);
    return out;
}

Expr reconstruct(const std::map<ExpVec, RatFunc>& parts,
                 const std::vector<std::string>& basis) {
    std::vector<Expr> sum;
    for (const auto& [key, rf] : parts) {
        std::vector<Expr> prod = {ratfunc_to_expr(rf)};
        for (size_t i = 0; i < basis.size(); ++i)
            if (key[i] != 0)
                prod.push_back(make_pow(make_sym(basis[i]), make_num(key[i])));
        sum.push_back(make_mul(std::move(prod)));
    }
    return expand(make_add(std::move(sum)));
}

// ---------------------------------------------------------------- printing

namespace {

void print_infix(std::ostringstream& os, const Expr& e, int parent_prec);

void print_product(std::ostringstream& os, const Expr& e) {
    const auto& ks = e.children();
    bool first = true;
    for (const auto& f : ks) {
        if (!first) os << "*";
        print_infix(os, f, 2);
        first = false;
    }
}

void print_infix(std::ostringstream& os, const Expr& e, int parent_prec) {
    switch (e.kind()) {
        case Kind::Num: {
            bool paren = parent_prec >= 2 && (e.num_value().is_negative() ||
                                              !e.num_value().is_integer());
            if (paren) os << "(";
            os << e.num_value().str();
            if (paren) os << ")";
            return;
        }
        case Kind::Sym: os << e.sym_name(); return;
        case Kind::Add: {
            if (parent_prec >= 1) os << "(";
            bool first = true;
            for (const auto& t : e.children()) {
                auto [c, core] = split_coeff(t);
                if (!first) {
                    if (c.is_negative()) {
                        os << " - ";
                        Expr pos = c == Rational(-1) ? core
                                                     : make_mul({make_num(-c), core});
                        print_infix(os, pos, 1);
                        first = false;
                        continue;
                    }
                    os << " + ";
                }
                print_infix(os, t, 1);
                first = false;
            }
            if (parent_prec >= 1) os << ")";
            return;
        }
        case Kind::Mul:
            if (parent_prec >= 3) { os << "("; print_product(os, e); os << ")"; }
            else print_product(os, e);
            return;
        case Kind::Pow: {
            print_infix(os, e.children()[0], 3);
            os << "^";
            print_infix(os, e.children()[1], 3);
            return;
        }
        case Kind::Fun: {
            os << fun_name(e.fun_tag());
            os << "(";
            bool first = true;
            for (const auto& a : e.children()) {
                if (!first) os << ", ";
                print_infix(os, a, 0);
                first = false;
            }
            os << ")";
            return;
        }
    }
}

} // namespace

std::string Expr::str() const {
    std::ostringstream os;
    print_infix(os, *this, 0);
    return os.str();
}

std::string to_sexpr(const Expr& e) {
    std::ostringstream os;
    std::function<void(const Expr&)> w = [&](const Expr& x) {
        switch (x.kind()) {
            case Kind::Num:
                if (x.is_integer()) os << x.num_value().str();
                else os << "(rat " << x.num_value().num().get_str() << " "
                       << x.num_value().den().get_str() << ")";
                return;
            case Kind::Sym: os << "(sym " << x.sym_name() << ")"; return;
            case Kind::Add:
            case Kind::Mul: {
                os << (x.kind() == Kind::Add ? "(add" : "(mul");
                for (const auto& c : x.children()) { os << " "; w(c); }
                os << ")";
                return;
            }
            case Kind::Pow:
                os << "(pow ";
                w(x.children()[0]);
                os << " ";
                w(x.children()[1]);
                os << ")";
                return;
            case Kind::Fun: {
                std::string name = fun_name(x.fun_tag());
                if (x.fun_tag() == FunTag::Sqrt && x.sqrt_nonneg()) name = "sqrtnn";
                os << "(" << name;
                for (const auto& c : x.children()) { os << " "; w(c); }
                os << ")";
                return;
            }
        }
    };
    w(e);
    return os.str();
}

std::string Expr::sexpr() const { return to_sexpr(*this); }

namespace {

struct SexprParser {
    const std::string& s;
    size_t i = 0;

    explicit SexprParser(const std::string& t) : s(t) {}

    void skip_ws() { while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i; }

    std::string atom() {
        size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) &&
               s[i] != '(' && s[i] != ')')
            ++i;
        if (start == i) throw Error("E_SEXPR", "empty atom at offset " + std::to_string(i));
        return s.substr(start, i - start);
    }

    Expr parse() {
        skip_ws();
        if (i >= s.size()) throw Error("E_SEXPR", "unexpected end of input");
        if (s[i] != '(') {
            std::string a = atom();
            return make_num(Rational::parse(a));
        }
        ++i; // '('
        skip_ws();
        std::string head = atom();
        std::vector<Expr> args;
        std::vector<std::string> raw;
        while (true) {
            skip_ws();
            if (i >= s.size()) throw Error("E_SEXPR", "missing ')'");
            if (s[i] == ')') { ++i; break; }
            if (head == "sym" || head == "rat") raw.push_back(atom());
            else args.push_back(parse());
        }
        if (head == "sym") {
            if (raw.size() != 1) throw Error("E_SEXPR", "sym takes one name");
            return make_sym(raw[0]);
        }
        if (head == "rat") {
            if (raw.size() != 2) throw Error("E_SEXPR", "rat takes two integers");
            return make_num(Rational::parse(raw[0] + "/" + raw[1]));
        }
        if (head == "add") return make_add(std::move(args));
        if (head == "mul") return make_mul(std::move(args));
        if (head == "pow") {
            if (args.size() != 2) throw Error("E_SEXPR", "pow takes two arguments");
            return make_pow(args[0], args[1]);
        }
        static const std::map<std::string, FunTag> tags = {
            {"sqrt", FunTag::Sqrt},   {"sqrtnn", FunTag::Sqrt}, {"abs", FunTag::Abs},
            {"sign", FunTag::Sign},   {"sin", FunTag::Sin},     {"cos", FunTag::Cos},
            {"arctan", FunTag::ArcTan}, {"exp", FunTag::Exp},   {"log", FunTag::Log},
            {"hyp2f1", FunTag::Hyp2F1}};
        auto it = tags.find(head);
        if (it == tags.end()) throw Error("E_SEXPR", "unknown head: " + head);
        return make_fun(it->second, std::move(args), head == "sqrtnn");
    }
};

} // namespace

Expr parse_sexpr(const std::string& text) {
    SexprParser p(text);
    Expr e = p.parse();
    p.skip_ws();
    if (p.i != text.size())
        throw Error("E_SEXPR", "trailing input after expression");
    return e;
}

} // namespace fibaux
