#include "fibaux/parser.hpp"

#include <cctype>
#include <set>
#include <sstream>

namespace fibaux {

namespace {

enum class Tok { Num, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen,
                 Comma, Equal, Suffix, End };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

struct Lexer {
    const std::string& s;
    size_t i = 0;
    int line = 1, col = 1;
    std::vector<Token> out;

    explicit Lexer(const std::string& t) : s(t) {}

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << "line " << line << " col " << col << ": " << msg;
        throw Error("E_PARSE", os.str());
    }

    void bump(size_t k = 1) {
        for (size_t j = 0; j < k && i < s.size(); ++j) {
            if (s[i] == '\n') { line++; col = 1; } else col++;
            i++;
        }
    }

    void run() {
        bool prev_closes = false; // previous token can take a derivative suffix
        while (i < s.size()) {
            char c = s[i];
            if (std::isspace(static_cast<unsigned char>(c))) { bump(); prev_closes = prev_closes; continue; }
            int tl = line, tc = col;
            if (std::isdigit(static_cast<unsigned char>(c))) {
                size_t j = i;
                while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.')) j++;
                out.push_back({Tok::Num, s.substr(i, j - i), tl, tc});
                bump(j - i);
                prev_closes = true;
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                size_t j = i;
                while (j < s.size() &&
                       (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
                    j++;
                out.push_back({Tok::Ident, s.substr(i, j - i), tl, tc});
                bump(j - i);
                prev_closes = true;
                continue;
            }
            if (c == '_' && prev_closes) {
                // derivative suffix on a closed group: (u^2)_xx
                size_t j = i + 1;
                while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) j++;
                if (j == i + 1) fail("dangling '_'");
                out.push_back({Tok::Suffix, s.substr(i + 1, j - i - 1), tl, tc});
                bump(j - i);
                prev_closes = true;
                continue;
            }
            Tok k;
            switch (c) {
                case '+': k = Tok::Plus; break;
                case '-': k = Tok::Minus; break;
                case '*': k = Tok::Star; break;
                case '/': k = Tok::Slash; break;
                case '^': k = Tok::Caret; break;
                case '(': k = Tok::LParen; break;
                case ')': k = Tok::RParen; break;
                case ',': k = Tok::Comma; break;
                case '=': k = Tok::Equal; break;
                default: fail(std::string("unexpected character '") + c + "'");
            }
            out.push_back({k, std::string(1, c), tl, tc});
            bump();
            prev_closes = (k == Tok::RParen);
        }
        out.push_back({Tok::End, "", line, col});
    }
};

const std::set<std::string> kFunctions = {"sqrt", "abs", "sign", "sin", "cos",
                                          "arctan", "atan", "exp", "log", "hyp2f1"};

const std::set<std::string> kDeclared = {
    "u",  "x",  "t",  "p",  "q",  "n",   "eta", "zeta", "xi",  "z",
    "C1", "C2", "g0", "g1", "g2", "gm1", "gm2", "U",    "pi",  "lambda",
    "w",  "y"};

bool is_jet(const std::string& name) {
    if (name == "u") return true;
    if (name.rfind("u_", 0) != 0) return false;
    for (size_t i = 2; i < name.size(); ++i)
        if (name[i] != 'x' && name[i] != 't') return false;
    return name.size() > 2;
}

struct Parser {
    std::vector<Token> toks;
    size_t pos = 0;
    std::set<std::string> declared;

    const Token& cur() const { return toks[pos]; }

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << "line " << cur().line << " col " << cur().col << ": " << msg;
        throw Error("E_PARSE", os.str());
    }

    bool accept(Tok k) {
        if (cur().kind == k) { pos++; return true; }
        return false;
    }
    void expect(Tok k, const std::string& what) {
        if (!accept(k)) fail("expected " + what);
    }

    Expr apply_suffix(Expr e, const std::string& suffix, const Token& tok) {
        for (char c : suffix) {
            if (c != 'x' && c != 't') {
                std::ostringstream os;
                os << "line " << tok.line << " col " << tok.col
                   << ": derivative suffix may only use x and t";
                throw Error("E_PARSE", os.str());
            }
            e = total_derivative(e, std::string(1, c));
        }
        return e;
    }

    Expr primary() {
        if (accept(Tok::LParen)) {
            Expr e = expr(1);
            expect(Tok::RParen, "')'");
            while (cur().kind == Tok::Suffix) {
                Token t = cur();
                pos++;
                e = apply_suffix(e, t.text, t);
            }
            return e;
        }
        if (cur().kind == Tok::Num) {
            std::string text = cur().text;
            pos++;
            if (text.find('.') != std::string::npos) {
                // decimal literal to exact rational
                size_t dot = text.find('.');
                std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
                if (fp.empty()) return make_num(Rational::parse(ip));
                std::string den = "1" + std::string(fp.size(), '0');
                return make_num(Rational::parse(ip + fp + "/" + den));
            }
            return make_num(Rational::parse(text));
        }
        if (cur().kind == Tok::Ident) {
            Token t = cur();
            pos++;
            if (kFunctions.count(t.text)) {
                expect(Tok::LParen, "'(' after function name");
                std::vector<Expr> args;
                if (cur().kind != Tok::RParen) {
                    args.push_back(expr(1));
                    while (accept(Tok::Comma)) args.push_back(expr(1));
                }
                expect(Tok::RParen, "')'");
                static const std::map<std::string, FunTag> tags = {
                    {"sqrt", FunTag::Sqrt}, {"abs", FunTag::Abs},   {"sign", FunTag::Sign},
                    {"sin", FunTag::Sin},   {"cos", FunTag::Cos},   {"arctan", FunTag::ArcTan},
                    {"atan", FunTag::ArcTan}, {"exp", FunTag::Exp}, {"log", FunTag::Log},
                    {"hyp2f1", FunTag::Hyp2F1}};
                return make_fun(tags.at(t.text), std::move(args));
            }
            if (!is_jet(t.text) && !declared.count(t.text)) {
                std::ostringstream os;
                os << "line " << t.line << " col " << t.col << ": unknown symbol '" << t.text
                   << "'; declared symbols:";
                for (const auto& d : declared) os << " " << d;
                throw Error("E_SYMBOL", os.str());
            }
            return make_sym(t.text);
        }
        fail("expected a value");
    }

    Expr unary() {
        if (accept(Tok::Minus)) return make_mul({make_num(-1), unary()});
        if (accept(Tok::Plus)) return unary();
        Expr base = primary();
        if (accept(Tok::Caret)) {
            Expr e = unary(); // right-associative, binds tighter than unary minus below
            return make_pow(base, e);
        }
        return base;
    }

    // precedence climbing for + - * /
    Expr expr(int min_prec) {
        Expr lhs = unary();
        while (true) {
            int prec;
            Tok k = cur().kind;
            if (k == Tok::Star || k == Tok::Slash) prec = 2;
            else if (k == Tok::Plus || k == Tok::Minus) prec = 1;
            else break;
            if (prec < min_prec) break;
            pos++;
            Expr rhs = expr(prec + 1);
            switch (k) {
                case Tok::Star: lhs = lhs * rhs; break;
                case Tok::Slash: lhs = lhs / rhs; break;
                case Tok::Plus: lhs = lhs + rhs; break;
                default: lhs = lhs - rhs; break;
            }
        }
        return lhs;
    }

    Expr parse_full(bool allow_equation, Expr* rhs_out) {
        Expr lhs = expr(1);
        if (allow_equation && accept(Tok::Equal)) {
            Expr rhs = expr(1);
            if (rhs_out) *rhs_out = rhs;
            if (cur().kind != Tok::End) fail("trailing input");
            return lhs;
        }
        if (cur().kind != Tok::End) fail("trailing input");
        if (rhs_out) *rhs_out = Expr();
        return lhs;
    }
};

Parser make_parser(const std::string& text, const std::vector<std::string>& extra) {
    Lexer lx(text);
    lx.run();
    Parser p;
    p.toks = std::move(lx.out);
    p.declared = kDeclared;
    for (const auto& e : extra) p.declared.insert(e);
    return p;
}

} // namespace

Expr parse_expression(const std::string& text, const std::vector<std::string>& extra) {
    Parser p = make_parser(text, extra);
    return p.parse_full(false, nullptr);
}

PdeSpec parse_pde(const std::string& text) {
    Parser p = make_parser(text, {});
    Expr rhs;
    Expr lhs = p.parse_full(true, &rhs);
    if (rhs.valid() && !rhs.is_zero()) lhs = lhs - rhs;
    PdeSpec spec;
    spec.lhs = expand(lhs);
    return spec;
}

SimilarityTransform parse_transform(const std::string& text, const std::string& default_name) {
    // optional "name =" prefix
    size_t eq = text.find('=');
    std::string name = default_name, body = text;
    if (eq != std::string::npos) {
        std::string head = text.substr(0, eq);
        size_t a = head.find_first_not_of(" \t");
        size_t b = head.find_last_not_of(" \t");
        if (a != std::string::npos) {
            std::string candidate = head.substr(a, b - a + 1);
            bool ident = !candidate.empty();
            for (char c : candidate)
                if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') ident = false;
            if (ident) {
                name = candidate;
                body = text.substr(eq + 1);
            }
        }
    }
    SimilarityTransform tf;
    tf.xi = name;
    tf.definition = parse_expression(body);
    for (const auto& s : free_symbols(tf.definition))
        if (s != "x" && s != "t")
            throw Error("E_PARSE", "transform must be an expression in x and t (found " + s + ")");
    return tf;
}

} // namespace fibaux
