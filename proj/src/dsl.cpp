#include "koszulkit/dsl.hpp"

#include <json.hpp>

#include <cctype>
#include <set>
#include <sstream>

namespace kk {

std::string Diagnostic::str() const {
    return std::to_string(line) + ":" + std::to_string(col) + ": " + kind + " error: " + message;
}

static std::string join_diags(const std::vector<Diagnostic>& d) {
    std::string s;
    for (auto& x : d) s += (s.empty() ? "" : "\n") + x.str();
    return s;
}

dsl_error::dsl_error(std::vector<Diagnostic> d) : std::runtime_error(join_diags(d)), diags(std::move(d)) {}

std::string kind_name(StructKind k) {
    switch (k) {
        case StructKind::DGA: return "dga";
        case StructKind::Algebra: return "algebra";
        case StructKind::Coalgebra: return "coalgebra";
    }
    return "?";
}

std::string ObjRef::str() const {
    std::string s = base;
    for (auto& o : ops) s = o + "(" + s + ")";
    return s;
}

ObjRef parse_objref(const std::string& text) {
    ObjRef r;
    std::string s;
    for (char c : text)
        if (!std::isspace((unsigned char)c)) s += c;
    std::vector<std::string> outer;
    while (true) {
        auto p = s.find('(');
        if (p == std::string::npos) break;
        if (s.back() != ')') throw dsl_error({{1, (int)s.size(), "syntax", "unbalanced parentheses in '" + text + "'"}});
        std::string op = s.substr(0, p);
        if (op != "dual" && op != "cobar") throw dsl_error({{1, 1, "semantic", "unknown operation '" + op + "'"}});
        outer.push_back(op);
        s = s.substr(p + 1, s.size() - p - 2);
    }
    if (s.empty() || s.find(')') != std::string::npos)
        throw dsl_error({{1, 1, "syntax", "bad object reference '" + text + "'"}});
    r.base = s;
    r.ops.assign(outer.rbegin(), outer.rend());
    return r;
}

const Structure* SpecDoc::find(const std::string& name) const {
    for (auto& s : structures)
        if (s.name == name) return &s;
    return nullptr;
}

const Structure& SpecDoc::get(const std::string& name) const {
    if (auto s = find(name)) return *s;
    throw std::out_of_range("no structure named '" + name + "'");
}

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { Ident, Int, String, Punct, End };

struct Token {
    Tok type;
    std::string text;
    int line, col;
};

bool ident_start(char c) { return std::isalpha((unsigned char)c) || c == '_'; }
bool ident_char(char c) { return std::isalnum((unsigned char)c) || c == '_' || c == '\''; }

std::vector<Token> lex(const std::string& s, std::vector<Diagnostic>& diags) {
    std::vector<Token> out;
    int line = 1, col = 1;
    size_t i = 0;
    auto adv = [&](size_t n = 1) {
        for (size_t k = 0; k < n && i < s.size(); ++k, ++i) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == '\n' || c == ' ' || c == '\t' || c == '\r') {
            adv();
            continue;
        }
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') adv();
            continue;
        }
        int l = line, cl = col;
        if (ident_start(c)) {
            size_t j = i;
            while (j < s.size() && ident_char(s[j])) ++j;
            out.push_back({Tok::Ident, s.substr(i, j - i), l, cl});
            adv(j - i);
        } else if (std::isdigit((unsigned char)c)) {
            size_t j = i;
            while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
            // vertex names like 1 are numbers; identifiers never start with a digit
            out.push_back({Tok::Int, s.substr(i, j - i), l, cl});
            adv(j - i);
        } else if (c == '"') {
            size_t j = i + 1;
            while (j < s.size() && s[j] != '"' && s[j] != '\n') ++j;
            if (j >= s.size() || s[j] != '"') {
                diags.push_back({l, cl, "lexical", "unterminated string"});
                adv(j - i);
                continue;
            }
            out.push_back({Tok::String, s.substr(i + 1, j - i - 1), l, cl});
            adv(j - i + 1);
        } else if (s.compare(i, 2, "->") == 0 || s.compare(i, 2, "..") == 0) {
            out.push_back({Tok::Punct, s.substr(i, 2), l, cl});
            adv(2);
        } else if (std::string(";:{}(),+-*/^=").find(c) != std::string::npos) {
            out.push_back({Tok::Punct, std::string(1, c), l, cl});
            adv();
        } else {
            std::string shown = std::isprint((unsigned char)c) ? std::string(1, c) : "byte " + std::to_string((unsigned char)c);
            diags.push_back({l, cl, "lexical", "unexpected character '" + shown + "'"});
            adv();
        }
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

// ---------------------------------------------------------------- values

constexpr size_t kMaxTerms = 100000;
constexpr int kMaxDepth = 200;

struct Val {
    bool num = true;
    mpq_class q = 0;
    Element e;
};

struct SyntaxError {
    Diagnostic d;
};

// the slot an expression lives in: the unit becomes e(v) there
struct Ctx {
    const Quiver* q = nullptr;
    Field f;
    int src = -1, dst = -1;
};

std::string word_text(const Quiver& q, const Word& w) {
    if (w.empty()) return "e(" + q.ring.vertices.at(w.v) + ")";
    std::string s;
    for (size_t i = 0; i < w.g.size(); ++i) s += (i ? "*" : "") + q.gens[w.g[i]].name;
    return s;
}

std::string coef_text(const Scalar& c, bool& neg) {
    mpq_class v = c.to_mpq();
    if (c.field().kind == Field::PrimeField && v > c.field().p / 2) v -= c.field().p;
    neg = v < 0;
    if (neg) v = -v;
    return v == 1 ? "" : v.get_str();
}

std::string expr_text(const Quiver& q, const Element& x) {
    if (x.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (auto& [w, c] : x.terms()) {
        bool neg = false;
        std::string k = coef_text(c, neg);
        s += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
        if (!k.empty()) s += k + "*";
        s += word_text(q, w);
        first = false;
    }
    return s;
}

std::string scalar_text(const Scalar& c) {
    bool neg = false;
    std::string k = coef_text(c, neg);
    return (neg ? "-" : "") + (k.empty() ? "1" : k);
}

// ---------------------------------------------------------------- parser

class Parser {
  public:
    Parser(const std::string& text, const std::map<std::string, long>& overrides)
        : overrides_(overrides) {
        toks_ = lex(text, diags_);
    }

    ParseResult run() {
        while (peek().type != Tok::End) {
            size_t before = pos_;
            depth_ = 0;
            try {
                statement();
            } catch (SyntaxError& e) {
                diags_.push_back(e.d);
                recover();
            }
            if (pos_ == before) ++pos_;  // always make progress
        }
        for (auto& [k, v] : overrides_)
            if (!seen_params_.count(k)) diags_.push_back({1, 1, "semantic", "unknown parameter '" + k + "'"});
        ParseResult r;
        r.diags = diags_;
        if (diags_.empty()) r.doc = std::move(doc_);
        return r;
    }

  private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    std::vector<Diagnostic> diags_;
    SpecDoc doc_;
    std::map<std::string, long> overrides_;
    std::set<std::string> seen_params_;
    bool seen_struct_ = false;
    int depth_ = 0;

    const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& next() {
        const Token& t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool is(const std::string& p, size_t k = 0) const {
        auto& t = peek(k);
        return (t.type == Tok::Punct || t.type == Tok::Ident) && t.text == p;
    }
    bool accept(const std::string& p) {
        if (!is(p)) return false;
        next();
        return true;
    }
    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        throw SyntaxError{{t.line, t.col, "syntax", msg}};
    }
    void semantic(const Token& t, const std::string& msg) { diags_.push_back({t.line, t.col, "semantic", msg}); }
    std::string describe(const Token& t) const { return t.type == Tok::End ? "end of input" : "'" + t.text + "'"; }
    const Token& expect(const std::string& p) {
        if (!is(p)) fail(peek(), "expected '" + p + "' but found " + describe(peek()));
        return next();
    }
    const Token& ident(const std::string& what) {
        if (peek().type != Tok::Ident) fail(peek(), "expected " + what + " but found " + describe(peek()));
        return next();
    }
    // vertex names may be numbers
    const Token& name_or_int(const std::string& what) {
        if (peek().type != Tok::Ident && peek().type != Tok::Int)
            fail(peek(), "expected " + what + " but found " + describe(peek()));
        return next();
    }

    void recover() {
        int nest = 0;
        while (peek().type != Tok::End) {
            if (is("{")) ++nest;
            if (is("}")) {
                if (nest == 0) return;  // let the enclosing block close
                --nest;
                if (nest == 0) {
                    next();
                    return;
                }
            }
            if (is(";") && nest == 0) {
                next();
                return;
            }
            next();
        }
    }

    // ---- expressions

    Val to_elem(Val v, const Ctx& c, const Token& at) {
        if (!v.num) return v;
        if (!c.q) fail(at, "algebra expression where a number is expected");
        int vert = -1;
        if (c.q->nv() == 1) vert = 0;
        else if (c.src >= 0 && c.src == c.dst) vert = c.src;
        if (vert < 0 && v.q != 0) throw SyntaxError{{at.line, at.col, "semantic", "a scalar needs a loop slot here; write e(v)"}};
        Val r;
        r.num = false;
        r.e = Element(c.f);
        if (v.q != 0) r.e.add(Word::idem(vert), Scalar(c.f, v.q));
        return r;
    }

    Val add(Val a, Val b, const Ctx& c, const Token& at, bool minus) {
        if (a.num && b.num) {
            if (minus) a.q -= b.q;
            else a.q += b.q;
            return a;
        }
        a = to_elem(a, c, at);
        b = to_elem(b, c, at);
        a.e.add(b.e, Scalar(c.f, minus ? -1 : 1));
        return a;
    }

    Val mult(Val a, Val b, const Ctx& c, const Token& at) {
        if (a.num && b.num) {
            a.q *= b.q;
            return a;
        }
        if (a.num || b.num) {
            Val& n = a.num ? a : b;
            Val& e = a.num ? b : a;
            e.e = e.e * Scalar(c.f, n.q);
            return e;
        }
        Val r;
        r.num = false;
        r.e = Element(c.f);
        if (a.e.size() * b.e.size() > kMaxTerms) throw SyntaxError{{at.line, at.col, "semantic", "expression too large"}};
        for (auto& [x, p] : a.e.terms())
            for (auto& [y, s] : b.e.terms()) {
                auto w = concat(*c.q, x, y);
                if (!w)
                    throw SyntaxError{{at.line, at.col, "semantic",
                                       "factors " + word_text(*c.q, x) + " and " + word_text(*c.q, y) + " do not compose"}};
                r.e.add(*w, p * s);
            }
        return r;
    }

    Val expr(const Ctx& c) {
        if (++depth_ > kMaxDepth) fail(peek(), "expression nested too deeply");
        Val v;
        bool neg = false;
        const Token& first = peek();
        if (accept("-")) neg = true;
        else accept("+");
        v = term(c);
        if (neg) v = mult(Val{true, -1, {}}, v, c, first);
        while (is("+") || is("-")) {
            const Token& op = next();
            v = add(v, term(c), c, op, op.text == "-");
        }
        --depth_;
        return v;
    }

    bool starts_factor() const {
        auto& t = peek();
        // keywords that may follow an expression end it
        if (t.type == Tok::Ident) return t.text != "len" && t.text != "deg" && t.text != "weight";
        return t.type == Tok::Int || is("(");
    }

    Val term(const Ctx& c) {
        Val v = power(c);
        for (;;) {
            if (is("*")) {
                const Token& op = next();
                v = mult(v, power(c), c, op);
            } else if (is("/")) {
                const Token& op = next();
                Val d = power(c);
                if (!d.num) fail(op, "division by an algebra element");
                if (d.q == 0) throw SyntaxError{{op.line, op.col, "semantic", "division by zero"}};
                if (v.num) v.q /= d.q;
                else v.e = v.e * (Scalar(c.f, mpq_class(1)) / Scalar(c.f, d.q));
            } else if (starts_factor()) {
                const Token& at = peek();
                v = mult(v, power(c), c, at);
            } else {
                return v;
            }
        }
    }

    Val power(const Ctx& c) {
        Val b = atom(c);
        if (!is("^")) return b;
        const Token& op = next();
        Val e = atom(Ctx{nullptr, c.f});
        if (!e.num || e.q.get_den() != 1) fail(op, "exponent must be an integer");
        if (abs(e.q) > 4096) throw SyntaxError{{op.line, op.col, "semantic", "exponent too large"}};
        long n = e.q.get_num().get_si();
        if (b.num) {
            if (n < 0 && b.q == 0) throw SyntaxError{{op.line, op.col, "semantic", "division by zero"}};
            mpq_class r = 1, base = n < 0 ? 1 / b.q : b.q;
            for (long k = 0; k < std::labs(n); ++k) r *= base;
            b.q = r;
            return b;
        }
        if (n < 1 || n > 16) throw SyntaxError{{op.line, op.col, "semantic", "element powers need 1 <= n <= 16"}};
        Val r = b;
        for (long k = 1; k < n; ++k) r = mult(r, b, c, op);
        return r;
    }

    Val atom(const Ctx& c) {
        const Token& t = peek();
        if (accept("(")) {
            Val v = expr(c);
            expect(")");
            return v;
        }
        if (accept("-")) {
            if (++depth_ > kMaxDepth) fail(t, "expression nested too deeply");
            Val v = atom(c);
            --depth_;
            return mult(Val{true, -1, {}}, v, c, t);
        }
        if (t.type == Tok::Int) {
            next();
            Val v;
            v.q = mpq_class(mpz_class(t.text));
            return v;
        }
        if (t.type == Tok::Ident) {
            next();
            if (t.text == "e" && is("(")) {
                next();
                const Token& vt = name_or_int("vertex");
                expect(")");
                if (!c.q) fail(t, "algebra expression where a number is expected");
                int v = c.q->ring.index(vt.text);
                if (v < 0) throw SyntaxError{{vt.line, vt.col, "semantic", "unknown vertex '" + vt.text + "'"}};
                Val r;
                r.num = false;
                r.e = Element::word(c.f, Word::idem(v));
                return r;
            }
            if (auto it = doc_.params.find(t.text); it != doc_.params.end()) {
                Val v;
                v.q = it->second;
                return v;
            }
            if (!c.q) throw SyntaxError{{t.line, t.col, "semantic", "unknown parameter '" + t.text + "'"}};
            int g = c.q->find(t.text);
            if (g < 0) throw SyntaxError{{t.line, t.col, "semantic", "unknown generator '" + t.text + "'"}};
            Val r;
            r.num = false;
            r.e = Element::word(c.f, Word::letter(g));
            return r;
        }
        fail(t, "expected an expression but found " + describe(t));
    }

    long int_expr() {
        const Token& at = peek();
        Val v = expr(Ctx{nullptr, doc_.field});
        if (v.q.get_den() != 1 || !v.q.get_num().fits_slong_p())
            throw SyntaxError{{at.line, at.col, "semantic", "expected an integer"}};
        long n = v.q.get_num().get_si();
        if (n > 1000000 || n < -1000000) throw SyntaxError{{at.line, at.col, "semantic", "integer out of range"}};
        return n;
    }

    Element elem_expr(const Ctx& c) {
        const Token& at = peek();
        Val v = expr(c);
        return to_elem(v, c, at).e;
    }

    // ---- checks on parsed elements

    bool check_slot(const Quiver& q, const Element& x, int src, int dst, int degree, const Token& at,
                    const std::string& what) {
        for (auto& [w, c] : x.terms()) {
            if (word_src(q, w) != src || word_dst(q, w) != dst) {
                semantic(at, what + ": term " + word_text(q, w) + " has endpoints " + q.ring.vertices[word_src(q, w)] + " -> " +
                                 q.ring.vertices[word_dst(q, w)] + ", expected " + q.ring.vertices[src] + " -> " +
                                 q.ring.vertices[dst]);
                return false;
            }
            if (word_degree(q, w) != degree) {
                semantic(at, what + ": term " + word_text(q, w) + " has degree " + std::to_string(word_degree(q, w)) +
                                 ", expected " + std::to_string(degree));
                return false;
            }
        }
        return true;
    }

    // ---- statements

    void statement() {
        const Token& t = peek();
        if (t.type != Tok::Ident) fail(t, "expected a statement but found " + describe(t));
        const std::string& kw = t.text;
        if (kw == "title") {
            next();
            if (peek().type != Tok::String) fail(peek(), "expected a string");
            doc_.title = next().text;
            expect(";");
        } else if (kw == "field") {
            next();
            const Token& f = name_or_int("field name");
            if (seen_struct_) semantic(f, "field must be declared before any structure");
            try {
                doc_.field = Field::parse(f.text);
            } catch (std::exception& e) {
                semantic(f, e.what());
            }
            expect(";");
        } else if (kw == "param") {
            next();
            const Token& n = ident("parameter name");
            expect("=");
            long v = int_expr();
            expect(";");
            if (doc_.params.count(n.text)) semantic(n, "parameter '" + n.text + "' declared twice");
            if (auto it = overrides_.find(n.text); it != overrides_.end()) v = it->second;
            seen_params_.insert(n.text);
            doc_.params[n.text] = v;
        } else if (kw == "window") {
            next();
            DocWindow w;
            w.dmin = (int)int_expr();
            expect("..");
            w.dmax = (int)int_expr();
            if (accept("len")) {
                const Token& at = peek();
                long n = int_expr();
                if (n < 0) semantic(at, "max length must be nonnegative");
                w.max_len = (size_t)std::max(0L, n);
            }
            expect(";");
            if (w.dmin > w.dmax) semantic(t, "window lower bound exceeds upper bound");
            doc_.window = w;
        } else if (kw == "dga" || kw == "algebra" || kw == "coalgebra") {
            structure();
        } else if (kw == "twist") {
            twist();
        } else if (kw == "map") {
            map_block();
        } else {
            fail(t, "unknown statement '" + kw + "'");
        }
    }

    void structure() {
        const Token& kw = next();
        seen_struct_ = true;
        Structure s;
        s.kind = kw.text == "dga" ? StructKind::DGA : kw.text == "algebra" ? StructKind::Algebra : StructKind::Coalgebra;
        const Token& n = ident("structure name");
        s.name = n.text;
        if (doc_.find(s.name)) semantic(n, "structure '" + s.name + "' declared twice");
        expect("{");
        while (!is("}") && peek().type != Tok::End) {
            size_t before = pos_;
            depth_ = 0;
            try {
                body(s);
            } catch (SyntaxError& e) {
                diags_.push_back(e.d);
                recover();
            }
            if (pos_ == before) next();
        }
        expect("}");
        doc_.structures.push_back(std::move(s));
    }

    void body(Structure& s) {
        const Token& t = ident("a declaration");
        const std::string& kw = t.text;
        Quiver& q = s.q;
        Ctx c{&q, doc_.field};
        auto gen_ref = [&](const std::string& what) {
            const Token& g = ident(what);
            int i = q.find(g.text);
            if (i < 0) throw SyntaxError{{g.line, g.col, "semantic", "unknown generator '" + g.text + "'"}};
            return std::pair<int, const Token*>(i, &g);
        };
        if (kw == "vertex") {
            const Token& v = name_or_int("vertex name");
            char dec = '-';
            if (accept("+")) dec = '+';
            else accept("-");
            expect(";");
            if (!q.gens.empty()) semantic(v, "vertices must be declared before generators");
            if (q.ring.index(v.text) >= 0) semantic(v, "vertex '" + v.text + "' declared twice");
            q.ring.vertices.push_back(v.text);
            q.ring.decoration.push_back(dec);
        } else if (kw == "rule") {
            const Token& r = ident("left or right");
            expect(";");
            if (r.text == "left") s.rule = Leibniz::Left;
            else if (r.text == "right") s.rule = Leibniz::Right;
            else semantic(r, "unknown Leibniz rule '" + r.text + "' (left, right)");
        } else if (kw == "gen") {
            const Token& g = ident("generator name");
            expect(":");
            const Token& a = name_or_int("source vertex");
            expect("->");
            const Token& b = name_or_int("target vertex");
            expect("deg");
            long deg = int_expr();
            std::optional<int> weight;
            if (accept("weight")) weight = (int)int_expr();
            expect(";");
            int sa = q.ring.index(a.text), sb = q.ring.index(b.text);
            if (sa < 0) semantic(a, "unknown vertex '" + a.text + "'");
            if (sb < 0) semantic(b, "unknown vertex '" + b.text + "'");
            if (q.find(g.text) >= 0) semantic(g, "generator '" + g.text + "' declared twice");
            else if (g.text == "e") semantic(g, "'e' is reserved for idempotents");
            else if (doc_.params.count(g.text)) semantic(g, "'" + g.text + "' is a parameter");
            else if (sa >= 0 && sb >= 0) q.gens.push_back({g.text, sa, sb, (int)deg, weight});
        } else if (kw == "d") {
            auto [g, at] = gen_ref("generator");
            expect("=");
            if (s.kind != StructKind::DGA) semantic(t, "'d' belongs in a dga block");
            auto& gs = q.gens[g];
            c.src = gs.src;
            c.dst = gs.dst;
            Element x = elem_expr(c);
            expect(";");
            if (s.d.count(g)) semantic(*at, "d " + gs.name + " given twice");
            else if (check_slot(q, x, gs.src, gs.dst, gs.degree + 1, *at, "d " + gs.name) && !x.is_zero()) s.d[g] = x;
        } else if (kw == "m") {
            expect("(");
            Word in;
            std::vector<const Token*> names;
            do {
                auto [g, at] = gen_ref("generator");
                in.g.push_back(g);
                names.push_back(at);
            } while (accept(","));
            expect(")");
            expect("=");
            if (s.kind != StructKind::Algebra) semantic(t, "'m' belongs in an algebra block");
            for (size_t i = 0; i + 1 < in.g.size(); ++i)
                if (q.gens[in.g[i]].dst != q.gens[in.g[i + 1]].src)
                    throw SyntaxError{{names[i + 1]->line, names[i + 1]->col, "semantic", "inputs do not compose"}};
            c.src = word_src(q, in);
            c.dst = word_dst(q, in);
            Element x = elem_expr(c);
            expect(";");
            int deg = word_degree(q, in) + 2 - (int)in.len();
            if (s.ops.count(in)) semantic(t, "m(" + word_text(q, in) + ") given twice");
            else if (check_slot(q, x, c.src, c.dst, deg, t, "m(" + word_text(q, in) + ")") && !x.is_zero()) s.ops[in] = x;
        } else if (kw == "delta") {
            auto [g, at] = gen_ref("generator");
            expect("=");
            if (s.kind != StructKind::Coalgebra) semantic(t, "'delta' belongs in a coalgebra block");
            auto& gs = q.gens[g];
            c.src = gs.src;
            c.dst = gs.dst;
            Element x = elem_expr(c);
            expect(";");
            bool ok = true;
            for (auto& [w, k] : x.terms()) {
                if (w.empty()) {
                    semantic(*at, "delta " + gs.name + ": counit terms are implicit");
                    ok = false;
                    break;
                }
                int want = gs.degree + 2 - (int)w.len();
                if (word_src(q, w) != gs.src || word_dst(q, w) != gs.dst || word_degree(q, w) != want) {
                    ok = check_slot(q, Element::word(doc_.field, w), gs.src, gs.dst, want, *at, "delta " + gs.name);
                    if (!ok) break;
                }
            }
            if (s.delta.count(g)) semantic(*at, "delta " + gs.name + " given twice");
            else if (ok && !x.is_zero()) s.delta[g] = x;
        } else if (kw == "aug") {
            auto [g, at] = gen_ref("generator");
            expect("=");
            const Token& vt = peek();
            Val v = expr(Ctx{nullptr, doc_.field});
            expect(";");
            if (!v.num) semantic(vt, "augmentation values are scalars");
            auto& gs = q.gens[g];
            if (gs.src != gs.dst || gs.degree != 0) semantic(*at, "augmentation on " + gs.name + ", which is not a degree-0 loop");
            else if (v.q != 0) s.aug[g] = Scalar(doc_.field, v.q);
        } else if (kw == "rewrite") {
            const Token& lt = peek();
            Element lhs = elem_expr(c);
            expect("=");
            if (lhs.size() != 1 || lhs.terms().begin()->first.empty() || !lhs.terms().begin()->second.is_one())
                throw SyntaxError{{lt.line, lt.col, "semantic", "rewrite left side must be a single word"}};
            Word w = lhs.terms().begin()->first;
            c.src = word_src(q, w);
            c.dst = word_dst(q, w);
            Element rhs = elem_expr(c);
            expect(";");
            if (check_slot(q, rhs, c.src, c.dst, word_degree(q, w), lt, "rewrite " + word_text(q, w)))
                s.rewrites.push_back({w, rhs});
        } else if (kw == "probe") {
            const Token& n = ident("probe name");
            expect("=");
            Element x = elem_expr(c);
            expect(";");
            if (s.probes.count(n.text)) semantic(n, "probe '" + n.text + "' given twice");
            else s.probes[n.text] = x;
        } else {
            fail(t, "unknown declaration '" + kw + "'");
        }
    }

    ObjRef objref() {
        const Token& t = ident("structure name");
        if ((t.text == "dual" || t.text == "cobar") && is("(")) {
            next();
            ObjRef inner = objref();
            expect(")");
            inner.ops.push_back(t.text);
            return inner;
        }
        if (!doc_.find(t.text)) throw SyntaxError{{t.line, t.col, "semantic", "unknown structure '" + t.text + "'"}};
        return ObjRef{t.text, {}};
    }

    std::optional<Resolved> try_resolve(const ObjRef& r, const Token& at) {
        try {
            return resolve(doc_, r);
        } catch (std::exception& e) {
            semantic(at, std::string("cannot build ") + r.str() + ": " + e.what());
            return std::nullopt;
        }
    }

    template <class F>
    void assignments(const std::string& lead, F on) {
        expect("{");
        while (!is("}") && peek().type != Tok::End) {
            size_t before = pos_;
            depth_ = 0;
            try {
                if (!lead.empty()) {
                    const Token& k = ident("'" + lead + "'");
                    if (k.text != lead) fail(k, "expected '" + lead + "'");
                }
                const Token& g = ident("generator");
                expect("=");
                on(g);
                expect(";");
            } catch (SyntaxError& e) {
                diags_.push_back(e.d);
                recover();
            }
            if (pos_ == before) next();
        }
        expect("}");
    }

    void twist() {
        const Token& kw = next();
        const Token& st = ident("source coalgebra");
        DocTwist tw;
        tw.source = st.text;
        expect("->");
        const Token& tt = peek();
        tw.target = objref();
        if (accept("convention")) {
            const Token& cv = ident("convention");
            try {
                tw.conv = parse_convention(cv.text);
            } catch (std::exception& e) {
                semantic(cv, e.what());
            }
        }
        const Structure* src = doc_.find(tw.source);
        if (!src) semantic(st, "unknown structure '" + tw.source + "'");
        else if (src->kind != StructKind::Coalgebra) semantic(st, "twist source must be a coalgebra");
        auto tgt = try_resolve(tw.target, tt);
        if (tgt && tgt->kind == StructKind::Coalgebra) {
            semantic(tt, "twist target must be an algebra");
            tgt.reset();
        }
        if (src && tgt && src->q.nv() != tgt->quiver().nv()) {
            semantic(tt, "source and target have different vertex sets");
            tgt.reset();
        }
        bool usable = src && src->kind == StructKind::Coalgebra && tgt;
        assignments("t", [&](const Token& g) {
            if (!usable) {
                expr(Ctx{nullptr, doc_.field});  // skip
                return;
            }
            int i = src->q.find(g.text);
            if (i < 0) throw SyntaxError{{g.line, g.col, "semantic", "unknown generator '" + g.text + "'"}};
            auto& gs = src->q.gens[i];
            Ctx c{&tgt->quiver(), doc_.field, gs.src, gs.dst};
            Element x = elem_expr(c);
            if (tw.values.count(i)) semantic(g, "t(" + gs.name + ") given twice");
            else if (check_slot(tgt->quiver(), x, gs.src, gs.dst, gs.degree + 1, g, "t(" + gs.name + ")") && !x.is_zero())
                tw.values[i] = x;
        });
        (void)kw;
        doc_.twists.push_back(std::move(tw));
    }

    void map_block() {
        next();
        DocMap m;
        const Token& n = ident("map name");
        m.name = n.text;
        expect(":");
        const Token& sa = peek();
        m.src = objref();
        expect("->");
        const Token& ta = peek();
        m.tgt = objref();
        auto src = try_resolve(m.src, sa);
        auto tgt = try_resolve(m.tgt, ta);
        if (src && tgt && src->quiver().nv() != tgt->quiver().nv()) {
            semantic(ta, "source and target have different vertex sets");
            tgt.reset();
        }
        for (auto& x : doc_.maps)
            if (x.name == m.name) semantic(n, "map '" + m.name + "' declared twice");
        assignments("", [&](const Token& g) {
            if (!src || !tgt) {
                expr(Ctx{nullptr, doc_.field});
                return;
            }
            const Quiver& sq = src->quiver();
            int i = sq.find(g.text);
            if (i < 0) throw SyntaxError{{g.line, g.col, "semantic", "unknown generator '" + g.text + "'"}};
            auto& gs = sq.gens[i];
            Ctx c{&tgt->quiver(), doc_.field, gs.src, gs.dst};
            Element x = elem_expr(c);
            if (m.images.count(i)) semantic(g, "image of " + gs.name + " given twice");
            else if (check_slot(tgt->quiver(), x, gs.src, gs.dst, gs.degree, g, "image of " + gs.name) && !x.is_zero())
                m.images[i] = x;
        });
        doc_.maps.push_back(std::move(m));
    }
};

bool same_quiver(const Quiver& a, const Quiver& b) {
    return a.ring.vertices == b.ring.vertices && a.ring.decoration == b.ring.decoration && a.gens == b.gens;
}

}  // namespace

ParseResult parse_doc(const std::string& text, const std::map<std::string, long>& overrides) {
    try {
        return Parser(text, overrides).run();
    } catch (std::exception& e) {
        // last line of defence; the parser reports through diagnostics
        ParseResult r;
        r.diags.push_back({0, 0, "semantic", e.what()});
        return r;
    }
}

SpecDoc parse(const std::string& text, const std::map<std::string, long>& overrides) {
    auto r = parse_doc(text, overrides);
    if (!r.doc) throw dsl_error(r.diags);
    return std::move(*r.doc);
}

std::string serialize(const SpecDoc& doc) {
    std::ostringstream o;
    if (!doc.title.empty()) o << "title \"" << doc.title << "\";\n";
    o << "field " << doc.field.name() << ";\n";
    for (auto& [k, v] : doc.params) o << "param " << k << " = " << v << ";\n";
    if (doc.window) {
        o << "window " << doc.window->dmin << " .. " << doc.window->dmax;
        if (doc.window->max_len) o << " len " << *doc.window->max_len;
        o << ";\n";
    }
    for (auto& s : doc.structures) {
        const Quiver& q = s.q;
        o << "\n" << kind_name(s.kind) << " " << s.name << " {\n";
        for (int v = 0; v < q.nv(); ++v) o << "  vertex " << q.ring.vertices[v] << " " << q.ring.decoration[v] << ";\n";
        if (s.kind == StructKind::DGA) o << "  rule " << (s.rule == Leibniz::Left ? "left" : "right") << ";\n";
        for (auto& g : q.gens) {
            o << "  gen " << g.name << " : " << q.ring.vertices[g.src] << " -> " << q.ring.vertices[g.dst] << " deg "
              << g.degree;
            if (g.weight) o << " weight " << *g.weight;
            o << ";\n";
        }
        for (auto& [g, x] : s.d) o << "  d " << q.gens[g].name << " = " << expr_text(q, x) << ";\n";
        for (auto& [w, x] : s.ops) {
            o << "  m(";
            for (size_t i = 0; i < w.g.size(); ++i) o << (i ? ", " : "") << q.gens[w.g[i]].name;
            o << ") = " << expr_text(q, x) << ";\n";
        }
        for (auto& [g, x] : s.delta) o << "  delta " << q.gens[g].name << " = " << expr_text(q, x) << ";\n";
        for (auto& [g, c] : s.aug) o << "  aug " << q.gens[g].name << " = " << scalar_text(c) << ";\n";
        for (auto& r : s.rewrites) o << "  rewrite " << word_text(q, r.lhs) << " = " << expr_text(q, r.rhs) << ";\n";
        for (auto& [n, x] : s.probes) o << "  probe " << n << " = " << expr_text(q, x) << ";\n";
        o << "}\n";
    }
    for (size_t i = 0; i < doc.twists.size(); ++i) {
        auto& t = doc.twists[i];
        const Quiver& sq = doc.get(t.source).q;
        auto tgt = resolve(doc, t.target);
        o << "\ntwist " << t.source << " -> " << t.target.str() << " convention " << convention_name(t.conv) << " {\n";
        for (auto& [g, x] : t.values) o << "  t " << sq.gens[g].name << " = " << expr_text(tgt.quiver(), x) << ";\n";
        o << "}\n";
    }
    for (auto& m : doc.maps) {
        auto src = resolve(doc, m.src), tgt = resolve(doc, m.tgt);
        o << "\nmap " << m.name << " : " << m.src.str() << " -> " << m.tgt.str() << " {\n";
        for (auto& [g, x] : m.images)
            o << "  " << src.quiver().gens[g].name << " = " << expr_text(tgt.quiver(), x) << ";\n";
        o << "}\n";
    }
    return o.str();
}

bool same_structure(const SpecDoc& a, const SpecDoc& b, std::string* why) {
    auto no = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    if (a.title != b.title) return no("title");
    if (a.field != b.field) return no("field");
    if (a.params != b.params) return no("params");
    if (a.window != b.window) return no("window");
    if (a.structures.size() != b.structures.size()) return no("structure count");
    for (size_t i = 0; i < a.structures.size(); ++i) {
        auto &x = a.structures[i], &y = b.structures[i];
        std::string n = "structure " + x.name + ": ";
        if (x.name != y.name || x.kind != y.kind) return no(n + "name or kind");
        if (!same_quiver(x.q, y.q)) return no(n + "quiver");
        if (x.kind == StructKind::DGA && x.rule != y.rule) return no(n + "rule");
        if (x.d != y.d || x.ops != y.ops || x.delta != y.delta) return no(n + "tables");
        if (x.aug != y.aug) return no(n + "augmentation");
        if (x.probes != y.probes) return no(n + "probes");
        if (x.rewrites.size() != y.rewrites.size()) return no(n + "rewrites");
        for (size_t j = 0; j < x.rewrites.size(); ++j)
            if (x.rewrites[j].lhs != y.rewrites[j].lhs || x.rewrites[j].rhs != y.rewrites[j].rhs) return no(n + "rewrites");
    }
    if (a.twists.size() != b.twists.size()) return no("twist count");
    for (size_t i = 0; i < a.twists.size(); ++i) {
        auto &x = a.twists[i], &y = b.twists[i];
        if (x.source != y.source || !(x.target == y.target) || x.conv != y.conv || x.values != y.values) return no("twist");
    }
    if (a.maps.size() != b.maps.size()) return no("map count");
    for (size_t i = 0; i < a.maps.size(); ++i) {
        auto &x = a.maps[i], &y = b.maps[i];
        if (x.name != y.name || !(x.src == y.src) || !(x.tgt == y.tgt) || x.images != y.images) return no("map " + x.name);
    }
    return true;
}

// ---------------------------------------------------------------- resolution

static Element in_field(const Element& x, Field f) { return x.field() == f ? x : x.to_field(f); }

FreeDGA to_dga(const Structure& s, Field f) {
    if (s.kind != StructKind::DGA) throw algebra_error(s.name + " is not a dga");
    FreeDGA a;
    a.q = s.q;
    a.f = f;
    a.d.rule = s.rule;
    for (size_t g = 0; g < s.q.gens.size(); ++g) a.d.images[(int)g] = Element(f);
    for (auto& [g, x] : s.d) a.d.images[g] = in_field(x, f);
    for (auto& [g, c] : s.aug) a.augmentation[g] = Scalar(f, c.to_mpq());
    return a;
}

AInfAlg to_algebra(const Structure& s, Field f) {
    if (s.kind != StructKind::Algebra) throw algebra_error(s.name + " is not an algebra");
    AInfAlg a;
    a.q = s.q;
    a.f = f;
    for (auto& [w, x] : s.ops) a.ops[w] = in_field(x, f);
    for (auto& [g, c] : s.aug) a.augmentation[g] = Scalar(f, c.to_mpq());
    return a;
}

AInfCoalg to_coalgebra(const Structure& s, Field f) {
    if (s.kind != StructKind::Coalgebra) throw algebra_error(s.name + " is not a coalgebra");
    AInfCoalg c;
    c.q = s.q;
    c.f = f;
    for (auto& [g, x] : s.delta) c.delta[g] = in_field(x, f);
    return c;
}

const Quiver& Resolved::quiver() const {
    if (dga) return dga->q;
    if (alg) return alg->q;
    return coalg->q;
}

Resolved resolve(const SpecDoc& doc, const ObjRef& r, std::optional<Field> fo) {
    Field f = fo.value_or(doc.field);
    const Structure& s = doc.get(r.base);
    Resolved x{s.kind, {}, {}, {}};
    if (s.kind == StructKind::DGA) x.dga = to_dga(s, f);
    else if (s.kind == StructKind::Algebra) x.alg = to_algebra(s, f);
    else x.coalg = to_coalgebra(s, f);
    for (auto& op : r.ops) {
        if (op == "dual") {
            if (x.alg) {
                x.coalg = dualize(*x.alg, Side::Left);
                x.alg.reset();
                x.kind = StructKind::Coalgebra;
            } else if (x.coalg) {
                x.alg = dualize(*x.coalg, Side::Left);
                x.coalg.reset();
                x.kind = StructKind::Algebra;
            } else {
                throw algebra_error("dual of a free dga is not supported");
            }
        } else if (op == "cobar") {
            if (!x.coalg) throw algebra_error("cobar needs a coalgebra");
            x.dga = cobar(*x.coalg).alg;
            x.coalg.reset();
            x.kind = StructKind::DGA;
        } else {
            throw algebra_error("unknown operation " + op);
        }
    }
    return x;
}

Twist doc_twist(const SpecDoc& doc, size_t i, std::optional<Field> fo) {
    Field f = fo.value_or(doc.field);
    const DocTwist& dt = doc.twists.at(i);
    Twist t;
    t.src = to_coalgebra(doc.get(dt.source), f);
    auto r = resolve(doc, dt.target, f);
    t.tgt = r.dga ? dg_target(*r.dga) : dg_target(*r.alg);
    for (auto& [g, x] : dt.values) t.t[g] = in_field(x, f);
    t.conv = dt.conv;
    return t;
}

std::string doc_json(const SpecDoc& doc) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["title"] = doc.title;
    j["field"] = doc.field.name();
    j["params"] = doc.params;
    if (doc.window) {
        j["window"] = {{"dmin", doc.window->dmin}, {"dmax", doc.window->dmax}};
        if (doc.window->max_len) j["window"]["max_len"] = *doc.window->max_len;
    }
    j["structures"] = ordered_json::array();
    for (auto& s : doc.structures) {
        const Quiver& q = s.q;
        ordered_json o;
        o["name"] = s.name;
        o["kind"] = kind_name(s.kind);
        o["vertices"] = ordered_json::array();
        for (int v = 0; v < q.nv(); ++v)
            o["vertices"].push_back({{"name", q.ring.vertices[v]}, {"decoration", std::string(1, q.ring.decoration[v])}});
        o["generators"] = ordered_json::array();
        for (auto& g : q.gens) {
            ordered_json x = {{"name", g.name}, {"src", q.ring.vertices[g.src]}, {"dst", q.ring.vertices[g.dst]}, {"degree", g.degree}};
            if (g.weight) x["weight"] = *g.weight;
            o["generators"].push_back(x);
        }
        if (s.kind == StructKind::DGA) {
            o["rule"] = s.rule == Leibniz::Left ? "left" : "right";
            o["d"] = ordered_json::object();
            for (auto& [g, x] : s.d) o["d"][q.gens[g].name] = expr_text(q, x);
        }
        if (s.kind == StructKind::Algebra) {
            o["m"] = ordered_json::array();
            for (auto& [w, x] : s.ops) {
                std::vector<std::string> in;
                for (int g : w.g) in.push_back(q.gens[g].name);
                o["m"].push_back({{"inputs", in}, {"value", expr_text(q, x)}});
            }
        }
        if (s.kind == StructKind::Coalgebra) {
            o["delta"] = ordered_json::object();
            for (auto& [g, x] : s.delta) o["delta"][q.gens[g].name] = expr_text(q, x);
        }
        if (!s.aug.empty()) {
            o["aug"] = ordered_json::object();
            for (auto& [g, c] : s.aug) o["aug"][q.gens[g].name] = scalar_text(c);
        }
        for (auto& r : s.rewrites) o["rewrites"].push_back({{"lhs", word_text(q, r.lhs)}, {"rhs", expr_text(q, r.rhs)}});
        for (auto& [n, x] : s.probes) o["probes"][n] = expr_text(q, x);
        j["structures"].push_back(o);
    }
    for (auto& t : doc.twists) {
        auto tq = resolve(doc, t.target).quiver();
        const Quiver& sq = doc.get(t.source).q;
        ordered_json o = {{"source", t.source}, {"target", t.target.str()}, {"convention", convention_name(t.conv)}};
        o["values"] = ordered_json::object();
        for (auto& [g, x] : t.values) o["values"][sq.gens[g].name] = expr_text(tq, x);
        j["twists"].push_back(o);
    }
    for (auto& m : doc.maps) {
        auto sq = resolve(doc, m.src).quiver();
        auto tq = resolve(doc, m.tgt).quiver();
        ordered_json o = {{"name", m.name}, {"source", m.src.str()}, {"target", m.tgt.str()}};
        o["images"] = ordered_json::object();
        for (auto& [g, x] : m.images) o["images"][sq.gens[g].name] = expr_text(tq, x);
        j["maps"].push_back(o);
    }
    return j.dump(2);
}

}  // namespace kk
