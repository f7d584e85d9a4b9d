#include "koszulkit/ainfty.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace kk {

static Scalar sgn(Field f, long e) { return Scalar(f, (e % 2 == 0) ? 1 : -1); }

Element AInfAlg::m(const std::vector<Word>& in) const {
    Element r(f);
    size_t n = in.size();
    bool has_unit = std::any_of(in.begin(), in.end(), [](const Word& w) { return w.empty(); });
    if (has_unit) {
        if (n != 2) return r;  // m1(1) = 0, higher m_i kill 1
        const Word &a = in[0], &b = in[1];
        if (a.empty() && word_src(q, b) == a.v) r.add(b, Scalar(f, 1));
        else if (b.empty() && !a.empty() && word_dst(q, a) == b.v) r.add(a, Scalar(f, 1));
        return r;
    }
    Word w;
    for (auto& x : in) {
        if (!w.g.empty() && q.gens[w.g.back()].dst != q.gens[x.g.front()].src) return r;
        w.g.insert(w.g.end(), x.g.begin(), x.g.end());
    }
    auto it = ops.find(w);
    return it == ops.end() ? r : it->second;
}

int AInfAlg::max_arity() const {
    int m = 0;
    for (auto& [w, v] : ops) m = std::max(m, (int)w.len());
    return m;
}

void AInfAlg::set(const std::vector<std::string>& inputs, const Element& out) {
    Word w;
    for (auto& s : inputs) w.g.push_back(q.gen(s));
    ops[w] = out;
}

Element AInfCoalg::delta_i(int gen, size_t i) const {
    Element r(f);
    auto it = delta.find(gen);
    if (it == delta.end()) return r;
    for (auto& [w, c] : it->second.terms())
        if (w.len() == i) r.add(w, c);
    return r;
}

int AInfCoalg::max_arity() const {
    int m = 0;
    for (auto& [g, v] : delta) m = std::max(m, (int)v.max_len());
    return m;
}

std::optional<std::vector<int>> AInfCoalg::conilpotency_order() const {
    // Kahn topological sort on "appears in Delta(c)" edges
    int n = (int)q.gens.size();
    std::vector<std::set<int>> deps(n);
    for (auto& [g, v] : delta)
        for (auto& [w, c] : v.terms())
            for (int x : w.g) deps[g].insert(x);
    for (int g = 0; g < n; ++g)
        if (deps[g].count(g)) return std::nullopt;
    std::vector<int> order, indeg(n, 0);
    std::vector<std::vector<int>> users(n);
    for (int g = 0; g < n; ++g)
        for (int x : deps[g]) users[x].push_back(g), indeg[g]++;
    std::set<int> ready;
    for (int g = 0; g < n; ++g)
        if (!indeg[g]) ready.insert(g);
    while (!ready.empty()) {
        int g = *ready.begin();
        ready.erase(ready.begin());
        order.push_back(g);
        for (int u : users[g])
            if (--indeg[u] == 0) ready.insert(u);
    }
    if ((int)order.size() != n) return std::nullopt;
    return order;
}

Element FreeDGA::m1(const Element& x) const {
    Element r(f);
    for (auto& [w, c] : x.terms()) {
        Element dw = apply_derivation(q, d, w, f);
        if (d.rule == Leibniz::Left) dw = dw * sgn(f, word_degree(q, w));
        r.add(dw, c);
    }
    return r;
}

Element FreeDGA::m2(const Element& a2, const Element& a1) const {
    Element r(f);
    for (auto& [w, c] : a1.terms()) r.add(mul(q, a2, Element(f, w, c)), sgn(f, word_degree(q, w)));
    return r;
}

void validate_alg(const AInfAlg& a) {
    for (auto& [w, out] : a.ops) {
        if (w.empty()) throw algebra_error("A-infinity table: operation with no inputs (curvature) is not supported");
        for (size_t i = 0; i + 1 < w.len(); ++i)
            if (a.q.gens[w.g[i]].dst != a.q.gens[w.g[i + 1]].src)
                throw algebra_error("A-infinity table: inputs not composable in " + word_str(a.q, w));
        int want = word_degree(a.q, w) + 2 - (int)w.len();
        for (auto& [o, c] : out.terms()) {
            if (o.len() > 1) throw algebra_error("A-infinity table: output is not a basis element");
            if (word_degree(a.q, o) != want)
                throw algebra_error("A-infinity table: m_" + std::to_string(w.len()) + "(" + word_str(a.q, w, ",") +
                                    ") has wrong degree");
            if (word_src(a.q, o) != word_src(a.q, w) || word_dst(a.q, o) != word_dst(a.q, w))
                throw algebra_error("A-infinity table: endpoint mismatch in m(" + word_str(a.q, w, ",") + ")");
        }
    }
}

void validate_coalg(const AInfCoalg& c) {
    for (auto& [g, v] : c.delta) {
        const auto& s = c.q.gens[g];
        for (auto& [w, k] : v.terms()) {
            if (w.empty()) throw algebra_error("coalgebra table: Delta_0 term for " + s.name + " is not supported");
            int want = s.degree + 2 - (int)w.len();
            if (word_degree(c.q, w) != want)
                throw algebra_error("coalgebra table: Delta_" + std::to_string(w.len()) + "(" + s.name +
                                    ") has wrong degree");
            if (word_src(c.q, w) != s.src || word_dst(c.q, w) != s.dst)
                throw algebra_error("coalgebra table: endpoint mismatch in Delta(" + s.name + ")");
        }
    }
}

namespace {

// composable words of basis letters with length exactly n
void for_each_tuple(const Quiver& q, int n, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> cur;
    std::function<void()> rec = [&]() {
        if ((int)cur.size() == n) {
            fn(cur);
            return;
        }
        for (size_t g = 0; g < q.gens.size(); ++g) {
            if (!cur.empty() && q.gens[cur.back()].dst != q.gens[g].src) continue;
            cur.push_back((int)g);
            rec();
            cur.pop_back();
        }
    };
    rec();
}

std::string tuple_str(const Quiver& q, const std::vector<int>& t) {
    std::string s = "(";
    for (size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + q.gens[t[i]].name;
    return s + ")";
}

}  // namespace

CheckResult check_ainf(const AInfAlg& a, int max_arity) {
    CheckResult res;
    const Field f = a.f;
    for (auto& [w, out] : a.ops)
        if (w.empty()) {
            res.ok = false;
            res.witnesses.push_back({"m_0", "curvature term present"});
        }
    for (int d = 1; d <= max_arity; ++d) {
        for_each_tuple(a.q, d, [&](const std::vector<int>& t) {
            ++res.checked;
            Element total(f);
            // t is a_d ... a_1; a_k sits at index d-k
            for (int i = 1; i <= d; ++i)
                for (int j = 0; j + i <= d; ++j) {
                    int lo = d - j - i, hi = d - j;  // inner block indices [lo, hi)
                    std::vector<Word> inner;
                    for (int k = lo; k < hi; ++k) inner.push_back(Word::letter(t[k]));
                    Element mi = a.m(inner);
                    if (mi.is_zero()) continue;
                    long e = -j;
                    for (int k = hi; k < d; ++k) e += a.q.gens[t[k]].degree;
                    Scalar s = sgn(f, e);
                    for (auto& [ow, oc] : mi.terms()) {
                        std::vector<Word> outer;
                        for (int k = 0; k < lo; ++k) outer.push_back(Word::letter(t[k]));
                        outer.push_back(ow);
                        for (int k = hi; k < d; ++k) outer.push_back(Word::letter(t[k]));
                        total.add(a.m(outer), s * oc);
                    }
                }
            if (!total.is_zero()) {
                res.ok = false;
                res.witnesses.push_back({"A-infinity relation on " + tuple_str(a.q, t), elem_str(a.q, total)});
            }
        });
    }
    return res;
}

CheckResult check_coainf(const AInfCoalg& c, int max_arity) {
    CheckResult res;
    const Field f = c.f;
    for (size_t g = 0; g < c.q.gens.size(); ++g) {
        for (int d = 1; d <= max_arity; ++d) {
            ++res.checked;
            Element total(f);
            for (int i = 1; i <= d; ++i) {
                Element outer = c.delta_i((int)g, d - i + 1);
                for (auto& [w, k] : outer.terms()) {
                    int n = (int)w.len();  // = d-i+1; entries c_n ... c_1
                    for (int j = 0; j + i <= d; ++j) {
                        int pos = n - 1 - j;  // c_{j+1}
                        Element di = c.delta_i(w.g[pos], i);
                        if (di.is_zero()) continue;
                        long e = -j;
                        for (int p = pos + 1; p < n; ++p) e += c.q.gens[w.g[p]].degree;
                        for (auto& [iw, ik] : di.terms()) {
                            Word nw;
                            nw.g.assign(w.g.begin(), w.g.begin() + pos);
                            nw.g.insert(nw.g.end(), iw.g.begin(), iw.g.end());
                            nw.g.insert(nw.g.end(), w.g.begin() + pos + 1, w.g.end());
                            total.add(nw, k * ik * sgn(f, e));
                        }
                    }
                }
            }
            if (!total.is_zero()) {
                res.ok = false;
                res.witnesses.push_back({"co-A-infinity relation d=" + std::to_string(d) + " on " + c.q.gens[g].name,
                                         elem_str(c.q, total, "|")});
            }
        }
    }
    return res;
}

CheckResult check_d2_generators(const FreeDGA& a) {
    CheckResult res;
    for (size_t g = 0; g < a.q.gens.size(); ++g) {
        ++res.checked;
        auto dd = a.diff(a.diff(Element::word(a.f, Word::letter((int)g))));
        if (!dd.is_zero()) {
            res.ok = false;
            res.witnesses.push_back({"d^2(" + a.q.gens[g].name + ")", elem_str(a.q, dd)});
        }
    }
    return res;
}

static Quiver dual_quiver(const Quiver& q, const std::string& suffix) {
    Quiver d;
    d.ring = q.ring;
    GradedModule m;
    m.generators = q.gens;
    d.gens = dual_module(m, Side::Left, suffix).generators;
    return d;
}

AInfAlg dualize(const AInfCoalg& c, Side side, const std::string& suffix) {
    AInfAlg a;
    a.q = dual_quiver(c.q, suffix);
    a.f = c.f;
    a.side = side == Side::Left ? "left" : "right";
    for (auto& [g, v] : c.delta) {
        Scalar s = sgn(c.f, c.q.gens[g].degree);
        for (auto& [w, k] : v.terms()) {
            Word in;
            in.g.assign(w.g.rbegin(), w.g.rend());
            a.ops[in].add(Word::letter(g), s * k);
        }
    }
    for (auto it = a.ops.begin(); it != a.ops.end();)
        it = it->second.is_zero() ? a.ops.erase(it) : std::next(it);
    return a;
}

AInfCoalg dualize(const AInfAlg& a, Side side, const std::string& suffix) {
    AInfCoalg c;
    c.q = dual_quiver(a.q, suffix);
    c.f = a.f;
    c.side = side == Side::Left ? "left" : "right";
    for (auto& [in, out] : a.ops)
        for (auto& [b, k] : out.terms()) {
            if (b.empty()) throw algebra_error("dualize: operation with unit output has no reduced dual");
            Word w;
            w.g.assign(in.g.rbegin(), in.g.rend());
            int g = b.g[0];
            auto& slot = c.delta[g];
            if (slot.field() != c.f) slot = Element(c.f);
            slot.add(w, k * sgn(a.f, c.q.gens[g].degree));
        }
    return c;
}

AInfAlg to_field(const AInfAlg& a, Field f) {
    AInfAlg r = a;
    r.f = f;
    for (auto& [w, v] : r.ops) v = v.to_field(f);
    for (auto& [g, s] : r.augmentation) s = Scalar(f, s.to_mpq());
    return r;
}

AInfCoalg to_field(const AInfCoalg& c, Field f) {
    AInfCoalg r = c;
    r.f = f;
    for (auto& [g, v] : r.delta) v = v.to_field(f);
    return r;
}

FreeDGA to_field(const FreeDGA& a, Field f) {
    FreeDGA r = a;
    r.f = f;
    for (auto& [g, v] : r.d.images) v = v.to_field(f);
    for (auto& [g, s] : r.augmentation) s = Scalar(f, s.to_mpq());
    return r;
}

Scalar eval_aug(const Quiver& q, const AugMap& e, const Element& x) {
    const Field f = x.field();
    Scalar total(f);
    for (auto& [w, c] : x.terms()) {
        Scalar p = c;
        for (int g : w.g) {
            auto it = e.values.find(g);
            if (it == e.values.end() || q.gens[g].src != q.gens[g].dst) {
                p = Scalar(f);
                break;
            }
            p *= it->second;
        }
        total += p;
    }
    return total;
}

bool is_augmentation(const FreeDGA& a, const AugMap& e) {
    for (auto& [g, v] : e.values)
        if (!v.is_zero() && (a.q.gens[g].degree != 0 || a.q.gens[g].src != a.q.gens[g].dst)) return false;
    for (size_t g = 0; g < a.q.gens.size(); ++g) {
        if (a.q.gens[g].degree != -1) continue;
        auto it = a.d.images.find((int)g);
        if (it == a.d.images.end()) continue;
        if (!eval_aug(a.q, e, it->second).is_zero()) return false;
    }
    return true;
}

std::vector<AugMap> enumerate_augmentations(const FreeDGA& a0, Field f, size_t limit) {
    if (f.kind != Field::PrimeField) throw algebra_error("augmentation enumeration needs a prime field; over Q only verification is supported");
    FreeDGA a = to_field(a0, f);
    std::vector<int> loops;
    for (size_t g = 0; g < a.q.gens.size(); ++g)
        if (a.q.gens[g].degree == 0 && a.q.gens[g].src == a.q.gens[g].dst) loops.push_back((int)g);
    double total = 1;
    for (size_t i = 0; i < loops.size(); ++i) total *= (double)f.p;
    if (total > (double)limit) throw algebra_error("augmentation search space too large");
    std::vector<AugMap> out;
    std::vector<int64_t> val(loops.size(), 0);
    while (true) {
        AugMap e;
        for (size_t i = 0; i < loops.size(); ++i) e.values[loops[i]] = Scalar(f, (long)val[i]);
        if (is_augmentation(a, e)) out.push_back(e);
        size_t i = 0;
        while (i < val.size() && ++val[i] == f.p) val[i++] = 0;
        if (i == val.size()) break;
    }
    return out;
}

namespace {

SignRepair search(std::vector<SignEntry>& entries, int budget, const std::function<bool()>& ok_q,
                  bool mod2_ok) {
    SignRepair r;
    r.precondition = mod2_ok;
    if (!mod2_ok) {
        r.report = "relation fails mod 2; sign flips cannot repair it";
        return r;
    }
    if (ok_q()) {
        r.already_ok = r.found = true;
        r.report = "already consistent over Q";
        return r;
    }
    int n = (int)entries.size();
    for (int k = 1; k <= budget && k <= n; ++k) {
        std::vector<int> idx(k);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            for (int i : idx) entries[i].apply(true);
            ++r.tried;
            bool good = ok_q();
            for (int i : idx) entries[i].apply(false);
            if (good) {
                r.found = true;
                for (int i : idx) r.flips.push_back(entries[i].label);
                r.report = "repaired with " + std::to_string(k) + " flip(s)";
                return r;
            }
            int p = k - 1;
            while (p >= 0 && idx[p] == n - k + p) --p;
            if (p < 0) break;
            ++idx[p];
            for (int q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
        }
    }
    r.report = "exhausted: no assignment with at most " + std::to_string(budget) + " flip(s) among " +
               std::to_string(n) + " entries (" + std::to_string(r.tried) + " tried)";
    return r;
}

}  // namespace

SignRepair sign_repair(const AInfAlg& a0, int max_arity, int budget) {
    bool mod2 = check_ainf(to_field(a0, Field::GF(2)), max_arity).ok;
    AInfAlg a = to_field(a0, Field::Q());
    std::vector<SignEntry> entries;
    for (auto& [in, out] : a0.ops)
        for (auto& [w, c] : out.terms()) {
            Word key = in, o = w;
            std::string label = "m" + std::to_string(in.len()) + "(" + word_str(a.q, in, ",") + ")->" + word_str(a.q, w);
            entries.push_back({label, [&a, key, o](bool) {
                                   auto& e = a.ops[key];
                                   Scalar c = e.coeff(o);
                                   e.add(o, -c - c);
                               }});
        }
    return search(entries, budget, [&] { return check_ainf(a, max_arity).ok; }, mod2);
}

SignRepair sign_repair(const AInfCoalg& c0, int max_arity, int budget) {
    bool mod2 = check_coainf(to_field(c0, Field::GF(2)), max_arity).ok;
    AInfCoalg c = to_field(c0, Field::Q());
    std::vector<SignEntry> entries;
    for (auto& [g, v] : c0.delta)
        for (auto& [w, k] : v.terms()) {
            int gg = g;
            Word o = w;
            entries.push_back({"Delta(" + c.q.gens[g].name + ")->" + word_str(c.q, w, "|"), [&c, gg, o](bool) {
                                   auto& e = c.delta[gg];
                                   Scalar s = e.coeff(o);
                                   e.add(o, -s - s);
                               }});
        }
    return search(entries, budget, [&] { return check_coainf(c, max_arity).ok; }, mod2);
}

SignRepair sign_repair(const FreeDGA& a0, int budget) {
    bool mod2 = check_d2_generators(to_field(a0, Field::GF(2))).ok;
    FreeDGA a = to_field(a0, Field::Q());
    std::vector<SignEntry> entries;
    for (auto& [g, v] : a0.d.images)
        for (auto& [w, k] : v.terms()) {
            int gg = g;
            Word o = w;
            entries.push_back({"d(" + a.q.gens[g].name + ")->" + word_str(a.q, w), [&a, gg, o](bool) {
                                   auto& e = a.d.images[gg];
                                   Scalar s = e.coeff(o);
                                   e.add(o, -s - s);
                               }});
        }
    return search(entries, budget, [&] { return check_d2_generators(a).ok; }, mod2);
}

}  // namespace kk
